#pragma once

#include <functional>

namespace mcrmhmc {

using Cdf = std::function<double(double)>;

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (Wichura's AS 241, double precision).
double normal_quantile(double p);

// CDF of the Student t distribution with 2 degrees of freedom (closed form).
double student_t2_cdf(double t);

}  // namespace mcrmhmc
