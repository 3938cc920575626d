#pragma once

// Chain-quality diagnostics: Geyer initial-monotone-sequence effective
// sample size, Kolmogorov-Smirnov checks against analytic marginals, probit
// transforms, and the single-step proposal moment check.

#include <iosfwd>
#include <span>
#include <vector>

#include "mcrmhmc/model.hpp"
#include "mcrmhmc/sampler.hpp"
#include "mcrmhmc/stats.hpp"

namespace mcrmhmc {

// ESS from the initial monotone sequence estimator: paired autocovariances
// Gamma_m = c_{2m} + c_{2m+1}, truncated at the first nonpositive pair and
// forced nonincreasing; result capped at n.  Throws DegenerateChainError on
// zero sample variance.
double ess_geyer(std::span<const double> chain);

// Asymptotic Kolmogorov critical value c(alpha), rejection at D_n > c/sqrt(n).
double ks_critical(double alpha);

struct KsResult {
    double d_n = 0.0;
    double threshold_1pct = 0.0;
    bool reject_at_1pct = false;
};

KsResult ks_statistic(std::vector<double> sample, const Cdf& cdf);

// Phi^{-1}(F(x)) elementwise.
std::vector<double> probit_transform(std::span<const double> sample, const Cdf& cdf);

struct EssReport {
    std::vector<double> ess;  // per coordinate
    int min_index = 0;
    double min_ess = 0.0;
    double ess_per_sec_min = 0.0;
};

EssReport ess_report(const ChainRecord& rec);

// Per-coordinate CSV: coordinate, ess, ess_per_sec, ks_D, ks_reject (KS
// fields empty when the model has no analytic marginal for the coordinate).
void write_diagnostics_csv(std::ostream& os, const TargetModel& model, const ChainRecord& rec);

// Single-step proposal moments versus the position-dependent Langevin-type
// prediction: mean x0 + (eps^2/2)[G^{-1} grad log pi + Lambda] with
// Lambda_i = sum_j d/dx_j G^{-1}_{ij} by central differences, covariance
// eps^2 G^{-1}; both within 3 Monte Carlo standard errors plus a 10 eps^4
// allowance.
struct OneStepMomentReport {
    bool mean_ok = false;
    bool cov_ok = false;
    double mean_residual_norm = 0.0;  // || MC mean - prediction ||_inf
    int divergent_steps = 0;
};

OneStepMomentReport one_step_moment_check(const TargetModel& model, const SymbolicPlan& plan,
                                          std::span<const double> x0, std::span<const double> u,
                                          int k_prefix, double epsilon, int n_draws,
                                          std::uint64_t seed);

// || MC mean of single-step proposals - predicted mean ||_inf, estimated with
// antithetic momentum pairs (the odd-in-p noise cancels, exposing the
// O(eps^4) bias for the halving check).
double one_step_mean_residual(const TargetModel& model, const SymbolicPlan& plan,
                              std::span<const double> x0, std::span<const double> u, int k_prefix,
                              double epsilon, int n_pairs, std::uint64_t seed);

}  // namespace mcrmhmc
