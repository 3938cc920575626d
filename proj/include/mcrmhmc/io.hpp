#pragma once

#include <string>
#include <vector>

#include "mcrmhmc/sampler.hpp"

namespace mcrmhmc {

// One row per recorded iteration, d comma-separated columns, 17 significant
// digits.
void write_draws_csv(const std::string& path, const ChainRecord& rec);

struct SeriesData {
    std::vector<double> values;
    double first_observation = 0.0;
};

// Single-column or two-column (date, rate) CSV, header optional, rates in
// decimal units.
SeriesData read_series_csv(const std::string& path);

}  // namespace mcrmhmc
