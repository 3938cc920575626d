#include "mcrmhmc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcrmhmc/errors.hpp"

namespace mcrmhmc {

void write_draws_csv(const std::string& path, const ChainRecord& rec) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    char buf[40];
    for (int t = 0; t < rec.n(); ++t) {
        const auto row = rec.row(t);
        for (int j = 0; j < rec.dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            os << buf << (j + 1 < rec.dim ? "," : "\n");
        }
    }
}

SeriesData read_series_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open data file: " + path);
    SeriesData out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string field, last;
        while (std::getline(ss, field, ',')) last = field;
        if (last.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(last.c_str(), &end);
        if (end == last.c_str()) {
            if (lineno == 1) continue;  // header
            throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: " + last);
        }
        out.values.push_back(v);
    }
    if (out.values.empty()) throw ConfigError(path + ": no observations found");
    out.first_observation = out.values.front();
    return out;
}

}  // namespace mcrmhmc
