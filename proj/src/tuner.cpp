#include "mcrmhmc/tuner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mcrmhmc/errors.hpp"
#include "mcrmhmc/modchol.hpp"
#include "mcrmhmc/stats.hpp"

namespace mcrmhmc {

ReferenceSettings reference_settings(int d) {
    const double eps = 0.5 * std::pow(static_cast<double>(d), -0.25);
    return {eps, static_cast<int>(std::floor(1.5 / eps))};
}

double acceptance_asymptote(double epsilon, int d) {
    return 2.0 - 2.0 * normal_cdf(epsilon * epsilon * std::sqrt(static_cast<double>(d)) / 8.0);
}

Tuner::Tuner(std::vector<double> u0, int k0) : u_(std::move(u0)), k_(k0) {}

int Tuner::on_divergence(std::span<const double> pivot_snapshot, int iteration) {
    const int d = static_cast<int>(u_.size());
    if (k_ >= d) throw UnrecoverableDivergenceError();
    int best = -1;
    double best_sens = -1.0;
    for (int j = k_; j < d; ++j) {
        const double sens = sabs_inv_sensitivity(pivot_snapshot[j], u_[j]);
        if (sens > best_sens) {
            best_sens = sens;
            best = j;
        }
    }
    const double old = u_[best];
    u_[best] *= M_E;
    events_.push_back({iteration, false, best, old, u_[best]});
    return best;
}

void Tuner::on_pd_violation(int index, bool warmup, int iteration) {
    if (!warmup) throw RestartRequiredError(index);
    events_.push_back({iteration, true, index, static_cast<double>(k_),
                       static_cast<double>(index)});
    k_ = index;
}

void Tuner::write_log(std::ostream& os) const {
    char buf[128];
    for (const auto& e : events_) {
        if (e.is_k_change)
            std::snprintf(buf, sizeof(buf), "iter %d  K %d -> %d\n", e.iteration,
                          static_cast<int>(e.old_value), static_cast<int>(e.new_value));
        else
            std::snprintf(buf, sizeof(buf), "iter %d  u[%d] %.6g -> %.6g\n", e.iteration,
                          e.index + 1, e.old_value, e.new_value);
        os << buf;
    }
}

}  // namespace mcrmhmc
