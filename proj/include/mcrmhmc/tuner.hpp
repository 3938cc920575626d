#pragma once

// Warm-up heuristics: reference step size and trajectory length, escalation
// of the regularization parameter most responsible for a divergence, and
// K-reduction on prefix pivot failures.

#include <iosfwd>
#include <span>
#include <vector>

namespace mcrmhmc {

struct ReferenceSettings {
    double epsilon;
    int l_mean;
};

// epsilon = 0.5 d^{-1/4}, E(l) = floor(1.5 / epsilon).
ReferenceSettings reference_settings(int d);

// Asymptotic acceptance-rate predictor 2 - 2 Phi(eps^2 sqrt(d) / 8) for
// proposals on a Gaussian target.
double acceptance_asymptote(double epsilon, int d);

struct TunerEvent {
    int iteration;
    bool is_k_change;
    int index;         // escalated u index (0-based) or violating index
    double old_value;  // u or K before
    double new_value;  // u or K after
};

class Tuner {
  public:
    Tuner(std::vector<double> u0, int k0);

    const std::vector<double>& u() const { return u_; }
    int k_prefix() const { return k_; }
    const std::vector<TunerEvent>& events() const { return events_; }

    // Escalates u_j by a factor e for the active index with the largest
    // |d/dz sabs(z; u_j)^{-1}| at the pre-regularization pivots; ties go to
    // the smallest index.  Returns the escalated index.  Throws
    // UnrecoverableDivergenceError when K = d.
    int on_divergence(std::span<const double> pivot_snapshot, int iteration);

    // K <- j during warmup (0-based violating index j, i.e. the 1-based
    // prefix shrinks to j - 1); post-warmup throws RestartRequiredError.
    void on_pd_violation(int index, bool warmup, int iteration);

    // One line per adaptation event.
    void write_log(std::ostream& os) const;

  private:
    std::vector<double> u_;
    int k_;
    std::vector<TunerEvent> events_;
};

}  // namespace mcrmhmc
