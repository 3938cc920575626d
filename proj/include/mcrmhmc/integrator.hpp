#pragma once

// Implicit generalized leapfrog: explicit half-kick on the position part of
// the Hamiltonian, implicit half-kick on the quadratic form (fixed point in
// p), implicit position update averaging G^{-1} at both endpoints (fixed
// point in x), explicit half-kick with the full gradient at the new
// position.  Fixed-point failure or any nonfinite value is a divergence,
// not an error; the trajectory is flagged and the caller rejects it.

#include <optional>
#include <span>
#include <vector>

#include "mcrmhmc/deriv.hpp"
#include "mcrmhmc/metric.hpp"
#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

struct StepConfig {
    double epsilon = 0.1;
    int max_fixed_point_iters = 50;
    double fp_tolerance = 1e-6;
    double jitter_fraction = 0.0;  // applied per trajectory by the caller

    void validate() const;
};

struct StepReport {
    bool converged = false;
    int iters_implicit_p = 0;
    int iters_implicit_x = 0;
    double delta_H = 0.0;
};

struct TrajectoryResult {
    std::vector<double> x;  // proposal position
    std::vector<double> p;  // proposal momentum
    double h0 = 0.0;
    double h1 = 0.0;
    double delta_h = 0.0;
    bool diverged = false;
    std::optional<int> pd_violation;     // 0-based index, when a prefix pivot failed
    std::vector<double> pivot_snapshot;  // pre-regularization pivots, last successful factorization
    long iters_p_total = 0;
    long iters_x_total = 0;
    int max_iters_p = 0;
    int max_iters_x = 0;
    int steps_done = 0;
};

class Integrator {
  public:
    Integrator(const TargetModel& model, const SymbolicPlan& plan);

    struct StepResult {
        std::vector<double> x;
        std::vector<double> p;
        MetricState ms;
        StepReport report;
        std::optional<int> pd_violation;
    };

    // One integrator step from a consistent MetricState.  On divergence the
    // returned state is unspecified apart from report.converged == false.
    StepResult leapfrog_step(const MetricState& ms, std::span<const double> p,
                             const StepConfig& cfg);

    // l sequential steps from (x0, p0); first divergence aborts.
    TrajectoryResult integrate_trajectory(std::span<const double> x0,
                                          std::span<const double> p0, int l,
                                          const StepConfig& cfg, std::span<const double> u,
                                          int k_prefix);

  private:
    bool step(const StepConfig& cfg, StepReport& rep, std::optional<int>& pd_violation);
    bool factor_at(std::span<const double> xc);  // double-path factorization into factors_d_
    void note_pivots(std::span<const double> pre);

    const TargetModel& model_;
    const SymbolicPlan& plan_;
    HamiltonianTape ht_, ht_next_;
    std::vector<double> x_, p_, g_, p_star_, p_hat_, p_prev_, a_half_, xc_, xn_, ginvp_;
    std::vector<double> avals_d_;
    CholFactors<double> factors_d_;
    FactorWorkspace<double> ws_d_;
    std::vector<double> last_pivots_;
    double h_cur_ = 0.0;
};

}  // namespace mcrmhmc
