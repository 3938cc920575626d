#pragma once

// Reverse-mode differentiation of the full scalar pipeline
//   H(x, p) = -log pi(x) + 1/2 log|G(x)| + 1/2 p^T G(x)^{-1} p
// with respect to x at fixed p: the tape records the log-density kernel,
// the Hessian entry expressions, the modified Cholesky sweep, the
// log-determinant and the triangular solves.  The position part is recorded
// once per x; the momentum part is re-recorded per p on top of a mark, which
// is what the implicit momentum update iterates on.

#include <span>
#include <vector>

#include "mcrmhmc/ad.hpp"
#include "mcrmhmc/metric.hpp"
#include "mcrmhmc/model.hpp"
#include "mcrmhmc/modchol.hpp"

namespace mcrmhmc {

class HamiltonianTape {
  public:
    HamiltonianTape(const TargetModel& model, const SymbolicPlan& plan);

    // Records the position part at x.  Throws PdPrefixError on a prefix
    // violation; nonfinite primal values are reported by primal_finite().
    void record(std::span<const double> x, std::span<const double> u, int k_prefix);

    bool primal_finite() const;
    double log_target() const { return log_target_.v; }
    double log_det() const { return log_det_.v; }
    // -log pi + 1/2 log|G|
    double potential() const { return potential_.v; }

    // Records the momentum part for p and returns 1/2 p^T G^{-1} p.
    double kinetic(std::span<const double> p);
    // potential() + kinetic of the last recorded p
    double hamiltonian() const { return hamiltonian_.v; }

    // Reverse sweeps; all return false when any value or partial is
    // nonfinite (divergence signal).
    bool grad_log_target(std::span<double> out);
    bool grad_log_det(std::span<double> out);
    bool grad_potential_position(std::span<double> out);
    bool grad_kinetic(std::span<double> out);     // momentum part of last kinetic()
    bool grad_hamiltonian(std::span<double> out); // full nabla_x H at fixed p

    // Primal factor values (bitwise equal to the double instantiation).
    const CholFactors<double>& primal_factors() const { return primal_factors_; }

  private:
    const TargetModel* model_;
    const SymbolicPlan* plan_;
    ad::Tape tape_;
    std::vector<ad::Var> x_;
    std::vector<ad::Var> a_values_;
    std::vector<ad::Var> w_;
    CholFactors<ad::Var> factors_;
    FactorWorkspace<ad::Var> ws_;
    CholFactors<double> primal_factors_;
    ad::Var log_target_, log_det_, potential_, kinetic_, hamiltonian_;
    std::size_t mark_ = 0;
};

struct ValueGrad {
    double value = 0.0;
    std::vector<double> grad;
    bool ok = true;
};

// nabla_x H(x, p_fixed) together with the value; ms supplies x and the
// factorization parameters (u, K) used at x.
ValueGrad grad_potential(const TargetModel& model, const MetricState& ms,
                         std::span<const double> p_fixed);

// nabla_x log|G(x)|
ValueGrad grad_log_det(const TargetModel& model, const MetricState& ms);

// nabla_x [p^T G(x)^{-1} p]
ValueGrad grad_quadratic_form(const TargetModel& model, const MetricState& ms,
                              std::span<const double> p);

}  // namespace mcrmhmc
