#pragma once

// Position-dependent metric G_u(x) = Ltilde D Ltilde^T assembled from the
// model's negative Hessian via the modified Cholesky factorization, with
// log-determinant, G^{-1} solves and momentum sampling.

#include <span>
#include <vector>

#include "mcrmhmc/model.hpp"
#include "mcrmhmc/modchol.hpp"
#include "mcrmhmc/rng.hpp"
#include "mcrmhmc/sparse.hpp"

namespace mcrmhmc {

// Shared by the double (primal) and tape instantiations so that Hamiltonian
// values agree bitwise between the metric and deriv modules.  w enters
// holding p and leaves holding Ltilde^{-1} p.
template <class S>
S kinetic_energy(const SymbolicPlan& plan, const CholFactors<S>& f, std::span<S> w) {
    solve_unit_lower<S>(plan, f.l_values, w);
    S acc = w[0] * w[0] / f.d_diag[0];
    for (int j = 1; j < plan.dim; ++j) acc = acc + w[j] * w[j] / f.d_diag[j];
    return 0.5 * acc;
}

struct MetricState {
    std::vector<double> x;
    SymSparse hessian;            // the A = -hessian(log pi) that was factorized
    CholFactors<double> factors;
    double log_target = 0.0;
    double log_det = 0.0;         // sum_j log D_jj
    const SymbolicPlan* plan = nullptr;

    double kinetic(std::span<const double> p) const;
    double hamiltonian(std::span<const double> p) const;

    // out = G^{-1} v via the factor solves.
    void apply_inverse(std::span<const double> v, std::span<double> out) const;

    // p = L z with z iid standard normal, so p ~ N(0, G).
    void sample_momentum(Rng& rng, std::span<double> out) const;
};

MetricState build_metric(const TargetModel& model, std::span<const double> x,
                         std::span<const double> u, int k_prefix, const SymbolicPlan& plan);

}  // namespace mcrmhmc
