#include "mcrmhmc/metric.hpp"

#include <cmath>

namespace mcrmhmc {

double MetricState::kinetic(std::span<const double> p) const {
    std::vector<double> w(p.begin(), p.end());
    return kinetic_energy<double>(*plan, factors, w);
}

double MetricState::hamiltonian(std::span<const double> p) const {
    return -log_target + 0.5 * log_det + kinetic(p);
}

void MetricState::apply_inverse(std::span<const double> v, std::span<double> out) const {
    std::copy(v.begin(), v.end(), out.begin());
    solve_unit_lower<double>(*plan, factors.l_values, out);
    scale_by_diag<double>(factors.d_diag, out);
    solve_unit_lower_transpose<double>(*plan, factors.l_values, out);
}

void MetricState::sample_momentum(Rng& rng, std::span<double> out) const {
    const int d = hessian.dim;
    std::vector<double> y(d);
    for (int j = 0; j < d; ++j) y[j] = std::sqrt(factors.d_diag[j]) * rng.normal();
    for (int j = 0; j < d; ++j) out[j] = y[j];
    for (int j = 0; j < d; ++j)
        for (int p = plan->l_col_ptr[j]; p < plan->l_col_ptr[j + 1]; ++p)
            out[plan->l_row_idx[p]] += factors.l_values[p] * y[j];
}

MetricState build_metric(const TargetModel& model, std::span<const double> x,
                         std::span<const double> u, int k_prefix, const SymbolicPlan& plan) {
    MetricState ms;
    ms.plan = &plan;
    ms.x.assign(x.begin(), x.end());
    ms.hessian = model.hessian_pattern();
    model.hessian_values(x, ms.hessian.values);
    FactorWorkspace<double> ws;
    factor_modified<double>(plan, ms.hessian.values, u, k_prefix, ms.factors, ws);
    ms.log_target = model.log_density(x);
    ms.log_det = ms.factors.log_det();
    return ms;
}

}  // namespace mcrmhmc
