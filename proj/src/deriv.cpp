#include "mcrmhmc/deriv.hpp"

#include <cmath>

namespace mcrmhmc {

namespace {
// Activates a tape for the current scope.
struct TapeScope {
    explicit TapeScope(ad::Tape* t) : prev(ad::active_tape()) { ad::set_active_tape(t); }
    ~TapeScope() { ad::set_active_tape(prev); }
    ad::Tape* prev;
};
}  // namespace

HamiltonianTape::HamiltonianTape(const TargetModel& model, const SymbolicPlan& plan)
    : model_(&model), plan_(&plan) {
    const auto& pat = model.hessian_pattern();
    a_values_.resize(pat.nnz());
    x_.resize(model.dim());
    w_.resize(model.dim());
}

void HamiltonianTape::record(std::span<const double> x, std::span<const double> u,
                             int k_prefix) {
    TapeScope scope(&tape_);
    tape_.reset();
    for (std::size_t i = 0; i < x.size(); ++i) x_[i] = tape_.input(x[i]);
    log_target_ = model_->log_density_ad(x_);
    model_->hessian_values_ad(x_, a_values_);
    factor_modified<ad::Var>(*plan_, a_values_, u, k_prefix, factors_, ws_);
    log_det_ = factors_.log_det();
    potential_ = -log_target_ + 0.5 * log_det_;
    mark_ = tape_.size();
    kinetic_ = ad::Var(0.0);
    hamiltonian_ = potential_;

    primal_factors_.dim = factors_.dim;
    primal_factors_.k_prefix = factors_.k_prefix;
    primal_factors_.plan = plan_;
    primal_factors_.u = factors_.u;
    auto copy_values = [](const std::vector<ad::Var>& src, std::vector<double>& dst) {
        dst.resize(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].v;
    };
    copy_values(factors_.l_values, primal_factors_.l_values);
    copy_values(factors_.d_diag, primal_factors_.d_diag);
    copy_values(factors_.j_diag, primal_factors_.j_diag);
    copy_values(factors_.pre_pivot, primal_factors_.pre_pivot);
}

bool HamiltonianTape::primal_finite() const { return std::isfinite(potential_.v); }

double HamiltonianTape::kinetic(std::span<const double> p) {
    TapeScope scope(&tape_);
    tape_.rewind(mark_);
    for (std::size_t i = 0; i < p.size(); ++i) w_[i] = ad::Var(p[i]);
    kinetic_ = kinetic_energy<ad::Var>(*plan_, factors_, w_);
    hamiltonian_ = potential_ + kinetic_;
    return kinetic_.v;
}

bool HamiltonianTape::grad_log_target(std::span<double> out) {
    return tape_.gradient(log_target_, x_, out);
}
bool HamiltonianTape::grad_log_det(std::span<double> out) {
    return tape_.gradient(log_det_, x_, out);
}
bool HamiltonianTape::grad_potential_position(std::span<double> out) {
    return tape_.gradient(potential_, x_, out);
}
bool HamiltonianTape::grad_kinetic(std::span<double> out) {
    return tape_.gradient(kinetic_, x_, out);
}
bool HamiltonianTape::grad_hamiltonian(std::span<double> out) {
    return tape_.gradient(hamiltonian_, x_, out);
}

ValueGrad grad_potential(const TargetModel& model, const MetricState& ms,
                         std::span<const double> p_fixed) {
    HamiltonianTape ht(model, *ms.plan);
    ht.record(ms.x, ms.factors.u, ms.factors.k_prefix);
    ht.kinetic(p_fixed);
    ValueGrad r;
    r.value = ht.hamiltonian();
    r.grad.resize(model.dim());
    r.ok = ht.grad_hamiltonian(r.grad) && ht.primal_finite();
    return r;
}

ValueGrad grad_log_det(const TargetModel& model, const MetricState& ms) {
    HamiltonianTape ht(model, *ms.plan);
    ht.record(ms.x, ms.factors.u, ms.factors.k_prefix);
    ValueGrad r;
    r.value = ht.log_det();
    r.grad.resize(model.dim());
    r.ok = ht.grad_log_det(r.grad);
    return r;
}

ValueGrad grad_quadratic_form(const TargetModel& model, const MetricState& ms,
                              std::span<const double> p) {
    HamiltonianTape ht(model, *ms.plan);
    ht.record(ms.x, ms.factors.u, ms.factors.k_prefix);
    ValueGrad r;
    r.value = 2.0 * ht.kinetic(p);
    r.grad.resize(model.dim());
    r.ok = ht.grad_kinetic(r.grad);
    for (double& g : r.grad) g *= 2.0;
    return r;
}

void TargetModel::grad_log_density(std::span<const double> x, std::span<double> out) const {
    ad::Tape tape;
    ad::set_active_tape(&tape);
    std::vector<ad::Var> xv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xv[i] = tape.input(x[i]);
    const ad::Var lp = log_density_ad(xv);
    tape.gradient(lp, xv, out);
    ad::set_active_tape(nullptr);
}

void TargetModel::default_init(std::span<double> x) const {
    for (double& v : x) v = 0.0;
}

}  // namespace mcrmhmc
