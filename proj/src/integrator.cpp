#include "mcrmhmc/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "mcrmhmc/errors.hpp"

namespace mcrmhmc {

namespace {
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}
bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}
}  // namespace

void StepConfig::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("step size must be positive");
    if (!(fp_tolerance > 0.0)) throw ConfigError("fixed-point tolerance must be positive");
    if (jitter_fraction < 0.0 || jitter_fraction >= 1.0)
        throw ConfigError("jitter fraction must lie in [0, 1)");
    if (max_fixed_point_iters < 1) throw ConfigError("max_fixed_point_iters must be >= 1");
}

Integrator::Integrator(const TargetModel& model, const SymbolicPlan& plan)
    : model_(model), plan_(plan), ht_(model, plan), ht_next_(model, plan) {
    const int d = model.dim();
    x_.resize(d);
    p_.resize(d);
    g_.resize(d);
    p_star_.resize(d);
    p_hat_.resize(d);
    p_prev_.resize(d);
    a_half_.resize(d);
    xc_.resize(d);
    xn_.resize(d);
    ginvp_.resize(d);
    avals_d_.resize(model.hessian_pattern().nnz());
    last_pivots_.resize(d);
}

bool Integrator::factor_at(std::span<const double> xc) {
    model_.hessian_values(xc, avals_d_);
    if (!all_finite(avals_d_)) return false;
    factor_modified<double>(plan_, avals_d_, ht_.primal_factors().u,
                            ht_.primal_factors().k_prefix, factors_d_, ws_d_);
    note_pivots(factors_d_.pre_pivot);
    return true;
}

void Integrator::note_pivots(std::span<const double> pre) {
    std::copy(pre.begin(), pre.end(), last_pivots_.begin());
}

// One generalized-leapfrog step on (x_, p_); ht_ must be recorded at x_.
// Returns false on divergence.  On success ht_ is recorded at the new
// position with the new momentum's kinetic part in place.
bool Integrator::step(const StepConfig& cfg, StepReport& rep, std::optional<int>& pd_violation) {
    const int d = model_.dim();
    const double eps = cfg.epsilon;
    rep = StepReport{};

    // Explicit half-kick with the gradient of -log pi + 1/2 log|G|.
    if (!ht_.grad_potential_position(g_)) return false;
    for (int i = 0; i < d; ++i) p_star_[i] = p_[i] - 0.5 * eps * g_[i];
    if (!all_finite(p_star_)) return false;

    // Implicit half-kick on the quadratic form, fixed point from p_star.
    std::copy(p_star_.begin(), p_star_.end(), p_hat_.begin());
    bool converged = false;
    for (int it = 1; it <= cfg.max_fixed_point_iters; ++it) {
        ht_.kinetic(p_hat_);
        if (!ht_.grad_kinetic(g_)) return false;
        std::copy(p_hat_.begin(), p_hat_.end(), p_prev_.begin());
        for (int i = 0; i < d; ++i) p_hat_[i] = p_star_[i] - 0.5 * eps * g_[i];
        if (!all_finite(p_hat_)) return false;
        rep.iters_implicit_p = it;
        if (max_abs_diff(p_hat_, p_prev_) < cfg.fp_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) return false;

    // Implicit position update averaging G^{-1} at both endpoints.
    const auto& f0 = ht_.primal_factors();
    std::copy(p_hat_.begin(), p_hat_.end(), a_half_.begin());
    solve_unit_lower<double>(plan_, f0.l_values, a_half_);
    scale_by_diag<double>(f0.d_diag, a_half_);
    solve_unit_lower_transpose<double>(plan_, f0.l_values, a_half_);
    for (int i = 0; i < d; ++i) a_half_[i] *= 0.5 * eps;

    std::copy(x_.begin(), x_.end(), xc_.begin());
    converged = false;
    for (int it = 1; it <= cfg.max_fixed_point_iters; ++it) {
        if (it == 1) {
            // G^{-1}(x_hat_0) = G^{-1}(x), already factorized.
            for (int i = 0; i < d; ++i) xn_[i] = x_[i] + 2.0 * a_half_[i];
        } else {
            try {
                if (!factor_at(xc_)) return false;
            } catch (const PdPrefixError& e) {
                pd_violation = e.index;
                return false;
            }
            std::copy(p_hat_.begin(), p_hat_.end(), ginvp_.begin());
            solve_unit_lower<double>(plan_, factors_d_.l_values, ginvp_);
            scale_by_diag<double>(factors_d_.d_diag, ginvp_);
            solve_unit_lower_transpose<double>(plan_, factors_d_.l_values, ginvp_);
            for (int i = 0; i < d; ++i) xn_[i] = x_[i] + a_half_[i] + 0.5 * eps * ginvp_[i];
        }
        if (!all_finite(xn_)) return false;
        rep.iters_implicit_x = it;
        const double delta = max_abs_diff(xn_, xc_);
        std::copy(xn_.begin(), xn_.end(), xc_.begin());
        if (delta < cfg.fp_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) return false;

    // Explicit half-kick with the full Hamiltonian gradient at the new
    // position, momentum p_hat.
    try {
        ht_next_.record(xc_, f0.u, f0.k_prefix);
    } catch (const PdPrefixError& e) {
        pd_violation = e.index;
        return false;
    }
    if (!ht_next_.primal_finite()) return false;
    note_pivots(ht_next_.primal_factors().pre_pivot);
    ht_next_.kinetic(p_hat_);
    if (!ht_next_.grad_hamiltonian(g_)) return false;
    for (int i = 0; i < d; ++i) p_[i] = p_hat_[i] - 0.5 * eps * g_[i];
    if (!all_finite(p_)) return false;
    std::copy(xc_.begin(), xc_.end(), x_.begin());

    const double h_new = ht_next_.potential() + ht_next_.kinetic(p_);
    rep.delta_H = h_new - h_cur_;
    h_cur_ = h_new;
    rep.converged = true;
    std::swap(ht_, ht_next_);
    return true;
}

Integrator::StepResult Integrator::leapfrog_step(const MetricState& ms,
                                                 std::span<const double> p,
                                                 const StepConfig& cfg) {
    cfg.validate();
    StepResult r;
    std::copy(ms.x.begin(), ms.x.end(), x_.begin());
    std::copy(p.begin(), p.end(), p_.begin());
    ht_.record(ms.x, ms.factors.u, ms.factors.k_prefix);
    note_pivots(ht_.primal_factors().pre_pivot);
    h_cur_ = ht_.potential() + ht_.kinetic(p);
    const bool ok = step(cfg, r.report, r.pd_violation);
    r.x = x_;
    r.p = p_;
    if (ok) {
        r.ms.plan = &plan_;
        r.ms.x = x_;
        r.ms.hessian = model_.hessian_pattern();
        model_.hessian_values(x_, r.ms.hessian.values);
        r.ms.factors = ht_.primal_factors();
        r.ms.log_target = ht_.log_target();
        r.ms.log_det = ht_.log_det();
    }
    return r;
}

TrajectoryResult Integrator::integrate_trajectory(std::span<const double> x0,
                                                  std::span<const double> p0, int l,
                                                  const StepConfig& cfg,
                                                  std::span<const double> u, int k_prefix) {
    cfg.validate();
    if (l < 1) throw ConfigError("trajectory length must be >= 1");
    TrajectoryResult res;
    std::copy(x0.begin(), x0.end(), x_.begin());
    std::copy(p0.begin(), p0.end(), p_.begin());
    try {
        ht_.record(x_, u, k_prefix);
    } catch (const PdPrefixError& e) {
        res.diverged = true;
        res.pd_violation = e.index;
        res.pivot_snapshot = last_pivots_;
        return res;
    }
    if (!ht_.primal_finite()) {
        res.diverged = true;
        res.pivot_snapshot = last_pivots_;
        return res;
    }
    note_pivots(ht_.primal_factors().pre_pivot);
    res.h0 = ht_.potential() + ht_.kinetic(p0);
    h_cur_ = res.h0;

    StepReport rep;
    for (int s = 0; s < l; ++s) {
        std::optional<int> pd;
        const bool ok = step(cfg, rep, pd);
        res.iters_p_total += rep.iters_implicit_p;
        res.iters_x_total += rep.iters_implicit_x;
        res.max_iters_p = std::max(res.max_iters_p, rep.iters_implicit_p);
        res.max_iters_x = std::max(res.max_iters_x, rep.iters_implicit_x);
        if (!ok) {
            res.diverged = true;
            res.pd_violation = pd;
            res.pivot_snapshot = last_pivots_;
            return res;
        }
        ++res.steps_done;
    }
    res.x = x_;
    res.p = p_;
    res.h1 = h_cur_;
    res.delta_h = res.h1 - res.h0;
    res.pivot_snapshot = last_pivots_;
    return res;
}

}  // namespace mcrmhmc
