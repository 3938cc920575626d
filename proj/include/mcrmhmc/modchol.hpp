#pragma once

// Smooth modified Cholesky factorization Ltilde * diag(D) * Ltilde^T = A + J
// with a positive-definite K-prefix exemption and soft-absolute-value pivot
// regularization.  The sparse sweep is up-looking over the precomputed
// symbolic pattern; the dense version follows the textbook right-looking
// step order and serves as the independent test oracle.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcrmhmc/ad.hpp"
#include "mcrmhmc/errors.hpp"
#include "mcrmhmc/sparse.hpp"

namespace mcrmhmc {

inline constexpr double kLn2 = 0.69314718055994530942;

namespace detail {
inline void require_positive_u(double u) {
    if (!(u > 0.0)) throw std::domain_error("sabs: regularization parameter must be positive");
}
inline double sabs_value(double x, double u) {
    const double ax = std::fabs(x);
    return ax + (u / kLn2) * std::log1p(std::exp2(-2.0 * ax / u));
}
}  // namespace detail

// Smooth floor-u approximation to |x|; sabs(x;u) >= u and sabs(x;u) > |x|.
// Evaluated in overflow-safe form (the defining log-sum-exp overflows for
// |x|/u beyond ~700*ln2).
inline double sabs(double x, double u) {
    detail::require_positive_u(u);
    return detail::sabs_value(x, u);
}

inline double sabs_derivative(double x, double u) {
    detail::require_positive_u(u);
    return std::tanh(x * kLn2 / u);
}

// d/dz [sabs(z;u)]^{-1} in absolute value; the tuner's escalation sensitivity.
inline double sabs_inv_sensitivity(double z, double u) {
    const double s = sabs(z, u);
    return std::fabs(sabs_derivative(z, u)) / (s * s);
}

inline ad::Var sabs(ad::Var x, double u) {
    detail::require_positive_u(u);
    const double v = detail::sabs_value(x.v, u);
    if (x.i < 0) return ad::Var(v);
    ad::Var r(v);
    r.i = ad::active_tape()->push2(x.i, std::tanh(x.v * kLn2 / u), -1, 0.0, v);
    return r;
}

// Factorization output: unit-lower factor values (strictly-lower entries in
// plan order), finalized pivots D, implied diagonal shifts J, and the pivot
// values seen before step-4 regularization (the tuner keys off these).
template <class S>
struct CholFactors {
    int dim = 0;
    int k_prefix = 0;
    const SymbolicPlan* plan = nullptr;
    std::vector<S> l_values;
    std::vector<S> d_diag;
    std::vector<S> j_diag;
    std::vector<S> pre_pivot;
    std::vector<double> u;

    S log_det() const {
        using std::log;
        S acc = log(d_diag[0]);
        for (int j = 1; j < dim; ++j) acc = acc + log(d_diag[j]);
        return acc;
    }
};

template <class S>
struct FactorWorkspace {
    std::vector<S> y;
};

// Numeric sweep over the symbolic pattern.  a_values are the matrix entries
// in SymSparse order for the analyzed pattern.  Throws PdPrefixError when a
// pivot inside the exempt prefix is met nonpositive.
template <class S>
void factor_modified(const SymbolicPlan& plan, std::span<const S> a_values,
                     std::span<const double> u, int k_prefix, CholFactors<S>& out,
                     FactorWorkspace<S>& ws) {
    using std::log;
    const int d = plan.dim;
    out.dim = d;
    out.k_prefix = k_prefix;
    out.plan = &plan;
    out.l_values.resize(plan.l_nnz());
    out.d_diag.resize(d);
    out.j_diag.resize(d);
    out.pre_pivot.resize(d);
    out.u.assign(u.begin(), u.end());
    ws.y.assign(d, S(0.0));

    auto& y = ws.y;
    auto& lx = out.l_values;
    for (int k = 0; k < d; ++k) {
        for (int p = plan.at_ptr[k]; p < plan.at_ptr[k + 1]; ++p)
            y[plan.at_col[p]] = y[plan.at_col[p]] + a_values[plan.at_map[p]];
        S dk = y[k];
        y[k] = S(0.0);
        for (int p = plan.rp_ptr[k]; p < plan.rp_ptr[k + 1]; ++p) {
            const int j = plan.rp_col[p];
            const S yj = y[j];
            y[j] = S(0.0);
            for (int q = plan.l_col_ptr[j]; q < plan.rp_slot[p]; ++q)
                y[plan.l_row_idx[q]] = y[plan.l_row_idx[q]] - lx[q] * yj;
            const S lkj = yj / out.d_diag[j];
            dk = dk - lkj * yj;
            lx[plan.rp_slot[p]] = lkj;
        }
        out.pre_pivot[k] = dk;
        if (k >= k_prefix) {
            out.d_diag[k] = sabs(dk, u[k]);
            out.j_diag[k] = out.d_diag[k] - dk;
        } else {
            if (value_of(dk) <= 0.0) throw PdPrefixError(k);
            out.d_diag[k] = dk;
            out.j_diag[k] = S(0.0);
        }
    }
}

// Convenience wrapper for a SymSparse whose pattern was analyzed into plan.
inline CholFactors<double> modified_cholesky(const SymSparse& a, std::span<const double> u,
                                             int k_prefix, const SymbolicPlan& plan) {
    CholFactors<double> out;
    FactorWorkspace<double> ws;
    factor_modified<double>(plan, a.values, u, k_prefix, out, ws);
    return out;
}

// Materialize L = Ltilde * diag(sqrt(D)) including the diagonal, as SymSparse.
SymSparse scaled_factor(const CholFactors<double>& f);

// Reconstruct Ltilde * diag(D) * Ltilde^T as a dense row-major matrix (tests).
std::vector<double> reconstruct_dense(const CholFactors<double>& f);

// Dense reference implementation, literal right-looking step order.
struct DenseCholFactors {
    int dim = 0;
    int k_prefix = 0;
    std::vector<double> ltilde;  // dim*dim row-major, unit lower
    std::vector<double> d_diag;
    std::vector<double> j_diag;
    std::vector<double> pre_pivot;
};

DenseCholFactors modified_cholesky_dense(std::span<const double> a_rowmajor, int dim,
                                         std::span<const double> u, int k_prefix);

}  // namespace mcrmhmc
