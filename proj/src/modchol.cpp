#include "mcrmhmc/modchol.hpp"

#include <algorithm>

namespace mcrmhmc {

SymSparse scaled_factor(const CholFactors<double>& f) {
    const SymbolicPlan& plan = *f.plan;
    const int d = f.dim;
    SymSparse l;
    l.dim = d;
    l.col_ptr.assign(d + 1, 0);
    for (int j = 0; j < d; ++j)
        l.col_ptr[j + 1] = l.col_ptr[j] + 1 + (plan.l_col_ptr[j + 1] - plan.l_col_ptr[j]);
    l.row_idx.resize(l.col_ptr[d]);
    l.values.resize(l.col_ptr[d]);
    for (int j = 0; j < d; ++j) {
        int q = l.col_ptr[j];
        const double s = std::sqrt(f.d_diag[j]);
        l.row_idx[q] = j;
        l.values[q] = s;
        ++q;
        for (int p = plan.l_col_ptr[j]; p < plan.l_col_ptr[j + 1]; ++p, ++q) {
            l.row_idx[q] = plan.l_row_idx[p];
            l.values[q] = f.l_values[p] * s;
        }
    }
    return l;
}

std::vector<double> reconstruct_dense(const CholFactors<double>& f) {
    const SymbolicPlan& plan = *f.plan;
    const int d = f.dim;
    // Dense Ltilde with unit diagonal.
    std::vector<double> lt(static_cast<std::size_t>(d) * d, 0.0);
    for (int j = 0; j < d; ++j) {
        lt[static_cast<std::size_t>(j) * d + j] = 1.0;
        for (int p = plan.l_col_ptr[j]; p < plan.l_col_ptr[j + 1]; ++p)
            lt[static_cast<std::size_t>(plan.l_row_idx[p]) * d + j] = f.l_values[p];
    }
    std::vector<double> g(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            const int m = std::min(i, j);
            for (int k = 0; k <= m; ++k)
                acc += lt[static_cast<std::size_t>(i) * d + k] * f.d_diag[k] *
                       lt[static_cast<std::size_t>(j) * d + k];
            g[static_cast<std::size_t>(i) * d + j] = acc;
        }
    return g;
}

DenseCholFactors modified_cholesky_dense(std::span<const double> a_rowmajor, int dim,
                                         std::span<const double> u, int k_prefix) {
    const int d = dim;
    DenseCholFactors f;
    f.dim = d;
    f.k_prefix = k_prefix;
    f.ltilde.assign(static_cast<std::size_t>(d) * d, 0.0);
    f.d_diag.resize(d);
    f.j_diag.assign(d, 0.0);
    f.pre_pivot.resize(d);
    auto L = [&](int i, int j) -> double& { return f.ltilde[static_cast<std::size_t>(i) * d + j]; };
    auto A = [&](int i, int j) { return a_rowmajor[static_cast<std::size_t>(i) * d + j]; };

    for (int j = 0; j < d; ++j) L(j, j) = 1.0;
    for (int j = 0; j < d; ++j) f.d_diag[j] = A(j, j);
    for (int j = 0; j < d; ++j) {
        if (j > 0)
            for (int k = 0; k < j; ++k) L(j, k) /= f.d_diag[k];
        if (j < d - 1)
            for (int i = j + 1; i < d; ++i) L(i, j) = A(i, j);
        if (j > 0 && j < d - 1)
            for (int i = j + 1; i < d; ++i) {
                double acc = 0.0;
                for (int k = 0; k < j; ++k) acc += L(i, k) * L(j, k);
                L(i, j) -= acc;
            }
        f.pre_pivot[j] = f.d_diag[j];
        if (j >= k_prefix) {
            f.d_diag[j] = sabs(f.pre_pivot[j], u[j]);
            f.j_diag[j] = f.d_diag[j] - f.pre_pivot[j];
        } else if (f.d_diag[j] <= 0.0) {
            throw PdPrefixError(j);
        }
        if (j < d - 1)
            for (int k = j + 1; k < d; ++k) f.d_diag[k] -= L(k, j) * L(k, j) / f.d_diag[j];
    }
    return f;
}

}  // namespace mcrmhmc
