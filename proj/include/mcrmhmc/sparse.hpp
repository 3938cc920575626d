#pragma once

// Lower-triangle compressed sparse column storage for symmetric matrices,
// symbolic Cholesky analysis (elimination tree, factor pattern), and the
// triangular solves the factorization and metric build on.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mcrmhmc/errors.hpp"

namespace mcrmhmc {

// Symmetric matrix, lower triangle only.  Row indices are strictly
// increasing within each column and every diagonal entry is structurally
// present (first entry of its column).
struct SymSparse {
    int dim = 0;
    std::vector<int> col_ptr;   // size dim + 1
    std::vector<int> row_idx;   // row >= col
    std::vector<double> values; // parallel to row_idx

    int nnz() const { return static_cast<int>(row_idx.size()); }

    // Throws StructureError when any invariant fails.
    void validate_structure() const;

    // y = A x using the symmetric completion of the stored lower triangle.
    void multiply(std::span<const double> x, std::span<double> y) const;

    // Builds a pattern-only matrix (all values zero) from per-column row lists.
    static SymSparse from_pattern(int dim, const std::vector<std::vector<int>>& cols);
};

// Coordinate-format text dump: "row col value", 1-based, 17 significant digits.
void dump_coordinate(std::ostream& os, const SymSparse& a);

// Everything the numeric sweep needs, precomputed once per sparsity pattern:
// the elimination tree, the factor pattern (strictly lower part of L), the
// per-row traversal order with destination slots, and a transpose map giving
// row-wise access to the stored lower triangle.
struct SymbolicPlan {
    int dim = 0;
    std::vector<int> etree;      // parent of j, or -1 for roots

    std::vector<int> l_col_ptr;  // size dim + 1, strictly-lower pattern of L
    std::vector<int> l_row_idx;  // rows ascending within each column

    std::vector<int> rp_ptr;     // size dim + 1: row k's pattern slice
    std::vector<int> rp_col;     // columns j < k of row k of L, ascending
    std::vector<int> rp_slot;    // slot of entry (k, j) in l_row_idx order

    std::vector<int> at_ptr;     // size dim + 1: row-wise view of A's lower triangle
    std::vector<int> at_col;     // column indices j <= k, ascending (diagonal last)
    std::vector<int> at_map;     // position of the entry in SymSparse::values

    std::size_t l_nnz() const { return l_row_idx.size(); }
    int workspace_size() const { return dim; }
};

// Symbolic Cholesky analysis of the pattern; deterministic for fixed input.
SymbolicPlan analyze(const SymSparse& pattern);

// x := Ltilde^{-1} x where Ltilde is unit lower with strictly-lower values
// lvals laid out per plan.l_col_ptr/l_row_idx.
template <class S>
void solve_unit_lower(const SymbolicPlan& plan, std::span<const S> lvals, std::span<S> x) {
    for (int j = 0; j < plan.dim; ++j) {
        const S xj = x[j];
        for (int p = plan.l_col_ptr[j]; p < plan.l_col_ptr[j + 1]; ++p)
            x[plan.l_row_idx[p]] = x[plan.l_row_idx[p]] - lvals[p] * xj;
    }
}

// x := Ltilde^{-T} x.
template <class S>
void solve_unit_lower_transpose(const SymbolicPlan& plan, std::span<const S> lvals,
                                std::span<S> x) {
    for (int j = plan.dim - 1; j >= 0; --j) {
        S acc = x[j];
        for (int p = plan.l_col_ptr[j]; p < plan.l_col_ptr[j + 1]; ++p)
            acc = acc - lvals[p] * x[plan.l_row_idx[p]];
        x[j] = acc;
    }
}

inline double value_of(double x) { return x; }

// x := diag(d)^{-1} x.  Throws SingularSolveError on a zero diagonal element.
template <class S>
void scale_by_diag(std::span<const S> d, std::span<S> x) {
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (value_of(d[j]) == 0.0)
            throw SingularSolveError("zero diagonal element at index " + std::to_string(j + 1));
        x[j] = x[j] / d[j];
    }
}

}  // namespace mcrmhmc
