#include "mcrmhmc/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace mcrmhmc {

void SymSparse::validate_structure() const {
    if (dim <= 0) throw StructureError("dimension must be positive");
    if (col_ptr.size() != static_cast<std::size_t>(dim) + 1)
        throw StructureError("col_ptr has wrong length");
    if (col_ptr.front() != 0 || col_ptr.back() != nnz())
        throw StructureError("col_ptr endpoints inconsistent with nnz");
    if (values.size() != row_idx.size()) throw StructureError("values length mismatch");
    for (int j = 0; j < dim; ++j) {
        if (col_ptr[j] > col_ptr[j + 1]) throw StructureError("col_ptr not nondecreasing");
        if (col_ptr[j] == col_ptr[j + 1] || row_idx[col_ptr[j]] != j)
            throw StructureError("missing structural diagonal in column " + std::to_string(j + 1));
        for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
            if (row_idx[p] < j || row_idx[p] >= dim)
                throw StructureError("row index outside lower triangle");
            if (p > col_ptr[j] && row_idx[p] <= row_idx[p - 1])
                throw StructureError("row indices not strictly increasing");
        }
    }
}

void SymSparse::multiply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int j = 0; j < dim; ++j) {
        for (int p = col_ptr[j]; p < col_ptr[j + 1]; ++p) {
            const int i = row_idx[p];
            y[i] += values[p] * x[j];
            if (i != j) y[j] += values[p] * x[i];
        }
    }
}

SymSparse SymSparse::from_pattern(int dim, const std::vector<std::vector<int>>& cols) {
    SymSparse a;
    a.dim = dim;
    a.col_ptr.assign(dim + 1, 0);
    for (int j = 0; j < dim; ++j) a.col_ptr[j + 1] = a.col_ptr[j] + static_cast<int>(cols[j].size());
    a.row_idx.reserve(a.col_ptr[dim]);
    for (const auto& c : cols) a.row_idx.insert(a.row_idx.end(), c.begin(), c.end());
    a.values.assign(a.row_idx.size(), 0.0);
    a.validate_structure();
    return a;
}

void dump_coordinate(std::ostream& os, const SymSparse& a) {
    char buf[64];
    for (int j = 0; j < a.dim; ++j) {
        for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", a.row_idx[p] + 1, j + 1, a.values[p]);
            os << buf;
        }
    }
}

SymbolicPlan analyze(const SymSparse& pattern) {
    pattern.validate_structure();
    const int d = pattern.dim;
    SymbolicPlan plan;
    plan.dim = d;

    // Row-wise view of the lower triangle (equivalently the upper triangle
    // in column-major form): for each row k, the columns j <= k with a
    // stored entry, ascending, plus the source position in values.
    plan.at_ptr.assign(d + 1, 0);
    for (int idx : pattern.row_idx) ++plan.at_ptr[idx + 1];
    for (int k = 0; k < d; ++k) plan.at_ptr[k + 1] += plan.at_ptr[k];
    plan.at_col.resize(pattern.nnz());
    plan.at_map.resize(pattern.nnz());
    {
        std::vector<int> fill(plan.at_ptr.begin(), plan.at_ptr.end() - 1);
        for (int j = 0; j < d; ++j) {
            for (int p = pattern.col_ptr[j]; p < pattern.col_ptr[j + 1]; ++p) {
                const int k = pattern.row_idx[p];
                plan.at_col[fill[k]] = j;
                plan.at_map[fill[k]] = p;
                ++fill[k];
            }
        }
    }

    // Elimination tree with path compression.
    plan.etree.assign(d, -1);
    std::vector<int> ancestor(d, -1);
    for (int k = 0; k < d; ++k) {
        for (int p = plan.at_ptr[k]; p < plan.at_ptr[k + 1]; ++p) {
            int i = plan.at_col[p];
            while (i != -1 && i < k) {
                const int next = ancestor[i];
                ancestor[i] = k;
                if (next == -1) plan.etree[i] = k;
                i = next;
            }
        }
    }

    // Pattern of each row of L via traversal of the elimination tree
    // (ereach), stored ascending; ascending index order is topological
    // because parents have larger indices than their children.
    plan.rp_ptr.assign(d + 1, 0);
    std::vector<std::vector<int>> rows(d);
    std::vector<int> mark(d, -1);
    for (int k = 0; k < d; ++k) {
        mark[k] = k;
        auto& rk = rows[k];
        for (int p = plan.at_ptr[k]; p < plan.at_ptr[k + 1]; ++p) {
            for (int i = plan.at_col[p]; mark[i] != k; i = plan.etree[i]) {
                rk.push_back(i);
                mark[i] = k;
            }
        }
        std::sort(rk.begin(), rk.end());
        plan.rp_ptr[k + 1] = plan.rp_ptr[k] + static_cast<int>(rk.size());
    }

    // Column pointers of L from per-column counts, then slot assignment by
    // ascending row so each column of L ends up with sorted row indices.
    plan.l_col_ptr.assign(d + 1, 0);
    for (int k = 0; k < d; ++k)
        for (int j : rows[k]) ++plan.l_col_ptr[j + 1];
    for (int j = 0; j < d; ++j) plan.l_col_ptr[j + 1] += plan.l_col_ptr[j];
    plan.l_row_idx.resize(plan.l_col_ptr[d]);
    plan.rp_col.resize(plan.rp_ptr[d]);
    plan.rp_slot.resize(plan.rp_ptr[d]);
    {
        std::vector<int> fill(plan.l_col_ptr.begin(), plan.l_col_ptr.end() - 1);
        for (int k = 0; k < d; ++k) {
            int q = plan.rp_ptr[k];
            for (int j : rows[k]) {
                const int slot = fill[j]++;
                plan.l_row_idx[slot] = k;
                plan.rp_col[q] = j;
                plan.rp_slot[q] = slot;
                ++q;
            }
        }
    }
    return plan;
}

}  // namespace mcrmhmc
