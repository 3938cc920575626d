#pragma once

// Minimal reverse-mode tape for scalar pipelines.  One tape per chain; the
// numeric kernels are templated on the scalar type so the same code runs
// with plain doubles (primal) and with Var (recording).  Var arithmetic
// computes its primal value with the same double operations in the same
// order, so primal values agree bitwise between the two instantiations.

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace mcrmhmc::ad {

class Tape;
Tape* active_tape();
void set_active_tape(Tape* t);

struct Var {
    double v = 0.0;
    std::int32_t i = -1;  // -1: constant, no adjoint flow

    Var() = default;
    Var(double c) : v(c) {}  // NOLINT: implicit constant lift is intended
    double value() const { return v; }
};

inline double value_of(Var x) { return x.v; }

class Tape {
  public:
    struct Node {
        std::int32_t a, b;
        double da, db;
    };

    void reserve(std::size_t n) {
        nodes_.reserve(n);
        vals_.reserve(n);
    }
    void reset() {
        nodes_.clear();
        vals_.clear();
    }
    std::size_t size() const { return nodes_.size(); }
    void rewind(std::size_t n) {
        nodes_.resize(n);
        vals_.resize(n);
    }
    double value(std::int32_t i) const { return vals_[i]; }

    Var input(double v) {
        return Var_from(push2(-1, 0.0, -1, 0.0, v), v);
    }

    std::int32_t push2(std::int32_t a, double da, std::int32_t b, double db, double v) {
        nodes_.push_back({a, b, da, db});
        vals_.push_back(v);
        return static_cast<std::int32_t>(nodes_.size()) - 1;
    }

    // Reverse sweep from the given output node; writes d(output)/d(input_i)
    // for the supplied input variables.  Returns false when any propagated
    // adjoint or primal value is nonfinite (divergence poisoning).
    bool gradient(Var output, std::span<const Var> inputs, std::span<double> out) {
        adj_.assign(nodes_.size(), 0.0);
        bool finite = std::isfinite(output.v);
        if (output.i >= 0) adj_[output.i] = 1.0;
        for (std::int32_t k = output.i; k >= 0; --k) {
            const double ak = adj_[k];
            if (ak == 0.0) continue;
            if (!std::isfinite(ak)) finite = false;
            const Node& n = nodes_[k];
            if (n.a >= 0) adj_[n.a] += n.da * ak;
            if (n.b >= 0) adj_[n.b] += n.db * ak;
        }
        for (std::size_t j = 0; j < inputs.size(); ++j) {
            out[j] = inputs[j].i >= 0 ? adj_[inputs[j].i] : 0.0;
            if (!std::isfinite(out[j])) finite = false;
        }
        return finite;
    }

  private:
    static Var Var_from(std::int32_t i, double v) {
        Var x;
        x.v = v;
        x.i = i;
        return x;
    }
    std::vector<Node> nodes_;
    std::vector<double> vals_;
    std::vector<double> adj_;
};

namespace detail {
inline Var make(double v, std::int32_t a, double da, std::int32_t b = -1, double db = 0.0) {
    Var r;
    r.v = v;
    if (a < 0 && b < 0) {
        r.i = -1;
        return r;
    }
    r.i = active_tape()->push2(a, da, b, db, v);
    return r;
}
}  // namespace detail

inline Var operator+(Var x, Var y) { return detail::make(x.v + y.v, x.i, 1.0, y.i, 1.0); }
inline Var operator-(Var x, Var y) { return detail::make(x.v - y.v, x.i, 1.0, y.i, -1.0); }
inline Var operator*(Var x, Var y) { return detail::make(x.v * y.v, x.i, y.v, y.i, x.v); }
inline Var operator/(Var x, Var y) {
    const double r = x.v / y.v;
    return detail::make(r, x.i, 1.0 / y.v, y.i, -r / y.v);
}
inline Var operator-(Var x) { return detail::make(-x.v, x.i, -1.0); }
inline Var operator+(Var x, double c) { return detail::make(x.v + c, x.i, 1.0); }
inline Var operator+(double c, Var x) { return detail::make(c + x.v, x.i, 1.0); }
inline Var operator-(Var x, double c) { return detail::make(x.v - c, x.i, 1.0); }
inline Var operator-(double c, Var x) { return detail::make(c - x.v, x.i, -1.0); }
inline Var operator*(Var x, double c) { return detail::make(x.v * c, x.i, c); }
inline Var operator*(double c, Var x) { return detail::make(c * x.v, x.i, c); }
inline Var operator/(Var x, double c) { return detail::make(x.v / c, x.i, 1.0 / c); }
inline Var operator/(double c, Var x) {
    const double r = c / x.v;
    return detail::make(r, x.i, -r / x.v);
}

inline Var exp(Var x) {
    const double e = std::exp(x.v);
    return detail::make(e, x.i, e);
}
inline Var log(Var x) { return detail::make(std::log(x.v), x.i, 1.0 / x.v); }
inline Var log1p(Var x) { return detail::make(std::log1p(x.v), x.i, 1.0 / (1.0 + x.v)); }
inline Var sqrt(Var x) {
    const double s = std::sqrt(x.v);
    return detail::make(s, x.i, 0.5 / s);
}
inline Var tanh(Var x) {
    const double t = std::tanh(x.v);
    return detail::make(t, x.i, 1.0 - t * t);
}
inline Var pow(Var x, double c) {
    const double p = std::pow(x.v, c);
    return detail::make(p, x.i, c * std::pow(x.v, c - 1.0));
}

}  // namespace mcrmhmc::ad
