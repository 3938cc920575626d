#pragma once

// Euler-discretized constant-elasticity-of-variance short-rate model
// observed with Gaussian noise:
//   y_t = x_t + sigma_y eta_t
//   x_t = x_{t-1} + Delta (alpha - beta x_{t-1}) + sigma_x sqrt(Delta) x_{t-1}^gamma eps_t
//   x_1 ~ N(y_1, 0.01^2)
// Coordinates: T latents first, then (alpha, beta, log sigma_x^2, gamma,
// log sigma_y^2).  Default prefix K = T + 2.

#include <cmath>
#include <limits>
#include <vector>

#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

class CevSsm : public KernelModel<CevSsm> {
  public:
    explicit CevSsm(std::vector<double> y, double delta = 1.0 / 252.0);

    int dim() const override { return t_len_ + 5; }
    int pd_prefix_default() const override { return t_len_ + 2; }
    const SymSparse& hessian_pattern() const override { return pattern_; }
    bool in_domain(std::span<const double> x) const override;
    void default_init(std::span<double> x) const override;

    int series_length() const { return t_len_; }
    double delta() const { return delta_; }
    const std::vector<double>& data() const { return y_; }

    struct Params {
        double alpha, beta, sigma_x, gamma, sigma_y;
    };
    // Simulates a data series from the generative model; x1 drawn from its prior
    // around x1_mean.
    static std::vector<double> simulate(Rng& rng, int t_len, const Params& p, double x1_mean,
                                        double delta = 1.0 / 252.0);

    template <class S>
    S kernel(std::span<const S> x) const {
        using std::exp;
        using std::log;
        const int T = t_len_;
        const S a = x[T], b = x[T + 1], w = x[T + 2], gam = x[T + 3], v = x[T + 4];
        if (!(value_of(gam) > 0.0)) return S(-std::numeric_limits<double>::infinity());
        for (int t = 0; t + 1 < T; ++t)
            if (!(value_of(x[t]) > 0.0)) return S(-std::numeric_limits<double>::infinity());

        const S e_obs = exp(-v);
        S lp = S(0.0);
        for (int t = 0; t < T; ++t) {
            const S z = y_[t] - x[t];
            lp = lp - 0.5 * v - 0.5 * z * z * e_obs - 0.5 * kLog2Pi;
        }
        {
            const S r = x[0] - y_[0];
            lp = lp - 0.5 * r * r / 1.0e-4 - 0.5 * (kLog2Pi + std::log(1.0e-4));
        }
        const double log_delta = std::log(delta_);
        for (int t = 1; t < T; ++t) {
            const S xp = x[t - 1];
            const S s = log(xp);
            const S lv = log_delta + w + 2.0 * gam * s;
            const S r = x[t] - xp - delta_ * (a - b * xp);
            lp = lp - 0.5 * lv - 0.5 * r * r * exp(-lv) - 0.5 * kLog2Pi;
        }
        // alpha ~ N(0, 100/Delta^2), beta ~ N(1/Delta, 100/Delta^2); flat on
        // w, v; uniform(0, inf) on gamma.
        const double prec = delta_ * delta_ / 100.0;
        lp = lp - 0.5 * a * a * prec - 0.5 * (b - 1.0 / delta_) * (b - 1.0 / delta_) * prec -
             (kLog2Pi + std::log(100.0 / (delta_ * delta_)));
        return lp;
    }

    template <class S>
    void neg_hessian(std::span<const S> x, std::span<S> out) const {
        using std::exp;
        using std::log;
        const int T = t_len_;
        const S a = x[T], b = x[T + 1], w = x[T + 2], gam = x[T + 3], v = x[T + 4];
        const S e_obs = exp(-v);
        const S delta_coef = 1.0 - delta_ * b;  // d mean / d x_{t-1}
        const double log_delta = std::log(delta_);
        const auto& cp = pattern_.col_ptr;

        // Per-column slot layout: diag, subdiag (except the last latent),
        // then the five parameter rows.
        auto base = [&](int t) { return cp[t]; };
        auto param_base = [&](int t) { return cp[t] + (t + 1 < T ? 2 : 1); };

        // Observation terms, x_1 prior, zero-fill of the accumulated slots.
        for (int t = 0; t < T; ++t) {
            const S z = y_[t] - x[t];
            out[base(t)] = (t == 0) ? e_obs + 1.0e4 : e_obs;
            const int pb = param_base(t);
            out[pb] = S(0.0);
            out[pb + 1] = S(0.0);
            out[pb + 2] = S(0.0);
            out[pb + 3] = S(0.0);
            out[pb + 4] = z * e_obs;
        }
        const int na = 0, nb = 1, nw = 2, ng = 3, nv = 4;
        S par[5][5];
        for (auto& row : par)
            for (auto& e : row) e = S(0.0);
        for (int t = 0; t < T; ++t) {
            const S z = y_[t] - x[t];
            par[nv][nv] = par[nv][nv] + 0.5 * z * z * e_obs;
        }

        // One pass over transitions; each touches columns t-1 and t.
        for (int t = 1; t < T; ++t) {
            const S xp = x[t - 1];
            const S s = log(xp);
            const S iv = exp(-(log_delta + w + 2.0 * gam * s));
            const S r = x[t] - xp - delta_ * (a - b * xp);
            const S riv = r * iv;
            const S riv_x = riv / xp;
            const S div_ = delta_ * iv;

            // current coordinate x_t
            out[base(t)] = out[base(t)] + iv;
            const int pc = param_base(t);
            out[pc] = out[pc] - div_;
            out[pc + 1] = out[pc + 1] + xp * div_;
            out[pc + 2] = out[pc + 2] - riv;
            out[pc + 3] = out[pc + 3] - 2.0 * s * riv;

            // previous coordinate x_{t-1}
            out[base(t - 1)] = out[base(t - 1)] - gam / (xp * xp) + delta_coef * delta_coef * iv +
                               4.0 * gam * delta_coef * riv_x +
                               (2.0 * gam + 1.0) * gam * r * riv_x / xp;
            out[base(t - 1) + 1] = -(delta_coef * iv + 2.0 * gam * riv_x);  // (t, t-1)
            const int pp = param_base(t - 1);
            out[pp] = out[pp] + div_ * delta_coef + 2.0 * gam * delta_ * riv_x;
            out[pp + 1] = out[pp + 1] - delta_ * (xp * delta_coef * iv - riv + 2.0 * gam * riv);
            out[pp + 2] = out[pp + 2] + riv * delta_coef + gam * r * riv_x;
            out[pp + 3] = out[pp + 3] + 1.0 / xp + 2.0 * s * delta_coef * riv - r * riv_x +
                          2.0 * gam * s * r * riv_x;

            // parameter block
            par[na][na] = par[na][na] + delta_ * div_;
            par[nb][na] = par[nb][na] - delta_ * xp * div_;
            par[nw][na] = par[nw][na] + delta_ * riv;
            par[ng][na] = par[ng][na] + 2.0 * s * delta_ * riv;
            par[nb][nb] = par[nb][nb] + delta_ * xp * xp * div_;
            par[nw][nb] = par[nw][nb] - delta_ * xp * riv;
            par[ng][nb] = par[ng][nb] - 2.0 * s * delta_ * xp * riv;
            par[nw][nw] = par[nw][nw] + 0.5 * r * riv;
            par[ng][nw] = par[ng][nw] + s * r * riv;
            par[ng][ng] = par[ng][ng] + 2.0 * s * s * r * riv;
        }
        const double prec = delta_ * delta_ / 100.0;
        par[na][na] = par[na][na] + prec;
        par[nb][nb] = par[nb][nb] + prec;
        int q = cp[T];
        for (int cj = 0; cj < 5; ++cj)
            for (int ri = cj; ri < 5; ++ri) out[q++] = par[ri][cj];
    }

  private:
    static constexpr double kLog2Pi = 1.8378770664093454836;

    int t_len_;
    double delta_;
    std::vector<double> y_;
    SymSparse pattern_;
};

}  // namespace mcrmhmc
