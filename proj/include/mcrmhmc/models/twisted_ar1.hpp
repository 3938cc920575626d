#pragma once

// Twisted Gaussian-mean AR(1): conditional on x_d, the first d-1 coordinates
// are a stationary AR(1) with autocorrelation 0.95, marginal sd 0.1 and mean
// x_d^2 - 1; x_d ~ N(0, 1).  Latents first, parameter last, K = d-1.

#include <cmath>
#include <vector>

#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

class TwistedAr1 : public KernelModel<TwistedAr1> {
  public:
    explicit TwistedAr1(int d);

    int dim() const override { return d_; }
    int pd_prefix_default() const override { return d_ - 1; }
    const SymSparse& hessian_pattern() const override { return pattern_; }
    std::optional<Cdf> marginal_cdf(int i) const override;
    bool sample_exact(Rng& rng, std::span<double> out) const override;
    void grad_log_density(std::span<const double> x, std::span<double> out) const override;

    static constexpr double kPhi = 0.95;
    static constexpr double kMarginalVar = 0.01;
    // innovation variance of the conditional AR(1)
    static constexpr double kInnovVar = (1.0 - kPhi * kPhi) * kMarginalVar;

    // Latent precision matrix pieces (constant in x), used by the Gibbs baseline.
    const std::vector<double>& q_diag() const { return q_diag_; }
    const std::vector<double>& q_one() const { return q_one_; }
    double s_one() const { return s_one_; }
    static constexpr double q_off() { return kQOff; }

    template <class S>
    S kernel(std::span<const S> x) const {
        using std::log;
        const int m = d_ - 1;
        const S theta = x[m];
        const S mean = theta * theta - 1.0;
        S lp = -0.5 * theta * theta - 0.5 * kLog2Pi;
        S r0 = x[0] - mean;
        lp = lp - 0.5 * r0 * r0 / kMarginalVar - 0.5 * (kLog2Pi + std::log(kMarginalVar));
        for (int i = 1; i < m; ++i) {
            S r = x[i] - mean - kPhi * (x[i - 1] - mean);
            lp = lp - 0.5 * r * r / kInnovVar - 0.5 * (kLog2Pi + std::log(kInnovVar));
        }
        return lp;
    }

    template <class S>
    void neg_hessian(std::span<const S> x, std::span<S> out) const {
        const int m = d_ - 1;
        const S theta = x[m];
        const S mean = theta * theta - 1.0;
        int q = 0;
        for (int j = 0; j < m; ++j) {
            out[q++] = S(q_diag_[j]);
            if (j + 1 < m) out[q++] = S(kQOff);
            out[q++] = -2.0 * theta * q_one_[j];
        }
        // 1 + 4 theta^2 1'Q1 - 2 1'Q(z - mean)
        S dot = q_one_[0] * (x[0] - mean);
        for (int j = 1; j < m; ++j) dot = dot + q_one_[j] * (x[j] - mean);
        out[q] = 1.0 + 4.0 * theta * theta * s_one_ - 2.0 * dot;
    }

  private:
    static constexpr double kLog2Pi = 1.8378770664093454836;
    static constexpr double kQOff = -kPhi / kInnovVar;

    int d_;
    SymSparse pattern_;
    std::vector<double> q_diag_;  // diagonal of the latent precision Q
    std::vector<double> q_one_;   // Q 1
    double s_one_ = 0.0;          // 1' Q 1
};

}  // namespace mcrmhmc
