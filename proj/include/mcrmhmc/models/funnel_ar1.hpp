#pragma once

// Funnel AR(1): zero-mean Gaussian AR(1) with autocorrelation 0.999 in the
// first d-1 coordinates, innovation precision exp(x_d) with an exponential
// prior on exp(x_d).  Latents first, log-precision last, K = d-1.

#include <cmath>
#include <vector>

#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

class FunnelAr1 : public KernelModel<FunnelAr1> {
  public:
    explicit FunnelAr1(int d);

    int dim() const override { return d_; }
    int pd_prefix_default() const override { return d_ - 1; }
    const SymSparse& hessian_pattern() const override { return pattern_; }
    std::optional<Cdf> marginal_cdf(int i) const override;
    bool sample_exact(Rng& rng, std::span<double> out) const override;
    void grad_log_density(std::span<const double> x, std::span<double> out) const override;

    static constexpr double kPhi = 0.999;
    static constexpr double kC = 1.0 - kPhi * kPhi;  // stationary precision factor
    // exp(x_d) ~ gamma(1, 0.1) read as scale 0.1 (mean 0.1): with rate 10 the
    // latent marginals satisfy sqrt(0.1 (1 - 0.999^2)) x_i ~ t_2.
    static constexpr double kGammaRate = 10.0;

    template <class S>
    S kernel(std::span<const S> x) const {
        using std::exp;
        const int m = d_ - 1;
        const S g = exp(x[m]);
        S quad = kC * x[0] * x[0];
        for (int i = 1; i < m; ++i) {
            S r = x[i] - kPhi * x[i - 1];
            quad = quad + r * r;
        }
        return (0.5 * m + 1.0) * x[m] - 0.5 * g * quad - kGammaRate * g + 0.5 * std::log(kC) +
               std::log(kGammaRate) - 0.5 * m * kLog2Pi;
    }

    template <class S>
    void neg_hessian(std::span<const S> x, std::span<S> out) const {
        using std::exp;
        const int m = d_ - 1;
        const S g = exp(x[m]);
        int q = 0;
        S quad = kC * x[0] * x[0];
        for (int j = 0; j < m; ++j) {
            const double cjj = (j == 0) ? kC + kPhi * kPhi : (j == m - 1 ? 1.0 : 1.0 + kPhi * kPhi);
            out[q++] = g * cjj;
            if (j + 1 < m) out[q++] = -kPhi * g;
            // g (C z)_j
            S cz = cjj * x[j];
            if (j > 0) cz = cz - kPhi * x[j - 1];
            if (j + 1 < m) cz = cz - kPhi * x[j + 1];
            out[q++] = g * cz;
            if (j > 0) {
                S r = x[j] - kPhi * x[j - 1];
                quad = quad + r * r;
            }
        }
        out[q] = g * (0.5 * quad + kGammaRate);
    }

  private:
    static constexpr double kLog2Pi = 1.8378770664093454836;

    int d_;
    SymSparse pattern_;
};

}  // namespace mcrmhmc
