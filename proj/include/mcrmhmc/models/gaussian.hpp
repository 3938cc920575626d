#pragma once

// d-dimensional standard Gaussian; constant identity metric, so the
// generalized leapfrog collapses to the conventional one.

#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

class StdGaussian : public KernelModel<StdGaussian> {
  public:
    explicit StdGaussian(int d) : d_(d) {
        std::vector<std::vector<int>> cols(d);
        for (int j = 0; j < d; ++j) cols[j] = {j};
        pattern_ = SymSparse::from_pattern(d, cols);
    }

    int dim() const override { return d_; }
    int pd_prefix_default() const override { return d_; }
    const SymSparse& hessian_pattern() const override { return pattern_; }

    std::optional<Cdf> marginal_cdf(int) const override {
        return Cdf([](double x) { return normal_cdf(x); });
    }

    bool sample_exact(Rng& rng, std::span<double> out) const override {
        rng.fill_normal(out);
        return true;
    }

    template <class S>
    S kernel(std::span<const S> x) const {
        S acc = x[0] * x[0];
        for (int i = 1; i < d_; ++i) acc = acc + x[i] * x[i];
        return -0.5 * acc;
    }

    template <class S>
    void neg_hessian(std::span<const S>, std::span<S> out) const {
        for (int i = 0; i < d_; ++i) out[i] = S(1.0);
    }

  private:
    int d_;
    SymSparse pattern_;
};

}  // namespace mcrmhmc
