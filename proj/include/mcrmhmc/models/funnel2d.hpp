#pragma once

// Bivariate funnel: x1 | x2 ~ N(0, exp(x2)), x2 ~ N(0, 9).
// log pi = -x1^2/(2 exp(x2)) - x2/2 - x2^2/18.

#include <cmath>

#include "mcrmhmc/model.hpp"

namespace mcrmhmc {

class Funnel2d : public KernelModel<Funnel2d> {
  public:
    Funnel2d();

    int dim() const override { return 2; }
    int pd_prefix_default() const override { return 1; }
    const SymSparse& hessian_pattern() const override { return pattern_; }
    std::optional<Cdf> marginal_cdf(int i) const override;
    bool sample_exact(Rng& rng, std::span<double> out) const override;

    template <class S>
    S kernel(std::span<const S> x) const {
        using std::exp;
        return -0.5 * x[0] * x[0] * exp(-x[1]) - 0.5 * x[1] - x[1] * x[1] / 18.0;
    }

    template <class S>
    void neg_hessian(std::span<const S> x, std::span<S> out) const {
        using std::exp;
        const S e = exp(-x[1]);
        out[0] = e;                                 // (1,1)
        out[1] = -x[0] * e;                         // (2,1)
        out[2] = 0.5 * x[0] * x[0] * e + 1.0 / 9.0; // (2,2)
    }

  private:
    SymSparse pattern_;
};

}  // namespace mcrmhmc
