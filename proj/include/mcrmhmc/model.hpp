#pragma once

// Abstract target distribution: log-density kernel, sparse negative Hessian
// with a fixed pattern, positive-definite prefix size, and optional extras
// (analytic marginal CDFs, exact sampler).  Concrete models implement the
// kernel and Hessian entries once as templates; KernelModel instantiates
// them for both plain doubles and tape variables.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mcrmhmc/ad.hpp"
#include "mcrmhmc/rng.hpp"
#include "mcrmhmc/sparse.hpp"
#include "mcrmhmc/stats.hpp"

namespace mcrmhmc {

class TargetModel {
  public:
    virtual ~TargetModel() = default;

    virtual int dim() const = 0;
    virtual int pd_prefix_default() const = 0;
    virtual const SymSparse& hessian_pattern() const = 0;

    virtual double log_density(std::span<const double> x) const = 0;
    virtual ad::Var log_density_ad(std::span<const ad::Var> x) const = 0;

    // Negative Hessian entries -d2 log pi(x), written in pattern order.
    virtual void hessian_values(std::span<const double> x, std::span<double> out) const = 0;
    virtual void hessian_values_ad(std::span<const ad::Var> x, std::span<ad::Var> out) const = 0;

    // Gradient of log pi; the default reverse-sweeps the kernel.
    virtual void grad_log_density(std::span<const double> x, std::span<double> out) const;

    virtual bool in_domain(std::span<const double>) const { return true; }

    // Marginal CDF of coordinate i where known analytically.
    virtual std::optional<Cdf> marginal_cdf(int /*i*/) const { return std::nullopt; }

    // Exact draw from the target where the generative form allows it.
    virtual bool sample_exact(Rng&, std::span<double>) const { return false; }

    // Fallback chain initialization for models without an exact sampler.
    virtual void default_init(std::span<double> x) const;
};

template <class Derived>
class KernelModel : public TargetModel {
  public:
    double log_density(std::span<const double> x) const override {
        return static_cast<const Derived*>(this)->template kernel<double>(x);
    }
    ad::Var log_density_ad(std::span<const ad::Var> x) const override {
        return static_cast<const Derived*>(this)->template kernel<ad::Var>(x);
    }
    void hessian_values(std::span<const double> x, std::span<double> out) const override {
        static_cast<const Derived*>(this)->template neg_hessian<double>(x, out);
    }
    void hessian_values_ad(std::span<const ad::Var> x, std::span<ad::Var> out) const override {
        static_cast<const Derived*>(this)->template neg_hessian<ad::Var>(x, out);
    }
};

}  // namespace mcrmhmc
