#pragma once

// RMHMC transition kernel and chain driver: resample momentum from
// N(0, G(x)), integrate a jittered trajectory of uniform random length,
// Metropolis-correct on the energy error.  Divergent trajectories are
// rejected and, during warmup, reported to the tuner.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcrmhmc/integrator.hpp"
#include "mcrmhmc/model.hpp"
#include "mcrmhmc/rng.hpp"
#include "mcrmhmc/tuner.hpp"

namespace mcrmhmc {

struct SamplerConfig {
    double epsilon = 0.1;
    double jitter_fraction = 0.15;
    int l_min = 1;
    int l_max = 1;
    int n_iterations = 0;
    int n_warmup = 0;
    std::uint64_t rng_seed = 1;
    std::vector<double> u;
    int k_prefix = 0;
    int max_fixed_point_iters = 50;
    double fp_tolerance = 1e-6;

    void validate(int dim) const;
};

struct ChainRecord {
    int dim = 0;
    std::vector<double> draws;  // row-major, n x dim
    std::vector<std::uint8_t> accepted;
    std::vector<double> delta_h;  // NaN for divergent proposals
    int divergences = 0;
    double acceptance_rate = 0.0;
    double cpu_seconds = 0.0;  // post-warmup sampling time
    double fp_iters_p_mean = 0.0;  // implicit-momentum fixed-point iterations per step
    double fp_iters_x_mean = 0.0;  // implicit-position fixed-point iterations per step

    int n() const { return static_cast<int>(accepted.size()); }
    std::span<const double> row(int t) const {
        return {draws.data() + static_cast<std::size_t>(t) * dim, static_cast<std::size_t>(dim)};
    }
};

struct TransitionResult {
    bool accepted = false;
    bool diverged = false;
    double delta_h = 0.0;
    std::optional<int> pd_violation;
    std::vector<double> pivot_snapshot;
    long iters_p = 0;
    long iters_x = 0;
    int steps = 0;
};

class McrmhmcChain {
  public:
    McrmhmcChain(const TargetModel& model, const SymbolicPlan& plan, SamplerConfig cfg);

    void set_state(std::span<const double> x);
    std::span<const double> state() const { return x_; }
    const SamplerConfig& config() const { return cfg_; }

    TransitionResult transition(Rng& rng);

    // n_warmup adapting iterations (tuner may be null: prefix violations then
    // abort the run), then n_iterations recorded ones.
    ChainRecord run(Rng& rng, Tuner* tuner = nullptr);

  private:
    const TargetModel& model_;
    const SymbolicPlan& plan_;
    SamplerConfig cfg_;
    Integrator integrator_;
    std::vector<double> x_;
};

// Convenience wrapper: initialize from the model's exact sampler when it has
// one (otherwise default_init), run warmup + sampling.
ChainRecord run_chain(const TargetModel& model, const SymbolicPlan& plan,
                      std::span<const double> x_init, const SamplerConfig& cfg, Rng& rng,
                      Tuner* tuner = nullptr);

}  // namespace mcrmhmc
