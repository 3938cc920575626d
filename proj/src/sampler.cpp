#include "mcrmhmc/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mcrmhmc/errors.hpp"
#include "mcrmhmc/metric.hpp"

namespace mcrmhmc {

void SamplerConfig::validate(int dim) const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (l_min < 1 || l_min > l_max) throw ConfigError("need 1 <= l_min <= l_max");
    if (n_iterations < 0 || n_warmup < 0) throw ConfigError("iteration counts must be >= 0");
    if (jitter_fraction < 0.0 || jitter_fraction >= 1.0)
        throw ConfigError("jitter must lie in [0, 1)");
    if (static_cast<int>(u.size()) != dim) throw ConfigError("u must have one entry per coordinate");
    if (k_prefix < 0 || k_prefix > dim) throw ConfigError("K must lie in [0, d]");
    for (int j = k_prefix; j < dim; ++j)
        if (!(u[j] > 0.0)) throw ConfigError("active u entries must be positive");
    if (!(fp_tolerance > 0.0)) throw ConfigError("fixed-point tolerance must be positive");
}

McrmhmcChain::McrmhmcChain(const TargetModel& model, const SymbolicPlan& plan, SamplerConfig cfg)
    : model_(model), plan_(plan), cfg_(std::move(cfg)), integrator_(model, plan),
      x_(model.dim(), 0.0) {
    cfg_.validate(model.dim());
}

void McrmhmcChain::set_state(std::span<const double> x) { x_.assign(x.begin(), x.end()); }

TransitionResult McrmhmcChain::transition(Rng& rng) {
    TransitionResult out;
    MetricState ms = build_metric(model_, x_, cfg_.u, cfg_.k_prefix, plan_);
    std::vector<double> p(model_.dim());
    ms.sample_momentum(rng, p);
    const int l = rng.uniform_int(cfg_.l_min, cfg_.l_max);
    StepConfig step;
    step.epsilon = cfg_.epsilon * (1.0 + cfg_.jitter_fraction * rng.uniform(-1.0, 1.0));
    step.max_fixed_point_iters = cfg_.max_fixed_point_iters;
    step.fp_tolerance = cfg_.fp_tolerance;

    TrajectoryResult traj = integrator_.integrate_trajectory(x_, p, l, step, cfg_.u, cfg_.k_prefix);
    out.iters_p = traj.iters_p_total;
    out.iters_x = traj.iters_x_total;
    out.steps = traj.steps_done;
    if (traj.diverged) {
        out.diverged = true;
        out.delta_h = std::numeric_limits<double>::quiet_NaN();
        out.pd_violation = traj.pd_violation;
        out.pivot_snapshot = std::move(traj.pivot_snapshot);
        return out;
    }
    out.delta_h = traj.delta_h;
    if (std::log(rng.uniform()) < -traj.delta_h) {
        out.accepted = true;
        x_ = std::move(traj.x);
    }
    return out;
}

ChainRecord McrmhmcChain::run(Rng& rng, Tuner* tuner) {
    const int d = model_.dim();
    for (int i = 0; i < cfg_.n_warmup; ++i) {
        TransitionResult tr = transition(rng);
        if (tr.pd_violation) {
            if (!tuner) throw RestartRequiredError(*tr.pd_violation);
            tuner->on_pd_violation(*tr.pd_violation, true, i);
            cfg_.k_prefix = tuner->k_prefix();
        } else if (tr.diverged && tuner) {
            tuner->on_divergence(tr.pivot_snapshot, i);
            cfg_.u = tuner->u();
        }
    }

    ChainRecord rec;
    rec.dim = d;
    rec.draws.reserve(static_cast<std::size_t>(cfg_.n_iterations) * d);
    rec.accepted.reserve(cfg_.n_iterations);
    rec.delta_h.reserve(cfg_.n_iterations);
    const auto t0 = std::chrono::steady_clock::now();
    long n_accept = 0, steps = 0, itp = 0, itx = 0;
    for (int t = 0; t < cfg_.n_iterations; ++t) {
        TransitionResult tr = transition(rng);
        if (tr.pd_violation) throw RestartRequiredError(*tr.pd_violation);
        if (tr.diverged) ++rec.divergences;
        steps += tr.steps;
        itp += tr.iters_p;
        itx += tr.iters_x;
        if (tr.accepted) ++n_accept;
        rec.draws.insert(rec.draws.end(), x_.begin(), x_.end());
        rec.accepted.push_back(tr.accepted ? 1 : 0);
        rec.delta_h.push_back(tr.delta_h);
    }
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.acceptance_rate =
        cfg_.n_iterations > 0 ? static_cast<double>(n_accept) / cfg_.n_iterations : 0.0;
    if (steps > 0) {
        rec.fp_iters_p_mean = static_cast<double>(itp) / steps;
        rec.fp_iters_x_mean = static_cast<double>(itx) / steps;
    }
    return rec;
}

ChainRecord run_chain(const TargetModel& model, const SymbolicPlan& plan,
                      std::span<const double> x_init, const SamplerConfig& cfg, Rng& rng,
                      Tuner* tuner) {
    McrmhmcChain chain(model, plan, cfg);
    chain.set_state(x_init);
    return chain.run(rng, tuner);
}

}  // namespace mcrmhmc
