#include "mcrmhmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mcrmhmc/errors.hpp"
#include "mcrmhmc/metric.hpp"

namespace mcrmhmc {

double ess_geyer(std::span<const double> chain) {
    const int n = static_cast<int>(chain.size());
    if (n < 10) throw DegenerateChainError("chain too short for ESS");
    const auto [lo, hi] = std::minmax_element(chain.begin(), chain.end());
    if (*lo == *hi) throw DegenerateChainError("zero sample variance");
    double mean = 0.0;
    for (double v : chain) mean += v;
    mean /= n;
    auto autocov = [&](int k) {
        double acc = 0.0;
        for (int t = 0; t + k < n; ++t) acc += (chain[t] - mean) * (chain[t + k] - mean);
        return acc / n;
    };
    const double c0 = autocov(0);
    if (!(c0 > 0.0)) throw DegenerateChainError("zero sample variance");

    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int m = 0; 2 * m < n - 1; ++m) {
        double gamma = autocov(2 * m) + (2 * m + 1 < n ? autocov(2 * m + 1) : 0.0);
        if (gamma <= 0.0) break;
        gamma = std::min(gamma, prev);  // initial monotone sequence
        prev = gamma;
        sum += gamma;
    }
    const double iat = std::max(2.0 * sum / c0 - 1.0, 1e-12);
    return std::min(static_cast<double>(n), n / iat);
}

double ks_critical(double alpha) { return std::sqrt(-0.5 * std::log(0.5 * alpha)); }

KsResult ks_statistic(std::vector<double> sample, const Cdf& cdf) {
    std::sort(sample.begin(), sample.end());
    const int n = static_cast<int>(sample.size());
    KsResult r;
    for (int i = 0; i < n; ++i) {
        const double f = cdf(sample[i]);
        r.d_n = std::max(r.d_n, (i + 1.0) / n - f);
        r.d_n = std::max(r.d_n, f - static_cast<double>(i) / n);
    }
    r.threshold_1pct = ks_critical(0.01) / std::sqrt(static_cast<double>(n));
    r.reject_at_1pct = r.d_n > r.threshold_1pct;
    return r;
}

std::vector<double> probit_transform(std::span<const double> sample, const Cdf& cdf) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double p = cdf(sample[i]);
        p = std::min(std::max(p, 1e-300), 1.0 - 1e-16);
        out[i] = normal_quantile(p);
    }
    return out;
}

EssReport ess_report(const ChainRecord& rec) {
    EssReport rep;
    rep.ess.resize(rec.dim);
    std::vector<double> col(rec.n());
    for (int j = 0; j < rec.dim; ++j) {
        for (int t = 0; t < rec.n(); ++t) col[t] = rec.draws[static_cast<std::size_t>(t) * rec.dim + j];
        rep.ess[j] = ess_geyer(col);
    }
    rep.min_index = static_cast<int>(std::min_element(rep.ess.begin(), rep.ess.end()) -
                                     rep.ess.begin());
    rep.min_ess = rep.ess[rep.min_index];
    rep.ess_per_sec_min = rec.cpu_seconds > 0.0 ? rep.min_ess / rec.cpu_seconds : 0.0;
    return rep;
}

void write_diagnostics_csv(std::ostream& os, const TargetModel& model, const ChainRecord& rec) {
    os << "coordinate,ess,ess_per_sec,ks_D,ks_reject\n";
    std::vector<double> col(rec.n());
    char buf[160];
    for (int j = 0; j < rec.dim; ++j) {
        for (int t = 0; t < rec.n(); ++t) col[t] = rec.draws[static_cast<std::size_t>(t) * rec.dim + j];
        const double ess = ess_geyer(col);
        const double eps_sec = rec.cpu_seconds > 0.0 ? ess / rec.cpu_seconds : 0.0;
        if (auto cdf = model.marginal_cdf(j)) {
            const KsResult ks = ks_statistic(col, *cdf);
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", j + 1, ess, eps_sec,
                          ks.d_n, ks.reject_at_1pct ? 1 : 0);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,,\n", j + 1, ess, eps_sec);
        }
        os << buf;
    }
}

namespace {
// Proposal-mean prediction x0 + (eps^2/2)[G^{-1} grad log pi + Lambda], with
// Lambda_i = sum_j d/dx_j G^{-1}_{ij} by central differences.
std::vector<double> one_step_mean_prediction(const TargetModel& model, const SymbolicPlan& plan,
                                             std::span<const double> x0,
                                             std::span<const double> u, int k_prefix,
                                             double epsilon) {
    const int d = model.dim();
    auto ginv_matrix = [&](std::span<const double> x) {
        MetricState m2 = build_metric(model, x, u, k_prefix, plan);
        std::vector<double> g(static_cast<std::size_t>(d) * d);
        std::vector<double> e(d, 0.0), col(d);
        for (int k = 0; k < d; ++k) {
            e[k] = 1.0;
            m2.apply_inverse(e, col);
            e[k] = 0.0;
            for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i) * d + k] = col[i];
        }
        return g;
    };
    std::vector<double> lambda(d, 0.0);
    std::vector<double> xp(x0.begin(), x0.end());
    for (int j = 0; j < d; ++j) {
        const double h = 1e-5 * std::max(1.0, std::fabs(x0[j]));
        xp[j] = x0[j] + h;
        const auto gp = ginv_matrix(xp);
        xp[j] = x0[j] - h;
        const auto gm = ginv_matrix(xp);
        xp[j] = x0[j];
        for (int i = 0; i < d; ++i)
            lambda[i] += (gp[static_cast<std::size_t>(i) * d + j] -
                          gm[static_cast<std::size_t>(i) * d + j]) /
                         (2.0 * h);
    }
    MetricState ms = build_metric(model, x0, u, k_prefix, plan);
    std::vector<double> grad(d), ginv_grad(d);
    model.grad_log_density(x0, grad);
    ms.apply_inverse(grad, ginv_grad);
    std::vector<double> pred(d);
    for (int i = 0; i < d; ++i)
        pred[i] = x0[i] + 0.5 * epsilon * epsilon * (ginv_grad[i] + lambda[i]);
    return pred;
}
}  // namespace

OneStepMomentReport one_step_moment_check(const TargetModel& model, const SymbolicPlan& plan,
                                          std::span<const double> x0, std::span<const double> u,
                                          int k_prefix, double epsilon, int n_draws,
                                          std::uint64_t seed) {
    const int d = model.dim();
    MetricState ms = build_metric(model, x0, u, k_prefix, plan);
    const auto pred = one_step_mean_prediction(model, plan, x0, u, k_prefix, epsilon);
    std::vector<double> g0(static_cast<std::size_t>(d) * d);
    {
        std::vector<double> e(d, 0.0), col(d);
        for (int k = 0; k < d; ++k) {
            e[k] = 1.0;
            ms.apply_inverse(e, col);
            e[k] = 0.0;
            for (int i = 0; i < d; ++i) g0[static_cast<std::size_t>(i) * d + k] = col[i];
        }
    }

    // Monte Carlo over single leapfrog steps.
    Integrator integ(model, plan);
    StepConfig cfg;
    cfg.epsilon = epsilon;
    Rng rng(seed);
    std::vector<double> p(d);
    std::vector<double> mean(d, 0.0);
    std::vector<double> m2(static_cast<std::size_t>(d) * d, 0.0);
    OneStepMomentReport rep;
    long kept = 0;
    for (int it = 0; it < n_draws; ++it) {
        ms.sample_momentum(rng, p);
        auto sr = integ.leapfrog_step(ms, p, cfg);
        if (!sr.report.converged) {
            ++rep.divergent_steps;
            continue;
        }
        ++kept;
        for (int i = 0; i < d; ++i) {
            const double di = sr.x[i] - mean[i];
            mean[i] += di / kept;
            for (int j = 0; j <= i; ++j)
                m2[static_cast<std::size_t>(i) * d + j] += di * (sr.x[j] - mean[j]);
        }
    }
    std::vector<double> cov(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            const double c = m2[static_cast<std::size_t>(i) * d + j] / (kept - 1);
            cov[static_cast<std::size_t>(i) * d + j] = c;
            cov[static_cast<std::size_t>(j) * d + i] = c;
        }

    const double allowance = 10.0 * epsilon * epsilon * epsilon * epsilon;
    rep.mean_ok = true;
    for (int i = 0; i < d; ++i) {
        const double se = std::sqrt(cov[static_cast<std::size_t>(i) * d + i] / kept);
        const double resid = std::fabs(mean[i] - pred[i]);
        rep.mean_residual_norm = std::max(rep.mean_residual_norm, resid);
        if (resid > 3.0 * se + allowance) rep.mean_ok = false;
    }
    rep.cov_ok = true;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double cii = cov[static_cast<std::size_t>(i) * d + i];
            const double cjj = cov[static_cast<std::size_t>(j) * d + j];
            const double cij = cov[static_cast<std::size_t>(i) * d + j];
            const double se = std::sqrt((cii * cjj + cij * cij) / kept);
            const double target = epsilon * epsilon * g0[static_cast<std::size_t>(i) * d + j];
            if (std::fabs(cij - target) > 3.0 * se + allowance) rep.cov_ok = false;
        }
    return rep;
}

double one_step_mean_residual(const TargetModel& model, const SymbolicPlan& plan,
                              std::span<const double> x0, std::span<const double> u, int k_prefix,
                              double epsilon, int n_pairs, std::uint64_t seed) {
    const int d = model.dim();
    MetricState ms = build_metric(model, x0, u, k_prefix, plan);
    const auto pred = one_step_mean_prediction(model, plan, x0, u, k_prefix, epsilon);
    Integrator integ(model, plan);
    StepConfig cfg;
    cfg.epsilon = epsilon;
    cfg.fp_tolerance = 1e-10;
    cfg.max_fixed_point_iters = 200;
    Rng rng(seed);
    std::vector<double> p(d), mean(d, 0.0);
    long kept = 0;
    for (int it = 0; it < n_pairs; ++it) {
        ms.sample_momentum(rng, p);
        for (int sgn = 0; sgn < 2; ++sgn) {
            auto sr = integ.leapfrog_step(ms, p, cfg);
            if (sr.report.converged) {
                ++kept;
                for (int i = 0; i < d; ++i) mean[i] += sr.x[i];
            }
            for (int i = 0; i < d; ++i) p[i] = -p[i];
        }
    }
    double resid = 0.0;
    for (int i = 0; i < d; ++i) resid = std::max(resid, std::fabs(mean[i] / kept - pred[i]));
    return resid;
}

}  // namespace mcrmhmc
