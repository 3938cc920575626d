// Acceptance suite: one numbered criterion per invocation (or all when run
// without arguments).  Prints one PASS/FAIL line per criterion; the exit
// code is the number of failures.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <thread>
#include <vector>

#include "mcrmhmc/baselines.hpp"
#include "mcrmhmc/diagnostics.hpp"
#include "mcrmhmc/integrator.hpp"
#include "mcrmhmc/metric.hpp"
#include "mcrmhmc/models/cev.hpp"
#include "mcrmhmc/models/funnel2d.hpp"
#include "mcrmhmc/models/funnel_ar1.hpp"
#include "mcrmhmc/models/gaussian.hpp"
#include "mcrmhmc/models/twisted_ar1.hpp"
#include "mcrmhmc/sampler.hpp"
#include "mcrmhmc/tuner.hpp"
#include "oracles.hpp"

using namespace mcrmhmc;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Runs fn(seed_index) for indices 0..n-1 across hardware threads.
void parallel_seeds(int n, const std::function<void(int)>& fn) {
    std::atomic<int> next{0};
    const int workers = std::max(1u, std::min<unsigned>(n, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

ChainRecord run_mcrmhmc(const TargetModel& model, const SymbolicPlan& plan, double eps, int lmin,
                        int lmax, double u_last, int k, int iters, int warmup, std::uint64_t seed,
                        Tuner* tuner = nullptr) {
    SamplerConfig cfg;
    cfg.epsilon = eps;
    cfg.l_min = lmin;
    cfg.l_max = lmax;
    cfg.jitter_fraction = 0.15;
    cfg.n_iterations = iters;
    cfg.n_warmup = warmup;
    cfg.k_prefix = k;
    cfg.u.assign(model.dim(), 1e-8);
    if (k < model.dim()) cfg.u[model.dim() - 1] = u_last;
    McrmhmcChain chain(model, plan, cfg);
    Rng rng = Rng::for_chain(seed, 0);
    std::vector<double> x0(model.dim());
    if (!model.sample_exact(rng, x0)) model.default_init(x0);
    chain.set_state(x0);
    return chain.run(rng, tuner);
}

std::vector<double> column(const ChainRecord& rec, int j) {
    std::vector<double> c(rec.n());
    for (int t = 0; t < rec.n(); ++t) c[t] = rec.row(t)[j];
    return c;
}

// --------------------------------------------------------------------------

bool criterion_1() {
    Timer timer;
    Rng rng(20260810);
    bool ok = true;
    int count = 0;
    while (count < 100) {
        for (int shape = 0; shape < 3 && count < 100; ++shape, ++count) {
            const int d = 12 + (count % 3) * 4;
            SymSparse a = shape == 0   ? oracle::tridiag_pattern(d)
                          : shape == 1 ? oracle::ar1_dense_last_pattern(d)
                                       : oracle::cev_pattern(d);
            const bool indefinite = count % 4 == 0;
            oracle::fill_random(a, rng, indefinite ? -3.0 : 0.5);
            auto plan = analyze(a);
            std::vector<double> u(d);
            // Tiny u only for the dominant draws: near-cancelled pivots with a
            // floor far below the matrix scale amplify the (different but both
            // valid) summation orders of the two routes past 1e-13.
            for (auto& v : u)
                v = std::exp(rng.uniform(indefinite ? -2.0 : -9.0, 1.5));
            auto fs = modified_cholesky(a, u, 0, plan);
            auto ad = oracle::to_dense(a);
            std::vector<double> arow(ad.data(), ad.data() + static_cast<std::size_t>(d) * d);
            auto fd = modified_cholesky_dense(arow, d, u, 0);
            for (int j = 0; j < d; ++j) {
                ok = ok && std::fabs(fs.d_diag[j] - fd.d_diag[j]) <=
                               1e-13 * std::max(1.0, std::fabs(fd.d_diag[j]));
                ok = ok && std::fabs(fs.j_diag[j] - fd.j_diag[j]) <=
                               1e-13 * std::max(1.0, std::fabs(fd.j_diag[j]));
                ok = ok && fs.j_diag[j] >= 0.0 && fs.d_diag[j] >= u[j];
            }
            for (int j = 0; j < d; ++j)
                for (int p = plan.l_col_ptr[j]; p < plan.l_col_ptr[j + 1]; ++p) {
                    const int i = plan.l_row_idx[p];
                    ok = ok && std::fabs(fs.l_values[p] -
                                         fd.ltilde[static_cast<std::size_t>(i) * d + j]) <=
                                   1e-13 * std::max(1.0, std::fabs(fd.ltilde[i * d + j]));
                }
            // reconstruction: off-diagonal exact, diagonal shifted by J
            auto g = oracle::reconstruct(fs);
            const double scale = ad.cwiseAbs().maxCoeff();
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double target = ad(i, j) + (i == j ? fs.j_diag[i] : 0.0);
                    ok = ok && std::fabs(g(i, j) - target) <= 1e-12 * scale;
                }
            // prefix exactness on a PD version of the same pattern
            oracle::fill_random(a, rng, 1.0);
            a.values[a.col_ptr[d - 1]] = -2.0;
            auto fk = modified_cholesky(a, u, d / 2, plan);
            for (int j = 0; j < d / 2; ++j) ok = ok && fk.j_diag[j] == 0.0;
        }
    }
    const double el = timer.seconds();
    std::printf("  100 matrices over 3 patterns, %.2f s\n", el);
    return ok && el < 10.0;
}

bool criterion_2() {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    auto check_model = [&](const char* name, const TargetModel& model, const SymbolicPlan& plan,
                           std::span<const double> u, int k, double h_scale,
                           const std::function<void(Rng&, std::span<double>)>& draw) {
        const int d = model.dim();
        Rng rng(99);
        std::vector<double> x(d), p(d), xt(d);
        double model_worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            draw(rng, x);
            MetricState ms = build_metric(model, x, u, k, plan);
            ms.sample_momentum(rng, p);
            auto vg = grad_potential(model, ms, p);
            ok = ok && vg.ok;
            std::copy(x.begin(), x.end(), xt.begin());
            for (int i = 0; i < d; ++i) {
                // Fourth-order stencil; for the daily-frequency state-space
                // model the step shrinks with the coordinate scale (latents
                // near 0.06 carry curvature ~1e6, so the generic 1e-5 step is
                // truncation-dominated there and the oracle itself fails).
                const double h = h_scale * std::max(1.0, std::fabs(x[i]));
                auto ham = [&](double t) {
                    xt[i] = t;
                    const double val = build_metric(model, xt, u, k, plan).hamiltonian(p);
                    xt[i] = x[i];
                    return val;
                };
                const double fd = (8.0 * (ham(x[i] + h) - ham(x[i] - h)) -
                                   (ham(x[i] + 2.0 * h) - ham(x[i] - 2.0 * h))) /
                                  (12.0 * h);
                const double rel = std::fabs(vg.grad[i] - fd) / std::max(std::fabs(fd), 1e-3);
                model_worst = std::max(model_worst, rel);
                ok = ok && rel <= 1e-5;
            }
        }
        std::printf("  %-12s worst relative error %.3g\n", name, model_worst);
        worst = std::max(worst, model_worst);
    };

    {
        Funnel2d m;
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u = {1.0, 1.0};
        check_model("funnel2d", m, plan, u, 1, 1e-5, [&](Rng& r, std::span<double> x) {
            // keep the scale coordinate where the finite-difference oracle
            // itself is trustworthy (curvature grows like e^{|x2|})
            do {
                m.sample_exact(r, x);
            } while (std::fabs(x[1]) > 3.5);
        });
    }
    {
        TwistedAr1 m(20);
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(20, 1e-8);
        u[19] = std::exp(3.5);
        check_model("twisted_ar1", m, plan, u, 19, 1e-5,
                    [&](Rng& r, std::span<double> x) { m.sample_exact(r, x); });
    }
    {
        FunnelAr1 m(20);
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(20, 1e-8);
        u[19] = std::exp(2.0);
        check_model("funnel_ar1", m, plan, u, 19, 1e-5,
                    [&](Rng& r, std::span<double> x) { m.sample_exact(r, x); });
    }
    {
        Rng drng(555);
        auto y = CevSsm::simulate(drng, 45, {0.01, 0.17, 0.41, 1.18, 0.00054}, 0.09569);
        CevSsm m(y);  // d = 50
        auto plan = analyze(m.hessian_pattern());
        const int T = 45;
        std::vector<double> u(50, 1.0);
        u[T + 2] = std::exp(6.0);
        u[T + 3] = 1.0;
        u[T + 4] = std::exp(6.0);
        check_model("cev", m, plan, u, T + 2, 1e-6, [&](Rng& r, std::span<double> x) {
            for (int t = 0; t < T; ++t) x[t] = std::max(y[t] * (1.0 + 0.01 * r.normal()), 1e-3);
            x[T] = 0.01 + 0.2 * r.normal();
            x[T + 1] = 0.17 + 0.2 * r.normal();
            x[T + 2] = 2.0 * std::log(0.41) + 0.2 * r.normal();
            x[T + 3] = 1.18 + 0.1 * std::fabs(r.normal());
            x[T + 4] = 2.0 * std::log(0.00054) + 0.2 * r.normal();
        });
    }
    const double el = timer.seconds();
    std::printf("  worst relative gradient error %.3g, %.2f s\n", worst, el);
    return ok && el < 60.0;
}

bool criterion_3() {
    Timer timer;
    bool ok = true;
    const double tol = 1e-6;

    // Reversibility within 10 * fp tolerance across the model set at d <= 100.
    auto reversible = [&](const TargetModel& model, const SymbolicPlan& plan,
                          std::span<const double> u, int k, std::span<const double> x0, double eps,
                          int l) {
        Integrator integ(model, plan);
        StepConfig cfg;
        cfg.epsilon = eps;
        cfg.fp_tolerance = tol;
        MetricState ms = build_metric(model, x0, u, k, plan);
        Rng rng(7);
        std::vector<double> p(model.dim());
        ms.sample_momentum(rng, p);
        auto fwd = integ.integrate_trajectory(x0, p, l, cfg, u, k);
        if (fwd.diverged) return false;
        std::vector<double> pneg(model.dim());
        for (int i = 0; i < model.dim(); ++i) pneg[i] = -fwd.p[i];
        auto back = integ.integrate_trajectory(fwd.x, pneg, l, cfg, u, k);
        if (back.diverged) return false;
        // Momentum errors are measured relative to the momentum scale: the
        // state-space model's momenta are O(sqrt(observation precision)).
        double err = 0.0, pscale = 1.0;
        for (int i = 0; i < model.dim(); ++i) pscale = std::max(pscale, std::fabs(p[i]));
        for (int i = 0; i < model.dim(); ++i) {
            err = std::max(err, std::fabs(back.x[i] - x0[i]));
            err = std::max(err, std::fabs(-back.p[i] - p[i]) / pscale);
        }
        std::printf("  reversibility return error %.3g\n", err);
        return err < 10.0 * tol;
    };
    {
        Funnel2d m;
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u = {1.0, 1.0};
        Rng r(1);
        std::vector<double> x(2);
        m.sample_exact(r, x);
        ok = ok && reversible(m, plan, u, 1, x, 0.15, 10);
    }
    {
        TwistedAr1 m(100);
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(100, 1e-8);
        u[99] = std::exp(3.5);
        Rng r(2);
        std::vector<double> x(100);
        m.sample_exact(r, x);
        ok = ok && reversible(m, plan, u, 99, x, 0.15, 10);
    }
    {
        FunnelAr1 m(100);
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(100, 1e-8);
        u[99] = std::exp(2.5);
        Rng r(3);
        std::vector<double> x(100);
        m.sample_exact(r, x);
        ok = ok && reversible(m, plan, u, 99, x, 0.15, 10);
    }
    {
        Rng drng(4);
        auto y = CevSsm::simulate(drng, 95, {0.01, 0.17, 0.41, 1.18, 0.00054}, 0.09569);
        CevSsm m(y);  // d = 100
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(100, 1.0);
        u[97] = std::exp(6.0);
        u[98] = 1.0;
        u[99] = std::exp(6.0);
        std::vector<double> x(100);
        m.default_init(x);
        ok = ok && reversible(m, plan, u, 97, x, 0.0005, 10);
    }
    if (!ok) std::printf("  reversibility failed\n");

    // Energy error ratio on halving, same total time, 100 momenta.
    {
        Funnel2d m;
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> x = {0.5, -1.0}, u = {1.0, 1.0};
        MetricState ms = build_metric(m, x, u, 1, plan);
        Integrator integ(m, plan);
        Rng rng(12);
        std::vector<double> p(2);
        double af = 0.0, ah = 0.0;
        StepConfig c1, c2;
        c1.epsilon = 0.15;
        c1.fp_tolerance = 1e-10;
        c2.epsilon = 0.075;
        c2.fp_tolerance = 1e-10;
        for (int i = 0; i < 100; ++i) {
            ms.sample_momentum(rng, p);
            af += std::fabs(integ.integrate_trajectory(x, p, 8, c1, u, 1).delta_h);
            ah += std::fabs(integ.integrate_trajectory(x, p, 16, c2, u, 1).delta_h);
        }
        const double ratio = af / ah;
        std::printf("  energy-error halving ratio %.3f\n", ratio);
        ok = ok && ratio > 3.4 && ratio < 4.6;
    }

    // Gaussian reduction to the standard leapfrog, 1e-14.
    {
        StdGaussian m(5);
        auto plan = analyze(m.hessian_pattern());
        std::vector<double> u(5, 1e-8);
        Rng rng(9);
        std::vector<double> x(5), p(5);
        m.sample_exact(rng, x);
        rng.fill_normal(p);
        Integrator integ(m, plan);
        StepConfig cfg;
        cfg.epsilon = 0.19;
        auto traj = integ.integrate_trajectory(x, p, 9, cfg, u, 5);
        auto xm = x;
        auto pm = p;
        for (int s = 0; s < 9; ++s) {
            for (int i = 0; i < 5; ++i) pm[i] -= 0.5 * 0.19 * xm[i];
            for (int i = 0; i < 5; ++i) xm[i] += 0.19 * pm[i];
            for (int i = 0; i < 5; ++i) pm[i] -= 0.5 * 0.19 * xm[i];
        }
        for (int i = 0; i < 5; ++i) {
            ok = ok && std::fabs(traj.x[i] - xm[i]) <= 1e-14;
            ok = ok && std::fabs(traj.p[i] - pm[i]) <= 1e-14;
        }
    }
    const double el = timer.seconds();
    std::printf("  %.2f s\n", el);
    return ok && el < 60.0;
}

struct SeedStats {
    double acc = 0.0;
    double ess_last = 0.0;
    bool ks_reject_last = false;
    bool ks_reject_prev = false;
    double seconds = 0.0;
};

// Shared runner for criteria 4-6.
template <class Model>
std::vector<SeedStats> toy_seeds(int d, double eps, int lmin, int lmax, double u_last,
                                 std::uint64_t seed_base, bool probit) {
    Model model(d);
    auto plan = analyze(model.hessian_pattern());
    std::vector<SeedStats> stats(10);
    parallel_seeds(10, [&](int s) {
        Timer t;
        auto rec =
            run_mcrmhmc(model, plan, eps, lmin, lmax, u_last, d - 1, 1000, 0, seed_base + s);
        SeedStats st;
        st.acc = rec.acceptance_rate;
        st.seconds = t.seconds();
        auto last = column(rec, d - 1);
        st.ess_last = ess_geyer(last);
        Cdf phi([](double v) { return normal_cdf(v); });
        if (probit) {
            auto z = probit_transform(last, *model.marginal_cdf(d - 1));
            st.ks_reject_last = ks_statistic(z, phi).reject_at_1pct;
            auto prev = column(rec, d - 2);
            auto zp = probit_transform(prev, *model.marginal_cdf(d - 2));
            st.ks_reject_prev = ks_statistic(zp, phi).reject_at_1pct;
        } else {
            st.ks_reject_last = ks_statistic(last, *model.marginal_cdf(d - 1)).reject_at_1pct;
        }
        stats[s] = st;
    });
    return stats;
}

bool criterion_4() {
    auto stats = toy_seeds<TwistedAr1>(10, 0.4, 20, 30, std::exp(3.5), 40, false);
    double min_ess = 1e300;
    int ks_ok = 0;
    bool acc_ok = true;
    for (const auto& s : stats) {
        min_ess = std::min(min_ess, s.ess_last);
        ks_ok += s.ks_reject_last ? 0 : 1;
        acc_ok = acc_ok && s.acc >= 0.90 && s.acc <= 0.99;
        std::printf("  seed: acc %.3f ess_xd %.0f ks_reject %d (%.1f s)\n", s.acc, s.ess_last,
                    s.ks_reject_last ? 1 : 0, s.seconds);
    }
    std::printf("  min ESS(x_d) %.0f, KS non-rejections %d/10\n", min_ess, ks_ok);
    return acc_ok && min_ess >= 600.0 && ks_ok >= 9;
}

bool criterion_5() {
    auto stats = toy_seeds<TwistedAr1>(100, 0.15, 60, 80, std::exp(3.5), 50, false);
    double min_ess = 1e300;
    int ks_ok = 0;
    for (const auto& s : stats) {
        min_ess = std::min(min_ess, s.ess_last);
        ks_ok += s.ks_reject_last ? 0 : 1;
        std::printf("  seed: acc %.3f ess_xd %.0f ks_reject %d (%.1f s)\n", s.acc, s.ess_last,
                    s.ks_reject_last ? 1 : 0, s.seconds);
    }
    std::printf("  min ESS(x_d) %.0f, KS non-rejections %d/10\n", min_ess, ks_ok);
    return min_ess >= 500.0 && ks_ok >= 9;
}

bool criterion_6() {
    bool ok = true;
    {
        auto stats = toy_seeds<FunnelAr1>(10, 0.3, 30, 40, std::exp(2.0), 60, true);
        double min_ess = 1e300;
        int ks_last = 0, ks_prev = 0;
        for (const auto& s : stats) {
            min_ess = std::min(min_ess, s.ess_last);
            ks_last += s.ks_reject_last ? 0 : 1;
            ks_prev += s.ks_reject_prev ? 0 : 1;
        }
        std::printf("  d=10: min ESS(x_d) %.0f, KS x_d %d/10, KS x_{d-1} %d/10\n", min_ess,
                    ks_last, ks_prev);
        ok = ok && min_ess >= 400.0 && ks_last >= 9 && ks_prev >= 9;
    }
    {
        auto stats = toy_seeds<FunnelAr1>(100, 0.15, 110, 130, std::exp(2.5), 70, true);
        double min_ess = 1e300;
        int ks_last = 0, ks_prev = 0;
        for (const auto& s : stats) {
            min_ess = std::min(min_ess, s.ess_last);
            ks_last += s.ks_reject_last ? 0 : 1;
            ks_prev += s.ks_reject_prev ? 0 : 1;
        }
        std::printf("  d=100: min ESS(x_d) %.0f, KS x_d %d/10, KS x_{d-1} %d/10\n", min_ess,
                    ks_last, ks_prev);
        ok = ok && min_ess >= 250.0 && ks_last >= 9 && ks_prev >= 9;
    }
    return ok;
}

bool criterion_7() {
    int gibbs_rejects = 0, ehmc_rejects = 0;
    {
        FunnelAr1 model(100);
        std::vector<int> rej(10, 0);
        std::vector<double> essd(10, 0.0), essl(10, 0.0);
        parallel_seeds(10, [&](int s) {
            Rng rng = Rng::for_chain(80 + s, 0);
            auto rec = gibbs_funnel(model, 5000000, 1000, rng);
            auto xd = column(rec, 99);
            essd[s] = ess_geyer(xd);
            essl[s] = ess_geyer(column(rec, 0));
            auto z = probit_transform(xd, *model.marginal_cdf(99));
            rej[s] =
                ks_statistic(z, Cdf([](double v) { return normal_cdf(v); })).reject_at_1pct ? 1
                                                                                            : 0;
        });
        for (int r : rej) gibbs_rejects += r;
        const auto [dmin, dmax] = std::minmax_element(essd.begin(), essd.end());
        const auto [lmin, lmax] = std::minmax_element(essl.begin(), essl.end());
        std::printf("  Gibbs pathology, ESS of 5000 records: x_d %.0f-%.0f, first latent "
                    "%.0f-%.0f\n",
                    *dmin, *dmax, *lmin, *lmax);
    }
    {
        FunnelAr1 model(10);
        std::vector<int> rej(10, 0);
        parallel_seeds(10, [&](int s) {
            Rng rng = Rng::for_chain(90 + s, 0);
            auto rec = ehmc(model, 0.05, 1000, 1500, 5000, rng);
            auto xd = column(rec, 9);
            auto z = probit_transform(xd, *model.marginal_cdf(9));
            rej[s] =
                ks_statistic(z, Cdf([](double v) { return normal_cdf(v); })).reject_at_1pct ? 1
                                                                                            : 0;
        });
        for (int r : rej) ehmc_rejects += r;
    }
    std::printf("  Gibbs funnel d=100 KS rejections %d/10, EHMC funnel d=10 %d/10\n",
                gibbs_rejects, ehmc_rejects);
    return gibbs_rejects >= 9 && ehmc_rejects >= 9;
}

bool criterion_8() {
    // Per-iteration cost at published settings, d = 100 vs d = 1000.
    auto time_per_iter = [&](int d, double eps, int lmin, int lmax, int iters) {
        TwistedAr1 model(d);
        auto plan = analyze(model.hessian_pattern());
        SamplerConfig cfg;
        cfg.epsilon = eps;
        cfg.l_min = lmin;
        cfg.l_max = lmax;
        cfg.jitter_fraction = 0.15;
        cfg.n_iterations = iters;
        cfg.k_prefix = d - 1;
        cfg.u.assign(d, 1e-8);
        cfg.u[d - 1] = std::exp(3.5);
        McrmhmcChain chain(model, plan, cfg);
        Rng rng(3);
        std::vector<double> x0(d);
        model.sample_exact(rng, x0);
        chain.set_state(x0);
        auto rec = chain.run(rng);
        return rec.cpu_seconds / iters;
    };
    const double t100 = time_per_iter(100, 0.15, 60, 80, 30);
    const double t1000 = time_per_iter(1000, 0.1, 130, 160, 10);
    const double ratio = t1000 / t100;
    std::printf("  per-iteration cost: d=100 %.4f s, d=1000 %.4f s, ratio %.1f\n", t100, t1000,
                ratio);
    return ratio < 40.0;
}

bool criterion_9() {
    Funnel2d model;
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x0 = {0.5, -1.0}, u = {1.0, 1.0};
    auto check = one_step_moment_check(model, plan, x0, u, 1, 0.05, 200000, 1234);
    // The halving measurement needs the O(eps^4) bias above the Monte Carlo
    // floor: antithetic momentum pairs cancel the odd-in-p noise, and the
    // pair eps = 0.2 -> 0.1 sits in the resolvable regime.
    const double r_full = one_step_mean_residual(model, plan, x0, u, 1, 0.2, 500000, 77);
    const double r_half = one_step_mean_residual(model, plan, x0, u, 1, 0.1, 500000, 77);
    const double shrink = r_full / r_half;
    std::printf("  mean ok %d, cov ok %d, residual %.3g -> %.3g (shrink %.1fx)\n",
                check.mean_ok ? 1 : 0, check.cov_ok ? 1 : 0, r_full, r_half, shrink);
    return check.mean_ok && check.cov_ok && shrink >= 8.0;
}

bool criterion_10() {
    const int T = 500;
    const CevSsm::Params truth{0.01, 0.17, 0.41, 1.18, 0.00054};
    const double tr[5] = {truth.alpha, truth.beta, 2.0 * std::log(truth.sigma_x), truth.gamma,
                          2.0 * std::log(truth.sigma_y)};
    std::vector<int> covered(10, 0);
    std::vector<double> itp(10, 0.0), itx(10, 0.0);
    parallel_seeds(10, [&](int s) {
        Rng drng(1000 + s);
        auto y = CevSsm::simulate(drng, T, truth, 0.09569);
        CevSsm model(y);
        auto plan = analyze(model.hessian_pattern());
        SamplerConfig cfg;
        cfg.epsilon = 0.08;
        cfg.l_min = 60;
        cfg.l_max = 120;
        cfg.jitter_fraction = 0.15;
        cfg.n_warmup = 100;
        cfg.n_iterations = 1000;
        cfg.k_prefix = T + 2;
        cfg.u.assign(T + 5, 1.0);
        cfg.u[T + 2] = std::exp(6.0);
        cfg.u[T + 3] = 1.0;
        cfg.u[T + 4] = std::exp(6.0);
        McrmhmcChain chain(model, plan, cfg);
        std::vector<double> x0(model.dim());
        model.default_init(x0);
        chain.set_state(x0);
        Tuner tuner(cfg.u, cfg.k_prefix);
        Rng rng = Rng::for_chain(7000, s);
        auto rec = chain.run(rng, &tuner);
        itp[s] = rec.fp_iters_p_mean;
        itx[s] = rec.fp_iters_x_mean;
        int inside = 0;
        for (int k = 0; k < 5; ++k) {
            auto col = column(rec, T + k);
            std::sort(col.begin(), col.end());
            const double lo = col[static_cast<std::size_t>(0.025 * col.size())];
            const double hi = col[static_cast<std::size_t>(0.975 * col.size())];
            if (tr[k] >= lo && tr[k] <= hi) ++inside;
        }
        covered[s] = inside == 5 ? 1 : 0;
        std::printf("  seed %d: %d/5 parameters inside the central 95%% interval, acc %.3f\n",
                    s + 1, inside, rec.acceptance_rate);
        std::fflush(stdout);
    });
    int good = 0;
    double mp = 0.0, mx = 0.0;
    for (int s = 0; s < 10; ++s) {
        good += covered[s];
        mp += itp[s] / 10.0;
        mx += itx[s] / 10.0;
    }
    std::printf("  recovery in %d/10 seeds; fixed-point iterations p %.2f (<=8), x %.2f (<=6)\n",
                good, mp, mx);
    return good >= 8 && mp <= 8.0 && mx <= 6.0;
}

bool criterion_11() {
    FunnelAr1 model(10);
    auto plan = analyze(model.hessian_pattern());
    std::vector<int> clean(10, 0);
    std::vector<double> adapted(10, 0.0);
    parallel_seeds(10, [&](int s) {
        SamplerConfig cfg;
        cfg.epsilon = 0.3;
        cfg.l_min = 30;
        cfg.l_max = 40;
        cfg.jitter_fraction = 0.15;
        cfg.n_warmup = 800;
        cfg.n_iterations = 1;
        cfg.k_prefix = 9;
        cfg.u.assign(10, 1e-8);
        cfg.u[9] = std::exp(-20.0);
        McrmhmcChain chain(model, plan, cfg);
        Tuner tuner(cfg.u, cfg.k_prefix);
        Rng rng = Rng::for_chain(8800, s);
        std::vector<double> x0(10);
        model.sample_exact(rng, x0);
        chain.set_state(x0);
        chain.run(rng, &tuner);
        int late_divergences = 0;
        for (const auto& e : tuner.events())
            if (!e.is_k_change && e.iteration >= cfg.n_warmup - 50) ++late_divergences;
        clean[s] = late_divergences == 0 ? 1 : 0;
        adapted[s] = tuner.u()[9];
    });
    int good = 0;
    int near_paper = 0;
    for (int s = 0; s < 10; ++s) {
        good += clean[s];
        // soft criterion, logged: adapted u_d within a factor e^2 of e^{2.0}
        const double lr = std::log(adapted[s]);
        if (lr >= -1e-9 && lr <= 4.0 + 1e-9) ++near_paper;
        std::printf("  seed %d: adapted u_d = e^%.2f, clean last 50 warmup: %d\n", s + 1, lr,
                    clean[s]);
    }
    std::printf("  zero late divergences in %d/10 seeds; u_d within e^2 of e^2.0 in %d/10 "
                "(soft, logged)\n",
                good, near_paper);
    return good >= 8;
}

}  // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* name;
        bool (*fn)();
    };
    const Entry entries[] = {
        {1, "factorization correctness (sparse vs dense, invariants, < 10 s)", criterion_1},
        {2, "Hamiltonian gradient fidelity vs finite differences", criterion_2},
        {3, "integrator: reversibility, energy scaling, Gaussian reduction", criterion_3},
        {4, "twisted AR(1) d=10 at published settings", criterion_4},
        {5, "twisted AR(1) d=100 at published settings", criterion_5},
        {6, "funnel AR(1) d=10 and d=100 at published settings", criterion_6},
        {7, "baseline pathology: Gibbs d=100 and EHMC d=10 KS rejections", criterion_7},
        {8, "subquadratic per-iteration scaling d=100 -> d=1000", criterion_8},
        {9, "one-step proposal moments and eps-halving shrink", criterion_9},
        {10, "CEV synthetic-data parameter recovery (T=500)", criterion_10},
        {11, "tuner warmup from u_d = e^{-20} ends divergence-free", criterion_11},
    };
    int failures = 0;
    for (const auto& e : entries) {
        if (argc > 1 && std::atoi(argv[1]) != e.id) continue;
        std::printf("criterion %d: %s\n", e.id, e.name);
        std::fflush(stdout);
        const bool ok = e.fn();
        std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", e.id, e.name);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
