#include <cmath>

#include "doctest.h"
#include "mcrmhmc/integrator.hpp"
#include "mcrmhmc/metric.hpp"
#include "mcrmhmc/models/funnel2d.hpp"
#include "mcrmhmc/models/gaussian.hpp"
#include "mcrmhmc/models/twisted_ar1.hpp"
#include "mcrmhmc/rng.hpp"
#include "oracles.hpp"

using namespace mcrmhmc;

TEST_SUITE_BEGIN("integrator");

namespace {
StepConfig make_cfg(double eps, double tol = 1e-6, int max_it = 50) {
    StepConfig c;
    c.epsilon = eps;
    c.fp_tolerance = tol;
    c.max_fixed_point_iters = max_it;
    return c;
}
}  // namespace

TEST_CASE("1-D standard normal single step reproduces the hand leapfrog") {
    StdGaussian model(1);
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x = {1.0}, p = {0.0}, u = {1e-8};
    MetricState ms = build_metric(model, x, u, 1, plan);
    Integrator integ(model, plan);
    auto r = integ.leapfrog_step(ms, p, make_cfg(0.1));
    CHECK(r.report.converged);
    CHECK(r.x[0] == doctest::Approx(0.995).epsilon(1e-14));
    CHECK(r.p[0] == doctest::Approx(-0.09975).epsilon(1e-14));
}

TEST_CASE("constant-metric reduction: trajectory equals the plain leapfrog to 1e-14") {
    StdGaussian model(3);
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x0 = {1.0, -0.7, 0.4}, p0 = {0.3, 0.9, -1.1}, u(3, 1e-8);
    Integrator integ(model, plan);
    const int l = 7;
    const double eps = 0.21;
    auto traj = integ.integrate_trajectory(x0, p0, l, make_cfg(eps), u, 3);
    CHECK_FALSE(traj.diverged);
    // Manual leapfrog for -log pi = |x|^2/2 (grad U = x).
    auto x = x0;
    auto p = p0;
    for (int s = 0; s < l; ++s) {
        for (int i = 0; i < 3; ++i) p[i] -= 0.5 * eps * x[i];
        for (int i = 0; i < 3; ++i) x[i] += eps * p[i];
        for (int i = 0; i < 3; ++i) p[i] -= 0.5 * eps * x[i];
    }
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(traj.x[i] - x[i]) < 1e-14);
        CHECK(std::fabs(traj.p[i] - p[i]) < 1e-14);
    }
}

TEST_CASE("l = 1 trajectory equals a single leapfrog step") {
    Funnel2d model;
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x = {0.5, -1.0}, p = {0.7, -0.2}, u = {1.0, 1.0};
    MetricState ms = build_metric(model, x, u, 1, plan);
    Integrator i1(model, plan), i2(model, plan);
    auto one = i1.leapfrog_step(ms, p, make_cfg(0.1));
    auto traj = i2.integrate_trajectory(x, p, 1, make_cfg(0.1), u, 1);
    for (int i = 0; i < 2; ++i) {
        CHECK(traj.x[i] == one.x[i]);
        CHECK(traj.p[i] == one.p[i]);
    }
}

TEST_CASE("time reversibility: negate momentum, integrate back, recover the start") {
    const double tol = 1e-6;
    SUBCASE("funnel") {
        Funnel2d model;
        auto plan = analyze(model.hessian_pattern());
        Rng rng(4);
        std::vector<double> x(2), p(2), u = {1.0, 1.0};
        model.sample_exact(rng, x);
        rng.fill_normal(p);
        Integrator integ(model, plan);
        auto fwd = integ.integrate_trajectory(x, p, 8, make_cfg(0.15, tol), u, 1);
        REQUIRE_FALSE(fwd.diverged);
        std::vector<double> pneg(2);
        for (int i = 0; i < 2; ++i) pneg[i] = -fwd.p[i];
        auto back = integ.integrate_trajectory(fwd.x, pneg, 8, make_cfg(0.15, tol), u, 1);
        REQUIRE_FALSE(back.diverged);
        for (int i = 0; i < 2; ++i) {
            CHECK(std::fabs(back.x[i] - x[i]) < 10.0 * tol);
            CHECK(std::fabs(-back.p[i] - p[i]) < 10.0 * tol);
        }
    }
    SUBCASE("twisted AR(1) d = 10") {
        TwistedAr1 model(10);
        auto plan = analyze(model.hessian_pattern());
        Rng rng(9);
        std::vector<double> x(10), p(10), u(10, 1e-8);
        u[9] = std::exp(3.5);
        model.sample_exact(rng, x);
        MetricState ms = build_metric(model, x, u, 9, plan);
        ms.sample_momentum(rng, p);
        Integrator integ(model, plan);
        auto fwd = integ.integrate_trajectory(x, p, 10, make_cfg(0.4, tol), u, 9);
        REQUIRE_FALSE(fwd.diverged);
        std::vector<double> pneg(10);
        for (int i = 0; i < 10; ++i) pneg[i] = -fwd.p[i];
        auto back = integ.integrate_trajectory(fwd.x, pneg, 10, make_cfg(0.4, tol), u, 9);
        REQUIRE_FALSE(back.diverged);
        for (int i = 0; i < 10; ++i) {
            CHECK(std::fabs(back.x[i] - x[i]) < 10.0 * tol);
            CHECK(std::fabs(-back.p[i] - p[i]) < 10.0 * tol);
        }
    }
}

TEST_CASE("energy error scales as O(eps^2): halving ratio near 4 on the funnel") {
    Funnel2d model;
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x = {0.5, -1.0}, u = {1.0, 1.0};
    MetricState ms = build_metric(model, x, u, 1, plan);
    Rng rng(12);
    std::vector<double> p(2);
    double acc_full = 0.0, acc_half = 0.0;
    Integrator integ(model, plan);
    const int n = 100;
    // Same total integration time: l steps at eps versus 2l at eps/2.
    for (int i = 0; i < n; ++i) {
        ms.sample_momentum(rng, p);
        auto t1 = integ.integrate_trajectory(x, p, 8, make_cfg(0.15, 1e-10), u, 1);
        auto t2 = integ.integrate_trajectory(x, p, 16, make_cfg(0.075, 1e-10), u, 1);
        REQUIRE_FALSE(t1.diverged);
        REQUIRE_FALSE(t2.diverged);
        acc_full += std::fabs(t1.delta_h);
        acc_half += std::fabs(t2.delta_h);
    }
    const double ratio = acc_full / acc_half;
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.6);
}

TEST_CASE("half-period Gaussian trajectory against the exact leapfrog rotation") {
    StdGaussian model(1);
    auto plan = analyze(model.hessian_pattern());
    const double eps = 0.01;
    const int l = 314;
    std::vector<double> x = {1.0}, p = {0.0}, u = {1e-8};
    Integrator integ(model, plan);
    auto traj = integ.integrate_trajectory(x, p, l, make_cfg(eps), u, 1);
    REQUIRE_FALSE(traj.diverged);
    // Exact discrete map: one step is the 2x2 matrix [[1-e^2/2, e],
    // [-e(1-e^2/4), 1-e^2/2]]; the oracle is its l-th power.
    double m[4] = {1.0 - eps * eps / 2.0, eps, -eps * (1.0 - eps * eps / 4.0),
                   1.0 - eps * eps / 2.0};
    double acc[4] = {1.0, 0.0, 0.0, 1.0};
    for (int s = 0; s < l; ++s) {
        double nxt[4] = {m[0] * acc[0] + m[1] * acc[2], m[0] * acc[1] + m[1] * acc[3],
                         m[2] * acc[0] + m[3] * acc[2], m[2] * acc[1] + m[3] * acc[3]};
        std::copy(nxt, nxt + 4, acc);
    }
    CHECK(traj.x[0] == doctest::Approx(acc[0]).epsilon(1e-11));
    CHECK(traj.p[0] == doctest::Approx(acc[2]).epsilon(1e-11));
    CHECK(traj.x[0] == doctest::Approx(-1.0).epsilon(2e-3));  // half period
}

TEST_CASE("volume preservation: numeric Jacobian of the step map has unit determinant") {
    Funnel2d model;
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> z0 = {0.4, -0.8, 0.6, -0.3};  // (x, p)
    std::vector<double> u = {1.0, 1.0};
    Integrator integ(model, plan);
    auto cfg = make_cfg(0.12, 1e-13, 200);
    auto eval = [&](const std::vector<double>& z) {
        std::vector<double> x = {z[0], z[1]}, p = {z[2], z[3]};
        auto t = integ.integrate_trajectory(x, p, 1, cfg, u, 1);
        REQUIRE_FALSE(t.diverged);
        return std::vector<double>{t.x[0], t.x[1], t.p[0], t.p[1]};
    };
    Eigen::Matrix4d jac;
    const double h = 1e-5;
    for (int j = 0; j < 4; ++j) {
        auto zp = z0, zm = z0;
        zp[j] += h;
        zm[j] -= h;
        auto fp = eval(zp), fm = eval(zm);
        for (int i = 0; i < 4; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    CHECK(std::fabs(jac.determinant() - 1.0) < 1e-4);
}

TEST_CASE("identical inputs produce bitwise identical trajectories") {
    TwistedAr1 model(6);
    auto plan = analyze(model.hessian_pattern());
    Rng rng(77);
    std::vector<double> x(6), p(6), u(6, 1e-8);
    u[5] = std::exp(3.5);
    model.sample_exact(rng, x);
    rng.fill_normal(p);
    Integrator i1(model, plan), i2(model, plan);
    auto t1 = i1.integrate_trajectory(x, p, 12, make_cfg(0.3), u, 5);
    auto t2 = i2.integrate_trajectory(x, p, 12, make_cfg(0.3), u, 5);
    REQUIRE_FALSE(t1.diverged);
    for (int i = 0; i < 6; ++i) {
        CHECK(t1.x[i] == t2.x[i]);
        CHECK(t1.p[i] == t2.p[i]);
    }
    CHECK(t1.delta_h == t2.delta_h);
}

TEST_CASE("fixed-point failure is reported as divergence, not an error") {
    Funnel2d model;
    auto plan = analyze(model.hessian_pattern());
    std::vector<double> x = {0.1, -6.0}, p = {50.0, 50.0}, u = {1e-8, 1e-8};
    Integrator integ(model, plan);
    auto traj = integ.integrate_trajectory(x, p, 40, make_cfg(2.5, 1e-6, 20), u, 1);
    CHECK(traj.diverged);
    CHECK(traj.pivot_snapshot.size() == 2);
}

TEST_CASE("step-size validation") {
    StepConfig c;
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.epsilon = 0.1;
    c.jitter_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_SUITE_END();
