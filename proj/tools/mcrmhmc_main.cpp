// Experiment driver: parse a JSON config, build the model, run warmup +
// sampling for the chosen sampler across replicates, write draws and
// diagnostics, and print a summary table.  `selftest` runs the built-in
// oracle checks and exits nonzero on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcrmhmc/baselines.hpp"
#include "mcrmhmc/diagnostics.hpp"
#include "mcrmhmc/integrator.hpp"
#include "mcrmhmc/io.hpp"
#include "mcrmhmc/metric.hpp"
#include "mcrmhmc/models/cev.hpp"
#include "mcrmhmc/models/funnel2d.hpp"
#include "mcrmhmc/models/funnel_ar1.hpp"
#include "mcrmhmc/models/gaussian.hpp"
#include "mcrmhmc/models/twisted_ar1.hpp"
#include "mcrmhmc/sampler.hpp"
#include "mcrmhmc/tuner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mcrmhmc;

namespace {

struct Experiment {
    std::string model_name;
    int d = 0;
    std::string data_path;
    std::string sampler_name = "mcrmhmc";
    double epsilon = 0.0;  // 0: use reference settings
    int l_min = 0, l_max = 0;
    double jitter = 0.15;
    double fp_tolerance = 1e-6;
    int max_fp_iters = 50;
    json u_spec;  // number, or {default, per_index}
    int k_prefix = -1;  // -1: model default
    double r_gibbs = 0.5;
    int thin = 1000;
    long iterations = 1000;
    int warmup = 0;
    std::uint64_t seed = 1;
    int replicates = 1;
    std::string out_dir = "out";
};

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError(msg); }

Experiment parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "error: cannot open config file: " << path << "\n";
        std::exit(2);
    }
    json j;
    try {
        j = json::parse(is, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        // byte offset -> line number for a useful message
        std::ifstream is2(path);
        std::string text((std::istreambuf_iterator<char>(is2)), {});
        int line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        config_fail(path + ":" + std::to_string(line) + ": " + e.what());
    }
    Experiment ex;
    try {
        const auto& jm = j.at("model");
        ex.model_name = jm.at("name").get<std::string>();
        ex.d = jm.value("d", 0);
        ex.data_path = jm.value("data", std::string());

        const auto& js = j.at("sampler");
        ex.sampler_name = js.value("name", std::string("mcrmhmc"));
        ex.epsilon = js.value("epsilon", 0.0);
        ex.l_min = js.value("l_min", 0);
        ex.l_max = js.value("l_max", 0);
        ex.jitter = js.value("jitter", 0.15);
        ex.fp_tolerance = js.value("fp_tolerance", 1e-6);
        ex.max_fp_iters = js.value("max_fixed_point_iters", 50);
        if (js.contains("u")) ex.u_spec = js.at("u");
        ex.k_prefix = js.value("K", -1);
        ex.r_gibbs = js.value("r_gibbs", 0.5);
        ex.thin = js.value("thin", 1000);

        const auto& jr = j.at("run");
        ex.iterations = jr.value("iterations", 1000);
        ex.warmup = jr.value("warmup", 0);
        ex.seed = jr.value("seed", 1);
        ex.replicates = jr.value("replicates", 1);

        if (j.contains("output")) ex.out_dir = j["output"].value("directory", std::string("out"));
    } catch (const json::exception& e) {
        config_fail(path + ": " + e.what());
    }
    return ex;
}

std::unique_ptr<TargetModel> build_model(const Experiment& ex) {
    if (ex.model_name == "funnel2d") return std::make_unique<Funnel2d>();
    if (ex.model_name == "gaussian") {
        if (ex.d < 1) config_fail("model.d required for gaussian");
        return std::make_unique<StdGaussian>(ex.d);
    }
    if (ex.model_name == "twisted_ar1") {
        if (ex.d < 3) config_fail("model.d >= 3 required for twisted_ar1");
        return std::make_unique<TwistedAr1>(ex.d);
    }
    if (ex.model_name == "funnel_ar1") {
        if (ex.d < 3) config_fail("model.d >= 3 required for funnel_ar1");
        return std::make_unique<FunnelAr1>(ex.d);
    }
    if (ex.model_name == "cev") {
        if (ex.data_path.empty()) config_fail("model.data (or --data) required for cev");
        if (!fs::exists(ex.data_path)) {
            std::cerr << "error: data file not found: " << ex.data_path << "\n";
            std::exit(2);
        }
        auto series = read_series_csv(ex.data_path);
        std::fprintf(stderr, "loaded %zu observations, first = %.6g\n", series.values.size(),
                     series.first_observation);
        return std::make_unique<CevSsm>(std::move(series.values));
    }
    config_fail("unknown model: " + ex.model_name);
}

// u from scalar broadcast or {default, per_index{1-based: value}}.
std::vector<double> build_u(const Experiment& ex, int d, int k) {
    std::vector<double> u(d, std::exp(-20.0));
    if (ex.u_spec.is_number()) {
        std::fill(u.begin(), u.end(), ex.u_spec.get<double>());
    } else if (ex.u_spec.is_object()) {
        if (ex.u_spec.contains("default"))
            std::fill(u.begin(), u.end(), ex.u_spec["default"].get<double>());
        if (ex.u_spec.contains("per_index")) {
            for (const auto& [key, val] : ex.u_spec["per_index"].items()) {
                const int idx = std::stoi(key);  // 1-based
                if (idx < 1 || idx > d) config_fail("u.per_index out of range: " + key);
                u[idx - 1] = val.get<double>();
            }
        }
    } else if (!ex.u_spec.is_null()) {
        config_fail("sampler.u must be a number or an object");
    }
    for (int j = k; j < d; ++j)
        if (!(u[j] > 0.0)) config_fail("active u entries must be positive");
    return u;
}

struct ReplicateSummary {
    int index = 0;
    double cpu_s = 0.0;
    double acc = 0.0;
    int divergences = 0;
    double min_ess = 0.0;
    double ess_last = 0.0;
};

ReplicateSummary run_replicate(const Experiment& ex, const TargetModel& model,
                               const SymbolicPlan* plan, int rep, const fs::path& dir) {
    fs::create_directories(dir);
    const int d = model.dim();
    Rng rng = Rng::for_chain(ex.seed, rep);
    ChainRecord rec;
    if (ex.sampler_name == "mcrmhmc") {
        SamplerConfig cfg;
        cfg.epsilon = ex.epsilon;
        cfg.l_min = ex.l_min;
        cfg.l_max = ex.l_max;
        cfg.jitter_fraction = ex.jitter;
        cfg.fp_tolerance = ex.fp_tolerance;
        cfg.max_fixed_point_iters = ex.max_fp_iters;
        cfg.n_iterations = static_cast<int>(ex.iterations);
        cfg.n_warmup = ex.warmup;
        cfg.rng_seed = ex.seed;
        cfg.k_prefix = ex.k_prefix >= 0 ? ex.k_prefix : model.pd_prefix_default();
        cfg.u = build_u(ex, d, cfg.k_prefix);
        if (cfg.epsilon <= 0.0) {
            auto ref = reference_settings(d);
            cfg.epsilon = ref.epsilon;
            if (cfg.l_min == 0) {
                cfg.l_min = std::max(1, ref.l_mean / 2);
                cfg.l_max = ref.l_mean + ref.l_mean / 2;
            }
        }
        if (cfg.l_min == 0) config_fail("sampler.l_min/l_max required when epsilon is given");

        McrmhmcChain chain(model, *plan, cfg);
        std::vector<double> x0(d);
        if (!model.sample_exact(rng, x0)) model.default_init(x0);
        chain.set_state(x0);
        Tuner tuner(cfg.u, cfg.k_prefix);
        rec = chain.run(rng, &tuner);
        std::ofstream wl(dir / "warmup.log");
        tuner.write_log(wl);
    } else if (ex.sampler_name == "ehmc") {
        if (!(ex.epsilon > 0.0) || ex.l_min < 1) config_fail("ehmc needs epsilon and l bounds");
        rec = ehmc(model, ex.epsilon, ex.l_min, ex.l_max, static_cast<int>(ex.iterations), rng,
                   ex.jitter);
    } else if (ex.sampler_name == "gibbs") {
        if (ex.model_name == "twisted_ar1")
            rec = gibbs_twisted(dynamic_cast<const TwistedAr1&>(model), ex.r_gibbs, ex.iterations,
                                ex.thin, rng);
        else if (ex.model_name == "funnel_ar1")
            rec = gibbs_funnel(dynamic_cast<const FunnelAr1&>(model), ex.iterations, ex.thin, rng);
        else
            config_fail("gibbs supports twisted_ar1 and funnel_ar1 only");
    } else {
        config_fail("unknown sampler: " + ex.sampler_name);
    }

    write_draws_csv((dir / "draws.csv").string(), rec);
    {
        std::ofstream ds(dir / "diagnostics.csv");
        write_diagnostics_csv(ds, model, rec);
    }
    ReplicateSummary s;
    s.index = rep;
    s.cpu_s = rec.cpu_seconds;
    s.acc = rec.acceptance_rate;
    s.divergences = rec.divergences;
    if (rec.n() >= 10) {
        auto er = ess_report(rec);
        s.min_ess = er.min_ess;
        std::vector<double> last(rec.n());
        for (int t = 0; t < rec.n(); ++t) last[t] = rec.row(t)[d - 1];
        s.ess_last = ess_geyer(last);
    }
    return s;
}

int cmd_run(const std::string& config_path, const std::string& data_override,
            long seed_override, int replicates_override) {
    Experiment ex = parse_config(config_path);
    if (!data_override.empty()) ex.data_path = data_override;
    if (seed_override >= 0) ex.seed = static_cast<std::uint64_t>(seed_override);
    if (replicates_override > 0) ex.replicates = replicates_override;

    auto model = build_model(ex);
    std::unique_ptr<SymbolicPlan> plan;
    if (ex.sampler_name == "mcrmhmc")
        plan = std::make_unique<SymbolicPlan>(analyze(model->hessian_pattern()));

    fs::create_directories(ex.out_dir);
    std::vector<ReplicateSummary> sums(ex.replicates);
    std::vector<std::string> errors(ex.replicates);
    std::atomic<int> next{0};
    const int workers =
        std::max(1, std::min<int>(ex.replicates, std::thread::hardware_concurrency()));
    auto worker = [&]() {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= ex.replicates) return;
            const fs::path dir = fs::path(ex.out_dir) / ("replicate_" + std::to_string(rep + 1));
            try {
                sums[rep] = run_replicate(ex, *model, plan.get(), rep, dir);
            } catch (const std::exception& e) {
                errors[rep] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (int r = 0; r < ex.replicates; ++r)
        if (!errors[r].empty()) {
            std::cerr << "error: replicate " << (r + 1) << ": " << errors[r] << "\n";
            return 3;
        }

    std::ostringstream table;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %10s %8s %6s %10s %10s %10s %10s\n", "replicate",
                  "cpu_s", "accept", "div", "min_ess", "ess_xd", "minESS/s", "ESSxd/s");
    table << buf;
    ReplicateSummary mn, mean;
    mn.cpu_s = 1e300;
    mn.min_ess = 1e300;
    mn.ess_last = 1e300;
    double min_eps_rate = 1e300, min_last_rate = 1e300, mean_eps_rate = 0, mean_last_rate = 0;
    for (const auto& s : sums) {
        const double r1 = s.cpu_s > 0 ? s.min_ess / s.cpu_s : 0.0;
        const double r2 = s.cpu_s > 0 ? s.ess_last / s.cpu_s : 0.0;
        std::snprintf(buf, sizeof(buf), "%-10d %10.2f %8.3f %6d %10.1f %10.1f %10.2f %10.2f\n",
                      s.index + 1, s.cpu_s, s.acc, s.divergences, s.min_ess, s.ess_last, r1, r2);
        table << buf;
        mn.cpu_s = std::min(mn.cpu_s, s.cpu_s);
        mn.min_ess = std::min(mn.min_ess, s.min_ess);
        mn.ess_last = std::min(mn.ess_last, s.ess_last);
        min_eps_rate = std::min(min_eps_rate, r1);
        min_last_rate = std::min(min_last_rate, r2);
        mean.cpu_s += s.cpu_s / sums.size();
        mean.acc += s.acc / sums.size();
        mean.min_ess += s.min_ess / sums.size();
        mean.ess_last += s.ess_last / sums.size();
        mean_eps_rate += r1 / sums.size();
        mean_last_rate += r2 / sums.size();
    }
    std::snprintf(buf, sizeof(buf), "%-10s %10.2f %8s %6s %10.1f %10.1f %10.2f %10.2f\n", "min",
                  mn.cpu_s, "", "", mn.min_ess, mn.ess_last, min_eps_rate, min_last_rate);
    table << buf;
    std::snprintf(buf, sizeof(buf), "%-10s %10.2f %8.3f %6s %10.1f %10.1f %10.2f %10.2f\n", "mean",
                  mean.cpu_s, mean.acc, "", mean.min_ess, mean.ess_last, mean_eps_rate,
                  mean_last_rate);
    table << buf;

    std::cout << table.str();
    std::ofstream sf(fs::path(ex.out_dir) / "summary.txt");
    sf << table.str();
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: the built-in oracle checks.

int g_failures = 0;
void check(bool ok, const std::string& name) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", name.c_str());
    if (!ok) ++g_failures;
}
bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

// Small dense Gaussian-elimination solve (selftest-local oracle).
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i * n + k]) > std::fabs(a[piv * n + k])) piv = i;
        for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= a[i * n + j] * x[j];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

int cmd_selftest() {
    // sabs family
    check(near(sabs(1.0, 1.0), std::log(2.5) / std::log(2.0), 1e-14), "sabs(1,1) closed form");
    check(sabs(4.0, 1e-8) == 4.0, "sabs overflow-safe saturation");
    check(near(sabs(0.0, 0.37), 0.37, 1e-14), "sabs(0,u) = u");
    check(near(sabs_derivative(1.0, 1.0), 0.6, 1e-14), "sabs' at x = u is tanh(ln 2) = 0.6");
    check(sabs_inv_sensitivity(0.0, 1.0) == 0.0 &&
              near(sabs_inv_sensitivity(100.0, 1.0), 1e-4, 0.01),
          "sensitivity ranking endpoints");

    // hand-traced factorizations
    {
        auto a = SymSparse::from_pattern(2, {{0, 1}, {1}});
        a.values = {4.0, 2.0, 1.0};
        auto plan = analyze(a);
        auto f = modified_cholesky(a, std::vector<double>(2, 1e-8), 0, plan);
        check(f.d_diag[0] == 4.0 && near(f.l_values[0], 0.5, 1e-15) &&
                  near(f.d_diag[1], 1e-8, 1e-6),
              "modified Cholesky hand trace with exact-zero pivot");
    }
    {
        auto a = SymSparse::from_pattern(3, {{0}, {1}, {2}});
        for (auto& v : a.values) v = 1.0;
        auto plan = analyze(a);
        auto f = modified_cholesky(a, std::vector<double>(3, 0.5), 0, plan);
        check(near(f.d_diag[1], 0.5 * std::log2(4.25), 1e-14), "identity-matrix regularization");
    }

    // sparse vs dense factorization and the dense LU solve oracle
    {
        Rng rng(5);
        const int d = 8;
        std::vector<std::vector<int>> cols(d);
        for (int j = 0; j + 1 < d; ++j) {
            cols[j] = {j, d - 1};
            if (j + 2 < d) cols[j] = {j, j + 1, d - 1};
        }
        cols[d - 1] = {d - 1};
        auto a = SymSparse::from_pattern(d, cols);
        std::vector<double> rowsum(d, 0.0);
        for (int j = 0; j < d; ++j)
            for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p)
                if (a.row_idx[p] != j) {
                    a.values[p] = rng.normal();
                    rowsum[j] += std::fabs(a.values[p]);
                    rowsum[a.row_idx[p]] += std::fabs(a.values[p]);
                }
        for (int j = 0; j < d; ++j) a.values[a.col_ptr[j]] = rowsum[j] - 1.5;
        auto plan = analyze(a);
        std::vector<double> u(d, 0.3);
        auto fs_ = modified_cholesky(a, u, 0, plan);
        std::vector<double> dense(d * d, 0.0);
        for (int j = 0; j < d; ++j)
            for (int p = a.col_ptr[j]; p < a.col_ptr[j + 1]; ++p) {
                dense[a.row_idx[p] * d + j] = a.values[p];
                dense[j * d + a.row_idx[p]] = a.values[p];
            }
        auto fd_ = modified_cholesky_dense(dense, d, u, 0);
        bool ok = true;
        for (int j = 0; j < d; ++j) ok = ok && near(fs_.d_diag[j], fd_.d_diag[j], 1e-13);
        check(ok, "sparse vs dense modified Cholesky");

        // G^{-1} b against Gaussian elimination on the reconstruction
        std::vector<double> g(d * d, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int k = 0; k <= std::min(i, j); ++k) {
                    const double li = i == k ? 1.0 : fd_.ltilde[i * d + k];
                    const double lj = j == k ? 1.0 : fd_.ltilde[j * d + k];
                    acc += li * fd_.d_diag[k] * lj;
                }
                g[i * d + j] = acc;
            }
        std::vector<double> b(d);
        rng.fill_normal(b);
        auto x = b;
        solve_unit_lower<double>(plan, fs_.l_values, x);
        scale_by_diag<double>(fs_.d_diag, x);
        solve_unit_lower_transpose<double>(plan, fs_.l_values, x);
        auto ref = dense_solve(g, b, d);
        ok = true;
        for (int i = 0; i < d; ++i) ok = ok && near(x[i], ref[i], 1e-11);
        check(ok, "triangular solves vs dense elimination");
    }

    // integrator oracles
    {
        StdGaussian model(1);
        auto plan = analyze(model.hessian_pattern());
        std::vector<double> x = {1.0}, p = {0.0}, u = {1e-8};
        MetricState ms = build_metric(model, x, u, 1, plan);
        Integrator integ(model, plan);
        StepConfig cfg;
        cfg.epsilon = 0.1;
        auto r = integ.leapfrog_step(ms, p, cfg);
        check(near(r.x[0], 0.995, 1e-14) && near(r.p[0], -0.09975, 1e-14),
              "unit-Gaussian leapfrog hand trace");
    }
    {
        Funnel2d model;
        auto plan = analyze(model.hessian_pattern());
        std::vector<double> x = {0.5, -1.0}, u = {1.0, 1.0};
        MetricState ms = build_metric(model, x, u, 1, plan);
        Rng rng(3);
        std::vector<double> p(2);
        Integrator integ(model, plan);
        double af = 0, ah = 0;
        StepConfig c1, c2;
        c1.epsilon = 0.15;
        c1.fp_tolerance = 1e-10;
        c2.epsilon = 0.075;
        c2.fp_tolerance = 1e-10;
        bool rev_ok = true;
        for (int i = 0; i < 100; ++i) {
            ms.sample_momentum(rng, p);
            auto t1 = integ.integrate_trajectory(x, p, 8, c1, u, 1);
            auto t2 = integ.integrate_trajectory(x, p, 16, c2, u, 1);
            af += std::fabs(t1.delta_h);
            ah += std::fabs(t2.delta_h);
            if (i == 0) {
                std::vector<double> pn = {-t1.p[0], -t1.p[1]};
                auto back = integ.integrate_trajectory(t1.x, pn, 8, c1, u, 1);
                rev_ok = std::fabs(back.x[0] - x[0]) < 1e-9 && std::fabs(back.x[1] - x[1]) < 1e-9;
            }
        }
        check(af / ah > 3.4 && af / ah < 4.6, "energy-error halving ratio in [3.4, 4.6]");
        check(rev_ok, "trajectory reversibility");

        // full Hamiltonian gradient vs central differences
        std::vector<double> xp = {1.0, 0.0}, pp = {1.0, 1.0};
        MetricState m2 = build_metric(model, xp, u, 1, plan);
        auto gp = grad_potential(model, m2, pp);
        bool grad_ok = gp.ok;
        for (int i = 0; i < 2 && grad_ok; ++i) {
            const double h = 1e-5;
            auto xa = xp, xb = xp;
            xa[i] += h;
            xb[i] -= h;
            const double ha = build_metric(model, xa, u, 1, plan).hamiltonian(pp);
            const double hb = build_metric(model, xb, u, 1, plan).hamiltonian(pp);
            grad_ok = near(gp.grad[i], (ha - hb) / (2.0 * h), 1e-5);
        }
        check(grad_ok, "Hamiltonian gradient vs finite differences");
    }

    // diagnostics oracles
    {
        Rng rng(11);
        const int n = 100000;
        std::vector<double> c(n);
        c[0] = rng.normal();
        for (int t = 1; t < n; ++t) c[t] = 0.9 * c[t - 1] + std::sqrt(1 - 0.81) * rng.normal();
        check(near(ess_geyer(c), n / 19.0, 0.15), "Geyer ESS on an AR(1) chain");
        check(near(ks_critical(0.01), 1.628, 1e-3) && near(ks_critical(0.05), 1.358, 1e-3),
              "KS critical values");
    }

    // model identities
    {
        FunnelAr1 model(8);
        Rng rng(13);
        std::vector<double> x(8), col(3000);
        for (auto& v : col) {
            model.sample_exact(rng, x);
            v = x[0];
        }
        auto z = probit_transform(col, *model.marginal_cdf(0));
        check(!ks_statistic(z, Cdf([](double t) { return normal_cdf(t); })).reject_at_1pct,
              "funnel AR(1) latent t2 marginal identity");
    }
    {
        Rng rng(17);
        auto y = CevSsm::simulate(rng, 12, {0.01, 0.17, 0.41, 1.18, 0.00054}, 0.09569);
        CevSsm model(y);
        std::vector<double> x(model.dim());
        model.default_init(x);
        std::vector<double> g(model.dim());
        model.grad_log_density(x, g);
        bool ok = true;
        for (int i : {0, 3, 11, 12, 13, 14, 15, 16}) {
            const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
            auto xa = x, xb = x;
            xa[i] += h;
            xb[i] -= h;
            const double fd = (model.log_density(xa) - model.log_density(xb)) / (2.0 * h);
            ok = ok && std::fabs(g[i] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd));
        }
        check(ok, "CEV gradient vs finite differences");
    }
    std::printf(g_failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: %d check(s) FAILED\n",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modified Cholesky Riemann manifold HMC"};
    app.require_subcommand(1);

    std::string config_path, data_override;
    long seed_override = -1;
    int replicates_override = 0;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--data", data_override, "override the model data file");
    run->add_option("--seed-override", seed_override, "override run.seed");
    run->add_option("--replicates", replicates_override, "override run.replicates");

    auto* st = app.add_subcommand("selftest", "run built-in oracle checks");

    int sim_t = 500;
    long sim_seed = 1;
    std::string sim_out = "cev_synthetic.csv";
    auto* sim = app.add_subcommand("simulate-cev", "write a synthetic short-rate series");
    sim->add_option("--t", sim_t, "series length");
    sim->add_option("--seed", sim_seed, "simulation seed");
    sim->add_option("--out", sim_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (st->parsed()) return cmd_selftest();
        if (sim->parsed()) {
            Rng rng(static_cast<std::uint64_t>(sim_seed));
            auto y = CevSsm::simulate(rng, sim_t, {0.01, 0.17, 0.41, 1.18, 0.00054}, 0.09569);
            std::ofstream os(sim_out);
            if (!os) {
                std::cerr << "error: cannot open for writing: " << sim_out << "\n";
                return 2;
            }
            char buf[40];
            for (double v : y) {
                std::snprintf(buf, sizeof(buf), "%.17g\n", v);
                os << buf;
            }
            std::cout << "wrote " << sim_t << " observations to " << sim_out << "\n";
            return 0;
        }
        return cmd_run(config_path, data_override, seed_override, replicates_override);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
