#include "mcrmhmc/baselines.hpp"

#include <chrono>
#include <cmath>

#include "mcrmhmc/ad.hpp"

namespace mcrmhmc {

namespace {
void record_row(ChainRecord& rec, std::span<const double> x, bool accepted, double dh) {
    rec.draws.insert(rec.draws.end(), x.begin(), x.end());
    rec.accepted.push_back(accepted ? 1 : 0);
    rec.delta_h.push_back(dh);
}
}  // namespace

ChainRecord gibbs_twisted(const TwistedAr1& model, double r_gibbs, long n_iter, int thin,
                          Rng& rng) {
    if (!(r_gibbs > 0.0)) throw ConfigError("r_gibbs must be positive");
    const int d = model.dim();
    const int m = d - 1;
    const auto& qd = model.q_diag();
    const auto& q1 = model.q_one();
    const double qoff = TwistedAr1::q_off();
    const double s1 = model.s_one();

    std::vector<double> x(d);
    model.sample_exact(rng, x);

    ChainRecord rec;
    rec.dim = d;
    long theta_accept = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (long it = 1; it <= n_iter; ++it) {
        const double mean = x[m] * x[m] - 1.0;
        for (int i = 0; i < m; ++i) {
            double coupling = 0.0;
            if (i > 0) coupling += qoff * (x[i - 1] - mean);
            if (i + 1 < m) coupling += qoff * (x[i + 1] - mean);
            const double cmean = mean - coupling / qd[i];
            x[i] = cmean + rng.normal() / std::sqrt(qd[i]);
        }
        // x_d | latents via random-walk MH on the quadratic-in-mean kernel.
        double w = 0.0;
        for (int i = 0; i < m; ++i) w += q1[i] * x[i];
        const double theta = x[m];
        const double prop = theta + r_gibbs * rng.normal();
        auto logc = [&](double th) {
            const double mm = th * th - 1.0;
            return -0.5 * (mm * mm * s1 - 2.0 * mm * w) - 0.5 * th * th;
        };
        if (std::log(rng.uniform()) < logc(prop) - logc(theta)) {
            x[m] = prop;
            ++theta_accept;
        }
        if (it % thin == 0) record_row(rec, x, true, 0.0);
    }
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.acceptance_rate = static_cast<double>(theta_accept) / n_iter;
    return rec;
}

ChainRecord gibbs_funnel(const FunnelAr1& model, long n_iter, int thin, Rng& rng) {
    const int d = model.dim();
    const int m = d - 1;
    const double phi = FunnelAr1::kPhi;
    const double c = FunnelAr1::kC;

    std::vector<double> x(d);
    model.sample_exact(rng, x);

    ChainRecord rec;
    rec.dim = d;
    const auto t0 = std::chrono::steady_clock::now();
    for (long it = 1; it <= n_iter; ++it) {
        const double g = std::exp(x[m]);
        for (int i = 0; i < m; ++i) {
            const double cii = (i == 0) ? c + phi * phi : (i == m - 1 ? 1.0 : 1.0 + phi * phi);
            double neigh = 0.0;
            if (i > 0) neigh += phi * x[i - 1];
            if (i + 1 < m) neigh += phi * x[i + 1];
            x[i] = neigh / cii + rng.normal() / std::sqrt(g * cii);
        }
        double quad = c * x[0] * x[0];
        for (int i = 1; i < m; ++i) {
            const double r = x[i] - phi * x[i - 1];
            quad += r * r;
        }
        x[m] = std::log(rng.gamma(0.5 * m + 1.0, 0.5 * quad + FunnelAr1::kGammaRate));
        if (it % thin == 0) record_row(rec, x, true, 0.0);
    }
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.acceptance_rate = 1.0;
    return rec;
}

ChainRecord ehmc(const TargetModel& model, double epsilon, int l_min, int l_max, int n_iter,
                 Rng& rng, double jitter_fraction) {
    const int d = model.dim();
    std::vector<double> x(d), xc(d), p(d), grad(d);
    if (!model.sample_exact(rng, x)) model.default_init(x);

    auto finite = [](std::span<const double> v) {
        for (double t : v)
            if (!std::isfinite(t)) return false;
        return true;
    };

    ChainRecord rec;
    rec.dim = d;
    long n_accept = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int it = 0; it < n_iter; ++it) {
        rng.fill_normal(p);
        const int l = rng.uniform_int(l_min, l_max);
        const double eps = epsilon * (1.0 + jitter_fraction * rng.uniform(-1.0, 1.0));
        double k0 = 0.0;
        for (double v : p) k0 += 0.5 * v * v;
        const double h0 = -model.log_density(x) + k0;

        xc = x;
        bool ok = true;
        model.grad_log_density(xc, grad);
        for (int s = 0; s < l && ok; ++s) {
            for (int i = 0; i < d; ++i) p[i] += 0.5 * eps * grad[i];
            for (int i = 0; i < d; ++i) xc[i] += eps * p[i];
            model.grad_log_density(xc, grad);
            if (!finite(grad)) {
                ok = false;
                break;
            }
            for (int i = 0; i < d; ++i) p[i] += 0.5 * eps * grad[i];
        }
        double dh = std::numeric_limits<double>::quiet_NaN();
        bool accepted = false;
        if (ok && finite(xc)) {
            double k1 = 0.0;
            for (double v : p) k1 += 0.5 * v * v;
            const double h1 = -model.log_density(xc) + k1;
            dh = h1 - h0;
            if (std::log(rng.uniform()) < -dh) {
                x = xc;
                accepted = true;
                ++n_accept;
            }
        } else {
            ++rec.divergences;
        }
        record_row(rec, x, accepted, dh);
    }
    rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.acceptance_rate = static_cast<double>(n_accept) / n_iter;
    return rec;
}

}  // namespace mcrmhmc
