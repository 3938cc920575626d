#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcrmhmc/errors.hpp"
#include "mcrmhmc/models/cev.hpp"
#include "mcrmhmc/models/funnel2d.hpp"
#include "mcrmhmc/models/funnel_ar1.hpp"
#include "mcrmhmc/models/twisted_ar1.hpp"

namespace mcrmhmc {

namespace {
// Pattern shared by the two AR(1) toys: tridiagonal latent block plus a
// dense final row for the parameter coordinate.
SymSparse ar1_pattern(int d) {
    std::vector<std::vector<int>> cols(d);
    const int m = d - 1;
    for (int j = 0; j < m; ++j) {
        cols[j].push_back(j);
        if (j + 1 < m) cols[j].push_back(j + 1);
        cols[j].push_back(m);
    }
    cols[m] = {m};
    return SymSparse::from_pattern(d, cols);
}
}  // namespace

Funnel2d::Funnel2d() { pattern_ = SymSparse::from_pattern(2, {{0, 1}, {1}}); }

std::optional<Cdf> Funnel2d::marginal_cdf(int i) const {
    if (i == 1) return Cdf([](double x) { return normal_cdf(x / 3.0); });
    return std::nullopt;
}

bool Funnel2d::sample_exact(Rng& rng, std::span<double> out) const {
    out[1] = 3.0 * rng.normal();
    out[0] = std::exp(0.5 * out[1]) * rng.normal();
    return true;
}

TwistedAr1::TwistedAr1(int d) : d_(d) {
    if (d < 3) throw ConfigError("twisted_ar1 requires d >= 3");
    pattern_ = ar1_pattern(d);
    const int m = d - 1;
    q_diag_.assign(m, (1.0 + kPhi * kPhi) / kInnovVar);
    q_diag_[0] = 1.0 / kMarginalVar + kPhi * kPhi / kInnovVar;
    q_diag_[m - 1] = 1.0 / kInnovVar;
    q_one_.resize(m);
    for (int j = 0; j < m; ++j) {
        const int neighbors = (j == 0 || j == m - 1) ? 1 : 2;
        q_one_[j] = q_diag_[j] + neighbors * kQOff;
    }
    s_one_ = std::accumulate(q_one_.begin(), q_one_.end(), 0.0);
}

std::optional<Cdf> TwistedAr1::marginal_cdf(int i) const {
    if (i == d_ - 1) return Cdf([](double x) { return normal_cdf(x); });
    return std::nullopt;
}

bool TwistedAr1::sample_exact(Rng& rng, std::span<double> out) const {
    const int m = d_ - 1;
    const double theta = rng.normal();
    const double mean = theta * theta - 1.0;
    out[m] = theta;
    out[0] = mean + std::sqrt(kMarginalVar) * rng.normal();
    const double s = std::sqrt(kInnovVar);
    for (int i = 1; i < m; ++i) out[i] = mean + kPhi * (out[i - 1] - mean) + s * rng.normal();
    return true;
}

void TwistedAr1::grad_log_density(std::span<const double> x, std::span<double> out) const {
    const int m = d_ - 1;
    const double theta = x[m];
    const double mean = theta * theta - 1.0;
    double dot = 0.0;
    for (int i = 0; i < m; ++i) {
        double qz = q_diag_[i] * (x[i] - mean);
        if (i > 0) qz += kQOff * (x[i - 1] - mean);
        if (i + 1 < m) qz += kQOff * (x[i + 1] - mean);
        out[i] = -qz;
        dot += q_one_[i] * (x[i] - mean);
    }
    out[m] = 2.0 * theta * dot - theta;
}

FunnelAr1::FunnelAr1(int d) : d_(d) {
    if (d < 3) throw ConfigError("funnel_ar1 requires d >= 3");
    pattern_ = ar1_pattern(d);
}

std::optional<Cdf> FunnelAr1::marginal_cdf(int i) const {
    if (i == d_ - 1)
        return Cdf([](double x) { return -std::expm1(-kGammaRate * std::exp(x)); });
    const double scale = std::sqrt(kC / kGammaRate);
    return Cdf([scale](double x) { return student_t2_cdf(x * scale); });
}

bool FunnelAr1::sample_exact(Rng& rng, std::span<double> out) const {
    const int m = d_ - 1;
    const double g = rng.exponential(kGammaRate);
    out[m] = std::log(g);
    out[0] = rng.normal() / std::sqrt(g * kC);
    const double s = 1.0 / std::sqrt(g);
    for (int i = 1; i < m; ++i) out[i] = kPhi * out[i - 1] + s * rng.normal();
    return true;
}

void FunnelAr1::grad_log_density(std::span<const double> x, std::span<double> out) const {
    const int m = d_ - 1;
    const double g = std::exp(x[m]);
    double quad = kC * x[0] * x[0];
    for (int i = 1; i < m; ++i) {
        const double r = x[i] - kPhi * x[i - 1];
        quad += r * r;
    }
    for (int j = 0; j < m; ++j) {
        const double cjj = (j == 0) ? kC + kPhi * kPhi : (j == m - 1 ? 1.0 : 1.0 + kPhi * kPhi);
        double cz = cjj * x[j];
        if (j > 0) cz -= kPhi * x[j - 1];
        if (j + 1 < m) cz -= kPhi * x[j + 1];
        out[j] = -g * cz;
    }
    out[m] = 0.5 * m + 1.0 - g * (0.5 * quad + kGammaRate);
}

CevSsm::CevSsm(std::vector<double> y, double delta)
    : t_len_(static_cast<int>(y.size())), delta_(delta), y_(std::move(y)) {
    if (t_len_ < 3) throw ConfigError("cev requires at least 3 observations");
    const int T = t_len_;
    std::vector<std::vector<int>> cols(T + 5);
    for (int t = 0; t < T; ++t) {
        cols[t].push_back(t);
        if (t + 1 < T) cols[t].push_back(t + 1);
        for (int k = 0; k < 5; ++k) cols[t].push_back(T + k);
    }
    for (int j = 0; j < 5; ++j)
        for (int k = j; k < 5; ++k) cols[T + j].push_back(T + k);
    pattern_ = SymSparse::from_pattern(T + 5, cols);
}

bool CevSsm::in_domain(std::span<const double> x) const {
    if (!(x[t_len_ + 3] > 0.0)) return false;
    for (int t = 0; t + 1 < t_len_; ++t)
        if (!(x[t] > 0.0)) return false;
    return true;
}

void CevSsm::default_init(std::span<double> x) const {
    const int T = t_len_;
    double pos_min = 1.0;
    for (double v : y_)
        if (v > 0.0) pos_min = std::min(pos_min, v);
    const double floor = 0.5 * pos_min;
    double mean_y = 0.0, dvar = 0.0;
    for (int t = 0; t < T; ++t) {
        x[t] = y_[t] > 0.0 ? y_[t] : floor;
        mean_y += y_[t];
        if (t > 0) dvar += (y_[t] - y_[t - 1]) * (y_[t] - y_[t - 1]);
    }
    mean_y /= T;
    dvar = std::max(dvar / (T - 1), 1e-12);
    x[T] = 0.0;                                                        // alpha
    x[T + 1] = 1.0;                                                    // beta
    x[T + 2] = std::log(0.5 * dvar / (delta_ * std::max(mean_y * mean_y, 1e-8)));
    x[T + 3] = 1.0;                                                    // gamma
    x[T + 4] = std::log(0.25 * dvar);
}

std::vector<double> CevSsm::simulate(Rng& rng, int t_len, const Params& p, double x1_mean,
                                     double delta) {
    std::vector<double> y(t_len);
    double x = x1_mean + 0.01 * rng.normal();
    y[0] = x + p.sigma_y * rng.normal();
    for (int t = 1; t < t_len; ++t) {
        x = x + delta * (p.alpha - p.beta * x) +
            p.sigma_x * std::sqrt(delta) * std::pow(x, p.gamma) * rng.normal();
        if (!(x > 0.0)) x = 1e-6;  // keep the short rate in the model domain
        y[t] = x + p.sigma_y * rng.normal();
    }
    return y;
}

}  // namespace mcrmhmc
