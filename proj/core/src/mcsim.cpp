// SPDX-License-Identifier: Apache-2.0
#include "rrs/mcsim.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rrs/specfun.hpp"

namespace rrs {
namespace mcsim {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024157652848110453;

// Per-chunk partial sums of a per-draw statistic, reduced in chunk order.
struct ChunkSums {
    std::vector<double> sum;    // per chunk
    std::vector<double> sumsq;  // per chunk
    double total = 0.0;
    double total_sq = 0.0;
    std::size_t n = 0;
};

ChunkSums accumulate(const std::vector<double>& draws, std::size_t chunk_size,
                     const std::function<double(double)>& stat) {
    ChunkSums cs;
    const std::size_t chunks = draws.size() / chunk_size;
    cs.sum.resize(chunks);
    cs.sumsq.resize(chunks);
    cs.n = draws.size();
    for (std::size_t c = 0; c < chunks; ++c) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = c * chunk_size; i < (c + 1) * chunk_size; ++i) {
            const double v = stat(draws[i]);
            s += v;
            s2 += v * v;
        }
        cs.sum[c] = s;
        cs.sumsq[c] = s2;
        cs.total += s;
        cs.total_sq += s2;
    }
    return cs;
}

McEstimate estimate_from(const ChunkSums& cs, double confidence) {
    McEstimate e;
    e.samples_used = cs.n;
    const double n = static_cast<double>(cs.n);
    e.mean = cs.total / n;
    const double var = std::max(0.0, cs.total_sq / n - e.mean * e.mean);
    e.std_error = std::sqrt(var / n);
    const double z = normal_quantile(0.5 + confidence / 2.0);
    e.ci_low = e.mean - z * e.std_error;
    e.ci_high = e.mean + z * e.std_error;
    return e;
}

// Delete-one-chunk jackknife of a functional of per-chunk sums.
McEstimate jackknife(const std::vector<std::vector<double>>& chunk_sums,
                     std::size_t n, std::size_t chunk_size,
                     const std::function<double(const std::vector<double>&, double)>& fn,
                     double confidence) {
    const std::size_t C = chunk_sums.front().size();
    const std::size_t k = chunk_sums.size();
    std::vector<double> totals(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < C; ++c) totals[j] += chunk_sums[j][c];

    McEstimate e;
    e.samples_used = n;
    e.mean = fn(totals, static_cast<double>(n));

    std::vector<double> loo(C);
    double loo_mean = 0.0;
    std::vector<double> t(k);
    for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t j = 0; j < k; ++j) t[j] = totals[j] - chunk_sums[j][c];
        loo[c] = fn(t, static_cast<double>(n - chunk_size));
        loo_mean += loo[c];
    }
    loo_mean /= static_cast<double>(C);
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    e.std_error = std::sqrt((static_cast<double>(C) - 1.0) / C * ss);
    const double z = normal_quantile(0.5 + confidence / 2.0);
    e.ci_low = e.mean - z * e.std_error;
    e.ci_high = e.mean + z * e.std_error;
    return e;
}

}  // namespace

void McConfig::validate() const {
    if (samples < 1000)
        throw std::invalid_argument("mc: samples must be >= 1000 for CI validity");
    if (chunk_size < 1) throw std::invalid_argument("mc: chunk_size must be >= 1");
    if (samples % chunk_size != 0)
        throw std::invalid_argument("mc: chunk_size must divide samples");
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw std::invalid_argument("mc: confidence must lie in (0, 1)");
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    // Acklam's rational approximation, then one Halley step on erfc.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double pl = 0.02425;
    double x;
    if (p < pl) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - pl) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double err = 0.5 * specfun::erfc(-x / std::sqrt(2.0)) - p;
    const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

McEstimate mc_outage(const linkmetrics::LinkScenario& s, const McConfig& cfg) {
    cfg.validate();
    s.validate();
    const double l = linkmetrics::equivalent_loss(s.loss);
    const double h_thr = std::sqrt(s.gamma_thr / (l * s.gamma_t));
    const auto draws = s.dist.sample(cfg.seed, cfg.samples, cfg.workers);
    const auto cs = accumulate(draws, cfg.chunk_size,
                               [&](double h) { return h < h_thr ? 1.0 : 0.0; });
    McEstimate e;
    e.samples_used = cs.n;
    e.mean = cs.total / static_cast<double>(cs.n);
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(cs.n));
    const double z = normal_quantile(0.5 + cfg.confidence / 2.0);
    e.ci_low = std::max(0.0, e.mean - z * e.std_error);
    e.ci_high = std::min(1.0, e.mean + z * e.std_error);
    return e;
}

McEstimate mc_capacity(const linkmetrics::LinkScenario& s, const McConfig& cfg) {
    cfg.validate();
    s.validate();
    const double lg = linkmetrics::equivalent_loss(s.loss) * s.gamma_t;
    const double b = s.bandwidth;
    const auto draws = s.dist.sample(cfg.seed, cfg.samples, cfg.workers);
    const auto cs = accumulate(draws, cfg.chunk_size, [&](double h) {
        return b * std::log2(1.0 + lg * h * h);
    });
    return estimate_from(cs, cfg.confidence);
}

McEstimate mc_bep(const linkmetrics::LinkScenario& s,
                  const linkmetrics::ModulationScheme& mod, const McConfig& cfg) {
    cfg.validate();
    s.validate();
    const double lg = linkmetrics::equivalent_loss(s.loss) * s.gamma_t;
    const auto draws = s.dist.sample(cfg.seed, cfg.samples, cfg.workers);
    std::function<double(double)> stat;
    if (std::holds_alternative<linkmetrics::BinaryModulation>(mod)) {
        const auto bm = std::get<linkmetrics::BinaryModulation>(mod);
        stat = [=](double h) { return linkmetrics::conditional_bep(bm, lg * h * h); };
    } else {
        const auto mm = std::get<linkmetrics::MAryModulation>(mod);
        stat = [=](double h) { return linkmetrics::conditional_bep(mm, lg, h); };
    }
    const auto cs = accumulate(draws, cfg.chunk_size, stat);
    return estimate_from(cs, cfg.confidence);
}

std::vector<McEstimate> mc_moments(const sumdist::SumDistribution& d,
                                   const McConfig& cfg,
                                   const std::vector<int>& orders) {
    cfg.validate();
    for (int o : orders) {
        if (o < 0) throw std::invalid_argument("mc_moments: orders must be >= 0");
        if (o > 8)
            throw std::invalid_argument("mc_moments: orders above 8 rejected (variance blow-up)");
    }
    const auto draws = d.sample(cfg.seed, cfg.samples, cfg.workers);
    const std::size_t C = cfg.samples / cfg.chunk_size;

    std::vector<McEstimate> out;
    out.reserve(orders.size());
    for (int o : orders) {
        if (o == 0) {
            McEstimate e;
            e.mean = 1.0;
            e.ci_low = e.ci_high = 1.0;
            e.samples_used = cfg.samples;
            out.push_back(e);
            continue;
        }
        std::vector<std::vector<double>> sums(1, std::vector<double>(C, 0.0));
        for (std::size_t c = 0; c < C; ++c) {
            double s = 0.0;
            for (std::size_t i = c * cfg.chunk_size; i < (c + 1) * cfg.chunk_size; ++i)
                s += std::pow(draws[i], o);
            sums[0][c] = s;
        }
        out.push_back(jackknife(
            sums, cfg.samples, cfg.chunk_size,
            [](const std::vector<double>& t, double n) { return t[0] / n; },
            cfg.confidence));
    }
    return out;
}

McEstimate mc_aof(const sumdist::SumDistribution& d, const McConfig& cfg) {
    cfg.validate();
    const auto draws = d.sample(cfg.seed, cfg.samples, cfg.workers);
    const std::size_t C = cfg.samples / cfg.chunk_size;
    std::vector<std::vector<double>> sums(2, std::vector<double>(C, 0.0));
    for (std::size_t c = 0; c < C; ++c) {
        double s2 = 0.0, s4 = 0.0;
        for (std::size_t i = c * cfg.chunk_size; i < (c + 1) * cfg.chunk_size; ++i) {
            const double h2 = draws[i] * draws[i];
            s2 += h2;
            s4 += h2 * h2;
        }
        sums[0][c] = s2;
        sums[1][c] = s4;
    }
    return jackknife(
        sums, cfg.samples, cfg.chunk_size,
        [](const std::vector<double>& t, double n) {
            const double m2 = t[0] / n, m4 = t[1] / n;
            return m4 / (m2 * m2) - 1.0;
        },
        cfg.confidence);
}

}  // namespace mcsim
}  // namespace rrs
