// SPDX-License-Identifier: Apache-2.0
#include "rrs/linkmetrics.hpp"

#include <cmath>
#include <stdexcept>

#include "rrs/quadrature.hpp"
#include "rrs/specfun.hpp"

namespace rrs {
namespace linkmetrics {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

// Splits for the adaptive quadratures: a few quantile-scale points of the
// density plus an optional integrand knee.
quad::Options density_quad_options(const sumdist::SumDistribution& d, double knee) {
    quad::Options o;
    o.rel_tol = 1e-9;
    o.abs_tol = 1e-300;
    const double R = d.tail_radius();
    for (double f : {1.0 / 64, 1.0 / 16, 1.0 / 4, 1.0 / 2}) o.split_points.push_back(R * f);
    if (knee > 0.0 && knee < R) o.split_points.push_back(knee);
    return o;
}

}  // namespace

void PathLossModel::validate() const {
    if (!(c0 > 0.0)) throw std::invalid_argument("path loss: C0 must be positive");
    if (!(d0 > 0.0)) throw std::invalid_argument("path loss: d0 must be positive");
    if (!(d1 >= d0) || !(d2 >= d0))
        throw std::invalid_argument("path loss: d1, d2 must be >= d0 (far field)");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
        throw std::invalid_argument("path loss: exponents must be positive");
}

double equivalent_loss(const PathLossModel& p) {
    p.validate();
    const double l1 = p.c0 * std::pow(p.d1 / p.d0, -p.alpha1);
    const double l2 = p.c0 * std::pow(p.d2 / p.d0, -p.alpha2);
    return l1 * l2;
}

MAryModulation MAryModulation::qam(int M) {
    if (M < 4 || !is_power_of_two(M))
        throw std::invalid_argument("qam: M must be a power of two >= 4");
    const int sqrtM = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
    if (sqrtM * sqrtM != M)
        throw std::invalid_argument("qam: M must be a perfect square");
    MAryModulation m;
    m.kind = Kind::QAM;
    m.M = M;
    m.tau = sqrtM / 2;
    const double log2M = std::log2(static_cast<double>(M));
    m.a_M = 2.0 / log2M * (1.0 - 1.0 / sqrtM);
    m.b.resize(static_cast<std::size_t>(m.tau));
    for (int k = 1; k <= m.tau; ++k)
        m.b[static_cast<std::size_t>(k) - 1] =
            3.0 * log2M / (2.0 * (M - 1)) * (2.0 * k - 1.0) * (2.0 * k - 1.0);
    m.name = "qam:" + std::to_string(M);
    return m;
}

MAryModulation MAryModulation::psk(int M) {
    if (M < 4 || !is_power_of_two(M))
        throw std::invalid_argument("psk: M must be a power of two >= 4");
    MAryModulation m;
    m.kind = Kind::PSK;
    m.M = M;
    m.tau = std::max(M / 4, 1);
    const double log2M = std::log2(static_cast<double>(M));
    m.a_M = 1.0 / std::max(log2M, 2.0);
    m.b.resize(static_cast<std::size_t>(m.tau));
    for (int k = 1; k <= m.tau; ++k) {
        const double s = std::sin((2.0 * k - 1.0) / M * 3.1415926535897932384626433832795029);
        m.b[static_cast<std::size_t>(k) - 1] = log2M * s * s;
    }
    m.name = "psk:" + std::to_string(M);
    return m;
}

ModulationScheme parse_modulation(const std::string& text) {
    if (text == "bpsk") return BinaryModulation::bpsk();
    if (text == "dbpsk") return BinaryModulation::dbpsk();
    if (text == "bfsk") return BinaryModulation::bfsk();
    if (text == "nbfsk") return BinaryModulation::nbfsk();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const int M = std::stoi(text.substr(colon + 1));
        if (kind == "qam") return MAryModulation::qam(M);
        if (kind == "psk") return MAryModulation::psk(M);
    }
    throw std::invalid_argument("unknown modulation '" + text +
                                "' (expected bpsk|dbpsk|bfsk|nbfsk|qam:M|psk:M)");
}

double conditional_bep(const BinaryModulation& mod, double inst_snr) {
    return 0.5 * specfun::gamma_q(mod.b, mod.a * inst_snr);
}

double conditional_bep(const MAryModulation& mod, double l_gamma_t, double h) {
    double s = 0.0;
    for (double bk : mod.b) s += specfun::erfc(std::sqrt(bk * l_gamma_t) * h);
    return mod.a_M * s;
}

void LinkScenario::validate() const {
    loss.validate();
    if (!(gamma_t > 0.0)) throw std::invalid_argument("scenario: gamma_t must be positive");
    if (gamma_thr < 0.0) throw std::invalid_argument("scenario: gamma_thr must be >= 0");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("scenario: bandwidth must be positive");
}

double outage_probability(const LinkScenario& s) {
    s.validate();
    if (s.gamma_thr == 0.0) return 0.0;
    const double l = equivalent_loss(s.loss);
    return s.dist.cdf(std::sqrt(s.gamma_thr / (l * s.gamma_t)));
}

double average_received_snr(const LinkScenario& s) {
    s.validate();
    const double l = equivalent_loss(s.loss);
    return l * s.dist.n_vectors() * s.dist.link1().omega * s.dist.link2().omega *
           s.gamma_t;
}

double ergodic_capacity(const LinkScenario& s) {
    s.validate();
    const double lg = equivalent_loss(s.loss) * s.gamma_t;
    const auto& d = s.dist;
    const auto res = quad::integrate(
        [&](double r) { return std::log1p(lg * r * r) * d.pdf(r); }, 0.0,
        d.tail_radius(), density_quad_options(d, 0.0));
    if (!res.converged)
        throw std::runtime_error(
            "ergodic_capacity: quadrature reached interval budget at abs error " +
            std::to_string(res.error));
    return s.bandwidth / kLn2 * res.value;
}

double bep_binary(const LinkScenario& s, const BinaryModulation& mod) {
    s.validate();
    const double lg = equivalent_loss(s.loss) * s.gamma_t;
    const auto& d = s.dist;
    const double knee = 3.0 / std::sqrt(mod.a * lg);
    const auto res = quad::integrate(
        [&](double r) { return conditional_bep(mod, lg * r * r) * d.pdf(r); }, 0.0,
        d.tail_radius(), density_quad_options(d, knee));
    if (!res.converged)
        throw std::runtime_error(
            "bep_binary: quadrature reached interval budget at abs error " +
            std::to_string(res.error));
    return res.value;
}

double bep_mary(const LinkScenario& s, const MAryModulation& mod) {
    s.validate();
    const double lg = equivalent_loss(s.loss) * s.gamma_t;
    const auto& d = s.dist;
    const double knee = 3.0 / std::sqrt(mod.b.front() * lg);
    const auto res = quad::integrate(
        [&](double r) { return conditional_bep(mod, lg, r) * d.pdf(r); }, 0.0,
        d.tail_radius(), density_quad_options(d, knee));
    if (!res.converged)
        throw std::runtime_error(
            "bep_mary: quadrature reached interval budget at abs error " +
            std::to_string(res.error));
    return res.value;
}

double bep(const LinkScenario& s, const ModulationScheme& mod) {
    if (std::holds_alternative<BinaryModulation>(mod))
        return bep_binary(s, std::get<BinaryModulation>(mod));
    return bep_mary(s, std::get<MAryModulation>(mod));
}

double aof(const sumdist::SumDistribution& d) {
    const double m1 = d.link1().m, m2 = d.link2().m;
    const double n = d.n_vectors();
    return 1.0 + (1.0 + m1 + m2 - m1 * m2) / (n * m1 * m2);
}

double cqei(const LinkScenario& s) {
    s.validate();
    const auto& d = s.dist;
    const double m1 = d.link1().m, m2 = d.link2().m;
    const double n = d.n_vectors();
    const double l = equivalent_loss(s.loss);
    return (1.0 + m1 + m2 + m1 * m2 * (n - 1.0)) /
           (n * n * m1 * m2 * d.link1().omega * d.link2().omega * l * s.gamma_t);
}

}  // namespace linkmetrics
}  // namespace rrs
