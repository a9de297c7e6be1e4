// SPDX-License-Identifier: Apache-2.0
#include "rrs/sumdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mp_series.hpp"
#include "rrs/quadrature.hpp"
#include "rrs/specfun.hpp"
#include "sumdist_impl.hpp"

namespace rrs {
namespace sumdist {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kLn4 = 2.0 * kLn2;
constexpr double kTwoPi = 6.2831853071795864769252867665590058;

// Beyond this many decimal digits of cancellation the double fast path hands
// the point to the exact-coefficient MPFR evaluation.
constexpr double kKappaSafe = 1e4;

constexpr double kTailEps = 1e-10;

struct FastEval {
    double value = 0.0;
    double kappa = 1.0;     // max |term| / |sum|
    double max_term = 0.0;  // magnitude of the largest term
};

// Renders an exact integer ratio A/B as signed mantissa * 2^exp2.
void mpz_ratio_split(const mpz_class& a, const mpz_class& b, double& mant, int& e2) {
    if (a == 0) {
        mant = 0.0;
        e2 = 0;
        return;
    }
    long ea = 0, eb = 0;
    const double da = mpz_get_d_2exp(&ea, a.get_mpz_t());
    const double db = mpz_get_d_2exp(&eb, b.get_mpz_t());
    mant = da / db;  // |mant| in (0.5, 2)
    e2 = static_cast<int>(ea - eb);
}

LogSigned logsigned_from_split(double mant, int e2) {
    if (mant == 0.0) return LogSigned::zero();
    return LogSigned(std::log(std::fabs(mant)) + e2 * kLn2, mant > 0.0 ? +1 : -1);
}

struct Scratch {
    std::vector<double> kmant;
    std::vector<int> kexp2;
    std::vector<double> tm;
    std::vector<int> te;
};
Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// Sums terms given as mantissa/exponent pairs, aligned to the largest
// exponent, with Neumaier compensation.  Reports the cancellation ratio.
FastEval sum_terms(const std::vector<double>& tm, const std::vector<int>& te,
                   std::size_t n, int emax) {
    double sum = 0.0, comp = 0.0, maxs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (tm[i] == 0.0) continue;
        const double v = std::ldexp(tm[i], te[i] - emax);
        maxs = std::max(maxs, std::fabs(v));
        const double t = sum + v;
        comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    sum += comp;
    FastEval fe;
    fe.value = std::ldexp(sum, emax);
    fe.max_term = std::ldexp(maxs, emax);
    fe.kappa = (sum != 0.0) ? maxs / std::fabs(sum)
                            : std::numeric_limits<double>::infinity();
    return fe;
}

// f(r) = sum_s c_s 4 c^{u+1} r^u K_{u-1}(2cr) / (u-1)!  in exponent-aligned
// double arithmetic.  The Bessel ladder, the factor walk A(u) and the
// coefficients each contribute ~1e-13 relative per term, so the result is
// trusted only while kappa stays below kKappaSafe.
FastEval pdf_fast(const SumDistribution::Impl& I, double r) {
    const double c = I.c;
    const double z = c * r;
    const double x = 2.0 * z;
    const int ut = I.exact.u_total;
    Scratch& sc = scratch();
    specfun::bessel_k_scaled_ladder(ut - 1, x, sc.kmant, sc.kexp2);

    const std::size_t S = I.cs_mant.size();
    sc.tm.resize(S);
    sc.te.resize(S);

    // A(u_total) = 4 c^{u_total+1} r^{u_total} / (u_total-1)! * e^{-x}
    // (the e^{-x} unscales the ladder).
    const double lnA = kLn4 + (ut + 1) * std::log(c) + ut * std::log(r) -
                       I.lgamma_cache[static_cast<std::size_t>(ut)] - x;
    int Ae = static_cast<int>(std::floor(lnA / kLn2));
    double Am = std::exp(lnA - Ae * kLn2);  // in [1, 2)

    int emax = std::numeric_limits<int>::min();
    for (std::size_t s = 0; s < S; ++s) {
        const int u = ut - static_cast<int>(s);
        const double m = I.cs_mant[s] * Am * sc.kmant[static_cast<std::size_t>(u) - 1];
        if (m != 0.0) {
            const int e = I.cs_exp2[s] + Ae + sc.kexp2[static_cast<std::size_t>(u) - 1];
            sc.tm[s] = m;
            sc.te[s] = e;
            emax = std::max(emax, e + std::ilogb(std::fabs(m)));
        } else {
            sc.tm[s] = 0.0;
            sc.te[s] = 0;
        }
        if (s + 1 < S) {
            Am *= (u - 1) / z;
            int de;
            Am = 2.0 * std::frexp(Am, &de);
            Ae += de - 1;
        }
    }
    return sum_terms(sc.tm, sc.te, S, emax);
}

// 1 - 2 (cr)^u K_u(2cr) / (u-1)! for a single order, given the scaled-K
// mantissa form.  Near the origin the direct subtraction washes out, so a
// truncated expansion in z^2 takes over when its omitted log-part is
// provably negligible.
double bracket_value(int u, double z, double B_direct,
                     const std::vector<double>& lg) {
    const double z2 = z * z;
    if (u >= 2 && z2 <= 0.125 * (u - 1)) {
        const double lead = z2 / (u - 1);
        const double logpart = kLn2 + 2.0 * u * std::log(z) +
                               std::log(std::max(-std::log(z), 1.0)) -
                               lg[static_cast<std::size_t>(u)] -
                               lg[static_cast<std::size_t>(u) + 1];
        if (logpart < std::log(lead) - 39.0) {  // omitted part < 1e-17 * lead
            double term = lead, b = lead;
            for (int k = 1; k < u - 1; ++k) {
                term *= -z2 / (static_cast<double>(u - k - 1) * (k + 1));
                b += term;
                if (std::fabs(term) < 1e-18 * std::fabs(b)) break;
            }
            return b;
        }
    }
    return 1.0 - B_direct;
}

// F(r) = sum_s c_s [1 - 2 (cr)^u K_u(2cr) / (u-1)!], or the survival sum
// sum_s c_s B_u when survival_mode is set.
FastEval cdf_fast(const SumDistribution::Impl& I, double r, bool survival_mode) {
    const double c = I.c;
    const double z = c * r;
    const double x = 2.0 * z;
    const int ut = I.exact.u_total;
    Scratch& sc = scratch();
    specfun::bessel_k_scaled_ladder(ut, x, sc.kmant, sc.kexp2);

    const std::size_t S = I.cs_mant.size();
    sc.tm.resize(S);
    sc.te.resize(S);

    // P(u_total) = 2 (cr)^{u_total} / (u_total-1)! * e^{-x}
    const double lnP = kLn2 + ut * std::log(z) -
                       I.lgamma_cache[static_cast<std::size_t>(ut)] - x;
    int Pe = static_cast<int>(std::floor(lnP / kLn2));
    double Pm = std::exp(lnP - Pe * kLn2);

    int emax = std::numeric_limits<int>::min();
    for (std::size_t s = 0; s < S; ++s) {
        const int u = ut - static_cast<int>(s);
        const double B =
            std::ldexp(Pm * sc.kmant[static_cast<std::size_t>(u)],
                       Pe + sc.kexp2[static_cast<std::size_t>(u)]);
        const double g =
            survival_mode ? B : bracket_value(u, z, B, I.lgamma_cache);
        const double m = I.cs_mant[s] * g;
        if (m != 0.0) {
            sc.tm[s] = m;
            sc.te[s] = I.cs_exp2[s];
            emax = std::max(emax, I.cs_exp2[s] + std::ilogb(std::fabs(m)));
        } else {
            sc.tm[s] = 0.0;
            sc.te[s] = 0;
        }
        if (s + 1 < S) {
            Pm *= (u - 1) / z;
            int de;
            Pm = 2.0 * std::frexp(Pm, &de);
            Pe += de - 1;
        }
    }
    return sum_terms(sc.tm, sc.te, S, emax);
}

void validate_params(const NakagamiParams& p, const char* which) {
    if (p.m < 1)
        throw std::invalid_argument(std::string(which) + ": shape m must be a positive integer");
    if (!(p.omega > 0.0) || !std::isfinite(p.omega))
        throw std::invalid_argument(std::string(which) + ": omega must be positive and finite");
}

}  // namespace

double CoefficientExpansion::collapsed_sum() const { return exact_sum; }
double CoefficientExpansion::collapsed_first_moment() const { return exact_first_moment; }

SumDistribution::SumDistribution(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

SumDistribution SumDistribution::build(NakagamiParams link1, NakagamiParams link2,
                                       int n_vectors) {
    validate_params(link1, "link1");
    validate_params(link2, "link2");
    if (n_vectors < 1) throw std::invalid_argument("n_vectors must be >= 1");

    auto impl = std::make_shared<Impl>();
    impl->l1 = link1;
    impl->l2 = link2;
    impl->n = n_vectors;
    impl->c = std::sqrt(static_cast<double>(link1.m) * link2.m /
                        (link1.omega * link2.omega));
    impl->exact = detail::build_exact_expansion(link1.m, link2.m, n_vectors);

    const auto& e = impl->exact;
    CoefficientExpansion& pub = impl->pub;
    pub.n_vectors = n_vectors;
    pub.m1 = e.m1;
    pub.m2 = e.m2;
    pub.u_total = e.u_total;

    mpz_class base_denom;
    mpz_fac_ui(base_denom.get_mpz_t(), static_cast<unsigned long>(e.m1 - 1));
    for (const auto& w : detail::integer_base_weights(e.m1, e.m2)) {
        double m;
        int e2;
        mpz_ratio_split(w, base_denom, m, e2);
        pub.base_weights.push_back(logsigned_from_split(m, e2));
    }

    impl->cs_mant.resize(e.coeff.size());
    impl->cs_exp2.resize(e.coeff.size());
    mpq_class sum_q = 0, first_q = 0;
    for (std::size_t s = 0; s < e.coeff.size(); ++s) {
        mpz_ratio_split(e.coeff[s], e.denom, impl->cs_mant[s], impl->cs_exp2[s]);
        pub.collapsed.push_back(logsigned_from_split(impl->cs_mant[s], impl->cs_exp2[s]));
        mpq_class q(e.coeff[s], e.denom);
        q.canonicalize();
        sum_q += q;
        first_q += static_cast<long>(s) * q;
    }
    pub.exact_sum = sum_q.get_d();
    pub.exact_first_moment = first_q.get_d();

    impl->lgamma_cache.resize(static_cast<std::size_t>(e.u_total) + 3);
    impl->lgamma_cache[0] = 0.0;
    for (std::size_t j = 1; j < impl->lgamma_cache.size(); ++j)
        impl->lgamma_cache[j] = specfun::ln_gamma(static_cast<double>(j));

    return SumDistribution(std::move(impl));
}

const NakagamiParams& SumDistribution::link1() const { return impl_->l1; }
const NakagamiParams& SumDistribution::link2() const { return impl_->l2; }
int SumDistribution::n_vectors() const { return impl_->n; }
const CoefficientExpansion& SumDistribution::expansion() const { return impl_->pub; }
double SumDistribution::scale() const { return impl_->c; }

double SumDistribution::pdf(double r) const {
    if (r < 0.0 || !std::isfinite(r)) throw std::domain_error("pdf: requires r >= 0");
    if (r == 0.0) return 0.0;  // r^u K_{u-1} -> r * const for u >= 1

    FastEval fe = pdf_fast(*impl_, r);
    double v = fe.value;
    if (fe.kappa > kKappaSafe) {
        const long hint =
            static_cast<long>(std::log2(std::min(fe.kappa, 1e300))) + 128;
        v = detail::mp_adaptive(
            [&](long p) {
                return detail::mp_pdf_sum(impl_->exact, impl_->l1.omega,
                                          impl_->l2.omega, r, p);
            },
            hint);
    }
    if (v < 0.0) {
        if (-v <= 1e-9 * fe.max_term + 1e-300) return 0.0;
        throw std::logic_error("pdf: negative value beyond the signed-series tolerance");
    }
    return v;
}

double SumDistribution::cdf(double r) const {
    if (r < 0.0 || !std::isfinite(r)) throw std::domain_error("cdf: requires r >= 0");
    if (r == 0.0) return 0.0;

    FastEval fe = cdf_fast(*impl_, r, /*survival_mode=*/false);
    double v = fe.value;
    if (fe.kappa > kKappaSafe) {
        const long hint =
            static_cast<long>(std::log2(std::min(fe.kappa, 1e300))) + 128;
        v = detail::mp_adaptive(
            [&](long p) {
                return detail::mp_cdf_sum(impl_->exact, impl_->l1.omega,
                                          impl_->l2.omega, r, p);
            },
            hint);
    }
    if (v < -1e-9 || v > 1.0 + 1e-9)
        throw std::logic_error("cdf: value escaped [0,1] beyond tolerance");
    return std::clamp(v, 0.0, 1.0);
}

double SumDistribution::survival(double r) const {
    if (r < 0.0 || !std::isfinite(r)) throw std::domain_error("survival: requires r >= 0");
    if (r == 0.0) return 1.0;
    FastEval fe = cdf_fast(*impl_, r, /*survival_mode=*/true);
    if (fe.kappa > kKappaSafe) return std::max(0.0, 1.0 - cdf(r));
    return std::clamp(fe.value, 0.0, 1.0);
}

double SumDistribution::moment(int n) const {
    if (n < 0) throw std::domain_error("moment: requires n >= 0");
    if (n == 0) return 1.0;
    const auto& e = impl_->exact;
    if (n % 2 == 0) {
        // mu^{2l} = (o1 o2/(m1 m2))^l  sum_s c_s l! (u)_l, exact in rationals.
        const int l = n / 2;
        mpz_class acc = 0;
        for (std::size_t s = 0; s < e.coeff.size(); ++s) {
            if (e.coeff[s] == 0) continue;
            mpz_class p = 1;
            const int u = e.u_of(s);
            for (int i = 0; i < l; ++i) p *= (u + i);
            acc += e.coeff[s] * p;
        }
        mpz_class lfac;
        mpz_fac_ui(lfac.get_mpz_t(), static_cast<unsigned long>(l));
        mpq_class q(acc * lfac, e.denom);
        q.canonicalize();
        const double scale2 = impl_->l1.omega * impl_->l2.omega /
                              (static_cast<double>(e.m1) * e.m2);
        return q.get_d() * std::pow(scale2, l);
    }
    return moment_gamma_form(n);
}

double SumDistribution::moment_gamma_form(int n) const {
    if (n < 0) throw std::domain_error("moment_gamma_form: requires n >= 0");
    if (n == 0) return 1.0;
    const auto& e = impl_->exact;
    const double o1 = impl_->l1.omega, o2 = impl_->l2.omega;
    if (e.coeff.size() == 1) {
        const int u = e.u_total;
        const double h = 0.5 * n;
        const double lg = specfun::ln_gamma(h + 1.0) + specfun::ln_gamma(h + u) -
                          impl_->lgamma_cache[static_cast<std::size_t>(u)];
        return std::pow(o1 * o2 / (static_cast<double>(e.m1) * e.m2), h) * std::exp(lg);
    }
    // Multi-term gamma route goes straight to the exact-coefficient
    // evaluation; moments are rare calls and the cancellation profile is the
    // same as the pdf's.
    return detail::mp_adaptive(
        [&](long p) { return detail::mp_moment_gamma(e, o1, o2, n, p); }, 192);
}

double SumDistribution::tail_radius() const {
    std::call_once(impl_->tail_once, [&] {
        double R = std::sqrt(static_cast<double>(impl_->n) * impl_->l1.omega *
                             impl_->l2.omega);
        for (int i = 0; i < 200 && survival(R) >= kTailEps; ++i) R *= 2.0;
        impl_->tail_r = R;
    });
    return impl_->tail_r;
}

std::complex<double> SumDistribution::char_fn(double t) const {
    if (!std::isfinite(t)) throw std::domain_error("char_fn: t must be finite");
    if (t == 0.0) return {1.0, 0.0};  // normalization
    const double R = tail_radius();

    quad::Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-13;
    // Half-period seeding keeps the oscillation resolved before refinement.
    const double half = kTwoPi / (4.0 * std::fabs(t));
    const int nsplit = std::min(512, static_cast<int>(R / half));
    for (int k = 1; k <= nsplit; ++k) opts.split_points.push_back(k * half);

    const auto re = quad::integrate(
        [&](double r) { return pdf(r) * std::cos(t * r); }, 0.0, R, opts);
    const auto im = quad::integrate(
        [&](double r) { return pdf(r) * std::sin(t * r); }, 0.0, R, opts);
    return {re.value, im.value};
}

namespace {

// Shared single-term kernels for the Rayleigh-Nakagami special case.
double single_term_log_pdf(int u, double cs, double r) {
    const double x = 2.0 * cs * r;
    return kLn4 + (u + 1) * std::log(cs) + u * std::log(r) -
           specfun::ln_gamma(static_cast<double>(u)) + specfun::ln_bessel_k(u - 1, x);
}

double single_term_cdf(int u, double z) {
    // 1 - 2 z^u K_u(2z) / (u-1)!
    std::vector<double> mant;
    std::vector<int> exp2;
    specfun::bessel_k_scaled_ladder(u, 2.0 * z, mant, exp2);
    const double lnP = kLn2 + u * std::log(z) -
                       specfun::ln_gamma(static_cast<double>(u)) - 2.0 * z;
    const int Pe = static_cast<int>(std::floor(lnP / kLn2));
    const double Pm = std::exp(lnP - Pe * kLn2);
    const double B = std::ldexp(Pm * mant[static_cast<std::size_t>(u)],
                                Pe + exp2[static_cast<std::size_t>(u)]);
    std::vector<double> lg(static_cast<std::size_t>(u) + 2);
    for (std::size_t j = 1; j < lg.size(); ++j)
        lg[j] = specfun::ln_gamma(static_cast<double>(j));
    return bracket_value(u, z, B, lg);
}

void validate_special(int m, double o1, double o2, int n) {
    if (m < 1) throw std::invalid_argument("special case: m must be >= 1");
    if (!(o1 > 0.0) || !(o2 > 0.0))
        throw std::invalid_argument("special case: omegas must be positive");
    if (n < 1) throw std::invalid_argument("special case: N must be >= 1");
}

}  // namespace

double special_pdf(int m, double omega1, double omega2, int n_vectors, double r) {
    validate_special(m, omega1, omega2, n_vectors);
    if (r < 0.0) throw std::domain_error("special_pdf: requires r >= 0");
    if (r == 0.0) return 0.0;
    const int u = n_vectors * m;
    const double cs = std::sqrt(m / (omega1 * omega2));
    return std::exp(single_term_log_pdf(u, cs, r));
}

double special_cdf(int m, double omega1, double omega2, int n_vectors, double r) {
    validate_special(m, omega1, omega2, n_vectors);
    if (r < 0.0) throw std::domain_error("special_cdf: requires r >= 0");
    if (r == 0.0) return 0.0;
    const int u = n_vectors * m;
    const double cs = std::sqrt(m / (omega1 * omega2));
    return std::clamp(single_term_cdf(u, cs * r), 0.0, 1.0);
}

double special_moment(int m, double omega1, double omega2, int n_vectors, int order) {
    validate_special(m, omega1, omega2, n_vectors);
    if (order < 0) throw std::domain_error("special_moment: requires order >= 0");
    if (order == 0) return 1.0;
    const int u = n_vectors * m;
    const double h = 0.5 * order;
    const double lg = specfun::ln_gamma(h + 1.0) + specfun::ln_gamma(h + u) -
                      specfun::ln_gamma(static_cast<double>(u));
    return std::pow(omega1 * omega2 / m, h) * std::exp(lg);
}

std::complex<double> special_char_fn(int m, double omega1, double omega2,
                                     int n_vectors, double t) {
    validate_special(m, omega1, omega2, n_vectors);
    if (!std::isfinite(t)) throw std::domain_error("special_char_fn: t must be finite");
    if (t == 0.0) return {1.0, 0.0};
    const int u = n_vectors * m;
    const double cs = std::sqrt(m / (omega1 * omega2));

    double R = std::sqrt(static_cast<double>(n_vectors) * omega1 * omega2);
    for (int i = 0; i < 200 && 1.0 - single_term_cdf(u, cs * R) >= kTailEps; ++i)
        R *= 2.0;

    quad::Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-13;
    const double half = kTwoPi / (4.0 * std::fabs(t));
    const int nsplit = std::min(512, static_cast<int>(R / half));
    for (int k = 1; k <= nsplit; ++k) opts.split_points.push_back(k * half);

    auto f = [&](double r) {
        return (r == 0.0) ? 0.0 : std::exp(single_term_log_pdf(u, cs, r));
    };
    const auto re = quad::integrate([&](double r) { return f(r) * std::cos(t * r); },
                                    0.0, R, opts);
    const auto im = quad::integrate([&](double r) { return f(r) * std::sin(t * r); },
                                    0.0, R, opts);
    return {re.value, im.value};
}

double double_nakagami_pdf(double m1, double m2, double omega1, double omega2,
                           double z) {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(omega1 > 0.0) || !(omega2 > 0.0))
        throw std::invalid_argument("double_nakagami_pdf: parameters must be positive");
    if (z < 0.0) throw std::domain_error("double_nakagami_pdf: requires z >= 0");
    const double dv = m1 - m2;
    const int v = static_cast<int>(std::lround(std::fabs(dv)));
    if (std::fabs(std::fabs(dv) - v) > 1e-9)
        throw std::invalid_argument(
            "double_nakagami_pdf: only integer order differences m1 - m2 are supported");
    if (z == 0.0) return (v >= 1 || m1 + m2 > 1.0) ? 0.0 : std::numeric_limits<double>::infinity();
    const double cc = std::sqrt(m1 * m2 / (omega1 * omega2));
    const double lnf = kLn4 + (m1 + m2 - 1.0) * std::log(z) -
                       specfun::ln_gamma(m1) - specfun::ln_gamma(m2) +
                       (m1 + m2) * std::log(cc) + specfun::ln_bessel_k(v, 2.0 * cc * z);
    return std::exp(lnf);
}

}  // namespace sumdist
}  // namespace rrs
