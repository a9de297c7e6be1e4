// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_SUMDIST_HPP
#define RRS_SUMDIST_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rrs/log_signed.hpp"

namespace rrs {
namespace sumdist {

using specfun::LogSigned;

/// One hop's Nakagami-m fading law: integer shape m, spread Omega (linear
/// power units).  Integer shapes are a hard requirement: every closed form
/// below rests on the per-vector expansion terminating and on the Bessel
/// order u being a positive integer.
struct NakagamiParams {
    int m = 1;
    double omega = 1.0;
};

/// Signed coefficient expansion over the collapsed index.
///
/// The N-fold sum over (k_1..k_N) in the closed forms depends on its indices
/// only through s = sum k_i, so it collapses to the coefficients c_s of
/// (sum_k w_k x^k)^N: O(N m1) terms instead of m1^N.  The shapes are
/// normalized so the smaller one plays the role of m1 (they enter every
/// observable symmetrically).
struct CoefficientExpansion {
    int n_vectors = 1;
    int m1 = 1;  // normalized: m1 <= m2
    int m2 = 1;
    std::vector<LogSigned> base_weights;  // w_k, k = 0..m1-1
    std::vector<LogSigned> collapsed;     // c_s, s = 0..N(m1-1)
    int u_total = 1;                      // N(m1+m2-1)

    int u_of(std::size_t s) const { return u_total - static_cast<int>(s); }
    int u_min() const { return u_total - static_cast<int>(collapsed.size()) + 1; }

    // Rendered at build time from the exact rational coefficients (the
    // log-signed view cannot sum 10^40-fold cancellations).
    double exact_sum = 1.0;
    double exact_first_moment = 0.0;

    double collapsed_sum() const;           // = 1 by construction
    double collapsed_first_moment() const;  // sum_s s c_s = N(1-m2)(m1-1)
};

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The law of |H| for H = sum_{k=1}^N h_k e^{j theta_k} with double-Nakagami
/// amplitudes h_k and uniform phases.  Immutable after build(); all
/// evaluators are pure and safe for concurrent use.
class SumDistribution {
 public:
    static SumDistribution build(NakagamiParams link1, NakagamiParams link2,
                                 int n_vectors);

    const NakagamiParams& link1() const;
    const NakagamiParams& link2() const;
    int n_vectors() const;
    const CoefficientExpansion& expansion() const;

    /// c = sqrt(m1 m2 / (Omega1 Omega2)).
    double scale() const;

    double pdf(double r) const;
    double cdf(double r) const;

    /// n-th moment of |H|.  Even orders go through the exact rational
    /// simplification l!(u)_l; odd orders through the Gamma-ratio form.
    double moment(int n) const;

    /// The Gamma-ratio form of the n-th moment, kept callable on its own as
    /// a cross-check against the even-order simplification.
    double moment_gamma_form(int n) const;

    /// Characteristic function E[e^{jt|H|}] by adaptive quadrature of the
    /// defining integral, truncated at the 1 - 1e-10 quantile.
    std::complex<double> char_fn(double t) const;

    /// Survival function 1 - F(r), computed without the subtraction that
    /// would wash out deep-tail values.
    double survival(double r) const;

    /// Smallest point of the doubling grid sqrt(N O1 O2) * 2^k with
    /// survival < 1e-10; quadratures over [0, tail_radius()] are exhaustive.
    double tail_radius() const;

    /// Monte Carlo draws of |H|.  Deterministic for fixed (seed, count),
    /// independent of the number of workers (0 = hardware concurrency).
    std::vector<double> sample(std::uint64_t seed, std::size_t count,
                               unsigned workers = 0) const;

    struct Impl;
    const Impl& impl() const { return *impl_; }

 private:
    explicit SumDistribution(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

// Rayleigh-Nakagami-m special case (one hop Rayleigh): single-term closed
// forms with N m in place of u.
double special_pdf(int m, double omega1, double omega2, int n_vectors, double r);
double special_cdf(int m, double omega1, double omega2, int n_vectors, double r);
double special_moment(int m, double omega1, double omega2, int n_vectors, int order);
std::complex<double> special_char_fn(int m, double omega1, double omega2,
                                     int n_vectors, double t);

/// Density of the product of two independent Nakagami-m amplitudes (the
/// N = 1 law); shapes may be non-integer here.
double double_nakagami_pdf(double m1, double m2, double omega1, double omega2,
                           double z);

/// Independent density route: Hankel transform of the N-th power of the
/// per-vector J0 expectation, with the expectation in its finite
/// hypergeometric-sum form.  Oscillatory quadrature partitioned at J0 zeros
/// with epsilon-algorithm acceleration of the half-cycle series.
/// Intended for cross-validation at modest N (<= 64).
double oracle_pdf_hankel(const SumDistribution& d, double r);

}  // namespace sumdist
}  // namespace rrs

#endif  // RRS_SUMDIST_HPP
