// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_SPECFUN_HPP
#define RRS_SPECFUN_HPP

#include <vector>

#include "rrs/log_signed.hpp"

// Self-contained special-function kernel.  Everything here is a pure
// function of its arguments and safe for unrestricted concurrent use.
//
// The modified Bessel functions of the second kind are the workhorse: the
// distribution code needs K_v(x) for integer orders up to a few thousand
// without overflow, so scaled (e^x K_v) and log variants are provided and
// high orders are reached by upward recurrence, which is stable for K.

namespace rrs {
namespace specfun {

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.
/// The sign is tracked exactly, including the exact zero that occurs when a
/// is a non-positive integer and n > -a.
LogSigned pochhammer(double a, int n);

/// e^x K_0(x) and e^x K_1(x), full double accuracy for x > 0.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

/// e^x K_v(x) for integer v >= 0, x > 0.  Throws std::overflow_error when
/// the scaled value exceeds the double range (huge v at tiny x); use
/// ln_bessel_k in that regime.
double bessel_k_scaled(int v, double x);

/// Unscaled K_v(x); underflows to 0 for large x.
double bessel_k(int v, double x);

/// ln K_v(x), finite over the whole supported range.
double ln_bessel_k(int v, double x);

/// ln K_v(x) for every order v = 0..v_max in one recurrence pass.
std::vector<double> ln_bessel_k_ladder(int v_max, double x);

/// Scaled ladder in mantissa/exponent form: e^x K_v(x) = mant[v] * 2^exp2[v]
/// with mant in [1, 2).  This is the overflow-free building block the
/// distribution evaluators consume directly.
void bessel_k_scaled_ladder(int v_max, double x,
                            std::vector<double>& mant, std::vector<int>& exp2);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

/// Upper incomplete gamma function Gamma(b, x), b > 0, x >= 0.
double upper_incomplete_gamma(double b, double x);

/// Regularized upper incomplete gamma Q(b, x) = Gamma(b, x) / Gamma(b).
double gamma_q(double b, double x);

/// Complementary error function and its log (the log variant stays
/// meaningful where erfc itself underflows).
double erfc(double x);
double ln_erfc(double x);

}  // namespace specfun
}  // namespace rrs

#endif  // RRS_SPECFUN_HPP
