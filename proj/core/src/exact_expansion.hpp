// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_EXACT_EXPANSION_HPP
#define RRS_EXACT_EXPANSION_HPP

#include <gmpxx.h>

#include <vector>

namespace rrs {
namespace sumdist {
namespace detail {

// Exact integer form of the collapsed coefficient expansion.
//
// The per-vector weight polynomial p(x) = sum_k w_k x^k has rational
// coefficients with common denominator D = (m1-1)!, so D*p(x) is an integer
// polynomial and the collapsed coefficients of p(x)^N are C_s / D^N with
// C_s = [x^s] (D p(x))^N held exactly.  The alternating coefficients cancel
// by tens of decimal orders for large N, far beyond double precision, which
// is why the exact form is kept alongside the log-signed rendering.
struct ExactExpansion {
    int m1 = 1;  // normalized: m1 <= m2
    int m2 = 1;
    int n_vectors = 1;
    std::vector<mpz_class> coeff;  // C_s, s = 0 .. N*(m1-1)
    mpz_class denom;               // D^N
    int u_total = 0;               // N*(m1+m2-1); u(s) = u_total - s

    int u_of(std::size_t s) const { return u_total - static_cast<int>(s); }
};

// Integer base weights D*w_k, k = 0..m1-1 (requires m1 <= m2).
std::vector<mpz_class> integer_base_weights(int m1, int m2);

// Builds the exact expansion and verifies the two integer identities
// sum_s C_s = D^N and sum_s s C_s = N (1-m2)(m1-1) D^N.
ExactExpansion build_exact_expansion(int m1, int m2, int n_vectors);

}  // namespace detail
}  // namespace sumdist
}  // namespace rrs

#endif  // RRS_EXACT_EXPANSION_HPP
