// SPDX-License-Identifier: Apache-2.0
#include "exact_expansion.hpp"

#include <stdexcept>

namespace rrs {
namespace sumdist {
namespace detail {

namespace {

// Rising factorial of an integer argument, exact.
mpz_class poch_z(long a, int n) {
    mpz_class r = 1;
    for (int i = 0; i < n; ++i) r *= (a + i);
    return r;
}

std::vector<mpz_class> convolve(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) {
    std::vector<mpz_class> out(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

std::vector<mpz_class> integer_base_weights(int m1, int m2) {
    // D*w_k = (m2)_{m1-1-k} (1-m2)_k binom(m1-1, k), D = (m1-1)!
    std::vector<mpz_class> w(static_cast<std::size_t>(m1));
    for (int k = 0; k < m1; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m1 - 1),
                     static_cast<unsigned long>(k));
        w[static_cast<std::size_t>(k)] =
            poch_z(m2, m1 - 1 - k) * poch_z(1 - m2, k) * binom;
    }
    return w;
}

ExactExpansion build_exact_expansion(int m1, int m2, int n_vectors) {
    if (m1 < 1 || m2 < 1 || n_vectors < 1)
        throw std::invalid_argument("build_exact_expansion: shapes and N must be >= 1");
    if (m1 > m2) std::swap(m1, m2);

    ExactExpansion e;
    e.m1 = m1;
    e.m2 = m2;
    e.n_vectors = n_vectors;
    e.u_total = n_vectors * (m1 + m2 - 1);

    const std::vector<mpz_class> base = integer_base_weights(m1, m2);

    // (D p(x))^N by binary powering on the coefficient vectors.
    std::vector<mpz_class> acc{mpz_class(1)};
    std::vector<mpz_class> sq = base;
    int n = n_vectors;
    while (n > 0) {
        if (n & 1) acc = convolve(acc, sq);
        n >>= 1;
        if (n > 0) sq = convolve(sq, sq);
    }
    e.coeff = std::move(acc);

    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(m1 - 1));
    mpz_pow_ui(e.denom.get_mpz_t(), fact.get_mpz_t(),
               static_cast<unsigned long>(n_vectors));

    // Integer identities: the coefficient sum collapses to D^N and the first
    // moment to N (1-m2)(m1-1) D^N.  A failure here is a construction bug.
    mpz_class sum = 0, first = 0;
    for (std::size_t s = 0; s < e.coeff.size(); ++s) {
        sum += e.coeff[s];
        first += static_cast<long>(s) * e.coeff[s];
    }
    if (sum != e.denom)
        throw std::logic_error("exact expansion: coefficient sum != D^N");
    mpz_class expect_first =
        mpz_class(n_vectors) * (1 - m2) * (m1 - 1) * e.denom;
    if (first != expect_first)
        throw std::logic_error("exact expansion: first-moment identity failed");

    return e;
}

}  // namespace detail
}  // namespace sumdist
}  // namespace rrs
