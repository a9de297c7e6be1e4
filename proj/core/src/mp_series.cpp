// SPDX-License-Identifier: Apache-2.0
#include "mp_series.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rrs {
namespace sumdist {
namespace detail {

namespace {

// RAII array of mpfr values at a common precision.
class MpVec {
 public:
    MpVec(std::size_t n, mpfr_prec_t prec) : v_(n) {
        for (auto& s : v_) mpfr_init2(&s, prec);
    }
    ~MpVec() {
        for (auto& s : v_) mpfr_clear(&s);
    }
    MpVec(const MpVec&) = delete;
    MpVec& operator=(const MpVec&) = delete;
    mpfr_ptr operator[](std::size_t i) { return &v_[i]; }
    std::size_t size() const { return v_.size(); }

 private:
    std::vector<__mpfr_struct> v_;
};

class Mp {
 public:
    explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    operator mpfr_ptr() { return v_; }
    operator mpfr_srcptr() const { return v_; }

 private:
    mpfr_t v_;
};

// mpfr_get_exp / mpfr_zero_p are macros in some MPFR builds and bypass the
// Mp conversion operators; these force the pointer conversion.
inline mpfr_exp_t exp_of(mpfr_srcptr v) { return mpfr_get_exp(v); }
inline bool is_zero(mpfr_srcptr v) { return mpfr_zero_p(v) != 0; }

// K_0 and K_1 by the ascending logarithmic series.  The two halves of the
// series cancel by a factor ~e^{2x}, so the working precision carries an
// extra 2x/ln2 bits.
void k01_ascending(mpfr_ptr K0, mpfr_ptr K1, mpfr_srcptr x, mpfr_prec_t out_bits) {
    const double xd = mpfr_get_d(x, MPFR_RNDN);
    const mpfr_prec_t wp =
        out_bits + static_cast<mpfr_prec_t>(2.9 * xd) + 64;

    Mp q(wp), lh(wp), gam(wp), t(wp), u(wp), H(wp), Hn(wp), tmp(wp), tmp2(wp);
    Mp I0(wp), S0(wp), J1(wp), S1(wp);

    mpfr_sqr(q, x, MPFR_RNDN);
    mpfr_div_ui(q, q, 4, MPFR_RNDN);          // q = x^2/4
    mpfr_div_ui(lh, x, 2, MPFR_RNDN);
    mpfr_log(lh, lh, MPFR_RNDN);               // ln(x/2)
    mpfr_const_euler(gam, MPFR_RNDN);

    mpfr_set_ui(t, 1, MPFR_RNDN);              // q^k / (k!)^2
    mpfr_set_ui(u, 1, MPFR_RNDN);              // q^k / (k! (k+1)!)
    mpfr_set_ui(H, 0, MPFR_RNDN);              // H_k
    mpfr_set_ui(Hn, 1, MPFR_RNDN);             // H_{k+1}
    mpfr_set_ui(I0, 1, MPFR_RNDN);
    mpfr_set_ui(S0, 0, MPFR_RNDN);
    mpfr_set_ui(J1, 1, MPFR_RNDN);
    mpfr_set_ui(S1, 1, MPFR_RNDN);             // k=0 term: (H_0 + H_1) u_0 = 1

    for (unsigned long k = 1; k < 200000; ++k) {
        mpfr_mul(t, t, q, MPFR_RNDN);
        mpfr_div_ui(t, t, k, MPFR_RNDN);
        mpfr_div_ui(t, t, k, MPFR_RNDN);
        mpfr_mul(u, u, q, MPFR_RNDN);
        mpfr_div_ui(u, u, k, MPFR_RNDN);
        mpfr_div_ui(u, u, k + 1, MPFR_RNDN);
        mpfr_set_ui(tmp, 1, MPFR_RNDN);
        mpfr_div_ui(tmp, tmp, k, MPFR_RNDN);
        mpfr_add(H, H, tmp, MPFR_RNDN);        // H_k
        mpfr_set_ui(tmp, 1, MPFR_RNDN);
        mpfr_div_ui(tmp, tmp, k + 1, MPFR_RNDN);
        mpfr_add(Hn, Hn, tmp, MPFR_RNDN);      // H_{k+1}

        mpfr_add(I0, I0, t, MPFR_RNDN);
        mpfr_mul(tmp, t, H, MPFR_RNDN);
        mpfr_add(S0, S0, tmp, MPFR_RNDN);
        mpfr_add(J1, J1, u, MPFR_RNDN);
        mpfr_add(tmp, H, Hn, MPFR_RNDN);
        mpfr_mul(tmp, tmp, u, MPFR_RNDN);
        mpfr_add(S1, S1, tmp, MPFR_RNDN);

        // Terms are positive and eventually decay factorially.
        if (is_zero(t) ||
            (exp_of(t) + static_cast<mpfr_exp_t>(wp) <
             exp_of(I0) - 8 && k > static_cast<unsigned long>(xd)))
            break;
    }

    // K0 = -(ln(x/2) + gamma) I0 + S0
    mpfr_add(tmp, lh, gam, MPFR_RNDN);
    mpfr_mul(tmp, tmp, I0, MPFR_RNDN);
    mpfr_sub(K0, S0, tmp, MPFR_RNDN);

    // K1 = 1/x + ln(x/2) I1 - (x/4)(S1 - 2 gamma J1),  I1 = (x/2) J1.
    // The assembly cancels by ~e^{2x}, so it must stay at working precision
    // until the one final rounding into K1.
    mpfr_mul(tmp, J1, gam, MPFR_RNDN);
    mpfr_mul_ui(tmp, tmp, 2, MPFR_RNDN);
    mpfr_sub(tmp, S1, tmp, MPFR_RNDN);
    mpfr_mul(tmp, tmp, x, MPFR_RNDN);
    mpfr_div_ui(tmp, tmp, 4, MPFR_RNDN);       // (x/4)(S1 - 2 gamma J1)
    mpfr_mul(tmp2, x, J1, MPFR_RNDN);
    mpfr_div_ui(tmp2, tmp2, 2, MPFR_RNDN);
    mpfr_mul(tmp2, tmp2, lh, MPFR_RNDN);       // ln(x/2) I1
    mpfr_ui_div(H, 1, x, MPFR_RNDN);           // H is free here
    mpfr_add(tmp2, tmp2, H, MPFR_RNDN);
    mpfr_sub(K1, tmp2, tmp, MPFR_RNDN);
}

// K_0 and K_1 from the large-argument expansion
// K_v(x) = sqrt(pi/(2x)) e^{-x} sum_k prod_j (4v^2-(2j-1)^2)/(8xj);
// usable once the optimally truncated tail e^{-2x} is below the target.
void k01_asymptotic(mpfr_ptr K0, mpfr_ptr K1, mpfr_srcptr x, mpfr_prec_t out_bits) {
    const mpfr_prec_t wp = out_bits + 64;
    Mp t(wp), s(wp), pref(wp), tmp(wp);

    for (int v = 0; v <= 1; ++v) {
        mpfr_set_ui(t, 1, MPFR_RNDN);
        mpfr_set_ui(s, 1, MPFR_RNDN);
        const long fourv2 = 4 * v * v;
        mpfr_exp_t prev_exp = 1;
        for (unsigned long k = 1; k < 100000; ++k) {
            const long num = fourv2 - static_cast<long>((2 * k - 1) * (2 * k - 1));
            mpfr_mul_si(t, t, num, MPFR_RNDN);
            mpfr_div_ui(t, t, 8 * k, MPFR_RNDN);
            mpfr_div(t, t, x, MPFR_RNDN);
            if (is_zero(t)) break;
            // Divergent tail: stop at the smallest term.
            if (k > 1 && exp_of(t) >= prev_exp) break;
            prev_exp = exp_of(t);
            mpfr_add(s, s, t, MPFR_RNDN);
            if (exp_of(t) < exp_of(s) - static_cast<mpfr_exp_t>(out_bits) - 8)
                break;
        }
        mpfr_set(v == 0 ? K0 : K1, static_cast<mpfr_srcptr>(s), MPFR_RNDN);
    }

    // pref = sqrt(pi/(2x)) e^{-x}
    mpfr_const_pi(pref, MPFR_RNDN);
    mpfr_div(pref, pref, x, MPFR_RNDN);
    mpfr_div_ui(pref, pref, 2, MPFR_RNDN);
    mpfr_sqrt(pref, pref, MPFR_RNDN);
    mpfr_neg(tmp, x, MPFR_RNDN);
    mpfr_exp(tmp, tmp, MPFR_RNDN);
    mpfr_mul(pref, pref, tmp, MPFR_RNDN);
    mpfr_mul(K0, K0, pref, MPFR_RNDN);
    mpfr_mul(K1, K1, pref, MPFR_RNDN);
}

// Fills K[v] = K_v(x), v = 0..vmax.  MPFR's exponent range makes the upward
// recurrence overflow-free.
void k_ladder(MpVec& K, mpfr_srcptr x, int vmax, mpfr_prec_t prec) {
    const double xd = mpfr_get_d(x, MPFR_RNDN);
    if (xd >= 0.35 * static_cast<double>(prec + 40))
        k01_asymptotic(K[0], K[1], x, prec + 32);
    else
        k01_ascending(K[0], K[1], x, prec + 32);
    if (vmax < 1) return;

    Mp t(prec + 32);
    for (int v = 1; v < vmax; ++v) {
        // K_{v+1} = K_{v-1} + (2v/x) K_v
        mpfr_mul_ui(t, K[static_cast<std::size_t>(v)], 2 * static_cast<unsigned long>(v),
                    MPFR_RNDN);
        mpfr_div(t, t, x, MPFR_RNDN);
        mpfr_add(K[static_cast<std::size_t>(v) + 1], K[static_cast<std::size_t>(v) - 1], t,
                 MPFR_RNDN);
    }
}

struct Scratch {
    mpfr_prec_t wp;
    Mp c, cr, x, A, term, sum, tmp;
    explicit Scratch(mpfr_prec_t p)
        : wp(p), c(p), cr(p), x(p), A(p), term(p), sum(p), tmp(p) {}
};

// c = sqrt(m1 m2 / (omega1 omega2)) and friends.
void setup_scale(Scratch& s, const ExactExpansion& e, double o1, double o2, double r) {
    mpfr_set_d(s.tmp, o1, MPFR_RNDN);
    mpfr_mul_d(s.tmp, s.tmp, o2, MPFR_RNDN);
    mpfr_ui_div(s.c, static_cast<unsigned long>(e.m1) * static_cast<unsigned long>(e.m2),
                s.tmp, MPFR_RNDN);
    mpfr_sqrt(s.c, s.c, MPFR_RNDN);
    mpfr_mul_d(s.cr, s.c, r, MPFR_RNDN);
    mpfr_mul_ui(s.x, s.cr, 2, MPFR_RNDN);
}

MpSum finish(Scratch& s, mpfr_exp_t max_exp, bool any_term) {
    MpSum out;
    out.value = mpfr_get_d(s.sum, MPFR_RNDN);
    if (!any_term || is_zero(s.sum)) {
        out.log2_kappa = static_cast<double>(s.wp);  // force a retry upstairs
        out.value = 0.0;
        return out;
    }
    out.log2_kappa =
        std::max(0.0, static_cast<double>(max_exp - exp_of(s.sum)));
    return out;
}

}  // namespace

MpSum mp_pdf_sum(const ExactExpansion& e, double omega1, double omega2,
                 double r, long prec) {
    const mpfr_prec_t wp = static_cast<mpfr_prec_t>(prec) + 64;
    Scratch s(wp);
    setup_scale(s, e, omega1, omega2, r);

    const int u_total = e.u_total;
    MpVec K(static_cast<std::size_t>(u_total), wp);  // orders 0..u_total-1
    k_ladder(K, s.x, u_total - 1, wp);

    // A(u) = 4 c^{u+1} r^u / (u-1)! / D^N, walked down in u as s ascends.
    mpfr_pow_ui(s.A, s.c, static_cast<unsigned long>(u_total) + 1, MPFR_RNDN);
    mpfr_mul_ui(s.A, s.A, 4, MPFR_RNDN);
    mpfr_set_d(s.tmp, r, MPFR_RNDN);
    mpfr_pow_ui(s.tmp, s.tmp, static_cast<unsigned long>(u_total), MPFR_RNDN);
    mpfr_mul(s.A, s.A, s.tmp, MPFR_RNDN);
    mpfr_fac_ui(s.tmp, static_cast<unsigned long>(u_total) - 1, MPFR_RNDN);
    mpfr_div(s.A, s.A, s.tmp, MPFR_RNDN);
    mpfr_set_z(s.tmp, e.denom.get_mpz_t(), MPFR_RNDN);
    mpfr_div(s.A, s.A, s.tmp, MPFR_RNDN);

    mpfr_set_ui(s.sum, 0, MPFR_RNDN);
    mpfr_exp_t max_exp = -((static_cast<mpfr_exp_t>(1)) << 40);
    bool any = false;
    for (std::size_t idx = 0; idx < e.coeff.size(); ++idx) {
        const int u = e.u_of(idx);
        if (e.coeff[idx] != 0) {
            mpfr_set_z(s.term, e.coeff[idx].get_mpz_t(), MPFR_RNDN);
            mpfr_mul(s.term, s.term, s.A, MPFR_RNDN);
            mpfr_mul(s.term, s.term, K[static_cast<std::size_t>(u) - 1], MPFR_RNDN);
            if (!is_zero(s.term)) {
                max_exp = std::max(max_exp, exp_of(s.term));
                any = true;
            }
            mpfr_add(s.sum, s.sum, s.term, MPFR_RNDN);
        }
        if (idx + 1 < e.coeff.size()) {
            mpfr_mul_ui(s.A, s.A, static_cast<unsigned long>(u) - 1, MPFR_RNDN);
            mpfr_div(s.A, s.A, s.cr, MPFR_RNDN);
        }
    }
    return finish(s, max_exp, any);
}

MpSum mp_cdf_sum(const ExactExpansion& e, double omega1, double omega2,
                 double r, long prec) {
    const mpfr_prec_t wp = static_cast<mpfr_prec_t>(prec) + 64;
    Scratch s(wp);
    setup_scale(s, e, omega1, omega2, r);

    const int u_total = e.u_total;
    MpVec K(static_cast<std::size_t>(u_total) + 1, wp);  // orders 0..u_total
    k_ladder(K, s.x, u_total, wp);

    // P(u) = 2 (c r)^u / (u-1)!;  bracket_u = 1 - P(u) K_u(2 c r)
    mpfr_pow_ui(s.A, s.cr, static_cast<unsigned long>(u_total), MPFR_RNDN);
    mpfr_mul_ui(s.A, s.A, 2, MPFR_RNDN);
    mpfr_fac_ui(s.tmp, static_cast<unsigned long>(u_total) - 1, MPFR_RNDN);
    mpfr_div(s.A, s.A, s.tmp, MPFR_RNDN);

    mpfr_set_ui(s.sum, 0, MPFR_RNDN);
    mpfr_exp_t max_exp = -((static_cast<mpfr_exp_t>(1)) << 40);
    bool any = false;
    Mp bracket(wp);
    for (std::size_t idx = 0; idx < e.coeff.size(); ++idx) {
        const int u = e.u_of(idx);
        if (e.coeff[idx] != 0) {
            mpfr_mul(bracket, s.A, K[static_cast<std::size_t>(u)], MPFR_RNDN);
            mpfr_ui_sub(bracket, 1, bracket, MPFR_RNDN);
            mpfr_set_z(s.term, e.coeff[idx].get_mpz_t(), MPFR_RNDN);
            mpfr_mul(s.term, s.term, bracket, MPFR_RNDN);
            if (!is_zero(s.term)) {
                max_exp = std::max(max_exp, exp_of(s.term));
                any = true;
            }
            mpfr_add(s.sum, s.sum, s.term, MPFR_RNDN);
        }
        if (idx + 1 < e.coeff.size()) {
            mpfr_mul_ui(s.A, s.A, static_cast<unsigned long>(u) - 1, MPFR_RNDN);
            mpfr_div(s.A, s.A, s.cr, MPFR_RNDN);
        }
    }
    mpfr_set_z(s.tmp, e.denom.get_mpz_t(), MPFR_RNDN);
    mpfr_div(s.sum, s.sum, s.tmp, MPFR_RNDN);
    MpSum out = finish(s, max_exp, any);
    // kappa was measured before dividing by D^N; correct it.
    if (any && out.value != 0.0) {
        const double denom_bits = static_cast<double>(mpz_sizeinbase(e.denom.get_mpz_t(), 2));
        out.log2_kappa = std::max(0.0, out.log2_kappa - denom_bits);
    }
    return out;
}

MpSum mp_moment_gamma(const ExactExpansion& e, double omega1, double omega2,
                      int order, long prec) {
    const mpfr_prec_t wp = static_cast<mpfr_prec_t>(prec) + 64;
    Scratch s(wp);
    Mp g(wp), hn(wp), t2(wp);

    mpfr_set_ui(hn, static_cast<unsigned long>(order), MPFR_RNDN);
    mpfr_div_ui(hn, hn, 2, MPFR_RNDN);  // n/2

    // g(u) = Gamma(n/2 + u) / Gamma(u), start at u_total.
    const int u_total = e.u_total;
    mpfr_add_ui(s.tmp, hn, static_cast<unsigned long>(u_total), MPFR_RNDN);
    mpfr_gamma(g, s.tmp, MPFR_RNDN);
    mpfr_fac_ui(s.tmp, static_cast<unsigned long>(u_total) - 1, MPFR_RNDN);
    mpfr_div(g, g, s.tmp, MPFR_RNDN);

    mpfr_set_ui(s.sum, 0, MPFR_RNDN);
    mpfr_exp_t max_exp = -((static_cast<mpfr_exp_t>(1)) << 40);
    bool any = false;
    for (std::size_t idx = 0; idx < e.coeff.size(); ++idx) {
        const int u = e.u_of(idx);
        if (e.coeff[idx] != 0) {
            mpfr_set_z(s.term, e.coeff[idx].get_mpz_t(), MPFR_RNDN);
            mpfr_mul(s.term, s.term, g, MPFR_RNDN);
            if (!is_zero(s.term)) {
                max_exp = std::max(max_exp, exp_of(s.term));
                any = true;
            }
            mpfr_add(s.sum, s.sum, s.term, MPFR_RNDN);
        }
        if (idx + 1 < e.coeff.size()) {
            // g(u-1) = g(u) (u-1) / (u-1+n/2)
            mpfr_mul_ui(g, g, static_cast<unsigned long>(u) - 1, MPFR_RNDN);
            mpfr_add_ui(t2, hn, static_cast<unsigned long>(u) - 1, MPFR_RNDN);
            mpfr_div(g, g, t2, MPFR_RNDN);
        }
    }

    // * Gamma(n/2 + 1) * (o1 o2 / (m1 m2))^{n/2} / D^N
    mpfr_add_ui(s.tmp, hn, 1, MPFR_RNDN);
    mpfr_gamma(s.tmp, s.tmp, MPFR_RNDN);
    mpfr_mul(s.sum, s.sum, s.tmp, MPFR_RNDN);
    mpfr_set_d(s.tmp, omega1, MPFR_RNDN);
    mpfr_mul_d(s.tmp, s.tmp, omega2, MPFR_RNDN);
    mpfr_div_ui(s.tmp, s.tmp,
                static_cast<unsigned long>(e.m1) * static_cast<unsigned long>(e.m2),
                MPFR_RNDN);
    mpfr_pow(s.tmp, s.tmp, hn, MPFR_RNDN);
    mpfr_mul(s.sum, s.sum, s.tmp, MPFR_RNDN);
    mpfr_set_z(s.tmp, e.denom.get_mpz_t(), MPFR_RNDN);
    mpfr_div(s.sum, s.sum, s.tmp, MPFR_RNDN);

    MpSum out = finish(s, max_exp, any);
    if (any && out.value != 0.0) {
        const double denom_bits = static_cast<double>(mpz_sizeinbase(e.denom.get_mpz_t(), 2));
        out.log2_kappa = std::max(0.0, out.log2_kappa - denom_bits);
    }
    return out;
}

double mp_adaptive(const std::function<MpSum(long)>& eval, long prec_hint) {
    long p = std::clamp(prec_hint, 96L, 1L << 16);
    for (int iter = 0; iter < 10; ++iter) {
        const MpSum s = eval(p);
        if (s.log2_kappa + 60.0 <= static_cast<double>(p)) return s.value;
        p = static_cast<long>(s.log2_kappa) + 128;
        if (p > (1L << 16))
            throw std::runtime_error("mp_adaptive: required precision exceeds 65536 bits");
    }
    throw std::runtime_error("mp_adaptive: series evaluation did not stabilize");
}

}  // namespace detail
}  // namespace sumdist
}  // namespace rrs

// Test-only hooks (not declared in any public header).
namespace rrs { namespace sumdist { namespace detail {
void debug_k01(double x, long out_bits, int route, double* k0_ln, double* k1_ln) {
    Mp xm(256), K0(out_bits + 32), K1(out_bits + 32), t(out_bits + 32);
    mpfr_set_d(xm, x, MPFR_RNDN);
    if (route == 0)
        k01_ascending(K0, K1, xm, static_cast<mpfr_prec_t>(out_bits));
    else
        k01_asymptotic(K0, K1, xm, static_cast<mpfr_prec_t>(out_bits));
    mpfr_log(t, K0, MPFR_RNDN);
    *k0_ln = mpfr_get_d(t, MPFR_RNDN);
    mpfr_log(t, K1, MPFR_RNDN);
    *k1_ln = mpfr_get_d(t, MPFR_RNDN);
}
}}}
