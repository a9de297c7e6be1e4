// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>
#include <vector>

#include "rrs/quadrature.hpp"
#include "rrs/specfun.hpp"
#include "rrs/sumdist.hpp"
#include "sumdist_impl.hpp"

namespace rrs {
namespace sumdist {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795029;

// Per-vector E[J0(h rho)] in the finite-sum form
//   pref * sum_{k=0}^{m1-1} a_k q^{m1+m2-1-k},  q = 4c^2/(4c^2 + rho^2),
// with pref = (m1)_{m2-1}/(m2-1)! and
// a_k = (1-m1)_k (1-m2)_k / ((2-m1-m2)_k k!).
// This is a deliberately different route from the collapsed expansion the
// pdf uses: coefficients, grouping and quadrature are all independent.
struct VectorCf {
    double pref = 1.0;
    std::vector<double> a;  // a_k
    int e_top = 1;          // m1+m2-1
    double fourc2 = 4.0;

    VectorCf(int m1, int m2, double o1, double o2) {
        double p = 1.0;
        for (int i = 0; i < m2 - 1; ++i) p *= (m1 + i);       // (m1)_{m2-1}
        for (int i = 2; i <= m2 - 1; ++i) p /= i;             // /(m2-1)!
        pref = p;
        a.resize(static_cast<std::size_t>(m1));
        a[0] = 1.0;
        for (int k = 0; k + 1 < m1; ++k) {
            // ratio of consecutive coefficients
            const double num = (1.0 - m1 + k) * (1.0 - m2 + k);
            const double den = (2.0 - m1 - m2 + k) * (k + 1.0);
            a[static_cast<std::size_t>(k) + 1] = a[static_cast<std::size_t>(k)] * num / den;
        }
        e_top = m1 + m2 - 1;
        fourc2 = 4.0 * m1 * m2 / (o1 * o2);
    }

    double operator()(double rho) const {
        const double q = fourc2 / (fourc2 + rho * rho);
        // Walk k downward so qe = q^{m1+m2-1-k} only ever multiplies by q.
        double qe = std::pow(q, e_top - static_cast<int>(a.size()) + 1);
        double s = 0.0;
        for (std::size_t k = a.size(); k-- > 0;) {
            s += a[k] * qe;
            qe *= q;
        }
        return pref * s;
    }
};

double ipow(double b, int n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// McMahon expansion for the k-th positive zero of J0; plenty for partition
// points (they only need to land near the zero, not on it).
double j0_zero(int k) {
    const double b = (k - 0.25) * kPi;
    const double b2 = b * b;
    return b + (1.0 / (8.0 * b)) * (1.0 - 124.0 / (3.0 * 8.0 * 8.0 * b2) +
                                    120928.0 / (15.0 * 4096.0 * b2 * b2));
}

}  // namespace

double oracle_pdf_hankel(const SumDistribution& d, double r) {
    if (!(r > 0.0)) throw std::domain_error("oracle_pdf_hankel: requires r > 0");
    const auto& I = d.impl();
    if (I.n > 64)
        throw OracleError("oracle_pdf_hankel: oracle intended for N <= 64");

    const VectorCf cf(I.l1.m, I.l2.m, I.l1.omega, I.l2.omega);
    const int n = I.n;
    auto integrand = [&](double rho) {
        return rho * specfun::bessel_j0(r * rho) * ipow(cf(rho), n);
    };

    // Integrate between consecutive zeros of J0(r rho) and accelerate the
    // alternating segment series with the epsilon algorithm.
    const double rel_tol = 3e-10;
    const int max_seg = 4000;
    std::vector<double> partial;
    partial.reserve(128);

    quad::Options seg_opts;
    seg_opts.rel_tol = 1e-11;
    seg_opts.abs_tol = 0.0;
    seg_opts.max_intervals = 64;

    double total = 0.0;
    double max_seg_mag = 0.0;
    double prev_est = 0.0;
    bool have_prev = false;
    int stable = 0;

    for (int k = 1; k <= max_seg; ++k) {
        const double lo = (k == 1) ? 0.0 : j0_zero(k - 1) / r;
        const double hi = j0_zero(k) / r;
        seg_opts.abs_tol = std::max(1e-18, 1e-13 * max_seg_mag);
        const auto seg = quad::integrate(integrand, lo, hi, seg_opts);
        total += seg.value;
        partial.push_back(total);
        max_seg_mag = std::max(max_seg_mag, std::fabs(seg.value));

        // Direct convergence: the envelope has died out.
        if (k >= 3 && std::fabs(seg.value) < 1e-14 * max_seg_mag) return r * total;

        if (k >= 8) {
            const double est = quad::wynn_epsilon(partial);
            if (have_prev &&
                std::fabs(est - prev_est) <=
                    rel_tol * std::max(std::fabs(est), 1e-30)) {
                if (++stable >= 2) return r * est;
            } else {
                stable = 0;
            }
            prev_est = est;
            have_prev = true;
        }
    }

    std::ostringstream msg;
    msg << "oracle_pdf_hankel failed to converge at r=" << r << ": " << max_seg
        << " segments, last extrapolation delta="
        << std::fabs(prev_est - total);
    throw OracleError(msg.str());
}

}  // namespace sumdist
}  // namespace rrs
