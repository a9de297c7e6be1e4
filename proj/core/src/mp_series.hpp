// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_MP_SERIES_HPP
#define RRS_MP_SERIES_HPP

#include <functional>

#include "exact_expansion.hpp"

namespace rrs {
namespace sumdist {
namespace detail {

// Multi-precision evaluation of the collapsed series.
//
// The double-precision fast paths detect how much alternating cancellation a
// given evaluation point suffers (max term over sum).  Points beyond the
// double budget are re-evaluated here with MPFR at a precision chosen from
// that cancellation estimate, against the exact integer coefficients.

struct MpSum {
    double value = 0.0;
    double log2_kappa = 0.0;  // log2(max |term| / |sum|), the digits lost
};

MpSum mp_pdf_sum(const ExactExpansion& e, double omega1, double omega2,
                 double r, long prec);
MpSum mp_cdf_sum(const ExactExpansion& e, double omega1, double omega2,
                 double r, long prec);
MpSum mp_moment_gamma(const ExactExpansion& e, double omega1, double omega2,
                      int order, long prec);

// Re-evaluates at growing precision until it exceeds the observed
// cancellation by a comfortable margin.
double mp_adaptive(const std::function<MpSum(long)>& eval, long prec_hint);

}  // namespace detail
}  // namespace sumdist
}  // namespace rrs

#endif  // RRS_MP_SERIES_HPP
