// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_SUMDIST_IMPL_HPP
#define RRS_SUMDIST_IMPL_HPP

#include <mutex>
#include <vector>

#include "exact_expansion.hpp"
#include "rrs/sumdist.hpp"

namespace rrs {
namespace sumdist {

struct SumDistribution::Impl {
    NakagamiParams l1, l2;  // as given by the caller
    int n = 1;
    double c = 1.0;  // sqrt(m1 m2 / (o1 o2))
    CoefficientExpansion pub;
    detail::ExactExpansion exact;

    // Collapsed coefficients c_s = C_s / D^N as signed mantissa * 2^exp2,
    // the exact-to-rounding form the double fast paths consume.
    std::vector<double> cs_mant;
    std::vector<int> cs_exp2;

    // ln Gamma(j) for j = 0..u_total+2 (index by j; [0] unused).
    std::vector<double> lgamma_cache;

    mutable std::once_flag tail_once;
    mutable double tail_r = 0.0;
};

}  // namespace sumdist
}  // namespace rrs

#endif  // RRS_SUMDIST_IMPL_HPP
