// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_MCSIM_HPP
#define RRS_MCSIM_HPP

#include <cstdint>
#include <vector>

#include "rrs/linkmetrics.hpp"
#include "rrs/sumdist.hpp"

// Seeded Monte Carlo estimates with confidence intervals -- the independent
// oracle for every analytic expression in linkmetrics/sumdist.
//
// Work is split into fixed chunks; each chunk draws from a counter stream
// derived from (seed, chunk index) and partial results reduce in chunk
// order, so estimates are bit-identical whatever the worker count.

namespace rrs {
namespace mcsim {

struct McConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 1'000'000;
    std::size_t chunk_size = 10'000;
    double confidence = 0.99;
    unsigned workers = 0;  // execution hint only (0 = hardware); never affects values

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t samples_used = 0;
};

/// Fraction of draws with l gamma_t |H|^2 < gamma_thr (binomial std error).
McEstimate mc_outage(const linkmetrics::LinkScenario& s, const McConfig& cfg);

/// Sample mean of B log2(1 + l gamma_t |H|^2).
McEstimate mc_capacity(const linkmetrics::LinkScenario& s, const McConfig& cfg);

/// Semi-analytic BEP: averages the conditional BEP expression over channel
/// draws (no bit-level simulation), for variance reduction.
McEstimate mc_bep(const linkmetrics::LinkScenario& s,
                  const linkmetrics::ModulationScheme& mod, const McConfig& cfg);

/// Sample moments of |H| with delete-one-chunk jackknife std errors.
/// Orders above 8 are rejected (variance blow-up).
std::vector<McEstimate> mc_moments(const sumdist::SumDistribution& d,
                                   const McConfig& cfg,
                                   const std::vector<int>& orders);

/// Jackknifed amount-of-fading estimate mu4/mu2^2 - 1 from the same draws.
McEstimate mc_aof(const sumdist::SumDistribution& d, const McConfig& cfg);

/// Two-sided normal quantile used for the intervals, exposed for reuse.
double normal_quantile(double p);

}  // namespace mcsim
}  // namespace rrs

#endif  // RRS_MCSIM_HPP
