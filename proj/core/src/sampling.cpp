// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <thread>
#include <vector>

#include "rrs/rng.hpp"
#include "rrs/sumdist.hpp"
#include "sumdist_impl.hpp"

namespace rrs {
namespace sumdist {

namespace {

constexpr std::size_t kChunkDraws = 4096;
constexpr double kTwoPi = 6.2831853071795864769252867665590058;

}  // namespace

// Each draw is |sum_k sqrt(G1_k G2_k) e^{j theta_k}| with G_i ~ Gamma(m_i,
// Omega_i/m_i) sampled as a sum of m_i exponentials and theta uniform.
// Chunk ci consumes only the counter stream derived from (seed, ci), so the
// output is a pure function of (seed, count) whatever the worker count.
std::vector<double> SumDistribution::sample(std::uint64_t seed, std::size_t count,
                                            unsigned workers) const {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    const int n = impl_->n;
    const int m1 = impl_->l1.m, m2 = impl_->l2.m;
    const double s1 = impl_->l1.omega / m1;
    const double s2 = impl_->l2.omega / m2;

    std::vector<double> out(count);
    const std::size_t nchunks = (count + kChunkDraws - 1) / kChunkDraws;

    auto run_chunk = [&](std::size_t ci) {
        rng::CounterStream u = rng::CounterStream::from(seed, ci);
        const std::size_t begin = ci * kChunkDraws;
        const std::size_t end = std::min(begin + kChunkDraws, count);
        for (std::size_t i = begin; i < end; ++i) {
            double re = 0.0, im = 0.0;
            for (int k = 0; k < n; ++k) {
                double g1 = 0.0;
                for (int j = 0; j < m1; ++j) g1 -= std::log(u.next_unit());
                double g2 = 0.0;
                for (int j = 0; j < m2; ++j) g2 -= std::log(u.next_unit());
                const double amp = std::sqrt(g1 * s1 * g2 * s2);
                const double th = kTwoPi * u.next_unit();
                re += amp * std::cos(th);
                im += amp * std::sin(th);
            }
            out[i] = std::sqrt(re * re + im * im);
        }
    };

    unsigned w = workers ? workers : std::thread::hardware_concurrency();
    if (w < 1) w = 1;
    w = static_cast<unsigned>(std::min<std::size_t>(w, nchunks));
    if (w == 1) {
        for (std::size_t ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(w);
        for (unsigned t = 0; t < w; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t ci = t; ci < nchunks; ci += w) run_chunk(ci);
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace sumdist
}  // namespace rrs
