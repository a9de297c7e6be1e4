// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_LINKMETRICS_HPP
#define RRS_LINKMETRICS_HPP

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "rrs/sumdist.hpp"

// Performance of a link assisted by a randomly reconfigurable surface: path
// loss, outage, average received SNR, ergodic capacity, bit error
// probability, amount of fading, channel quality estimation index.
//
// All functions take and return linear quantities; dB conversion happens at
// the interface layer (CLI flags carry a -db suffix).

namespace rrs {
namespace linkmetrics {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Two-hop far-field path loss l = l1 l2, l_i = C0 (d_i/d0)^{-alpha_i}.
struct PathLossModel {
    double c0 = 1.0;      // reference loss at d0, linear
    double d0 = 1.0;      // m
    double d1 = 1.0;      // m
    double d2 = 1.0;      // m
    double alpha1 = 2.0;
    double alpha2 = 2.0;

    void validate() const;
};

double equivalent_loss(const PathLossModel& p);

/// Binary schemes: conditional BEP = Gamma(b, a l gamma_t |H|^2) / (2 Gamma(b)).
struct BinaryModulation {
    double a = 1.0;
    double b = 0.5;
    std::string name = "bpsk";

    static BinaryModulation bpsk() { return {1.0, 0.5, "bpsk"}; }
    static BinaryModulation dbpsk() { return {1.0, 1.0, "dbpsk"}; }
    static BinaryModulation bfsk() { return {0.5, 0.5, "bfsk"}; }
    static BinaryModulation nbfsk() { return {0.5, 1.0, "nbfsk"}; }
};

/// M-ary schemes with Gray mapping: conditional BEP =
/// a_M sum_{k=1}^{tau_M} erfc(sqrt(b_k l gamma_t) |H|).
struct MAryModulation {
    enum class Kind { QAM, PSK };
    Kind kind = Kind::QAM;
    int M = 4;
    int tau = 1;
    double a_M = 0.5;
    std::vector<double> b;  // b_k, k = 1..tau
    std::string name = "qam:4";

    static MAryModulation qam(int M);
    static MAryModulation psk(int M);
};

using ModulationScheme = std::variant<BinaryModulation, MAryModulation>;

/// Parses "bpsk", "dbpsk", "bfsk", "nbfsk", "qam:M", "psk:M".
ModulationScheme parse_modulation(const std::string& text);

/// Conditional (fixed |H|^2 gamma) bit error probabilities.
double conditional_bep(const BinaryModulation& mod, double inst_snr);
double conditional_bep(const MAryModulation& mod, double l_gamma_t, double h);

struct LinkScenario {
    sumdist::SumDistribution dist;
    PathLossModel loss;
    double gamma_t = 1.0;    // transmit SNR, linear
    double gamma_thr = 1.0;  // outage threshold SNR, linear
    double bandwidth = 1.0;  // Hz

    void validate() const;
};

/// P_o = F_|H|( sqrt(gamma_thr / (l gamma_t)) ).
double outage_probability(const LinkScenario& s);

/// E[gamma_r] = l N Omega1 Omega2 gamma_t (independent of the shapes).
double average_received_snr(const LinkScenario& s);

/// C = B * E[log2(1 + l gamma_t |H|^2)] in bits/s, by adaptive quadrature
/// against the closed-form density.
double ergodic_capacity(const LinkScenario& s);

double bep_binary(const LinkScenario& s, const BinaryModulation& mod);
double bep_mary(const LinkScenario& s, const MAryModulation& mod);
double bep(const LinkScenario& s, const ModulationScheme& mod);

/// AoF = 1 + (1 + m1 + m2 - m1 m2) / (N m1 m2).
double aof(const sumdist::SumDistribution& d);

/// CQEI = (1 + m1 + m2 + m1 m2 (N-1)) / (N^2 m1 m2 O1 O2 l gamma_t)
///      = AoF / E[gamma_r].
double cqei(const LinkScenario& s);

}  // namespace linkmetrics
}  // namespace rrs

#endif  // RRS_LINKMETRICS_HPP
