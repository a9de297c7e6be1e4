// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_QUADRATURE_HPP
#define RRS_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace rrs {
namespace quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    long evaluations = 0;
    bool converged = false;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
    // Extra initial subdivision points inside (a, b); used to seed the
    // adaptive refinement with known features (integrand knees, quantiles).
    std::vector<double> split_points;
};

/// Globally adaptive Gauss-Kronrod (7, 15) integration on [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = Options{});

/// One (7, 15) panel; returns the Kronrod value, writes the error estimate.
double gk15(const std::function<double(double)>& f, double a, double b,
            double* abs_err);

/// Wynn epsilon acceleration of a sequence of partial sums; returns the
/// best available extrapolation (used for slowly converging alternating
/// series of Bessel half-cycle integrals).
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace quad
}  // namespace rrs

#endif  // RRS_QUADRATURE_HPP
