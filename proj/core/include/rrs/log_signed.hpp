// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_LOG_SIGNED_HPP
#define RRS_LOG_SIGNED_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rrs {
namespace specfun {

/// A real number stored as (sign, ln|x|).
///
/// Products of Pochhammer symbols and factorials overflow double precision
/// long before they cancel against each other, so all coefficient arithmetic
/// in the distribution code is carried out on this type.  sign == 0 encodes
/// an exact zero; log_mag is meaningless in that case.
struct LogSigned {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    LogSigned() = default;
    LogSigned(double log_magnitude, int s) : log_mag(log_magnitude), sign(s) {
        if (s < -1 || s > 1) throw std::invalid_argument("LogSigned: sign must be -1, 0 or +1");
        if (s == 0) log_mag = -std::numeric_limits<double>::infinity();
    }

    static LogSigned zero() { return LogSigned(); }
    static LogSigned one() { return LogSigned(0.0, +1); }

    static LogSigned from_value(double v) {
        if (v == 0.0) return zero();
        return LogSigned(std::log(std::fabs(v)), v > 0.0 ? +1 : -1);
    }

    bool is_zero() const { return sign == 0; }

    /// Round-trips back to double; overflows to +/-inf, underflows to 0.
    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_mag);
    }

    LogSigned operator-() const {
        LogSigned r = *this;
        r.sign = -r.sign;
        return r;
    }

    LogSigned& operator*=(const LogSigned& o) {
        sign *= o.sign;
        log_mag = (sign == 0) ? -std::numeric_limits<double>::infinity() : log_mag + o.log_mag;
        return *this;
    }
    LogSigned& operator/=(const LogSigned& o) {
        if (o.sign == 0) throw std::domain_error("LogSigned: division by zero");
        sign *= o.sign;
        log_mag = (sign == 0) ? -std::numeric_limits<double>::infinity() : log_mag - o.log_mag;
        return *this;
    }

    friend LogSigned operator*(LogSigned a, const LogSigned& b) { return a *= b; }
    friend LogSigned operator/(LogSigned a, const LogSigned& b) { return a /= b; }

    /// Signed log-sum-exp.  Cancellation between nearly equal magnitudes is
    /// inherent to the representation; callers that accumulate long
    /// alternating sums must track that themselves.
    friend LogSigned operator+(const LogSigned& a, const LogSigned& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const LogSigned& hi = (a.log_mag >= b.log_mag) ? a : b;
        const LogSigned& lo = (a.log_mag >= b.log_mag) ? b : a;
        const double d = lo.log_mag - hi.log_mag;  // <= 0
        double m;
        if (hi.sign == lo.sign) {
            m = std::log1p(std::exp(d));
        } else {
            const double t = -std::expm1(d);  // 1 - e^d in [0,1]
            if (t == 0.0) return zero();
            m = std::log(t);
        }
        return LogSigned(hi.log_mag + m, hi.sign);
    }
    friend LogSigned operator-(const LogSigned& a, const LogSigned& b) { return a + (-b); }

    /// |x|^n with the sign raised to the n-th power; n >= 0.
    LogSigned pow(int n) const {
        if (n < 0) throw std::domain_error("LogSigned::pow: negative exponent");
        if (n == 0) return one();
        if (sign == 0) return zero();
        int s = (sign < 0 && (n & 1)) ? -1 : +1;
        return LogSigned(log_mag * n, s);
    }
};

}  // namespace specfun
}  // namespace rrs

#endif  // RRS_LOG_SIGNED_HPP
