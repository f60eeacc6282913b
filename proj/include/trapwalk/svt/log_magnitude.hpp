#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace trapwalk {

// Nonnegative quantity held as its natural logarithm. Zero is -inf.
class LogMagnitude {
public:
    constexpr LogMagnitude() = default;

    static constexpr LogMagnitude zero() { return LogMagnitude(-std::numeric_limits<double>::infinity()); }
    static constexpr LogMagnitude one() { return LogMagnitude(0.0); }
    static constexpr LogMagnitude from_log(double log_value) { return LogMagnitude(log_value); }
    static LogMagnitude from_value(double value);

    constexpr double log_value() const { return log_; }
    double value() const { return std::exp(log_); }
    constexpr bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

    // log(e^a + e^b)
    friend LogMagnitude operator+(LogMagnitude a, LogMagnitude b)
    {
        double hi = a.log_ > b.log_ ? a.log_ : b.log_;
        double lo = a.log_ > b.log_ ? b.log_ : a.log_;
        if (lo == -std::numeric_limits<double>::infinity())
            return LogMagnitude(hi);
        return LogMagnitude(hi + std::log1p(std::exp(lo - hi)));
    }
    LogMagnitude& operator+=(LogMagnitude other) { return *this = *this + other; }

    friend constexpr LogMagnitude operator*(LogMagnitude a, LogMagnitude b) { return LogMagnitude(a.log_ + b.log_); }
    LogMagnitude& operator*=(LogMagnitude other)
    {
        log_ += other.log_;
        return *this;
    }

    friend constexpr bool operator==(LogMagnitude a, LogMagnitude b) { return a.log_ == b.log_; }
    friend constexpr auto operator<=>(LogMagnitude a, LogMagnitude b) { return a.log_ <=> b.log_; }

private:
    constexpr explicit LogMagnitude(double log_value) : log_(log_value) {}

    double log_ = -std::numeric_limits<double>::infinity();
};

inline LogMagnitude LogMagnitude::from_value(double value)
{
    if (value < 0.0 || std::isnan(value))
        return LogMagnitude(std::numeric_limits<double>::quiet_NaN());
    return LogMagnitude(std::log(value));
}

}  // namespace trapwalk
