#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "trapwalk/random.hpp"
#include "trapwalk/svt/log_magnitude.hpp"

namespace trapwalk {

enum class TailFamily { log_power, iterated_log, table, smoothed, scaled };

// Slowly varying survival function F̄ with F̄(0) = 1. Immutable; copies share storage.
//
// log_power(γ):    F̄(u) = 1 for u <= e, (ln u)^-γ above.
// iterated_log(γ): F̄(u) = 1 for u <= e, (1 + ln ln u)^-γ above.
// table:           piecewise constant, right-continuous, from (u, F̄) rows.
class TailFunction {
public:
    static TailFunction log_power(double gamma);
    static TailFunction iterated_log(double gamma);
    static TailFunction table(std::vector<double> u, std::vector<double> survival);
    static TailFunction load_table(const std::string& csv_path);
    // min(1, factor * F̄)
    static TailFunction scaled(const TailFunction& base, double factor);

    // Continuous version Ḡ(u) = (u^-1 ∫_0^u L(v) dv)^-1, trapezoid rule on a
    // log-spaced grid over [u_lo, u_max]; constant past u_max.
    TailFunction smoothed(double u_max, std::size_t points = 4096) const;

    TailFamily family() const;
    bool continuous() const;
    std::string describe() const;

    double survival(double u) const;
    double survival(LogMagnitude u) const;
    // inf{u : F̄(u) < p}; throws std::domain_error outside (0,1] or when the
    // family never drops below p.
    LogMagnitude inverse(double p) const;
    // 1/F̄; +inf where F̄ vanishes.
    double L(LogMagnitude x) const;
    LogMagnitude sample(Rng& rng) const;

    struct LogPower { double gamma; };
    struct IteratedLog { double gamma; };
    struct Table {
        std::vector<double> log_u;  // ascending, first entry -inf (u = 0)
        std::vector<double> survival;
    };
    struct Smoothed {
        std::vector<double> log_u;  // ascending grid
        std::vector<double> survival;
    };
    struct Scaled {
        std::shared_ptr<const TailFunction> base;
        double factor;
    };

private:
    using Repr = std::variant<LogPower, IteratedLog, std::shared_ptr<const Table>, std::shared_ptr<const Smoothed>, Scaled>;
    explicit TailFunction(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

double eval_tail(const TailFunction& tf, double u);
LogMagnitude inverse_tail(const TailFunction& tf, double p);
// g(n) = F̄^-1(ln n / n)
LogMagnitude critical_depth(const TailFunction& tf, double n);
LogMagnitude sample_trap(const TailFunction& tf, Rng& rng);

}  // namespace trapwalk
