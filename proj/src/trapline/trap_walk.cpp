#include "trapwalk/trapline/trap_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace trapwalk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t site_key(long x)
{
    // zigzag so negative sites get their own keys
    return x >= 0 ? 2 * static_cast<std::uint64_t>(x) : 2 * static_cast<std::uint64_t>(-(x + 1)) + 1;
}

// In-place log-sum-exp; terms below e^-40 relative change nothing at double precision.
inline void accumulate(double& acc, double term)
{
    if (term > acc)
        std::swap(acc, term);
    double d = term - acc;
    if (d > -40.0)
        acc += std::log1p(std::exp(d));
}

}  // namespace

TrapEnvironment::TrapEnvironment(TailFunction tail, std::uint64_t seed) : tail_(std::move(tail)), seed_(seed) {}

LogMagnitude TrapEnvironment::site_value(long x) const
{
    double u = bits_to_open01(derive_seed(seed_, site_key(x), StreamTag::environment));
    return tail_.inverse(u);
}

double TrapEnvironment::extend_to(long x)
{
    if (x >= 0) {
        while (static_cast<long>(right_.size()) <= x)
            right_.push_back(site_value(static_cast<long>(right_.size())).log_value());
        return right_[static_cast<std::size_t>(x)];
    }
    while (static_cast<long>(left_.size()) < -x)
        left_.push_back(site_value(-static_cast<long>(left_.size()) - 1).log_value());
    return left_[static_cast<std::size_t>(-x - 1)];
}

TrapEnvironment generate_environment(const TailFunction& tail, long left, long right, std::uint64_t seed)
{
    if (right < 1 || left < 0)
        throw std::invalid_argument("environment window needs left >= 0 and right >= 1");
    TrapEnvironment env(tail, seed);
    env.log_tau(right);
    if (left > 0)
        env.log_tau(-left);
    return env;
}

StepBudgetExceeded::StepBudgetExceeded(std::uint64_t budget)
    : std::runtime_error("embedded walk exceeded its step budget of " + std::to_string(budget) + " steps")
{
}

WalkRecord run_to_level(TrapEnvironment& env, double beta, long level, Rng& rng, const WalkOptions& options)
{
    if (!(beta > 1.0))
        throw std::invalid_argument("bias beta must exceed 1");
    if (level < 1)
        throw std::invalid_argument("target level must be positive");
    const double p_right = beta / (beta + 1.0);
    WalkRecord rec;
    rec.beta = beta;
    rec.level = level;
    rec.shallow_threshold = options.shallow_threshold;
    rec.hitting.assign(static_cast<std::size_t>(level) + 1, LogMagnitude::zero());
    for (long s : options.tracked_sites)
        rec.occupation.push_back({s, 0, LogMagnitude::zero()});
    const bool track = !rec.occupation.empty();
    const bool shallow = options.shallow_threshold.has_value();
    const double shallow_cut = shallow ? options.shallow_threshold->log_value() : 0.0;

    long y = 0, running_max = 0, backtrack = 0;
    double clock = kNegInf, shallow_clock = kNegInf;
    std::uint64_t steps = 0;
    while (y < level) {
        if (steps == options.step_budget)
            throw StepBudgetExceeded(options.step_budget);
        double lt = env.log_tau(y);
        double le = std::log(exponential1(rng));
        double term = lt + le;
        accumulate(clock, term);
        if (shallow && lt <= shallow_cut)
            accumulate(shallow_clock, term);
        if (track) {
            for (auto& occ : rec.occupation) {
                if (occ.site == y) {
                    ++occ.visits;
                    occ.time += LogMagnitude::from_log(term);
                }
            }
        }
        if (options.keep_trajectory) {
            rec.trajectory_sites.push_back(y);
            rec.trajectory_log_exp.push_back(le);
        }
        y += uniform01(rng) < p_right ? 1 : -1;
        ++steps;
        if (y > running_max) {
            running_max = y;
            rec.hitting[static_cast<std::size_t>(y)] = LogMagnitude::from_log(clock);
        } else {
            backtrack = std::min(backtrack, y - running_max);
        }
    }
    rec.final_site = y;
    rec.steps = steps;
    rec.backtrack = backtrack;
    rec.clock = LogMagnitude::from_log(clock);
    rec.shallow_clock = LogMagnitude::from_log(shallow_clock);
    return rec;
}

CadlagStep rescaled_hitting_path(const WalkRecord& record, const TailFunction& tail, long n, const std::vector<double>& grid)
{
    if (grid.empty())
        throw std::invalid_argument("hitting path grid is empty");
    std::vector<double> values;
    values.reserve(grid.size());
    const double scale = 1.0 / static_cast<double>(n);
    for (double t : grid) {
        auto k = static_cast<long>(std::floor(static_cast<double>(n) * t + 1e-9));
        if (k > record.level)
            throw std::invalid_argument("walk record does not reach level n*t for t = " + std::to_string(t));
        values.push_back(scale * tail.L(record.hitting[static_cast<std::size_t>(k)]));
    }
    return CadlagStep(scale * tail.L(LogMagnitude::zero()), grid, values, grid.back());
}

std::vector<long> position_at_timescale(TrapEnvironment& env, double beta, const std::vector<LogMagnitude>& times, Rng& rng,
                                        std::uint64_t step_budget)
{
    if (!(beta > 1.0))
        throw std::invalid_argument("bias beta must exceed 1");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw std::invalid_argument("requested clock values must be non-decreasing");
    const double p_right = beta / (beta + 1.0);
    std::vector<long> out;
    out.reserve(times.size());
    long y = 0;
    double clock = kNegInf;
    std::uint64_t steps = 0;
    std::size_t next = 0;
    while (next < times.size()) {
        if (steps == step_budget)
            throw StepBudgetExceeded(step_budget);
        double after = clock;
        accumulate(after, env.log_tau(y) + std::log(exponential1(rng)));
        // the walk sits at y during [clock, after)
        while (next < times.size() && times[next].log_value() < after)
            out.push_back(y), ++next;
        clock = after;
        y += uniform01(rng) < p_right ? 1 : -1;
        ++steps;
    }
    return out;
}

long localization_site(TrapEnvironment& env, double u)
{
    if (!(u >= 1.0))
        throw std::invalid_argument("localization needs u >= 1");
    double cut = env.tail().inverse(1.0 / u).log_value();
    for (long x = 0;; ++x)
        if (env.log_tau(x) >= cut)
            return x;
}

bool aging_indicator(TrapEnvironment& env, double beta, double n, double a, double b, Rng& rng, std::uint64_t step_budget)
{
    if (!(a > 0.0) || !(b >= a))
        throw std::invalid_argument("aging needs 0 < a <= b");
    const TailFunction& tail = env.tail();
    auto sites = position_at_timescale(env, beta, {tail.inverse(1.0 / (n * a)), tail.inverse(1.0 / (n * b))}, rng, step_budget);
    return sites[0] == sites[1];
}

WalkOptions diagnostics_options(const TailFunction& tail, double n)
{
    WalkOptions opt;
    opt.shallow_threshold = critical_depth(tail, n);
    return opt;
}

EnvironmentEvents diagnostics(TrapEnvironment& env, const WalkRecord& record, double n, double T, double kappa, double gamma_prime)
{
    const auto top = static_cast<long>(std::floor(n * T));
    if (record.level != top)
        throw std::invalid_argument("walk record must stop at level nT");
    const TailFunction& tail = env.tail();
    const LogMagnitude g = critical_depth(tail, n);
    if (!record.shallow_threshold || *record.shallow_threshold != g)
        throw std::invalid_argument("walk record was not run with the shallow threshold g(n)");
    const double logn = std::log(n);
    const double reach = std::pow(logn, 1.0 + gamma_prime);
    EnvironmentEvents ev;

    ev.separated = true;
    const double gap = std::pow(n, kappa);
    long last_deep = std::numeric_limits<long>::min();
    for (long x = 1; x <= top; ++x) {
        if (env.log_tau(x) > g.log_value()) {
            if (last_deep != std::numeric_limits<long>::min() && static_cast<double>(x - last_deep) <= gap)
                ev.separated = false;
            last_deep = x;
        }
    }
    ev.clear_left = true;
    for (long x = -static_cast<long>(std::floor(reach)); x <= 0; ++x)
        if (env.log_tau(x) > g.log_value())
            ev.clear_left = false;
    ev.small_backtrack = static_cast<double>(record.backtrack) > -reach;
    ev.shallow_time_small = record.shallow_clock < tail.inverse(std::sqrt(logn) / n);
    return ev;
}

long embedded_position(double beta, std::uint64_t steps, Rng& rng)
{
    const double p_right = beta / (beta + 1.0);
    long y = 0;
    for (std::uint64_t i = 0; i < steps; ++i)
        y += uniform01(rng) < p_right ? 1 : -1;
    return y;
}

LogMagnitude sample_occupation_time(LogMagnitude tau, double beta, Rng& rng)
{
    const double escape = (beta - 1.0) / (beta + 1.0);
    std::geometric_distribution<long> failures(escape);
    long visits = 1 + failures(rng);
    LogMagnitude total = LogMagnitude::zero();
    for (long i = 0; i < visits; ++i)
        total += LogMagnitude::from_log(std::log(exponential1(rng)));
    return tau * total;
}

}  // namespace trapwalk
