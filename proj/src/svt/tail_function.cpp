#include "trapwalk/svt/tail_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace trapwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_probability(double p)
{
    if (!(p > 0.0) || p > 1.0)
        throw std::domain_error("tail inverse needs p in (0, 1], got " + std::to_string(p));
}

// Linear interpolation of survival against log u on a smoothed grid.
double smoothed_at(const TailFunction::Smoothed& s, double lx)
{
    if (lx <= s.log_u.front())
        return 1.0;
    if (lx >= s.log_u.back())
        return s.survival.back();
    auto it = std::upper_bound(s.log_u.begin(), s.log_u.end(), lx);
    std::size_t k = static_cast<std::size_t>(it - s.log_u.begin());
    double w = (lx - s.log_u[k - 1]) / (s.log_u[k] - s.log_u[k - 1]);
    return s.survival[k - 1] + w * (s.survival[k] - s.survival[k - 1]);
}

}  // namespace

TailFunction TailFunction::log_power(double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("log-power tail needs gamma > 0");
    return TailFunction(LogPower{gamma});
}

TailFunction TailFunction::iterated_log(double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("iterated-log tail needs gamma > 0");
    return TailFunction(IteratedLog{gamma});
}

TailFunction TailFunction::table(std::vector<double> u, std::vector<double> survival)
{
    if (u.empty() || u.size() != survival.size())
        throw std::invalid_argument("tail table needs matching nonempty columns");
    auto t = std::make_shared<Table>();
    if (u.front() > 0.0) {
        t->log_u.push_back(-kInf);
        t->survival.push_back(1.0);
    }
    double prev_u = -1.0;
    double prev_s = 1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] >= 0.0) || u[i] <= prev_u)
            throw std::invalid_argument("tail table u column must be nonnegative and strictly increasing");
        if (!(survival[i] >= 0.0) || survival[i] > prev_s)
            throw std::invalid_argument("tail table survival column must be non-increasing within [0, 1]");
        if (u[i] == 0.0 && survival[i] != 1.0)
            throw std::invalid_argument("tail table must have survival 1 at u = 0");
        t->log_u.push_back(u[i] == 0.0 ? -kInf : std::log(u[i]));
        t->survival.push_back(survival[i]);
        prev_u = u[i];
        prev_s = survival[i];
    }
    return TailFunction(std::shared_ptr<const Table>(std::move(t)));
}

TailFunction TailFunction::load_table(const std::string& csv_path)
{
    std::ifstream in(csv_path);
    if (!in)
        throw std::invalid_argument("cannot open tail table " + csv_path);
    std::vector<double> u, s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double a, b;
        if (!(fields >> a >> b)) {
            if (u.empty())
                continue;  // header
            throw std::invalid_argument("malformed row in tail table " + csv_path + ": " + line);
        }
        u.push_back(a);
        s.push_back(b);
    }
    return table(std::move(u), std::move(s));
}

TailFunction TailFunction::scaled(const TailFunction& base, double factor)
{
    if (!(factor > 0.0))
        throw std::invalid_argument("scaled tail needs a positive factor");
    return TailFunction(Scaled{std::make_shared<const TailFunction>(base), factor});
}

TailFunction TailFunction::smoothed(double u_max, std::size_t points) const
{
    if (points < 2)
        throw std::invalid_argument("smoothing grid needs at least two points");
    // F̄ = 1 below u_lo, so the running integral starts at u_lo.
    double u_lo = std::max(inverse(1.0).value(), 1e-12);
    if (!(u_max > u_lo))
        throw std::invalid_argument("smoothing range is empty");
    auto s = std::make_shared<Smoothed>();
    double a = std::log(u_lo), b = std::log(u_max);
    double integral = u_lo;
    double prev_u = u_lo, prev_l = 1.0;
    double running = 1.0;
    for (std::size_t k = 0; k < points; ++k) {
        double lx = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
        double u = std::exp(lx);
        double l = L(LogMagnitude::from_log(lx));
        if (k > 0)
            integral += 0.5 * (prev_l + l) * (u - prev_u);
        double g = std::isinf(integral) ? 0.0 : u / integral;
        running = std::min(running, std::min(g, 1.0));
        s->log_u.push_back(lx);
        s->survival.push_back(running);
        prev_u = u;
        prev_l = l;
    }
    return TailFunction(std::shared_ptr<const Smoothed>(std::move(s)));
}

TailFamily TailFunction::family() const
{
    return std::visit(Overloaded{
                          [](const LogPower&) { return TailFamily::log_power; },
                          [](const IteratedLog&) { return TailFamily::iterated_log; },
                          [](const std::shared_ptr<const Table>&) { return TailFamily::table; },
                          [](const std::shared_ptr<const Smoothed>&) { return TailFamily::smoothed; },
                          [](const Scaled&) { return TailFamily::scaled; },
                      },
                      repr_);
}

bool TailFunction::continuous() const
{
    return std::visit(Overloaded{
                          [](const std::shared_ptr<const Table>&) { return false; },
                          [](const Scaled& s) { return s.base->continuous(); },
                          [](const auto&) { return true; },
                      },
                      repr_);
}

std::string TailFunction::describe() const
{
    return std::visit(Overloaded{
                          [](const LogPower& f) { return "logpow(gamma=" + std::to_string(f.gamma) + ")"; },
                          [](const IteratedLog& f) { return "iterlog(gamma=" + std::to_string(f.gamma) + ")"; },
                          [](const std::shared_ptr<const Table>& t) {
                              return "table(rows=" + std::to_string(t->log_u.size()) + ")";
                          },
                          [](const std::shared_ptr<const Smoothed>&) { return std::string("smoothed"); },
                          [](const Scaled& s) {
                              return "scaled(" + s.base->describe() + ", " + std::to_string(s.factor) + ")";
                          },
                      },
                      repr_);
}

double TailFunction::survival(double u) const
{
    if (u <= 0.0)
        return 1.0;
    return survival(LogMagnitude::from_value(u));
}

double TailFunction::survival(LogMagnitude x) const
{
    double lx = x.log_value();
    return std::visit(Overloaded{
                          [lx](const LogPower& f) { return lx <= 1.0 ? 1.0 : std::pow(lx, -f.gamma); },
                          [lx](const IteratedLog& f) {
                              return lx <= 1.0 ? 1.0 : std::pow(1.0 + std::log(lx), -f.gamma);
                          },
                          [lx](const std::shared_ptr<const Table>& t) {
                              auto it = std::upper_bound(t->log_u.begin(), t->log_u.end(), lx);
                              return t->survival[static_cast<std::size_t>(it - t->log_u.begin()) - 1];
                          },
                          [lx](const std::shared_ptr<const Smoothed>& s) { return smoothed_at(*s, lx); },
                          [x](const Scaled& s) { return std::min(1.0, s.factor * s.base->survival(x)); },
                      },
                      repr_);
}

LogMagnitude TailFunction::inverse(double p) const
{
    check_probability(p);
    return std::visit(Overloaded{
                          [p](const LogPower& f) { return LogMagnitude::from_log(std::pow(p, -1.0 / f.gamma)); },
                          [p](const IteratedLog& f) {
                              return LogMagnitude::from_log(std::exp(std::pow(p, -1.0 / f.gamma) - 1.0));
                          },
                          [p](const std::shared_ptr<const Table>& t) {
                              for (std::size_t i = 0; i < t->survival.size(); ++i)
                                  if (t->survival[i] < p)
                                      return LogMagnitude::from_log(t->log_u[i]);
                              throw std::domain_error("tail table never drops below p = " + std::to_string(p));
                          },
                          [p](const std::shared_ptr<const Smoothed>& s) {
                              const auto& v = s->survival;
                              if (v.front() < p)
                                  return LogMagnitude::from_log(s->log_u.front());
                              auto it = std::find_if(v.begin(), v.end(), [p](double g) { return g < p; });
                              if (it == v.end())
                                  throw std::domain_error("smoothed tail never drops below p on its grid");
                              std::size_t k = static_cast<std::size_t>(it - v.begin());
                              double w = (v[k - 1] - p) / (v[k - 1] - v[k]);
                              return LogMagnitude::from_log(s->log_u[k - 1] + w * (s->log_u[k] - s->log_u[k - 1]));
                          },
                          [p](const Scaled& s) {
                              double q = p / s.factor;
                              return q > 1.0 ? LogMagnitude::zero() : s.base->inverse(q);
                          },
                      },
                      repr_);
}

double TailFunction::L(LogMagnitude x) const
{
    if (const auto* f = std::get_if<LogPower>(&repr_)) {
        double lx = x.log_value();
        return lx <= 1.0 ? 1.0 : std::pow(lx, f->gamma);
    }
    double s = survival(x);
    return s > 0.0 ? 1.0 / s : kInf;
}

LogMagnitude TailFunction::sample(Rng& rng) const { return inverse(uniform_open(rng)); }

double eval_tail(const TailFunction& tf, double u) { return tf.survival(u); }

LogMagnitude inverse_tail(const TailFunction& tf, double p) { return tf.inverse(p); }

LogMagnitude critical_depth(const TailFunction& tf, double n)
{
    if (!(n >= 2.0))
        throw std::domain_error("critical depth needs n >= 2");
    return tf.inverse(std::log(n) / n);
}

LogMagnitude sample_trap(const TailFunction& tf, Rng& rng) { return tf.sample(rng); }

}  // namespace trapwalk
