#include "trapwalk/cli/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "trapwalk/extremal/extremal_process.hpp"
#include "trapwalk/kestentree/offspring_law.hpp"
#include "trapwalk/limits/kasahara.hpp"
#include "trapwalk/limits/skorohod.hpp"
#include "trapwalk/limits/statistics.hpp"
#include "trapwalk/trapline/trap_walk.hpp"
#include "trapwalk/treewalk/oracle.hpp"
#include "trapwalk/treewalk/quenched_mean.hpp"
#include "trapwalk/treewalk/surrogate.hpp"

namespace trapwalk::cli {

namespace {

constexpr const char* kCodeVersion = "0.1.0";

using Row = std::vector<double>;

// Runs f(i) for i < reps on a fixed pool; results are kept in index order.
template <class F>
auto replicate(std::size_t reps, unsigned workers, F f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(reps);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= reps)
                return;
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(failure_lock);
                if (!failure)
                    failure = std::current_exception();
                next = reps;
                return;
            }
        }
    };
    unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(reps)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < w; ++k)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

TailFunction make_tail(const ExperimentConfig& c)
{
    return c.tail == "iterated_log" ? TailFunction::iterated_log(c.gamma) : TailFunction::log_power(c.gamma);
}

std::shared_ptr<const SurvivalTable> make_table(const ExperimentConfig& c)
{
    LawPtr law = c.family == "zipf" ? make_stable_law(c.alpha) : make_geometric_law();
    return survival_table(law, c.height_cap);
}

std::function<double(double)> frechet_cdf(double t)
{
    return [t](double x) { return x > 0.0 ? std::exp(-t / x) : 0.0; };
}

TestResult ks_result(const std::string& name, const std::vector<double>& samples, double t, const ExperimentConfig& c)
{
    KsResult ks = ks_test(samples, frechet_cdf(t), c.level);
    TestResult r;
    r.name = name;
    r.statistic = ks.statistic;
    r.bound = ks.bound + c.slack;
    r.pass = ks.passes(c.slack);
    r.detail["t"] = t;
    r.detail["samples"] = ks.samples;
    r.detail["dkw"] = ks.bound;
    return r;
}

TestResult proportion_result(const std::string& name, double hits, std::size_t reps, double target, double tolerance)
{
    TestResult r;
    r.name = name;
    double p = hits / static_cast<double>(reps);
    r.statistic = p;
    r.bound = tolerance;
    r.pass = std::abs(p - target) <= tolerance;
    r.detail["target"] = target;
    r.detail["se"] = binomial_se(p, reps);
    return r;
}

// Rows of (replica, t, value) from per-replica values on the grid, and KS per positive t.
void grid_marginals(Outcome& o, const std::vector<std::vector<double>>& paths, const std::vector<double>& grid,
                    const std::string& prefix, const ExperimentConfig& c)
{
    o.header = {"replica", "t", "value"};
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t k = 0; k < grid.size(); ++k)
            o.rows.push_back({static_cast<double>(i), grid[k], paths[i][k]});
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0))
            continue;
        std::vector<double> s;
        for (const auto& p : paths)
            s.push_back(p[k]);
        o.tests.push_back(ks_result(prefix + "@t=" + format_number(grid[k]), s, grid[k], c));
    }
}

Outcome trap_hitting(const ExperimentConfig& c, unsigned w)
{
    TailFunction tail = make_tail(c);
    const auto n = static_cast<long>(c.n);
    const auto level = static_cast<long>(std::floor(c.n * c.grid.back() + 1e-9));
    auto paths = replicate(c.reps, w, [&](std::size_t i) {
        TrapEnvironment env(tail, derive_seed(c.seed, i, StreamTag::environment));
        Rng rng(derive_seed(c.seed, i, StreamTag::walk));
        WalkOptions opt;
        opt.step_budget = c.step_budget;
        WalkRecord rec = run_to_level(env, c.beta, level, rng, opt);
        CadlagStep path = rescaled_hitting_path(rec, tail, n, c.grid);
        Row v;
        for (double t : c.grid)
            v.push_back(path(t));
        return v;
    });
    Outcome o;
    grid_marginals(o, paths, c.grid, "trap-hitting-marginal", c);
    return o;
}

Outcome trap_aging(const ExperimentConfig& c, unsigned w)
{
    TailFunction tail = make_tail(c);
    auto eq = replicate(c.reps, w, [&](std::size_t i) {
        TrapEnvironment env(tail, derive_seed(c.seed, i, StreamTag::environment));
        Rng rng(derive_seed(c.seed, i, StreamTag::walk));
        return aging_indicator(env, c.beta, c.n, c.a, c.b, rng, c.step_budget) ? 1.0 : 0.0;
    });
    Outcome o;
    o.header = {"replica", "equal"};
    double hits = 0.0;
    for (std::size_t i = 0; i < eq.size(); ++i) {
        o.rows.push_back({static_cast<double>(i), eq[i]});
        hits += eq[i];
    }
    o.tests.push_back(proportion_result("trap-aging", hits, c.reps, c.a / c.b, c.tolerance));
    return o;
}

Outcome trap_diagnostics(const ExperimentConfig& c, unsigned w)
{
    TailFunction tail = make_tail(c);
    const auto level = static_cast<long>(std::floor(c.n * c.T));
    auto flags = replicate(c.reps, w, [&](std::size_t i) {
        TrapEnvironment env(tail, derive_seed(c.seed, i, StreamTag::environment));
        Rng rng(derive_seed(c.seed, i, StreamTag::walk));
        WalkOptions opt = diagnostics_options(tail, c.n);
        opt.step_budget = c.step_budget;
        WalkRecord rec = run_to_level(env, c.beta, level, rng, opt);
        EnvironmentEvents ev = diagnostics(env, rec, c.n, c.T, c.kappa, c.gamma_prime);
        return Row{ev.separated ? 1.0 : 0.0, ev.clear_left ? 1.0 : 0.0, ev.small_backtrack ? 1.0 : 0.0,
                   ev.shallow_time_small ? 1.0 : 0.0, ev.all() ? 1.0 : 0.0};
    });
    Outcome o;
    o.header = {"replica", "separated", "clear_left", "small_backtrack", "shallow_time_small", "all"};
    Row freq(5, 0.0);
    for (std::size_t i = 0; i < flags.size(); ++i) {
        Row r{static_cast<double>(i)};
        r.insert(r.end(), flags[i].begin(), flags[i].end());
        o.rows.push_back(r);
        for (std::size_t k = 0; k < 5; ++k)
            freq[k] += flags[i][k];
    }
    TestResult t;
    t.name = "trap-diagnostics-all-events";
    t.statistic = freq[4] / static_cast<double>(c.reps);
    t.bound = 0.9;
    t.pass = t.statistic > 0.9;
    const char* names[] = {"separated", "clear_left", "small_backtrack", "shallow_time_small"};
    for (std::size_t k = 0; k < 4; ++k)
        t.detail[names[k]] = freq[k] / static_cast<double>(c.reps);
    o.tests.push_back(t);
    return o;
}

Outcome tree_hitting(const ExperimentConfig& c, unsigned w)
{
    auto table = make_table(c);
    auto paths = replicate(c.reps, w, [&](std::size_t i) {
        TreeHittingRecord rec =
            surrogate_hitting_path(table, c.beta, static_cast<long>(c.n), c.grid, derive_seed(c.seed, i, StreamTag::spine));
        Row v;
        for (double t : c.grid)
            v.push_back(rec.path(t));
        return v;
    });
    Outcome o;
    grid_marginals(o, paths, c.grid, "tree-hitting-marginal", c);
    return o;
}

Outcome tree_aging(const ExperimentConfig& c, unsigned w)
{
    auto table = make_table(c);
    LocalizationOptions lo{c.fold_alpha};
    auto eq = replicate(c.reps, w, [&](std::size_t i) {
        return tree_aging_indicator(table, c.beta, c.n, c.a, c.b, derive_seed(c.seed, i, StreamTag::spine), lo) ? 1.0 : 0.0;
    });
    Outcome o;
    o.header = {"replica", "equal"};
    double hits = 0.0;
    for (std::size_t i = 0; i < eq.size(); ++i) {
        o.rows.push_back({static_cast<double>(i), eq[i]});
        hits += eq[i];
    }
    o.tests.push_back(proportion_result("tree-aging", hits, c.reps, c.a / c.b, c.tolerance));
    return o;
}

Outcome tree_quenched_mean(const ExperimentConfig& c, unsigned w)
{
    auto table = make_table(c);
    const auto n = static_cast<std::size_t>(c.n);
    auto stats = replicate(c.reps, w, [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i, StreamTag::spine));
        QuenchedStat s = quenched_mean_rescaled_stat(table, c.beta, n, rng);
        double exact = s.mean.exact ? s.mean.exact->log_value() : NAN;
        return Row{s.value, s.mean.lower.log_value(), s.mean.upper.log_value(), exact, s.mean.capped ? 1.0 : 0.0,
                   static_cast<double>(s.estimated)};
    });
    Outcome o;
    o.header = {"replica", "statistic", "log_lower", "log_upper", "log_exact", "capped", "estimated"};
    std::vector<double> values;
    double capped = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        Row r{static_cast<double>(i)};
        r.insert(r.end(), stats[i].begin(), stats[i].end());
        o.rows.push_back(r);
        values.push_back(stats[i][0]);
        capped += stats[i][4];
    }
    TestResult t = ks_result("tree-quenched-mean-marginal", values, 1.0, c);
    t.detail["capped_replicas"] = capped;
    o.tests.push_back(t);
    return o;
}

Outcome tree_oracle(const ExperimentConfig& c, unsigned w)
{
    auto table = make_table(c);
    Outcome o;
    if (c.check == "aging") {
        LocalizationOptions lo{c.fold_alpha};
        auto pairs = replicate(c.reps, w, [&](std::size_t i) {
            bool ex = exact_tree_aging(table, c.beta, c.n, c.a, c.b, derive_seed(c.seed, i, StreamTag::oracle), c.step_budget);
            bool su = tree_aging_indicator(table, c.beta, c.n, c.a, c.b, derive_seed(c.seed, i, StreamTag::spine), lo);
            return Row{ex ? 1.0 : 0.0, su ? 1.0 : 0.0};
        });
        o.header = {"replica", "exact_equal", "surrogate_equal"};
        double ex = 0.0, su = 0.0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            o.rows.push_back({static_cast<double>(i), pairs[i][0], pairs[i][1]});
            ex += pairs[i][0];
            su += pairs[i][1];
        }
        double pe = ex / static_cast<double>(c.reps);
        double ps = su / static_cast<double>(c.reps);
        TestResult t;
        t.name = "tree-oracle-aging-exact-vs-surrogate";
        t.statistic = std::abs(pe - ps);
        t.bound = c.tolerance;
        t.pass = t.statistic <= t.bound;
        t.detail["exact"] = pe;
        t.detail["surrogate"] = ps;
        t.detail["limit"] = c.a / c.b;
        o.tests.push_back(t);
        o.tests.push_back(proportion_result("tree-oracle-aging-exact-vs-limit", ex, c.reps, c.a / c.b, c.tolerance));
        return o;
    }
    DeepTimeOptions opt;
    opt.entrance_depth = c.entrance_depth;
    opt.critical_height = c.critical_height;
    opt.step_budget = c.step_budget;
    auto samples = replicate(c.reps, w, [&](std::size_t i) {
        DeepTimeSample s = sample_deep_time(table, c.beta, opt, derive_seed(c.seed, i, StreamTag::oracle));
        return Row{static_cast<double>(s.time), static_cast<double>(s.big), static_cast<double>(s.visited),
                   static_cast<double>(s.steps)};
    });
    o.header = {"replica", "time", "big", "visited", "steps"};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Row r{static_cast<double>(i)};
        r.insert(r.end(), samples[i].begin(), samples[i].end());
        o.rows.push_back(r);
    }
    const double alpha = table->law().alpha();
    TestResult t;
    t.name = "tree-oracle-deep-time-tail";
    t.bound = 0.3;
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (double lx = c.window_lo; lx <= c.window_hi + 1e-9; lx += 0.25) {
        double x = std::exp(lx);
        double hits = 0.0;
        for (const auto& s : samples)
            hits += s[0] >= x ? 1.0 : 0.0;
        double ratio = hits / static_cast<double>(c.reps) * (alpha - 1.0) * lx / std::log(c.beta);
        t.statistic = std::max(t.statistic, std::abs(ratio - 1.0));
        curve.push_back({{"ln_x", lx}, {"ratio", ratio}});
    }
    t.pass = t.statistic <= t.bound;
    t.detail["curve"] = curve;
    o.tests.push_back(t);
    return o;
}

Outcome kasahara(const ExperimentConfig& c, unsigned w)
{
    TriangularArraySpec spec = iid_array(make_tail(c));
    auto paths = replicate(c.reps, w, [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i, StreamTag::array));
        CadlagStep path = rescaled_sum_path(spec, c.n, c.grid, rng);
        Row v;
        for (double t : c.grid)
            v.push_back(path(t));
        return v;
    });
    Outcome o;
    grid_marginals(o, paths, c.grid, "kasahara-marginal", c);
    EpcondReport ep = check_epcond(spec, c.n, 64);
    TestResult t;
    t.name = "kasahara-epcond";
    t.statistic = ep.deviation;
    t.bound = 0.0;
    t.pass = ep.passes(0.0);
    t.detail["window_log_lower"] = ep.lower.log_value();
    t.detail["window_log_upper"] = ep.upper.log_value();
    o.tests.push_back(t);
    return o;
}

Outcome extremal_reference(const ExperimentConfig& c, unsigned w)
{
    std::vector<std::size_t> at;
    for (double t : c.report)
        for (std::size_t k = 0; k < c.grid.size(); ++k)
            if (std::abs(c.grid[k] - t) < 1e-9)
                at.push_back(k);
    auto rows = replicate(c.reps, w, [&](std::size_t i) {
        Rng rng(derive_seed(c.seed, i, StreamTag::extremal));
        ExtremalPath p = sample_on_grid(c.grid, rng);
        Row v;
        for (std::size_t k : at)
            v.push_back(p(c.grid[k]));
        v.push_back(invert_path(p)(1.0));
        Rng other(derive_seed(c.seed, i, StreamTag::oracle));
        ExtremalPath q = sample_truncated(c.report.back(), 1e-2, other);
        for (double t : c.report)
            v.push_back(q(t));
        return v;
    });
    Outcome o;
    o.header = {"replica"};
    for (double t : c.report)
        o.header.push_back("m(" + format_number(t) + ")");
    o.header.push_back("inverse(1)");
    for (double t : c.report)
        o.header.push_back("ppp_m(" + format_number(t) + ")");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Row r{static_cast<double>(i)};
        r.insert(r.end(), rows[i].begin(), rows[i].end());
        o.rows.push_back(r);
    }
    const std::size_t m = c.report.size();
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> grid_route, ppp_route;
        for (const auto& r : rows) {
            grid_route.push_back(r[k]);
            ppp_route.push_back(r[m + 1 + k]);
        }
        o.tests.push_back(ks_result("extremal-marginal@t=" + format_number(c.report[k]), grid_route, c.report[k], c));
        KsResult two = ks_two_sample(grid_route, ppp_route, c.level);
        TestResult t;
        t.name = "extremal-two-route@t=" + format_number(c.report[k]);
        t.statistic = two.statistic;
        t.bound = two.bound;
        t.pass = two.passes();
        o.tests.push_back(t);
    }
    std::vector<double> inv;
    for (const auto& r : rows)
        inv.push_back(r[m]);
    TestResult t;
    t.name = "extremal-inverse-mean";
    t.statistic = mean(inv);
    t.bound = 0.02;
    t.pass = std::abs(t.statistic - 1.0) <= 0.02;
    o.tests.push_back(t);
    return o;
}

Outcome paths_distance(const ExperimentConfig& c)
{
    double horizon = c.horizon > 0.0 ? c.horizon : std::max(latest_time(c.first), latest_time(c.second));
    CadlagStep f = read_step_csv(c.first, horizon);
    CadlagStep g = read_step_csv(c.second, horizon);
    Outcome o;
    o.header = {"j1", "m1", "m1_discretization"};
    o.rows.push_back({j1_distance(f, g), m1_distance(f, g, c.resolution), m1_discretization(f, g, c.resolution)});
    return o;
}

void write_csv(std::ostream& out, const Outcome& o)
{
    for (std::size_t k = 0; k < o.header.size(); ++k)
        out << (k ? "," : "") << o.header[k];
    out << '\n';
    std::string line;
    for (const auto& r : o.rows) {
        line.clear();
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k)
                line += ',';
            line += format_number(r[k]);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace

bool Outcome::passed() const
{
    for (const auto& t : tests)
        if (!t.pass)
            return false;
    return true;
}

unsigned effective_workers(unsigned requested)
{
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("TRAPWALK_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(cap, &end, 10);
        if (end != cap && v >= 1)
            w = std::min<unsigned>(w, static_cast<unsigned>(v));
    }
    return w;
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    return fmt::format("{}", x);
}

double latest_time(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("first/second: cannot open '" + path + "'");
    double latest = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        double t = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) == 2)
            latest = std::max(latest, t);
    }
    return latest;
}

CadlagStep read_step_csv(const std::string& path, double horizon)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("first/second: cannot open '" + path + "'");
    std::vector<double> times, values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        double t = 0.0, v = 0.0;
        char extra = 0;
        int got = std::sscanf(line.c_str(), "%lf,%lf %c", &t, &v, &extra);
        if (got != 2) {
            if (lineno == 1 && line.rfind("time", 0) == 0)
                continue;
            throw ConfigError(path + ": line " + std::to_string(lineno) + " is not 'time,value'");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (times.empty() || times.front() != 0.0)
        throw ConfigError(path + ": the first row must give the value at time 0");
    double initial = values.front();
    times.erase(times.begin());
    values.erase(values.begin());
    try {
        return CadlagStep(initial, times, values, horizon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Outcome execute(const ExperimentConfig& c)
{
    const unsigned w = effective_workers(c.workers);
    if (c.command == "trap-hitting")
        return trap_hitting(c, w);
    if (c.command == "trap-aging")
        return trap_aging(c, w);
    if (c.command == "trap-diagnostics")
        return trap_diagnostics(c, w);
    if (c.command == "tree-hitting")
        return tree_hitting(c, w);
    if (c.command == "tree-aging")
        return tree_aging(c, w);
    if (c.command == "tree-quenched-mean")
        return tree_quenched_mean(c, w);
    if (c.command == "tree-oracle")
        return tree_oracle(c, w);
    if (c.command == "kasahara")
        return kasahara(c, w);
    if (c.command == "extremal-reference")
        return extremal_reference(c, w);
    if (c.command == "paths-distance")
        return paths_distance(c);
    throw ConfigError("command: unknown subcommand '" + c.command + "'");
}

int run_experiment(const ExperimentConfig& c, std::ostream& log)
{
    auto start = std::chrono::steady_clock::now();
    auto cleanup = [&c] {
        if (!c.out.empty())
            std::remove(c.out.c_str());
        if (!c.manifest.empty())
            std::remove(c.manifest.c_str());
    };
    try {
        Outcome o = execute(c);
        if (c.out.empty()) {
            write_csv(std::cout, o);
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!f)
                throw ConfigError("out: cannot write '" + c.out + "'");
            write_csv(f, o);
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        if (!c.manifest.empty()) {
            std::ofstream m(c.manifest, std::ios::binary);
            if (!m)
                throw ConfigError("manifest: cannot write '" + c.manifest + "'");
            nlohmann::ordered_json cfg{{"record", "config"}, {"code_version", kCodeVersion}, {"config", c.to_json()}};
            m << cfg.dump() << '\n';
            for (const auto& t : o.tests) {
                nlohmann::ordered_json r{{"record", "result"}, {"test", t.name}, {"statistic", t.statistic},
                                         {"bound", t.bound}, {"pass", t.pass}, {"detail", t.detail}};
                m << r.dump() << '\n';
            }
            nlohmann::ordered_json run{{"record", "run"}, {"pass", o.passed()}, {"tests", o.tests.size()},
                                       {"wall_time_ms", elapsed.count()}};
            m << run.dump() << '\n';
        }
        for (const auto& t : o.tests)
            log << (t.pass ? "PASS " : "FAIL ") << t.name << " statistic=" << format_number(t.statistic)
                << " bound=" << format_number(t.bound) << '\n';
        return o.passed() ? 0 : 1;
    } catch (const ConfigError& e) {
        cleanup();
        log << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        cleanup();
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

static std::string describe(const std::string& name)
{
    static const std::map<std::string, std::string> text{
        {"trap-hitting", "rescaled hitting times of the trap model vs the extremal process"},
        {"trap-aging", "trap model: same site at times e^{an} and e^{bn}"},
        {"trap-diagnostics", "trap model: environment and walk events at scale n"},
        {"tree-hitting", "Kesten's tree: rescaled log hitting times (surrogate engine)"},
        {"tree-aging", "Kesten's tree: same localization index at scales a and b"},
        {"tree-quenched-mean", "Kesten's tree: rescaled log quenched mean hitting time"},
        {"tree-oracle", "Kesten's tree: exact-walk checks (aging or deep-time)"},
        {"kasahara", "iid log-power arrays: rescaled sums and tail comparison"},
        {"extremal-reference", "extremal process marginals, two routes, inverse mean"},
        {"paths-distance", "J1 and M1 distances between two step-function CSVs"},
    };
    auto it = text.find(name);
    return it == text.end() ? std::string() : it->second;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Biased walks in random environments: trap model and Kesten's tree experiments"};
    app.require_subcommand(1);
    std::map<std::string, std::string> given;
    std::string config_path;
    for (const auto& name : subcommands()) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config_path, "flat key = value config file");
        for (const auto& key : config_keys()) {
            std::string flag = "--" + key.name;
            for (auto& ch : flag)
                if (ch == '.' || ch == '_')
                    ch = '-';
            std::string k = key.name;
            sub->add_option_function<std::string>(flag, [&given, k](const std::string& v) { given[k] = v; }, key.help);
        }
        if (name == "tree-hitting" || name == "tree-aging" || name == "tree-quenched-mean" || name == "tree-oracle") {
            sub->add_option_function<std::string>("--family", [&given](const std::string& v) { given["offspring.family"] = v; },
                                                   "alias of --offspring-family");
            sub->add_option_function<std::string>("--alpha", [&given](const std::string& v) { given["offspring.alpha"] = v; },
                                                   "alias of --offspring-alpha");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    ExperimentConfig c;
    try {
        for (CLI::App* sub : app.get_subcommands())
            c.command = sub->get_name();
        if (!config_path.empty())
            for (const auto& [k, v] : read_config_file(config_path))
                c.set(k, v);
        for (const auto& [k, v] : given)
            c.set(k, v);
        c.apply_defaults();
        c.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return run_experiment(c, std::cerr);
}

}  // namespace trapwalk::cli
