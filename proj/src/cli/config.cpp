#include "trapwalk/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace trapwalk::cli {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used == v.size() && std::isfinite(x))
            return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
    double x = to_double(key, v);
    if (x < 0.0 || x != std::floor(x) || x > 1.8e19)
        throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
    if (x < 9.0e15)
        return static_cast<std::uint64_t>(x);
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// "0.5,1,2" or "start:stop:step"
std::vector<double> to_grid(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::stringstream ss(v);
        std::string p;
        std::vector<double> parts;
        while (std::getline(ss, p, ':'))
            parts.push_back(to_double(key, trim(p)));
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
            throw ConfigError(key + ": range must be start:stop:step with step > 0 and stop >= start");
        auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (std::size_t k = 0; k <= count; ++k)
            out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
        return out;
    }
    std::stringstream ss(v);
    std::string p;
    while (std::getline(ss, p, ','))
        out.push_back(to_double(key, trim(p)));
    return out;
}

bool strictly_increasing(const std::vector<double>& g)
{
    for (std::size_t k = 1; k < g.size(); ++k)
        if (!(g[k] > g[k - 1]))
            return false;
    return true;
}

}  // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"trap-hitting", "trap-aging", "trap-diagnostics", "tree-hitting", "tree-aging",
                                                "tree-quenched-mean", "tree-oracle", "kasahara", "extremal-reference",
                                                "paths-distance"};
    return names;
}

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys{
        {"beta", "bias β > 1"},
        {"tail", "trap tail family: log_power or iterated_log"},
        {"gamma", "trap tail exponent γ > 0"},
        {"offspring.family", "offspring law: geometric or zipf"},
        {"offspring.alpha", "stable index α in (1,2) for the zipf law"},
        {"n", "scale parameter"},
        {"a", "earlier aging exponent"},
        {"b", "later aging exponent"},
        {"T", "time horizon for diagnostics"},
        {"grid", "time grid: comma list or start:stop:step"},
        {"report", "report times for extremal-reference"},
        {"kappa", "trap separation exponent κ"},
        {"gamma_prime", "window exponent γ′"},
        {"reps", "number of replicas"},
        {"seed", "master seed"},
        {"workers", "worker threads (0: hardware, capped by TRAPWALK_WORKERS)"},
        {"step_budget", "embedded step budget per walk"},
        {"tree.height_cap", "largest leaf height kept exactly"},
        {"tree.size_cap", "largest explicit tree"},
        {"localization.fold_alpha", "divide the localization threshold by α-1"},
        {"check", "tree-oracle check: aging or deep-time"},
        {"entrance_depth", "leaf depth of entrance vertices for deep-time"},
        {"critical_height", "big-leaf height for deep-time"},
        {"window_lo", "lower ln x for the deep-time tail window"},
        {"window_hi", "upper ln x for the deep-time tail window"},
        {"first", "first step-function CSV for paths-distance"},
        {"second", "second step-function CSV for paths-distance"},
        {"resolution", "M1 discretization per segment"},
        {"horizon", "common horizon for paths-distance (0: latest time in the files)"},
        {"slack", "added to the DKW band"},
        {"tolerance", "allowed error for aging and oracle checks"},
        {"level", "significance level"},
        {"out", "CSV output path (stdout when empty)"},
        {"manifest", "JSON-lines manifest path"},
    };
    return keys;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    if (key == "beta")
        beta = to_double(key, v);
    else if (key == "tail")
        tail = v;
    else if (key == "gamma")
        gamma = to_double(key, v);
    else if (key == "offspring.family" || key == "family")
        family = v;
    else if (key == "offspring.alpha" || key == "alpha")
        alpha = to_double(key, v);
    else if (key == "n")
        n = to_double(key, v);
    else if (key == "a")
        a = to_double(key, v);
    else if (key == "b")
        b = to_double(key, v);
    else if (key == "T")
        T = to_double(key, v);
    else if (key == "grid")
        grid = to_grid(key, v);
    else if (key == "report")
        report = to_grid(key, v);
    else if (key == "kappa")
        kappa = to_double(key, v);
    else if (key == "gamma_prime")
        gamma_prime = to_double(key, v);
    else if (key == "reps")
        reps = to_uint(key, v);
    else if (key == "seed")
        seed = to_uint(key, v);
    else if (key == "workers")
        workers = static_cast<unsigned>(to_uint(key, v));
    else if (key == "step_budget")
        step_budget = to_uint(key, v);
    else if (key == "tree.height_cap")
        height_cap = to_uint(key, v);
    else if (key == "tree.size_cap")
        size_cap = to_uint(key, v);
    else if (key == "localization.fold_alpha")
        fold_alpha = to_bool(key, v);
    else if (key == "check")
        check = v;
    else if (key == "entrance_depth")
        entrance_depth = static_cast<std::uint32_t>(to_uint(key, v));
    else if (key == "critical_height")
        critical_height = to_double(key, v);
    else if (key == "window_lo")
        window_lo = to_double(key, v);
    else if (key == "window_hi")
        window_hi = to_double(key, v);
    else if (key == "first")
        first = v;
    else if (key == "second")
        second = v;
    else if (key == "resolution")
        resolution = to_uint(key, v);
    else if (key == "horizon")
        horizon = to_double(key, v);
    else if (key == "slack")
        slack = to_double(key, v);
    else if (key == "tolerance")
        tolerance = to_double(key, v);
    else if (key == "level")
        level = to_double(key, v);
    else if (key == "out")
        out = v;
    else if (key == "manifest")
        manifest = v;
    else
        throw ConfigError("unknown config key '" + key + "'");
    explicit_keys.insert(key == "family" ? "offspring.family" : key == "alpha" ? "offspring.alpha" : key);
}

void ExperimentConfig::apply_defaults()
{
    auto unset = [this](const char* k) { return explicit_keys.count(k) == 0; };
    if (unset("n")) {
        if (command.rfind("trap-", 0) == 0 || command == "kasahara")
            n = 10000;
        else if (command == "tree-oracle")
            n = 6;
        else
            n = 1000;
    }
    if (unset("grid")) {
        if (command == "extremal-reference")
            grid = to_grid("grid", "0.01:10:0.01");
        else if (command == "tree-hitting" || command == "tree-quenched-mean")
            grid = {1.0};
        else
            grid = {0.5, 1.0, 2.0};
    }
    if (unset("beta") && command == "tree-oracle")
        beta = 1.3;
    if (unset("tree.height_cap") && command == "tree-oracle")
        height_cap = check == "deep-time" ? 25 : 100;
    if (unset("T") && command == "trap-diagnostics")
        T = 0.05;
    if (unset("tolerance") && command == "tree-oracle")
        tolerance = 0.1;
}

void ExperimentConfig::validate() const
{
    if (std::find(subcommands().begin(), subcommands().end(), command) == subcommands().end())
        throw ConfigError("command: unknown subcommand '" + command + "'");
    if (command == "paths-distance") {
        if (first.empty() || second.empty())
            throw ConfigError("first/second: paths-distance needs two step-function CSV files");
        if (resolution < 1)
            throw ConfigError("resolution: must be at least 1");
        if (horizon < 0.0)
            throw ConfigError("horizon: must be nonnegative");
        return;
    }
    if (!(beta > 1.0))
        throw ConfigError("beta: the bias must satisfy beta > 1 (got " + std::to_string(beta) + ")");
    if (reps < 1)
        throw ConfigError("reps: need reps >= 1");
    if (grid.empty() || !strictly_increasing(grid) || grid.front() < 0.0)
        throw ConfigError("grid: must be a nonempty strictly increasing list of nonnegative times");
    if (tail != "log_power" && tail != "iterated_log")
        throw ConfigError("tail: must be log_power or iterated_log");
    if (!(gamma > 0.0))
        throw ConfigError("gamma: must be positive");
    if (family != "geometric" && family != "zipf")
        throw ConfigError("offspring.family: must be geometric or zipf");
    if (family == "zipf" && !(alpha > 1.0 && alpha < 2.0))
        throw ConfigError("offspring.alpha: zipf law needs 1 < alpha < 2");
    if (command == "trap-aging" || command == "tree-aging" || command == "tree-oracle")
        if (!(a > 0.0 && a < b))
            throw ConfigError("a/b: aging needs 0 < a < b");
    if (!(n > 1.0))
        throw ConfigError("n: must exceed 1");
    if ((command == "tree-hitting") && n < 10)
        throw ConfigError("n: tree-hitting needs n >= 10");
    if (command == "tree-oracle" && check != "aging" && check != "deep-time")
        throw ConfigError("check: must be aging or deep-time");
    if (command == "tree-oracle" && check == "deep-time" && !(window_lo < window_hi))
        throw ConfigError("window_lo/window_hi: need window_lo < window_hi");
    if (!(T > 0.0))
        throw ConfigError("T: must be positive");
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("level: must lie in (0, 1)");
    if (height_cap < 1)
        throw ConfigError("tree.height_cap: must be at least 1");
    if (!(slack >= 0.0) || !(tolerance >= 0.0))
        throw ConfigError("slack/tolerance: must be nonnegative");
    if (command == "extremal-reference") {
        if (grid.front() <= 0.0)
            throw ConfigError("grid: extremal-reference times must be positive");
        for (double t : report)
            if (std::find_if(grid.begin(), grid.end(), [t](double g) { return std::abs(g - t) < 1e-9; }) == grid.end())
                throw ConfigError("report: time " + std::to_string(t) + " is not on the grid");
    }
}

nlohmann::ordered_json ExperimentConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["beta"] = beta;
    j["tail"] = tail;
    j["gamma"] = gamma;
    j["offspring.family"] = family;
    j["offspring.alpha"] = alpha;
    j["n"] = n;
    j["a"] = a;
    j["b"] = b;
    j["T"] = T;
    j["grid"] = grid.size() > 16 ? nlohmann::ordered_json{{"first", grid.front()}, {"last", grid.back()}, {"points", grid.size()}}
                                 : nlohmann::ordered_json(grid);
    j["report"] = report;
    j["kappa"] = kappa;
    j["gamma_prime"] = gamma_prime;
    j["reps"] = reps;
    j["seed"] = seed;
    j["step_budget"] = step_budget;
    j["tree.height_cap"] = height_cap;
    j["tree.size_cap"] = size_cap;
    j["localization.fold_alpha"] = fold_alpha;
    j["check"] = check;
    j["entrance_depth"] = entrance_depth;
    j["critical_height"] = critical_height;
    j["window_lo"] = window_lo;
    j["window_hi"] = window_hi;
    j["first"] = first;
    j["second"] = second;
    j["resolution"] = resolution;
    j["horizon"] = horizon;
    j["slack"] = slack;
    j["tolerance"] = tolerance;
    j["level"] = level;
    return j;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        out[key] = value;
    }
    return out;
}

}  // namespace trapwalk::cli
