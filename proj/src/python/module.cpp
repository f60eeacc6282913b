#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trapwalk/cli/config.hpp"
#include "trapwalk/cli/runner.hpp"
#include "trapwalk/extremal/extremal_process.hpp"
#include "trapwalk/kestentree/offspring_law.hpp"
#include "trapwalk/limits/skorohod.hpp"
#include "trapwalk/random.hpp"
#include "trapwalk/svt/tail_function.hpp"
#include "trapwalk/treewalk/quenched_mean.hpp"
#include "trapwalk/treewalk/surrogate.hpp"

namespace py = pybind11;
using namespace trapwalk;

namespace {

// (initial, times, values, horizon)
using StepTuple = std::tuple<double, std::vector<double>, std::vector<double>, double>;

CadlagStep to_step(const StepTuple& s)
{
    return CadlagStep(std::get<0>(s), std::get<1>(s), std::get<2>(s), std::get<3>(s));
}

LawPtr make_law(const std::string& family, double alpha)
{
    if (family == "geometric")
        return make_geometric_law();
    if (family == "zipf")
        return make_stable_law(alpha);
    throw std::invalid_argument("unknown offspring family '" + family + "'");
}

py::dict run(const std::string& command, const std::map<std::string, std::string>& options)
{
    cli::ExperimentConfig c;
    c.command = command;
    for (const auto& [k, v] : options)
        c.set(k, v);
    c.apply_defaults();
    c.validate();
    cli::Outcome o;
    {
        py::gil_scoped_release release;
        o = cli::execute(c);
    }
    py::list tests;
    for (const auto& t : o.tests) {
        py::dict d;
        d["name"] = t.name;
        d["statistic"] = t.statistic;
        d["bound"] = t.bound;
        d["pass"] = t.pass;
        tests.append(d);
    }
    py::dict out;
    out["header"] = o.header;
    out["rows"] = o.rows;
    out["tests"] = tests;
    out["passed"] = o.passed();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Biased random walks on traps and Kesten's tree";

    py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("derive_seed", [](std::uint64_t master, std::uint64_t index, std::uint64_t tag) { return derive_seed(master, index, tag); },
          py::arg("master"), py::arg("index"), py::arg("tag"));

    py::class_<TailFunction>(m, "TailFunction")
        .def_static("log_power", &TailFunction::log_power, py::arg("gamma"))
        .def_static("iterated_log", &TailFunction::iterated_log, py::arg("gamma"))
        .def_static("table", &TailFunction::table, py::arg("u"), py::arg("survival"))
        .def("survival", py::overload_cast<double>(&TailFunction::survival, py::const_), py::arg("u"))
        .def(
            "survival_log", [](const TailFunction& f, double log_u) { return f.survival(LogMagnitude::from_log(log_u)); },
            py::arg("log_u"), "survival at u = exp(log_u)")
        .def(
            "inverse_log", [](const TailFunction& f, double p) { return f.inverse(p).log_value(); }, py::arg("p"),
            "ln of the smallest u with survival below p")
        .def(
            "critical_depth_log", [](const TailFunction& f, double n) { return critical_depth(f, n).log_value(); }, py::arg("n"))
        .def("__repr__", &TailFunction::describe);

    m.def("extremal_cdf", &marginal_cdf, py::arg("t"), py::arg("x"));
    m.def(
        "sample_extremal",
        [](const std::vector<double>& grid, std::uint64_t seed) {
            Rng rng(seed);
            ExtremalPath p = sample_on_grid(grid, rng);
            return py::make_tuple(p.record_times, p.record_values);
        },
        py::arg("grid"), py::arg("seed"), "record times and values of an extremal path sampled on the grid");

    m.def(
        "survival_probabilities",
        [](const std::string& family, double alpha, std::size_t max_height) {
            return SurvivalTable(make_law(family, alpha), max_height).values();
        },
        py::arg("family") = "geometric", py::arg("alpha") = 1.5, py::arg("max_height") = 100,
        "q_0..q_H, the probabilities that a tree reaches each height");

    m.def(
        "quenched_mean",
        [](const std::vector<double>& log_weights, double beta) {
            std::vector<LogMagnitude> w;
            for (double x : log_weights)
                w.push_back(LogMagnitude::from_log(x));
            QuenchedMean q = quenched_mean_delta(w, beta);
            py::dict d;
            d["log_lower"] = q.lower.log_value();
            d["log_upper"] = q.upper.log_value();
            d["log_exact"] = q.exact ? py::cast(q.exact->log_value()) : py::none();
            return d;
        },
        py::arg("log_weights"), py::arg("beta"), "expected backbone crossing time from ln W_0..ln W_{n-1}");

    m.def("visited_set_probability", &visited_set_probability, py::arg("b"), py::arg("size"));
    m.def(
        "sample_visited_set",
        [](std::uint32_t b, std::uint64_t seed) {
            Rng rng(seed);
            return sample_visited_set(b, rng);
        },
        py::arg("b"), py::arg("seed"));

    m.def(
        "j1_distance", [](const StepTuple& f, const StepTuple& g) { return j1_distance(to_step(f), to_step(g)); }, py::arg("f"),
        py::arg("g"), "steps are (initial, times, values, horizon)");
    m.def(
        "m1_distance",
        [](const StepTuple& f, const StepTuple& g, std::size_t resolution) {
            return m1_distance(to_step(f), to_step(g), resolution);
        },
        py::arg("f"), py::arg("g"), py::arg("resolution") = 1000);

    m.def("subcommands", &cli::subcommands);
    m.def("run", &run, py::arg("command"), py::arg("options") = std::map<std::string, std::string>{},
          "run a subcommand in memory; options use config-file keys");
}
