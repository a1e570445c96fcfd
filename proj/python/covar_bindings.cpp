#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "covar/bounds.hpp"
#include "covar/invariant.hpp"
#include "covar/json_io.hpp"
#include "covar/operational.hpp"
#include "covar/parser.hpp"
#include "covar/sampler.hpp"
#include "covar/transformer.hpp"

namespace py = pybind11;
using namespace covar;

namespace {

// States cross the boundary as JSON text; reports go back the same way.

State load_state(const std::string& json, const Program& c, const std::vector<const Expectation*>& exps) {
    std::set<std::string> vars = variables_of(c);
    for (const Expectation* e : exps) {
        collect_variables(*e, vars);
    }
    return parse_state(json).completed(vars);
}

TransformerKind kind_of(const std::string& name) {
    if (name == "wp") {
        return TransformerKind::WP;
    }
    if (name == "wlp") {
        return TransformerKind::WLP;
    }
    if (name == "rt") {
        return TransformerKind::RT;
    }
    throw PreconditionError("unknown transformer " + name);
}

std::string transform(const std::string& kind, const std::string& program, const std::string& post,
                      const std::string& state, unsigned k) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(post);
    return transform_eval(kind_of(kind), c, f, load_state(state, c, {&f}), Fuel{k}).str();
}

std::string cond_expectation(const std::string& program, const std::string& f_text, const std::string& state,
                             unsigned k) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(f_text);
    CondExpectedValue e = cond_expected_value(c, f, load_state(state, c, {&f}), Fuel{k});
    return Json{{"value", e.lower.str()}, {"wp", e.wp_k.str()}, {"wlp", e.wlp_k.str()}}.dump();
}

std::string upper_bounds(const std::string& program, const std::string& state, const std::string& f_text,
                         const std::string& g_text, const std::string& x_text, const std::string& y_text,
                         unsigned kmax) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(f_text);
    Expectation g = parse_expectation(g_text);
    Expectation x = parse_expectation(x_text);
    Expectation y = parse_expectation(y_text);
    return to_json(covariance_upper_bounds(c, load_state(state, c, {&f, &g, &x, &y}), f, g, x, y, kmax)).dump();
}

std::string lower_bounds(const std::string& program, const std::string& state, const std::string& f_text,
                         const std::string& g_text, const std::string& xf_text, const std::string& xg_text,
                         const std::string& y_text, unsigned kmax) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(f_text);
    Expectation g = parse_expectation(g_text);
    Expectation xf = parse_expectation(xf_text);
    Expectation xg = parse_expectation(xg_text);
    Expectation y = parse_expectation(y_text);
    State s = load_state(state, c, {&f, &g, &xf, &xg, &y});
    return to_json(covariance_lower_bounds(c, s, f, g, xf, xg, y, kmax)).dump();
}

std::string rt_upper_bounds(const std::string& program, const std::string& state, const std::string& x_text,
                            const std::string& y_text, unsigned kmax) {
    Program c = parse_program(program);
    Expectation x = parse_expectation(x_text);
    Expectation y = parse_expectation(y_text);
    return to_json(rt_variance_upper_bounds(c, load_state(state, c, {&x, &y}), x, y, kmax)).dump();
}

std::string variance(const std::string& program, const std::string& state, const std::string& f_text,
                     const std::optional<std::string>& x_text, const std::optional<std::string>& xf_text,
                     const std::string& y_text, unsigned kmax) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(f_text);
    Expectation y = parse_expectation(y_text);
    std::optional<Expectation> x;
    std::optional<Expectation> xf;
    std::vector<const Expectation*> exps{&f, &y};
    if (x_text) {
        x = parse_expectation(*x_text);
        exps.push_back(&*x);
    }
    if (xf_text) {
        xf = parse_expectation(*xf_text);
        exps.push_back(&*xf);
    }
    VarianceReport r = variance_report(c, load_state(state, c, exps), f, VarianceInvariants{x, xf, y}, kmax);
    Json out;
    out["upper"] = r.upper ? to_json(*r.upper) : Json(nullptr);
    out["lower"] = r.lower ? to_json(*r.lower) : Json(nullptr);
    out["heuristic_stop"] = r.heuristic_stop;
    return out.dump();
}

std::string check_invariant(const std::string& condition, const std::string& program, const std::string& inv_text,
                            const std::string& h_text, const std::vector<std::string>& states) {
    Program c = parse_program(program);
    Expectation inv = parse_expectation(inv_text);
    Expectation h = parse_expectation(h_text);
    std::vector<State> grid;
    for (const auto& s : states) {
        grid.push_back(load_state(s, c, {&inv, &h}));
    }
    if (condition == "wp") {
        return to_json(check_wp_superinvariant(c, h, inv, grid)).dump();
    }
    if (condition == "wlp") {
        return to_json(check_wlp_subinvariant(c, inv, grid)).dump();
    }
    if (condition == "rt") {
        return to_json(check_rt_superinvariant(c, inv, grid)).dump();
    }
    throw PreconditionError("unknown condition " + condition);
}

std::string chain(const std::string& program, const std::string& state, const std::string& t_text,
                  std::size_t budget, const std::string& format) {
    Program c = parse_program(program);
    Expectation t = parse_expectation(t_text);
    OperationalMC m = build_mc(c, load_state(state, c, {&t}), t, budget);
    if (format == "dot") {
        return export_mc(m, ExportFormat::Dot);
    }
    if (format == "json") {
        return export_mc(m, ExportFormat::Json);
    }
    return Json{{"states", m.states().size()},
                {"closed", m.closed()},
                {"expected_reward", to_json(expected_reward(m))},
                {"cond_expected_reward", to_json(cond_expected_reward(m))}}
        .dump();
}

std::string run_once(const std::string& program, const std::string& state, std::uint64_t seed,
                     std::uint64_t step_limit) {
    Program c = parse_program(program);
    return to_json(simulate(c, load_state(state, c, {}), seed, step_limit)).dump();
}

std::string estimate_cov(const std::string& program, const std::string& state, const std::string& f_text,
                         const std::string& g_text, std::uint64_t n, std::uint64_t seed, std::uint64_t step_limit) {
    Program c = parse_program(program);
    Expectation f = parse_expectation(f_text);
    Expectation g = parse_expectation(g_text);
    State s = load_state(state, c, {&f, &g});
    Estimate e;
    {
        py::gil_scoped_release release;
        e = estimate_covariance(c, s, f, g, n, seed, step_limit);
    }
    return to_json(e).dump();
}

std::string estimate_rt(const std::string& program, const std::string& state, std::uint64_t n, std::uint64_t seed,
                        std::uint64_t step_limit) {
    Program c = parse_program(program);
    State s = load_state(state, c, {});
    Estimate e;
    {
        py::gil_scoped_release release;
        e = estimate_rt_variance(c, s, n, seed, step_limit);
    }
    return to_json(e).dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact bounds, Markov chains and sampling for conditioned probabilistic programs";

    auto base = py::register_exception<Error>(m, "CovarError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

    m.def("pretty", [](const std::string& text) { return pretty_print(parse_program(text)); }, py::arg("program"));
    m.def("transform", &transform, py::arg("kind"), py::arg("program"), py::arg("post"), py::arg("state"),
          py::arg("k") = 0);
    m.def("cond_expected_value", &cond_expectation, py::arg("program"), py::arg("f"), py::arg("state"),
          py::arg("k") = 0);
    m.def("covariance_upper_bounds", &upper_bounds, py::arg("program"), py::arg("state"), py::arg("f"),
          py::arg("g"), py::arg("x"), py::arg("y"), py::arg("kmax"));
    m.def("covariance_lower_bounds", &lower_bounds, py::arg("program"), py::arg("state"), py::arg("f"),
          py::arg("g"), py::arg("xf"), py::arg("xg"), py::arg("y"), py::arg("kmax"));
    m.def("rt_variance_upper_bounds", &rt_upper_bounds, py::arg("program"), py::arg("state"), py::arg("x"),
          py::arg("y"), py::arg("kmax"));
    m.def("variance_report", &variance, py::arg("program"), py::arg("state"), py::arg("f"), py::arg("x"),
          py::arg("xf"), py::arg("y"), py::arg("kmax"));
    m.def("check_invariant", &check_invariant, py::arg("condition"), py::arg("program"), py::arg("invariant"),
          py::arg("h"), py::arg("states"));
    m.def("chain", &chain, py::arg("program"), py::arg("state"), py::arg("t"), py::arg("budget"),
          py::arg("format") = "");
    m.def("simulate", &run_once, py::arg("program"), py::arg("state"), py::arg("seed"), py::arg("step_limit"));
    m.def("estimate_covariance", &estimate_cov, py::arg("program"), py::arg("state"), py::arg("f"), py::arg("g"),
          py::arg("n"), py::arg("seed"), py::arg("step_limit"));
    m.def("estimate_rt_variance", &estimate_rt, py::arg("program"), py::arg("state"), py::arg("n"), py::arg("seed"),
          py::arg("step_limit"));
}
