// covar: command-line front end.
//
// Exit codes: 0 success, 1 precondition or evaluation failure, 2 parse/config error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covar/bounds.hpp"
#include "covar/invariant.hpp"
#include "covar/json_io.hpp"
#include "covar/operational.hpp"
#include "covar/parser.hpp"
#include "covar/sampler.hpp"
#include "covar/transformer.hpp"

using namespace covar;

namespace {

constexpr int kExitPrecondition = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string program;
    std::string state = "{}";
    std::string f;
    std::string g;
    std::string t = "tau";
    std::string inv_x;
    std::string inv_y;
    std::string inv_xf;
    std::string inv_xg;
    unsigned kmax = 10;
    unsigned k = 0;
    std::size_t budget = 10000;
    std::string export_format;
    std::uint64_t n = 10000;
    std::uint64_t seed = 0;
    std::uint64_t step_limit = 100000;
    std::string epsilon;
    std::string target = "covariance";
    bool rt = false;
    long grid_lo = 0;
    long grid_hi = 10;
    std::size_t grid_random = 100;
    bool integer_grid = false;
    bool pretty = false;
    std::string config;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Every flag that may also come from a config file.
struct Registry {
    std::vector<std::pair<std::string, CLI::Option*>> entries;
};

void add_common(CLI::App* sub, Options& o, Registry& reg) {
    auto add = [&](const std::string& key, CLI::Option* opt) { reg.entries.emplace_back(key, opt); };
    add("program", sub->add_option("program", o.program, "program file"));
    add("state", sub->add_option("--state", o.state, "initial state as JSON"));
    add("f", sub->add_option("--f", o.f, "post-expectation f"));
    add("g", sub->add_option("--g", o.g, "post-expectation g (defaults to f)"));
    add("t", sub->add_option("--t", o.t, "reward expectation"));
    add("inv_x", sub->add_option("--inv-x", o.inv_x, "file holding the X invariant"));
    add("inv_y", sub->add_option("--inv-y", o.inv_y, "file holding the Y invariant"));
    add("inv_xf", sub->add_option("--inv-xf", o.inv_xf, "file holding the Xf invariant"));
    add("inv_xg", sub->add_option("--inv-xg", o.inv_xg, "file holding the Xg invariant"));
    add("kmax", sub->add_option("--kmax", o.kmax, "largest unrolling depth"));
    add("k", sub->add_option("--k", o.k, "unrolling depth"));
    add("budget", sub->add_option("--budget", o.budget, "state budget for chain exploration"));
    add("export", sub->add_option("--export", o.export_format, "dot or json")->check(CLI::IsMember({"dot", "json"})));
    add("n", sub->add_option("--n", o.n, "number of sampled runs"));
    add("seed", sub->add_option("--seed", o.seed, "sampler seed (default $COVAR_SEED or 0)"));
    add("step_limit", sub->add_option("--step-limit", o.step_limit, "steps per sampled run"));
    add("epsilon", sub->add_option("--epsilon", o.epsilon, "stop once upper - lower < epsilon"));
    add("target", sub->add_option("--target", o.target, "covariance or rt-variance")
                      ->check(CLI::IsMember({"covariance", "rt-variance"})));
    add("rt", sub->add_flag("--rt", o.rt, "check X as an rt superinvariant"));
    add("grid_lo", sub->add_option("--grid-lo", o.grid_lo, "grid box lower end"));
    add("grid_hi", sub->add_option("--grid-hi", o.grid_hi, "grid box upper end"));
    add("grid_random", sub->add_option("--grid-random", o.grid_random, "random grid states"));
    add("integer_grid", sub->add_flag("--integer-grid", o.integer_grid, "draw only integer random grid states"));
    add("pretty", sub->add_flag("--pretty", o.pretty, "human-readable output"));
    sub->add_option("--config", o.config, "JSON config file; flags override it");
}

void merge_config(const std::string& path, const Registry& reg) {
    Json cfg;
    try {
        cfg = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw InputError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) {
        throw InputError("config " + path + ": expected an object");
    }
    std::set<std::string> known;
    for (const auto& [key, opt] : reg.entries) {
        known.insert(key);
        if (!cfg.contains(key) || opt->count() > 0) {
            continue;
        }
        const Json& v = cfg[key];
        std::string text;
        if (v.is_string()) {
            text = v.get<std::string>();
        } else if (key == "state" && v.is_object()) {
            text = v.dump();
        } else if (v.is_boolean()) {
            text = v.get<bool>() ? "true" : "false";
        } else if (v.is_number_integer() || v.is_number_unsigned()) {
            text = v.dump();
        } else {
            throw InputError("config " + path + ": bad value for " + key);
        }
        try {
            opt->add_result(text);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw InputError("config " + path + ": " + key + ": " + e.what());
        }
    }
    for (const auto& item : cfg.items()) {
        if (!known.contains(item.key())) {
            throw InputError("config " + path + ": unknown key " + item.key());
        }
    }
}

Expectation load_expectation_file(const std::string& path) { return parse_expectation(read_file(path)); }

std::optional<Expectation> optional_file(const std::string& path) {
    if (path.empty()) {
        return std::nullopt;
    }
    return load_expectation_file(path);
}

Expectation required_text(const std::string& text, const char* flag) {
    if (text.empty()) {
        throw InputError(std::string("missing ") + flag);
    }
    return parse_expectation(text);
}

Expectation required_file(const std::string& path, const char* flag) {
    if (path.empty()) {
        throw InputError(std::string("missing ") + flag);
    }
    return load_expectation_file(path);
}

void add_vars(std::set<std::string>& vars, const std::optional<Expectation>& e) {
    if (e) {
        collect_variables(*e, vars);
    }
}

Json ext_json(const ExtReal& v) { return v.str(); }

// Plain-text rendering of a JSON report.
void render(std::ostream& out, const Json& j, const std::string& indent);

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    return j.dump();
}

bool is_table(const Json& j) {
    if (!j.is_array() || j.empty()) {
        return false;
    }
    for (const auto& row : j) {
        if (!row.is_object()) {
            return false;
        }
        for (const auto& cell : row) {
            if (!is_scalar(cell) && !(cell.is_object() && cell.size() <= 4)) {
                return false;
            }
        }
    }
    return true;
}

std::string inline_text(const Json& j) {
    if (is_scalar(j)) {
        return scalar_text(j);
    }
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
            s += (i > 0 ? ", " : "") + inline_text(j[i]);
        }
        return s + "]";
    }
    std::string s = "{";
    bool first = true;
    for (const auto& item : j.items()) {
        s += (first ? "" : ", ") + item.key() + "=" + inline_text(item.value());
        first = false;
    }
    return s + "}";
}

void render(std::ostream& out, const Json& j, const std::string& indent) {
    if (is_table(j)) {
        std::vector<std::string> head;
        for (const auto& item : j[0].items()) {
            head.push_back(item.key());
        }
        std::vector<std::vector<std::string>> rows{head};
        for (const auto& row : j) {
            std::vector<std::string> cells;
            for (const auto& key : head) {
                cells.push_back(row.contains(key) ? inline_text(row[key]) : "");
            }
            rows.push_back(cells);
        }
        std::vector<std::size_t> width(head.size(), 0);
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                width[i] = std::max(width[i], row[i].size());
            }
        }
        for (const auto& row : rows) {
            out << indent;
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << row[i];
                if (i + 1 < row.size()) {
                    out << std::string(width[i] - row[i].size() + 2, ' ');
                }
            }
            out << "\n";
        }
        return;
    }
    if (j.is_object()) {
        for (const auto& item : j.items()) {
            const Json& v = item.value();
            if (is_scalar(v) || v.empty() || (v.is_object() && v.size() <= 4 && std::all_of(v.begin(), v.end(), is_scalar))) {
                out << indent << item.key() << ": " << inline_text(v) << "\n";
            } else {
                out << indent << item.key() << ":\n";
                render(out, v, indent + "  ");
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& v : j) {
            if (is_scalar(v)) {
                out << indent << "- " << scalar_text(v) << "\n";
            } else {
                out << indent << "-\n";
                render(out, v, indent + "  ");
            }
        }
        return;
    }
    out << indent << scalar_text(j) << "\n";
}

struct Loaded {
    Program program;
    State sigma;
};

Loaded load_program_and_state(const Options& o, const std::set<std::string>& extra_vars) {
    if (o.program.empty()) {
        throw InputError("missing program file");
    }
    State sigma;
    try {
        sigma = parse_state(o.state);
    } catch (const DomainError& e) {
        throw InputError(std::string("--state: ") + e.what());
    }
    Loaded l{parse_program(read_file(o.program)), sigma};
    std::set<std::string> vars = variables_of(l.program);
    vars.insert(extra_vars.begin(), extra_vars.end());
    l.sigma = l.sigma.completed(vars);
    return l;
}

Json with_command(const std::string& name, Json body) {
    Json out;
    out["command"] = name;
    for (auto& item : body.items()) {
        out[item.key()] = item.value();
    }
    return out;
}

std::uint64_t resolve_seed(const Options& o, const CLI::Option* seed_opt) {
    if (seed_opt->count() > 0) {
        return o.seed;
    }
    if (const char* env = std::getenv("COVAR_SEED")) {
        try {
            std::size_t used = 0;
            std::uint64_t v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw InputError(std::string("COVAR_SEED is not an unsigned integer: ") + env);
    }
    return o.seed;
}

struct Output {
    Json report;
    std::optional<std::string> raw;
    std::optional<std::string> pretty_line;
};

Output run(const std::string& cmd, const Options& o, const CLI::Option* seed_opt) {
    Output out;

    if (cmd == "parse") {
        Loaded l = load_program_and_state(o, {});
        std::set<std::string> vars = variables_of(l.program);
        out.report = Json{{"command", cmd},
                          {"program", pretty_print(l.program)},
                          {"hash", program_hash(l.program)},
                          {"variables", Json(std::vector<std::string>(vars.begin(), vars.end()))},
                          {"loops", contains_loop(l.program)}};
        out.pretty_line = pretty_print(l.program);
        return out;
    }

    if (cmd == "wp" || cmd == "wlp" || cmd == "rt") {
        TransformerKind kind = cmd == "wp" ? TransformerKind::WP : cmd == "wlp" ? TransformerKind::WLP : TransformerKind::RT;
        std::string post_text = o.f.empty() ? (kind == TransformerKind::WLP ? "1" : "") : o.f;
        Expectation post = required_text(post_text, "--f");
        std::set<std::string> vars;
        collect_variables(post, vars);
        Loaded l = load_program_and_state(o, vars);
        ExtReal v = transform_eval(kind, l.program, post, l.sigma, Fuel{o.k});
        out.report = Json{{"command", cmd},     {"post", to_string(post)}, {"k", o.k},
                          {"state", to_json(l.sigma)}, {"value", v.str()},   {"approx", SignedExt(v).to_double()}};
        out.pretty_line = v.str();
        return out;
    }

    if (cmd == "expval") {
        Expectation f = required_text(o.f, "--f");
        std::set<std::string> vars;
        collect_variables(f, vars);
        Loaded l = load_program_and_state(o, vars);
        CondExpectedValue e = cond_expected_value(l.program, f, l.sigma, Fuel{o.k});
        out.report = Json{{"command", cmd},
                          {"f", to_string(f)},
                          {"k", o.k},
                          {"state", to_json(l.sigma)},
                          {"value", e.lower.str()},
                          {"approx", SignedExt(e.lower).to_double()},
                          {"wp", ext_json(e.wp_k)},
                          {"wlp", ext_json(e.wlp_k)}};
        return out;
    }

    if (cmd == "covar-upper" || cmd == "covar-lower") {
        Expectation f = required_text(o.f, "--f");
        Expectation g = o.g.empty() ? f : parse_expectation(o.g);
        Expectation y = required_file(o.inv_y, "--inv-y");
        std::set<std::string> vars;
        collect_variables(f, vars);
        collect_variables(g, vars);
        collect_variables(y, vars);
        if (cmd == "covar-upper") {
            Expectation x = required_file(o.inv_x, "--inv-x");
            collect_variables(x, vars);
            Loaded l = load_program_and_state(o, vars);
            out.report = with_command(cmd, to_json(covariance_upper_bounds(l.program, l.sigma, f, g, x, y, o.kmax)));
        } else {
            Expectation xf = required_file(o.inv_xf, "--inv-xf");
            Expectation xg = o.inv_xg.empty() ? xf : load_expectation_file(o.inv_xg);
            collect_variables(xf, vars);
            collect_variables(xg, vars);
            Loaded l = load_program_and_state(o, vars);
            out.report =
                with_command(cmd, to_json(covariance_lower_bounds(l.program, l.sigma, f, g, xf, xg, y, o.kmax)));
        }
        return out;
    }

    if (cmd == "var") {
        Expectation f = required_text(o.f, "--f");
        std::optional<Expectation> x = optional_file(o.inv_x);
        std::optional<Expectation> xf = optional_file(o.inv_xf);
        Expectation y = o.inv_y.empty() ? Expectation::one() : load_expectation_file(o.inv_y);
        std::set<std::string> vars;
        collect_variables(f, vars);
        add_vars(vars, x);
        add_vars(vars, xf);
        collect_variables(y, vars);
        std::optional<Rational> eps;
        if (!o.epsilon.empty()) {
            try {
                eps = parse_rational(o.epsilon);
            } catch (const DomainError& e) {
                throw InputError(std::string("--epsilon: ") + e.what());
            }
        }
        Loaded l = load_program_and_state(o, vars);
        if (contains_loop(l.program) && !x && !xf) {
            throw PreconditionError("a loop needs --inv-x or --inv-xf");
        }
        VarianceReport r = variance_report(l.program, l.sigma, f, VarianceInvariants{x, xf, y}, o.kmax, eps);
        out.report = Json{{"command", cmd}, {"f", to_string(f)}};
        out.report["upper"] = r.upper ? to_json(*r.upper) : Json(nullptr);
        out.report["lower"] = r.lower ? to_json(*r.lower) : Json(nullptr);
        out.report["heuristic_stop"] = r.heuristic_stop;
        return out;
    }

    if (cmd == "rtvar") {
        Expectation x = required_file(o.inv_x, "--inv-x");
        Expectation y = o.inv_y.empty() ? Expectation::one() : load_expectation_file(o.inv_y);
        std::set<std::string> vars;
        collect_variables(x, vars);
        collect_variables(y, vars);
        Loaded l = load_program_and_state(o, vars);
        out.report = with_command(cmd, to_json(rt_variance_upper_bounds(l.program, l.sigma, x, y, o.kmax)));
        return out;
    }

    if (cmd == "check-inv") {
        std::optional<Expectation> x = optional_file(o.inv_x);
        std::optional<Expectation> xf = optional_file(o.inv_xf);
        std::optional<Expectation> xg = optional_file(o.inv_xg);
        std::optional<Expectation> y = optional_file(o.inv_y);
        if (!x && !xf && !xg && !y) {
            throw InputError("check-inv needs at least one of --inv-x, --inv-xf, --inv-xg, --inv-y");
        }
        std::optional<Expectation> f = o.f.empty() ? std::nullopt : std::optional(parse_expectation(o.f));
        std::optional<Expectation> g = o.g.empty() ? f : std::optional(parse_expectation(o.g));
        if (((x && !o.rt) || xf || xg) && !f) {
            throw InputError("wp checks need --f");
        }
        std::set<std::string> vars;
        add_vars(vars, x);
        add_vars(vars, xf);
        add_vars(vars, xg);
        add_vars(vars, y);
        add_vars(vars, f);
        add_vars(vars, g);
        Loaded l = load_program_and_state(o, vars);
        require_simple_loop(l.program);
        std::set<std::string> grid_vars = variables_of(l.program);
        grid_vars.insert(vars.begin(), vars.end());
        if (o.rt) {
            grid_vars.insert("tau");
        } else {
            grid_vars.erase("tau");
        }
        bool integer_ops = uses_integer_ops(l.program);
        for (const auto* e : {&x, &xf, &xg, &y}) {
            integer_ops = integer_ops || (*e && uses_integer_ops(**e));
        }
        GridOptions opts;
        opts.lo = o.grid_lo;
        opts.hi = o.grid_hi;
        opts.random_count = o.grid_random;
        opts.extra = {l.sigma};
        if (o.integer_grid) {
            opts.integer_random = true;
        }
        std::vector<State> grid = default_grid(grid_vars, opts, integer_ops);

        Json reports = Json::array();
        bool refuted = false;
        auto add = [&](const std::string& role, const InvariantReport& r) {
            Json j = to_json(r);
            j["invariant"] = role;
            refuted = refuted || r.verdict == Verdict::Refuted;
            reports.push_back(std::move(j));
        };
        if (x) {
            add("X", o.rt ? check_rt_superinvariant(l.program, *x, grid)
                          : check_wp_superinvariant(l.program, *f * *g, *x, grid));
        }
        if (xf) {
            add("Xf", check_wp_superinvariant(l.program, *f, *xf, grid));
        }
        if (xg) {
            add("Xg", check_wp_superinvariant(l.program, *g, *xg, grid));
        }
        if (y) {
            add("Y", check_wlp_subinvariant(l.program, *y, grid));
            add("Y(sigma) > 0", check_positive(*y, l.sigma));
        }
        out.report = Json{{"command", cmd},
                          {"grid_states", grid.size()},
                          {"verdict", refuted ? "refuted" : "holds-on-tested"},
                          {"reports", reports}};
        return out;
    }

    if (cmd == "mc") {
        Expectation t = parse_expectation(o.t);
        std::set<std::string> vars;
        collect_variables(t, vars);
        Loaded l = load_program_and_state(o, vars);
        OperationalMC m = build_mc(l.program, l.sigma, t, o.budget);
        if (!o.export_format.empty()) {
            out.raw = export_mc(m, o.export_format == "dot" ? ExportFormat::Dot : ExportFormat::Json);
            return out;
        }
        out.report = Json{{"command", cmd},
                          {"reward", to_string(t)},
                          {"states", m.states().size()},
                          {"transitions", m.transitions().size()},
                          {"closed", m.closed()},
                          {"budget_used", m.budget_used()},
                          {"expected_reward", to_json(expected_reward(m))},
                          {"cond_expected_reward", to_json(cond_expected_reward(m))}};
        return out;
    }

    if (cmd == "simulate") {
        Loaded l = load_program_and_state(o, {});
        std::uint64_t seed = resolve_seed(o, seed_opt);
        out.report = with_command(cmd, to_json(simulate(l.program, l.sigma, seed, o.step_limit)));
        out.report["seed"] = seed;
        return out;
    }

    if (cmd == "estimate") {
        std::uint64_t seed = resolve_seed(o, seed_opt);
        if (o.target == "rt-variance") {
            Loaded l = load_program_and_state(o, {});
            out.report = with_command(cmd, to_json(estimate_rt_variance(l.program, l.sigma, o.n, seed, o.step_limit)));
        } else {
            Expectation f = required_text(o.f, "--f");
            Expectation g = o.g.empty() ? f : parse_expectation(o.g);
            std::set<std::string> vars;
            collect_variables(f, vars);
            collect_variables(g, vars);
            Loaded l = load_program_and_state(o, vars);
            out.report =
                with_command(cmd, to_json(estimate_covariance(l.program, l.sigma, f, g, o.n, seed, o.step_limit)));
        }
        out.report["target"] = o.target;
        return out;
    }

    throw InputError("unknown subcommand " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds, chains and samples for probabilistic programs with conditioning"};
    app.require_subcommand(1);
    Options o;
    Registry reg;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"parse", "parse and pretty-print a program"},
        {"wp", "weakest pre-expectation wp^k[C](f) at a state"},
        {"wlp", "weakest liberal pre-expectation wlp^k[C](f) at a state"},
        {"rt", "expected run-time rt^k[C](f) at a state"},
        {"expval", "conditional expected value wp^k(f)/wlp^k(1)"},
        {"covar-upper", "upper bounds on Cov(f, g) from X and Y invariants"},
        {"covar-lower", "lower bounds on Cov(f, g) from Xf, Xg and Y invariants"},
        {"var", "variance bounds of f"},
        {"rtvar", "upper bounds on the run-time variance"},
        {"check-inv", "test invariant candidates on a state grid"},
        {"mc", "explore the operational Markov chain"},
        {"simulate", "sample a single run"},
        {"estimate", "Monte Carlo estimate of a covariance or run-time variance"},
    };
    for (const auto& [name, help] : commands) {
        add_common(app.add_subcommand(name, help), o, reg);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string cmd = sub->get_name();

    // Options of the chosen subcommand only.
    Registry active;
    for (const auto& [key, opt] : reg.entries) {
        for (const CLI::Option* mine : sub->get_options()) {
            if (mine == opt) {
                active.entries.emplace_back(key, opt);
            }
        }
    }
    const CLI::Option* seed_opt = sub->get_option("--seed");

    Output out;
    try {
        if (!o.config.empty()) {
            merge_config(o.config, active);
        }
        out = run(cmd, o, seed_opt);
    } catch (const InputError& e) {
        std::cerr << "covar: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        std::cerr << "covar: parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::cerr << "covar: precondition: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const DomainError& e) {
        std::cerr << "covar: " << e.what() << "\n";
        return kExitPrecondition;
    }

    if (out.raw) {
        std::cout << *out.raw;
        if (out.raw->empty() || out.raw->back() != '\n') {
            std::cout << "\n";
        }
    } else if (o.pretty && out.pretty_line) {
        std::cout << *out.pretty_line << "\n";
    } else if (o.pretty) {
        render(std::cout, out.report, "");
    } else {
        std::cout << out.report.dump(2) << "\n";
    }
    return 0;
}
