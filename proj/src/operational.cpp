#include "covar/operational.hpp"

#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

#include "covar/parser.hpp"

namespace covar {

const char* to_string(MCStateKind k) {
    switch (k) {
    case MCStateKind::Running: return "running";
    case MCStateKind::Terminated: return "terminated";
    case MCStateKind::Violated: return "violated";
    case MCStateKind::Sink: return "sink";
    }
    return "?";
}

namespace {

struct Successor {
    Rational p;
    MCStateKind kind;
    Program program;
    State state;
};

Successor config(Rational p, Program c, State s) {
    MCStateKind kind = c.kind() == ProgramKind::Done ? MCStateKind::Terminated : MCStateKind::Running;
    return Successor{std::move(p), kind, std::move(c), std::move(s)};
}

Successor special(MCStateKind kind) { return Successor{Rational(1), kind, Program(), State()}; }

Program unroll(const Program& c, Program again) {
    return Program::ite(c.guard(), Program::seq(c.first(), std::move(again)), Program::empty_stmt());
}

std::vector<Successor> step(const Program& c, const State& s) {
    switch (c.kind()) {
    case ProgramKind::Done: return {special(MCStateKind::Sink)};
    case ProgramKind::Empty: return {config(1, Program::done(), s)};
    case ProgramKind::Skip: return {config(1, Program::done(), s.with_tick())};
    case ProgramKind::Halt: return {special(MCStateKind::Sink)};
    case ProgramKind::Assign:
        return {config(1, Program::done(), s.with(c.var(), eval_arith(c.expr(), s)).with_tick())};
    case ProgramKind::Diverge: return {config(1, c, s)};
    case ProgramKind::Observe:
        if (eval_bool(c.guard(), s)) {
            return {config(1, Program::done(), s.with_tick())};
        }
        return {special(MCStateKind::Violated)};
    case ProgramKind::If:
        return {config(1, eval_bool(c.guard(), s) ? c.first() : c.second(), s.with_tick())};
    case ProgramKind::PChoice: {
        State t = s.with_tick();
        const Rational& p = c.prob();
        if (c.first() == c.second() || p == 1) {
            return {config(1, c.first(), t)};
        }
        if (p == 0) {
            return {config(1, c.second(), t)};
        }
        return {config(p, c.first(), t), config(1 - p, c.second(), std::move(t))};
    }
    case ProgramKind::While: return {config(1, unroll(c, c), s)};
    case ProgramKind::BoundedWhile:
        if (c.bound() == 0) {
            return {special(MCStateKind::Sink)};
        }
        return {config(1, unroll(c, Program::bounded_loop(c.bound() - 1, c.guard(), c.first())), s)};
    case ProgramKind::Seq: {
        if (c.first().kind() == ProgramKind::Done) {
            return {config(1, c.second(), s)};
        }
        std::vector<Successor> out = step(c.first(), s);
        for (Successor& succ : out) {
            // Violation and sink (from halt) end the whole run.
            if (succ.kind == MCStateKind::Running || succ.kind == MCStateKind::Terminated) {
                succ.kind = MCStateKind::Running;
                succ.program = Program::seq(succ.program, c.second());
            }
        }
        return out;
    }
    }
    throw DomainError("unknown statement");
}

std::string key_of(MCStateKind kind, const Program& c, const State& s) {
    switch (kind) {
    case MCStateKind::Violated: return "#violated";
    case MCStateKind::Sink: return "#sink";
    default: return pretty_print(c) + "\x1f" + s.str();
    }
}

ExtReal reward_of(const MCState& st, const Expectation& t) {
    return st.kind == MCStateKind::Terminated ? evaluate(t, st.state) : ExtReal::zero();
}

} // namespace

std::vector<std::size_t> OperationalMC::frontier() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (!states_[i].expanded) {
            out.push_back(i);
        }
    }
    return out;
}

OperationalMC OperationalMC::with_rewards(const Expectation& t) const {
    OperationalMC m = *this;
    for (MCState& st : m.states_) {
        st.reward = reward_of(st, t);
    }
    return m;
}

OperationalMC build_mc(const Program& c, const State& sigma, const Expectation& t, std::size_t budget) {
    if (budget == 0) {
        throw PreconditionError("exploration budget must be at least 1");
    }
    OperationalMC m;
    std::map<std::string, std::size_t> index;
    std::deque<std::size_t> queue;

    auto discover = [&](MCStateKind kind, const Program& p, const State& s) {
        std::string key = key_of(kind, p, s);
        auto it = index.find(key);
        if (it != index.end()) {
            return it->second;
        }
        MCState st{kind, p, s, ExtReal::zero(), false};
        st.reward = reward_of(st, t);
        m.states_.push_back(std::move(st));
        std::size_t id = m.states_.size() - 1;
        index.emplace(std::move(key), id);
        queue.push_back(id);
        return id;
    };

    discover(c.kind() == ProgramKind::Done ? MCStateKind::Terminated : MCStateKind::Running, c, sigma);
    while (!queue.empty() && m.budget_used_ < budget) {
        std::size_t id = queue.front();
        queue.pop_front();
        ++m.budget_used_;
        MCState current = m.states_[id];
        std::vector<Successor> succs;
        switch (current.kind) {
        case MCStateKind::Violated:
        case MCStateKind::Sink: succs = {special(MCStateKind::Sink)}; break;
        default: succs = step(current.program, current.state); break;
        }
        m.states_[id].expanded = true;
        std::map<std::size_t, Rational> merged;
        std::vector<std::size_t> order;
        for (const Successor& succ : succs) {
            std::size_t to = discover(succ.kind, succ.program, succ.state);
            auto [it, fresh] = merged.emplace(to, succ.p);
            if (fresh) {
                order.push_back(to);
            } else {
                it->second += succ.p;
            }
        }
        for (std::size_t to : order) {
            m.transitions_.push_back({id, to, merged[to]});
        }
    }
    return m;
}

namespace {

struct Solution {
    ExtReal reach_sink;
    ExtReal reach_violation;
    // Reward mass over runs that reach sink without a violation.
    ExtReal reward_mass;
};

// Sums over the explored fragment in reverse topological order. Only
// self-loops may form cycles; frontier states contribute nothing.
Solution solve(const OperationalMC& m) {
    const auto& states = m.states();
    std::size_t n = states.size();
    std::vector<std::vector<const MCTransition*>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const MCTransition& tr : m.transitions()) {
        out[tr.from].push_back(&tr);
        if (tr.from != tr.to) {
            ++indegree[tr.to];
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    while (!ready.empty()) {
        std::size_t i = ready.front();
        ready.pop_front();
        order.push_back(i);
        for (const MCTransition* tr : out[i]) {
            if (tr->to != i && --indegree[tr->to] == 0) {
                ready.push_back(tr->to);
            }
        }
    }
    if (order.size() != n) {
        throw DomainError("explored chain has a cycle other than a self-loop");
    }

    std::vector<Rational> sink(n), viol(n), safe(n);
    std::vector<ExtReal> mass(n);
    for (std::size_t pos = n; pos-- > 0;) {
        std::size_t i = order[pos];
        const MCState& st = states[i];
        if (st.kind == MCStateKind::Sink) {
            sink[i] = 1;
            safe[i] = 1;
            continue;
        }
        if (st.kind == MCStateKind::Violated) {
            sink[i] = st.expanded ? 1 : 0;
            viol[i] = 1;
            continue;
        }
        Rational self(0);
        Rational ps(0), pv(0), pq(0);
        ExtReal r = ExtReal::zero();
        for (const MCTransition* tr : out[i]) {
            if (tr->to == i) {
                self += tr->probability;
                continue;
            }
            ps += tr->probability * sink[tr->to];
            pv += tr->probability * viol[tr->to];
            pq += tr->probability * safe[tr->to];
            r = r + ExtReal(tr->probability) * mass[tr->to];
        }
        if (self == 1) {
            continue; // diverge: never leaves
        }
        Rational scale = 1 / (1 - self);
        sink[i] = ps * scale;
        viol[i] = pv * scale;
        safe[i] = pq * scale;
        mass[i] = ExtReal(Rational(safe[i])) * st.reward + ExtReal(scale) * r;
    }
    return Solution{ExtReal(sink[0]), ExtReal(viol[0]), mass[0]};
}

} // namespace

RewardResult expected_reward(const OperationalMC& m) {
    Solution sol = solve(m);
    RewardResult res;
    res.truncated = !m.closed();
    res.reach_sink = sol.reach_sink;
    res.reach_violation = sol.reach_violation;
    res.lower = sol.reward_mass;
    if (!res.truncated) {
        res.exact = sol.reach_sink == ExtReal::one() ? sol.reward_mass : ExtReal::infinity();
        res.lower = *res.exact;
    }
    return res;
}

RewardResult cond_expected_reward(const OperationalMC& m) {
    Solution sol = solve(m);
    RewardResult res;
    res.truncated = !m.closed();
    res.reach_sink = sol.reach_sink;
    res.reach_violation = sol.reach_violation;
    ExtReal survive(Rational(1 - sol.reach_violation.finite()));
    res.lower = divide(sol.reward_mass, survive);
    if (!res.truncated) {
        res.exact = sol.reach_sink == ExtReal::one() ? res.lower : ExtReal::infinity();
        res.lower = *res.exact;
    }
    return res;
}

namespace {

std::string label_of(const MCState& st) {
    switch (st.kind) {
    case MCStateKind::Violated: return "↯";
    case MCStateKind::Sink: return "sink";
    default: return "<" + pretty_print(st.program) + ", " + st.state.str() + ">";
    }
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out;
}

} // namespace

std::string export_mc(const OperationalMC& m, ExportFormat format) {
    const auto& states = m.states();
    if (format == ExportFormat::Dot) {
        std::ostringstream os;
        os << "digraph mc {\n";
        for (std::size_t i = 0; i < states.size(); ++i) {
            const MCState& st = states[i];
            os << "  s" << i << " [label=\"" << dot_escape(label_of(st));
            if (st.kind == MCStateKind::Terminated) {
                os << "\\nrew=" << st.reward.str();
            }
            os << "\"";
            if (!st.expanded) {
                os << ", style=dashed";
            }
            os << "];\n";
        }
        for (const MCTransition& tr : m.transitions()) {
            os << "  s" << tr.from << " -> s" << tr.to << " [label=\"" << to_string(tr.probability) << "\"];\n";
        }
        os << "}\n";
        return os.str();
    }

    nlohmann::ordered_json j;
    j["initial"] = 0;
    j["truncated"] = !m.closed();
    j["budget_used"] = m.budget_used();
    auto& js = j["states"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const MCState& st = states[i];
        nlohmann::ordered_json e;
        e["id"] = i;
        e["kind"] = to_string(st.kind);
        if (st.kind == MCStateKind::Running || st.kind == MCStateKind::Terminated) {
            e["program"] = pretty_print(st.program);
            nlohmann::ordered_json sigma = nlohmann::ordered_json::object();
            for (const auto& [name, value] : st.state.values()) {
                sigma[name] = to_string(value);
            }
            e["state"] = std::move(sigma);
        }
        e["reward"] = st.reward.str();
        e["expanded"] = st.expanded;
        js.push_back(std::move(e));
    }
    auto& jt = j["transitions"] = nlohmann::ordered_json::array();
    for (const MCTransition& tr : m.transitions()) {
        jt.push_back({{"from", tr.from}, {"to", tr.to}, {"p", to_string(tr.probability)}});
    }
    j["frontier"] = m.frontier();
    return j.dump(2) + "\n";
}

} // namespace covar
