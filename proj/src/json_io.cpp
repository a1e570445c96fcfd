#include "covar/json_io.hpp"

#include <cstdio>

namespace covar {

namespace {

std::string render_double(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

} // namespace

State state_from_json(const Json& j) {
    if (!j.is_object()) {
        throw DomainError("state must be a JSON object");
    }
    State s;
    for (const auto& [name, value] : j.items()) {
        std::string key = name == "τ" ? std::string(kTau) : name;
        if (value.is_string()) {
            s.set(key, parse_rational(value.get<std::string>()));
        } else if (value.is_number_integer()) {
            s.set(key, Rational(mpz_class(std::to_string(value.get<long long>()))));
        } else {
            throw DomainError("state value for " + name + " must be a rational string or an integer");
        }
    }
    return s;
}

State parse_state(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("malformed state JSON: ") + e.what());
    }
    return state_from_json(j);
}

Json to_json(const State& s) {
    Json j = Json::object();
    for (const auto& [name, value] : s.values()) {
        j[name] = to_string(value);
    }
    return j;
}

Json to_json(const SignedExt& v) { return v.str(); }

Json entries_json(const BoundSequence& b) {
    Json arr = Json::array();
    for (const BoundEntry& e : b.entries) {
        arr.push_back({{"k", e.k}, {"value", e.value.str()}, {"approx", render_double(e.value.to_double())}});
    }
    return arr;
}

Json to_json(const BoundSequence& b) {
    Json j;
    j["target"] = b.target;
    j["direction"] = to_string(b.direction);
    j["entries"] = entries_json(b);
    j["monotone"] = b.is_monotone();
    Json meta;
    meta["program"] = b.meta.program;
    meta["program_hash"] = b.meta.program_hash;
    meta["sigma"] = to_json(b.meta.sigma);
    Json inv = Json::object();
    for (const auto& [role, text] : b.meta.invariants) {
        inv[role] = text;
    }
    meta["invariants"] = std::move(inv);
    j["meta"] = std::move(meta);
    return j;
}

Json to_json(const InvariantReport& r) {
    Json j;
    j["condition"] = r.condition;
    j["verdict"] = to_string(r.verdict);
    j["states_tested"] = r.states_tested;
    Json cex = Json::array();
    for (const auto& c : r.counterexamples) {
        cex.push_back({{"state", to_json(c.state)}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"reason", c.reason}});
    }
    j["counterexamples"] = std::move(cex);
    Json errs = Json::array();
    for (const auto& e : r.errors) {
        errs.push_back({{"state", to_json(e.state)}, {"message", e.message}});
    }
    j["errors"] = std::move(errs);
    return j;
}

Json to_json(const RewardResult& r) {
    Json j;
    j["truncated"] = r.truncated;
    if (r.exact) {
        j["exact"] = r.exact->str();
    } else {
        j["lower"] = r.lower.str();
        j["upper"] = "inf";
    }
    j["reach_sink"] = r.reach_sink.str();
    j["reach_violation"] = r.reach_violation.str();
    return j;
}

Json to_json(const RunOutcome& r) {
    Json j;
    j["outcome"] = to_string(r.kind);
    j["state"] = to_json(r.state);
    j["steps"] = r.steps;
    j["transitions"] = r.transitions;
    if (!r.message.empty()) {
        j["message"] = r.message;
    }
    return j;
}

Json to_json(const Estimate& e) {
    Json j;
    if (e.value) {
        j["value"] = render_double(*e.value);
        j["std_error"] = e.std_error ? Json(render_double(*e.std_error)) : Json(nullptr);
    } else {
        j["value"] = nullptr;
        j["std_error"] = nullptr;
        j["note"] = "no accepted runs; estimate undefined";
    }
    j["n"] = e.n;
    j["accepted"] = e.accepted;
    j["rejected"] = e.rejected;
    j["exhausted"] = e.exhausted;
    j["halted"] = e.halted;
    j["errors"] = e.errors;
    j["seed"] = e.seed;
    if (e.exhausted > 0) {
        j["note"] = "exhausted runs are excluded; the estimate is biased towards short runs";
    }
    return j;
}

} // namespace covar
