#include "covar/bounds.hpp"

#include <cstdint>
#include <cstdio>

#include "covar/parser.hpp"

namespace covar {

const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

bool BoundSequence::is_monotone() const {
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const SignedExt& prev = entries[i - 1].value;
        const SignedExt& cur = entries[i].value;
        if (direction == Direction::Upper ? cur > prev : cur < prev) {
            return false;
        }
    }
    return true;
}

std::string program_hash(const Program& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : pretty_print(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

ExtReal square(const ExtReal& v) { return v * v; }

BoundMeta make_meta(const Program& c, const State& s,
                    std::vector<std::pair<std::string, std::string>> invariants) {
    return BoundMeta{pretty_print(c), program_hash(c), s, std::move(invariants)};
}

ExtReal positive_y(const Expectation& y_hat, const State& s) {
    ExtReal y = evaluate(y_hat, s);
    if (y.is_zero()) {
        throw PreconditionError("Y(sigma) must be positive, got 0 at " + s.str());
    }
    if (y.is_infinite()) {
        throw PreconditionError("Y(sigma) must be finite at " + s.str());
    }
    return y;
}

// Shared state for the upper-bound recurrences of one loop.
class UpperCovariance {
  public:
    UpperCovariance(const Program& loop, const State& s, const Expectation& f, const Expectation& g,
                    const Expectation& x_hat, const Expectation& y_hat)
        : s_(s), ff_(TransformerKind::WP, loop, f), fg_(TransformerKind::WP, loop, g),
          gy_(TransformerKind::WLP, loop, Expectation::one()), same_(f == g) {
        ExtReal y = positive_y(y_hat, s);
        head_ = divide(evaluate(x_hat, s), y);
    }

    SignedExt at(unsigned k) {
        ExtReal a = ff_.at(k, s_);
        ExtReal b = same_ ? a : fg_.at(k, s_);
        ExtReal mean_product = divide(a * b, square(gy_.at(k, s_)));
        return SignedExt(head_) - SignedExt(mean_product);
    }

  private:
    State s_;
    CharIterates ff_;
    CharIterates fg_;
    CharIterates gy_;
    bool same_;
    ExtReal head_;
};

class LowerCovariance {
  public:
    LowerCovariance(const Program& c, const State& s, const Expectation& f, const Expectation& g,
                    const Expectation& xf_hat, const Expectation& xg_hat, const Expectation& y_hat)
        : c_(c), s_(s), fg_(f * g) {
        ExtReal y = positive_y(y_hat, s);
        tail_ = divide(evaluate(xf_hat, s) * evaluate(xg_hat, s), square(y));
    }

    SignedExt at(unsigned k) {
        CondExpectedValue e = cond_expected_value(c_, fg_, s_, Fuel{k});
        return SignedExt(e.lower) - SignedExt(tail_);
    }

  private:
    Program c_;
    State s_;
    Expectation fg_;
    ExtReal tail_;
};

} // namespace

CondExpectedValue cond_expected_value(const Program& c, const Expectation& f, const State& s, Fuel k) {
    ExtReal num = transform_eval(TransformerKind::WP, c, f, s, k);
    ExtReal den = transform_eval(TransformerKind::WLP, c, Expectation::one(), s, k);
    return CondExpectedValue{divide(num, den), num, den};
}

BoundSequence covariance_upper_bounds(const Program& loop, const State& s, const Expectation& f,
                                      const Expectation& g, const Expectation& x_hat, const Expectation& y_hat,
                                      unsigned kmax) {
    require_simple_loop(loop);
    UpperCovariance rec(loop, s, f, g, x_hat, y_hat);
    BoundSequence out;
    out.direction = Direction::Upper;
    out.target = "covariance";
    out.meta = make_meta(loop, s, {{"X", to_string(x_hat)}, {"Y", to_string(y_hat)}});
    for (unsigned k = 0; k <= kmax; ++k) {
        out.entries.push_back({k, rec.at(k)});
    }
    return out;
}

BoundSequence covariance_lower_bounds(const Program& c, const State& s, const Expectation& f,
                                      const Expectation& g, const Expectation& xf_hat,
                                      const Expectation& xg_hat, const Expectation& y_hat, unsigned kmax) {
    LowerCovariance rec(c, s, f, g, xf_hat, xg_hat, y_hat);
    BoundSequence out;
    out.direction = Direction::Lower;
    out.target = "covariance";
    out.meta = make_meta(c, s, {{"Xf", to_string(xf_hat)}, {"Xg", to_string(xg_hat)}, {"Y", to_string(y_hat)}});
    for (unsigned k = 0; k <= kmax; ++k) {
        out.entries.push_back({k, rec.at(k)});
    }
    return out;
}

BoundSequence rt_variance_upper_bounds(const Program& loop, const State& s, const Expectation& x_hat,
                                       const Expectation& y_hat, unsigned kmax) {
    require_simple_loop(loop);
    if (sgn(s.tau()) != 0) {
        throw PreconditionError("run-time variance requires tau = 0 in the initial state, got " + to_string(s.tau()));
    }
    ExtReal head = divide(evaluate(x_hat, s), positive_y(y_hat, s));
    CharIterates ft(TransformerKind::RT, loop, Expectation::variable(std::string(kTau)));
    CharIterates gy(TransformerKind::WLP, loop, Expectation::one());

    BoundSequence out;
    out.direction = Direction::Upper;
    out.target = "rt-variance";
    out.meta = make_meta(loop, s, {{"X", to_string(x_hat)}, {"Y", to_string(y_hat)}});
    for (unsigned k = 0; k <= kmax; ++k) {
        ExtReal mean = divide(ft.at(k, s), gy.at(k, s));
        out.entries.push_back({k, SignedExt(head) - SignedExt(square(mean))});
    }
    return out;
}

VarianceReport variance_report(const Program& c, const State& s, const Expectation& f,
                               const VarianceInvariants& inv, unsigned kmax, std::optional<Rational> epsilon) {
    VarianceReport report;
    BoundMeta meta = make_meta(c, s, {});

    if (!contains_loop(c)) {
        // Loop-free: both sides collapse to the exact variance.
        CondExpectedValue m2 = cond_expected_value(c, f * f, s, Fuel{0});
        CondExpectedValue m1 = cond_expected_value(c, f, s, Fuel{0});
        SignedExt exact = SignedExt(m2.lower) - SignedExt(square(m1.lower));
        BoundSequence up{Direction::Upper, "variance", {}, meta};
        BoundSequence lo{Direction::Lower, "variance", {}, meta};
        for (unsigned k = 0; k <= kmax; ++k) {
            up.entries.push_back({k, exact});
            lo.entries.push_back({k, exact});
            if (epsilon) {
                report.heuristic_stop = true;
                break;
            }
        }
        report.upper = std::move(up);
        report.lower = std::move(lo);
        return report;
    }

    std::optional<UpperCovariance> up_rec;
    std::optional<LowerCovariance> lo_rec;
    if (inv.second_moment) {
        require_simple_loop(c);
        up_rec.emplace(c, s, f, f, *inv.second_moment, inv.y_hat);
        BoundMeta m = meta;
        m.invariants = {{"X", to_string(*inv.second_moment)}, {"Y", to_string(inv.y_hat)}};
        report.upper = BoundSequence{Direction::Upper, "variance", {}, std::move(m)};
    }
    if (inv.first_moment) {
        lo_rec.emplace(c, s, f, f, *inv.first_moment, *inv.first_moment, inv.y_hat);
        BoundMeta m = meta;
        m.invariants = {{"Xf", to_string(*inv.first_moment)}, {"Y", to_string(inv.y_hat)}};
        report.lower = BoundSequence{Direction::Lower, "variance", {}, std::move(m)};
    }
    if (!up_rec && !lo_rec) {
        throw PreconditionError("variance bounds for a loop need a second-moment or first-moment invariant");
    }

    for (unsigned k = 0; k <= kmax; ++k) {
        if (up_rec) {
            report.upper->entries.push_back({k, up_rec->at(k)});
        }
        if (lo_rec) {
            report.lower->entries.push_back({k, lo_rec->at(k)});
        }
        if (epsilon && up_rec && lo_rec) {
            const SignedExt& u = report.upper->entries.back().value;
            const SignedExt& l = report.lower->entries.back().value;
            if (u.is_finite() && l.is_finite() && u.finite() - l.finite() < *epsilon) {
                report.heuristic_stop = true;
                break;
            }
        }
    }
    return report;
}

} // namespace covar
