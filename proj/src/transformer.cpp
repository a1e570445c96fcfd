#include "covar/transformer.hpp"

#include <memory>
#include <tuple>

namespace covar {

const char* to_string(TransformerKind kind) {
    switch (kind) {
    case TransformerKind::WP: return "wp";
    case TransformerKind::WLP: return "wlp";
    case TransformerKind::RT: return "rt";
    }
    return "?";
}

namespace {

// A continuation is the stack of statements still to run, ending in the
// post-expectation. Continuations are hash-consed so that (continuation,
// state) pairs can key the memo table; this keeps pchoice trees polynomial.
struct Frame {
    const void* id;
    const Program* prog;
    // Remaining iterations for loop frames.
    unsigned fuel;
};

struct Cont {
    Frame frame;
    const Cont* next;
};

class Evaluator {
  public:
    Evaluator(TransformerKind kind, const PostExpectation& post, unsigned fuel) : kind_(kind), post_(post), fuel_(fuel) {}

    ExtReal run(const Program& c, const State& s) { return value(push(c, nullptr), s); }

  private:
    TransformerKind kind_;
    const PostExpectation& post_;
    unsigned fuel_;
    // Programs pushed by loop unrolling must outlive the frames that point at them.
    std::map<std::tuple<const void*, unsigned, const Cont*>, std::unique_ptr<Cont>> conts_;
    std::map<std::pair<const Cont*, State>, ExtReal> memo_;

    const Cont* intern(const Program& p, unsigned fuel, const Cont* next) {
        auto key = std::make_tuple(p.id(), fuel, next);
        auto it = conts_.find(key);
        if (it != conts_.end()) {
            return it->second.get();
        }
        auto node = std::make_unique<Cont>(Cont{Frame{p.id(), &p, fuel}, next});
        const Cont* raw = node.get();
        conts_.emplace(key, std::move(node));
        return raw;
    }

    const Cont* push(const Program& p, const Cont* next) {
        unsigned fuel = 0;
        if (p.kind() == ProgramKind::While) {
            fuel = fuel_;
        } else if (p.kind() == ProgramKind::BoundedWhile) {
            fuel = p.bound();
        }
        return intern(p, fuel, next);
    }

    State tick(const State& s) const { return kind_ == TransformerKind::RT ? s.with_tick() : s; }

    ExtReal leaf(const State& s) {
        ExtReal v = post_(s);
        if (kind_ == TransformerKind::WLP && v > ExtReal::one()) {
            throw DomainError("wlp post-expectation value " + v.str() + " outside [0,1] at " + s.str());
        }
        return v;
    }

    ExtReal halt_value() const { return kind_ == TransformerKind::WLP ? ExtReal::one() : ExtReal::zero(); }

    ExtReal value(const Cont* k, const State& s) {
        if (k == nullptr) {
            return leaf(s);
        }
        auto key = std::make_pair(k, s);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        ExtReal v = step(k, s);
        memo_.emplace(std::move(key), v);
        return v;
    }

    ExtReal step(const Cont* k, const State& s) {
        const Program& c = *k->frame.prog;
        const Cont* rest = k->next;
        switch (c.kind()) {
        case ProgramKind::Skip: return value(rest, tick(s));
        case ProgramKind::Empty: return value(rest, s);
        case ProgramKind::Diverge:
            switch (kind_) {
            case TransformerKind::WP: return ExtReal::zero();
            case TransformerKind::WLP: return ExtReal::one();
            case TransformerKind::RT: return ExtReal::infinity();
            }
            break;
        case ProgramKind::Halt: return halt_value();
        case ProgramKind::Done: return value(rest, s);
        case ProgramKind::Assign: return value(rest, tick(s.with(c.var(), eval_arith(c.expr(), s))));
        case ProgramKind::Seq: return value(push(c.first(), push(c.second(), rest)), s);
        case ProgramKind::If: {
            State t = tick(s);
            return eval_bool(c.guard(), s) ? value(push(c.first(), rest), t) : value(push(c.second(), rest), t);
        }
        case ProgramKind::PChoice: {
            State t = tick(s);
            const Rational& p = c.prob();
            ExtReal out = ExtReal::zero();
            if (sgn(p) > 0) {
                out = out + ExtReal(p) * value(push(c.first(), rest), t);
            }
            Rational q = 1 - p;
            if (sgn(q) > 0) {
                out = out + ExtReal(q) * value(push(c.second(), rest), t);
            }
            return out;
        }
        case ProgramKind::Observe:
            return eval_bool(c.guard(), s) ? value(rest, tick(s)) : ExtReal::zero();
        case ProgramKind::While:
        case ProgramKind::BoundedWhile: {
            unsigned left = k->frame.fuel;
            if (left == 0) {
                return halt_value();
            }
            // while^{<n}(B){C} = if (B) {C; while^{<n-1}(B){C}} else {empty}
            State t = tick(s);
            if (!eval_bool(c.guard(), s)) {
                return value(rest, t);
            }
            const Cont* again = intern(c, left - 1, rest);
            return value(push(c.first(), again), t);
        }
        }
        throw DomainError("unknown statement");
    }
};

PostExpectation as_post(const Expectation& f) {
    return [f](const State& s) { return evaluate(f, s); };
}

} // namespace

ExtReal transform_eval(TransformerKind kind, const Program& c, const PostExpectation& post, const State& s, Fuel fuel) {
    Evaluator ev(kind, post, fuel.k);
    return ev.run(c, s);
}

ExtReal transform_eval(TransformerKind kind, const Program& c, const Expectation& post, const State& s, Fuel fuel) {
    return transform_eval(kind, c, as_post(post), s, fuel);
}

void require_simple_loop(const Program& loop) {
    if (loop.empty() || loop.kind() != ProgramKind::While) {
        throw PreconditionError("expected a single while loop");
    }
    if (contains_loop(loop.first())) {
        throw PreconditionError(
            "loop body contains a nested loop; exact characteristic-functional evaluation needs a loop-free body "
            "(use transform_eval with fuel instead)");
    }
}

ExtReal char_eval(TransformerKind kind, const Program& loop, const PostExpectation& h, const PostExpectation& x,
                  const State& s) {
    require_simple_loop(loop);
    State at = kind == TransformerKind::RT ? s.with_tick() : s;
    if (!eval_bool(loop.guard(), at)) {
        return kind == TransformerKind::WLP ? ExtReal::one() : h(at);
    }
    return transform_eval(kind, loop.first(), x, at, Fuel{0});
}

ExtReal char_eval(TransformerKind kind, const Program& loop, const Expectation& h, const Expectation& x,
                  const State& s) {
    return char_eval(kind, loop, as_post(h), as_post(x), s);
}

CharIterates::CharIterates(TransformerKind kind, Program loop, Expectation h)
    : kind_(kind), loop_(std::move(loop)), h_(std::move(h)) {
    require_simple_loop(loop_);
}

ExtReal CharIterates::at(unsigned k, const State& s) {
    if (k == 0) {
        return kind_ == TransformerKind::WLP ? ExtReal::one() : ExtReal::zero();
    }
    auto key = std::make_pair(k, s);
    if (auto it = memo_.find(key); it != memo_.end()) {
        return it->second;
    }
    PostExpectation h = [this](const State& t) { return evaluate(h_, t); };
    PostExpectation previous = [this, k](const State& t) { return at(k - 1, t); };
    ExtReal v = char_eval(kind_, loop_, h, previous, s);
    memo_.emplace(std::move(key), v);
    return v;
}

} // namespace covar
