#pragma once

#include <map>
#include <set>
#include <string>

#include "covar/numeric.hpp"
#include "covar/syntax.hpp"

namespace covar {

/// Program state: a total map from variables to rationals. The run-time
/// variable tau is always present and defaults to 0.
class State {
  public:
    State();
    State(std::initializer_list<std::pair<const std::string, Rational>> init);

    /// Throws DomainError for an unbound variable.
    [[nodiscard]] const Rational& get(const std::string& name) const;
    [[nodiscard]] bool has(const std::string& name) const { return values_.contains(name); }

    [[nodiscard]] State with(const std::string& name, Rational value) const;
    [[nodiscard]] State with_tick() const;
    void set(const std::string& name, Rational value);

    [[nodiscard]] const Rational& tau() const { return get(std::string(kTau)); }
    [[nodiscard]] const std::map<std::string, Rational>& values() const { return values_; }

    /// Binds every listed variable that is still unbound to 0.
    [[nodiscard]] State completed(const std::set<std::string>& vars) const;

    friend bool operator==(const State& a, const State& b) { return a.values_ == b.values_; }
    friend bool operator<(const State& a, const State& b) { return a.values_ < b.values_; }

    /// {x=3/2, c=1, tau=0}
    [[nodiscard]] std::string str() const;

  private:
    std::map<std::string, Rational> values_;
};

[[nodiscard]] Rational eval_arith(const Arith& e, const State& s);
[[nodiscard]] bool eval_bool(const Bool& b, const State& s);

} // namespace covar
