#pragma once

// Exact arithmetic used throughout: big rationals, non-negative extended
// reals (expectation values) and signed extended rationals (covariance
// bounds, which subtract means).

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "covar/error.hpp"

namespace covar {

using Rational = mpq_class;

/// Parses "3", "-3", "3/2", "0.25" or "1e-3"-free decimals into a canonical rational.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);

/// Value of an expectation: a finite rational >= 0 or +infinity.
class ExtReal {
  public:
    ExtReal() = default;
    ExtReal(const Rational& q); // NOLINT(google-explicit-constructor)
    ExtReal(long v) : ExtReal(Rational(v)) {} // NOLINT(google-explicit-constructor)

    static ExtReal infinity();
    static ExtReal zero() { return {}; }
    static ExtReal one() { return ExtReal(1L); }

    [[nodiscard]] bool is_infinite() const { return infinite_; }
    [[nodiscard]] bool is_finite() const { return !infinite_; }
    [[nodiscard]] bool is_zero() const { return !infinite_ && sgn(value_) == 0; }
    /// Throws DomainError when infinite.
    [[nodiscard]] const Rational& finite() const;

    friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
    /// 0 * inf = 0.
    friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
    friend bool operator==(const ExtReal& a, const ExtReal& b);
    friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b);

    [[nodiscard]] std::string str() const;

  private:
    Rational value_{0};
    bool infinite_ = false;
};

/// a / b with the 0/0 = 0 convention. A positive numerator over zero and any
/// division by infinity are never produced by the calculus and raise DomainError.
ExtReal divide(const ExtReal& a, const ExtReal& b);

ExtReal parse_ext_real(std::string_view text);

/// Exact rational with sign, or +/- infinity.
class SignedExt {
  public:
    SignedExt() = default;
    SignedExt(const Rational& q); // NOLINT(google-explicit-constructor)
    SignedExt(const ExtReal& e);  // NOLINT(google-explicit-constructor)

    static SignedExt pos_infinity();
    static SignedExt neg_infinity();

    [[nodiscard]] bool is_finite() const { return inf_ == 0; }
    [[nodiscard]] int infinity_sign() const { return inf_; }
    [[nodiscard]] const Rational& finite() const;

    /// inf - inf raises DomainError.
    friend SignedExt operator-(const SignedExt& a, const SignedExt& b);
    friend bool operator==(const SignedExt& a, const SignedExt& b);
    friend std::strong_ordering operator<=>(const SignedExt& a, const SignedExt& b);

    [[nodiscard]] double to_double() const;
    [[nodiscard]] std::string str() const;

  private:
    Rational value_{0};
    int inf_ = 0;
};

} // namespace covar
