#include "covar/numeric.hpp"

#include <cctype>
#include <limits>

namespace covar {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
            return false;
        }
    }
    return true;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw DomainError("malformed rational '" + std::string(text) + "'");
        }
        mpz_class d{std::string(den)};
        if (d == 0) {
            throw DomainError("zero denominator in '" + std::string(text) + "'");
        }
        result = Rational(mpz_class(std::string(num)), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
            throw DomainError("malformed decimal '" + std::string(text) + "'");
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole));
        result = Rational(w * scale + mpz_class(std::string(frac)), scale);
    } else {
        if (!all_digits(body)) {
            throw DomainError("malformed rational '" + std::string(text) + "'");
        }
        result = Rational(mpz_class(std::string(body)));
    }
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

ExtReal::ExtReal(const Rational& q) : value_(q) {
    if (sgn(value_) < 0) {
        throw DomainError("negative value " + to_string(q) + " is not an expectation value");
    }
}

ExtReal ExtReal::infinity() {
    ExtReal e;
    e.infinite_ = true;
    return e;
}

const Rational& ExtReal::finite() const {
    if (infinite_) {
        throw DomainError("value is infinite");
    }
    return value_;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) {
        return ExtReal::infinity();
    }
    return ExtReal(Rational(a.value_ + b.value_));
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    if (a.is_zero() || b.is_zero()) {
        return ExtReal::zero();
    }
    if (a.infinite_ || b.infinite_) {
        return ExtReal::infinity();
    }
    return ExtReal(Rational(a.value_ * b.value_));
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) {
        return a.infinite_ == b.infinite_;
    }
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) {
        return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    return cmp(a.value_, b.value_) <=> 0;
}

std::string ExtReal::str() const { return infinite_ ? "inf" : to_string(value_); }

ExtReal divide(const ExtReal& a, const ExtReal& b) {
    if (b.is_infinite()) {
        throw DomainError("division by infinity");
    }
    if (b.is_zero()) {
        if (a.is_zero()) {
            return ExtReal::zero();
        }
        throw DomainError("division of " + a.str() + " by zero");
    }
    if (a.is_infinite()) {
        return ExtReal::infinity();
    }
    return ExtReal(Rational(a.finite() / b.finite()));
}

ExtReal parse_ext_real(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "∞") {
        return ExtReal::infinity();
    }
    return ExtReal(parse_rational(text));
}

SignedExt::SignedExt(const Rational& q) : value_(q) {}

SignedExt::SignedExt(const ExtReal& e) {
    if (e.is_infinite()) {
        inf_ = 1;
    } else {
        value_ = e.finite();
    }
}

SignedExt SignedExt::pos_infinity() {
    SignedExt s;
    s.inf_ = 1;
    return s;
}

SignedExt SignedExt::neg_infinity() {
    SignedExt s;
    s.inf_ = -1;
    return s;
}

const Rational& SignedExt::finite() const {
    if (inf_ != 0) {
        throw DomainError("value is infinite");
    }
    return value_;
}

SignedExt operator-(const SignedExt& a, const SignedExt& b) {
    if (a.inf_ != 0 && b.inf_ != 0 && a.inf_ == b.inf_) {
        throw DomainError("undefined difference of infinities");
    }
    if (a.inf_ != 0) {
        return a;
    }
    if (b.inf_ != 0) {
        return b.inf_ > 0 ? SignedExt::neg_infinity() : SignedExt::pos_infinity();
    }
    return SignedExt(Rational(a.value_ - b.value_));
}

bool operator==(const SignedExt& a, const SignedExt& b) {
    if (a.inf_ != 0 || b.inf_ != 0) {
        return a.inf_ == b.inf_;
    }
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const SignedExt& a, const SignedExt& b) {
    if (a.inf_ != 0 || b.inf_ != 0) {
        return a.inf_ <=> b.inf_;
    }
    return cmp(a.value_, b.value_) <=> 0;
}

double SignedExt::to_double() const {
    if (inf_ > 0) {
        return std::numeric_limits<double>::infinity();
    }
    if (inf_ < 0) {
        return -std::numeric_limits<double>::infinity();
    }
    return value_.get_d();
}

std::string SignedExt::str() const {
    if (inf_ > 0) {
        return "inf";
    }
    if (inf_ < 0) {
        return "-inf";
    }
    return to_string(value_);
}

} // namespace covar
