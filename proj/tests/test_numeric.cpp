#include <catch_amalgamated.hpp>

#include "covar/numeric.hpp"
#include "support.hpp"

using namespace covar;
using covar::testing::q;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-3") == -3);
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("0.5") == parse_rational("1/2"));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK_THROWS_AS(parse_rational(""), DomainError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), DomainError);
}

TEST_CASE("rationals render as num/den") {
    CHECK(to_string(q("41/9")) == "41/9");
    CHECK(to_string(q("4/2")) == "2");
    CHECK(to_string(q("-1/3")) == "-1/3");
}

TEST_CASE("ExtReal arithmetic") {
    ExtReal inf = ExtReal::infinity();
    ExtReal two(2L);
    CHECK(ExtReal::zero() * inf == ExtReal::zero());
    CHECK(inf * ExtReal::zero() == ExtReal::zero());
    CHECK(two + inf == inf);
    CHECK(two * inf == inf);
    CHECK(two + ExtReal(q("1/2")) == ExtReal(q("5/2")));
    CHECK(two < inf);
    CHECK(inf.str() == "inf");
    CHECK_THROWS_AS(ExtReal(q("-1")), DomainError);
    CHECK_THROWS_AS(inf.finite(), DomainError);
}

TEST_CASE("ExtReal algebra laws on sampled values") {
    std::vector<ExtReal> values{ExtReal::zero(), ExtReal::one(), ExtReal(q("1/3")), ExtReal(q("7/2")),
                                ExtReal::infinity()};
    for (const auto& a : values) {
        for (const auto& b : values) {
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            if (a.is_finite() && b.is_finite()) {
                CHECK((a + b).finite() == a.finite() + b.finite());
                CHECK((a * b).finite() == a.finite() * b.finite());
            }
        }
    }
}

TEST_CASE("divide follows 0/0 = 0") {
    CHECK(divide(ExtReal::zero(), ExtReal::zero()) == ExtReal::zero());
    CHECK(divide(ExtReal(q("41/27")), ExtReal(q("1/3"))) == ExtReal(q("41/9")));
    CHECK(divide(ExtReal::infinity(), ExtReal(q("1/2"))) == ExtReal::infinity());
    CHECK_THROWS_AS(divide(ExtReal::one(), ExtReal::zero()), DomainError);
    CHECK_THROWS_AS(divide(ExtReal::one(), ExtReal::infinity()), DomainError);
}

TEST_CASE("parse_ext_real") {
    CHECK(parse_ext_real("inf").is_infinite());
    CHECK(parse_ext_real("∞").is_infinite());
    CHECK(parse_ext_real("3/4") == ExtReal(q("3/4")));
}

TEST_CASE("SignedExt subtraction and ordering") {
    SignedExt a(q("41/9"));
    SignedExt b(q("25/9"));
    CHECK(a - b == SignedExt(q("16/9")));
    CHECK(b - a == SignedExt(q("-16/9")));
    CHECK(SignedExt::neg_infinity() < b);
    CHECK(SignedExt(ExtReal::infinity()) - a == SignedExt::pos_infinity());
    CHECK(a - SignedExt(ExtReal::infinity()) == SignedExt::neg_infinity());
    CHECK_THROWS_AS(SignedExt::pos_infinity() - SignedExt::pos_infinity(), DomainError);
    CHECK(SignedExt::neg_infinity().str() == "-inf");
    CHECK(SignedExt(q("-1/4")).to_double() == -0.25);
}
