#include "harmonic/rational.hpp"

#include <doctest.h>

#include <random>

using harmonic::Rational;

namespace {

// Random integer with up to `digits` decimal digits, built from a string so
// that values beyond 64 bits are covered.
mpz_class big(std::mt19937_64& rng, int digits, bool allow_zero) {
    std::uniform_int_distribution<int> d(0, 9), len(1, digits), sgn(0, 1);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) s += static_cast<char>('0' + d(rng));
    mpz_class z(s, 10);
    if (!allow_zero && z == 0) z = 1;
    return sgn(rng) ? z : mpz_class(-z);
}

Rational random_rational(std::mt19937_64& rng, int digits) {
    mpq_class q(big(rng, digits, true), abs(big(rng, digits, false)));
    return Rational(q);
}

}  // namespace

TEST_CASE("parse reduces to lowest terms") {
    CHECK(Rational::parse("15816/10000") == Rational(1977, 1250));
    CHECK(Rational::parse("15816/10000").str() == "1977/1250");
    CHECK(Rational::parse("1/2200").str() == "1/2200");
    CHECK(Rational::parse("0/5").str() == "0");
    CHECK(Rational::parse("0/5").den() == 1);
    CHECK(Rational::parse("-6/4") == Rational(-3, 2));
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(Rational::parse("1/0"), harmonic::ParseError);
    CHECK_THROWS_AS(Rational::parse("0.5"), harmonic::ParseError);
    CHECK_THROWS_AS(Rational::parse(""), harmonic::ParseError);
    CHECK_THROWS_AS(Rational::parse("1/2x"), harmonic::ParseError);
}

TEST_CASE("floor rounds toward minus infinity") {
    CHECK(Rational(39, 8).floor_long() == 4);
    CHECK(Rational(-1, 2).floor_long() == -1);
    CHECK((Rational(1, 3) / Rational(1, 7)).floor_long() == 2);
    CHECK(Rational(7).floor_long() == 7);
    CHECK(Rational(-7, 2).ceil_long() == -3);
}

TEST_CASE("comparison") {
    CHECK(Rational(3, 17) < Rational(1, 5));
    CHECK(Rational(1, 3) == Rational(2, 6));
    CHECK(Rational(41783, 100000) > Rational(41, 100));
}

TEST_CASE("decimal rendering rounds to nearest") {
    CHECK(Rational(1, 3).decimal(6) == "0.333333");
    CHECK(Rational(2, 3).decimal(6) == "0.666667");
    CHECK(Rational(-1, 8).decimal(3) == "-0.125");
    CHECK(harmonic::format_both(Rational(1583, 1000)) == "1583/1000 (1.583000)");
}

TEST_CASE("round trip and field axioms on 30-digit operands") {
    std::mt19937_64 rng(20240611);
    for (int k = 0; k < 2000; ++k) {
        Rational a = random_rational(rng, 30), b = random_rational(rng, 30), c = random_rational(rng, 30);
        CHECK(Rational::parse(a.str()) == a);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
        if (!b.is_zero()) CHECK((a / b) * b == a);
        // canonical form
        CHECK(gcd(a.num(), a.den()) == 1);
        CHECK(a.den() > 0);
    }
}

TEST_CASE("ordering agrees with the sign of the difference") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100000; ++k) {
        Rational a = random_rational(rng, 12), b = random_rational(rng, 12);
        int s = (a - b).sign();
        CHECK((a < b) == (s < 0));
        CHECK((a == b) == (s == 0));
    }
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS(Rational(1) / Rational(0));
}
