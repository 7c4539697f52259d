#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace harmonic {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact fraction in canonical form. There is deliberately no constructor
// taking a double.
class Rational {
public:
    Rational() = default;
    Rational(int v) : v_(v) {}
    Rational(long v) : v_(v) {}
    Rational(long long v) : v_(static_cast<long>(v)) {}
    Rational(long num, long den);
    explicit Rational(const mpz_class& z) : v_(z) {}
    explicit Rational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }
    Rational(double) = delete;
    Rational(float) = delete;

    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    mpz_class floor() const;
    mpz_class ceil() const;
    long floor_long() const;
    long ceil_long() const;
    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    // "p/q" (or "p" when the denominator is 1).
    std::string str() const;
    // Fixed-point rendering, rounded half away from zero at `digits` places.
    std::string decimal(int digits = 6) const;
    // For reporting only; never fed back into exact paths.
    double approx() const { return v_.get_d(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class v_;
};

std::string format_both(const Rational& r);  // "p/q (0.123456)"

inline Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace harmonic
