#include "harmonic/rational.hpp"

#include <cctype>

namespace harmonic {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string_view body = text;
    bool neg = false;
    if (!body.empty() && body.front() == '-') {
        neg = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view n = body.substr(0, slash);
    std::string_view d = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class zn{std::string(n)}, zd{std::string(d)};
    if (zd == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    if (neg) zn = -zn;
    mpq_class q(zn, zd);
    q.canonicalize();
    return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
}

mpz_class Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
}

long Rational::floor_long() const {
    mpz_class f = floor();
    if (!f.fits_slong_p()) throw std::overflow_error("floor out of range");
    return f.get_si();
}

long Rational::ceil_long() const {
    mpz_class f = ceil();
    if (!f.fits_slong_p()) throw std::overflow_error("ceil out of range");
    return f.get_si();
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    // round half away from zero
    mpq_class scaled = ::abs(v_) * scale + mpq_class(1, 2);
    mpz_class n;
    mpz_fdiv_q(n.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    std::string s = n.get_str();
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<size_t>(digits + 1 - s.size()), '0');
        s.insert(s.size() - static_cast<size_t>(digits), ".");
    }
    if (sgn(v_) < 0 && n != 0) s.insert(0, "-");
    return s;
}

std::string format_both(const Rational& r) { return r.str() + " (" + r.decimal(6) + ")"; }

}  // namespace harmonic
