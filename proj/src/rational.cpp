#include "wcg/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "wcg/errors.hpp"

namespace wcg {

namespace {

mpz_class parseInteger(std::string_view text, std::string_view context) {
    if (text.empty())
        throw ParseError(0, "empty integer in rational " + std::string(context));
    try {
        return mpz_class(std::string(text), 10);
    } catch (const std::invalid_argument&) {
        throw ParseError(0, "malformed integer '" + std::string(text) + "' in rational " +
                                std::string(context));
    }
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (sgn(den) == 0) throw DomainError("rational with zero denominator");
    value_ = mpq_class(num) / mpq_class(den);
}

Rational::Rational(mpq_class q) : value_(std::move(q)) {
    value_.canonicalize();
}

Rational Rational::fromString(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(mpq_class(parseInteger(text, text)));
    }
    const mpz_class num = parseInteger(text.substr(0, slash), text);
    const mpz_class den = parseInteger(text.substr(slash + 1), text);
    if (sgn(den) == 0) throw ParseError(0, "zero denominator in rational '" + std::string(text) + "'");
    return Rational(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.isZero()) throw DomainError("division by zero");
    value_ /= o.value_;
    return *this;
}

Rational Rational::pow(unsigned long exponent) const {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), value_.get_num().get_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), value_.get_den().get_mpz_t(), exponent);
    // num/den stays coprime when the base is canonical.
    mpq_class out;
    out.get_num() = num;
    out.get_den() = den;
    return Rational(std::move(out));
}

mpz_class Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num().get_mpz_t(), value_.get_den().get_mpz_t());
    return q;
}

mpz_class Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num().get_mpz_t(), value_.get_den().get_mpz_t());
    return q;
}

std::string Rational::str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }
Rational abs(const Rational& a) { return a.isNegative() ? -a : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace wcg
