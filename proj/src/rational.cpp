#include "pialg/rational.hpp"

#include <cctype>
#include <ostream>

#include "pialg/error.hpp"

namespace pialg {

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw error("rational with zero denominator");
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw error("division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::inverse() const {
    if (is_zero()) throw error("division by zero");
    return Rational(mpq_class(1) / v_);
}

Rational Rational::parse(const std::string& text) {
    std::size_t i = 0;
    auto digits = [&](const char* what) {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw parse_error(std::string("expected ") + what, start);
        return text.substr(start, i - start);
    };
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    mpz_class num(digits("integer"), 10);
    mpz_class den(1);
    if (i < text.size() && text[i] == '/') {
        ++i;
        den = mpz_class(digits("denominator"), 10);
        if (den == 0) throw parse_error("zero denominator", i - 1);
    }
    if (i != text.size()) throw parse_error("trailing characters in rational", i);
    if (neg) num = -num;
    return Rational(mpq_class(num, den));
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace pialg
