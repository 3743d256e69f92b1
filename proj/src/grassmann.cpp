#include "pialg/grassmann.hpp"

#include <sstream>

#include "pialg/error.hpp"

namespace pialg {

GrassmannElement::GrassmannElement(int n) : n_(n) {
    if (n < 0 || n > kMaxGenerators)
        throw error("generator count out of range [0," + std::to_string(kMaxGenerators) + "]");
}

GrassmannElement GrassmannElement::unit(int n) { return blade_term(n, 0, Scalar(1)); }

GrassmannElement GrassmannElement::generator(int n, int i) {
    if (i < 1 || i > n) throw error("generator index out of range");
    return blade_term(n, Blade(1) << (i - 1), Scalar(1));
}

GrassmannElement GrassmannElement::blade_term(int n, Blade b, const Scalar& c) {
    GrassmannElement e(n);
    e.add_term(b, c);
    return e;
}

Scalar GrassmannElement::coeff(Blade b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void GrassmannElement::add_term(Blade b, const Scalar& c) {
    if (b >= (Blade(1) << n_)) throw error("blade support exceeds generator count");
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(b, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GrassmannElement GrassmannElement::operator-() const {
    GrassmannElement r(n_);
    for (const auto& [b, c] : terms_) r.terms_.emplace(b, -c);
    return r;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
    if (n_ != o.n_) throw error("generator-count mismatch");
    for (const auto& [b, c] : o.terms_) add_term(b, c);
    return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
    if (n_ != o.n_) throw error("generator-count mismatch");
    for (const auto& [b, c] : o.terms_) add_term(b, -c);
    return *this;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    if (a.n_ != b.n_) throw error("generator-count mismatch");
    GrassmannElement r(a.n_);
    for (const auto& [ba, ca] : a.terms_)
        for (const auto& [bb, cb] : b.terms_) {
            BladeProduct p = blade_product(ba, bb);
            if (p.sign == 0) continue;
            r.add_term(p.blade, p.sign < 0 ? -(ca * cb) : ca * cb);
        }
    return r;
}

GrassmannElement operator*(const Scalar& c, const GrassmannElement& a) {
    GrassmannElement r(a.n_);
    for (const auto& [b, cb] : a.terms_) r.add_term(b, c * cb);
    return r;
}

std::pair<GrassmannElement, GrassmannElement> GrassmannElement::graded_components() const {
    GrassmannElement even(n_), odd(n_);
    for (const auto& [b, c] : terms_) (blade_even(b) ? even : odd).terms_.emplace(b, c);
    return {even, odd};
}

bool GrassmannElement::is_central() const {
    for (const auto& [b, c] : terms_)
        if (!blade_even(b)) return false;
    return true;
}

std::string blade_str(Blade b) {
    if (b == 0) return "1";
    std::ostringstream os;
    for (int i = 0; i < kMaxGenerators; ++i)
        if (b & (Blade(1) << i)) os << "e" << (i + 1);
    return os.str();
}

std::string GrassmannElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
        bool neg = c.is_rational() && c.rat().sign() < 0;
        Scalar mag = neg ? -c : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (!mag.is_rational()) os << "(" << mag.str() << ")*";
        else if (!mag.is_one() || b == 0) {
            os << mag.rat().str();
            if (b != 0) os << "*";
        }
        if (b != 0) os << blade_str(b);
    }
    return os.str();
}

}  // namespace pialg
