#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "pialg/cyclo.hpp"

namespace pialg {

// Basis monomial e_{i1}...e_{ik} of the Grassmann algebra, i1 < ... < ik,
// encoded as a bitmask (bit i-1 set iff e_i present). Empty mask is the unit.
using Blade = std::uint32_t;

// Bitmask bound; E(n) truncations with n <= kMaxGenerators.
inline constexpr int kMaxGenerators = 24;

inline int blade_weight(Blade b) { return __builtin_popcount(b); }
inline bool blade_even(Blade b) { return (blade_weight(b) & 1) == 0; }

struct BladeProduct {
    int sign;     // +1 or -1; 0 means the product is zero
    Blade blade;  // union support when sign != 0
};

// e_i e_j = -e_j e_i: the product of two blades vanishes iff the supports
// meet, otherwise it is the union blade times (-1)^{#{(s,t) in S x T : s > t}}.
inline BladeProduct blade_product(Blade a, Blade b) {
    if (a & b) return {0, 0};
    int inversions = 0;
    for (Blade m = a; m != 0;) {
        Blade low = m & (~m + 1);
        inversions += __builtin_popcount(b & (low - 1));
        m ^= low;
    }
    return {(inversions & 1) ? -1 : +1, a | b};
}

// Element of the truncated Grassmann algebra E(n): scalar combination of
// blades with support inside {1,...,n}. Immutable values, pure operations.
class GrassmannElement {
  public:
    GrassmannElement() : n_(0) {}
    explicit GrassmannElement(int n);

    static GrassmannElement unit(int n);
    static GrassmannElement generator(int n, int i);
    static GrassmannElement blade_term(int n, Blade b, const Scalar& c);

    int generators() const { return n_; }
    const std::map<Blade, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Scalar coeff(Blade b) const;

    void add_term(Blade b, const Scalar& c);

    GrassmannElement operator-() const;
    GrassmannElement& operator+=(const GrassmannElement& o);
    GrassmannElement& operator-=(const GrassmannElement& o);
    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
    friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
    friend GrassmannElement operator*(const Scalar& c, const GrassmannElement& a);

    friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    // Split by parity of the blade weight; even + odd == *this.
    std::pair<GrassmannElement, GrassmannElement> graded_components() const;

    // Z(E) = E_0: central iff the odd component vanishes.
    bool is_central() const;

    // "e1e2 + 2*e3"; the unit blade prints as "1".
    std::string str() const;

  private:
    int n_;
    std::map<Blade, Scalar> terms_;
};

inline GrassmannElement commutator(const GrassmannElement& a, const GrassmannElement& b) {
    return a * b - b * a;
}

std::string blade_str(Blade b);

}  // namespace pialg
