#pragma once

#include <string>
#include <vector>

#include "pialg/rational.hpp"

namespace pialg {

// k-th cyclotomic polynomial Phi_k, coefficients ascending in degree.
// Computed by dividing t^k - 1 by Phi_d for the proper divisors d of k.
std::vector<Rational> cyclotomic_polynomial(unsigned k);

// Element of Q or of a cyclotomic field Q(zeta_k), stored as a residue in
// Q[t]/Phi_k(t). Every scalar carries its conductor; arithmetic between two
// distinct nontrivial conductors throws conductor_mismatch (rationals lift
// into any Q(zeta_k)). Conductors 1 and 2 normalize to plain rationals.
class Scalar {
  public:
    Scalar() : k_(1), c_{Rational(0)} {}
    Scalar(long n) : k_(1), c_{Rational(n)} {}
    Scalar(Rational r) : k_(1), c_{std::move(r)} {}

    // The residue of t in Q[t]/Phi_k: a primitive k-th root of unity.
    static Scalar zeta(unsigned k);

    unsigned conductor() const { return k_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const { return k_ == 1; }
    // The rational value; throws if the scalar is irrational.
    const Rational& rat() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const;
    Scalar pow(long e) const;

    // Rationals print as "p/q"; otherwise a polynomial in z = zeta_k,
    // e.g. "1/2 - z^2 [zeta_5]".
    std::string str() const;

  private:
    Scalar(unsigned k, std::vector<Rational> c) : k_(k), c_(std::move(c)) { normalize(); }
    void normalize();

    unsigned k_;
    std::vector<Rational> c_;
};

// The residue of t in Q[t]/Phi_k: its k-th power is 1 and no smaller
// positive power is.
inline Scalar primitive_root(unsigned k) { return Scalar::zeta(k); }

}  // namespace pialg
