#include "pialg/cyclo.hpp"

#include <map>
#include <sstream>

#include "pialg/error.hpp"

namespace pialg {

namespace {

using QPoly = std::vector<Rational>;  // coefficients ascending; no trailing zeros

void trim(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

QPoly sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Euclidean division; divisor must be nonzero.
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    QPoly q;
    const Rational lead = b.back();
    while (a.size() >= b.size()) {
        Rational c = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        if (q.size() < shift + 1) q.resize(shift + 1, Rational(0));
        q[shift] += c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        trim(a);
        if (a.empty()) break;
    }
    trim(q);
    return {q, a};
}

const QPoly& cyclotomic_cached(unsigned k) {
    static std::map<unsigned, QPoly> cache;
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    // t^k - 1 divided by the cyclotomic polynomials of the proper divisors.
    QPoly num(k + 1, Rational(0));
    num[0] = Rational(-1);
    num[k] = Rational(1);
    QPoly den{Rational(1)};
    for (unsigned d = 1; d < k; ++d)
        if (k % d == 0) den = mul(den, cyclotomic_cached(d));
    auto [q, r] = divmod(num, den);
    if (!r.empty()) throw error("cyclotomic division left a remainder");
    return cache.emplace(k, std::move(q)).first->second;
}

// Extended Euclid in Q[t]: returns (g, u) with u*a = g (mod m), g the monic gcd.
std::pair<QPoly, QPoly> half_xgcd(QPoly a, QPoly m) {
    QPoly u{Rational(1)}, v;  // invariants: u*a0 = a (mod m0), v*a0 = m (mod m0)
    while (!m.empty()) {
        auto [q, r] = divmod(a, m);
        QPoly u2 = sub(u, mul(q, v));
        a = std::move(m);
        m = std::move(r);
        u = std::move(v);
        v = std::move(u2);
    }
    // normalize gcd monic
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
    for (auto& c : u) c /= lead;
    return {a, u};
}

}  // namespace

std::vector<Rational> cyclotomic_polynomial(unsigned k) {
    if (k == 0) throw error("cyclotomic polynomial needs k >= 1");
    return cyclotomic_cached(k);
}

Scalar Scalar::zeta(unsigned k) {
    if (k == 0) throw error("conductor must be positive");
    if (k == 1) return Scalar(Rational(1));
    if (k == 2) return Scalar(Rational(-1));
    std::size_t deg = cyclotomic_cached(k).size() - 1;
    std::vector<Rational> c(deg, Rational(0));
    c[1] = Rational(1);
    return Scalar(k, std::move(c));
}

void Scalar::normalize() {
    if (k_ <= 2) {
        // Phi_1 = t-1, Phi_2 = t+1: both fields are Q itself.
        k_ = 1;
        if (c_.empty()) c_.assign(1, Rational(0));
        return;
    }
    std::size_t deg = cyclotomic_cached(k_).size() - 1;
    c_.resize(deg, Rational(0));
}

bool Scalar::is_zero() const {
    for (const auto& c : c_)
        if (!c.is_zero()) return false;
    return true;
}

bool Scalar::is_one() const {
    if (!c_[0].is_one()) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return false;
    return true;
}

const Rational& Scalar::rat() const {
    if (k_ != 1) throw error("scalar is not rational: " + str());
    return c_[0];
}

namespace {
// Conductor join: equal conductors, or lift Q into Q(zeta_k).
unsigned join_conductor(unsigned a, unsigned b) {
    if (a == b) return a;
    if (a == 1) return b;
    if (b == 1) return a;
    throw conductor_mismatch(a, b);
}
}  // namespace

Scalar Scalar::operator-() const {
    Scalar r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    k_ = join_conductor(k_, o.k_);
    normalize();
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    k_ = join_conductor(k_, o.k_);
    normalize();
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    unsigned k = join_conductor(k_, o.k_);
    QPoly prod = mul(c_, o.c_);
    if (k > 1 && !prod.empty()) prod = divmod(std::move(prod), cyclotomic_cached(k)).second;
    k_ = k;
    c_ = std::move(prod);
    normalize();
    if (c_.empty()) c_.assign(k == 1 ? 1 : cyclotomic_cached(k).size() - 1, Rational(0));
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw error("division by zero");
    if (k_ == 1) return Scalar(c_[0].inverse());
    QPoly a = c_;
    trim(a);
    auto [g, u] = half_xgcd(a, cyclotomic_cached(k_));
    if (g.size() != 1) throw error("scalar not invertible modulo Phi_k");
    // u*a = g = 1 after monic normalization (Phi_k irreducible over Q)
    return Scalar(k_, std::move(u));
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar base = *this, acc = Scalar(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.k_ != b.k_) {
        // a rational may equal a coincidentally-rational residue only via
        // normalization, which already folded k<=2; distinct k with equal
        // values happens only for lifted rationals.
        if (a.k_ != 1 && b.k_ != 1) return false;
        const Scalar& cyc = a.k_ == 1 ? b : a;
        const Scalar& rat = a.k_ == 1 ? a : b;
        if (!rat.c_[0].is_zero() && cyc.c_[0] != rat.c_[0]) return false;
        for (std::size_t i = 0; i < cyc.c_.size(); ++i)
            if (cyc.c_[i] != (i == 0 ? rat.c_[0] : Rational(0))) return false;
        return true;
    }
    return a.c_ == b.c_;
}

std::string Scalar::str() const {
    if (k_ == 1) return c_[0].str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        Rational a = c_[i];
        if (first) {
            if (a.sign() < 0) { os << "-"; a = -a; }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0) a = -a;
        }
        if (i == 0) {
            os << a.str();
        } else {
            if (!a.is_one()) os << a.str() << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    os << " [zeta_" << k_ << "]";
    return os.str();
}

}  // namespace pialg
