#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pialg/cyclo.hpp"

namespace pialg {

// Monomial of the free associative algebra: a finite sequence of variable
// indices (x_i stored as i >= 1). The empty sequence is the unit monomial.
// There is no other normalization; letters do not commute.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

    int degree() const { return static_cast<int>(letters.size()); }
    int degree_in(int var) const;
    Word operator*(const Word& o) const;

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    // Length-then-lexicographic; fixes the term order of every printed poly.
    friend bool operator<(const Word& a, const Word& b) {
        if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
        return a.letters < b.letters;
    }
};

// Exponent vector of a monomial: variable index -> positive degree.
using MultiDegree = std::map<int, int>;

MultiDegree multidegree(const Word& w);

// Element of F<X>: finitely supported map Word -> Scalar, no zero
// coefficients stored. Immutable in spirit; all operations return copies.
class Poly {
  public:
    Poly() = default;

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(Scalar(1)); }
    static Poly constant(const Scalar& c);
    static Poly variable(int i);
    static Poly monomial(const Scalar& c, Word w);

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Word, Scalar>& terms() const { return terms_; }
    Scalar coeff(const Word& w) const;

    int degree() const;
    int degree_in(int var) const;
    std::set<int> variables() const;
    // Common conductor of the coefficients (1 for the zero polynomial).
    unsigned conductor() const;

    void add_term(const Word& w, const Scalar& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Scalar& c, const Poly& p);

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  private:
    std::map<Word, Scalar> terms_;
};

inline Poly commutator(const Poly& a, const Poly& b) { return a * b - b * a; }

// Grammar (whitespace insignificant):
//   poly   := ["-"] term (("+"|"-") term)* ;
//   term   := [rational "*"] factor ("*" factor)* | rational ;
//   factor := var | "[" poly ("," poly)+ "]" | "(" poly ")" ;
//   var    := "x" digits ;
//   rational := digits ["/" digits] ;
// Brackets are left-normed commutators: [a,b,c] = [[a,b],c].
Poly parse_poly(const std::string& text);

// Deterministic: words in length-then-lex order; parse_poly(format_poly(f)) == f
// for rational coefficients. Cyclotomic coefficients print parenthesized and
// are not re-parseable (they never come from CLI input).
std::string format_poly(const Poly& f);

// Partition of the terms of f by multidegree; the components sum to f.
std::vector<std::pair<MultiDegree, Poly>> multihomogeneous_components(const Poly& f);

struct MultilinearCheck {
    bool multilinear = false;
    std::vector<int> vars;  // ascending; meaningful when multilinear
};

// True iff every word uses one common variable set, each variable exactly once.
MultilinearCheck is_multilinear(const Poly& f);

// Full multilinearization of a multihomogeneous polynomial: each variable of
// degree d is replaced by a sum of d fresh variables (allocated consecutively
// from fresh_start, in ascending order of the original variables) and the
// component multilinear in every fresh variable is extracted. Collapsing the
// fresh variables back recovers (prod_i d_i!) * f.
Poly multilinearize(const Poly& f, int fresh_start);

// f * g with the variable sets checked disjoint.
Poly disjoint_product(const Poly& f, const Poly& g);

}  // namespace pialg
