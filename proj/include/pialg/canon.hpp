#pragma once

#include <map>
#include <string>
#include <vector>

#include "pialg/error.hpp"
#include "pialg/freealg.hpp"
#include "pialg/grassmann.hpp"

namespace pialg {

// Canonical form of a multilinear polynomial of degree m modulo the T-ideal
// of [x1,x2,x3]: a combination of basis elements
//   x_{i_1}...x_{i_{m-2p}} [x_{j_1},x_{j_2}]...[x_{j_{2p-1}},x_{j_{2p}}]
// indexed by the even-sized increasing subset J = {j_1 < ... < j_{2p}} of
// {1..m} (the prefix I is the increasing complement). 2^{m-1} basis elements.
struct CanonicalForm {
    // (size, lex) order puts the minimal-p, lex-least J first.
    struct JLess {
        bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
            if (a.size() != b.size()) return a.size() < b.size();
            return a < b;
        }
    };

    int m = 0;
    std::map<std::vector<int>, Scalar, JLess> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    // The polynomial the form denotes (prefix times commutator chain).
    Poly expand() const;
    std::string str() const;
};

// The commutator-chain basis polynomial for a given degree and J.
Poly canonical_basis_poly(int m, const std::vector<int>& J);

// Which descent the prefix-sorting rule fires on first; the two orders must
// produce identical coefficient maps (checked by the confluence tests).
enum class RewriteOrder { LeftmostDescent, RightmostDescent };

// Rewrites a multilinear f into the canonical basis using
//   (R1) commutators are central,
//   (R2) [u,v] = -[v,u],
//   (R3) [u,v][w,z] = -[u,w][v,z],
//   (R4) x_a x_b = x_b x_a + [x_a,x_b].
// Throws if f is not multilinear in x_1..x_m.
CanonicalForm canonical_form(const Poly& f, RewriteOrder order = RewriteOrder::LeftmostDescent);

// f (multilinear) is an identity of the infinite Grassmann algebra iff its
// canonical form vanishes.
bool identity_of_e(const Poly& f);

// Substitution witnessing a nonzero central value of f in E: prefix
// variables receive disjoint generator pairs e_a e_b, commutator variables
// single generators, chosen at the minimal p with a nonzero coefficient
// (ties broken by lexicographically least J).
struct Witness {
    std::map<int, GrassmannElement> substitution;
    GrassmannElement value;
    std::vector<int> chosen_j;
    int generators = 0;
};

class zero_canonical_form : public error {
  public:
    zero_canonical_form() : error("polynomial is an identity of E: canonical form is zero") {}
};

Witness grassmann_witness(const Poly& f);

// Evaluates f over Grassmann elements (all over n generators).
GrassmannElement evaluate_grassmann(const Poly& f, const std::map<int, GrassmannElement>& s,
                                    int n);

}  // namespace pialg
