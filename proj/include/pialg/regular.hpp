#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"

namespace pialg {

// Component indices of a homogeneous sequence, 0-based into the components
// of a decomposition.
using DegreeSequence = std::vector<int>;

// Vector-space decomposition A = A_1 + ... + A_r together with the matrix of
// commutation relations theta: for homogeneous x in A_i, y in A_j,
// x y = theta[i][j] * y x. theta[i][j] * theta[j][i] = 1 on every pair that
// admits a nonzero product; entries no product determines default to 1 and
// are listed in `undetermined`.
struct RegularDecomposition {
    std::string name;
    AlgebraPtr algebra;
    std::vector<std::vector<Element>> components;
    std::vector<std::vector<Scalar>> theta;
    std::vector<std::pair<int, int>> undetermined;

    int component_count() const { return static_cast<int>(components.size()); }
};

// Outcome of inferring theta from the components.
struct P2Result {
    bool ok = false;
    std::vector<std::vector<Scalar>> theta;  // valid iff ok
    std::vector<std::pair<int, int>> undetermined;
    // violation data, valid iff !ok
    int i = -1, j = -1;
    std::optional<Element> x, y;
    std::string message;
};

// Checks that the components span the algebra (throws otherwise), then for
// each pair (i,j) finds a basis pair with y x != 0, fixes theta[i][j], and
// verifies x y = theta[i][j] y x across all basis pairs of (A_i, A_j).
P2Result verify_p2(const AlgebraPtr& algebra, const std::vector<std::vector<Element>>& components);

// Result of the P1 search: a witness tuple with nonzero product, or
// Inconclusive after exhausting the basis tuples of the requested sequence.
struct P1Result {
    bool found = false;
    std::vector<Element> witness;
    std::optional<Element> product;
};

// Backtracking over component basis vectors (partial products pruned at
// zero), in deterministic basis order.
P1Result verify_p1(const RegularDecomposition& d, const DegreeSequence& seq);

// Builtin decompositions:
//   grassmann(n): E(n) = E_0 + E_1, theta = [[1,1],[1,-1]]
//   matk(k):      Mat(k; zeta_k) = sum of F * Xa^i Xb^j over (i,j) in
//                 {0..k-1}^2 row-major, Xa = diag(zeta^{k-1},...,1),
//                 Xb the cyclic shift; theta inferred by verify_p2
//   m11e(n):      MpqE(1,1,n) = E_0 I + E_0 Xa + E_1 Xb + E_1 XaXb with the
//                 4x4 sign matrix [[1,1,1,1],[1,1,-1,-1],[1,-1,-1,1],[1,-1,1,-1]]
//   tensor(D1,D2): see tensor_decomposition
RegularDecomposition builtin_decomposition(const std::string& name);

// epsilon_sigma = product over inversions k < l, sigma(k) > sigma(l) of
// theta[deg[sigma(k)]][deg[sigma(l)]]; satisfies
// a_{sigma(1)}...a_{sigma(n)} = epsilon_sigma * a_1...a_n for homogeneous a.
// sigma is 0-based (sigma[k] = image of position k).
Scalar epsilon_sigma(const std::vector<std::vector<Scalar>>& theta, const DegreeSequence& degrees,
                     const std::vector<int>& sigma);

// The transform f |-> f_a: each term alpha * x_{sigma(1)}...x_{sigma(n)} of a
// multilinear f in x_1..x_n is scaled by epsilon_sigma for the given degrees.
Poly transform_f_a(const Poly& f, const std::vector<std::vector<Scalar>>& theta,
                   const DegreeSequence& degrees);

// Components A_i (x) B_k in row-major order over tensor(A,B); theta is the
// Kronecker product of the factor matrices.
RegularDecomposition tensor_decomposition(const RegularDecomposition& da,
                                          const RegularDecomposition& db);

}  // namespace pialg
