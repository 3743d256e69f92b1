#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pialg/freealg.hpp"
#include "pialg/grassmann.hpp"
#include "pialg/linalg.hpp"

namespace pialg {

class Algebra;
class Element;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// Product of two basis elements. Every supported construction is monomial:
// b_i * b_j is zero or (sign) * b_k.
struct MonoProd {
    int sign;   // +1 / -1; 0 means zero product
    int index;  // valid iff sign != 0
};

using SparseVec = std::map<int, Scalar>;

// Sparse echelonized basis of a subspace, for exact membership tests.
struct SparseEchelon {
    std::vector<std::pair<int, SparseVec>> rows;  // (pivot, row with row[pivot]=1), pivot ascending

    // Eliminates the span from v in place; returns true iff v reduced to zero.
    bool reduce(SparseVec& v) const;
    int rank() const { return static_cast<int>(rows.size()); }
};

SparseEchelon sparse_echelon(const std::vector<SparseVec>& vectors);

inline constexpr int kDefaultDimCap = 4096;

// Finite-dimensional associative algebra with a labeled basis and monomial
// structure constants: the truncated Grassmann algebra E(n), matrix algebras
// Mat(k) over Q or Q(zeta_k), the subalgebras MpqE(p,q,n) of M_{p+q}(E(n)),
// and tensor products of any of these. Immutable and shareable once built.
class Algebra : public std::enable_shared_from_this<Algebra> {
  public:
    enum class Kind { Grassmann, Matrix, Mpq, Tensor };

    // Descriptor grammar:
    //   "E(n)" | "Mat(k)" | "Mat(k;zeta)" | "MatE(k,n)" | "MpqE(p,q,n)" | "T(desc,desc)"
    static AlgebraPtr build(const std::string& descriptor, int dim_cap = kDefaultDimCap);

    static AlgebraPtr grassmann(int n, int dim_cap = kDefaultDimCap);
    static AlgebraPtr matrix(int k, bool cyclotomic, int dim_cap = kDefaultDimCap);
    static AlgebraPtr mpq(int p, int q, int n, int dim_cap = kDefaultDimCap);
    static AlgebraPtr tensor(const AlgebraPtr& a, const AlgebraPtr& b,
                             int dim_cap = kDefaultDimCap);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::string& descriptor() const { return descriptor_; }
    unsigned conductor() const { return conductor_; }
    std::string label(int i) const;

    MonoProd basis_product(int i, int j) const;

    Element unit_element() const;
    Element basis_element(int i) const;
    Element zero_element() const;

    // Exact basis of {z : z b = b z for all basis b}, echelonized sparsely.
    // Computed on first use; every vector recheck-verified to commute with
    // the whole basis.
    const SparseEchelon& center() const;
    int center_dim() const { return center().rank(); }

    // Z_2 parity tag where the construction carries one (blade weight for
    // E(n), block parity for MpqE, XOR for tensors of tagged factors).
    std::optional<int> grading(int i) const;

    // Kind-specific data used by the evaluation engines.
    int grass_n() const { return n_; }
    int mat_k() const { return k_; }
    const AlgebraPtr& tensor_a() const { return fa_; }
    const AlgebraPtr& tensor_b() const { return fb_; }
    int mpq_p() const { return p_; }
    int mpq_q() const { return q_; }
    // Mpq basis entry: matrix unit (row, col) 0-based and blade.
    struct MpqBasis { int row, col; Blade blade; };
    const std::vector<MpqBasis>& mpq_basis() const { return mpq_basis_; }

  private:
    Algebra() = default;
    void finish(int dim_cap);
    void check_axioms() const;
    std::vector<SparseVec> compute_center() const;

    Kind kind_ = Kind::Grassmann;
    std::string descriptor_;
    int dim_ = 0;
    unsigned conductor_ = 1;
    int n_ = 0, k_ = 0, p_ = 0, q_ = 0;
    bool cyclo_ = false;
    AlgebraPtr fa_, fb_;
    std::vector<MpqBasis> mpq_basis_;
    std::vector<int> mpq_lookup_;  // (unit index)*2^n + blade -> basis index or -1
    SparseVec unit_;

    mutable std::mutex center_mutex_;
    mutable std::unique_ptr<SparseEchelon> center_;
};

// Element of an Algebra: sparse coordinates over the basis.
class Element {
  public:
    explicit Element(AlgebraPtr a) : a_(std::move(a)) {}
    Element(AlgebraPtr a, SparseVec coords);

    const AlgebraPtr& algebra() const { return a_; }
    const SparseVec& coords() const { return coords_; }
    bool is_zero() const { return coords_.empty(); }
    Scalar coord(int i) const;
    void add_term(int i, const Scalar& c);

    Element operator-() const;
    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(const Element& a, const Element& b);
    friend Element operator*(const Scalar& c, const Element& a);
    friend bool operator==(const Element& a, const Element& b);
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    bool is_central() const;
    std::string str() const;

  private:
    void require_same(const Element& o) const;
    AlgebraPtr a_;
    SparseVec coords_;
};

inline Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

// Variable index -> value; must cover the variables of the polynomial.
using Assignment = std::map<int, Element>;

// Exact evaluation of f with words mapped to products of assigned elements.
Element evaluate(const Poly& f, const Assignment& s);

// Generic center computation as an exact nullspace of the commutation
// constraints. Used directly for matrix and MpqE algebras and as a
// cross-check oracle for the structural paths.
std::vector<SparseVec> center_by_nullspace(const Algebra& a);

}  // namespace pialg
