#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pialg/algebra.hpp"
#include "pialg/canon.hpp"
#include "pialg/error.hpp"
#include "pialg/freealg.hpp"

namespace pialg {

struct ScanOptions {
    int degree_cap = 4;               // cap on the requested multilinear degree
    long tuple_budget = 1L << 26;     // exhaustive-enumeration guard
    int threads = 1;                  // worker count for tuple scans
};

// Thrown when an exhaustive enumeration would exceed the tuple budget.
class budget_exceeded : public error {
  public:
    budget_exceeded(long needed, long budget)
        : error("scan needs " + std::to_string(needed) + " basis tuples, over the budget of " +
                std::to_string(budget) + " (raise --tuple-budget to force)") {}
};

// Thrown by product-space scans when g is an identity: the primeness
// statements presuppose a proper g.
class g_is_identity : public error {
  public:
    g_is_identity() : error("g is an identity for the algebra; the scan needs a proper g") {}
};

struct IdentityCheck {
    bool identity = false;
    std::optional<Assignment> counterexample;  // first in deterministic order
};

enum class Centrality { Identity, ProperCentral, NonCentral };

struct CentralCheck {
    Centrality cls = Centrality::Identity;
    // ProperCentral: a non-vanishing assignment; NonCentral: an assignment
    // with non-central value.
    std::optional<Assignment> witness;
};

// True iff f vanishes under every substitution from A. Multilinear f is
// scanned over basis tuples (sufficient by multilinearity); otherwise each
// multihomogeneous component is fully multilinearized first.
IdentityCheck is_identity(const Poly& f, const AlgebraPtr& a, const ScanOptions& opts = {});

CentralCheck classify_central(const Poly& f, const AlgebraPtr& a, const ScanOptions& opts = {});

// Literal basis-tuple scans with no structure-aware shortcuts; the oracle
// the faster paths are tested against. f must be multilinear.
IdentityCheck exhaustive_identity_scan(const Poly& f, const AlgebraPtr& a,
                                       const ScanOptions& opts = {});
CentralCheck exhaustive_central_scan(const Poly& f, const AlgebraPtr& a,
                                     const ScanOptions& opts = {});

// Subspace of the multilinear component P_m spanned by `basis` (canonical
// echelon vectors over the m! words in `words`). `constraints` is the exact
// annihilator: a polynomial lies in the space iff every constraint row kills
// its coefficient vector.
struct PolySpace {
    int degree = 0;
    std::vector<int> vars;
    std::vector<Word> words;
    std::vector<ScalarVec> basis;
    RowSpace constraints{0};

    int dim() const { return static_cast<int>(basis.size()); }
    Poly to_poly(const ScalarVec& v) const;
    ScalarVec coeff_vector(const Poly& f) const;
    bool contains(const Poly& f) const;
};

enum class ScanMode { Central, Identity };

// T(A) intersected with P_m: exact nullspace of the evaluation constraints,
// assembled per algebra structure (parity classes for E(n), factor lifting
// for tensor products, exhaustive basis tuples otherwise) and finished by an
// exact verification of every candidate basis vector.
PolySpace identity_space(const AlgebraPtr& a, int m, const ScanOptions& opts = {});

// {f in P_m : every value of f is central}, same pipeline.
PolySpace central_space(const AlgebraPtr& a, int m, const ScanOptions& opts = {});

// {f in P_r : f * g is central (mode Central) or an identity (mode Identity)}.
// g must be multilinear, in variables disjoint from x_1..x_r, and not an
// identity for A.
PolySpace product_central_space(const AlgebraPtr& a, int r, const Poly& g, ScanMode mode,
                                const ScanOptions& opts = {});

struct ScanReport {
    std::string algebra;
    ScanMode mode = ScanMode::Central;
    int r = 0;
    std::string g_text;
    int dim_v = 0;
    int dim_c = 0;
    bool contained = false;
    std::optional<Poly> counterexample;        // f with f*g central but f not
    std::optional<Assignment> counter_witness; // assignment showing f non-central
    std::string truncation_note;
};

// Computes V = product_central_space and C = central_space (identity_space in
// identity mode) and decides V <= C. Every V basis vector was verified by an
// exact full scan of f*g, and a reported counterexample is re-verified to be
// non-central (non-identity) with a concrete witness.
ScanReport primeness_scan(const AlgebraPtr& a, int r, const Poly& g, ScanMode mode,
                          const ScanOptions& opts = {});

struct CompareReport {
    bool equal = false;
    // On mismatch: a multilinear identity of exactly one algebra, with the
    // side it belongs to and a counter-assignment in the other.
    std::optional<Poly> separating;
    std::string identity_of;
    std::string not_identity_of;
    std::optional<Assignment> counterexample;
};

CompareReport compare_identity_spaces(const AlgebraPtr& a, const AlgebraPtr& b, int m,
                                      const ScanOptions& opts = {});

// All m! multilinear words over the given ascending variables, in
// length-then-lex order.
std::vector<Word> multilinear_words(const std::vector<int>& vars);

std::string assignment_str(const Assignment& s);

}  // namespace pialg
