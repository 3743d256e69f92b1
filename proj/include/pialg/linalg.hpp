#pragma once

#include <vector>

#include "pialg/cyclo.hpp"

namespace pialg {

using ScalarVec = std::vector<Scalar>;

// Reduced row-echelon span over Q or Q(zeta_k), maintained incrementally.
// The RREF basis of a span is unique, so the state is independent of the
// order rows were inserted in - scans may feed constraints in any order
// and still produce deterministic results.
class RowSpace {
  public:
    explicit RowSpace(int cols) : cols_(cols) {}

    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<ScalarVec>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // Eliminates the pivots of the current basis from r in place.
    void reduce(ScalarVec& r) const;

    // Returns true (and grows the span) iff r was independent.
    bool insert(ScalarVec r);

    bool contains(ScalarVec r) const;
    bool contains_all(const std::vector<ScalarVec>& rs) const;

    // Canonical basis of {x : row * x = 0 for every row}, one vector per
    // free column, in ascending free-column order.
    std::vector<ScalarVec> nullspace() const;

  private:
    int cols_;
    std::vector<ScalarVec> rows_;  // sorted by pivot column, pivot = 1, fully reduced
    std::vector<int> pivots_;
};

// RREF basis of the span of the given vectors.
RowSpace row_space(int cols, const std::vector<ScalarVec>& vectors);

}  // namespace pialg
