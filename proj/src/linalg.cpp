#include "pialg/linalg.hpp"

#include <algorithm>

#include "pialg/error.hpp"

namespace pialg {

void RowSpace::reduce(ScalarVec& r) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Scalar& c = r[pivots_[i]];
        if (c.is_zero()) continue;
        const ScalarVec& row = rows_[i];
        Scalar f = c;  // pivot of row is 1
        for (int j = pivots_[i]; j < cols_; ++j)
            if (!row[j].is_zero()) r[j] -= f * row[j];
    }
}

bool RowSpace::insert(ScalarVec r) {
    if (static_cast<int>(r.size()) != cols_) throw error("row width mismatch");
    reduce(r);
    int pivot = -1;
    for (int j = 0; j < cols_; ++j)
        if (!r[j].is_zero()) { pivot = j; break; }
    if (pivot < 0) return false;
    Scalar inv = r[pivot].inverse();
    for (int j = pivot; j < cols_; ++j)
        if (!r[j].is_zero()) r[j] = r[j] * inv;
    // Back-substitute into existing rows so the basis stays fully reduced.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Scalar c = rows_[i][pivot];
        if (c.is_zero()) continue;
        for (int j = pivot; j < cols_; ++j)
            if (!r[j].is_zero()) rows_[i][j] -= c * r[j];
    }
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, pivot);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
}

bool RowSpace::contains(ScalarVec r) const {
    reduce(r);
    for (const auto& c : r)
        if (!c.is_zero()) return false;
    return true;
}

bool RowSpace::contains_all(const std::vector<ScalarVec>& rs) const {
    for (const auto& r : rs)
        if (!contains(r)) return false;
    return true;
}

std::vector<ScalarVec> RowSpace::nullspace() const {
    std::vector<bool> is_pivot(cols_, false);
    for (int p : pivots_) is_pivot[p] = true;
    std::vector<ScalarVec> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        ScalarVec v(cols_, Scalar(0));
        v[f] = Scalar(1);
        for (std::size_t i = 0; i < rows_.size(); ++i) v[pivots_[i]] = -rows_[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

RowSpace row_space(int cols, const std::vector<ScalarVec>& vectors) {
    RowSpace rs(cols);
    for (const auto& v : vectors) rs.insert(v);
    return rs;
}

}  // namespace pialg
