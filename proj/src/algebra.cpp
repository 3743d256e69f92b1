#include "pialg/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

#include "pialg/error.hpp"

namespace pialg {

// ---------------------------------------------------------------------------
// SparseEchelon

bool SparseEchelon::reduce(SparseVec& v) const {
    for (const auto& [pivot, row] : rows) {
        auto it = v.find(pivot);
        if (it == v.end() || it->second.is_zero()) continue;
        Scalar c = it->second;
        for (const auto& [j, rj] : row) {
            auto vt = v.emplace(j, Scalar(0)).first;
            vt->second -= c * rj;
            if (vt->second.is_zero()) v.erase(vt);
        }
    }
    return v.empty();
}

SparseEchelon sparse_echelon(const std::vector<SparseVec>& vectors) {
    SparseEchelon e;
    for (SparseVec v : vectors) {
        e.reduce(v);
        if (v.empty()) continue;
        auto pivot_it = v.begin();
        Scalar inv = pivot_it->second.inverse();
        SparseVec row;
        for (const auto& [j, c] : v) row[j] = c * inv;
        int pivot = pivot_it->first;
        // keep earlier rows reduced against every pivot
        for (auto& [p0, r0] : e.rows) {
            auto it = r0.find(pivot);
            if (it == r0.end()) continue;
            Scalar c = it->second;
            for (const auto& [j, rj] : row) {
                auto t = r0.emplace(j, Scalar(0)).first;
                t->second -= c * rj;
                if (t->second.is_zero()) r0.erase(t);
            }
        }
        auto pos = std::lower_bound(e.rows.begin(), e.rows.end(), pivot,
                                    [](const auto& r, int p) { return r.first < p; });
        e.rows.insert(pos, {pivot, std::move(row)});
    }
    return e;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::map<std::string, AlgebraPtr>& algebra_cache() {
    static std::map<std::string, AlgebraPtr> cache;
    return cache;
}
std::mutex cache_mutex;

}  // namespace

AlgebraPtr Algebra::grassmann(int n, int dim_cap) {
    if (n < 0 || n > kMaxGenerators) throw error("E(n) needs 0 <= n <= 24");
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->kind_ = Kind::Grassmann;
    a->n_ = n;
    a->dim_ = 1 << n;
    a->descriptor_ = "E(" + std::to_string(n) + ")";
    a->unit_ = {{0, Scalar(1)}};
    a->finish(dim_cap);
    return a;
}

AlgebraPtr Algebra::matrix(int k, bool cyclotomic, int dim_cap) {
    if (k < 1) throw error("Mat(k) needs k >= 1");
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->kind_ = Kind::Matrix;
    a->k_ = k;
    a->cyclo_ = cyclotomic;
    a->dim_ = k * k;
    // zeta_k is rational for k <= 2, so the field stays Q there.
    a->conductor_ = (cyclotomic && k >= 3) ? static_cast<unsigned>(k) : 1;
    a->descriptor_ = cyclotomic ? "Mat(" + std::to_string(k) + ";zeta)"
                                : "Mat(" + std::to_string(k) + ")";
    for (int r = 0; r < k; ++r) a->unit_[r * k + r] = Scalar(1);
    a->finish(dim_cap);
    return a;
}

AlgebraPtr Algebra::mpq(int p, int q, int n, int dim_cap) {
    if (p < 1 || q < 1) throw error("MpqE(p,q,n) needs p,q >= 1");
    if (n < 0 || n > kMaxGenerators) throw error("MpqE(p,q,n) needs 0 <= n <= 24");
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->kind_ = Kind::Mpq;
    a->p_ = p;
    a->q_ = q;
    a->n_ = n;
    int size = p + q;
    a->descriptor_ = "MpqE(" + std::to_string(p) + "," + std::to_string(q) + "," +
                     std::to_string(n) + ")";
    a->mpq_lookup_.assign(static_cast<std::size_t>(size * size) << n, -1);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            bool diag = (r < p) == (c < p);
            for (Blade b = 0; b < (Blade(1) << n); ++b) {
                if (blade_even(b) != diag) continue;
                a->mpq_lookup_[(static_cast<std::size_t>(r * size + c) << n) | b] =
                    static_cast<int>(a->mpq_basis_.size());
                a->mpq_basis_.push_back({r, c, b});
            }
        }
    a->dim_ = static_cast<int>(a->mpq_basis_.size());
    for (int r = 0; r < size; ++r)
        a->unit_[a->mpq_lookup_[static_cast<std::size_t>(r * size + r) << n]] = Scalar(1);
    a->finish(dim_cap);
    return a;
}

AlgebraPtr Algebra::tensor(const AlgebraPtr& fa, const AlgebraPtr& fb, int dim_cap) {
    if (fa->conductor() != fb->conductor() && fa->conductor() != 1 && fb->conductor() != 1)
        throw conductor_mismatch(fa->conductor(), fb->conductor());
    auto a = std::shared_ptr<Algebra>(new Algebra());
    a->kind_ = Kind::Tensor;
    a->fa_ = fa;
    a->fb_ = fb;
    a->dim_ = fa->dim() * fb->dim();
    a->conductor_ = fa->conductor() == 1 ? fb->conductor() : fa->conductor();
    a->descriptor_ = "T(" + fa->descriptor() + "," + fb->descriptor() + ")";
    for (const auto& [i, ci] : fa->unit_)
        for (const auto& [j, cj] : fb->unit_) a->unit_[i * fb->dim() + j] = ci * cj;
    a->finish(dim_cap);
    return a;
}

void Algebra::finish(int dim_cap) {
    if (dim_ > dim_cap)
        throw error("algebra dimension " + std::to_string(dim_) + " exceeds cap " +
                    std::to_string(dim_cap) + " (" + descriptor_ + ")");
    check_axioms();
}

MonoProd Algebra::basis_product(int i, int j) const {
    switch (kind_) {
        case Kind::Grassmann: {
            BladeProduct p = blade_product(static_cast<Blade>(i), static_cast<Blade>(j));
            return {p.sign, static_cast<int>(p.blade)};
        }
        case Kind::Matrix: {
            int r1 = i / k_, c1 = i % k_, r2 = j / k_, c2 = j % k_;
            if (c1 != r2) return {0, 0};
            return {1, r1 * k_ + c2};
        }
        case Kind::Mpq: {
            const MpqBasis& x = mpq_basis_[i];
            const MpqBasis& y = mpq_basis_[j];
            if (x.col != y.row) return {0, 0};
            BladeProduct p = blade_product(x.blade, y.blade);
            if (p.sign == 0) return {0, 0};
            int size = p_ + q_;
            int idx = mpq_lookup_[(static_cast<std::size_t>(x.row * size + y.col) << n_) |
                                  p.blade];
            return {p.sign, idx};
        }
        case Kind::Tensor: {
            int db = fb_->dim();
            MonoProd pa = fa_->basis_product(i / db, j / db);
            if (pa.sign == 0) return {0, 0};
            MonoProd pb = fb_->basis_product(i % db, j % db);
            if (pb.sign == 0) return {0, 0};
            return {pa.sign * pb.sign, pa.index * db + pb.index};
        }
    }
    throw error("unreachable");
}

std::string Algebra::label(int i) const {
    switch (kind_) {
        case Kind::Grassmann:
            return blade_str(static_cast<Blade>(i));
        case Kind::Matrix:
            return "e" + std::to_string(i / k_ + 1) + std::to_string(i % k_ + 1);
        case Kind::Mpq: {
            const MpqBasis& b = mpq_basis_[i];
            return "e" + std::to_string(b.row + 1) + std::to_string(b.col + 1) + "@" +
                   blade_str(b.blade);
        }
        case Kind::Tensor:
            return fa_->label(i / fb_->dim()) + "@" + fb_->label(i % fb_->dim());
    }
    throw error("unreachable");
}

std::optional<int> Algebra::grading(int i) const {
    switch (kind_) {
        case Kind::Grassmann:
            return blade_weight(static_cast<Blade>(i)) & 1;
        case Kind::Mpq:
            return blade_weight(mpq_basis_[i].blade) & 1;
        case Kind::Matrix:
            return std::nullopt;
        case Kind::Tensor: {
            auto ga = fa_->grading(i / fb_->dim());
            auto gb = fb_->grading(i % fb_->dim());
            if (ga && gb) return (*ga + *gb) & 1;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

void Algebra::check_axioms() const {
    auto assoc_at = [&](int i, int j, int k) {
        MonoProd ij = basis_product(i, j);
        MonoProd left = ij.sign == 0 ? MonoProd{0, 0} : basis_product(ij.index, k);
        if (ij.sign != 0 && left.sign != 0) left.sign *= ij.sign;
        MonoProd jk = basis_product(j, k);
        MonoProd right = jk.sign == 0 ? MonoProd{0, 0} : basis_product(i, jk.index);
        if (jk.sign != 0 && right.sign != 0) right.sign *= jk.sign;
        if (left.sign != right.sign || (left.sign != 0 && left.index != right.index))
            throw error("associativity violated in " + descriptor_);
    };
    if (dim_ <= 300) {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k) assoc_at(i, j, k);
    } else {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<int> d(0, dim_ - 1);
        for (int t = 0; t < 10000; ++t) assoc_at(d(rng), d(rng), d(rng));
    }
    // unit is a two-sided identity on the basis
    for (int i = 0; i < dim_; ++i) {
        SparseVec left, right;
        for (const auto& [u, cu] : unit_) {
            MonoProd l = basis_product(u, i);
            if (l.sign != 0) {
                left[l.index] += l.sign < 0 ? -cu : cu;
                if (left[l.index].is_zero()) left.erase(l.index);
            }
            MonoProd r = basis_product(i, u);
            if (r.sign != 0) {
                right[r.index] += r.sign < 0 ? -cu : cu;
                if (right[r.index].is_zero()) right.erase(r.index);
            }
        }
        SparseVec expect{{i, Scalar(1)}};
        if (left != expect || right != expect) throw error("unit law violated in " + descriptor_);
    }
}

// ---------------------------------------------------------------------------
// Center

std::vector<SparseVec> center_by_nullspace(const Algebra& a) {
    const int d = a.dim();
    if (d > 512) throw error("generic center computation capped at dim 512");
    RowSpace constraints(d);
    for (int j = 0; j < d; ++j) {
        std::map<int, ScalarVec> rows;  // output basis index -> constraint row
        for (int i = 0; i < d; ++i) {
            MonoProd ij = a.basis_product(i, j);
            if (ij.sign != 0) {
                auto [it, fresh] = rows.emplace(ij.index, ScalarVec());
                if (fresh) it->second.assign(d, Scalar(0));
                it->second[i] += Scalar(ij.sign);
            }
            MonoProd ji = a.basis_product(j, i);
            if (ji.sign != 0) {
                auto [it, fresh] = rows.emplace(ji.index, ScalarVec());
                if (fresh) it->second.assign(d, Scalar(0));
                it->second[i] -= Scalar(ji.sign);
            }
        }
        for (auto& [beta, row] : rows) constraints.insert(std::move(row));
    }
    std::vector<SparseVec> basis;
    for (const auto& v : constraints.nullspace()) {
        SparseVec s;
        for (int i = 0; i < d; ++i)
            if (!v[i].is_zero()) s[i] = v[i];
        basis.push_back(std::move(s));
    }
    return basis;
}

std::vector<SparseVec> Algebra::compute_center() const {
    std::vector<SparseVec> basis;
    switch (kind_) {
        case Kind::Grassmann:
            // Z(E) = E_0: the even blades.
            for (int i = 0; i < dim_; ++i)
                if (blade_even(static_cast<Blade>(i))) basis.push_back({{i, Scalar(1)}});
            break;
        case Kind::Tensor: {
            // Z(A (x) B) = Z(A) (x) Z(B).
            const SparseEchelon& za = fa_->center();
            const SparseEchelon& zb = fb_->center();
            for (const auto& [pa, ra] : za.rows)
                for (const auto& [pb, rb] : zb.rows) {
                    SparseVec v;
                    for (const auto& [i, ci] : ra)
                        for (const auto& [j, cj] : rb) v[i * fb_->dim() + j] = ci * cj;
                    basis.push_back(std::move(v));
                }
            break;
        }
        case Kind::Matrix:
        case Kind::Mpq:
            basis = center_by_nullspace(*this);
            break;
    }
    // exact recheck: every center vector commutes with every basis element
    for (const auto& z : basis)
        for (int j = 0; j < dim_; ++j) {
            SparseVec delta;
            for (const auto& [i, c] : z) {
                MonoProd ij = basis_product(i, j);
                if (ij.sign != 0) {
                    auto t = delta.emplace(ij.index, Scalar(0)).first;
                    t->second += ij.sign < 0 ? -c : c;
                    if (t->second.is_zero()) delta.erase(t);
                }
                MonoProd ji = basis_product(j, i);
                if (ji.sign != 0) {
                    auto t = delta.emplace(ji.index, Scalar(0)).first;
                    t->second -= ji.sign < 0 ? -c : c;
                    if (t->second.is_zero()) delta.erase(t);
                }
            }
            if (!delta.empty()) throw error("center recheck failed in " + descriptor_);
        }
    return basis;
}

const SparseEchelon& Algebra::center() const {
    std::lock_guard<std::mutex> lock(center_mutex_);
    if (!center_) center_ = std::make_unique<SparseEchelon>(sparse_echelon(compute_center()));
    return *center_;
}

// ---------------------------------------------------------------------------
// Descriptor parsing

namespace {

class DescParser {
  public:
    DescParser(const std::string& text, int dim_cap) : s_(text), cap_(dim_cap) {}

    AlgebraPtr parse() {
        AlgebraPtr a = descriptor();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters in algebra descriptor");
        return a;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "' in algebra descriptor");
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return std::stoi(s_.substr(start, pos_ - start));
    }

    std::string name() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected algebra name");
        return s_.substr(start, pos_ - start);
    }

    AlgebraPtr descriptor() {
        std::string n = name();
        expect('(');
        AlgebraPtr result;
        if (n == "E") {
            int gens = integer();
            result = Algebra::grassmann(gens, cap_);
        } else if (n == "Mat") {
            int k = integer();
            bool cyc = false;
            if (accept(';')) {
                if (name() != "zeta") fail("expected 'zeta'");
                cyc = true;
            }
            result = Algebra::matrix(k, cyc, cap_);
        } else if (n == "MatE") {
            int k = integer();
            expect(',');
            int gens = integer();
            result = Algebra::tensor(Algebra::matrix(k, false, cap_),
                                     Algebra::grassmann(gens, cap_), cap_);
        } else if (n == "MpqE") {
            int p = integer();
            expect(',');
            int q = integer();
            expect(',');
            int gens = integer();
            result = Algebra::mpq(p, q, gens, cap_);
        } else if (n == "T") {
            AlgebraPtr a = descriptor();
            expect(',');
            AlgebraPtr b = descriptor();
            result = Algebra::tensor(a, b, cap_);
        } else {
            fail("unknown algebra '" + n + "'");
        }
        expect(')');
        return result;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int cap_;
};

}  // namespace

AlgebraPtr Algebra::build(const std::string& descriptor, int dim_cap) {
    std::string key = descriptor + "#" + std::to_string(dim_cap);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = algebra_cache().find(key);
        if (it != algebra_cache().end()) return it->second;
    }
    AlgebraPtr a = DescParser(descriptor, dim_cap).parse();
    std::lock_guard<std::mutex> lock(cache_mutex);
    algebra_cache().emplace(std::move(key), a);
    return a;
}

// ---------------------------------------------------------------------------
// Element

Element::Element(AlgebraPtr a, SparseVec coords) : a_(std::move(a)), coords_(std::move(coords)) {
    for (auto it = coords_.begin(); it != coords_.end();) {
        if (it->first < 0 || it->first >= a_->dim()) throw error("coordinate index out of range");
        it = it->second.is_zero() ? coords_.erase(it) : std::next(it);
    }
}

Element Algebra::unit_element() const {
    return Element(shared_from_this(), unit_);
}

Element Algebra::basis_element(int i) const {
    if (i < 0 || i >= dim_) throw error("basis index out of range");
    return Element(shared_from_this(), {{i, Scalar(1)}});
}

Element Algebra::zero_element() const { return Element(shared_from_this()); }

Scalar Element::coord(int i) const {
    auto it = coords_.find(i);
    return it == coords_.end() ? Scalar(0) : it->second;
}

void Element::add_term(int i, const Scalar& c) {
    if (i < 0 || i >= a_->dim()) throw error("coordinate index out of range");
    if (c.is_zero()) return;
    auto [it, fresh] = coords_.emplace(i, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) coords_.erase(it);
    }
}

void Element::require_same(const Element& o) const {
    if (a_ != o.a_ && a_->descriptor() != o.a_->descriptor())
        throw error("elements of different algebras: " + a_->descriptor() + " vs " +
                    o.a_->descriptor());
}

Element Element::operator-() const {
    Element r(a_);
    for (const auto& [i, c] : coords_) r.coords_.emplace(i, -c);
    return r;
}

Element& Element::operator+=(const Element& o) {
    require_same(o);
    for (const auto& [i, c] : o.coords_) add_term(i, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    require_same(o);
    for (const auto& [i, c] : o.coords_) add_term(i, -c);
    return *this;
}

Element operator*(const Element& a, const Element& b) {
    a.require_same(b);
    Element r(a.a_);
    for (const auto& [i, ci] : a.coords_)
        for (const auto& [j, cj] : b.coords_) {
            MonoProd p = a.a_->basis_product(i, j);
            if (p.sign == 0) continue;
            Scalar c = ci * cj;
            r.add_term(p.index, p.sign < 0 ? -c : c);
        }
    return r;
}

Element operator*(const Scalar& c, const Element& a) {
    Element r(a.a_);
    for (const auto& [i, ci] : a.coords_) r.add_term(i, c * ci);
    return r;
}

bool operator==(const Element& a, const Element& b) {
    a.require_same(b);
    return a.coords_ == b.coords_;
}

bool Element::is_central() const {
    SparseVec v = coords_;
    return a_->center().reduce(v);
}

std::string Element::str() const {
    if (coords_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : coords_) {
        bool neg = c.is_rational() && c.rat().sign() < 0;
        Scalar mag = neg ? -c : c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (!mag.is_rational()) os << "(" << mag.str() << ")*";
        else if (!mag.is_one()) os << mag.rat().str() << "*";
        os << a_->label(i);
    }
    return os.str();
}

Element evaluate(const Poly& f, const Assignment& s) {
    if (s.empty()) throw error("evaluate: empty assignment");
    const AlgebraPtr& a = s.begin()->second.algebra();
    Element acc(a);
    for (const auto& [w, c] : f.terms()) {
        Element prod = a->unit_element();
        for (int letter : w.letters) {
            auto it = s.find(letter);
            if (it == s.end())
                throw error("evaluate: no value assigned to x" + std::to_string(letter));
            prod = prod * it->second;
            if (prod.is_zero()) break;
        }
        acc += c * prod;
    }
    return acc;
}

}  // namespace pialg
