#include "pialg/regular.hpp"

#include <cctype>
#include <functional>

#include "pialg/error.hpp"

namespace pialg {

namespace {

void check_spanning(const AlgebraPtr& algebra,
                    const std::vector<std::vector<Element>>& components) {
    RowSpace span(algebra->dim());
    int total = 0;
    for (const auto& comp : components)
        for (const auto& v : comp) {
            ScalarVec row(algebra->dim(), Scalar(0));
            for (const auto& [i, c] : v.coords()) row[i] = c;
            if (!span.insert(std::move(row)))
                throw error("decomposition components are not independent");
            ++total;
        }
    if (span.rank() != algebra->dim())
        throw error("decomposition components do not span " + algebra->descriptor() + " (rank " +
                    std::to_string(span.rank()) + " of " + std::to_string(algebra->dim()) + ")");
    (void)total;
}

// The unique scalar with xy = t * yx, if any; yx must be nonzero.
std::optional<Scalar> ratio(const Element& xy, const Element& yx) {
    const auto& [i0, c0] = *yx.coords().begin();
    Scalar t = xy.coord(i0) / c0;
    if (xy == t * yx) return t;
    return std::nullopt;
}

}  // namespace

P2Result verify_p2(const AlgebraPtr& algebra,
                   const std::vector<std::vector<Element>>& components) {
    check_spanning(algebra, components);
    const int r = static_cast<int>(components.size());
    P2Result res;
    res.theta.assign(r, std::vector<Scalar>(r, Scalar(1)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            std::optional<Scalar> t;
            for (const auto& x : components[i])
                for (const auto& y : components[j]) {
                    Element xy = x * y, yx = y * x;
                    if (yx.is_zero()) {
                        if (xy.is_zero()) continue;
                        res.i = i; res.j = j; res.x = x; res.y = y;
                        res.message = "x*y nonzero while y*x = 0";
                        return res;
                    }
                    std::optional<Scalar> cand = ratio(xy, yx);
                    if (!cand || cand->is_zero()) {
                        res.i = i; res.j = j; res.x = x; res.y = y;
                        res.message = cand ? "x*y = 0 with y*x nonzero (theta would be 0)"
                                           : "x*y is not proportional to y*x";
                        return res;
                    }
                    if (t && *t != *cand) {
                        res.i = i; res.j = j; res.x = x; res.y = y;
                        res.message = "inconsistent scalar across basis pairs";
                        return res;
                    }
                    t = cand;
                }
            if (t) res.theta[i][j] = *t;
            else res.undetermined.emplace_back(i, j);
        }
    res.ok = true;
    return res;
}

P1Result verify_p1(const RegularDecomposition& d, const DegreeSequence& seq) {
    for (int ix : seq)
        if (ix < 0 || ix >= d.component_count()) throw error("degree index out of range");
    P1Result res;
    std::vector<Element> chosen;
    std::function<bool(std::size_t, const Element&)> dfs = [&](std::size_t depth,
                                                               const Element& partial) -> bool {
        if (depth == seq.size()) {
            res.found = true;
            res.witness = chosen;
            res.product = partial;
            return true;
        }
        for (const auto& x : d.components[seq[depth]]) {
            Element next = partial * x;
            if (next.is_zero()) continue;
            chosen.push_back(x);
            if (dfs(depth + 1, next)) return true;
            chosen.pop_back();
        }
        return false;
    };
    dfs(0, d.algebra->unit_element());
    return res;
}

// ---------------------------------------------------------------------------
// Builtins

namespace {

RegularDecomposition make_grassmann_decomposition(int n) {
    RegularDecomposition d;
    d.name = "grassmann(" + std::to_string(n) + ")";
    d.algebra = Algebra::build("E(" + std::to_string(n) + ")");
    std::vector<Element> even, odd;
    for (int i = 0; i < d.algebra->dim(); ++i)
        (blade_even(static_cast<Blade>(i)) ? even : odd).push_back(d.algebra->basis_element(i));
    d.components = {even, odd};
    d.theta = {{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(-1)}};
    return d;
}

RegularDecomposition make_matk_decomposition(int k) {
    RegularDecomposition d;
    d.name = "matk(" + std::to_string(k) + ")";
    d.algebra = Algebra::build(k >= 3 ? "Mat(" + std::to_string(k) + ";zeta)"
                                      : "Mat(" + std::to_string(k) + ")");
    Scalar xi = Scalar::zeta(static_cast<unsigned>(k));
    Element xa(d.algebra), xb(d.algebra);
    for (int t = 0; t < k; ++t) xa.add_term(t * k + t, xi.pow(k - 1 - t));
    for (int t = 0; t + 1 < k; ++t) xb.add_term(t * k + (t + 1), Scalar(1));
    xb.add_term((k - 1) * k + 0, Scalar(1));
    if (k == 1) xb = d.algebra->unit_element();
    // components F * Xa^i Xb^j, (i,j) row-major
    Element xa_pow = d.algebra->unit_element();
    for (int i = 0; i < k; ++i) {
        Element cur = xa_pow;
        for (int j = 0; j < k; ++j) {
            d.components.push_back({cur});
            cur = cur * xb;
        }
        xa_pow = xa_pow * xa;
    }
    // theta inferred rather than hardcoding a zeta-power formula
    P2Result p2 = verify_p2(d.algebra, d.components);
    if (!p2.ok) throw error("matk decomposition failed P2: " + p2.message);
    d.theta = std::move(p2.theta);
    d.undetermined = std::move(p2.undetermined);
    return d;
}

RegularDecomposition make_m11e_decomposition(int n) {
    RegularDecomposition d;
    d.name = "m11e(" + std::to_string(n) + ")";
    d.algebra = Algebra::build("MpqE(1,1," + std::to_string(n) + ")");
    const auto& basis = d.algebra->mpq_basis();
    auto find = [&](int row, int col, Blade b) {
        for (std::size_t t = 0; t < basis.size(); ++t)
            if (basis[t].row == row && basis[t].col == col && basis[t].blade == b)
                return static_cast<int>(t);
        throw error("mpq basis lookup failed");
    };
    // I = diag(1,1), Xa = diag(-1,1), Xb = offdiag(1,1), XaXb = [[0,-1],[1,0]]
    std::vector<Element> e0i, e0xa, e1xb, e1xaxb;
    for (Blade b = 0; b < (Blade(1) << n); ++b) {
        if (blade_even(b)) {
            Element vi(d.algebra), va(d.algebra);
            vi.add_term(find(0, 0, b), Scalar(1));
            vi.add_term(find(1, 1, b), Scalar(1));
            va.add_term(find(0, 0, b), Scalar(-1));
            va.add_term(find(1, 1, b), Scalar(1));
            e0i.push_back(vi);
            e0xa.push_back(va);
        } else {
            Element vb(d.algebra), vab(d.algebra);
            vb.add_term(find(0, 1, b), Scalar(1));
            vb.add_term(find(1, 0, b), Scalar(1));
            vab.add_term(find(0, 1, b), Scalar(-1));
            vab.add_term(find(1, 0, b), Scalar(1));
            e1xb.push_back(vb);
            e1xaxb.push_back(vab);
        }
    }
    d.components = {e0i, e0xa, e1xb, e1xaxb};
    auto s = [](int v) { return Scalar(v); };
    d.theta = {{s(1), s(1), s(1), s(1)},
               {s(1), s(1), s(-1), s(-1)},
               {s(1), s(-1), s(-1), s(1)},
               {s(1), s(-1), s(1), s(-1)}};
    return d;
}

}  // namespace

RegularDecomposition tensor_decomposition(const RegularDecomposition& da,
                                          const RegularDecomposition& db) {
    RegularDecomposition d;
    d.name = "tensor(" + da.name + "," + db.name + ")";
    d.algebra = Algebra::tensor(da.algebra, db.algebra);
    const int dim_b = db.algebra->dim();
    for (const auto& comp_a : da.components)
        for (const auto& comp_b : db.components) {
            std::vector<Element> comp;
            for (const auto& x : comp_a)
                for (const auto& y : comp_b) {
                    Element v(d.algebra);
                    for (const auto& [i, ci] : x.coords())
                        for (const auto& [j, cj] : y.coords())
                            v.add_term(i * dim_b + j, ci * cj);
                    comp.push_back(std::move(v));
                }
            d.components.push_back(std::move(comp));
        }
    const int ra = da.component_count(), rb = db.component_count();
    d.theta.assign(ra * rb, std::vector<Scalar>(ra * rb, Scalar(1)));
    for (int i = 0; i < ra; ++i)
        for (int k = 0; k < rb; ++k)
            for (int j = 0; j < ra; ++j)
                for (int l = 0; l < rb; ++l)
                    d.theta[i * rb + k][j * rb + l] = da.theta[i][j] * db.theta[k][l];
    for (auto [i, j] : da.undetermined)
        for (int k = 0; k < rb; ++k)
            for (int l = 0; l < rb; ++l) d.undetermined.emplace_back(i * rb + k, j * rb + l);
    return d;
}

RegularDecomposition builtin_decomposition(const std::string& name) {
    // grammar: grassmann(n) | matk(k) | m11e(n) | tensor(name,name)
    std::size_t pos = 0;
    std::function<RegularDecomposition()> parse = [&]() -> RegularDecomposition {
        while (pos < name.size() && std::isspace(static_cast<unsigned char>(name[pos]))) ++pos;
        std::size_t start = pos;
        while (pos < name.size() &&
               (std::isalnum(static_cast<unsigned char>(name[pos])) || name[pos] == '_'))
            ++pos;
        std::string head = name.substr(start, pos - start);
        auto expect = [&](char c) {
            while (pos < name.size() && std::isspace(static_cast<unsigned char>(name[pos]))) ++pos;
            if (pos >= name.size() || name[pos] != c)
                throw parse_error("expected '" + std::string(1, c) + "' in decomposition name", pos);
            ++pos;
        };
        auto integer = [&]() {
            while (pos < name.size() && std::isspace(static_cast<unsigned char>(name[pos]))) ++pos;
            std::size_t s0 = pos;
            while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) ++pos;
            if (pos == s0) throw parse_error("expected integer in decomposition name", pos);
            return std::stoi(name.substr(s0, pos - s0));
        };
        expect('(');
        RegularDecomposition d;
        if (head == "grassmann") {
            d = make_grassmann_decomposition(integer());
        } else if (head == "matk") {
            d = make_matk_decomposition(integer());
        } else if (head == "m11e") {
            d = make_m11e_decomposition(integer());
        } else if (head == "tensor") {
            RegularDecomposition a = parse();
            expect(',');
            RegularDecomposition b = parse();
            d = tensor_decomposition(a, b);
        } else {
            throw parse_error("unknown decomposition '" + head + "'", start);
        }
        expect(')');
        return d;
    };
    RegularDecomposition d = parse();
    while (pos < name.size() && std::isspace(static_cast<unsigned char>(name[pos]))) ++pos;
    if (pos != name.size()) throw parse_error("trailing characters in decomposition name", pos);
    return d;
}

Scalar epsilon_sigma(const std::vector<std::vector<Scalar>>& theta, const DegreeSequence& degrees,
                     const std::vector<int>& sigma) {
    const int n = static_cast<int>(sigma.size());
    if (static_cast<int>(degrees.size()) != n)
        throw error("degree sequence and permutation lengths differ");
    const int r = static_cast<int>(theta.size());
    Scalar eps(1);
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            if (sigma[k] <= sigma[l]) continue;
            int di = degrees[sigma[k]], dj = degrees[sigma[l]];
            if (di < 0 || di >= r || dj < 0 || dj >= r) throw error("degree index out of range");
            eps *= theta[di][dj];
        }
    return eps;
}

Poly transform_f_a(const Poly& f, const std::vector<std::vector<Scalar>>& theta,
                   const DegreeSequence& degrees) {
    MultilinearCheck chk = is_multilinear(f);
    if (!chk.multilinear) throw error("transform: polynomial is not multilinear");
    const int n = static_cast<int>(chk.vars.size());
    for (int t = 0; t < n; ++t)
        if (chk.vars[t] != t + 1) throw error("transform: variables must be x1..xn");
    if (static_cast<int>(degrees.size()) != n)
        throw error("transform: degree sequence length must match the variable count");
    Poly out;
    for (const auto& [w, c] : f.terms()) {
        std::vector<int> sigma(n);
        for (int k = 0; k < n; ++k) sigma[k] = w.letters[k] - 1;
        out.add_term(w, epsilon_sigma(theta, degrees, sigma) * c);
    }
    return out;
}

}  // namespace pialg
