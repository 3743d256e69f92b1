#include "pialg/canon.hpp"

#include <algorithm>
#include <sstream>

#include "pialg/error.hpp"

namespace pialg {

namespace {

// Intermediate rewriting term: coeff * x_{prefix...} * [p1a,p1b][p2a,p2b]...
// Commutators are central (R1), so the pair list needs no position.
struct RTerm {
    Scalar coeff;
    std::vector<int> prefix;
    std::vector<std::pair<int, int>> pairs;
};

// R2 + R3 + centrality make the commutator chain fully antisymmetric in the
// flattened index sequence: sort it, take the sorting permutation's sign,
// and re-pair consecutively.
bool canonicalize_pairs(RTerm& t) {
    std::vector<int> flat;
    for (auto [a, b] : t.pairs) {
        flat.push_back(a);
        flat.push_back(b);
    }
    int inversions = 0;
    for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t j = i + 1; j < flat.size(); ++j) {
            if (flat[i] == flat[j]) return false;  // [u,u] = 0
            if (flat[i] > flat[j]) ++inversions;
        }
    std::sort(flat.begin(), flat.end());
    if (inversions & 1) t.coeff = -t.coeff;
    t.pairs.clear();
    for (std::size_t i = 0; i < flat.size(); i += 2) t.pairs.emplace_back(flat[i], flat[i + 1]);
    return true;
}

}  // namespace

CanonicalForm canonical_form(const Poly& f, RewriteOrder order) {
    MultilinearCheck chk = is_multilinear(f);
    if (!chk.multilinear && !f.is_zero()) throw error("canonical form needs a multilinear polynomial");
    CanonicalForm cf;
    if (f.is_zero()) return cf;
    for (int t = 0; t < static_cast<int>(chk.vars.size()); ++t)
        if (chk.vars[t] != t + 1)
            throw error("canonical form expects variables x1..xm, found x" +
                        std::to_string(chk.vars[t]));
    cf.m = static_cast<int>(chk.vars.size());

    std::vector<RTerm> work;
    for (const auto& [w, c] : f.terms()) work.push_back({c, w.letters, {}});

    while (!work.empty()) {
        RTerm t = std::move(work.back());
        work.pop_back();
        // find the descent R4 fires on
        int descent = -1;
        const int len = static_cast<int>(t.prefix.size());
        if (order == RewriteOrder::LeftmostDescent) {
            for (int i = 0; i + 1 < len; ++i)
                if (t.prefix[i] > t.prefix[i + 1]) { descent = i; break; }
        } else {
            for (int i = len - 2; i >= 0; --i)
                if (t.prefix[i] > t.prefix[i + 1]) { descent = i; break; }
        }
        if (descent >= 0) {
            int a = t.prefix[descent], b = t.prefix[descent + 1];
            // x_a x_b = x_b x_a + [x_a, x_b]
            RTerm swapped = t;
            std::swap(swapped.prefix[descent], swapped.prefix[descent + 1]);
            RTerm extracted = t;
            extracted.prefix.erase(extracted.prefix.begin() + descent,
                                   extracted.prefix.begin() + descent + 2);
            extracted.pairs.emplace_back(a, b);  // a > b; fixed by pair canonicalization
            work.push_back(std::move(swapped));
            work.push_back(std::move(extracted));
            continue;
        }
        if (!canonicalize_pairs(t)) continue;
        std::vector<int> j_set;
        for (auto [a, b] : t.pairs) {
            j_set.push_back(a);
            j_set.push_back(b);
        }
        auto [it, fresh] = cf.coeffs.emplace(std::move(j_set), t.coeff);
        if (!fresh) {
            it->second += t.coeff;
            if (it->second.is_zero()) cf.coeffs.erase(it);
        }
    }
    return cf;
}

Poly canonical_basis_poly(int m, const std::vector<int>& J) {
    std::vector<bool> in_j(m + 1, false);
    for (int j : J) in_j[j] = true;
    Poly out = Poly::one();
    Word prefix;
    for (int i = 1; i <= m; ++i)
        if (!in_j[i]) prefix.letters.push_back(i);
    out = Poly::monomial(Scalar(1), prefix);
    for (std::size_t t = 0; t < J.size(); t += 2)
        out = out * commutator(Poly::variable(J[t]), Poly::variable(J[t + 1]));
    return out;
}

Poly CanonicalForm::expand() const {
    Poly out;
    for (const auto& [J, beta] : coeffs) out += beta * canonical_basis_poly(m, J);
    return out;
}

std::string CanonicalForm::str() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [J, beta] : coeffs) {
        if (!first) os << "\n";
        first = false;
        os << "J={";
        for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
        os << "}  beta=" << beta.str();
    }
    return os.str();
}

bool identity_of_e(const Poly& f) { return canonical_form(f).is_zero(); }

GrassmannElement evaluate_grassmann(const Poly& f, const std::map<int, GrassmannElement>& s,
                                    int n) {
    GrassmannElement acc(n);
    for (const auto& [w, c] : f.terms()) {
        GrassmannElement prod = GrassmannElement::unit(n);
        bool dead = false;
        for (int letter : w.letters) {
            auto it = s.find(letter);
            if (it == s.end()) throw error("no value assigned to x" + std::to_string(letter));
            prod = prod * it->second;
            if (prod.is_zero()) { dead = true; break; }
        }
        if (!dead) acc += c * prod;
    }
    return acc;
}

Witness grassmann_witness(const Poly& f) {
    CanonicalForm cf = canonical_form(f);
    if (cf.is_zero()) throw zero_canonical_form();
    // minimal p, lexicographically least J: the first key in (size, lex) order
    const std::vector<int>& J = cf.coeffs.begin()->first;
    const int m = cf.m;
    const int p2 = static_cast<int>(J.size());  // 2p
    const int prefix_count = m - p2;
    Witness w;
    w.chosen_j = J;
    w.generators = 2 * prefix_count + p2;  // 2m - 2p distinct generators
    const int n = std::max(w.generators, 1);
    std::vector<bool> in_j(m + 1, false);
    for (int j : J) in_j[j] = true;
    int next = 1;
    for (int i = 1; i <= m; ++i) {
        if (in_j[i]) continue;
        // prefix variable: a central product of two fresh generators
        GrassmannElement pair =
            GrassmannElement::generator(n, next) * GrassmannElement::generator(n, next + 1);
        next += 2;
        w.substitution.emplace(i, std::move(pair));
    }
    for (int j : J) {
        w.substitution.emplace(j, GrassmannElement::generator(n, next));
        ++next;
    }
    w.value = evaluate_grassmann(f, w.substitution, n);
    if (w.value.is_zero() || !w.value.is_central())
        throw error("witness construction produced an invalid value");
    return w;
}

}  // namespace pialg
