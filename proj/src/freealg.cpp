#include "pialg/freealg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "pialg/error.hpp"

namespace pialg {

int Word::degree_in(int var) const {
    int d = 0;
    for (int l : letters) d += (l == var);
    return d;
}

Word Word::operator*(const Word& o) const {
    Word r = *this;
    r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
    return r;
}

MultiDegree multidegree(const Word& w) {
    MultiDegree d;
    for (int l : w.letters) ++d[l];
    return d;
}

Poly Poly::constant(const Scalar& c) {
    Poly p;
    p.add_term(Word{}, c);
    return p;
}

Poly Poly::variable(int i) {
    if (i < 1) throw error("variable index must be >= 1");
    Poly p;
    p.add_term(Word{{i}}, Scalar(1));
    return p;
}

Poly Poly::monomial(const Scalar& c, Word w) {
    Poly p;
    p.add_term(w, c);
    return p;
}

Scalar Poly::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
}

int Poly::degree() const {
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.degree());
    return d;
}

int Poly::degree_in(int var) const {
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.degree_in(var));
    return d;
}

std::set<int> Poly::variables() const {
    std::set<int> vs;
    for (const auto& [w, c] : terms_)
        for (int l : w.letters) vs.insert(l);
    return vs;
}

unsigned Poly::conductor() const {
    unsigned k = 1;
    for (const auto& [w, c] : terms_)
        if (c.conductor() != 1) {
            if (k != 1 && k != c.conductor()) throw conductor_mismatch(k, c.conductor());
            k = c.conductor();
        }
    return k;
}

void Poly::add_term(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_) r.add_term(wa * wb, ca * cb);
    return r;
}

Poly operator*(const Scalar& c, const Poly& p) {
    Poly r;
    for (const auto& [w, pc] : p.terms_) r.add_term(w, c * pc);
    return r;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    Poly parse() {
        Poly p = poly();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
    }

    std::string digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected digits");
        return s_.substr(start, pos_ - start);
    }

    Rational rational() {
        mpz_class num(digits(), 10);
        if (accept('/')) {
            mpz_class den(digits(), 10);
            if (den == 0) fail("zero denominator");
            return Rational(mpq_class(num, den));
        }
        return Rational(mpq_class(num));
    }

    Poly poly() {
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        Poly p = term();
        if (neg) p = -p;
        for (;;) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Poly t = term();
                if (c == '-') p -= t;
                else p += t;
            } else {
                return p;
            }
        }
    }

    Poly term() {
        char c = peek();
        Poly p = Poly::one();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational r = rational();
            p = Poly::constant(Scalar(r));
            if (!accept('*')) return p;  // bare rational term
        }
        p = p * factor();
        while (accept('*')) p = p * factor();
        return p;
    }

    Poly factor() {
        char c = peek();
        if (c == 'x') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected variable index after 'x'");
            std::string ds = digits();
            long idx = std::stol(ds);
            if (idx < 1) fail("variable index must be >= 1");
            return Poly::variable(static_cast<int>(idx));
        }
        if (c == '[') {
            ++pos_;
            Poly acc = poly();
            expect(',', "in commutator (need at least two arguments)");
            acc = commutator(acc, poly());
            while (accept(',')) acc = commutator(acc, poly());
            expect(']', "to close commutator");
            return acc;
        }
        if (c == '(') {
            ++pos_;
            Poly p = poly();
            expect(')', "to close group");
            return p;
        }
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unknown token '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text) { return Parser(text).parse(); }

std::string format_poly(const Poly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : f.terms()) {
        bool neg = false;
        Scalar mag = c;
        if (c.is_rational() && c.rat().sign() < 0) {
            neg = true;
            mag = -c;
        }
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        std::string coeff_txt;
        if (!mag.is_rational()) coeff_txt = "(" + mag.str() + ")";
        else if (!mag.is_one() || w.letters.empty()) coeff_txt = mag.rat().str();
        os << coeff_txt;
        for (std::size_t i = 0; i < w.letters.size(); ++i) {
            if (i > 0 || !coeff_txt.empty()) os << "*";
            os << "x" << w.letters[i];
        }
    }
    return os.str();
}

std::vector<std::pair<MultiDegree, Poly>> multihomogeneous_components(const Poly& f) {
    std::map<MultiDegree, Poly> comps;
    for (const auto& [w, c] : f.terms()) comps[multidegree(w)].add_term(w, c);
    return {comps.begin(), comps.end()};
}

MultilinearCheck is_multilinear(const Poly& f) {
    MultilinearCheck r;
    if (f.is_zero()) return r;
    std::set<int> common;
    bool first = true;
    for (const auto& [w, c] : f.terms()) {
        std::set<int> used;
        for (int l : w.letters)
            if (!used.insert(l).second) return r;  // repeated letter
        if (first) {
            common = used;
            first = false;
        } else if (used != common) {
            return r;
        }
    }
    r.multilinear = true;
    r.vars.assign(common.begin(), common.end());
    return r;
}

Poly multilinearize(const Poly& f, int fresh_start) {
    auto comps = multihomogeneous_components(f);
    if (comps.size() != 1) throw error("multilinearize: polynomial is not multihomogeneous");
    const MultiDegree& deg = comps.front().first;

    // Fresh block per variable, consecutive from fresh_start in variable order.
    std::map<int, std::pair<int, int>> block;  // var -> (first fresh index, count)
    int next = fresh_start;
    for (const auto& [v, d] : deg) {
        block[v] = {next, d};
        next += d;
    }

    Poly out;
    for (const auto& [w, c] : f.terms()) {
        // Odometer over fresh choices per letter; keep the terms where every
        // fresh variable of every block appears exactly once.
        int m = w.degree();
        std::vector<int> choice(m, 0);
        for (;;) {
            std::map<int, std::set<int>> seen;
            bool ok = true;
            std::vector<int> letters(m);
            for (int i = 0; i < m && ok; ++i) {
                int v = w.letters[i];
                int fresh = block[v].first + choice[i];
                letters[i] = fresh;
                ok = seen[v].insert(choice[i]).second;
            }
            if (ok) out.add_term(Word(std::move(letters)), c);
            int i = m - 1;
            while (i >= 0) {
                if (++choice[i] < block[w.letters[i]].second) break;
                choice[i--] = 0;
            }
            if (i < 0) break;
        }
    }
    return out;
}

Poly disjoint_product(const Poly& f, const Poly& g) {
    std::set<int> vf = f.variables(), vg = g.variables();
    std::vector<int> inter;
    std::set_intersection(vf.begin(), vf.end(), vg.begin(), vg.end(), std::back_inserter(inter));
    if (!inter.empty())
        throw error("disjoint_product: variable x" + std::to_string(inter.front()) +
                    " appears in both factors");
    return f * g;
}

}  // namespace pialg
