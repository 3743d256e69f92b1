#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "pialg/algebra.hpp"
#include "pialg/canon.hpp"
#include "pialg/cyclo.hpp"
#include "pialg/freealg.hpp"
#include "pialg/pitest.hpp"
#include "pialg/regular.hpp"

using json = nlohmann::json;
using namespace pialg;

namespace {

struct Common {
    bool json_out = false;
    std::optional<long> seed;  // accepted for reproducibility; all scans are deterministic
    int threads = 1;
    int max_degree = 4;
    long tuple_budget = 1L << 26;
    int dim_cap = kDefaultDimCap;
    std::optional<int> trunc_n;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_flag("--json", c.json_out, "emit a JSON report");
    cmd->add_option("--seed", c.seed, "seed echoed into reports; runs are deterministic");
    cmd->add_option("--threads", c.threads, "worker threads for tuple scans")
        ->default_val(std::max(1u, std::thread::hardware_concurrency()));
    cmd->add_option("--max-degree", c.max_degree, "multilinear degree cap")->default_val(4);
    cmd->add_option("--tuple-budget", c.tuple_budget, "exhaustive-enumeration guard")
        ->default_val(1L << 26);
    cmd->add_option("--dim-cap", c.dim_cap, "algebra dimension cap")->default_val(kDefaultDimCap);
    cmd->add_option("--n", c.trunc_n, "Grassmann truncation override (default n = 2*degree)");
}

ScanOptions scan_options(const Common& c) {
    ScanOptions o;
    o.degree_cap = c.max_degree;
    o.tuple_budget = c.tuple_budget;
    o.threads = c.threads;
    if (c.max_degree > 4)
        std::cerr << "note: degree cap raised to " << c.max_degree
                  << "; generic scans enumerate up to dim^" << c.max_degree << " basis tuples\n";
    return o;
}

json base_report(const std::string& command, const Common& c) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

// default truncation rule for commands that work "in E": n = 2m
AlgebraPtr grassmann_for_degree(const Common& c, int degree, bool& overridden, int& used_n) {
    used_n = c.trunc_n ? *c.trunc_n : 2 * degree;
    overridden = c.trunc_n.has_value();
    return Algebra::build("E(" + std::to_string(used_n) + ")", c.dim_cap);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream is(text);
    int v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw error("expected a space-separated integer list, got '" + text + "'");
    return out;
}

std::string theta_str(const std::vector<std::vector<Scalar>>& theta) {
    std::ostringstream os;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        os << "[";
        for (std::size_t j = 0; j < theta[i].size(); ++j)
            os << (j ? ", " : " ") << theta[i][j].str();
        os << " ]\n";
    }
    return os.str();
}

json theta_json(const std::vector<std::vector<Scalar>>& theta) {
    json rows = json::array();
    for (const auto& r : theta) {
        json row = json::array();
        for (const auto& s : r) row.push_back(s.str());
        rows.push_back(row);
    }
    return rows;
}

int cmd_check_identity(const Common& c, const std::string& algebra, const std::string& poly_text) {
    Poly f = parse_poly(poly_text);
    bool overridden = false;
    int used_n = 0;
    AlgebraPtr a = algebra.empty() ? grassmann_for_degree(c, f.degree(), overridden, used_n)
                                   : Algebra::build(algebra, c.dim_cap);
    IdentityCheck r = is_identity(f, a, scan_options(c));
    if (c.json_out) {
        json j = base_report("check-identity", c);
        j["algebra"] = a->descriptor();
        j["poly"] = format_poly(f);
        j["identity"] = r.identity;
        if (r.counterexample) j["counterexample"] = assignment_str(*r.counterexample);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.identity ? "identity" : "not-identity") << " on " << a->descriptor()
                  << "\n";
        if (r.counterexample) std::cout << "counterexample: " << assignment_str(*r.counterexample)
                                        << "\n";
    }
    return r.identity ? 0 : 1;
}

int cmd_check_central(const Common& c, const std::string& algebra, const std::string& poly_text) {
    Poly f = parse_poly(poly_text);
    bool overridden = false;
    int used_n = 0;
    AlgebraPtr a = algebra.empty() ? grassmann_for_degree(c, f.degree(), overridden, used_n)
                                   : Algebra::build(algebra, c.dim_cap);
    CentralCheck r = classify_central(f, a, scan_options(c));
    std::string cls = r.cls == Centrality::Identity       ? "identity"
                      : r.cls == Centrality::ProperCentral ? "proper-central"
                                                           : "non-central";
    if (c.json_out) {
        json j = base_report("check-central", c);
        j["algebra"] = a->descriptor();
        j["poly"] = format_poly(f);
        j["class"] = cls;
        if (r.witness) j["witness"] = assignment_str(*r.witness);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << cls << " on " << a->descriptor() << "\n";
        if (r.witness) std::cout << "witness: " << assignment_str(*r.witness) << "\n";
    }
    return r.cls == Centrality::NonCentral ? 1 : 0;
}

int cmd_canon(const Common& c, const std::string& poly_text) {
    Poly f = parse_poly(poly_text);
    CanonicalForm cf = canonical_form(f);
    if (c.json_out) {
        json j = base_report("canon", c);
        j["poly"] = format_poly(f);
        json terms = json::array();
        for (const auto& [J, beta] : cf.coeffs)
            terms.push_back({{"J", J}, {"beta", beta.str()}});
        j["terms"] = terms;
        j["expanded"] = format_poly(cf.expand());
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << cf.str() << "\n";
        std::cout << "expanded: " << format_poly(cf.expand()) << "\n";
    }
    return 0;
}

int cmd_witness(const Common& c, const std::string& poly_text) {
    Poly f = parse_poly(poly_text);
    Witness w;
    try {
        w = grassmann_witness(f);
    } catch (const zero_canonical_form& e) {
        if (c.json_out) {
            json j = base_report("witness", c);
            j["poly"] = format_poly(f);
            j["identity_of_E"] = true;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << e.what() << "\n";
        }
        return 1;
    }
    if (c.json_out) {
        json j = base_report("witness", c);
        j["poly"] = format_poly(f);
        json subst = json::object();
        for (const auto& [var, val] : w.substitution) subst["x" + std::to_string(var)] = val.str();
        j["substitution"] = subst;
        j["value"] = w.value.str();
        j["chosen_J"] = w.chosen_j;
        j["generators"] = w.generators;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [var, val] : w.substitution)
            std::cout << "x" << var << " <- " << val.str() << "\n";
        std::cout << "value: " << w.value.str() << "\n";
    }
    return 0;
}

int cmd_epsilon(const Common& c, const std::string& decomp, const std::string& degrees_text,
                const std::string& perm_text) {
    RegularDecomposition d = builtin_decomposition(decomp);
    std::vector<int> degrees = parse_int_list(degrees_text);
    std::vector<int> perm1 = parse_int_list(perm_text);
    std::vector<int> sigma;
    for (int v : perm1) sigma.push_back(v - 1);  // CLI permutations are 1-based images
    Scalar eps = epsilon_sigma(d.theta, degrees, sigma);
    if (c.json_out) {
        json j = base_report("epsilon", c);
        j["decomposition"] = d.name;
        j["degrees"] = degrees;
        j["perm"] = perm1;
        j["epsilon"] = eps.str();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << eps.str() << "\n";
    }
    return 0;
}

int cmd_transform(const Common& c, const std::string& decomp, const std::string& poly_text,
                  const std::string& degrees_text) {
    RegularDecomposition d = builtin_decomposition(decomp);
    Poly f = parse_poly(poly_text);
    std::vector<int> degrees = parse_int_list(degrees_text);
    Poly fa = transform_f_a(f, d.theta, degrees);
    if (c.json_out) {
        json j = base_report("transform", c);
        j["decomposition"] = d.name;
        j["poly"] = format_poly(f);
        j["degrees"] = degrees;
        j["f_a"] = format_poly(fa);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << format_poly(fa) << "\n";
    }
    return 0;
}

int cmd_regular_verify(const Common& c, const std::string& decomp, const std::string& p1_text) {
    RegularDecomposition d = builtin_decomposition(decomp);
    P2Result p2 = verify_p2(d.algebra, d.components);
    bool theta_matches = p2.ok && p2.theta == d.theta;
    json j = base_report("regular-verify", c);
    j["decomposition"] = d.name;
    j["algebra"] = d.algebra->descriptor();
    j["components"] = d.component_count();
    if (!p2.ok) {
        if (c.json_out) {
            j["p2"] = "violation";
            j["pair"] = {p2.i, p2.j};
            j["detail"] = p2.message;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "P2 violation on components (" << p2.i << "," << p2.j
                      << "): " << p2.message << "\n";
            if (p2.x) std::cout << "x = " << p2.x->str() << "\n";
            if (p2.y) std::cout << "y = " << p2.y->str() << "\n";
        }
        return 1;
    }
    int rc = theta_matches ? 0 : 1;
    std::optional<P1Result> p1;
    if (!p1_text.empty()) {
        p1 = verify_p1(d, parse_int_list(p1_text));
        if (!p1->found && rc == 0) rc = 3;
    }
    if (c.json_out) {
        j["p2"] = "ok";
        j["theta"] = theta_json(p2.theta);
        j["theta_matches_builtin"] = theta_matches;
        if (!p2.undetermined.empty()) {
            json u = json::array();
            for (auto [i, jx] : p2.undetermined) u.push_back({i, jx});
            j["undetermined"] = u;
        }
        if (p1) {
            j["p1"] = p1->found ? "found" : "inconclusive";
            if (p1->found) {
                json ws = json::array();
                for (const auto& e : p1->witness) ws.push_back(e.str());
                j["p1_witness"] = ws;
                j["p1_product"] = p1->product->str();
            }
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "P2 holds; theta =\n" << theta_str(p2.theta);
        std::cout << (theta_matches ? "matches builtin matrix\n"
                                    : "DIFFERS from builtin matrix\n");
        for (auto [i, jx] : p2.undetermined)
            std::cout << "undetermined pair (" << i << "," << jx << ") defaulted to 1\n";
        if (p1) {
            if (p1->found) {
                std::cout << "P1 witness:";
                for (const auto& e : p1->witness) std::cout << "  " << e.str();
                std::cout << "\nproduct: " << p1->product->str() << "\n";
            } else {
                std::cout << "P1 inconclusive after exhausting basis tuples\n";
            }
        }
    }
    return rc;
}

int cmd_tensor_regular(const Common& c, const std::string& decomp_a,
                       const std::string& decomp_b) {
    RegularDecomposition da = builtin_decomposition(decomp_a);
    RegularDecomposition db = builtin_decomposition(decomp_b);
    RegularDecomposition d = tensor_decomposition(da, db);
    P2Result p2 = verify_p2(d.algebra, d.components);
    bool match = p2.ok && p2.theta == d.theta;
    if (c.json_out) {
        json j = base_report("tensor-regular", c);
        j["decomposition"] = d.name;
        j["algebra"] = d.algebra->descriptor();
        j["kronecker_theta"] = theta_json(d.theta);
        j["p2"] = p2.ok ? "ok" : "violation";
        j["kronecker_matches_inferred"] = match;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "tensor decomposition " << d.name << " over " << d.algebra->descriptor()
                  << "\nKronecker theta =\n"
                  << theta_str(d.theta)
                  << (match ? "verify_p2 reproduces the Kronecker matrix\n"
                            : "verify_p2 DISAGREES with the Kronecker matrix\n");
    }
    return match ? 0 : 1;
}

int cmd_primeness_scan(const Common& c, const std::string& algebra, int deg_f,
                       const std::string& g_text, const std::string& mode_text) {
    AlgebraPtr a = Algebra::build(algebra, c.dim_cap);
    Poly g = parse_poly(g_text);
    ScanMode mode = mode_text == "identity" ? ScanMode::Identity : ScanMode::Central;
    ScanReport rep = primeness_scan(a, deg_f, g, mode, scan_options(c));
    if (c.json_out) {
        json j = base_report("primeness-scan", c);
        j["algebra"] = rep.algebra;
        j["mode"] = mode == ScanMode::Central ? "central" : "identity";
        j["r"] = rep.r;
        j["g"] = rep.g_text;
        j["dimV"] = rep.dim_v;
        j["dimC"] = rep.dim_c;
        j["verdict"] = rep.contained ? "contained" : "counterexample";
        if (rep.counterexample) {
            j["counterexample"] = format_poly(*rep.counterexample);
            if (rep.counter_witness) j["counterexample_witness"] = assignment_str(*rep.counter_witness);
        }
        int s = rep.r + static_cast<int>(parse_poly(rep.g_text).variables().size());
        j["truncation"] = {{"note", rep.truncation_note},
                           {"n_default", 2 * s},
                           {"overridden", c.trunc_n.has_value()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "algebra " << rep.algebra << ", mode "
                  << (mode == ScanMode::Central ? "central" : "identity") << ", r = " << rep.r
                  << ", g = " << rep.g_text << "\n";
        std::cout << "dim V = " << rep.dim_v << ", dim C = " << rep.dim_c << "\n";
        std::cout << "verdict: " << (rep.contained ? "contained" : "counterexample") << "\n";
        if (rep.counterexample) {
            std::cout << "f = " << format_poly(*rep.counterexample) << "\n";
            if (rep.counter_witness)
                std::cout << "non-central at: " << assignment_str(*rep.counter_witness) << "\n";
        }
        std::cout << "note: " << rep.truncation_note << "\n";
    }
    return rep.contained ? 0 : 1;
}

int cmd_compare_identities(const Common& c, const std::string& algebra_a,
                           const std::string& algebra_b, int m) {
    AlgebraPtr a = Algebra::build(algebra_a, c.dim_cap);
    AlgebraPtr b = Algebra::build(algebra_b, c.dim_cap);
    CompareReport rep = compare_identity_spaces(a, b, m, scan_options(c));
    if (c.json_out) {
        json j = base_report("compare-identities", c);
        j["algebra_a"] = a->descriptor();
        j["algebra_b"] = b->descriptor();
        j["degree"] = m;
        j["equal"] = rep.equal;
        if (!rep.equal) {
            j["separating"] = format_poly(*rep.separating);
            j["identity_of"] = rep.identity_of;
            j["not_identity_of"] = rep.not_identity_of;
            j["counterexample"] = assignment_str(*rep.counterexample);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        if (rep.equal) {
            std::cout << "equal: multilinear identity spaces of " << a->descriptor() << " and "
                      << b->descriptor() << " coincide in degree " << m << "\n";
        } else {
            std::cout << "differ: " << format_poly(*rep.separating) << " is an identity of "
                      << rep.identity_of << " but not of " << rep.not_identity_of << "\n";
            std::cout << "counterexample: " << assignment_str(*rep.counterexample) << "\n";
        }
    }
    return rep.equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact scans for polynomial identities, central polynomials and regular "
                 "decompositions over Grassmann and matrix algebras"};
    app.require_subcommand(1);

    Common c;
    std::string algebra, algebra_b, poly_text, g_text, decomp, decomp_b, degrees_text, perm_text,
        p1_text, mode_text = "central";
    int deg_f = 2, m = 2;

    auto* ci = app.add_subcommand("check-identity", "is the polynomial an identity?");
    ci->add_option("--algebra", algebra, "algebra descriptor (default: E(2*deg))");
    ci->add_option("--poly", poly_text, "polynomial")->required();
    add_common(ci, c);

    auto* cc = app.add_subcommand("check-central", "classify: identity / proper-central / non-central");
    cc->add_option("--algebra", algebra, "algebra descriptor (default: E(2*deg))");
    cc->add_option("--poly", poly_text, "polynomial")->required();
    add_common(cc, c);

    auto* cn = app.add_subcommand("canon", "canonical form modulo [x1,x2,x3]");
    cn->add_option("--poly", poly_text, "multilinear polynomial in x1..xm")->required();
    add_common(cn, c);

    auto* wt = app.add_subcommand("witness", "central nonzero Grassmann value of a non-identity");
    wt->add_option("--poly", poly_text, "multilinear polynomial in x1..xm")->required();
    add_common(wt, c);

    auto* ep = app.add_subcommand("epsilon", "epsilon_sigma for a degree sequence");
    ep->add_option("--decomp", decomp, "decomposition: grassmann(n)|matk(k)|m11e(n)|tensor(..)")
        ->required();
    ep->add_option("--degrees", degrees_text, "0-based component indices, e.g. \"1 1 0\"")
        ->required();
    ep->add_option("--perm", perm_text, "permutation images, 1-based, e.g. \"2 1 3\"")->required();
    add_common(ep, c);

    auto* tr = app.add_subcommand("transform", "the f_a transform of a multilinear polynomial");
    tr->add_option("--decomp", decomp, "decomposition name")->required();
    tr->add_option("--poly", poly_text, "multilinear polynomial in x1..xn")->required();
    tr->add_option("--degrees", degrees_text, "0-based component indices")->required();
    add_common(tr, c);

    auto* rv = app.add_subcommand("regular-verify", "verify P2 (and optionally P1) of a builtin");
    rv->add_option("--decomp", decomp, "decomposition name")->required();
    rv->add_option("--p1", p1_text, "component sequence for a P1 search, e.g. \"1 1 1\"");
    add_common(rv, c);

    auto* tg = app.add_subcommand("tensor-regular",
                                  "tensor two decompositions and check the Kronecker matrix");
    tg->add_option("--decomp-a", decomp, "left decomposition")->required();
    tg->add_option("--decomp-b", decomp_b, "right decomposition")->required();
    add_common(tg, c);

    auto* ps = app.add_subcommand("primeness-scan",
                                  "is {f : f*g central} contained in the central polynomials?");
    ps->add_option("--algebra", algebra, "algebra descriptor")->required();
    ps->add_option("--deg-f", deg_f, "degree r of the f side")->required();
    ps->add_option("--g", g_text, "multilinear g in variables beyond x_r")->required();
    ps->add_option("--mode", mode_text, "central (default) or identity")
        ->check(CLI::IsMember({"central", "identity"}));
    add_common(ps, c);

    auto* cp = app.add_subcommand("compare-identities",
                                  "compare multilinear identity spaces of two algebras");
    cp->add_option("--algebra", algebra, "first algebra")->required();
    cp->add_option("--algebra-b", algebra_b, "second algebra")->required();
    cp->add_option("--m", m, "multilinear degree")->required();
    add_common(cp, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (ci->parsed()) return cmd_check_identity(c, algebra, poly_text);
        if (cc->parsed()) return cmd_check_central(c, algebra, poly_text);
        if (cn->parsed()) return cmd_canon(c, poly_text);
        if (wt->parsed()) return cmd_witness(c, poly_text);
        if (ep->parsed()) return cmd_epsilon(c, decomp, degrees_text, perm_text);
        if (tr->parsed()) return cmd_transform(c, decomp, poly_text, degrees_text);
        if (rv->parsed()) return cmd_regular_verify(c, decomp, p1_text);
        if (tg->parsed()) return cmd_tensor_regular(c, decomp, decomp_b);
        if (ps->parsed()) return cmd_primeness_scan(c, algebra, deg_f, g_text, mode_text);
        if (cp->parsed()) return cmd_compare_identities(c, algebra, algebra_b, m);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
