#include "doctest.h"
#include "qstack/ainfty.hpp"
#include "test_fixtures.hpp"

#include <functional>
#include <random>

using namespace qstack;

namespace {

// Seidel chart 1 Floer algebra: two triangle families of m2 products
StructureConstants seidel_system(const SymbolTablePtr& tab) {
    StructureConstants s;
    int O = s.add_object("S1", 0);
    std::vector<AGen> gens = {
        {"one", 0, 0, 0}, {"X", 1, 0, 0},  {"Y", 1, 0, 0},  {"W", 1, 0, 0},
        {"Xb", 2, 0, 0},  {"Yb", 2, 0, 0}, {"Wb", 2, 0, 0}, {"pt", 3, 0, 0}};
    int p = s.add_pair(O, O, gens);
    s.set_unit(O, {{0, {p, 0}}});
    auto d = fixtures::defines(*tab);
    auto add = [&](const char* a, const char* b, const char* coeff, const char* out) {
        s.add_constant({s.gen_ref(O, O, a), s.gen_ref(O, O, b)},
                       parse_scalar(coeff, *tab, &d), s.gen_ref(O, O, out));
    };
    // pink triangle (area A1 + A3' = A1 + 2h), orange triangle (area A1' = A1 - h)
    add("X", "Y", "-1 T^(A1 + 2*hbar)", "Wb");
    add("Y", "W", "-1 T^(A1 + 2*hbar)", "Xb");
    add("W", "X", "-1 T^(A1 + 2*hbar)", "Yb");
    add("Y", "X", "T^(A1 - hbar)", "Wb");
    add("W", "Y", "T^(A1 - hbar)", "Xb");
    add("X", "W", "T^(A1 - hbar)", "Yb");
    return s;
}

// middle Lagrangian system: m2 products encoding the Phi0 cyclic structure
StructureConstants middle_system(const SymbolTablePtr& tab) {
    StructureConstants s;
    int O = s.add_object("L", 0);
    std::vector<AGen> gens;
    gens.push_back({"one1", 0, 0, 0});
    gens.push_back({"one2", 0, 1, 1});
    gens.push_back({"one3", 0, 2, 2});
    // degree-1 generators A_i, B_i, C_i typed like the arrows a_i, b_i, c_i
    auto q = fixtures::kp2_quiver();
    for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"}) {
        const Arrow& ar = q->arrow_info(q->arrow(n));
        gens.push_back({std::string("G_") + n, 1, ar.tail, ar.head});
    }
    // degree-2 duals, reverse typing
    for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"}) {
        const Arrow& ar = q->arrow_info(q->arrow(n));
        gens.push_back({std::string("D_") + n, 2, ar.head, ar.tail});
    }
    int p = s.add_pair(O, O, gens);
    s.set_unit(O, {{0, {p, 0}}, {1, {p, 1}}, {2, {p, 2}}});
    auto d = fixtures::defines(*tab);
    auto add = [&](const std::string& a, const std::string& b, const char* coeff,
                   const std::string& out) {
        s.add_constant({s.gen_ref(O, O, a), s.gen_ref(O, O, b)},
                       parse_scalar(coeff, *tab, &d), s.gen_ref(O, O, out));
    };
    // from Phi0 = -T^h (b1c3a2 + a1b3c2 + c1a3b2) + (c1b3a2 + b1a3c2 + a1c3b2):
    // each term q*[x y z] contributes m2(Z, Y) = q D_x etc. per cyclic reading
    struct Term { const char* x; const char* y; const char* z; const char* c; };
    std::vector<Term> terms = {
        {"b1", "c3", "a2", "-1 T^(hbar)"}, {"a1", "b3", "c2", "-1 T^(hbar)"},
        {"c1", "a3", "b2", "-1 T^(hbar)"}, {"c1", "b3", "a2", "1"},
        {"b1", "a3", "c2", "1"},           {"a1", "c3", "b2", "1"}};
    for (const auto& t : terms) {
        add(std::string("G_") + t.z, std::string("G_") + t.y, t.c, std::string("D_") + t.x);
        add(std::string("G_") + t.x, std::string("G_") + t.z, t.c, std::string("D_") + t.y);
        add(std::string("G_") + t.y, std::string("G_") + t.x, t.c, std::string("D_") + t.z);
    }
    return s;
}

// brute-force word enumeration comparing normal forms of two presentations
bool same_nf_behavior(const Presentation& a, const Presentation& b, size_t max_len) {
    const Quiver& q = *a.quiver();
    std::vector<PathWord> words;
    std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& w) {
        if (!w.empty()) words.push_back(PathWord::of(w));
        if (w.size() == max_len) return;
        for (int ar = 0; ar < (int)q.num_arrows(); ++ar) {
            if (!w.empty() && q.arrow_info(w.back()).tail != q.arrow_info(ar).head) continue;
            w.push_back(ar);
            rec(w);
            w.pop_back();
        }
    };
    std::vector<int> w;
    rec(w);
    for (const auto& pw : words) {
        Element x(a.quiver(), Scalar::one(), pw);
        Element na = normal_form(a, x);
        Element nb = transplant_element(
            normal_form(b, transplant_element(x, b.quiver())), a.quiver());
        // equality of residue classes: both reduce the difference to zero
        if (normal_form(a, na - nb) != Element(a.quiver()) &&
            !normal_form(a, na - nb).is_zero())
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("dg systems satisfy the Stasheff identities; m1^2 != 0 is caught") {
    auto tab = fixtures::symbols();
    {
        StructureConstants s = seidel_system(tab);
        CHECK(ainfty_check(s, 3).empty());
    }
    {
        StructureConstants s;
        int O = s.add_object("bad", 0);
        int p = s.add_pair(O, O, {{"a", 1, 0, 0}, {"b", 2, 0, 0}, {"c", 3, 0, 0}});
        s.add_constant({GenRef{p, 0}}, Scalar::one(), GenRef{p, 1});
        s.add_constant({GenRef{p, 1}}, Scalar::one(), GenRef{p, 2});
        auto v = ainfty_check(s, 2);
        REQUIRE(!v.empty());
        CHECK(v[0].tuple.size() == 1);
    }
}

TEST_CASE("synthetic system with one m3 balancing the associator defect") {
    // gens x (1), u (2), h (2), w (3) with m2(x,x) = u, m2(u,x) = m2(x,u) = w,
    // m3(x,x,x) = h and m1(h) = -2w; solved against the n=3 identity by hand
    auto tab = fixtures::symbols();
    StructureConstants s;
    int U = s.add_object("U", 0);
    s.add_object("V", 0);
    int p = s.add_pair(U, U, {{"x", 1, 0, 0}, {"u", 2, 0, 0}, {"h", 2, 0, 0}, {"w", 3, 0, 0}});
    auto g = [&](int i) { return GenRef{p, i}; };
    s.add_constant({g(0), g(0)}, Scalar::one(), g(1));
    s.add_constant({g(1), g(0)}, Scalar::one(), g(3));
    s.add_constant({g(0), g(1)}, Scalar::one(), g(3));
    s.add_constant({g(0), g(0), g(0)}, Scalar::one(), g(2));
    s.add_constant({g(2)}, Scalar(Rational(-2)), g(3));
    CHECK(ainfty_check(s, 4).empty());

    // flipping the homotopy sign breaks it
    StructureConstants s2;
    int U2 = s2.add_object("U", 0);
    int p2 = s2.add_pair(U2, U2,
                         {{"x", 1, 0, 0}, {"u", 2, 0, 0}, {"h", 2, 0, 0}, {"w", 3, 0, 0}});
    auto g2 = [&](int i) { return GenRef{p2, i}; };
    s2.add_constant({g2(0), g2(0)}, Scalar::one(), g2(1));
    s2.add_constant({g2(1), g2(0)}, Scalar::one(), g2(3));
    s2.add_constant({g2(0), g2(1)}, Scalar::one(), g2(3));
    s2.add_constant({g2(0), g2(0), g2(0)}, Scalar::one(), g2(2));
    s2.add_constant({g2(2)}, Scalar(Rational(2)), g2(3));
    CHECK(!ainfty_check(s2, 4).empty());
}

TEST_CASE("deform: b = 0 is the identity; N = 1 truncation expands m1^b") {
    auto tab = fixtures::symbols();
    StructureConstants s = seidel_system(tab);
    auto q1 = fixtures::seidel_quiver(1);
    int O = s.object("S1");

    Deformation zero;
    auto t0 = deform(s, zero, 4);
    size_t base_entries = 0, def_entries = 0;
    for (const auto& [k, v] : s.tables()) base_entries += v.size();
    for (const auto& [k, v] : t0) def_entries += v.size();
    CHECK(base_entries == def_entries);

    Deformation b;
    b.truncation = 1;
    b.by_object[O] = {{q1->arrow("x1"), s.gen_ref(O, O, "X")},
                      {q1->arrow("y1"), s.gen_ref(O, O, "Y")},
                      {q1->arrow("w1"), s.gen_ref(O, O, "W")}};
    auto t1 = deform(s, b, 4);
    // m1^b on X = m2(b, X) + m2(X, b) contributions (no base m1 here)
    std::vector<GenRef> key{s.gen_ref(O, O, "X")};
    auto it = t1.find(key);
    REQUIRE(it != t1.end());
    // from m2(Y,X) and m2(X,Y): insertion words y1 and x1... plus (W,X),(X,W)
    CHECK(it->second.size() == 4);
    for (const auto& e : it->second) {
        CHECK(e.word.size() == 2);
        CHECK((e.word[0].is_marker || e.word[1].is_marker));
    }
}

TEST_CASE("obstruction ideal of the Seidel system matches jacobi(Phi1)") {
    auto tab = fixtures::symbols();
    auto d = fixtures::defines(*tab);
    StructureConstants s = seidel_system(tab);
    int O = s.object("S1");
    auto q1 = fixtures::seidel_quiver(1);
    auto free1 = std::make_shared<Presentation>("free1", q1, tab,
                                                TermOrder(*q1, fixtures::seidel_precedence(1)));

    Deformation b;
    b.truncation = 4;
    b.by_object[O] = {{q1->arrow("x1"), s.gen_ref(O, O, "X")},
                      {q1->arrow("y1"), s.gen_ref(O, O, "Y")},
                      {q1->arrow("w1"), s.gen_ref(O, O, "W")}};
    auto obs = obstruction_ideal(s, b, free1);
    REQUIRE(obs.size() == 3);

    // orient the obstruction coefficients into a presentation
    Presentation obs_pres("obs", q1, tab, TermOrder(*q1, fixtures::seidel_precedence(1)));
    for (auto& [g, el] : obs) {
        const auto& terms = el.terms();
        size_t lead = 0;
        for (size_t i = 1; i < terms.size(); ++i)
            if (obs_pres.order().less(terms[lead].second, terms[i].second)) lead = i;
        Scalar inv = terms[lead].first.invert_monomial();
        Element rhs(q1);
        for (size_t i = 0; i < terms.size(); ++i)
            if (i != lead) rhs.add_term(-(terms[i].first * inv), terms[i].second);
        obs_pres.add_rule(terms[lead].second, rhs);
    }
    auto jac = fixtures::chart_seidel(1, tab);
    CHECK(same_nf_behavior(obs_pres, *jac, 4));
    CHECK(same_nf_behavior(*jac, obs_pres, 4));
    // spot check the named relation
    CHECK(normal_form(obs_pres, parse_element("y1 x1 - T^(-3*hbar) x1 y1", q1, *tab, &d))
              .is_zero());
}

TEST_CASE("obstruction ideal of the middle system matches jacobi(Phi0)") {
    auto tab = fixtures::symbols();
    auto d = fixtures::defines(*tab);
    StructureConstants s = middle_system(tab);
    int O = s.object("L");
    auto q0 = fixtures::kp2_quiver();
    auto free0 = std::make_shared<Presentation>("free0", q0, tab,
                                                TermOrder(*q0, fixtures::kp2_precedence()));

    Deformation b;
    b.truncation = 4;
    std::vector<Deformation::Part> parts;
    for (const char* n : {"a1", "b1", "c1", "a2", "b2", "c2", "a3", "b3", "c3"})
        parts.push_back({q0->arrow(n), s.gen_ref(O, O, std::string("G_") + n)});
    b.by_object[O] = parts;
    auto obs = obstruction_ideal(s, b, free0);
    CHECK(obs.size() == 9);

    Presentation obs_pres("obs0", q0, tab, TermOrder(*q0, fixtures::kp2_precedence()));
    for (auto& [g, el] : obs) {
        const auto& terms = el.terms();
        size_t lead = 0;
        for (size_t i = 1; i < terms.size(); ++i)
            if (obs_pres.order().less(terms[lead].second, terms[i].second)) lead = i;
        Scalar inv = terms[lead].first.invert_monomial();
        Element rhs(q0);
        for (size_t i = 0; i < terms.size(); ++i)
            if (i != lead) rhs.add_term(-(terms[i].first * inv), terms[i].second);
        obs_pres.add_rule(terms[lead].second, rhs);
    }
    auto jac = fixtures::chart_A0(tab);
    CHECK(same_nf_behavior(obs_pres, *jac, 4));
    CHECK(same_nf_behavior(*jac, obs_pres, 4));
    CHECK(normal_form(obs_pres, parse_element("b2 a1 - T^(hbar) a2 b1", q0, *tab, &d))
              .is_zero());
}

TEST_CASE("unobstructed system has empty obstruction ideal") {
    auto tab = fixtures::symbols();
    StructureConstants s;
    int O = s.add_object("A", 0);
    int p = s.add_pair(O, O, {{"one", 0, 0, 0}, {"X", 1, 0, 0}});
    s.set_unit(O, {{0, {p, 0}}});
    // m2(X, X) = W(A,b) * unit: weak Maurer-Cartan with unit-valued obstruction
    s.add_constant({GenRef{p, 1}, GenRef{p, 1}}, Scalar::one(), GenRef{p, 0});
    auto q = std::make_shared<Quiver>(
        std::vector<std::string>{"s"},
        std::vector<std::tuple<std::string, std::string, std::string>>{{"x", "s", "s"}});
    auto free_p = std::make_shared<Presentation>("f", q, tab, TermOrder(*q, {"x"}));
    Deformation b;
    b.truncation = 4;
    b.by_object[O] = {{q->arrow("x"), GenRef{p, 1}}};
    CHECK(obstruction_ideal(s, b, free_p).empty());
}

TEST_CASE("KP2 gluing: the isomorphism equations hold for all three pairs") {
    auto g = fixtures::kp2_gluing();
    ExtendedEval ev(*g.sys, g.st.yhat, g.b, 4);
    auto issues = gluing_check(ev, g.alpha, 3);
    for (const auto& it : issues) {
        INFO(it.what);
        CHECK(it.residual.terms.empty());
    }
    CHECK(issues.empty());

    // the products hit the exact units
    for (int i = 1; i <= 3; ++i) {
        ExtElement m2 = ev.eval({g.alpha.at({g.L, g.S[i]}), g.alpha.at({g.S[i], g.L})});
        CHECK(ev.equal(m2, ev.unit_element(g.L)));
        ExtElement m2r = ev.eval({g.alpha.at({g.S[i], g.L}), g.alpha.at({g.L, g.S[i]})});
        CHECK(ev.equal(m2r, ev.unit_element(g.S[i])));
    }
}

TEST_CASE("KP2 gluing negative control: perturbing beta_3 fails with a residual") {
    auto g = fixtures::kp2_gluing();
    ExtendedEval ev(*g.sys, g.st.yhat, g.b, 4);
    auto& bt = g.alpha.at({g.S[3], g.L});
    auto tab = g.st.charts.tab;
    auto& d = g.st.charts.defs;
    bt.terms[0].coeff = bt.terms[0].coeff.scaled(parse_scalar("T^(hbar)", *tab, &d));
    auto issues = gluing_check(ev, g.alpha, 2);
    CHECK(!issues.empty());
}

namespace {

// dg category with a genuine d(m2)-vs-m2(d) cancellation: every pair carries
// x (deg 0) and dx (deg 1) with m1(x) = dx, strictly associative products
// m2(x, x') = x'', and the companion m2(dx, x') = -dx'' forced by the n = 2
// Stasheff identity (the (-1)^{|x|'} term vanishes since m2(x, dx') = 0)
StructureConstants nilpotent_system(const std::shared_ptr<QuiverStack>& st, int nobj) {
    StructureConstants s;
    for (int i = 0; i < nobj; ++i) s.add_object("O" + std::to_string(i), i % st->num_charts());
    for (int i = 0; i < nobj; ++i)
        for (int j = 0; j < nobj; ++j)
            s.add_pair(i, j, {{"x", 0, 0, 0}, {"dx", 1, 0, 0}});
    for (int i = 0; i < nobj; ++i)
        for (int j = 0; j < nobj; ++j) {
            int p = s.find_pair(i, j);
            s.add_constant({GenRef{p, 0}}, Scalar::one(), GenRef{p, 1});
        }
    for (int i = 0; i < nobj; ++i)
        for (int j = 0; j < nobj; ++j)
            for (int k = 0; k < nobj; ++k) {
                int pij = s.find_pair(i, j), pjk = s.find_pair(j, k), pik = s.find_pair(i, k);
                s.add_constant({GenRef{pij, 0}, GenRef{pjk, 0}}, Scalar::one(),
                               GenRef{pik, 0});
                s.add_constant({GenRef{pij, 1}, GenRef{pjk, 0}}, Scalar(Rational(-1)),
                               GenRef{pik, 1});
            }
    return s;
}

ExtElement rand_ext(std::mt19937& rng, const ExtendedEval& ev, int from, int to) {
    const StructureConstants& s = ev.constants();
    ExtElement e;
    e.from_obj = from;
    e.to_obj = to;
    int chart = s.object_chart(from);
    auto q = ev.stack()->presentation_at(chart, {chart})->quiver();
    int pi = s.find_pair(from, to);
    int g = (int)(rng() % s.gens(pi).size());
    std::vector<int> w;
    int len = (int)(rng() % 3);
    for (int i = 0; i < len; ++i) w.push_back((int)(rng() % q->num_arrows()));
    Element coeff(q, Scalar(Rational(1 + (int)(rng() % 2))),
                  w.empty() ? PathWord::trivial(0) : PathWord::of(std::move(w)));
    e.terms.push_back({coeff, Element(), GenRef{pi, g}});
    return e;
}

std::shared_ptr<QuiverStack> conj_stack2(const SymbolTablePtr& tab, int ncharts) {
    auto st = std::make_shared<QuiverStack>();
    std::vector<std::shared_ptr<Presentation>> charts;
    for (int i = 0; i < ncharts; ++i) {
        auto q = std::make_shared<Quiver>(
            std::vector<std::string>{"pt"},
            std::vector<std::tuple<std::string, std::string, std::string>>{
                {"u", "pt", "pt"}, {"v", "pt", "pt"}});
        auto p = std::make_shared<Presentation>("C" + std::to_string(i), q, tab,
                                                TermOrder(*q, {"u", "v"}));
        p->add_rule(parse_path("v u", *q), Element(q, Scalar::one(), parse_path("u v", *q)));
        charts.push_back(p);
        st->add_chart("C" + std::to_string(i), p);
    }
    for (int i = 0; i < ncharts; ++i)
        for (int j = 0; j < ncharts; ++j) {
            if (i == j) continue;
            st->set_pair_localization(i, j, {"u"});
            QuiverStack::TransitionSpec spec;
            spec.vertex_map["pt"] = "pt";
            spec.arrow_map["u"] = "u";
            spec.arrow_map["v"] = "v";
            st->set_transition(i, j, spec);
        }
    for (int i = 0; i < ncharts; ++i) {
        auto plain = localize(*charts[i], {charts[i]->quiver()->arrow("u")}, {});
        std::vector<std::pair<std::string, std::string>> text;
        for (const auto& r : complete_rules(*plain, 6, 8))
            text.push_back({r.lhs.str(*plain->quiver()), r.rhs.str(*charts[i]->symbols())});
        st->add_aux_rules(i, {"u"}, text);
    }
    for (int i = 0; i < ncharts; ++i)
        for (int j = 0; j < ncharts; ++j)
            if (i != j) st->set_gerbe(i, j, i, "pt", "u", "u^-1");
    return st;
}

} // namespace

TEST_CASE("extension preserves the Stasheff identities over synthetic stacks") {
    auto tab = fixtures::symbols();
    std::mt19937 rng(8080);
    int runs = 0;
    for (int ncharts : {2, 3}) {
        auto st = conj_stack2(tab, ncharts);
        StructureConstants s = nilpotent_system(st, ncharts);
        REQUIRE(ainfty_check(s, 4).empty());
        ExtendedEval ev(s, st, Deformation{}, 5);
        while (runs < (ncharts == 2 ? 25 : 50)) {
            int n = 2 + (int)(rng() % 3);  // tuple length 2..4
            std::vector<int> objs{(int)(rng() % ncharts)};
            for (int i = 0; i < n; ++i) objs.push_back((int)(rng() % ncharts));
            std::vector<ExtElement> xs;
            for (int i = 0; i < n; ++i) xs.push_back(rand_ext(rng, ev, objs[i], objs[i + 1]));
            // Stasheff sum for the extended operations
            ExtElement total;
            total.from_obj = objs.front();
            total.to_obj = objs.back();
            for (int k2 = 1; k2 <= n; ++k2) {
                for (int i = 0; i + k2 <= n; ++i) {
                    long long eps = 0;
                    for (int j = 0; j < i; ++j) {
                        const auto& gg = ev.constants().gens(xs[j].terms[0].gen.pair);
                        eps += gg[xs[j].terms[0].gen.index].degree - 1;
                    }
                    std::vector<ExtElement> inner(xs.begin() + i, xs.begin() + i + k2);
                    ExtElement mid = ev.eval(inner);
                    if (mid.terms.empty()) continue;
                    std::vector<ExtElement> outer(xs.begin(), xs.begin() + i);
                    outer.push_back(mid);
                    outer.insert(outer.end(), xs.begin() + i + k2, xs.end());
                    ExtElement res = ev.eval(outer);
                    for (auto t : res.terms) {
                        if (eps % 2 != 0) t.coeff = -t.coeff;
                        total.terms.push_back(t);
                    }
                }
            }
            CHECK(ev.is_zero(total));
            ++runs;
        }
        runs = runs == 25 && ncharts == 2 ? 0 : runs;
    }
}

TEST_CASE("hat operations satisfy the mixed identities on op-coefficient dg data") {
    auto tab = fixtures::symbols();
    std::mt19937 rng(9090);
    auto st = conj_stack2(tab, 2);
    StructureConstants s = nilpotent_system(st, 2);
    ExtendedEval ev(s, st, Deformation{}, 5);
    auto opq = [&](int obj) {
        int chart = s.object_chart(obj);
        return st->presentation_at(chart, {chart})->quiver();
    };
    auto rand_bi = [&](int from, int to) {
        ExtElement e = rand_ext(rng, ev, from, to);
        auto q = opq(to);
        std::vector<int> w;
        int len = (int)(rng() % 2);
        for (int i = 0; i < len; ++i) w.push_back((int)(rng() % q->num_arrows()));
        e.terms[0].op_coeff = Element(q, Scalar::one(),
                                      w.empty() ? PathWord::trivial(0)
                                                : PathWord::of(std::move(w)));
        return e;
    };
    auto op_pres = st->presentation_at(0, {0, 1});
    for (int run = 0; run < 50; ++run) {
        int n = 2 + (int)(rng() % 2);
        std::vector<int> objs{(int)(rng() % 2)};
        for (int i = 0; i < n; ++i) objs.push_back((int)(rng() % 2));
        std::vector<ExtElement> xs;
        for (int i = 0; i < n; ++i) xs.push_back(rand_bi(objs[i], objs[i + 1]));
        // sum over 1 <= r <= s <= n of bar_hat(v_1..v_{r-1}, hat(v_r..v_s), ...)
        ExtElement total;
        total.from_obj = objs.front();
        total.to_obj = objs.back();
        for (int r = 1; r <= n; ++r) {
            for (int sidx = r; sidx <= n; ++sidx) {
                long long eps = 0;
                for (int j = 0; j < r - 1; ++j) {
                    const auto& gg = ev.constants().gens(xs[j].terms[0].gen.pair);
                    eps += gg[xs[j].terms[0].gen.index].degree - 1;
                }
                std::vector<ExtElement> inner(xs.begin() + r - 1, xs.begin() + sidx);
                ExtElement mid = ev.eval_hat(inner, false, op_pres);
                if (mid.terms.empty()) continue;
                std::vector<ExtElement> outer(xs.begin(), xs.begin() + r - 1);
                outer.push_back(mid);
                outer.insert(outer.end(), xs.begin() + sidx, xs.end());
                ExtElement res = ev.eval_hat(outer, true, op_pres);
                for (auto t : res.terms) {
                    if (eps % 2 != 0) t.coeff = -t.coeff;
                    total.terms.push_back(t);
                }
            }
        }
        CHECK(ev.is_zero(total));
    }
}

namespace {

// conj_stack2 without gerbes: transitions are identities, so alpha pairs that
// are strict inverses satisfy the gluing equations on the nose
std::shared_ptr<QuiverStack> plain_stack2(const SymbolTablePtr& tab, int ncharts) {
    auto st = conj_stack2(tab, ncharts);
    auto st2 = std::make_shared<QuiverStack>();
    std::vector<std::shared_ptr<Presentation>> charts;
    for (int i = 0; i < ncharts; ++i) {
        auto q = std::make_shared<Quiver>(
            std::vector<std::string>{"pt"},
            std::vector<std::tuple<std::string, std::string, std::string>>{
                {"u", "pt", "pt"}, {"v", "pt", "pt"}});
        auto p = std::make_shared<Presentation>("P" + std::to_string(i), q, tab,
                                                TermOrder(*q, {"u", "v"}));
        p->add_rule(parse_path("v u", *q), Element(q, Scalar::one(), parse_path("u v", *q)));
        charts.push_back(p);
        st2->add_chart("P" + std::to_string(i), p);
    }
    for (int i = 0; i < ncharts; ++i)
        for (int j = 0; j < ncharts; ++j) {
            if (i == j) continue;
            QuiverStack::TransitionSpec spec;
            spec.vertex_map["pt"] = "pt";
            spec.arrow_map["u"] = "u";
            spec.arrow_map["v"] = "v";
            st2->set_transition(i, j, spec);
        }
    return st2;
}

} // namespace

TEST_CASE("mirror functor objects pass mc_check when the gluing holds") {
    // synthetic: two charts, inverse isomorphism pair
    auto tab = fixtures::symbols();
    auto st = plain_stack2(tab, 2);
    StructureConstants s;
    int O0 = s.add_object("O0", 0);
    int O1 = s.add_object("O1", 1);
    int T = s.add_object("T", 0);
    int p00 = s.add_pair(O0, O0, {{"one", 0, 0, 0}});
    int p11 = s.add_pair(O1, O1, {{"one", 0, 0, 0}});
    s.set_unit(O0, {{0, {p00, 0}}});
    s.set_unit(O1, {{0, {p11, 0}}});
    int p01 = s.add_pair(O0, O1, {{"x", 0, 0, 0}});
    int p10 = s.add_pair(O1, O0, {{"y", 0, 0, 0}});
    int p0T = s.add_pair(O0, T, {{"t0", 0, 0, 0}, {"s0", 1, 0, 0}});
    int p1T = s.add_pair(O1, T, {{"t1", 0, 0, 0}, {"s1", 1, 0, 0}});
    // gluing products: m2(x, y) = one0, m2(y, x) = one1
    s.add_constant({GenRef{p01, 0}, GenRef{p10, 0}}, Scalar::one(), GenRef{p00, 0});
    s.add_constant({GenRef{p10, 0}, GenRef{p01, 0}}, Scalar::one(), GenRef{p11, 0});
    // module structure: per-chart differential and transitions
    s.add_constant({GenRef{p0T, 0}}, Scalar::one(), GenRef{p0T, 1});
    s.add_constant({GenRef{p1T, 0}}, Scalar::one(), GenRef{p1T, 1});
    s.add_constant({GenRef{p01, 0}, GenRef{p1T, 0}}, Scalar::one(), GenRef{p0T, 0});
    s.add_constant({GenRef{p01, 0}, GenRef{p1T, 1}}, Scalar::one(), GenRef{p0T, 1});
    s.add_constant({GenRef{p10, 0}, GenRef{p0T, 0}}, Scalar::one(), GenRef{p1T, 0});
    s.add_constant({GenRef{p10, 0}, GenRef{p0T, 1}}, Scalar::one(), GenRef{p1T, 1});
    ExtendedEval ev(s, st, Deformation{}, 5);
    std::map<std::pair<int, int>, ExtElement> alpha;
    {
        ExtElement a;
        a.from_obj = O0;
        a.to_obj = O1;
        auto q = st->presentation_at(0, {0})->quiver();
        a.terms.push_back({Element::unit_at(q, 0), Element(), GenRef{p01, 0}});
        alpha[{O0, O1}] = a;
        ExtElement b;
        b.from_obj = O1;
        b.to_obj = O0;
        auto q1 = st->presentation_at(1, {1})->quiver();
        b.terms.push_back({Element::unit_at(q1, 0), Element(), GenRef{p10, 0}});
        alpha[{O1, O0}] = b;
    }
    auto issues = gluing_check(ev, alpha, 3);
    REQUIRE(issues.empty());
    TwistedComplex f = mirror_functor_object(ev, alpha, T);
    auto mc = mc_check(f);
    for (const auto& item : mc) {
        INFO(item.src_label << " -> " << item.dst_label << " at tuple size "
                            << item.tuple.size());
        CHECK(item.residual.empty());
    }
    CHECK(mc.empty());
}

