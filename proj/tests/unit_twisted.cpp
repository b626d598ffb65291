#include "doctest.h"
#include "qstack/twisted.hpp"
#include "test_fixtures.hpp"

#include <random>

using namespace qstack;

namespace {

// commutative u,v chart with u inverted; gerbe words u are central, so the
// conjugation cocycle holds while the gerbe machinery stays nontrivial
std::shared_ptr<QuiverStack> conj_stack(const SymbolTablePtr& tab, int ncharts) {
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
    // aux rules for the localization: v u^-1 -> u^-1 v
    for (int i = 0; i < ncharts; ++i) {
        auto plain = localize(*charts[i], {charts[i]->quiver()->arrow("u")}, {});
        std::vector<std::pair<std::string, std::string>> text;
        for (const auto& r : complete_rules(*plain, 6, 8))
            text.push_back({r.lhs.str(*plain->quiver()), r.rhs.str(*charts[i]->symbols())});
        st->add_aux_rules(i, {"u"}, text);
    }
    // gerbes c_{iji}(pt) = u for i != j; all others default to units
    for (int i = 0; i < ncharts; ++i)
        for (int j = 0; j < ncharts; ++j) {
            if (i == j) continue;
            st->set_gerbe(i, j, i, "pt", "u", "u^-1");
        }
    return st;
}

TwistedComplex make_tc(const std::shared_ptr<QuiverStack>& st, int gens_per_chart,
                       std::mt19937& rng, bool with_mc = false) {
    TwistedComplex tc;
    tc.stack = st;
    for (int c = 0; c < st->num_charts(); ++c) {
        std::vector<ModuleGen> gens;
        for (int g = 0; g < gens_per_chart; ++g)
            gens.push_back({0, g, "g" + std::to_string(g), -1});
        tc.module.set_generators(c, gens);
    }
    (void)rng;
    (void)with_mc;
    return tc;
}

PathWord rand_word(std::mt19937& rng, const Quiver& q, int maxlen) {
    int n = (int)(rng() % (maxlen + 1));
    if (n == 0) return PathWord::trivial(0);
    std::vector<int> w;
    for (int i = 0; i < n; ++i) w.push_back((int)(rng() % 2));  // u or v, both loops
    return PathWord::of(std::move(w));
}

// random spec-form cell (right/post only, intertwining by construction)
MorphismCell rand_cell(std::mt19937& rng, const TwistedComplex& tc,
                       const std::vector<int>& tuple, int nsrc, int ndst) {
    MorphismCell cell(tuple);
    auto srcq = tc.stack->presentation_at(tuple.back(), tuple)->quiver();
    auto dstq = tc.stack->presentation_at(tuple.front(), tuple)->quiver();
    for (int s = 0; s < nsrc; ++s)
        for (int d = 0; d < ndst; ++d) {
            if (rng() % 3 == 0) continue;
            SandwichTerm t;
            t.coeff = Scalar(Rational(1 + (int)(rng() % 3)));
            t.right = rand_word(rng, *srcq, 2);
            t.post = rand_word(rng, *dstq, 2);
            cell.add_term(s, d, std::move(t));
        }
    return cell;
}

bool cells_equal(const TwistedComplex& src, const TwistedComplex& dst, const MorphismCell& a,
                 const MorphismCell& b) {
    MorphismCell na = normalize_cell(src, dst, a);
    MorphismCell nb = normalize_cell(src, dst, b);
    if (na.entries().size() != nb.entries().size()) return false;
    for (const auto& [key, terms] : na.entries()) {
        auto it = nb.entries().find(key);
        if (it == nb.entries().end()) return false;
        auto ta = terms;
        auto tb = it->second;
        if (ta.size() != tb.size()) return false;
        for (size_t i = 0; i < ta.size(); ++i)
            if (!(ta[i].same_words(tb[i]) && ta[i].coeff == tb[i].coeff)) return false;
    }
    return true;
}

bool cochains_equal(const TwistedComplex& src, const TwistedComplex& dst, const Cochain& a,
                    const Cochain& b) {
    std::set<std::vector<int>> tuples;
    for (const auto& [t, c] : a.cells()) tuples.insert(t);
    for (const auto& [t, c] : b.cells()) tuples.insert(t);
    for (const auto& t : tuples) {
        MorphismCell ea = a.cell_at(t) ? *a.cell_at(t) : MorphismCell(t);
        MorphismCell eb = b.cell_at(t) ? *b.cell_at(t) : MorphismCell(t);
        if (!cells_equal(src, dst, ea, eb)) return false;
    }
    return true;
}

// independent module-vector comparison used by the apply-law tests
bool vectors_equal(const TwistedComplex& tc, const ModuleVector& a, const ModuleVector& b,
                   PresentationPtr pres = nullptr) {
    if (a.chart != b.chart) return false;
    if (!pres) pres = tc.stack->presentation_at(a.chart, {a.chart});
    std::map<int, Element> ea, eb;
    for (const auto& t : a.terms) {
        Element cur = ea.count(t.gen) ? ea[t.gen] : Element(pres->quiver());
        ea[t.gen] = cur + transplant_element(t.chart_part, pres->quiver());
    }
    for (const auto& t : b.terms) {
        Element cur = eb.count(t.gen) ? eb[t.gen] : Element(pres->quiver());
        eb[t.gen] = cur + transplant_element(t.chart_part, pres->quiver());
    }
    for (auto& [g, e] : ea) {
        Element d = normal_form(*pres, e - (eb.count(g) ? eb[g] : Element(pres->quiver())));
        if (!d.is_zero()) return false;
    }
    for (auto& [g, e] : eb)
        if (!ea.count(g) && !normal_form(*pres, e).is_zero()) return false;
    return true;
}

} // namespace

TEST_CASE("cech differential: 1-cochain rule and d^2 = 0") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 4);
    std::mt19937 rng(17);
    TwistedComplex tc = make_tc(st, 2, rng);

    // (cech u)_{i0 i1 i2} = -u_{i0 i2} for a 1-cochain
    Cochain u;
    MorphismCell cell({0, 2});
    SandwichTerm t;
    t.coeff = Scalar(Rational(3));
    t.right = PathWord::of({1});
    cell.add_term(0, 1, t);
    u.set_cell(cell);
    Cochain du = cech_diff(tc, u);
    const MorphismCell* c012 = du.cell_at({0, 1, 2});
    REQUIRE(c012 != nullptr);
    MorphismCell expect({0, 1, 2});
    SandwichTerm tn = t;
    tn.coeff = -t.coeff;
    expect.add_term(0, 1, tn);
    CHECK(cells_equal(tc, tc, *c012, expect));

    // no exterior insertions: (cech u) at {1,0,2}-style tuples only via interior
    CHECK(du.cell_at({1, 0, 2}) == nullptr);

    for (int trial = 0; trial < 30; ++trial) {
        Cochain w;
        for (int n = 0; n < 3; ++n) {
            std::vector<int> tuple;
            int len = 1 + (int)(rng() % 2);
            int prev = -1;
            for (int i = 0; i < len; ++i) {
                int c;
                do { c = (int)(rng() % st->num_charts()); } while (c == prev);
                tuple.push_back(c);
                prev = c;
            }
            w.set_cell(rand_cell(rng, tc, tuple, 2, 2));
        }
        Cochain dw = cech_diff(tc, w);
        Cochain ddw = cech_diff(tc, dw);
        for (const auto& [tuple, cell] : ddw.cells()) {
            MorphismCell n = normalize_cell(tc, tc, cell);
            CHECK(n.entries().empty());
        }
    }
}

TEST_CASE("cell_cup with an identity cell and trivial gerbe returns the other cell") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 2);
    std::mt19937 rng(5);
    TwistedComplex tc = make_tc(st, 2, rng);

    MorphismCell id01({0, 0});
    for (int g = 0; g < 2; ++g) {
        SandwichTerm t;
        t.coeff = Scalar::one();
        id01.add_term(g, g, t);
    }
    MorphismCell v = rand_cell(rng, tc, {0, 1}, 2, 2);
    // identity after v: tuple (0,0,1) has an adjacent repeat; use (0)-cell
    MorphismCell id0({0});
    for (int g = 0; g < 2; ++g) {
        SandwichTerm t;
        t.coeff = Scalar::one();
        id0.add_term(g, g, t);
    }
    MorphismCell cup1 = cell_cup(tc, tc, tc, id0, v);
    CHECK(cells_equal(tc, tc, cup1, v));
    MorphismCell id1({1});
    for (int g = 0; g < 2; ++g) {
        SandwichTerm t;
        t.coeff = Scalar::one();
        id1.add_term(g, g, t);
    }
    // composing with the identity on the source side folds the right-part
    // through G, so compare as maps on probe vectors
    MorphismCell cup2 = cell_cup(tc, tc, tc, v, id1);
    auto pres1 = st->presentation_at(1, {0, 1});
    std::mt19937 rng2(77);
    for (int probe = 0; probe < 10; ++probe) {
        Element x(pres1->quiver(), Scalar::one(), rand_word(rng2, *pres1->quiver(), 2));
        for (int g = 0; g < 2; ++g) {
            ModuleVector mx{1, {{g, x, Element()}}};
            CHECK(vectors_equal(tc, cell_apply(tc, tc, cup2, mx),
                                cell_apply(tc, tc, v, mx),
                                st->presentation_at(0, {0, 1})));
        }
    }
}

TEST_CASE("single-chart cup is matrix composition") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 1);
    std::mt19937 rng(8);
    TwistedComplex tc = make_tc(st, 3, rng);
    auto pres = st->presentation_at(0, {0});

    for (int trial = 0; trial < 25; ++trial) {
        MorphismCell a = rand_cell(rng, tc, {0}, 3, 3);
        MorphismCell b = rand_cell(rng, tc, {0}, 3, 3);
        MorphismCell ab = cell_cup(tc, tc, tc, a, b);
        // oracle: multiply entry polynomials directly (single chart, G = Id):
        // p |-> G(p Yb) Ab then G(. Ya) Aa gives right = Yb, post = Ab Ya Aa
        MorphismCell expect({0});
        for (const auto& [kb, tbs] : b.entries())
            for (const auto& [ka, tas] : a.entries()) {
                if (ka.first != kb.second) continue;
                for (const auto& tb : tbs)
                    for (const auto& ta : tas) {
                        Element post = Element::unit_at(pres->quiver(), 0);
                        if (!word_is_none(tb.post))
                            post = post * Element(pres->quiver(), Scalar::one(), tb.post);
                        if (!word_is_none(ta.right))
                            post = post * Element(pres->quiver(), Scalar::one(), ta.right);
                        if (!word_is_none(ta.post))
                            post = post * Element(pres->quiver(), Scalar::one(), ta.post);
                        post = normal_form(*pres, post);
                        for (const auto& [s, w] : post.terms()) {
                            SandwichTerm t;
                            t.coeff = ta.coeff * tb.coeff * s;
                            t.right = tb.right;
                            t.post = w;
                            expect.add_term(kb.first, ka.second, std::move(t));
                        }
                    }
            }
        CHECK(cells_equal(tc, tc, ab, expect));
    }
}

TEST_CASE("cochain product associativity over a gerbed two-chart stack") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 2);
    std::mt19937 rng(99);
    TwistedComplex tc = make_tc(st, 2, rng);

    int done = 0;
    while (done < 100) {
        auto rand_cochain = [&](int parts) {
            Cochain c;
            for (int n = 0; n < parts; ++n) {
                std::vector<int> tuple;
                int len = 1 + (int)(rng() % 2);
                int prev = -1;
                for (int i = 0; i < len; ++i) {
                    int ch;
                    do { ch = (int)(rng() % st->num_charts()); } while (ch == prev);
                    tuple.push_back(ch);
                    prev = ch;
                }
                c.set_cell(rand_cell(rng, tc, tuple, 2, 2));
            }
            return c;
        };
        Cochain u = rand_cochain(2), v = rand_cochain(2), w = rand_cochain(2);
        Cochain uv_w = cochain_product(tc, tc, tc, cochain_product(tc, tc, tc, u, v), w);
        Cochain u_vw = cochain_product(tc, tc, tc, u, cochain_product(tc, tc, tc, v, w));
        CHECK(cochains_equal(tc, tc, uv_w, u_vw));
        ++done;
    }
}

TEST_CASE("cup of intertwining cells satisfies the intertwining law") {
    // phi(h x) = G(h) phi(x) for spec-form cells, including across the
    // multi-vertex hub chart of the KP2 stack
    auto fs = fixtures::make_yhat();
    auto& st = *fs.yhat;
    int i0 = st.chart("A0"), i3 = st.chart("A3");
    std::mt19937 rng(2718);

    TwistedComplex tc;
    tc.stack = fs.yhat;
    tc.module.set_generators(i0, {{st.presentation_at(i0, {i0})->quiver()->vertex("v2"), 0,
                                   "m0", -1}});
    tc.module.set_generators(i3, {{0, 0, "m3", -1}});

    auto p3 = st.presentation_at(i3, {i0, i3});
    auto p0 = st.presentation_at(i0, {i0, i3});
    const QuiverRep& g03 = st.transition_at(i0, i3, {i0, i3});

    for (int trial = 0; trial < 40; ++trial) {
        // cell at (0,3): maps the chart-3 module to the chart-0 module
        MorphismCell cell({i0, i3});
        SandwichTerm t;
        t.coeff = Scalar::one();
        // right: word in chart 3; post: word in chart 0 from v2
        int rl = (int)(rng() % 3);
        if (rl) {
            std::vector<int> w;
            for (int i = 0; i < rl; ++i) w.push_back((int)(rng() % 3));
            t.right = PathWord::of(std::move(w));
        }
        t.post = PathWord::trivial(p0->quiver()->vertex("v2"));
        cell.add_term(0, 0, t);

        // random h in chart 3 and random x coefficient
        std::vector<int> hw{(int)(rng() % 3)};
        Element h = Element(p3->quiver(), Scalar::one(), PathWord::of(std::move(hw)));
        Element x = Element(p3->quiver(), Scalar::one(),
                            rng() % 2 ? PathWord::trivial(0)
                                      : PathWord::of({(int)(rng() % 3)}));

        ModuleVector mx{i3, {{0, x, Element()}}};
        ModuleVector mhx{i3, {{0, normal_form(*p3, h * x), Element()}}};
        ModuleVector lhs = cell_apply(tc, tc, cell, mhx);
        ModuleVector rhs_raw = cell_apply(tc, tc, cell, mx);
        ModuleVector rhs{i0, {}};
        for (const auto& tt : rhs_raw.terms)
            rhs.terms.push_back({tt.gen,
                                 normal_form(*p0, rep_apply(g03, h) *
                                                      transplant_element(tt.chart_part,
                                                                         p0->quiver())),
                                 tt.op_part});
        CHECK(vectors_equal(tc, lhs, rhs, p0));
    }
}

TEST_CASE("intertwining closure under cup on the gerbed stack") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 2);
    std::mt19937 rng(424242);
    TwistedComplex tc = make_tc(st, 2, rng);
    auto pres0 = st->presentation_at(0, {0, 1});
    const QuiverRep& g01 = st->transition_at(0, 1, {0, 1});

    for (int trial = 0; trial < 40; ++trial) {
        MorphismCell u = rand_cell(rng, tc, {0, 1}, 2, 2);
        MorphismCell v = rand_cell(rng, tc, {1, 0}, 2, 2);
        MorphismCell uv = cell_cup(tc, tc, tc, u, v);  // tuple (0,1,0)
        // law: uv(h x) = G_{00}(h) uv(x) = h uv(x) with G over the tuple (0,1,0)
        Element h = Element(pres0->quiver(), Scalar::one(),
                            rand_word(rng, *pres0->quiver(), 2));
        Element x = Element(pres0->quiver(), Scalar::one(),
                            rand_word(rng, *pres0->quiver(), 1));
        for (int g = 0; g < 2; ++g) {
            ModuleVector mx{0, {{g, x, Element()}}};
            ModuleVector mhx{0, {{g, normal_form(*pres0, h * x), Element()}}};
            ModuleVector lhs = cell_apply(tc, tc, uv, mhx);
            ModuleVector rhs_raw = cell_apply(tc, tc, uv, mx);
            ModuleVector rhs{0, {}};
            for (const auto& tt : rhs_raw.terms)
                rhs.terms.push_back({tt.gen,
                                     normal_form(*pres0,
                                                 h * transplant_element(tt.chart_part,
                                                                        pres0->quiver())),
                                     tt.op_part});
            CHECK(vectors_equal(tc, lhs, rhs, pres0));
        }
    }
}

TEST_CASE("graded Leibniz rule for the usual differential") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 2);
    std::mt19937 rng(31415);

    // dg module: gens g0 (deg 0), g1 (deg 1), g2 (deg 2) per chart with
    // commuting-variable Koszul differential u, v
    TwistedComplex tc;
    tc.stack = st;
    for (int c = 0; c < 2; ++c)
        tc.module.set_generators(c, {{0, 0, "k0", -1},
                                     {0, 1, "k1a", -1},
                                     {0, 1, "k1b", -1},
                                     {0, 2, "k2", -1}});
    for (int c = 0; c < 2; ++c) {
        MorphismCell a({c});
        auto add = [&](int s, int d, const char* w, int sign) {
            SandwichTerm t;
            t.coeff = Scalar(Rational(sign));
            t.post = parse_path(w, *st->presentation_at(c, {c})->quiver());
            a.add_term(s, d, std::move(t));
        };
        add(0, 1, "u", 1);
        add(0, 2, "v", 1);
        add(1, 3, "v", 1);
        add(2, 3, "u", -1);
        tc.mc.set_cell(a);
    }
    // d^2 = 0 cellwise
    for (const auto& item : mc_check(tc)) {
        INFO(item.src_label << " -> " << item.dst_label);
        CHECK(item.residual.empty());
    }

    for (int trial = 0; trial < 100; ++trial) {
        Cochain mu, nu;
        mu.set_cell(rand_cell(rng, tc, {0, 1}, 4, 4));
        nu.set_cell(rand_cell(rng, tc, {1, 0}, 4, 4));
        Cochain mu_nu = cochain_product(tc, tc, tc, mu, nu);
        Cochain d_all = hom_diff(tc, tc, mu_nu);

        Cochain dmu = hom_diff(tc, tc, mu);
        Cochain dnu = hom_diff(tc, tc, nu);
        Cochain lhs1 = cochain_product(tc, tc, tc, dmu, nu);
        // (-1)^{|mu|} mu . d nu: per-entry sign on mu
        Cochain mus;
        for (const auto& [t, cell] : mu.cells()) {
            MorphismCell sc(t);
            for (const auto& [key, terms] : cell.entries()) {
                int p = (int)t.size() - 1;
                int q = tc.module.generators(t.front()).at(key.second).degree -
                        tc.module.generators(t.back()).at(key.first).degree;
                int sign = ((p + q) % 2 == 0) ? 1 : -1;
                for (auto tt : terms) {
                    tt.coeff = tt.coeff * Scalar(Rational(sign));
                    sc.add_term(key.first, key.second, std::move(tt));
                }
            }
            mus.set_cell(sc);
        }
        Cochain lhs2 = cochain_product(tc, tc, tc, mus, dnu);
        // sum
        std::map<std::vector<int>, MorphismCell> acc;
        for (const Cochain* c : {&lhs1, &lhs2})
            for (const auto& [t, cell] : c->cells()) {
                auto it = acc.find(t);
                if (it == acc.end()) it = acc.emplace(t, MorphismCell(t)).first;
                for (const auto& [key, terms] : cell.entries())
                    for (const auto& tt : terms) it->second.add_term(key.first, key.second, tt);
            }
        Cochain rhs;
        for (auto& [t, cell] : acc) rhs.set_cell(cell);
        CHECK(cochains_equal(tc, tc, d_all, rhs));
    }
}

TEST_CASE("morphism_diff of the identity endomorphism vanishes") {
    auto tab = fixtures::symbols();
    auto st = conj_stack(tab, 2);
    std::mt19937 rng(161);
    TwistedComplex tc;
    tc.stack = st;
    for (int c = 0; c < 2; ++c)
        tc.module.set_generators(c, {{0, 0, "k0", -1},
                                     {0, 1, "k1a", -1},
                                     {0, 1, "k1b", -1},
                                     {0, 2, "k2", -1}});
    for (int c = 0; c < 2; ++c) {
        MorphismCell a({c});
        auto add = [&](int s, int d, const char* w, int sign) {
            SandwichTerm t;
            t.coeff = Scalar(Rational(sign));
            t.post = parse_path(w, *st->presentation_at(c, {c})->quiver());
            a.add_term(s, d, std::move(t));
        };
        add(0, 1, "u", 1);
        add(0, 2, "v", 1);
        add(1, 3, "v", 1);
        add(2, 3, "u", -1);
        tc.mc.set_cell(a);
    }

    Cochain id;
    for (int c = 0; c < 2; ++c) {
        MorphismCell cell({c});
        for (int g = 0; g < 4; ++g) {
            SandwichTerm t;
            t.coeff = Scalar::one();
            cell.add_term(g, g, t);
        }
        id.set_cell(cell);
    }
    Cochain d = morphism_diff(tc, tc, id);
    for (const auto& [t, cell] : d.cells()) {
        MorphismCell n = normalize_cell(tc, tc, cell);
        INFO("tuple size " << t.size());
        CHECK(n.entries().empty());
    }
}
