#include "qstack/twisted.hpp"

#include <algorithm>
#include <functional>

namespace qstack {

void GradedFreeModule::set_generators(int chart, std::vector<ModuleGen> gens) {
    gens_[chart] = std::move(gens);
}

const std::vector<ModuleGen>& GradedFreeModule::generators(int chart) const {
    auto it = gens_.find(chart);
    if (it == gens_.end()) throw Error("module has no generators over chart");
    return it->second;
}

int GradedFreeModule::find(int chart, const std::string& label) const {
    const auto& g = generators(chart);
    for (size_t i = 0; i < g.size(); ++i)
        if (g[i].label == label) return (int)i;
    return -1;
}

bool SandwichTerm::operator<(const SandwichTerm& o) const {
    auto key = [](const SandwichTerm& t) {
        return std::tie(t.right, t.post, t.left, t.op_left, t.op_right);
    };
    return key(*this) < key(o);
}

void MorphismCell::add_term(int src_gen, int dst_gen, SandwichTerm t) {
    if (t.coeff.is_zero()) return;
    entries_[{src_gen, dst_gen}].push_back(std::move(t));
}

MorphismCell MorphismCell::scaled(const Rational& r) const {
    MorphismCell out(tuple_);
    if (r.is_zero()) return out;
    for (const auto& [key, terms] : entries_)
        for (auto t : terms) {
            t.coeff = t.coeff * Scalar(r);
            out.add_term(key.first, key.second, std::move(t));
        }
    return out;
}

void Cochain::set_cell(MorphismCell cell) {
    cells_[cell.tuple()] = std::move(cell);
}

const MorphismCell* Cochain::cell_at(const std::vector<int>& tuple) const {
    auto it = cells_.find(tuple);
    return it == cells_.end() ? nullptr : &it->second;
}

namespace {

// a word factor as an element; none() factors act as the scalar 1
struct Factor {
    bool present = false;
    Element elem;
};

Factor as_factor(const PathWord& w, const PresentationPtr& pres, const Quiver& homeq) {
    Factor f;
    if (word_is_none(w)) return f;
    f.present = true;
    f.elem = normal_form(*pres,
                         Element(pres->quiver(), Scalar::one(),
                                 transplant_path(w, homeq, *pres->quiver())));
    return f;
}

Element fmul(const PresentationPtr& pres, const Factor& a, const Factor& b) {
    // product of two optional factors; an absent pair yields an absent marker
    if (!a.present && !b.present) return Element();
    if (!a.present) return b.elem;
    if (!b.present) return a.elem;
    return normal_form(*pres, a.elem * b.elem);
}

// expand a set of optional element factors into atomic terms
void expand_into(const Scalar& coeff, const std::vector<std::pair<bool, Element>>& factors,
                 std::vector<std::vector<PathWord>>& words_out, std::vector<Scalar>& coeff_out) {
    std::vector<PathWord> cur(factors.size(), PathWord{});
    std::function<void(size_t, Scalar)> rec = [&](size_t i, Scalar s) {
        if (s.is_zero()) return;
        if (i == factors.size()) {
            words_out.push_back(cur);
            coeff_out.push_back(s);
            return;
        }
        if (!factors[i].first) {
            cur[i] = PathWord{};
            rec(i + 1, s);
            return;
        }
        for (const auto& [ts, tw] : factors[i].second.terms()) {
            cur[i] = tw;
            rec(i + 1, s * ts);
        }
    };
    rec(0, coeff);
}

std::vector<SandwichTerm> cancel_terms(std::vector<SandwichTerm> terms) {
    std::sort(terms.begin(), terms.end());
    std::vector<SandwichTerm> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().same_words(t)) {
            out.back().coeff += t.coeff;
            if (out.back().coeff.is_zero()) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    return out;
}

struct CellCtx {
    PresentationPtr src_pres, dst_pres, op_pres;
};

CellCtx ctx_for(const TwistedComplex& src, const TwistedComplex& dst,
                const std::vector<int>& tuple, int src_chart, int dst_chart) {
    CellCtx cx;
    cx.src_pres = src.stack->presentation_at(src_chart, tuple);
    cx.dst_pres = dst.stack->presentation_at(dst_chart, tuple);
    cx.op_pres = src.op_pres ? src.op_pres : dst.op_pres;
    return cx;
}

void add_expanded(MorphismCell& out, int sgen, int dgen, const Scalar& coeff,
                  const Factor& right, const Factor& post, const Factor& left,
                  const Factor& opl, const Factor& opr) {
    std::vector<std::vector<PathWord>> words;
    std::vector<Scalar> coeffs;
    expand_into(coeff,
                {{right.present, right.elem},
                 {post.present, post.elem},
                 {left.present, left.elem},
                 {opl.present, opl.elem},
                 {opr.present, opr.elem}},
                words, coeffs);
    for (size_t i = 0; i < words.size(); ++i) {
        SandwichTerm t;
        t.coeff = coeffs[i];
        t.right = words[i][0];
        t.post = words[i][1];
        t.left = words[i][2];
        t.op_left = words[i][3];
        t.op_right = words[i][4];
        out.add_term(sgen, dgen, std::move(t));
    }
}

} // namespace

MorphismCell normalize_cell(const TwistedComplex& src, const TwistedComplex& dst,
                            const MorphismCell& cell) {
    MorphismCell out(cell.tuple());
    CellCtx cx = ctx_for(src, dst, cell.tuple(), cell.src_chart(), cell.dst_chart());
    const Quiver& srcq = *cx.src_pres->quiver();
    const Quiver& dstq = *cx.dst_pres->quiver();
    for (const auto& [key, terms] : cell.entries()) {
        const ModuleGen& sgen = src.module.generators(cell.src_chart()).at(key.first);
        MorphismCell tmp(cell.tuple());
        for (const auto& t : terms) {
            Factor r = as_factor(t.right, cx.src_pres, srcq);
            Factor p = as_factor(t.post, cx.dst_pres, dstq);
            Factor l = as_factor(t.left, cx.dst_pres, dstq);
            Factor ol, orr;
            if (cx.op_pres) {
                ol = as_factor(t.op_left, cx.op_pres, *cx.op_pres->quiver());
                orr = as_factor(t.op_right, cx.op_pres, *cx.op_pres->quiver());
            } else {
                ol.present = !word_is_none(t.op_left);
                orr.present = !word_is_none(t.op_right);
                if (ol.present || orr.present)
                    throw Error("sandwich term has op words but no coefficient presentation");
            }
            add_expanded(tmp, key.first, key.second, t.coeff, r, p, l, ol, orr);
        }
        // canonicalize factors that are trivial paths: module coefficients are
        // tail-typed at the generator vertex, so a unit there acts as no factor
        // at all, and a unit elsewhere kills the term
        std::vector<SandwichTerm> flat;
        for (const auto& [k2, ts] : tmp.entries())
            for (auto t : ts) {
                if (t.right.is_trivial()) {
                    if (t.right.trivial_vertex != sgen.chart_vertex) continue;
                    t.right = PathWord{};
                }
                int tv = word_is_none(t.right) ? sgen.chart_vertex : t.right.tail(srcq);
                if (t.post.is_trivial()) {
                    const QuiverRep& g = dst.stack->transition_at(
                        cell.dst_chart(), cell.src_chart(), cell.tuple());
                    if (t.post.trivial_vertex != g.vertex_image(tv)) continue;
                    t.post = PathWord{};
                }
                if (t.left.is_trivial() && dstq.num_vertices() == 1) t.left = PathWord{};
                if (t.op_right.is_trivial()) {
                    if (sgen.op_vertex >= 0 && t.op_right.trivial_vertex != sgen.op_vertex)
                        continue;
                    if (sgen.op_vertex >= 0) t.op_right = PathWord{};
                }
                if (t.op_left.is_trivial() && cx.op_pres &&
                    cx.op_pres->quiver()->num_vertices() == 1)
                    t.op_left = PathWord{};
                flat.push_back(std::move(t));
            }
        for (auto& t : cancel_terms(std::move(flat)))
            out.add_term(key.first, key.second, std::move(t));
    }
    return out;
}

ModuleVector cell_apply(const TwistedComplex& src, const TwistedComplex& dst,
                        const MorphismCell& cell, const ModuleVector& x) {
    if (x.chart != cell.src_chart()) throw Error("cell_apply chart mismatch");
    CellCtx cx = ctx_for(src, dst, cell.tuple(), cell.src_chart(), cell.dst_chart());
    const QuiverRep& g =
        dst.stack->transition_at(cell.dst_chart(), cell.src_chart(), cell.tuple());
    const Quiver& srcq = *cx.src_pres->quiver();
    const Quiver& dstq = *cx.dst_pres->quiver();

    ModuleVector out;
    out.chart = cell.dst_chart();
    for (const auto& xt : x.terms) {
        Element p = transplant_element(xt.chart_part, cx.src_pres->quiver());
        for (const auto& [key, terms] : cell.entries()) {
            if (key.first != xt.gen) continue;
            for (const auto& t : terms) {
                Factor r = as_factor(t.right, cx.src_pres, srcq);
                Element inner = r.present ? p * r.elem : p;
                Element chart_out = rep_apply(g, inner);
                Factor l = as_factor(t.left, cx.dst_pres, dstq);
                Factor a = as_factor(t.post, cx.dst_pres, dstq);
                if (l.present) chart_out = l.elem * chart_out;
                if (a.present) chart_out = chart_out * a.elem;
                chart_out = normal_form(*cx.dst_pres, chart_out).scaled(t.coeff);
                if (chart_out.is_zero()) continue;
                Element op_out = xt.op_part;
                if (cx.op_pres) {
                    Factor ol = as_factor(t.op_left, cx.op_pres, *cx.op_pres->quiver());
                    Factor orr = as_factor(t.op_right, cx.op_pres, *cx.op_pres->quiver());
                    Element q = transplant_element(xt.op_part, cx.op_pres->quiver());
                    if (ol.present) q = ol.elem * q;
                    if (orr.present) q = q * orr.elem;
                    op_out = normal_form(*cx.op_pres, q);
                    if (op_out.is_zero()) continue;
                }
                out.terms.push_back({key.second, chart_out, op_out});
            }
        }
    }
    return out;
}

MorphismCell cell_cup(const TwistedComplex& src, const TwistedComplex& mid,
                      const TwistedComplex& dst, const MorphismCell& u,
                      const MorphismCell& v) {
    if (u.src_chart() != v.dst_chart()) throw Error("cell_cup: middle chart mismatch");
    std::vector<int> tuple = u.tuple();
    tuple.insert(tuple.end(), v.tuple().begin() + 1, v.tuple().end());

    int i0 = u.dst_chart(), ip = u.src_chart(), il = v.src_chart();
    const QuiverStack& st = *dst.stack;
    PresentationPtr pres0 = st.presentation_at(i0, tuple);
    PresentationPtr presp = st.presentation_at(ip, tuple);
    PresentationPtr presl = st.presentation_at(il, tuple);
    const QuiverRep& gu = st.transition_at(i0, ip, tuple);

    // reference quivers the stored words live over (their own tuples)
    const Quiver& u_srcq = *st.presentation_at(ip, u.tuple())->quiver();
    const Quiver& u_dstq = *st.presentation_at(i0, u.tuple())->quiver();
    const Quiver& v_srcq = *st.presentation_at(il, v.tuple())->quiver();
    const Quiver& v_dstq = *st.presentation_at(ip, v.tuple())->quiver();

    bool gerbe_trivial = true;
    for (int vtx = 0; vtx < (int)presl->quiver()->num_vertices() && gerbe_trivial; ++vtx) {
        auto [c, cinv] = st.gerbe_at(i0, ip, il, vtx, tuple);
        bool unit = c.terms().size() == 1 && c.terms()[0].second.is_trivial() &&
                    c.terms()[0].first.is_one();
        if (!unit) gerbe_trivial = false;
    }

    MorphismCell out(tuple);
    for (const auto& [vkey, vterms] : v.entries()) {
        for (const auto& [ukey, uterms] : u.entries()) {
            if (ukey.first != vkey.second) continue;
            for (const auto& tv : vterms) {
                for (const auto& tu : uterms) {
                    // core := Gu(Av * Yu) * Au  on the target chart
                    Factor av = as_factor(tv.post, presp, v_dstq);
                    Factor yu = as_factor(tu.right, presp, u_srcq);
                    Factor core;
                    if (av.present || yu.present) {
                        core.present = true;
                        core.elem = normal_form(*pres0, rep_apply(gu, fmul(presp, av, yu)));
                    }
                    Factor au = as_factor(tu.post, pres0, u_dstq);
                    Factor a2;
                    a2.present = core.present || au.present;
                    a2.elem = fmul(pres0, core, au);

                    Factor lu = as_factor(tu.left, pres0, u_dstq);
                    Factor lv = as_factor(tv.left, presp, v_dstq);
                    Factor r2 = as_factor(tv.right, presl, v_srcq);

                    Factor opl, opr;
                    const TwistedComplex& ophome = src.op_pres ? src : dst;
                    if (ophome.op_pres) {
                        const Quiver& opq = *ophome.op_pres->quiver();
                        Factor opl_u = as_factor(tu.op_left, ophome.op_pres, opq);
                        Factor opl_v = as_factor(tv.op_left, ophome.op_pres, opq);
                        opl.present = opl_u.present || opl_v.present;
                        opl.elem = fmul(ophome.op_pres, opl_u, opl_v);
                        Factor opr_v = as_factor(tv.op_right, ophome.op_pres, opq);
                        Factor opr_u = as_factor(tu.op_right, ophome.op_pres, opq);
                        opr.present = opr_v.present || opr_u.present;
                        opr.elem = fmul(ophome.op_pres, opr_v, opr_u);
                    }

                    Scalar coeff = tu.coeff * tv.coeff;
                    if (gerbe_trivial) {
                        Factor l2;
                        if (lv.present) {
                            Element glv = normal_form(*pres0, rep_apply(gu, lv.elem));
                            l2.present = true;
                            l2.elem = lu.present ? normal_form(*pres0, lu.elem * glv) : glv;
                        } else if (lu.present) {
                            l2 = lu;
                        }
                        add_expanded(out, vkey.first, ukey.second, coeff, r2, a2, l2, opl,
                                     opr);
                    } else if (!lu.present && !lv.present) {
                        // spec form: fold c^{-1}(t of the pre-G word) into A''; the
                        // head-side factor cancels against the cup's c^{-1}(h_x)
                        if (!r2.present) {
                            int tvtx = src.module.generators(il).at(vkey.first).chart_vertex;
                            auto [c, cinv] = st.gerbe_at(i0, ip, il, tvtx, tuple);
                            Factor a2c;
                            a2c.present = true;
                            a2c.elem = a2.present ? normal_form(*pres0, cinv * a2.elem) : cinv;
                            add_expanded(out, vkey.first, ukey.second, coeff, r2, a2c,
                                         Factor{}, opl, opr);
                        } else {
                            for (const auto& [s, w] : r2.elem.terms()) {
                                auto [c, cinv] = st.gerbe_at(i0, ip, il,
                                                             w.tail(*presl->quiver()), tuple);
                                Factor a2c;
                                a2c.present = true;
                                a2c.elem = a2.present ? normal_form(*pres0, cinv * a2.elem)
                                                      : cinv;
                                Factor rterm;
                                rterm.present = true;
                                rterm.elem = Element(presl->quiver(), s, w);
                                add_expanded(out, vkey.first, ukey.second, coeff, rterm, a2c,
                                             Factor{}, opl, opr);
                            }
                        }
                    } else {
                        throw Error("cell_cup: left-multiplier terms over a nontrivial "
                                    "gerbe are not representable as a single cell");
                    }
                }
            }
        }
    }
    return normalize_cell(src, dst, out);
}

Cochain cochain_product(const TwistedComplex& src, const TwistedComplex& mid,
                        const TwistedComplex& dst, const Cochain& u, const Cochain& v) {
    std::map<std::vector<int>, MorphismCell> acc;
    for (const auto& [ut, ucell] : u.cells()) {
        for (const auto& [vt, vcell] : v.cells()) {
            if (ut.back() != vt.front()) continue;
            std::vector<int> tuple = ut;
            tuple.insert(tuple.end(), vt.begin() + 1, vt.end());
            if (!dst.stack->tuple_overlaps(tuple)) continue;
            int qdeg = (int)vt.size() - 1;
            MorphismCell usigned(ut);
            for (const auto& [key, terms] : ucell.entries()) {
                int r = dst.module.generators(ut.front()).at(key.second).degree -
                        mid.module.generators(ut.back()).at(key.first).degree;
                int sign = ((qdeg * r) % 2 == 0) ? 1 : -1;
                for (auto t : terms) {
                    t.coeff = t.coeff * Scalar(Rational(sign));
                    usigned.add_term(key.first, key.second, std::move(t));
                }
            }
            MorphismCell prod = cell_cup(src, mid, dst, usigned, vcell);
            auto it = acc.find(tuple);
            if (it == acc.end()) {
                acc.emplace(tuple, std::move(prod));
            } else {
                for (const auto& [key, terms] : prod.entries())
                    for (const auto& t : terms) it->second.add_term(key.first, key.second, t);
            }
        }
    }
    Cochain out;
    for (auto& [tuple, cell] : acc) out.set_cell(normalize_cell(src, dst, cell));
    return out;
}

Cochain cech_diff(const TwistedComplex& tc, const Cochain& u) {
    std::map<std::vector<int>, MorphismCell> acc;
    int n = tc.stack->num_charts();
    for (const auto& [t, cell] : u.cells()) {
        for (size_t k = 1; k < t.size(); ++k) {
            for (int c = 0; c < n; ++c) {
                std::vector<int> bigger = t;
                bigger.insert(bigger.begin() + k, c);
                if (!tc.stack->tuple_overlaps(bigger)) continue;
                int sign = (k % 2 == 0) ? 1 : -1;
                auto it = acc.find(bigger);
                if (it == acc.end()) it = acc.emplace(bigger, MorphismCell(bigger)).first;
                for (const auto& [key, terms] : cell.entries())
                    for (auto tt : terms) {
                        tt.coeff = tt.coeff * Scalar(Rational(sign));
                        it->second.add_term(key.first, key.second, std::move(tt));
                    }
            }
        }
    }
    Cochain out;
    for (auto& [tuple, cell] : acc) out.set_cell(normalize_cell(tc, tc, cell));
    return out;
}

namespace {

std::vector<std::vector<int>> enumerate_tuples(const QuiverStack& st, size_t max_len) {
    // repeats included: the components at (i,i) and (i,j,i) carry the identity
    // and isomorphism-up-to-homotopy conditions
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(size_t)> rec = [&](size_t len) {
        if (!cur.empty()) out.push_back(cur);
        if (len == max_len) return;
        for (int c = 0; c < st.num_charts(); ++c) {
            cur.push_back(c);
            if (st.tuple_overlaps(cur)) rec(len + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

} // namespace

std::vector<McItem> mc_check(const TwistedComplex& tc) {
    std::vector<McItem> items;
    size_t maxlen = 1;
    for (const auto& [t, c] : tc.mc.cells()) maxlen = std::max(maxlen, t.size());
    for (const auto& tuple : enumerate_tuples(*tc.stack, maxlen + 1)) {
        MorphismCell residual(tuple);
        for (size_t k = 1; k + 1 < tuple.size(); ++k) {
            std::vector<int> smaller = tuple;
            smaller.erase(smaller.begin() + k);
            const MorphismCell* cell = tc.mc.cell_at(smaller);
            if (!cell) continue;
            int sign = (k % 2 == 0) ? 1 : -1;
            for (const auto& [key, terms] : cell->entries())
                for (auto t : terms) {
                    t.coeff = t.coeff * Scalar(Rational(sign));
                    residual.add_term(key.first, key.second, std::move(t));
                }
        }
        for (size_t s = 0; s + 1 <= tuple.size(); ++s) {
            std::vector<int> ut(tuple.begin(), tuple.begin() + s + 1);
            std::vector<int> vt(tuple.begin() + s, tuple.end());
            const MorphismCell* ucell = tc.mc.cell_at(ut);
            const MorphismCell* vcell = tc.mc.cell_at(vt);
            if (!ucell || !vcell) continue;
            int qdeg = (int)vt.size() - 1;
            MorphismCell usigned(ut);
            for (const auto& [key, terms] : ucell->entries()) {
                int r = tc.module.generators(ut.front()).at(key.second).degree -
                        tc.module.generators(ut.back()).at(key.first).degree;
                int sign = ((qdeg * r) % 2 == 0) ? 1 : -1;
                for (auto t : terms) {
                    t.coeff = t.coeff * Scalar(Rational(sign));
                    usigned.add_term(key.first, key.second, std::move(t));
                }
            }
            MorphismCell prod = cell_cup(tc, tc, tc, usigned, *vcell);
            for (const auto& [key, terms] : prod.entries())
                for (const auto& t : terms) residual.add_term(key.first, key.second, t);
        }
        MorphismCell norm = normalize_cell(tc, tc, residual);
        for (const auto& [key, terms] : norm.entries()) {
            if (terms.empty()) continue;
            McItem item;
            item.tuple = tuple;
            item.src_label = tc.module.generators(tuple.back()).at(key.first).label;
            item.dst_label = tc.module.generators(tuple.front()).at(key.second).label;
            item.residual = terms;
            items.push_back(std::move(item));
        }
    }
    return items;
}

namespace {

Cochain fold_sum(const TwistedComplex& src, const TwistedComplex& dst,
                 std::initializer_list<const Cochain*> parts) {
    std::map<std::vector<int>, MorphismCell> acc;
    for (const Cochain* c : parts)
        for (const auto& [t, cell] : c->cells()) {
            auto it = acc.find(t);
            if (it == acc.end()) it = acc.emplace(t, MorphismCell(t)).first;
            for (const auto& [key, terms] : cell.entries())
                for (const auto& tt : terms) it->second.add_term(key.first, key.second, tt);
        }
    Cochain out;
    for (auto& [t, cell] : acc) {
        MorphismCell norm = normalize_cell(src, dst, cell);
        if (!norm.entries().empty()) out.set_cell(std::move(norm));
    }
    return out;
}

Cochain negate_by_total_degree(const TwistedComplex& src, const TwistedComplex& dst,
                               const Cochain& phi) {
    Cochain phis;
    for (const auto& [t, cell] : phi.cells()) {
        MorphismCell signed_cell(t);
        for (const auto& [key, terms] : cell.entries()) {
            int p = (int)t.size() - 1;
            int q = dst.module.generators(t.front()).at(key.second).degree -
                    src.module.generators(t.back()).at(key.first).degree;
            int sign = ((p + q) % 2 == 0) ? 1 : -1;
            for (auto tt : terms) {
                tt.coeff = tt.coeff * Scalar(Rational(-sign));
                signed_cell.add_term(key.first, key.second, std::move(tt));
            }
        }
        phis.set_cell(std::move(signed_cell));
    }
    return phis;
}

} // namespace

Cochain morphism_diff(const TwistedComplex& src, const TwistedComplex& dst,
                      const Cochain& phi) {
    Cochain cech = cech_diff(dst, phi);
    Cochain bphi = cochain_product(src, src, dst, dst.mc, phi);
    Cochain phia = cochain_product(src, dst, dst, negate_by_total_degree(src, dst, phi),
                                   src.mc);
    return fold_sum(src, dst, {&cech, &bphi, &phia});
}

Cochain hom_diff(const TwistedComplex& src, const TwistedComplex& dst, const Cochain& phi) {
    auto diag = [](const TwistedComplex& tc) {
        Cochain c;
        for (const auto& [t, cell] : tc.mc.cells())
            if (t.size() == 1) c.set_cell(cell);
        return c;
    };
    Cochain b0 = diag(dst), a0 = diag(src);
    Cochain bphi = cochain_product(src, src, dst, b0, phi);
    Cochain phia = cochain_product(src, dst, dst, negate_by_total_degree(src, dst, phi), a0);
    return fold_sum(src, dst, {&bphi, &phia});
}

std::string term_str(const SandwichTerm& t, const TwistedComplex& tc, int src_chart,
                     int dst_chart) {
    const SymbolTable& tab = *tc.stack->symbols();
    auto srcq = tc.stack->presentation_at(src_chart, {src_chart})->quiver();
    auto dstq = tc.stack->presentation_at(dst_chart, {dst_chart})->quiver();
    std::string s = t.coeff.str(tab);
    if (!word_is_none(t.left)) s += " [" + t.left.str(*dstq) + "] *";
    s += " G(_";
    if (!word_is_none(t.right)) s += " * " + t.right.str(*srcq);
    s += ")";
    if (!word_is_none(t.post)) s += " * [" + t.post.str(*dstq) + "]";
    if (tc.op_pres && (!word_is_none(t.op_left) || !word_is_none(t.op_right))) {
        s += " ; op:";
        if (!word_is_none(t.op_left)) s += " " + t.op_left.str(*tc.op_pres->quiver()) + " *";
        s += " _";
        if (!word_is_none(t.op_right)) s += " * " + t.op_right.str(*tc.op_pres->quiver());
    }
    return s;
}

} // namespace qstack
