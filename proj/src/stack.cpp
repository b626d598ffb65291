#include "qstack/stack.hpp"

#include <algorithm>

namespace qstack {

int QuiverStack::add_chart(const std::string& name, PresentationPtr base) {
    for (const auto& c : charts_)
        if (c.name == name) throw Error("duplicate chart: " + name);
    charts_.push_back({name, std::move(base)});
    return (int)charts_.size() - 1;
}

int QuiverStack::chart(const std::string& name) const {
    for (size_t i = 0; i < charts_.size(); ++i)
        if (charts_[i].name == name) return (int)i;
    throw Error("unknown chart: " + name);
}

const SymbolTablePtr& QuiverStack::symbols() const {
    if (charts_.empty()) throw Error("stack has no charts");
    return charts_[0].base->symbols();
}

void QuiverStack::set_pair_localization(int i, int j, std::vector<std::string> arrows) {
    std::sort(arrows.begin(), arrows.end());
    pair_loc_[{i, j}] = std::move(arrows);
}

void QuiverStack::add_aux_rules(int i, std::vector<std::string> arrows,
                                std::vector<std::pair<std::string, std::string>> rules) {
    std::sort(arrows.begin(), arrows.end());
    aux_rules_[{i, arrows}] = std::move(rules);
}

void QuiverStack::set_transition(int i, int j, TransitionSpec spec) {
    transitions_[{i, j}] = std::move(spec);
}

void QuiverStack::set_gerbe(int i, int j, int k, const std::string& vertex,
                            const std::string& elem, const std::string& inverse) {
    gerbes_[{i, j, k}][vertex] = {elem, inverse};
}

void QuiverStack::set_maximal_faces(std::vector<std::vector<int>> faces) {
    maximal_faces_ = std::move(faces);
}

bool QuiverStack::tuple_overlaps(const std::vector<int>& tuple) const {
    if (maximal_faces_.empty()) return true;
    std::set<int> s(tuple.begin(), tuple.end());
    for (const auto& face : maximal_faces_) {
        std::set<int> f(face.begin(), face.end());
        if (std::includes(f.begin(), f.end(), s.begin(), s.end())) return true;
    }
    return false;
}

std::vector<int> QuiverStack::tuple_key(const std::vector<int>& tuple) const {
    std::vector<int> k(tuple.begin(), tuple.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

std::vector<std::string> QuiverStack::localization_set(int chart,
                                                       const std::vector<int>& tuple) const {
    // S_{i,T} = union of the pairwise sets S_{i,{i,j}} over j in T
    std::set<std::string> acc;
    for (int j : tuple_key(tuple)) {
        if (j == chart) continue;
        auto it = pair_loc_.find({chart, j});
        if (it != pair_loc_.end())
            acc.insert(it->second.begin(), it->second.end());
    }
    return {acc.begin(), acc.end()};
}

PresentationPtr QuiverStack::presentation_at(int chart, const std::vector<int>& tuple) const {
    auto arrows = localization_set(chart, tuple);
    auto key = std::make_pair(chart, arrows);
    auto it = pres_cache_.find(key);
    if (it != pres_cache_.end()) return it->second;

    const auto& base = charts_.at(chart).base;
    PresentationPtr result;
    if (arrows.empty()) {
        result = base;
    } else {
        std::vector<int> ids;
        for (const auto& n : arrows) ids.push_back(base->quiver()->arrow(n));
        std::vector<std::pair<PathWord, Element>> aux;
        auto ar = aux_rules_.find({chart, arrows});
        if (ar != aux_rules_.end()) {
            // parse the aux rules against the localized quiver: build it first
            auto plain = localize(*base, ids, {});
            for (const auto& [lhs_text, rhs_text] : ar->second) {
                PathWord lhs = parse_path(lhs_text, *plain->quiver());
                Element rhs = parse_element(rhs_text, plain->quiver(), *plain->symbols(),
                                            defines_);
                aux.push_back({lhs, rhs});
            }
        }
        result = localize(*base, ids, aux);
    }
    pres_cache_[key] = result;
    return result;
}

const QuiverRep& QuiverStack::transition_at(int i, int j, const std::vector<int>& tuple) const {
    std::vector<int> key_tuple = tuple_key(tuple);
    auto key = std::make_tuple(i, j, key_tuple);
    auto it = rep_cache_.find(key);
    if (it != rep_cache_.end()) return it->second;

    PresentationPtr src = presentation_at(j, key_tuple);
    PresentationPtr tgt = presentation_at(i, key_tuple);
    std::string name = "G(" + charts_[i].name + "," + charts_[j].name + ")";

    if (i == j) {
        QuiverRep g = QuiverRep::identity(name, src);
        rep_cache_.emplace(key, std::move(g));
        return rep_cache_.at(key);
    }

    auto ts = transitions_.find({i, j});
    if (ts == transitions_.end())
        throw Error("no transition declared from chart " + charts_[j].name + " to " +
                    charts_[i].name);

    if (ts->second.composed) {
        int via = ts->second.via;
        std::vector<int> bigger = key_tuple;
        bigger.push_back(via);
        bigger = tuple_key(bigger);
        const QuiverRep& g1 = transition_at(i, via, bigger);
        const QuiverRep& g2 = transition_at(via, j, bigger);
        QuiverRep comp = rep_compose(name, g1, g2);
        // express in the (possibly smaller) tuple presentations
        QuiverRep out(name, src, tgt);
        const Quiver& cq = *comp.source()->quiver();
        const Quiver& tq = *tgt->quiver();
        for (int v = 0; v < (int)src->quiver()->num_vertices(); ++v) {
            int cv = cq.vertex(src->quiver()->vertex_name(v));
            out.map_vertex(v, tq.vertex(
                comp.target()->quiver()->vertex_name(comp.vertex_image(cv))));
        }
        for (int a = 0; a < (int)src->quiver()->num_arrows(); ++a) {
            int ca = cq.find_arrow(src->quiver()->arrow_info(a).name);
            if (ca < 0 || !comp.has_arrow_image(ca)) continue;
            Element img(tgt->quiver());
            for (const auto& [s, w] : comp.arrow_image(ca).terms()) {
                if (w.is_trivial()) {
                    img.add_term(s, PathWord::trivial(tq.vertex(
                        comp.target()->quiver()->vertex_name(w.trivial_vertex))));
                } else {
                    std::vector<int> na;
                    for (int old : w.arrows)
                        na.push_back(tq.arrow(comp.target()->quiver()->arrow_info(old).name));
                    img.add_term(s, PathWord::of(std::move(na)));
                }
            }
            out.map_arrow(a, normal_form(*tgt, img));
        }
        out.derive_inverse_images();
        rep_cache_.emplace(key, std::move(out));
        return rep_cache_.at(key);
    }

    QuiverRep g(name, src, tgt);
    for (const auto& [sv, tv] : ts->second.vertex_map)
        g.map_vertex(src->quiver()->vertex(sv), tgt->quiver()->vertex(tv));
    for (const auto& [sa, text] : ts->second.arrow_map) {
        int a = src->quiver()->find_arrow(sa);
        if (a < 0) continue;  // an inverse that this localization does not carry
        Element img = parse_element(text, tgt->quiver(), *tgt->symbols(), defines_);
        g.map_arrow(a, normal_form(*tgt, img));
    }
    g.derive_inverse_images();
    rep_cache_.emplace(key, std::move(g));
    return rep_cache_.at(key);
}

std::pair<Element, Element> QuiverStack::gerbe_at(int i, int j, int k, int vertex_of_chart_k,
                                                  const std::vector<int>& tuple) const {
    PresentationPtr pi = presentation_at(i, tuple);
    PresentationPtr pk = presentation_at(k, tuple);
    const std::string& vname = pk->quiver()->vertex_name(vertex_of_chart_k);

    auto git = gerbes_.find({i, j, k});
    if (git != gerbes_.end()) {
        auto vit = git->second.find(vname);
        if (vit != git->second.end()) {
            Element c = parse_element(vit->second.first, pi->quiver(), *pi->symbols(), defines_);
            Element cinv = parse_element(vit->second.second, pi->quiver(), *pi->symbols(),
                                         defines_);
            return {normal_form(*pi, c), normal_form(*pi, cinv)};
        }
    }
    // default: trivial path at G_ik(v)
    const QuiverRep& gik = transition_at(i, k, tuple);
    int v = gik.vertex_image(pk->quiver()->vertex(vname));
    Element unit = Element::unit_at(pi->quiver(), v);
    return {unit, unit};
}

std::vector<CheckItem> QuiverStack::check_cocycle(int i, int j, int k) const {
    std::vector<int> T = tuple_key({i, j, k});
    std::vector<CheckItem> items;
    PresentationPtr pi = presentation_at(i, T);
    PresentationPtr pk = presentation_at(k, T);
    const QuiverRep& gij = transition_at(i, j, T);
    const QuiverRep& gjk = transition_at(j, k, T);
    const QuiverRep& gik = transition_at(i, k, T);
    const Quiver& kq = *pk->quiver();
    std::string label = "cocycle(" + charts_[i].name + "," + charts_[j].name + "," +
                        charts_[k].name + ")";
    for (int a = 0; a < (int)kq.num_arrows(); ++a) {
        const Arrow& ar = kq.arrow_info(a);
        Element lhs = rep_apply(gij, gjk.arrow_image(a));
        auto [ch, chinv] = gerbe_at(i, j, k, ar.head, T);
        auto [ct, ctinv] = gerbe_at(i, j, k, ar.tail, T);
        Element rhs = ch * gik.arrow_image(a) * ctinv;
        Element res = normal_form(*pi, lhs - rhs);
        items.push_back({label + " arrow " + ar.name, res});
    }
    return items;
}

std::vector<CheckItem> QuiverStack::check_tetrahedron(int i, int j, int k, int l) const {
    std::vector<int> T = tuple_key({i, j, k, l});
    std::vector<CheckItem> items;
    PresentationPtr pi = presentation_at(i, T);
    PresentationPtr pl = presentation_at(l, T);
    const QuiverRep& gij = transition_at(i, j, T);
    const QuiverRep& gkl = transition_at(k, l, T);
    std::string label = "tetra(" + charts_[i].name + "," + charts_[j].name + "," +
                        charts_[k].name + "," + charts_[l].name + ")";
    for (int v = 0; v < (int)pl->quiver()->num_vertices(); ++v) {
        int w = gkl.vertex_image(v);  // vertex of chart k
        auto [cijk_at_w, inv1] = gerbe_at(i, j, k, w, T);
        auto [cikl_at_v, inv2] = gerbe_at(i, k, l, v, T);
        auto [cjkl_at_v, inv3] = gerbe_at(j, k, l, v, T);
        auto [cijl_at_v, inv4] = gerbe_at(i, j, l, v, T);
        Element lhs = cijk_at_w * cikl_at_v;
        Element rhs = rep_apply(gij, cjkl_at_v) * cijl_at_v;
        Element res = normal_form(*pi, lhs - rhs);
        items.push_back({label + " vertex " + pl->quiver()->vertex_name(v), res});
    }
    return items;
}

std::vector<CheckItem> QuiverStack::check_cocycle_all() const {
    std::vector<CheckItem> items;
    int n = num_charts();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (!tuple_overlaps({i, j, k})) continue;
                auto part = check_cocycle(i, j, k);
                items.insert(items.end(), part.begin(), part.end());
            }
    return items;
}

std::vector<CheckItem> QuiverStack::check_tetrahedron_all() const {
    std::vector<CheckItem> items;
    int n = num_charts();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (!tuple_overlaps({i, j, k, l})) continue;
                    auto part = check_tetrahedron(i, j, k, l);
                    items.insert(items.end(), part.begin(), part.end());
                }
    return items;
}

Element QuiverStack::mult_M(const TensorWord& w, const std::vector<int>& extra) const {
    if (w.empty()) throw Error("empty tensor word");
    std::vector<int> T = extra;
    for (const auto& slot : w) T.push_back(slot.chart);
    T = tuple_key(T);
    if (!tuple_overlaps(T)) throw Error("tensor word charts do not overlap");
    int landing = w.back().chart;
    PresentationPtr p0 = presentation_at(landing, T);

    Element acc = Element::total_unit(p0->quiver());
    for (size_t idx = 0; idx + 1 < w.size(); ++idx) {
        const auto& slot = w[idx];
        int next_chart = w[idx + 1].chart;
        const QuiverRep& g = transition_at(landing, slot.chart, T);
        Element se = transplant_element(slot.elem, g.source()->quiver());
        Element factor(p0->quiver());
        // c^-1_{landing,next,this}(t of each slot term) follows G for slots z^(k)..z^(2)
        bool with_gerbe = idx + 2 <= w.size() - 1;
        for (const auto& [s, pw] : se.terms()) {
            Element mapped = rep_apply(g, Element(se.quiver(), s, pw));
            if (with_gerbe) {
                auto [c, cinv] = gerbe_at(landing, next_chart, slot.chart,
                                          pw.tail(*se.quiver()), T);
                mapped = mapped * cinv;
            }
            factor = factor + mapped;
        }
        acc = acc * factor;
    }
    // rightmost slot enters untransformed
    acc = acc * transplant_element(w.back().elem, p0->quiver());
    return normal_form(*p0, acc);
}

Element QuiverStack::mult_Mop(const TensorWord& w, const std::vector<int>& extra) const {
    if (w.empty()) throw Error("empty tensor word");
    std::vector<int> T = extra;
    for (const auto& slot : w) T.push_back(slot.chart);
    T = tuple_key(T);
    if (!tuple_overlaps(T)) throw Error("tensor word charts do not overlap");
    int landing = w.back().chart;
    PresentationPtr p0 = presentation_at(landing, T);

    Element acc = transplant_element(w.back().elem, p0->quiver());
    // walk leftwards from z^(1) to z^(k), appending on the right of acc
    for (size_t pos = w.size() - 1; pos-- > 0;) {
        const auto& slot = w[pos];
        const QuiverRep& g = transition_at(landing, slot.chart, T);
        Element se = transplant_element(slot.elem, g.source()->quiver());
        Element factor(p0->quiver());
        bool with_gerbe = pos + 2 <= w.size() - 1;  // slots z^(2)..z^(k) carry c_{0,prev,this}(h)
        int prev_chart = with_gerbe ? w[pos + 1].chart : -1;
        for (const auto& [s, pw] : se.terms()) {
            Element mapped = rep_apply(g, Element(se.quiver(), s, pw));
            if (with_gerbe) {
                auto [c, cinv] = gerbe_at(landing, prev_chart, slot.chart,
                                          pw.head(*se.quiver()), T);
                mapped = c * mapped;
            }
            factor = factor + mapped;
        }
        acc = acc * factor;
    }
    return normal_form(*p0, acc);
}

std::shared_ptr<QuiverStack> QuiverStack::restrict_through_hub(const std::vector<int>& keep,
                                                               int hub) const {
    for (int i : keep)
        if (i == hub) throw Error("hub cannot be kept in stack restriction");
    auto out = std::make_shared<QuiverStack>();
    out->set_defines(defines_);
    std::map<int, int> newid;
    for (int i : keep) newid[i] = out->add_chart(charts_[i].name, charts_[i].base);

    // pair localizations: S'_{i,{i,j}} = S_{i,{i,j}} u S_{i,{i,hub}}
    for (int i : keep)
        for (int j : keep) {
            if (i == j) continue;
            std::set<std::string> s;
            auto a = pair_loc_.find({i, j});
            if (a != pair_loc_.end()) s.insert(a->second.begin(), a->second.end());
            auto b = pair_loc_.find({i, hub});
            if (b != pair_loc_.end()) s.insert(b->second.begin(), b->second.end());
            out->set_pair_localization(newid[i], newid[j], {s.begin(), s.end()});
        }
    // aux rule tables carry over (keyed by chart + arrow set)
    for (const auto& [key, rules] : aux_rules_) {
        auto it = newid.find(key.first);
        if (it != newid.end()) out->add_aux_rules(it->second, key.second, rules);
    }

    // transitions: G'_ij := G_{i,hub} o G_{hub,j}, expressed over the pair overlap
    for (int i : keep)
        for (int j : keep) {
            if (i == j) continue;
            std::vector<int> T = tuple_key({i, hub, j});
            const QuiverRep& gih = transition_at(i, hub, T);
            const QuiverRep& ghj = transition_at(hub, j, T);
            QuiverRep comp = rep_compose("G'", gih, ghj);
            TransitionSpec spec;
            for (int v = 0; v < (int)comp.source()->quiver()->num_vertices(); ++v)
                spec.vertex_map[comp.source()->quiver()->vertex_name(v)] =
                    comp.target()->quiver()->vertex_name(comp.vertex_image(v));
            for (int a = 0; a < (int)comp.source()->quiver()->num_arrows(); ++a) {
                if (!comp.has_arrow_image(a)) continue;
                spec.arrow_map[comp.source()->quiver()->arrow_info(a).name] =
                    comp.arrow_image(a).str(*symbols());
            }
            out->set_transition(newid[i], newid[j], std::move(spec));
        }

    // gerbes: c'_{ijk}(v) = G_{i,hub}(c_{hub,j,hub}(G_{hub,k}(v)))
    for (int i : keep)
        for (int j : keep)
            for (int k : keep) {
                if (i == j || j == k) continue;
                std::vector<int> T = tuple_key({i, j, k, hub});
                const QuiverRep& ghk = transition_at(hub, k, T);
                const QuiverRep& gih = transition_at(i, hub, T);
                PresentationPtr pk = presentation_at(k, T);
                PresentationPtr pi = presentation_at(i, T);
                for (int v = 0; v < (int)pk->quiver()->num_vertices(); ++v) {
                    int w = ghk.vertex_image(v);
                    auto [c, cinv] = gerbe_at(hub, j, hub, w, T);
                    Element img = normal_form(*pi, rep_apply(gih, c));
                    Element img_inv = normal_form(*pi, rep_apply(gih, cinv));
                    bool trivial = img.terms().size() == 1 &&
                                   img.terms()[0].second.is_trivial() &&
                                   img.terms()[0].first.is_one();
                    if (trivial) continue;  // defaults cover it
                    out->set_gerbe(newid[i], newid[j], newid[k],
                                   pk->quiver()->vertex_name(v),
                                   img.str(*symbols()), img_inv.str(*symbols()));
                }
            }
    return out;
}

} // namespace qstack
