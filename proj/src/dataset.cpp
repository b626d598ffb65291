#include "qstack/dataset.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace qstack {

using nlohmann::json;

const PresentationPtr& Dataset::presentation(const std::string& name) const {
    auto it = presentations.find(name);
    if (it == presentations.end()) throw Error("unknown presentation: " + name);
    return it->second;
}

namespace {

std::vector<std::pair<int, std::string>> split_terms(const std::string& text) {
    std::vector<std::pair<int, std::string>> chunks;
    int depth = 0, sign = 1;
    std::string cur;
    char prev_nonspace = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == '+' || c == '-') && prev_nonspace != '^') {
            bool blank = cur.find_first_not_of(" \t") == std::string::npos;
            if (blank) {
                if (c == '-') sign = -sign;
            } else {
                chunks.push_back({sign, cur});
                cur.clear();
                sign = c == '-' ? -1 : 1;
            }
            prev_nonspace = c;
            continue;
        }
        cur += c;
        if (!std::isspace((unsigned char)c)) prev_nonspace = c;
    }
    if (cur.find_first_not_of(" \t") != std::string::npos) chunks.push_back({sign, cur});
    return chunks;
}

// sum of `[scalar] [words] _ [words]`; arrows are classified by the quiver
// that owns them (dst chart, src chart, or the coefficient presentation)
std::vector<SandwichTerm> parse_cell_entry(const std::string& text,
                                           const QuiverPtr& srcq, const QuiverPtr& dstq,
                                           const QuiverPtr& opq, const SymbolTable& tab,
                                           const std::map<std::string, Exponent>* defines) {
    std::vector<SandwichTerm> out;
    for (auto& [sign, body] : split_terms(text)) {
        // scalar prefix
        size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < body.size() && std::isspace((unsigned char)body[pos])) ++pos;
        };
        size_t scalar_end = 0;
        skip_ws();
        while (pos < body.size()) {
            if (std::isdigit((unsigned char)body[pos])) {
                while (pos < body.size() &&
                       (std::isdigit((unsigned char)body[pos]) || body[pos] == '/'))
                    ++pos;
                scalar_end = pos;
            } else if (body[pos] == 'T' && pos + 1 < body.size() && body[pos + 1] == '^') {
                pos += 2;
                int d = 0;
                do {
                    if (body[pos] == '(') ++d;
                    if (body[pos] == ')') --d;
                    ++pos;
                } while (pos < body.size() && d > 0);
                scalar_end = pos;
            } else {
                break;
            }
            skip_ws();
        }
        std::string scalar_text = body.substr(0, scalar_end);
        Scalar s = scalar_text.find_first_not_of(" \t") == std::string::npos
                       ? Scalar::one()
                       : parse_scalar(scalar_text, tab, defines);
        if (sign < 0) s = -s;

        std::istringstream in(body.substr(scalar_end));
        std::string tok;
        bool after_slot = false;
        std::vector<int> pre_w, y_w, l_w, post_w, opl_w, opr_w;
        bool seen_slot = false;
        while (in >> tok) {
            if (tok == "_") {
                if (seen_slot) throw Error("two input slots in cell entry: " + text);
                seen_slot = true;
                after_slot = true;
                continue;
            }
            if (tok == "*") continue;
            int a;
            if (dstq && (a = dstq->find_arrow(tok)) >= 0) {
                (after_slot ? post_w : l_w).push_back(a);
            } else if (srcq && srcq.get() != dstq.get() && (a = srcq->find_arrow(tok)) >= 0) {
                (after_slot ? y_w : pre_w).push_back(a);
            } else if (opq && (a = opq->find_arrow(tok)) >= 0) {
                (after_slot ? opr_w : opl_w).push_back(a);
            } else {
                throw Error("cell entry token not an arrow of any relevant quiver: " + tok);
            }
        }
        if (!seen_slot) throw Error("cell entry term without input slot: " + text);
        SandwichTerm t;
        t.coeff = s;
        if (!pre_w.empty()) {
            // source letters left of the slot multiply inside G; fold them into
            // the term by treating them as a left word mapped at composition
            // time -- represented here via the spec right-multiplier after a
            // reversal is not equivalent, so keep them as a dst-side left word
            // through the transition image done by normalize later. They are
            // kept as an explicit source-side pre word.
            throw Error("source-chart letters left of the slot are not supported in "
                        "serialized entries; write the transition image instead: " + text);
        }
        if (!y_w.empty()) t.right = PathWord::of(y_w);
        if (!l_w.empty()) t.left = PathWord::of(l_w);
        if (!post_w.empty()) t.post = PathWord::of(post_w);
        if (!opl_w.empty()) t.op_left = PathWord::of(opl_w);
        if (!opr_w.empty()) t.op_right = PathWord::of(opr_w);
        out.push_back(std::move(t));
    }
    return out;
}

GenRef parse_genref(const StructureConstants& s, const std::string& text) {
    // from.to.label
    size_t a = text.find('.');
    size_t b = text.find('.', a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw Error("generator reference must be from.to.label: " + text);
    return s.gen_ref(s.object(text.substr(0, a)), s.object(text.substr(a + 1, b - a - 1)),
                     text.substr(b + 1));
}

} // namespace

Dataset parse_dataset_text(const std::string& text, const std::string& label) {
    Dataset ds;
    ds.path = label;
    json j;
    try {
        j = json::parse(text, nullptr, true, true);  // allow comments
    } catch (const std::exception& e) {
        throw Error("dataset parse error in " + label + ": " + e.what());
    }

    // symbols and defines
    std::vector<std::string> syms;
    if (j.contains("symbols"))
        for (const auto& s : j["symbols"]) syms.push_back(s.get<std::string>());
    ds.symbols = std::make_shared<SymbolTable>(syms);
    if (j.contains("defines"))
        for (auto& [name, expr] : j["defines"].items())
            (*ds.defines)[name] =
                parse_exponent_expr(expr.get<std::string>(), *ds.symbols, ds.defines.get());

    // quivers
    if (j.contains("quivers"))
        for (auto& [name, q] : j["quivers"].items()) {
            std::vector<std::string> verts;
            for (const auto& v : q.at("vertices")) verts.push_back(v.get<std::string>());
            std::vector<std::tuple<std::string, std::string, std::string>> arrows;
            for (const auto& a : q.at("arrows"))
                arrows.push_back({a.at(0).get<std::string>(), a.at(1).get<std::string>(),
                                  a.at(2).get<std::string>()});
            ds.quivers[name] = std::make_shared<Quiver>(verts, arrows);
        }

    // superpotentials
    if (j.contains("superpotentials"))
        for (auto& [name, sp] : j["superpotentials"].items()) {
            auto q = ds.quivers.at(sp.at("quiver").get<std::string>());
            Superpotential phi(q);
            for (const auto& t : sp.at("terms"))
                phi.add_term(parse_scalar(t.at(0).get<std::string>(), *ds.symbols,
                                          ds.defines.get()),
                             parse_path(t.at(1).get<std::string>(), *q));
            ds.superpotentials.emplace(name, std::move(phi));
        }

    // presentations: multiple passes so localizations can reference earlier ones
    if (j.contains("presentations")) {
        std::map<std::string, json> pending;
        for (auto& [name, p] : j["presentations"].items()) pending[name] = p;
        bool progress = true;
        while (!pending.empty() && progress) {
            progress = false;
            for (auto it = pending.begin(); it != pending.end();) {
                const auto& [name, p] = *it;
                if (p.contains("localize")) {
                    std::string base_name = p.at("localize").get<std::string>();
                    auto bp = ds.presentations.find(base_name);
                    if (bp == ds.presentations.end()) {
                        ++it;
                        continue;
                    }
                    std::vector<int> arrows;
                    for (const auto& a : p.at("arrows"))
                        arrows.push_back(bp->second->quiver()->arrow(a.get<std::string>()));
                    auto plain = localize(*bp->second, arrows, {});
                    std::vector<std::pair<PathWord, Element>> aux;
                    if (p.contains("aux_rules"))
                        for (const auto& r : p.at("aux_rules"))
                            aux.push_back(
                                {parse_path(r.at(0).get<std::string>(), *plain->quiver()),
                                 parse_element(r.at(1).get<std::string>(), plain->quiver(),
                                               *ds.symbols, ds.defines.get())});
                    ds.presentations[name] = localize(*bp->second, arrows, aux);
                } else {
                    auto q = ds.quivers.at(p.at("quiver").get<std::string>());
                    std::vector<std::string> prec;
                    if (p.contains("order"))
                        for (const auto& o : p.at("order")) prec.push_back(o.get<std::string>());
                    TermOrder order(*q, prec);
                    if (p.contains("jacobi")) {
                        ds.presentations[name] = jacobi_presentation(
                            name, q, ds.symbols,
                            ds.superpotentials.at(p.at("jacobi").get<std::string>()), order);
                    } else {
                        auto pres =
                            std::make_shared<Presentation>(name, q, ds.symbols, order);
                        if (p.contains("rules"))
                            for (const auto& r : p.at("rules"))
                                pres->add_rule(
                                    parse_path(r.at(0).get<std::string>(), *q),
                                    parse_element(r.at(1).get<std::string>(), q, *ds.symbols,
                                                  ds.defines.get()));
                        ds.presentations[name] = pres;
                    }
                }
                it = pending.erase(it);
                progress = true;
            }
        }
        if (!pending.empty())
            throw Error("unresolvable presentation references in " + label);
    }
    if (j.contains("default_presentation"))
        ds.default_presentation = j["default_presentation"].get<std::string>();

    // standalone representations
    if (j.contains("representations"))
        for (auto& [name, r] : j["representations"].items()) {
            auto src = ds.presentation(r.at("source").get<std::string>());
            auto tgt = ds.presentation(r.at("target").get<std::string>());
            QuiverRep g(name, src, tgt);
            for (auto& [sv, tv] : r.at("vertices").items())
                g.map_vertex(src->quiver()->vertex(sv),
                             tgt->quiver()->vertex(tv.get<std::string>()));
            for (auto& [sa, img] : r.at("arrows").items()) {
                int a = src->quiver()->find_arrow(sa);
                if (a < 0) throw Error("unknown source arrow in rep " + name + ": " + sa);
                g.map_arrow(a, normal_form(*tgt,
                                           parse_element(img.get<std::string>(), tgt->quiver(),
                                                         *ds.symbols, ds.defines.get())));
            }
            g.derive_inverse_images();
            ds.representations.emplace(name, std::move(g));
        }

    // stacks
    if (j.contains("stacks")) {
        std::map<std::string, json> pending;
        for (auto& [name, st] : j["stacks"].items()) pending[name] = st;
        bool progress = true;
        while (!pending.empty() && progress) {
            progress = false;
            for (auto it = pending.begin(); it != pending.end();) {
                const auto& [name, sj] = *it;
                if (sj.contains("restrict_of")) {
                    auto base = ds.stacks.find(sj.at("restrict_of").get<std::string>());
                    if (base == ds.stacks.end()) {
                        ++it;
                        continue;
                    }
                    std::vector<int> keep;
                    for (const auto& k : sj.at("keep"))
                        keep.push_back(base->second->chart(k.get<std::string>()));
                    int hub = base->second->chart(sj.at("hub").get<std::string>());
                    ds.stacks[name] = base->second->restrict_through_hub(keep, hub);
                } else {
                    auto st = std::make_shared<QuiverStack>();
                    st->set_defines(ds.defines.get());
                    for (const auto& c : sj.at("charts"))
                        st->add_chart(c.at(0).get<std::string>(),
                                      ds.presentation(c.at(1).get<std::string>()));
                    if (sj.contains("pair_localizations"))
                        for (const auto& pl : sj.at("pair_localizations")) {
                            std::vector<std::string> arrows;
                            for (const auto& a : pl.at(2)) arrows.push_back(a.get<std::string>());
                            st->set_pair_localization(st->chart(pl.at(0).get<std::string>()),
                                                      st->chart(pl.at(1).get<std::string>()),
                                                      arrows);
                        }
                    if (sj.contains("aux_rules"))
                        for (const auto& ar : sj.at("aux_rules")) {
                            std::vector<std::string> arrows;
                            for (const auto& a : ar.at(1)) arrows.push_back(a.get<std::string>());
                            std::vector<std::pair<std::string, std::string>> rules;
                            for (const auto& r : ar.at(2))
                                rules.push_back({r.at(0).get<std::string>(),
                                                 r.at(1).get<std::string>()});
                            st->add_aux_rules(st->chart(ar.at(0).get<std::string>()), arrows,
                                              rules);
                        }
                    if (sj.contains("transitions"))
                        for (const auto& tr : sj.at("transitions")) {
                            int dst = st->chart(tr.at(0).get<std::string>());
                            int src = st->chart(tr.at(1).get<std::string>());
                            QuiverStack::TransitionSpec spec;
                            const auto& body = tr.at(2);
                            if (body.is_object() && body.contains("compose")) {
                                spec.composed = true;
                                spec.via = st->chart(body.at("compose").get<std::string>());
                            } else {
                                for (auto& [sv, tv] : body.at("vertices").items())
                                    spec.vertex_map[sv] = tv.get<std::string>();
                                for (auto& [sa, img] : body.at("arrows").items())
                                    spec.arrow_map[sa] = img.get<std::string>();
                            }
                            st->set_transition(dst, src, spec);
                        }
                    if (sj.contains("gerbes"))
                        for (const auto& gb : sj.at("gerbes"))
                            st->set_gerbe(st->chart(gb.at(0).get<std::string>()),
                                          st->chart(gb.at(1).get<std::string>()),
                                          st->chart(gb.at(2).get<std::string>()),
                                          gb.at(3).get<std::string>(),
                                          gb.at(4).get<std::string>(),
                                          gb.at(5).get<std::string>());
                    if (sj.contains("maximal_faces")) {
                        std::vector<std::vector<int>> faces;
                        for (const auto& f : sj.at("maximal_faces")) {
                            std::vector<int> face;
                            for (const auto& c : f) face.push_back(st->chart(c.get<std::string>()));
                            faces.push_back(face);
                        }
                        st->set_maximal_faces(faces);
                    }
                    ds.stacks[name] = st;
                }
                it = pending.erase(it);
                progress = true;
            }
        }
        if (!pending.empty()) throw Error("unresolvable stack references in " + label);
    }

    // gluing systems
    if (j.contains("gluings"))
        for (auto& [name, gj] : j["gluings"].items()) {
            GluingData g;
            g.stack = ds.stacks.at(gj.at("stack").get<std::string>());
            g.sys = std::make_shared<StructureConstants>();
            for (const auto& o : gj.at("objects"))
                g.sys->add_object(o.at(0).get<std::string>(),
                                  g.stack->chart(o.at(1).get<std::string>()));
            for (const auto& p : gj.at("pairs")) {
                int from = g.sys->object(p.at("from").get<std::string>());
                int to = g.sys->object(p.at("to").get<std::string>());
                int from_chart = g.sys->object_chart(from);
                int to_chart = g.sys->object_chart(to);
                auto fq = g.stack->presentation_at(from_chart, {from_chart})->quiver();
                auto tq = g.stack->presentation_at(to_chart, {to_chart})->quiver();
                std::vector<AGen> gens;
                for (const auto& gg : p.at("gens"))
                    gens.push_back({gg.at(0).get<std::string>(), gg.at(1).get<int>(),
                                    fq->vertex(gg.at(2).get<std::string>()),
                                    tq->vertex(gg.at(3).get<std::string>())});
                g.sys->add_pair(from, to, gens);
            }
            if (gj.contains("units"))
                for (const auto& u : gj.at("units")) {
                    int obj = g.sys->object(u.at(0).get<std::string>());
                    int chart = g.sys->object_chart(obj);
                    auto q = g.stack->presentation_at(chart, {chart})->quiver();
                    std::vector<std::pair<int, GenRef>> parts;
                    for (const auto& part : u.at(1))
                        parts.push_back({q->vertex(part.at(0).get<std::string>()),
                                         parse_genref(*g.sys, part.at(1).get<std::string>())});
                    g.sys->set_unit(obj, parts);
                }
            for (const auto& c : gj.at("constants")) {
                std::vector<GenRef> ins;
                for (const auto& i : c.at("inputs"))
                    ins.push_back(parse_genref(*g.sys, i.get<std::string>()));
                g.sys->add_constant(ins,
                                    parse_scalar(c.at("coeff").get<std::string>(), *ds.symbols,
                                                 ds.defines.get()),
                                    parse_genref(*g.sys, c.at("out").get<std::string>()));
            }
            if (gj.contains("deformation")) {
                g.b.truncation = gj.at("deformation").value("truncation", 8);
                for (auto& [obj_name, parts] : gj.at("deformation").at("parts").items()) {
                    int obj = g.sys->object(obj_name);
                    int chart = g.sys->object_chart(obj);
                    auto q = g.stack->presentation_at(chart, {chart})->quiver();
                    std::vector<Deformation::Part> ps;
                    for (const auto& part : parts)
                        ps.push_back({q->arrow(part.at(0).get<std::string>()),
                                      parse_genref(*g.sys, part.at(1).get<std::string>())});
                    g.b.by_object[obj] = ps;
                }
            }
            if (gj.contains("alphas"))
                for (const auto& a : gj.at("alphas")) {
                    int from = g.sys->object(a.at("from").get<std::string>());
                    int to = g.sys->object(a.at("to").get<std::string>());
                    ExtElement e;
                    e.from_obj = from;
                    e.to_obj = to;
                    int chart = g.sys->object_chart(from);
                    auto q = g.stack->presentation_at(chart, {chart})->quiver();
                    for (const auto& t : a.at("terms"))
                        e.terms.push_back(
                            {parse_element(t.at(0).get<std::string>(), q, *ds.symbols,
                                           ds.defines.get()),
                             Element(), parse_genref(*g.sys, t.at(1).get<std::string>())});
                    g.alpha[{from, to}] = e;
                }
            ds.gluings.emplace(name, std::move(g));
        }

    // twisted complexes
    if (j.contains("twisted"))
        for (auto& [name, tj] : j["twisted"].items()) {
            auto tc = std::make_shared<TwistedComplex>();
            tc->stack = ds.stacks.at(tj.at("stack").get<std::string>());
            if (tj.contains("op_presentation"))
                tc->op_pres = ds.presentation(tj.at("op_presentation").get<std::string>());
            for (const auto& m : tj.at("modules")) {
                int chart = tc->stack->chart(m.at(0).get<std::string>());
                auto q = tc->stack->presentation_at(chart, {chart})->quiver();
                std::vector<ModuleGen> gens;
                for (const auto& gg : m.at(1)) {
                    ModuleGen mg;
                    mg.label = gg.at(0).get<std::string>();
                    mg.chart_vertex = q->vertex(gg.at(1).get<std::string>());
                    mg.degree = gg.at(2).get<int>();
                    if (gg.size() > 3 && tc->op_pres)
                        mg.op_vertex = tc->op_pres->quiver()->vertex(gg.at(3).get<std::string>());
                    gens.push_back(mg);
                }
                tc->module.set_generators(chart, gens);
            }
            for (const auto& cj : tj.at("cells")) {
                std::vector<int> tuple;
                for (const auto& c : cj.at("tuple"))
                    tuple.push_back(tc->stack->chart(c.get<std::string>()));
                MorphismCell cell(tuple);
                auto srcq = tc->stack->presentation_at(tuple.back(), tuple)->quiver();
                auto dstq = tc->stack->presentation_at(tuple.front(), tuple)->quiver();
                QuiverPtr opq = tc->op_pres ? tc->op_pres->quiver() : nullptr;
                for (const auto& e : cj.at("entries")) {
                    int src = tc->module.find(tuple.back(), e.at(0).get<std::string>());
                    int dst = tc->module.find(tuple.front(), e.at(1).get<std::string>());
                    if (src < 0 || dst < 0)
                        throw Error("cell entry references unknown generator in " + label);
                    for (auto& t : parse_cell_entry(e.at(2).get<std::string>(), srcq, dstq,
                                                    opq, *ds.symbols, ds.defines.get()))
                        cell.add_term(src, dst, std::move(t));
                }
                tc->mc.set_cell(std::move(cell));
            }
            ds.twisted.emplace(name, std::move(tc));
        }

    return ds;
}

Dataset parse_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dataset_text(ss.str(), path);
}

} // namespace qstack
