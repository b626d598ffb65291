#include "qstack/represent.hpp"

namespace qstack {

QuiverRep::QuiverRep(std::string name, PresentationPtr source, PresentationPtr target)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)) {
    vertex_map_.assign(source_->quiver()->num_vertices(), -1);
    arrow_map_.assign(source_->quiver()->num_arrows(), std::nullopt);
}

QuiverRep QuiverRep::identity(const std::string& name, const PresentationPtr& p) {
    QuiverRep g(name, p, p);
    for (int v = 0; v < (int)p->quiver()->num_vertices(); ++v) g.map_vertex(v, v);
    for (int a = 0; a < (int)p->quiver()->num_arrows(); ++a)
        g.map_arrow(a, Element::arrow(p->quiver(), a));
    return g;
}

void QuiverRep::map_vertex(int src_vertex, int tgt_vertex) {
    vertex_map_.at(src_vertex) = tgt_vertex;
}

void QuiverRep::map_arrow(int src_arrow, Element image) {
    const Arrow& a = source_->quiver()->arrow_info(src_arrow);
    int h = vertex_image(a.head), t = vertex_image(a.tail);
    const Quiver& tq = *target_->quiver();
    for (const auto& [s, w] : image.terms()) {
        if (w.head(tq) != h || w.tail(tq) != t)
            throw Error("arrow image endpoint mismatch for " + a.name + " in rep " + name_ +
                        ": term " + w.str(tq));
    }
    arrow_map_.at(src_arrow) = std::move(image);
}

int QuiverRep::vertex_image(int v) const {
    int w = vertex_map_.at(v);
    if (w < 0) throw Error("vertex without image in rep " + name_);
    return w;
}

const Element& QuiverRep::arrow_image(int a) const {
    const auto& img = arrow_map_.at(a);
    if (!img)
        throw Error("arrow without image in rep " + name_ + ": " +
                    source_->quiver()->arrow_info(a).name);
    return *img;
}

bool QuiverRep::has_arrow_image(int a) const {
    return a < (int)arrow_map_.size() && arrow_map_[a].has_value();
}

QuiverRep QuiverRep::retarget(const PresentationPtr& bigger) const {
    const Quiver& bq = *bigger->quiver();
    QuiverRep g(name_, source_, bigger);
    for (size_t v = 0; v < vertex_map_.size(); ++v)
        if (vertex_map_[v] >= 0) {
            // vertices are shared by name between a presentation and its localizations
            g.map_vertex((int)v, bq.vertex(target_->quiver()->vertex_name(vertex_map_[v])));
        }
    for (size_t a = 0; a < arrow_map_.size(); ++a) {
        if (!arrow_map_[a]) continue;
        Element img(bigger->quiver());
        for (const auto& [s, w] : arrow_map_[a]->terms()) {
            if (w.is_trivial()) {
                img.add_term(s, PathWord::trivial(
                    bq.vertex(target_->quiver()->vertex_name(w.trivial_vertex))));
            } else {
                std::vector<int> na;
                for (int old : w.arrows)
                    na.push_back(bq.arrow(target_->quiver()->arrow_info(old).name));
                img.add_term(s, PathWord::of(std::move(na)));
            }
        }
        g.map_arrow((int)a, img);
    }
    return g;
}

void QuiverRep::derive_inverse_images() {
    const Quiver& tq = *target_->quiver();
    for (const auto& [a, inv] : source_->inverse_pairs()) {
        int missing = -1, given = -1;
        if (arrow_map_.at(a) && !arrow_map_.at(inv)) { given = a; missing = inv; }
        else if (arrow_map_.at(inv) && !arrow_map_.at(a)) { given = inv; missing = a; }
        else continue;
        const Element& img = *arrow_map_[given];
        if (img.terms().size() != 1)
            throw Error("cannot derive inverse image of non-monomial image in rep " + name_);
        const auto& [s, w] = img.terms()[0];
        Scalar sinv = s.invert_monomial();
        if (w.is_trivial()) {
            arrow_map_[missing] = Element(target_->quiver(), sinv, w);
            continue;
        }
        std::vector<int> rev;
        for (auto it = w.arrows.rbegin(); it != w.arrows.rend(); ++it) {
            const Arrow& ar = tq.arrow_info(*it);
            int ia = -1;
            if (ar.inverse_of >= 0) ia = ar.inverse_of;
            else {
                int cand = target_->inverse_of(*it);
                if (cand < 0) cand = tq.find_arrow(ar.name + "^-1");
                ia = cand;
            }
            if (ia < 0)
                throw Error("cannot invert image letter " + ar.name + " in rep " + name_);
            rev.push_back(ia);
        }
        arrow_map_[missing] = Element(target_->quiver(), sinv, PathWord::of(std::move(rev)));
    }
}

Element rep_apply(const QuiverRep& g, const Element& x) {
    const QuiverPtr& tq = g.target()->quiver();
    Element out(tq);
    for (const auto& [s, w] : x.terms()) {
        Element img(tq);
        if (w.is_trivial()) {
            img = Element::unit_at(tq, g.vertex_image(w.trivial_vertex));
        } else {
            img = Element::unit_at(tq, g.vertex_image(w.head(*x.quiver())));
            for (int a : w.arrows) img = img * g.arrow_image(a);
        }
        out = out + img.scaled(s);
    }
    return normal_form(*g.target(), out);
}

std::vector<RepCheckItem> rep_check(const QuiverRep& g, size_t max_degree, size_t max_rounds) {
    std::vector<RepCheckItem> items;
    const Presentation& src = *g.source();
    for (const auto& rule : src.rules()) {
        Element lhs_img = rep_apply(g, Element(src.quiver(), Scalar::one(), rule.lhs));
        Element rhs_img = rep_apply(g, rule.rhs);
        auto verdict = ideal_member_bounded(*g.target(), lhs_img - rhs_img,
                                            max_degree, max_rounds);
        items.push_back({rule.lhs.str(*src.quiver()) + " => " + rule.rhs.str(*src.symbols()),
                         verdict.status, verdict.residual});
    }
    return items;
}

std::vector<RepCheckItem> rep_check_inverses(const QuiverRep& g) {
    std::vector<RepCheckItem> items;
    const Presentation& src = *g.source();
    const QuiverPtr& tq = g.target()->quiver();
    for (const auto& [a, inv] : src.inverse_pairs()) {
        const Arrow& ar = src.quiver()->arrow_info(a);
        Element left = normal_form(*g.target(), g.arrow_image(a) * g.arrow_image(inv));
        Element right = normal_form(*g.target(), g.arrow_image(inv) * g.arrow_image(a));
        Element eh = Element::unit_at(tq, g.vertex_image(ar.head));
        Element et = Element::unit_at(tq, g.vertex_image(ar.tail));
        Element res_l = normal_form(*g.target(), left - eh);
        Element res_r = normal_form(*g.target(), right - et);
        items.push_back({ar.name + " * " + ar.name + "^-1",
                         res_l.is_zero() ? Membership::Member : Membership::Undecided, res_l});
        items.push_back({ar.name + "^-1 * " + ar.name,
                         res_r.is_zero() ? Membership::Member : Membership::Undecided, res_r});
    }
    return items;
}

QuiverRep rep_compose(const std::string& name, const QuiverRep& g, const QuiverRep& h) {
    if (h.target()->quiver().get() != g.source()->quiver().get())
        throw Error("rep_compose presentation mismatch: target of " + h.name() +
                    " is not source of " + g.name());
    QuiverRep out(name, h.source(), g.target());
    for (int v = 0; v < (int)h.source()->quiver()->num_vertices(); ++v)
        out.map_vertex(v, g.vertex_image(h.vertex_image(v)));
    for (int a = 0; a < (int)h.source()->quiver()->num_arrows(); ++a) {
        if (!h.has_arrow_image(a)) continue;
        out.map_arrow(a, rep_apply(g, h.arrow_image(a)));
    }
    return out;
}

} // namespace qstack
