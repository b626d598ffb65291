#pragma once

#include "qstack/rewrite.hpp"

namespace qstack {

// Thin representation of one presented quiver algebra inside another:
// vertex map plus arrow-to-element assignment; relations verified, not assumed.
class QuiverRep {
public:
    QuiverRep(std::string name, PresentationPtr source, PresentationPtr target);

    static QuiverRep identity(const std::string& name, const PresentationPtr& p);

    const std::string& name() const { return name_; }
    const PresentationPtr& source() const { return source_; }
    const PresentationPtr& target() const { return target_; }

    void map_vertex(int src_vertex, int tgt_vertex);
    void map_arrow(int src_arrow, Element image);      // termwise endpoint-checked

    int vertex_image(int v) const;
    const Element& arrow_image(int a) const;
    bool has_arrow_image(int a) const;

    // Re-target to a presentation over a quiver containing target()'s arrows.
    QuiverRep retarget(const PresentationPtr& bigger) const;

    // Derive images for registered source inverses from single-path monomial
    // images of the direct arrows (reversed word of inverted letters).
    void derive_inverse_images();

private:
    std::string name_;
    PresentationPtr source_, target_;
    std::vector<int> vertex_map_;
    std::vector<std::optional<Element>> arrow_map_;
};

// Factorwise application, e_v -> e_{G(v)}, linear extension; normalized in the
// target presentation.
Element rep_apply(const QuiverRep& g, const Element& x);

struct RepCheckItem {
    std::string what;            // rule description
    Membership status;
    Element residual;
};

// For every source rule lhs->rhs, decide whether apply(lhs)-apply(rhs) reduces
// to zero in the target within the given completion bounds.
std::vector<RepCheckItem> rep_check(const QuiverRep& g, size_t max_degree, size_t max_rounds);

// Verifies nf(G(g)·G(g^-1)) and nf(G(g^-1)·G(g)) are the expected units.
std::vector<RepCheckItem> rep_check_inverses(const QuiverRep& g);

// vertex maps compose; arrows map through rep_apply(g, h(arrow)).
QuiverRep rep_compose(const std::string& name, const QuiverRep& g, const QuiverRep& h);

} // namespace qstack
