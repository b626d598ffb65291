#pragma once

#include "qstack/stack.hpp"

namespace qstack {

// One graded generator of a free module over a chart. `op_vertex` types the
// coefficient-algebra side (tail of the op word), when a coefficient
// presentation is attached; -1 otherwise.
struct ModuleGen {
    int chart_vertex = 0;
    int degree = 0;
    std::string label;
    int op_vertex = -1;
};

// Graded free modules, one generator list per chart.
class GradedFreeModule {
public:
    void set_generators(int chart, std::vector<ModuleGen> gens);
    const std::vector<ModuleGen>& generators(int chart) const;
    int find(int chart, const std::string& label) const;  // -1 if absent

private:
    std::map<int, std::vector<ModuleGen>> gens_;
};

// Atomic sandwich term, all components single normal-form words:
//   chart side:  p |-> left * G(p * right) * post
//   op side:     q |-> op_left * q * op_right
// Absent factors are encoded as the default PathWord (is_none()). `left`
// covers the coefficient-word cells of the bundled data (composable at
// trivial gerbes only); `right`/`post` is the intertwining form of the paper.
struct SandwichTerm {
    Scalar coeff;
    PathWord right;    // source chart
    PathWord post;     // target chart
    PathWord left;     // target chart
    PathWord op_left;  // coefficient presentation
    PathWord op_right; // coefficient presentation

    bool same_words(const SandwichTerm& o) const {
        return right == o.right && post == o.post && left == o.left &&
               op_left == o.op_left && op_right == o.op_right;
    }
    bool operator<(const SandwichTerm& o) const;
};

inline bool word_is_none(const PathWord& w) {
    return w.trivial_vertex < 0 && w.arrows.empty();
}

// Matrix of sandwich-term sums over a Cech index tuple. Entries are keyed by
// (source generator, target generator); the module bidegree of an entry is
// read off the generator degrees.
class MorphismCell {
public:
    MorphismCell() = default;
    MorphismCell(std::vector<int> tuple) : tuple_(std::move(tuple)) {}

    const std::vector<int>& tuple() const { return tuple_; }
    int cech_degree() const { return (int)tuple_.size() - 1; }
    int src_chart() const { return tuple_.back(); }
    int dst_chart() const { return tuple_.front(); }

    void add_term(int src_gen, int dst_gen, SandwichTerm t);
    const std::map<std::pair<int, int>, std::vector<SandwichTerm>>& entries() const {
        return entries_;
    }

    MorphismCell scaled(const Rational& r) const;

private:
    std::vector<int> tuple_;
    std::map<std::pair<int, int>, std::vector<SandwichTerm>> entries_;
};

// A module vector over one chart: coefficient pairs per generator.
struct ModuleVector {
    struct Term {
        int gen;
        Element chart_part;
        Element op_part;  // over the coefficient presentation; unit if unused
    };
    int chart = -1;
    std::vector<Term> terms;
};

// Collection of cells indexed by tuple; bidegrees are read per entry.
class Cochain {
public:
    void set_cell(MorphismCell cell);
    const std::map<std::vector<int>, MorphismCell>& cells() const { return cells_; }
    const MorphismCell* cell_at(const std::vector<int>& tuple) const;

private:
    std::map<std::vector<int>, MorphismCell> cells_;
};

// Twisted complex: modules over the stack charts plus a total-degree-1 cochain.
struct TwistedComplex {
    QuiverStackPtr stack;
    GradedFreeModule module;
    PresentationPtr op_pres;  // optional coefficient presentation (may be null)
    Cochain mc;               // the Maurer-Cartan element a
};

// Normalize and cancel the sandwich terms of a cell entrywise.
MorphismCell normalize_cell(const TwistedComplex& src, const TwistedComplex& dst,
                            const MorphismCell& cell);

// Apply a cell to a module vector over its source chart.
ModuleVector cell_apply(const TwistedComplex& src, const TwistedComplex& dst,
                        const MorphismCell& cell, const ModuleVector& x);

// Gerbe-corrected composition: u after v, tuples sharing the middle index.
MorphismCell cell_cup(const TwistedComplex& src, const TwistedComplex& mid,
                      const TwistedComplex& dst, const MorphismCell& u,
                      const MorphismCell& v);

// (u . v)^{p+r, q+s} = (-1)^{qr} u cup v, summed over tuple splittings.
Cochain cochain_product(const TwistedComplex& src, const TwistedComplex& mid,
                        const TwistedComplex& dst, const Cochain& u, const Cochain& v);

// Interior-deletion alternating sum; new tuples drawn from the stack's charts.
Cochain cech_diff(const TwistedComplex& tc, const Cochain& u);

struct McItem {
    std::vector<int> tuple;
    std::string src_label, dst_label;
    std::vector<SandwichTerm> residual;  // empty = passes
};

// Residuals of the Maurer-Cartan equation cech(a) + a.a = 0, cellwise.
std::vector<McItem> mc_check(const TwistedComplex& tc);

// d_A(phi) = cech(phi) + b.phi - (-1)^{|phi|} phi.a, entrywise.
Cochain morphism_diff(const TwistedComplex& src, const TwistedComplex& dst,
                      const Cochain& phi);

// The `usual differential' d(phi) = b0.phi - (-1)^{|phi|} phi.a0 using only the
// single-index (0,1)-cells of the two Maurer-Cartan elements.
Cochain hom_diff(const TwistedComplex& src, const TwistedComplex& dst, const Cochain& phi);

std::string term_str(const SandwichTerm& t, const TwistedComplex& tc, int src_chart,
                     int dst_chart);

} // namespace qstack
