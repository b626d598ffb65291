#pragma once

#include "qstack/twisted.hpp"

namespace qstack {

// A generator of CF(A,B) for an ordered object pair: integer degree plus
// chart-vertex typing at both ends (tail in chart(A), head in chart(B)).
struct AGen {
    std::string label;
    int degree = 0;
    int tail_vertex = 0;  // vertex of chart(A); the collapsed coefficient is
                          // tail-typed here
    int head_vertex = 0;  // vertex of chart(B)
};

struct GenRef {
    int pair = -1;  // index into the pair list
    int index = -1; // generator index within the pair
    bool operator<(const GenRef& o) const {
        return std::tie(pair, index) < std::tie(o.pair, o.index);
    }
    bool operator==(const GenRef& o) const { return pair == o.pair && index == o.index; }
};

// Structure-constant system with quiver-algebra coefficients.  Objects are
// labelled and chart-assigned; tables m_k map composable generator tuples to
// scalar multiples of output generators.
class StructureConstants {
public:
    int add_object(const std::string& name, int chart);
    int object(const std::string& name) const;
    int num_objects() const { return (int)objects_.size(); }
    int object_chart(int obj) const { return objects_[obj].chart; }
    const std::string& object_name(int obj) const { return objects_[obj].name; }

    int add_pair(int from_obj, int to_obj, std::vector<AGen> gens);
    int find_pair(int from_obj, int to_obj) const;  // -1 if absent
    const std::vector<AGen>& gens(int pair) const { return pairs_[pair].gens; }
    int pair_from(int pair) const { return pairs_[pair].from; }
    int pair_to(int pair) const { return pairs_[pair].to; }
    GenRef gen_ref(int from_obj, int to_obj, const std::string& label) const;

    // designated unit of an object: an extended element 1_L = sum e_v 1_{L,v}
    void set_unit(int obj, std::vector<std::pair<int, GenRef>> unit_parts);
    const std::vector<std::pair<int, GenRef>>& unit(int obj) const;
    bool is_unit_gen(const GenRef& g) const;

    void add_constant(const std::vector<GenRef>& inputs, Scalar coeff, GenRef output);
    const std::map<std::vector<GenRef>, std::vector<std::pair<Scalar, GenRef>>>& tables()
        const {
        return m_;
    }
    std::vector<std::pair<Scalar, GenRef>> lookup(const std::vector<GenRef>& inputs) const;

    // composability: consecutive pairs chain and the output pair exists
    bool chain_ok(const std::vector<GenRef>& inputs) const;

private:
    struct Object {
        std::string name;
        int chart;
        std::vector<std::pair<int, GenRef>> unit;
    };
    struct Pair {
        int from, to;
        std::vector<AGen> gens;
    };
    std::vector<Object> objects_;
    std::vector<Pair> pairs_;
    std::map<std::pair<int, int>, int> pair_index_;
    std::map<std::vector<GenRef>, std::vector<std::pair<Scalar, GenRef>>> m_;
};

struct AInftyViolation {
    std::vector<GenRef> tuple;
    std::vector<std::pair<Scalar, GenRef>> residual;
};

// Stasheff identities on all composable generator tuples up to length max_k,
// with shifted-degree signs eps_i = sum_{j<i} (|v_j| - 1).
std::vector<AInftyViolation> ainfty_check(const StructureConstants& s, size_t max_k);

// Degree-1 deformation b = sum b_l B_l per object: arrow coefficients on
// degree-1 endomorphism generators.
struct Deformation {
    struct Part {
        int arrow;    // arrow of the object's chart quiver
        GenRef gen;   // degree-1 generator of CF(L,L)
    };
    std::map<int, std::vector<Part>> by_object;
    size_t truncation = 8;  // max total insertions
};

// One monomial of a deformed structure constant: the coefficient word is
// recorded slot by slot in pulled-left order; markers stand for the inputs.
struct DefAtom {
    bool is_marker = false;
    int input = -1;   // 1-based input position, when is_marker
    int object = -1;  // owning object, when an insertion atom
    int arrow = -1;
};

struct DefEntry {
    Scalar coeff;
    std::vector<DefAtom> word;  // leftmost first
    GenRef out;
};

// m_k^b tables for all k <= max_k, expanded to at most b.truncation insertions.
std::map<std::vector<GenRef>, std::vector<DefEntry>> deform(const StructureConstants& s,
                                                            const Deformation& b,
                                                            size_t max_k);

// Coefficients of m_0^b at non-unit generators, collapsed in the single chart
// of the deformed object.
std::vector<std::pair<GenRef, Element>> obstruction_ideal(const StructureConstants& s,
                                                          const Deformation& b,
                                                          const PresentationPtr& chart);

// One term of an extended Floer element: collapsed coefficient over the chart
// of the first object (def:CF_I), optional op-side coefficient.
struct ExtTerm {
    Element coeff;
    Element op_coeff;  // optional; over the op companion algebra
    GenRef gen;
    // left-end restoration slot of a collapsed op word (chart of the first
    // contributing input's to-object); negative = atomic, derive from context
    int op_far_chart = -1;
    int op_far_vertex = 0;
};

struct ExtElement {
    int from_obj = -1, to_obj = -1;
    std::vector<ExtTerm> terms;
};

// Stack-extended A-infinity evaluator: coefficient words are assembled per the
// pulled-left rule and collapsed through mult_M (or mult_Mop for the hat
// variants).
class ExtendedEval {
public:
    ExtendedEval(const StructureConstants& s, QuiverStackPtr stack, Deformation b,
                 size_t max_k = 6);

    const StructureConstants& constants() const { return s_; }
    const QuiverStackPtr& stack() const { return stack_; }
    const std::map<std::vector<GenRef>, std::vector<DefEntry>>& tables() const {
        return tables_;
    }

    // m_{k,X}^{b...}(x_1,...,x_k); deformations are applied at every slot whose
    // object carries a b-part
    ExtElement eval(const std::vector<ExtElement>& inputs) const;

    // hat variant: collapse with M^op on the main side; bar_hat additionally
    // moves the rightmost op coefficient to the leftmost main slot (the R
    // operator) before collapsing
    ExtElement eval_hat(const std::vector<ExtElement>& inputs, bool bar,
                        const PresentationPtr& op_chart) const;

    ExtElement unit_element(int obj) const;
    Element zero_coeff(int chart) const;

    // canonical form for comparisons: coefficients normalized per generator
    ExtElement normalize(const ExtElement& x) const;
    bool is_zero(const ExtElement& x) const;
    bool equal(const ExtElement& a, const ExtElement& b) const;

private:
    ExtElement eval_impl(const std::vector<ExtElement>& inputs, bool op_collapse,
                         bool bar, const PresentationPtr& op_chart) const;

    const StructureConstants& s_;
    QuiverStackPtr stack_;
    Deformation b_;
    std::map<std::vector<GenRef>, std::vector<DefEntry>> tables_;
};

struct GluingIssue {
    std::string what;
    ExtElement residual;
};

// m1(alpha_jk) = 0, m2(alpha_jk, alpha_kl) = alpha_jl, higher products vanish.
// alpha is indexed by object pairs; diagonal entries default to units.
std::vector<GluingIssue> gluing_check(const ExtendedEval& ev,
                                      const std::map<std::pair<int, int>, ExtElement>& alpha,
                                      size_t max_p = 3);

// Assembles the twisted complex F(L) from the gluing data: chart differentials
// (-1)^{|.|} m_{1,X}, transitions m_{2,X}(alpha,.), higher cells with the
// displayed (-1)^{(k-1)|.|'} sign.
TwistedComplex mirror_functor_object(const ExtendedEval& ev,
                                     const std::map<std::pair<int, int>, ExtElement>& alpha,
                                     int target_obj);

} // namespace qstack
