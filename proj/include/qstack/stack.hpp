#pragma once

#include "qstack/represent.hpp"

#include <map>
#include <set>

namespace qstack {

// One slot of a coefficient word: an element over a named chart.
struct WordSlot {
    int chart;
    Element elem;
};

// Coefficient word z^(k) (x) ... (x) z^(0); rightmost slot is the landing chart.
using TensorWord = std::vector<WordSlot>;

struct CheckItem {
    std::string what;
    Element residual;   // zero iff the item passes
};

// Quiver algebroid stack: chart presentations, pairwise localization sets,
// transition representations, gerbe assignments. Localized presentations and
// transitions over larger overlaps are built (and cached) on demand;
// inverse-arrow images are derived from monomial direct images.
class QuiverStack {
public:
    struct TransitionSpec {
        bool composed = false;
        int via = -1;
        std::map<std::string, std::string> vertex_map;   // src vertex -> tgt vertex
        std::map<std::string, std::string> arrow_map;    // src arrow -> element text
    };

    int add_chart(const std::string& name, PresentationPtr base);
    int chart(const std::string& name) const;
    int num_charts() const { return (int)charts_.size(); }
    const std::string& chart_name(int i) const { return charts_[i].name; }
    const SymbolTablePtr& symbols() const;
    const std::map<std::string, Exponent>* defines() const { return defines_; }
    void set_defines(const std::map<std::string, Exponent>* d) { defines_ = d; }

    // S_{i,{i,j}}: arrows of chart i inverted over the overlap with chart j
    void set_pair_localization(int i, int j, std::vector<std::string> arrows);
    // auxiliary confluence rules for chart i localized at exactly `arrows`
    void add_aux_rules(int i, std::vector<std::string> arrows,
                       std::vector<std::pair<std::string, std::string>> rules);
    void set_transition(int i, int j, TransitionSpec spec);
    void set_gerbe(int i, int j, int k, const std::string& vertex,
                   const std::string& elem, const std::string& inverse);
    void set_maximal_faces(std::vector<std::vector<int>> faces);

    bool tuple_overlaps(const std::vector<int>& tuple) const;
    std::vector<std::string> localization_set(int chart, const std::vector<int>& tuple) const;

    PresentationPtr presentation_at(int chart, const std::vector<int>& tuple) const;
    const QuiverRep& transition_at(int i, int j, const std::vector<int>& tuple) const;
    // gerbe c_{ijk}(v) and its inverse, over presentation_at(i, tuple)
    std::pair<Element, Element> gerbe_at(int i, int j, int k, int vertex_of_chart_k,
                                         const std::vector<int>& tuple) const;

    std::vector<CheckItem> check_cocycle(int i, int j, int k) const;
    std::vector<CheckItem> check_tetrahedron(int i, int j, int k, int l) const;
    std::vector<CheckItem> check_cocycle_all() const;
    std::vector<CheckItem> check_tetrahedron_all() const;

    // `extra` charts join the overlap tuple (used when a word is evaluated over
    // a larger common localization than its own slots span)
    Element mult_M(const TensorWord& w, const std::vector<int>& extra = {}) const;
    Element mult_Mop(const TensorWord& w, const std::vector<int>& extra = {}) const;

    // New stack on `keep` with transitions through the hub and recomputed gerbes.
    std::shared_ptr<QuiverStack> restrict_through_hub(const std::vector<int>& keep,
                                                      int hub) const;

private:
    struct ChartData {
        std::string name;
        PresentationPtr base;
    };

    std::vector<int> tuple_key(const std::vector<int>& tuple) const;

    std::vector<ChartData> charts_;
    std::map<std::pair<int, int>, std::vector<std::string>> pair_loc_;
    std::map<std::pair<int, std::vector<std::string>>,
             std::vector<std::pair<std::string, std::string>>> aux_rules_;
    std::map<std::pair<int, int>, TransitionSpec> transitions_;
    std::map<std::tuple<int, int, int>,
             std::map<std::string, std::pair<std::string, std::string>>> gerbes_;
    std::vector<std::vector<int>> maximal_faces_;  // empty = complete lattice
    const std::map<std::string, Exponent>* defines_ = nullptr;

    mutable std::map<std::pair<int, std::vector<std::string>>, PresentationPtr> pres_cache_;
    mutable std::map<std::tuple<int, int, std::vector<int>>, QuiverRep> rep_cache_;
};

using QuiverStackPtr = std::shared_ptr<QuiverStack>;

} // namespace qstack
