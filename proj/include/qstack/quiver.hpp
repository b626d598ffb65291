#pragma once

#include "qstack/scalar.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qstack {

struct Arrow {
    std::string name;
    int tail = -1;
    int head = -1;
    int inverse_of = -1;  // arrow id this one inverts, or -1
};

// Directed multigraph; vertices and arrows generate the path algebra.
class Quiver {
public:
    Quiver(std::vector<std::string> vertices,
           std::vector<std::tuple<std::string, std::string, std::string>> arrows);

    int vertex(const std::string& name) const;   // throws if absent
    int arrow(const std::string& name) const;    // throws if absent
    int find_arrow(const std::string& name) const;  // -1 if absent

    size_t num_vertices() const { return vertices_.size(); }
    size_t num_arrows() const { return arrows_.size(); }
    const std::string& vertex_name(int v) const { return vertices_.at(v); }
    const Arrow& arrow_info(int a) const { return arrows_.at(a); }

    // Extension used by localization: returns id of the new arrow.
    int add_arrow(const std::string& name, int tail, int head, int inverse_of = -1);

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::map<std::string, int> vertex_index_;
    std::map<std::string, int> arrow_index_;
};

using QuiverPtr = std::shared_ptr<const Quiver>;

// A path: either the trivial path at a vertex, or a nonempty arrow sequence.
// Arrows are stored in written order: word[0] is leftmost and acts last,
// word.back() is rightmost and acts first.
struct PathWord {
    int trivial_vertex = -1;            // >= 0 iff trivial path
    std::vector<int> arrows;

    static PathWord trivial(int v) { PathWord w; w.trivial_vertex = v; return w; }
    static PathWord of(std::vector<int> a) { PathWord w; w.arrows = std::move(a); return w; }

    bool is_trivial() const { return trivial_vertex >= 0; }
    size_t length() const { return is_trivial() ? 0 : arrows.size(); }

    int head(const Quiver& q) const {
        return is_trivial() ? trivial_vertex : q.arrow_info(arrows.front()).head;
    }
    int tail(const Quiver& q) const {
        return is_trivial() ? trivial_vertex : q.arrow_info(arrows.back()).tail;
    }

    bool valid(const Quiver& q) const;

    bool operator==(const PathWord& o) const {
        return trivial_vertex == o.trivial_vertex && arrows == o.arrows;
    }
    // canonical: length first, then arrow ids left to right; trivial paths by vertex
    bool operator<(const PathWord& o) const;

    std::string str(const Quiver& q) const;
};

// Finite linear combination of paths with Scalar coefficients.
class Element {
public:
    Element() = default;
    explicit Element(QuiverPtr q) : quiver_(std::move(q)) {}
    Element(QuiverPtr q, Scalar s, PathWord w);

    static Element unit_at(const QuiverPtr& q, int vertex) {
        return Element(q, Scalar::one(), PathWord::trivial(vertex));
    }
    static Element total_unit(const QuiverPtr& q);
    static Element arrow(const QuiverPtr& q, int arrow_id) {
        return Element(q, Scalar::one(), PathWord::of({arrow_id}));
    }

    const QuiverPtr& quiver() const { return quiver_; }
    const std::vector<std::pair<Scalar, PathWord>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Scalar s, PathWord w);

    Element operator+(const Element& o) const;
    Element operator-() const;
    Element operator-(const Element& o) const { return *this + (-o); }
    Element operator*(const Element& o) const;   // fibered product, mismatch -> 0
    Element scaled(const Scalar& s) const;

    bool operator==(const Element& o) const { return terms_ == o.terms_; }
    bool operator!=(const Element& o) const { return !(*this == o); }

    std::string str(const SymbolTable& tab) const;

private:
    QuiverPtr quiver_;
    std::vector<std::pair<Scalar, PathWord>> terms_;  // sorted by word, no zero scalars
};

// Concatenation p*q (q acts first); zero Element when endpoints mismatch.
Element path_compose(const QuiverPtr& q, const PathWord& p, const PathWord& r);

// Linear combination of cyclic words (head == tail), considered up to rotation.
class Superpotential {
public:
    explicit Superpotential(QuiverPtr q) : quiver_(std::move(q)) {}

    void add_term(Scalar s, PathWord cycle);

    const QuiverPtr& quiver() const { return quiver_; }
    const std::vector<std::pair<Scalar, PathWord>>& terms() const { return terms_; }

private:
    QuiverPtr quiver_;
    std::vector<std::pair<Scalar, PathWord>> terms_;
};

// For each occurrence of `arrow` in each cycle: rotate the occurrence leftmost,
// delete it, keep the coefficient.
Element cyclic_derivative(const Superpotential& phi, int arrow);

// Re-express a path/element over another quiver instance, matching vertices
// and arrows by name.
PathWord transplant_path(const PathWord& w, const Quiver& from, const Quiver& to);
Element transplant_element(const Element& e, const QuiverPtr& to);

// Path syntax: whitespace-separated arrow names, or `e(vertex)`.
PathWord parse_path(const std::string& text, const Quiver& q);
Element parse_element(const std::string& text, const QuiverPtr& q, const SymbolTable& tab,
                      const std::map<std::string, Exponent>* defines = nullptr);

} // namespace qstack
