#pragma once

#include "qstack/quiver.hpp"

#include <optional>

namespace qstack {

// Degree-first, then left-lexicographic by arrow precedence on written words.
class TermOrder {
public:
    TermOrder() = default;
    TermOrder(const Quiver& q, const std::vector<std::string>& precedence);

    // returns true if a < b
    bool less(const PathWord& a, const PathWord& b) const;
    int rank(int arrow) const { return rank_.at(arrow); }

    // appends ranks for arrows added after construction (localization inverses)
    void extend_to(const Quiver& q);

private:
    std::vector<int> rank_;
};

struct RewriteRule {
    PathWord lhs;      // plain word, no scalar
    Element rhs;
    std::string origin;  // "relation", "unit", "aux", "completion"
};

struct ConfluenceIssue {
    PathWord word;          // the overlap word
    Element nf_left;        // resolving the left redex first
    Element nf_right;
    int rule_a = -1, rule_b = -1;
};

enum class Membership { Member, Undecided };

struct MembershipVerdict {
    Membership status = Membership::Undecided;
    Element residual;       // normal form under the (possibly enlarged) system
    std::vector<RewriteRule> added_rules;
};

// Quotient path algebra presented by an oriented rewriting system.
class Presentation {
public:
    Presentation(std::string name, QuiverPtr quiver, SymbolTablePtr symbols, TermOrder order);

    const std::string& name() const { return name_; }
    const QuiverPtr& quiver() const { return quiver_; }
    const SymbolTablePtr& symbols() const { return symbols_; }
    const TermOrder& order() const { return order_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const std::vector<std::pair<int, int>>& inverse_pairs() const { return inverses_; }

    // rhs terms must be strictly below lhs and endpoint-compatible
    void add_rule(PathWord lhs, Element rhs, const std::string& origin = "relation");
    void register_inverse(int arrow, int inverse);
    int inverse_of(int arrow) const;   // -1 if not registered

    size_t max_lhs_length() const;

    std::string str_rules() const;

private:
    std::string name_;
    QuiverPtr quiver_;
    SymbolTablePtr symbols_;
    TermOrder order_;
    std::vector<RewriteRule> rules_;
    std::vector<std::pair<int, int>> inverses_;
};

using PresentationPtr = std::shared_ptr<const Presentation>;

// Deterministic normal form: leftmost occurrence, lowest-indexed rule.
Element normal_form(const Presentation& p, const Element& x);

// Randomized-strategy reduction used as the independence oracle in tests.
Element normal_form_randomized(const Presentation& p, const Element& x, unsigned seed);

// Enumerates suffix-prefix and inclusion overlaps of combined length <= max_len.
std::vector<ConfluenceIssue> check_local_confluence(const Presentation& p, size_t max_len);

// Bounded overlap completion, then reduction of x.
MembershipVerdict ideal_member_bounded(const Presentation& p, const Element& x,
                                       size_t max_degree, size_t max_rounds);

// Bounded completion returning the joinability-restoring rules it had to add;
// used to derive the shipped auxiliary rule sets for localized presentations.
std::vector<RewriteRule> complete_rules(const Presentation& p, size_t max_degree,
                                        size_t max_rounds);

// Adds reverse arrows named `<arrow>^-1` with unit rules; aux rules are
// validated by ideal_member_bounded before installation.
struct LocalizeOptions {
    size_t validate_max_degree = 6;
    size_t validate_max_rounds = 8;
};
std::shared_ptr<Presentation> localize(const Presentation& p,
                                       const std::vector<int>& arrows,
                                       const std::vector<std::pair<PathWord, Element>>& aux_rules,
                                       const LocalizeOptions& opts = {});

// One rule per arrow with nonzero cyclic derivative, oriented by `order`,
// normalized to leading coefficient 1.
std::shared_ptr<Presentation> jacobi_presentation(const std::string& name,
                                                  const QuiverPtr& quiver,
                                                  const SymbolTablePtr& symbols,
                                                  const Superpotential& phi,
                                                  TermOrder order);

} // namespace qstack
