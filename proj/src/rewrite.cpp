#include "qstack/rewrite.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace qstack {

TermOrder::TermOrder(const Quiver& q, const std::vector<std::string>& precedence) {
    rank_.assign(q.num_arrows(), -1);
    int r = 0;
    for (const auto& name : precedence) {
        int a = q.arrow(name);
        if (rank_[a] != -1) throw Error("arrow listed twice in precedence: " + name);
        rank_[a] = r++;
    }
    for (size_t a = 0; a < rank_.size(); ++a)
        if (rank_[a] == -1) rank_[a] = r++;
}

void TermOrder::extend_to(const Quiver& q) {
    int r = rank_.empty() ? 0 : *std::max_element(rank_.begin(), rank_.end()) + 1;
    while (rank_.size() < q.num_arrows()) rank_.push_back(r++);
}

bool TermOrder::less(const PathWord& a, const PathWord& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    if (a.is_trivial()) return a.trivial_vertex < b.trivial_vertex;
    for (size_t i = 0; i < a.arrows.size(); ++i) {
        int ra = rank_.at(a.arrows[i]), rb = rank_.at(b.arrows[i]);
        if (ra != rb) return ra < rb;
    }
    return false;
}

Presentation::Presentation(std::string name, QuiverPtr quiver, SymbolTablePtr symbols,
                           TermOrder order)
    : name_(std::move(name)), quiver_(std::move(quiver)), symbols_(std::move(symbols)),
      order_(std::move(order)) {
    order_.extend_to(*quiver_);
}

void Presentation::add_rule(PathWord lhs, Element rhs, const std::string& origin) {
    if (lhs.is_trivial()) throw Error("rewrite rule lhs must be a nontrivial word");
    if (!lhs.valid(*quiver_)) throw Error("rewrite rule lhs has endpoint mismatch");
    int h = lhs.head(*quiver_), t = lhs.tail(*quiver_);
    for (const auto& [s, w] : rhs.terms()) {
        if (!order_.less(w, lhs))
            throw Error("rule rhs term not below lhs in term order: " + w.str(*quiver_) +
                        " vs " + lhs.str(*quiver_));
        if (w.head(*quiver_) != h || w.tail(*quiver_) != t)
            throw Error("rule rhs term endpoint mismatch: " + w.str(*quiver_));
    }
    rules_.push_back(RewriteRule{std::move(lhs), rhs, origin});
}

void Presentation::register_inverse(int arrow, int inverse) {
    inverses_.push_back({arrow, inverse});
}

int Presentation::inverse_of(int arrow) const {
    for (const auto& [a, b] : inverses_) {
        if (a == arrow) return b;
        if (b == arrow) return a;
    }
    return -1;
}

size_t Presentation::max_lhs_length() const {
    size_t m = 0;
    for (const auto& r : rules_) m = std::max(m, r.lhs.length());
    return m;
}

std::string Presentation::str_rules() const {
    std::string s;
    for (const auto& r : rules_) {
        s += r.lhs.str(*quiver_) + " => " + r.rhs.str(*symbols_) + "\n";
    }
    return s;
}

namespace {

// first match of `pat` as a contiguous subword of `w`, scanning left to right,
// at each position trying rules in index order; returns (pos, rule) or nullopt
std::optional<std::pair<size_t, size_t>> find_redex(const std::vector<RewriteRule>& rules,
                                                    const PathWord& w) {
    if (w.is_trivial()) return std::nullopt;
    for (size_t pos = 0; pos < w.arrows.size(); ++pos) {
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            const auto& lhs = rules[ri].lhs.arrows;
            if (lhs.size() > w.arrows.size() - pos) continue;
            bool match = true;
            for (size_t k = 0; k < lhs.size(); ++k)
                if (w.arrows[pos + k] != lhs[k]) { match = false; break; }
            if (match) return std::make_pair(pos, ri);
        }
    }
    return std::nullopt;
}

Element splice(const QuiverPtr& q, const PathWord& w, size_t pos, size_t len,
               const Element& replacement) {
    // w with w[pos..pos+len) replaced by each replacement term
    Element out(q);
    for (const auto& [s, r] : replacement.terms()) {
        std::vector<int> nw;
        nw.insert(nw.end(), w.arrows.begin(), w.arrows.begin() + pos);
        if (!r.is_trivial()) nw.insert(nw.end(), r.arrows.begin(), r.arrows.end());
        if (nw.empty() && pos + len == w.arrows.size() && pos == 0) {
            // whole word replaced by a trivial path
            out.add_term(s, r);
            continue;
        }
        nw.insert(nw.end(), w.arrows.begin() + pos + len, w.arrows.end());
        if (nw.empty())
            out.add_term(s, r);  // r trivial, word fully consumed
        else
            out.add_term(s, PathWord::of(std::move(nw)));
    }
    return out;
}

constexpr size_t kMaxReductionSteps = 2000000;

} // namespace

Element normal_form(const Presentation& p, const Element& x) {
    Element done(p.quiver());
    // worklist of pending terms
    std::vector<std::pair<Scalar, PathWord>> todo(x.terms().begin(), x.terms().end());
    size_t steps = 0;
    while (!todo.empty()) {
        auto [s, w] = todo.back();
        todo.pop_back();
        if (++steps > kMaxReductionSteps)
            throw Error("reduction did not terminate within step budget (presentation " +
                        p.name() + ")");
        auto redex = find_redex(p.rules(), w);
        if (!redex) {
            done.add_term(s, w);
            continue;
        }
        auto [pos, ri] = *redex;
        Element rep = splice(p.quiver(), w, pos, p.rules()[ri].lhs.arrows.size(),
                             p.rules()[ri].rhs);
        for (const auto& [rs, rw] : rep.terms()) todo.push_back({s * rs, rw});
    }
    return done;
}

Element normal_form_randomized(const Presentation& p, const Element& x, unsigned seed) {
    std::mt19937 rng(seed);
    Element done(p.quiver());
    std::vector<std::pair<Scalar, PathWord>> todo(x.terms().begin(), x.terms().end());
    size_t steps = 0;
    while (!todo.empty()) {
        auto [s, w] = todo.back();
        todo.pop_back();
        if (++steps > kMaxReductionSteps)
            throw Error("randomized reduction exceeded step budget");
        // collect all redexes, pick one at random
        std::vector<std::pair<size_t, size_t>> redexes;
        if (!w.is_trivial()) {
            for (size_t pos = 0; pos < w.arrows.size(); ++pos)
                for (size_t ri = 0; ri < p.rules().size(); ++ri) {
                    const auto& lhs = p.rules()[ri].lhs.arrows;
                    if (lhs.size() > w.arrows.size() - pos) continue;
                    bool match = true;
                    for (size_t k = 0; k < lhs.size(); ++k)
                        if (w.arrows[pos + k] != lhs[k]) { match = false; break; }
                    if (match) redexes.push_back({pos, ri});
                }
        }
        if (redexes.empty()) {
            done.add_term(s, w);
            continue;
        }
        auto [pos, ri] = redexes[rng() % redexes.size()];
        Element rep = splice(p.quiver(), w, pos, p.rules()[ri].lhs.arrows.size(),
                             p.rules()[ri].rhs);
        for (const auto& [rs, rw] : rep.terms()) todo.push_back({s * rs, rw});
    }
    return done;
}

namespace {

// critical pair words for rules (a, b): overlaps where a suffix of lhs_a equals
// a prefix of lhs_b (word = lhs_a glued with lhs_b), plus inclusions of lhs_b
// inside lhs_a
struct Overlap {
    PathWord word;
    size_t pos_a, pos_b;   // positions of the two redexes in word
    size_t rule_a, rule_b;
};

std::vector<Overlap> enumerate_overlaps(const Presentation& p, size_t max_len) {
    std::vector<Overlap> out;
    const auto& rules = p.rules();
    for (size_t i = 0; i < rules.size(); ++i) {
        const auto& A = rules[i].lhs.arrows;
        for (size_t j = 0; j < rules.size(); ++j) {
            const auto& B = rules[j].lhs.arrows;
            // suffix of A = prefix of B, proper overlap
            for (size_t k = 1; k < std::min(A.size(), B.size()); ++k) {
                if (A.size() + B.size() - k > max_len) continue;
                bool match = true;
                for (size_t t = 0; t < k; ++t)
                    if (A[A.size() - k + t] != B[t]) { match = false; break; }
                if (!match) continue;
                std::vector<int> w = A;
                w.insert(w.end(), B.begin() + k, B.end());
                out.push_back({PathWord::of(std::move(w)), 0, A.size() - k, i, j});
            }
            // B inside A (including equal-length distinct rules)
            if (i != j && B.size() <= A.size() && A.size() <= max_len) {
                for (size_t pos = 0; pos + B.size() <= A.size(); ++pos) {
                    bool match = true;
                    for (size_t t = 0; t < B.size(); ++t)
                        if (A[pos + t] != B[t]) { match = false; break; }
                    if (match)
                        out.push_back({rules[i].lhs, 0, pos, i, j});
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<ConfluenceIssue> check_local_confluence(const Presentation& p, size_t max_len) {
    std::vector<ConfluenceIssue> issues;
    for (const auto& ov : enumerate_overlaps(p, max_len)) {
        Element left = splice(p.quiver(), ov.word, ov.pos_a,
                              p.rules()[ov.rule_a].lhs.arrows.size(), p.rules()[ov.rule_a].rhs);
        Element right = splice(p.quiver(), ov.word, ov.pos_b,
                               p.rules()[ov.rule_b].lhs.arrows.size(), p.rules()[ov.rule_b].rhs);
        Element nl = normal_form(p, left);
        Element nr = normal_form(p, right);
        if (nl != nr)
            issues.push_back({ov.word, nl, nr, (int)ov.rule_a, (int)ov.rule_b});
    }
    return issues;
}

namespace {

// Orient nf(left - right) as a rule; fails when the leading coefficient is not
// a monomial scalar.
std::optional<RewriteRule> orient(const Presentation& p, const Element& diff) {
    if (diff.is_zero()) return std::nullopt;
    // leading term = maximal word in the order
    const auto& terms = diff.terms();
    size_t lead = 0;
    for (size_t i = 1; i < terms.size(); ++i)
        if (p.order().less(terms[lead].second, terms[i].second)) lead = i;
    const auto& [ls, lw] = terms[lead];
    if (lw.is_trivial()) return std::nullopt;  // cannot orient e_v = smaller stuff here
    if (!ls.is_monomial()) return std::nullopt;
    Scalar inv = ls.invert_monomial();
    Element rhs(diff.quiver());
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i == lead) continue;
        rhs.add_term(-(terms[i].first * inv), terms[i].second);
    }
    return RewriteRule{lw, rhs, "completion"};
}

} // namespace

std::vector<RewriteRule> complete_rules(const Presentation& p, size_t max_degree,
                                        size_t max_rounds) {
    Presentation work("completion(" + p.name() + ")", p.quiver(), p.symbols(), p.order());
    for (const auto& r : p.rules()) work.add_rule(r.lhs, r.rhs, r.origin);
    std::vector<RewriteRule> added;
    for (size_t round = 0; round < max_rounds; ++round) {
        bool any = false;
        for (const auto& issue : check_local_confluence(work, max_degree)) {
            Element diff = normal_form(work, issue.nf_left - issue.nf_right);
            if (diff.is_zero()) continue;
            auto rule = orient(work, diff);
            if (!rule || rule->lhs.length() > max_degree) continue;
            work.add_rule(rule->lhs, rule->rhs, "completion");
            added.push_back(*rule);
            any = true;
        }
        if (!any) break;
    }
    return added;
}

MembershipVerdict ideal_member_bounded(const Presentation& p, const Element& x,
                                       size_t max_degree, size_t max_rounds) {
    // work on a private copy of the presentation
    Presentation work("completion(" + p.name() + ")", p.quiver(), p.symbols(), p.order());
    for (const auto& r : p.rules()) work.add_rule(r.lhs, r.rhs, r.origin);
    for (const auto& [a, b] : p.inverse_pairs()) work.register_inverse(a, b);

    MembershipVerdict v;
    for (size_t round = 0; round <= max_rounds; ++round) {
        Element nf = normal_form(work, x);
        if (nf.is_zero()) {
            v.status = Membership::Member;
            v.residual = nf;
            return v;
        }
        if (round == max_rounds) {
            v.status = Membership::Undecided;
            v.residual = nf;
            return v;
        }
        bool added = false;
        for (const auto& issue : check_local_confluence(work, max_degree)) {
            Element diff = issue.nf_left - issue.nf_right;
            diff = normal_form(work, diff);
            if (diff.is_zero()) continue;
            auto rule = orient(work, diff);
            if (!rule) continue;
            if (rule->lhs.length() > max_degree) continue;
            work.add_rule(rule->lhs, rule->rhs, "completion");
            v.added_rules.push_back(*rule);
            added = true;
        }
        if (!added) {
            v.status = Membership::Undecided;
            v.residual = normal_form(work, x);
            return v;
        }
    }
    return v;
}

std::shared_ptr<Presentation> localize(const Presentation& p, const std::vector<int>& arrows,
                                       const std::vector<std::pair<PathWord, Element>>& aux_rules,
                                       const LocalizeOptions& opts) {
    // clone quiver with the reverse arrows appended
    std::vector<std::string> vnames;
    for (size_t v = 0; v < p.quiver()->num_vertices(); ++v)
        vnames.push_back(p.quiver()->vertex_name((int)v));
    auto nq = std::make_shared<Quiver>(vnames,
        std::vector<std::tuple<std::string, std::string, std::string>>{});
    for (size_t a = 0; a < p.quiver()->num_arrows(); ++a) {
        const Arrow& ar = p.quiver()->arrow_info((int)a);
        nq->add_arrow(ar.name, ar.tail, ar.head, ar.inverse_of);
    }
    std::vector<std::pair<int, int>> new_pairs(p.inverse_pairs());
    for (int a : arrows) {
        const Arrow& ar = p.quiver()->arrow_info(a);
        if (nq->find_arrow(ar.name + "^-1") >= 0)
            throw Error("arrow already localized: " + ar.name);
        int inv = nq->add_arrow(ar.name + "^-1", ar.head, ar.tail, a);
        new_pairs.push_back({a, inv});
    }

    // each inverse sits directly above the arrow it inverts, so that inverse
    // letters commute into place next to their base letters (keeps the
    // localized quantum-torus systems finitely confluent)
    std::vector<std::pair<long long, int>> keyed;
    for (int a = 0; a < (int)nq->num_arrows(); ++a) {
        const Arrow& ar = nq->arrow_info(a);
        if (ar.inverse_of >= 0)
            keyed.push_back({2LL * p.order().rank(ar.inverse_of) + 1, a});
        else
            keyed.push_back({2LL * p.order().rank(a), a});
    }
    std::stable_sort(keyed.begin(), keyed.end());
    std::vector<std::string> prec;
    for (const auto& [k, a] : keyed) prec.push_back(nq->arrow_info(a).name);
    TermOrder order(*nq, prec);

    auto np = std::make_shared<Presentation>(
        arrows.empty() ? p.name() : p.name() + "(loc)", nq, p.symbols(), order);
    for (const auto& r : p.rules()) np->add_rule(r.lhs, r.rhs, r.origin);
    for (const auto& [a, b] : new_pairs) np->register_inverse(a, b);

    for (int a : arrows) {
        int inv = nq->arrow(p.quiver()->arrow_info(a).name + "^-1");
        const Arrow& ar = nq->arrow_info(a);
        // gamma gamma^-1 -> e_{h(gamma)},  gamma^-1 gamma -> e_{t(gamma)}
        np->add_rule(PathWord::of({a, inv}),
                     Element::unit_at(nq, ar.head), "unit");
        np->add_rule(PathWord::of({inv, a}),
                     Element::unit_at(nq, ar.tail), "unit");
    }

    if (!aux_rules.empty()) {
        // one bounded completion of the unit-extended system, then every aux
        // rule must reduce to zero under it
        Presentation probe("validate(" + np->name() + ")", nq, p.symbols(), np->order());
        for (const auto& r : np->rules()) probe.add_rule(r.lhs, r.rhs, r.origin);
        for (const auto& r : complete_rules(probe, opts.validate_max_degree,
                                            opts.validate_max_rounds))
            probe.add_rule(r.lhs, r.rhs, "completion");
        for (const auto& [lhs_raw, rhs_raw] : aux_rules) {
            PathWord lhs = lhs_raw;
            Element rhs = transplant_element(rhs_raw, nq);
            if (rhs_raw.quiver() && rhs_raw.quiver().get() != nq.get())
                lhs = transplant_path(lhs_raw, *rhs_raw.quiver(), *nq);
            Element claim = normal_form(probe, Element(nq, Scalar::one(), lhs) - rhs);
            if (!claim.is_zero())
                throw Error("auxiliary rule rejected, residual: " +
                            claim.str(*p.symbols()) + "  (rule lhs " + lhs.str(*nq) + ")");
            np->add_rule(lhs, rhs, "aux");
        }
    }
    return np;
}

std::shared_ptr<Presentation> jacobi_presentation(const std::string& name,
                                                  const QuiverPtr& quiver,
                                                  const SymbolTablePtr& symbols,
                                                  const Superpotential& phi,
                                                  TermOrder order) {
    order.extend_to(*quiver);
    auto p = std::make_shared<Presentation>(name, quiver, symbols, order);
    for (int a = 0; a < (int)quiver->num_arrows(); ++a) {
        Element d = cyclic_derivative(phi, a);
        if (d.is_zero()) continue;
        const auto& terms = d.terms();
        size_t lead = 0;
        for (size_t i = 1; i < terms.size(); ++i)
            if (order.less(terms[lead].second, terms[i].second)) lead = i;
        const auto& [ls, lw] = terms[lead];
        if (lw.is_trivial())
            throw Error("cyclic derivative leading term is a trivial path");
        if (!ls.is_monomial())
            throw Error("cyclic derivative has non-invertible leading coefficient");
        Scalar inv = ls.invert_monomial();
        Element rhs(quiver);
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i == lead) continue;
            rhs.add_term(-(terms[i].first * inv), terms[i].second);
        }
        p->add_rule(lw, rhs, "relation");
    }
    return p;
}

} // namespace qstack
