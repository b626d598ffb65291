#include "qstack/quiver.hpp"

#include <algorithm>
#include <sstream>

namespace qstack {

Quiver::Quiver(std::vector<std::string> vertices,
               std::vector<std::tuple<std::string, std::string, std::string>> arrows)
    : vertices_(std::move(vertices)) {
    for (size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].empty()) throw Error("empty vertex name");
        if (!vertex_index_.emplace(vertices_[i], (int)i).second)
            throw Error("duplicate vertex: " + vertices_[i]);
    }
    for (const auto& [name, tail, head] : arrows)
        add_arrow(name, vertex(tail), vertex(head));
}

int Quiver::vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) throw Error("unknown vertex: " + name);
    return it->second;
}

int Quiver::arrow(const std::string& name) const {
    int a = find_arrow(name);
    if (a < 0) throw Error("unknown arrow: " + name);
    return a;
}

int Quiver::find_arrow(const std::string& name) const {
    auto it = arrow_index_.find(name);
    return it == arrow_index_.end() ? -1 : it->second;
}

int Quiver::add_arrow(const std::string& name, int tail, int head, int inverse_of) {
    if (name.empty()) throw Error("empty arrow name");
    if (tail < 0 || tail >= (int)vertices_.size() || head < 0 || head >= (int)vertices_.size())
        throw Error("arrow endpoints out of range: " + name);
    if (arrow_index_.count(name)) throw Error("duplicate arrow: " + name);
    arrows_.push_back(Arrow{name, tail, head, inverse_of});
    arrow_index_.emplace(name, (int)arrows_.size() - 1);
    return (int)arrows_.size() - 1;
}

bool PathWord::valid(const Quiver& q) const {
    if (is_trivial()) return trivial_vertex < (int)q.num_vertices() && arrows.empty();
    if (arrows.empty()) return false;
    for (size_t i = 0; i + 1 < arrows.size(); ++i)
        if (q.arrow_info(arrows[i]).tail != q.arrow_info(arrows[i + 1]).head)
            return false;
    return true;
}

bool PathWord::operator<(const PathWord& o) const {
    if (length() != o.length()) return length() < o.length();
    if (is_trivial()) return trivial_vertex < o.trivial_vertex;
    return arrows < o.arrows;
}

std::string PathWord::str(const Quiver& q) const {
    if (is_trivial()) return "e(" + q.vertex_name(trivial_vertex) + ")";
    std::string s;
    for (size_t i = 0; i < arrows.size(); ++i) {
        if (i) s += " ";
        s += q.arrow_info(arrows[i]).name;
    }
    return s;
}

Element::Element(QuiverPtr q, Scalar s, PathWord w) : quiver_(std::move(q)) {
    add_term(std::move(s), std::move(w));
}

Element Element::total_unit(const QuiverPtr& q) {
    Element e(q);
    for (int v = 0; v < (int)q->num_vertices(); ++v)
        e.add_term(Scalar::one(), PathWord::trivial(v));
    return e;
}

void Element::add_term(Scalar s, PathWord w) {
    if (s.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const auto& t, const PathWord& x) { return t.second < x; });
    if (it != terms_.end() && it->second == w) {
        Scalar sum = it->first + s;
        if (sum.is_zero()) terms_.erase(it);
        else it->first = sum;
    } else {
        terms_.insert(it, {std::move(s), std::move(w)});
    }
}

Element Element::operator+(const Element& o) const {
    if (!quiver_ && o.quiver_) {
        Element r = o;
        return r;
    }
    if (quiver_ && o.quiver_ && quiver_.get() != o.quiver_.get())
        throw Error("element addition across different quivers");
    Element r = *this;
    if (!r.quiver_) r.quiver_ = o.quiver_;
    for (const auto& [s, w] : o.terms_) r.add_term(s, w);
    return r;
}

Element Element::operator-() const {
    Element r = *this;
    for (auto& [s, w] : r.terms_) s = -s;
    return r;
}

Element path_compose(const QuiverPtr& q, const PathWord& p, const PathWord& r) {
    Element out(q);
    if (p.is_trivial() && r.is_trivial()) {
        if (p.trivial_vertex == r.trivial_vertex)
            out.add_term(Scalar::one(), p);
        return out;
    }
    if (p.is_trivial()) {
        if (p.trivial_vertex == r.head(*q)) out.add_term(Scalar::one(), r);
        return out;
    }
    if (r.is_trivial()) {
        if (r.trivial_vertex == p.tail(*q)) out.add_term(Scalar::one(), p);
        return out;
    }
    if (p.tail(*q) != r.head(*q)) return out;
    std::vector<int> w = p.arrows;
    w.insert(w.end(), r.arrows.begin(), r.arrows.end());
    out.add_term(Scalar::one(), PathWord::of(std::move(w)));
    return out;
}

Element Element::operator*(const Element& o) const {
    if (quiver_ && o.quiver_ && quiver_.get() != o.quiver_.get())
        throw Error("element product across different quivers");
    QuiverPtr q = quiver_ ? quiver_ : o.quiver_;
    Element r(q);
    for (const auto& [sa, wa] : terms_)
        for (const auto& [sb, wb] : o.terms_) {
            Element c = path_compose(q, wa, wb);
            for (const auto& [sc, wc] : c.terms())
                r.add_term(sa * sb * sc, wc);
        }
    return r;
}

Element Element::scaled(const Scalar& s) const {
    Element r(quiver_);
    for (const auto& [t, w] : terms_) r.add_term(t * s, w);
    return r;
}

std::string Element::str(const SymbolTable& tab) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool leading = true;
    for (const auto& [sc, w] : terms_) {
        // one printed term per scalar monomial so the text stays parseable
        for (const auto& [q, e] : sc.terms()) {
            Scalar mono(q, e);
            std::string c = mono.str(tab);
            bool neg = !c.empty() && c[0] == '-';
            if (neg) c = c.substr(1);
            s += leading ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (c != "1") s += c + " ";
            s += w.str(*quiver_);
            leading = false;
        }
    }
    return s;
}

void Superpotential::add_term(Scalar s, PathWord cycle) {
    if (s.is_zero()) return;
    if (cycle.is_trivial() || cycle.head(*quiver_) != cycle.tail(*quiver_))
        throw Error("superpotential term is not a cycle");
    terms_.push_back({std::move(s), std::move(cycle)});
}

Element cyclic_derivative(const Superpotential& phi, int arrow) {
    const QuiverPtr& q = phi.quiver();
    Element out(q);
    for (const auto& [s, w] : phi.terms()) {
        const auto& a = w.arrows;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] != arrow) continue;
            // rotate so position i is leftmost, then drop it
            std::vector<int> rest;
            rest.reserve(a.size() - 1);
            for (size_t k = 1; k < a.size(); ++k) rest.push_back(a[(i + k) % a.size()]);
            if (rest.empty())
                out.add_term(s, PathWord::trivial(q->arrow_info(arrow).tail));
            else
                out.add_term(s, PathWord::of(std::move(rest)));
        }
    }
    return out;
}

PathWord transplant_path(const PathWord& w, const Quiver& from, const Quiver& to) {
    if (w.is_trivial())
        return PathWord::trivial(to.vertex(from.vertex_name(w.trivial_vertex)));
    std::vector<int> na;
    na.reserve(w.arrows.size());
    for (int a : w.arrows) na.push_back(to.arrow(from.arrow_info(a).name));
    return PathWord::of(std::move(na));
}

Element transplant_element(const Element& e, const QuiverPtr& to) {
    if (!e.quiver() || e.quiver().get() == to.get()) {
        Element r = e;
        return r;
    }
    Element r(to);
    for (const auto& [s, w] : e.terms()) r.add_term(s, transplant_path(w, *e.quiver(), *to));
    return r;
}

PathWord parse_path(const std::string& text, const Quiver& q) {
    std::istringstream in(text);
    std::string tok;
    std::vector<int> arrows;
    int trivial = -1;
    while (in >> tok) {
        if (tok.size() > 3 && tok.substr(0, 2) == "e(" && tok.back() == ')') {
            if (!arrows.empty() || trivial >= 0)
                throw Error("trivial path must stand alone: " + text);
            trivial = q.vertex(tok.substr(2, tok.size() - 3));
        } else {
            arrows.push_back(q.arrow(tok));
        }
    }
    if (trivial >= 0) return PathWord::trivial(trivial);
    if (arrows.empty()) throw Error("empty path: " + text);
    PathWord w = PathWord::of(std::move(arrows));
    if (!w.valid(q)) throw Error("endpoint mismatch in path: " + text);
    return w;
}

// element := term (('+'|'-') term)*, term := [scalar] path
// scalar part is everything before the first arrow/e( token.
Element parse_element(const std::string& text, const QuiverPtr& q, const SymbolTable& tab,
                      const std::map<std::string, Exponent>* defines) {
    {
        std::string trimmed = text;
        size_t b = trimmed.find_first_not_of(" \t");
        if (b == std::string::npos) throw Error("empty element");
        trimmed = trimmed.substr(b, trimmed.find_last_not_of(" \t") - b + 1);
        if (trimmed == "0") return Element(q);
    }
    // split into +/- separated chunks; '-' after '^' belongs to an inverse-arrow
    // name (b1^-1), signs inside T^(..) are at depth > 0
    std::vector<std::pair<int, std::string>> chunks;
    int depth = 0;
    std::string cur;
    int sign = 1;
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
    if (chunks.empty()) throw Error("empty element: " + text);

    Element out(q);
    for (auto& [sg, body] : chunks) {
        // scalar prefix: rationals and T^(..) blocks; the rest is the path
        size_t pos = 0;
        auto skip_ws = [&] { while (pos < body.size() && std::isspace((unsigned char)body[pos])) ++pos; };
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
                if (pos >= body.size() || body[pos] != '(')
                    throw Error("expected '(' after T^: " + body);
                int d = 0;
                do {
                    if (body[pos] == '(') ++d;
                    if (body[pos] == ')') --d;
                    ++pos;
                } while (pos < body.size() && d > 0);
                if (d != 0) throw Error("unbalanced T^(..): " + body);
                scalar_end = pos;
            } else {
                break;
            }
            skip_ws();
        }
        std::string scalar_text = body.substr(0, scalar_end);
        std::string path_text = body.substr(scalar_end);
        Scalar s = scalar_text.find_first_not_of(" \t") == std::string::npos
                       ? Scalar::one()
                       : parse_scalar(scalar_text, tab, defines);
        if (sg < 0) s = -s;
        if (path_text.find_first_not_of(" \t") == std::string::npos)
            throw Error("element term without path (use e(v) for trivial paths): " + body);
        PathWord w = parse_path(path_text, *q);
        out.add_term(s, w);
    }
    return out;
}

} // namespace qstack
