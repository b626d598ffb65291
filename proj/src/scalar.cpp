#include "qstack/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qstack {

SymbolTable::SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
    for (size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw Error("empty exponent symbol name");
        if (!index_.emplace(names_[i], (int)i).second)
            throw Error("duplicate exponent symbol: " + names_[i]);
    }
}

int SymbolTable::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

Exponent Exponent::symbol(int idx, Rational coeff) {
    Exponent e;
    e.set(idx, coeff);
    return e;
}

void Exponent::set(int idx, const Rational& q) {
    if (q.is_zero()) return;
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), idx,
                               [](const auto& p, int i) { return p.first < i; });
    if (it != coeffs_.end() && it->first == idx) {
        Rational s = it->second + q;
        if (s.is_zero()) coeffs_.erase(it);
        else it->second = s;
    } else {
        coeffs_.insert(it, {idx, q});
    }
}

Exponent Exponent::operator+(const Exponent& o) const {
    Exponent r = *this;
    r.constant_ = constant_ + o.constant_;
    for (const auto& [idx, q] : o.coeffs_) r.set(idx, q);
    return r;
}

Exponent Exponent::operator-() const {
    Exponent r;
    r.constant_ = -constant_;
    for (const auto& [idx, q] : coeffs_) r.coeffs_.push_back({idx, -q});
    return r;
}

Exponent Exponent::scaled(const Rational& q) const {
    Exponent r;
    if (q.is_zero()) return r;
    r.constant_ = constant_ * q;
    for (const auto& [idx, c] : coeffs_) r.coeffs_.push_back({idx, c * q});
    return r;
}

bool Exponent::operator<(const Exponent& o) const {
    if (constant_ != o.constant_) return constant_ < o.constant_;
    return std::lexicographical_compare(
        coeffs_.begin(), coeffs_.end(), o.coeffs_.begin(), o.coeffs_.end(),
        [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
}

namespace {
std::string coeff_prefix(const Rational& q, bool leading) {
    // renders "q*" suitable for q*name; +-1 handled by caller
    std::string s;
    if (q.num() < 0) s = leading ? "-" : " - ";
    else if (!leading) s = " + ";
    Rational a = q.num() < 0 ? -q : q;
    if (!a.is_one()) s += a.str() + "*";
    return s;
}
} // namespace

std::string Exponent::str(const SymbolTable& tab) const {
    if (is_zero()) return "0";
    std::string s;
    bool leading = true;
    for (const auto& [idx, q] : coeffs_) {
        // print halves as name/2 style when denominator divides: use q*name otherwise
        if (q.den() == 1) {
            s += coeff_prefix(q, leading) + tab.name(idx);
        } else if (q.num() == 1 || q.num() == -1) {
            s += (q.num() < 0 ? (leading ? std::string("-") : std::string(" - "))
                              : (leading ? std::string("") : std::string(" + ")));
            s += tab.name(idx) + "/" + std::to_string(q.den());
        } else {
            s += coeff_prefix(q, leading) + tab.name(idx);
            s += "/" + std::to_string(q.den());
        }
        leading = false;
    }
    if (!constant_.is_zero()) {
        if (leading) s += constant_.str();
        else s += (constant_.num() < 0 ? " - " + (-constant_).str() : " + " + constant_.str());
    }
    return s;
}

Scalar::Scalar(Rational q) {
    if (!q.is_zero()) terms_.push_back({q, Exponent()});
}

Scalar::Scalar(Rational q, Exponent lambda) {
    if (!q.is_zero()) terms_.push_back({q, std::move(lambda)});
}

bool Scalar::is_one() const {
    return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second.is_zero();
}

void Scalar::add_term(const Rational& q, const Exponent& e) {
    if (q.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const auto& t, const Exponent& x) { return t.second < x; });
    if (it != terms_.end() && it->second == e) {
        Rational s = it->first + q;
        if (s.is_zero()) terms_.erase(it);
        else it->first = s;
    } else {
        terms_.insert(it, {q, e});
    }
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r = *this;
    for (const auto& [q, e] : o.terms_) r.add_term(q, e);
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    for (auto& [q, e] : r.terms_) q = -q;
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    for (const auto& [qa, ea] : terms_)
        for (const auto& [qb, eb] : o.terms_)
            r.add_term(qa * qb, ea + eb);
    return r;
}

Scalar Scalar::invert_monomial() const {
    if (terms_.size() != 1)
        throw Error("not invertible in this representation: scalar is not a monomial");
    return Scalar(terms_[0].first.inverse(), -terms_[0].second);
}

Scalar Scalar::substitute(const std::map<int, Exponent>& assignment) const {
    Scalar r;
    for (const auto& [q, e] : terms_) {
        Exponent ne(e.constant());
        for (const auto& [idx, c] : e.coeffs()) {
            auto it = assignment.find(idx);
            if (it == assignment.end())
                throw Error("exponent substitution missing symbol index " + std::to_string(idx));
            ne = ne + it->second.scaled(c);
        }
        r.add_term(q, ne);
    }
    return r;
}

std::string Scalar::str(const SymbolTable& tab) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool leading = true;
    for (const auto& [q, e] : terms_) {
        Rational a = q.num() < 0 ? -q : q;
        std::string sign = q.num() < 0 ? (leading ? "-" : " - ") : (leading ? "" : " + ");
        std::string body;
        if (e.is_zero()) body = a.str();
        else if (a.is_one()) body = "T^(" + e.str(tab) + ")";
        else body = a.str() + " T^(" + e.str(tab) + ")";
        s += sign + body;
        leading = false;
    }
    return s;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct ExprParser {
    const std::string& s;
    size_t pos = 0;
    const SymbolTable& tab;
    const std::map<std::string, Exponent>* defines;

    void skip_ws() { while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos; }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }

    Rational number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos == start) throw Error("expected number in exponent at: " + s.substr(start));
        long long n = std::stoll(s.substr(start, pos - start));
        if (eat('/')) {
            skip_ws();
            size_t ds = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            if (pos == ds) throw Error("expected denominator in: " + s);
            return Rational(n, std::stoll(s.substr(ds, pos - ds)));
        }
        return Rational(n);
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_' || s[pos] == '\''))
            ++pos;
        if (pos == start) throw Error("expected symbol name in exponent: " + s);
        return s.substr(start, pos - start);
    }

    Exponent resolve(const std::string& name) {
        int idx = tab.index_of(name);
        if (idx >= 0) return Exponent::symbol(idx);
        if (defines) {
            auto it = defines->find(name);
            if (it != defines->end()) return it->second;
        }
        throw Error("unknown exponent symbol: " + name);
    }

    // term := [number ['*']] sym ['/' number] | number
    Exponent term() {
        skip_ws();
        if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
            Rational q = number();
            skip_ws();
            bool star = eat('*');
            skip_ws();
            if (pos < s.size() && (std::isalpha((unsigned char)s[pos]) || s[pos] == '_')) {
                Exponent e = resolve(ident());
                if (eat('/')) {
                    Rational d = number();
                    q = q / d;
                }
                return e.scaled(q);
            }
            if (star) throw Error("dangling '*' in exponent: " + s);
            return Exponent(q);
        }
        Exponent e = resolve(ident());
        if (eat('/')) {
            Rational d = number();
            return e.scaled(Rational(1) / d);
        }
        return e;
    }

    Exponent expr() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        Exponent acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else break;
        }
        skip_ws();
        if (pos != s.size()) throw Error("trailing characters in exponent: " + s.substr(pos));
        return acc;
    }
};

} // namespace

Exponent parse_exponent_expr(const std::string& text, const SymbolTable& tab,
                             const std::map<std::string, Exponent>* defines) {
    ExprParser p{text, 0, tab, defines};
    return p.expr();
}

// Scalar grammar: term := [sign] [rational] [T^(expr)]; sum of terms.
Scalar parse_scalar(const std::string& text, const SymbolTable& tab,
                    const std::map<std::string, Exponent>* defines) {
    Scalar result;
    size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
    skip_ws();
    if (pos == text.size()) throw Error("empty scalar");
    bool first = true;
    while (pos < text.size()) {
        skip_ws();
        int sign = 1;
        if (text[pos] == '+') { ++pos; }
        else if (text[pos] == '-') { sign = -1; ++pos; }
        else if (!first) throw Error("expected + or - between scalar terms: " + text);
        skip_ws();
        Rational q(sign);
        bool have_num = false;
        if (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
            size_t start = pos;
            while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
            long long n = std::stoll(text.substr(start, pos - start));
            long long d = 1;
            if (pos < text.size() && text[pos] == '/') {
                ++pos;
                size_t ds = pos;
                while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
                if (pos == ds) throw Error("bad rational in scalar: " + text);
                d = std::stoll(text.substr(ds, pos - ds));
            }
            q = q * Rational(n, d);
            have_num = true;
        }
        skip_ws();
        Exponent e;
        if (pos < text.size() && text[pos] == 'T' && pos + 1 < text.size() && text[pos + 1] == '^') {
            pos += 2;
            if (pos >= text.size() || text[pos] != '(')
                throw Error("expected '(' after T^ in: " + text);
            size_t depth = 1, start = ++pos;
            while (pos < text.size() && depth > 0) {
                if (text[pos] == '(') ++depth;
                else if (text[pos] == ')') --depth;
                if (depth > 0) ++pos;
            }
            if (depth != 0) throw Error("unbalanced parentheses in scalar: " + text);
            e = parse_exponent_expr(text.substr(start, pos - start), tab, defines);
            ++pos;  // closing paren
        } else if (!have_num) {
            throw Error("expected coefficient or T^ in scalar: " + text);
        }
        result += Scalar(q, e);
        first = false;
        skip_ws();
    }
    return result;
}

} // namespace qstack
