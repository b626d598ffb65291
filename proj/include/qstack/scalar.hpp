#pragma once

#include "qstack/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qstack {

// Ordered table of formal exponent symbols (e.g. A1, A5, hbar).
class SymbolTable {
public:
    explicit SymbolTable(std::vector<std::string> names);

    int index_of(const std::string& name) const;        // -1 if absent
    const std::string& name(int idx) const { return names_.at(idx); }
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

// Q-linear combination of exponent symbols plus a rational constant.
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(Rational constant) : constant_(constant) {}

    static Exponent symbol(int idx, Rational coeff = Rational(1));

    const Rational& constant() const { return constant_; }
    const std::vector<std::pair<int, Rational>>& coeffs() const { return coeffs_; }

    bool is_zero() const { return constant_.is_zero() && coeffs_.empty(); }

    Exponent operator+(const Exponent& o) const;
    Exponent operator-() const;
    Exponent operator-(const Exponent& o) const { return *this + (-o); }
    Exponent scaled(const Rational& q) const;

    bool operator==(const Exponent& o) const {
        return constant_ == o.constant_ && coeffs_ == o.coeffs_;
    }
    bool operator<(const Exponent& o) const;   // lexicographic, for canonical order

    std::string str(const SymbolTable& tab) const;

private:
    void set(int idx, const Rational& q);

    std::vector<std::pair<int, Rational>> coeffs_;  // sorted by symbol index, no zeros
    Rational constant_;
};

// Finite sum of rational coefficients times T^lambda with formal exponents.
class Scalar {
public:
    Scalar() = default;                                   // zero
    explicit Scalar(Rational q);                          // constant q (exponent 0)
    Scalar(Rational q, Exponent lambda);                  // q * T^lambda

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(Rational(1)); }

    const std::vector<std::pair<Rational, Exponent>>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_monomial() const { return terms_.size() == 1; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator-(const Scalar& o) const { return *this + (-o); }
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Inverse of a one-term scalar; throws on anything else.
    Scalar invert_monomial() const;

    // Rewrite every symbol through the assignment; missing symbols throw.
    Scalar substitute(const std::map<int, Exponent>& assignment) const;

    std::string str(const SymbolTable& tab) const;

private:
    void add_term(const Rational& q, const Exponent& e);

    std::vector<std::pair<Rational, Exponent>> terms_;  // sorted by exponent, no zero coeffs
};

// Textual forms:  `q T^(expr)` terms joined by + / -, e.g. `-1 T^(B/2 + hbar)`.
// `defines` maps abbreviation symbols to expansions applied during parsing.
Scalar parse_scalar(const std::string& text, const SymbolTable& tab,
                    const std::map<std::string, Exponent>* defines = nullptr);
Exponent parse_exponent_expr(const std::string& text, const SymbolTable& tab,
                             const std::map<std::string, Exponent>* defines = nullptr);

} // namespace qstack
