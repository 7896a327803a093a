#pragma once

#include "cfwave/rational.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfwave {

// Global symbol order: a0 < a1 < a < b < c < omega < everything else alphabetically.
int symbol_rank(const std::string& s);
bool symbol_less(const std::string& lhs, const std::string& rhs);

// A monomial is a sorted (by symbol_less) list of symbol -> positive exponent.
using Monomial = std::vector<std::pair<std::string, int>>;

Monomial mono_mul(const Monomial& a, const Monomial& b);
int mono_degree(const Monomial& m);

// Graded lexicographic order over the global symbol order.
struct MonoGrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Multivariate polynomial with exact rational coefficients, kept normalized
// (no zero coefficients stored).
class MultiPoly {
public:
    using Terms = std::map<Monomial, Rational, MonoGrlexLess>;

    MultiPoly() = default;
    static MultiPoly constant(const Rational& r);
    static MultiPoly symbol(const std::string& name, int exp = 1);
    static MultiPoly term(const Rational& coeff, const Monomial& mono);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const; // requires is_constant()
    int total_degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    MultiPoly operator+(const MultiPoly& other) const;
    MultiPoly operator-(const MultiPoly& other) const;
    MultiPoly operator-() const;
    MultiPoly operator*(const MultiPoly& other) const;
    MultiPoly& operator*=(const MultiPoly& other);
    MultiPoly operator*(const Rational& s) const;
    MultiPoly pow(int e) const;
    bool operator==(const MultiPoly& other) const { return terms_ == other.terms_; }
    bool operator!=(const MultiPoly& other) const { return !(*this == other); }

    // Replaces a symbol by a rational value.
    MultiPoly substituted(const std::string& sym, const Rational& value) const;
    Rational evaluate(const std::map<std::string, Rational>& values) const;
    std::vector<std::string> symbols() const;

    // Compact canonical text: terms in grlex-descending order, e.g. "6*a0^2-6*a0".
    std::string str() const;

    void add_term(const Monomial& mono, const Rational& coeff);

private:
    Terms terms_;
};

// Parses a polynomial expression: rationals, identifiers (with optional prime
// suffixes when allow_primes), ^ for nonnegative integer powers, * + - and
// parentheses. Whitespace insignificant. The validator receives each
// identifier and its position and should throw parse_error to reject it.
MultiPoly parse_poly(const std::string& text,
                     const std::function<void(const std::string&, std::size_t)>& validate_ident,
                     bool allow_primes = false);

} // namespace cfwave
