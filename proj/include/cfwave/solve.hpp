#pragma once

#include "cfwave/ansatz.hpp"
#include "cfwave/surd.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cfwave {

class solve_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class not_triangularizable : public solve_error {
public:
    using solve_error::solve_error;
};
class degree_too_high : public solve_error {
public:
    using solve_error::solve_error;
};
class inconsistent_system : public solve_error {
public:
    using solve_error::solve_error;
};

// Monomial over the unknowns.
using UMono = std::map<std::string, int>;

// Polynomial over the unknowns with exact Surd coefficients.
class SurdPoly {
public:
    using Terms = std::map<UMono, Surd>;

    SurdPoly() = default;
    static SurdPoly constant(const Surd& s);

    void add_term(const UMono& m, const Surd& c);
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Surd constant_value() const;

    SurdPoly operator+(const SurdPoly& o) const;
    SurdPoly operator-(const SurdPoly& o) const;
    SurdPoly operator*(const SurdPoly& o) const;
    SurdPoly scaled(const Surd& s) const;
    SurdPoly times_mono(const UMono& m) const;
    bool operator==(const SurdPoly& o) const { return terms_ == o.terms_; }

    SurdPoly substituted(const std::string& sym, const Surd& value) const;
    int min_exponent(const std::string& sym) const; // content exponent, 0 if absent anywhere
    int degree_in(const std::string& sym) const;
    SurdPoly divided_by_power(const std::string& sym, int e) const;
    std::set<std::string> symbols() const;

    std::string str() const;

private:
    Terms terms_;
};

struct SymbolLess {
    bool operator()(const std::string& a, const std::string& b) const { return symbol_less(a, b); }
};

struct InstSystem {
    std::vector<SurdPoly> equations;
    std::vector<std::string> unknowns;
};

// Substitutes exact rational parameter values; unknowns stay symbolic.
InstSystem instantiate(const AlgebraicSystem& sys, const std::map<std::string, Rational>& params);

struct Branch {
    std::map<std::string, Surd, SymbolLess> values;
    std::vector<std::string> provenance;

    bool operator==(const Branch& o) const { return values == o.values; }
};

// One elimination step of a solve script. Equation indices refer to the
// current equation list; multiply/combine/reduce append their result.
struct SolveStep {
    enum class Kind { divide_nonzero, multiply, combine, reduce, solve_uni };
    Kind kind;
    std::string symbol;      // divide_nonzero / solve_uni
    int eq = -1;             // multiply source, combine target, reduce target, solve_uni eq
    int src = -1;            // combine / reduce source
    UMono monomial;          // multiply factor / reduce pivot monomial
    Rational c_target = 1;   // combine coefficients
    Rational c_source = 1;

    static SolveStep divide_nonzero(std::string sym);
    static SolveStep multiply(int eq, UMono m);
    static SolveStep combine(int target, int source, Rational ct, Rational cs);
    static SolveStep reduce(int target, int source, UMono pivot);
    static SolveStep solve_uni(int eq, std::string sym);
};
using SolveScript = std::vector<SolveStep>;

struct SolveResult {
    std::vector<Branch> branches; // verified, deduplicated, canonically ordered
    std::vector<std::string> notes;
};

// Solves an instantiated system exactly over Q extended by square roots.
// Without a script: strips declared-nonzero content, then repeatedly solves
// any equation univariate of degree <= 2 in one unknown, substituting and
// branching exhaustively on +/-. Every returned branch back-substitutes to
// exact zero on every input equation.
SolveResult solve(const InstSystem& sys, const std::set<std::string>& nonzero,
                  const SolveScript* script = nullptr);

// Exact per-equation values of the system at a full assignment.
std::vector<Surd> evaluate_equations(const InstSystem& sys, const Branch& branch);
bool verify_assignment(const InstSystem& sys, const Branch& branch);

std::string branch_json(const Branch& branch);

} // namespace cfwave
