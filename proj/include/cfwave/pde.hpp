#pragma once

#include "cfwave/multipoly.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace cfwave {

// How the spatial order beta relates to alpha when lowering. The six catalog
// equations use all three: beta free, beta = alpha, and beta = 1.
enum class BetaMode { independent, beta_eq_alpha, beta_eq_one };

// One derivative factor: iterated applications of D_t^alpha, D_x^beta and
// integer-order d/dx, composed in any order (they commute on smooth inputs).
struct DerivChain {
    int t_alpha = 0;          // applications of D_t^alpha
    int x_beta = 0;           // applications of D_x^beta
    int x_int = 0;            // applications of integer-order d/dx
    bool x_alpha_token = false; // x-axis fractional order was written with 'a'

    int total() const { return t_alpha + x_beta + x_int; }
    bool operator==(const DerivChain& o) const {
        return t_alpha == o.t_alpha && x_beta == o.x_beta && x_int == o.x_int;
    }
    bool operator<(const DerivChain& o) const {
        return std::tie(t_alpha, x_beta, x_int) < std::tie(o.t_alpha, o.x_beta, o.x_int);
    }
};

// coeff_scalar * coeff_params * u^u_power * product(chains applied to u)
struct PdeTerm {
    Rational coeff_scalar = 1;
    Monomial coeff_params; // monomial in declared parameter symbols
    int u_power = 0;
    std::vector<DerivChain> chains;
};

struct FpdeAst {
    std::vector<std::string> header; // declared parameter symbols
    std::vector<PdeTerm> terms;      // canonical: sorted, merged, nonzero
};

FpdeAst parse_pde(const std::string& text, const std::vector<std::string>& header);
std::string format_pde(const FpdeAst& ast);

// Monomial exponents over (u, u', u'', u''').
using DerivMono = std::array<int, 4>;

struct DerivMonoLess {
    bool operator()(const DerivMono& a, const DerivMono& b) const;
};

// Polynomial in u and its xi-derivatives up to order 3; each coefficient is a
// polynomial in omega and the equation parameters.
struct ReducedOde {
    std::map<DerivMono, MultiPoly, DerivMonoLess> terms;

    void add(const DerivMono& m, const MultiPoly& coeff);
    bool operator==(const ReducedOde& o) const { return terms == o.terms; }
    ReducedOde operator+(const ReducedOde& o) const;
};

ReducedOde lower_to_ode(const FpdeAst& ast, BetaMode mode);

// Canonical text, e.g. "omega*u' + lambda*u^2*u' + r*u'' + s*u'''"; terms in
// ascending (derivative grade, graded-lex) order. read_ode() parses it back.
std::string format_ode(const ReducedOde& ode);
ReducedOde read_ode(const std::string& text, const std::vector<std::string>& params);

} // namespace cfwave
