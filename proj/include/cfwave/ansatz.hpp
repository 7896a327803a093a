#pragma once

#include "cfwave/pde.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cfwave {

// The two auxiliary ODEs used as rewrite rules for F'':
//   A: F'' = b*F^2 - 6*a^2*F + 5*a*F'
//   B: F'' = c*F^3 - 2*a^2*F - 3*a*F'
enum class AuxVariant { A, B };

// u = a0 + a1*F  (with_constant)  or  u = a1*F  (pure_linear)
enum class AnsatzForm { with_constant, pure_linear };

// Symbol name of the auxiliary constant ("b" for A, "c" for B).
const char* aux_constant(AuxVariant v);

// Polynomial in the formal symbols F, F' with MultiPoly coefficients, keyed by
// (i, j) = (power of F, power of F'). Normalized: no zero coefficients.
class AnsatzPoly {
public:
    using Key = std::pair<int, int>;
    using Coeffs = std::map<Key, MultiPoly>;

    AnsatzPoly() = default;
    static AnsatzPoly one();

    void add(int i, int j, const MultiPoly& coeff);
    const Coeffs& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    AnsatzPoly operator+(const AnsatzPoly& o) const;
    AnsatzPoly operator*(const AnsatzPoly& o) const;
    AnsatzPoly scaled(const MultiPoly& c) const;
    bool operator==(const AnsatzPoly& o) const { return coeffs_ == o.coeffs_; }

    std::string str() const; // "(i,j): <poly>; ..." ascending in (i,j)

private:
    Coeffs coeffs_;
};

// Formal d/dxi with every generated F'' immediately rewritten by the auxiliary
// ODE, so the F'-degree stays finite.
AnsatzPoly xi_derivative(const AnsatzPoly& p, AuxVariant aux);

// Substitutes u = a0 + a1 F (or a1 F) and its xi-derivatives (computed by
// repeated xi_derivative) into the reduced ODE.
AnsatzPoly ansatz_substitute(const ReducedOde& ode, AnsatzForm form, AuxVariant aux);

// One polynomial equation (= 0) per nonzero F^i(F')^j coefficient.
struct AlgebraicSystem {
    std::vector<std::pair<AnsatzPoly::Key, MultiPoly>> equations; // ascending (i,j)
    std::vector<std::string> unknowns;
    std::vector<std::string> params; // symbols appearing that are not unknowns

    std::string str() const;
};

AlgebraicSystem collect_system(const AnsatzPoly& p, const std::vector<std::string>& unknowns);

} // namespace cfwave
