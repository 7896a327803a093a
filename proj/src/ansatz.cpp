#include "cfwave/ansatz.hpp"

#include <algorithm>
#include <sstream>

namespace cfwave {

const char* aux_constant(AuxVariant v) { return v == AuxVariant::A ? "b" : "c"; }

AnsatzPoly AnsatzPoly::one() {
    AnsatzPoly p;
    p.add(0, 0, MultiPoly::constant(1));
    return p;
}

void AnsatzPoly::add(int i, int j, const MultiPoly& coeff) {
    if (coeff.is_zero()) return;
    Key k{i, j};
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
        coeffs_.emplace(k, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

AnsatzPoly AnsatzPoly::operator+(const AnsatzPoly& o) const {
    AnsatzPoly out = *this;
    for (const auto& [k, c] : o.coeffs_) out.add(k.first, k.second, c);
    return out;
}

AnsatzPoly AnsatzPoly::operator*(const AnsatzPoly& o) const {
    AnsatzPoly out;
    for (const auto& [ka, ca] : coeffs_)
        for (const auto& [kb, cb] : o.coeffs_)
            out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
}

AnsatzPoly AnsatzPoly::scaled(const MultiPoly& c) const {
    AnsatzPoly out;
    for (const auto& [k, v] : coeffs_) out.add(k.first, k.second, v * c);
    return out;
}

std::string AnsatzPoly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
        if (!first) os << "; ";
        os << "(" << k.first << "," << k.second << "): " << c.str();
        first = false;
    }
    return os.str();
}

AnsatzPoly xi_derivative(const AnsatzPoly& p, AuxVariant aux) {
    // F'' rewritten per the auxiliary ODE; coefficients are xi-independent.
    const MultiPoly a_sq = MultiPoly::symbol("a", 2);
    const MultiPoly a_sym = MultiPoly::symbol("a");
    AnsatzPoly rewrite; // F'' as a polynomial in F, F'
    if (aux == AuxVariant::A) {
        rewrite.add(2, 0, MultiPoly::symbol("b"));
        rewrite.add(1, 0, a_sq * Rational(-6));
        rewrite.add(0, 1, a_sym * Rational(5));
    } else {
        rewrite.add(3, 0, MultiPoly::symbol("c"));
        rewrite.add(1, 0, a_sq * Rational(-2));
        rewrite.add(0, 1, a_sym * Rational(-3));
    }

    AnsatzPoly out;
    for (const auto& [k, c] : p.coeffs()) {
        auto [i, j] = k;
        if (i > 0) out.add(i - 1, j + 1, c * Rational(i));
        if (j > 0) {
            MultiPoly jc = c * Rational(j);
            for (const auto& [rk, rc] : rewrite.coeffs())
                out.add(i + rk.first, j - 1 + rk.second, jc * rc);
        }
    }
    return out;
}

AnsatzPoly ansatz_substitute(const ReducedOde& ode, AnsatzForm form, AuxVariant aux) {
    AnsatzPoly u0;
    if (form == AnsatzForm::with_constant) u0.add(0, 0, MultiPoly::symbol("a0"));
    u0.add(1, 0, MultiPoly::symbol("a1"));

    std::array<AnsatzPoly, 4> u;
    u[0] = u0;
    for (int n = 1; n <= 3; ++n) u[n] = xi_derivative(u[n - 1], aux);

    AnsatzPoly result;
    for (const auto& [mono, coeff] : ode.terms) {
        AnsatzPoly prod = AnsatzPoly::one();
        for (int d = 0; d < 4; ++d)
            for (int rep = 0; rep < mono[d]; ++rep) prod = prod * u[d];
        result = result + prod.scaled(coeff);
    }
    return result;
}

AlgebraicSystem collect_system(const AnsatzPoly& p, const std::vector<std::string>& unknowns) {
    AlgebraicSystem sys;
    sys.unknowns = unknowns;
    for (const auto& [k, c] : p.coeffs()) sys.equations.emplace_back(k, c);
    std::vector<std::string> params;
    for (const auto& [k, c] : sys.equations)
        for (const auto& s : c.symbols())
            if (std::find(unknowns.begin(), unknowns.end(), s) == unknowns.end() &&
                std::find(params.begin(), params.end(), s) == params.end())
                params.push_back(s);
    std::sort(params.begin(), params.end(), symbol_less);
    sys.params = params;
    return sys;
}

std::string AlgebraicSystem::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : equations) {
        if (!first) os << "; ";
        os << "(" << k.first << "," << k.second << "): " << c.str();
        first = false;
    }
    return os.str();
}

} // namespace cfwave
