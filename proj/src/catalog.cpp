#include "cfwave/catalog.hpp"

#include "cfwave/ansatz.hpp"
#include "cfwave/conformable.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace cfwave {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kModulus = kSqrt2 / 2.0;
constexpr double kMagnitudeLimit = 1e10;

SolveScript telegraph_script() {
    // Equations after collect (ascending (i,j)):
    //   0: (0,1)  -3 a w^2 a1 + 3 a a1 + w a1
    //   1: (1,0)  -2 a^2 w^2 a1 + 2 a^2 a1 + mu a1
    //   2: (3,0)  nu a1^3 + c w^2 a1 - c a1
    // The system is not triangular in any single unknown; eliminate toward a
    // pure quadratic in omega.
    SolveScript s;
    s.push_back(SolveStep::divide_nonzero("a1"));
    s.push_back(SolveStep::multiply(0, UMono{{"a", 1}}));            // 3 = a*eq0
    s.push_back(SolveStep::combine(3, 1, 2, -3));                    // 4 = 2 a w - 3 mu
    s.push_back(SolveStep::multiply(0, UMono{{"omega", 1}}));        // 5 = w*eq0
    s.push_back(SolveStep::reduce(5, 4, UMono{{"a", 1}, {"omega", 1}})); // 6: quadratic in w
    s.push_back(SolveStep::solve_uni(6, "omega"));
    s.push_back(SolveStep::solve_uni(4, "a"));
    s.push_back(SolveStep::solve_uni(2, "a1"));
    return s;
}

std::vector<EquationDef> build_defs() {
    std::vector<EquationDef> defs;
    defs.push_back({EquationId::kdv_burgers, "kdv-burgers",
                    "D{t,a}u + lambda*u*D{x,b}u + mu*D{x,2b}u + nu*D{x,3b}u = 0",
                    {"lambda", "mu", "nu"}, BetaMode::independent, AnsatzForm::with_constant,
                    AuxVariant::A, {"a0", "a1", "a"}, true, {}, 3});
    defs.push_back({EquationId::fisher, "fisher", "D{t,a}u = D{x,2}u + 6*u*(1-u)", {},
                    BetaMode::beta_eq_one, AnsatzForm::with_constant, AuxVariant::A,
                    {"a0", "a1", "a", "omega"}, false, {}, 6});
    defs.push_back({EquationId::rlw_burgers, "rlw-burgers",
                    "D{t,a}u + p*D{x,1}u + q*u*D{x,1}u + r*D{x,2}u + s*D{x,2}D{t,a}u = 0",
                    {"p", "q", "r", "s"}, BetaMode::beta_eq_one, AnsatzForm::with_constant,
                    AuxVariant::A, {"a0", "a1", "a"}, true, {}, 3});
    defs.push_back({EquationId::cahn_allen, "cahn-allen", "D{t,a}u - D{x,2}u - u + u^3 = 0", {},
                    BetaMode::beta_eq_one, AnsatzForm::pure_linear, AuxVariant::B,
                    {"a1", "a", "omega"}, false, {}, 4});
    defs.push_back({EquationId::mkdv_burgers, "mkdv-burgers",
                    "D{t,a}u + lambda*u^2*D{x,a}u + r*D{x,2a}u + s*D{x,3a}u = 0",
                    {"lambda", "r", "s"}, BetaMode::beta_eq_alpha, AnsatzForm::pure_linear,
                    AuxVariant::B, {"a1", "a", "omega"}, false, {}, 6});
    defs.push_back({EquationId::telegraph, "telegraph",
                    "D{t,2a}u - D{x,2a}u + D{t,a}u + mu*u + nu*u^3 = 0", {"mu", "nu"},
                    BetaMode::beta_eq_alpha, AnsatzForm::pure_linear, AuxVariant::B,
                    {"a1", "a", "omega"}, false, telegraph_script(), 12});
    return defs;
}

const std::vector<EquationDef>& defs() {
    static const std::vector<EquationDef> d = build_defs();
    return d;
}

Rational param(const std::map<std::string, Rational>& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw std::invalid_argument("missing parameter: " + name);
    return it->second;
}

Branch make_branch(std::initializer_list<std::pair<const char*, Surd>> values) {
    Branch b;
    for (const auto& [k, v] : values) b.values.emplace(k, v);
    b.provenance.push_back("curated closed form");
    return b;
}

} // namespace

EquationId equation_from(const std::string& name) {
    for (const auto& d : defs())
        if (d.name == name) return d.id;
    throw std::invalid_argument("unknown equation id: " + name);
}

const char* equation_name(EquationId id) { return equation_def(id).name.c_str(); }

const EquationDef& equation_def(EquationId id) {
    for (const auto& d : defs())
        if (d.id == id) return d;
    throw std::logic_error("unmapped equation id");
}

const std::vector<EquationId>& all_equations() {
    static const std::vector<EquationId> ids = [] {
        std::vector<EquationId> v;
        for (const auto& d : defs()) v.push_back(d.id);
        return v;
    }();
    return ids;
}

void validate_instance(const EquationInstance& inst) {
    const EquationDef& def = equation_def(inst.id);
    if (!(inst.alpha > 0) || inst.alpha > 1)
        throw std::invalid_argument("alpha must lie in (0,1]");
    switch (def.beta_mode) {
    case BetaMode::independent:
        if (!(inst.beta > 0) || inst.beta > 1)
            throw std::invalid_argument("beta must lie in (0,1]");
        break;
    case BetaMode::beta_eq_one:
        if (inst.beta != 1.0)
            throw std::invalid_argument(def.name + " uses integer x-derivatives: beta must be 1");
        break;
    case BetaMode::beta_eq_alpha:
        if (inst.beta != inst.alpha)
            throw std::invalid_argument(def.name + " requires beta = alpha");
        break;
    }

    std::vector<std::string> required = def.header;
    required.push_back(aux_constant(def.aux));
    if (def.omega_is_param) required.push_back("omega");
    for (const auto& r : required)
        if (!inst.params.count(r)) throw std::invalid_argument("missing parameter: " + r);
    for (const auto& [k, v] : inst.params)
        if (std::find(required.begin(), required.end(), k) == required.end())
            throw std::invalid_argument("unexpected parameter: " + k);

    auto nonzero = [&inst](const char* sym) {
        if (param(inst.params, sym) == 0)
            throw std::invalid_argument(std::string(sym) + " must be nonzero");
    };
    switch (inst.id) {
    case EquationId::kdv_burgers:
        nonzero("lambda");
        nonzero("nu");
        nonzero("b");
        break;
    case EquationId::fisher:
        nonzero("b");
        break;
    case EquationId::rlw_burgers:
        nonzero("q");
        nonzero("s");
        nonzero("omega");
        nonzero("b");
        break;
    case EquationId::cahn_allen:
    case EquationId::mkdv_burgers:
    case EquationId::telegraph: {
        Rational c = param(inst.params, "c");
        if (c != 2 && c != -2)
            throw std::invalid_argument("c must be 2 or -2");
        if (inst.id == EquationId::mkdv_burgers) {
            nonzero("lambda");
            nonzero("s");
        }
        if (inst.id == EquationId::telegraph) {
            nonzero("nu");
            Rational mu = param(inst.params, "mu");
            if (mu == Rational(2, 9))
                throw std::invalid_argument("mu = 2/9 is a rejected boundary value");
            // omega^2 = 9 mu / (9 mu - 2) must be positive
            if (!(mu < 0 || mu > Rational(2, 9)))
                throw std::invalid_argument(
                    "telegraph requires mu < 0 or mu > 2/9 (real wave speed)");
        }
        break;
    }
    }
}

const AlgebraicSystem& derive_system(EquationId id) {
    static std::map<EquationId, AlgebraicSystem> cache = [] {
        std::map<EquationId, AlgebraicSystem> out;
        for (const auto& d : defs()) {
            FpdeAst ast = parse_pde(d.source_text, d.header);
            ReducedOde ode = lower_to_ode(ast, d.beta_mode);
            AnsatzPoly sub = ansatz_substitute(ode, d.form, d.aux);
            out.emplace(d.id, collect_system(sub, d.unknowns));
        }
        return out;
    }();
    return cache.at(id);
}

std::vector<Branch> curated_branches(EquationId id,
                                     const std::map<std::string, Rational>& params) {
    std::vector<Branch> out;
    switch (id) {
    case EquationId::kdv_burgers: {
        Rational l = param(params, "lambda"), mu = param(params, "mu"), nu = param(params, "nu");
        Rational w = param(params, "omega"), b = param(params, "b");
        out.push_back(make_branch({{"a", Surd(-mu / (5 * nu))},
                                   {"a0", Surd((6 * mu * mu - 25 * w * nu) / (25 * l * nu))},
                                   {"a1", Surd(-2 * b * nu / l)}}));
        break;
    }
    case EquationId::fisher: {
        Rational b = param(params, "b");
        out.push_back(make_branch({{"a0", Surd(Rational(0))},
                                   {"a1", Surd(b / 6)},
                                   {"a", Surd(Rational(1))},
                                   {"omega", Surd(Rational(5))}}));
        out.push_back(make_branch({{"a0", Surd(Rational(0))},
                                   {"a1", Surd(b / 6)},
                                   {"a", Surd(Rational(-1))},
                                   {"omega", Surd(Rational(-5))}}));
        break;
    }
    case EquationId::rlw_burgers: {
        Rational p = param(params, "p"), q = param(params, "q"), r = param(params, "r");
        Rational s = param(params, "s"), w = param(params, "omega"), b = param(params, "b");
        Rational a0 = -(25 * s * w * w + 25 * p * s * w - 6 * r * r) / (25 * q * s * w);
        out.push_back(make_branch({{"a", Surd(-r / (5 * s * w))},
                                   {"a0", Surd(a0)},
                                   {"a1", Surd(-2 * b * s * w / q)}}));
        break;
    }
    case EquationId::cahn_allen: {
        Rational c = param(params, "c");
        auto a1root = sqrt_exact(c);
        if (!a1root || a1root->is_zero()) break; // c < 0: no real a1
        Surd half_sqrt2 = *sqrt_exact(Rational(1, 2));
        for (int sa : {+1, -1}) {
            Surd a = sa > 0 ? half_sqrt2 : -half_sqrt2;
            Surd w = a * Surd(Rational(-3));
            for (int s1 : {+1, -1}) {
                Surd a1 = s1 > 0 ? *a1root : -*a1root;
                out.push_back(make_branch({{"a1", a1}, {"a", a}, {"omega", w}}));
            }
        }
        break;
    }
    case EquationId::mkdv_burgers: {
        Rational l = param(params, "lambda"), r = param(params, "r"), s = param(params, "s");
        Rational c = param(params, "c");
        auto a1root = sqrt_exact(-3 * c * s / l);
        if (!a1root || a1root->is_zero()) break;
        Surd a{r / (3 * s)};
        Surd w{2 * r * r / (9 * s)};
        out.push_back(make_branch({{"a1", *a1root}, {"a", a}, {"omega", w}}));
        out.push_back(make_branch({{"a1", -*a1root}, {"a", a}, {"omega", w}}));
        break;
    }
    case EquationId::telegraph: {
        Rational mu = param(params, "mu"), nu = param(params, "nu"), c = param(params, "c");
        Rational nine_mu_2 = 9 * mu - 2;
        if (nine_mu_2 == 0) break;
        auto root = sqrt_exact(mu / nine_mu_2);
        if (!root || root->is_zero()) break;
        auto a1root = sqrt_exact(-2 * c / (nu * nine_mu_2));
        if (!a1root || a1root->is_zero()) break;
        for (int sw : {+1, -1}) {
            Surd w = root->pow(1) * Surd(Rational(3 * sw));
            Surd a = root->pow(1) * Surd(nine_mu_2 / 2 * sw);
            for (int s1 : {+1, -1}) {
                Surd a1 = s1 > 0 ? *a1root : -*a1root;
                out.push_back(make_branch({{"a1", a1}, {"a", a}, {"omega", w}}));
            }
        }
        break;
    }
    }
    return out;
}

namespace {

bool branch_set_equal(std::vector<Branch> lhs, std::vector<Branch> rhs) {
    auto key = [](const Branch& b) {
        std::string s;
        for (const auto& [k, v] : b.values) s += k + "=" + v.str() + ";";
        return s;
    };
    auto cmp = [&key](const Branch& x, const Branch& y) { return key(x) < key(y); };
    std::sort(lhs.begin(), lhs.end(), cmp);
    std::sort(rhs.begin(), rhs.end(), cmp);
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (!(lhs[i].values == rhs[i].values)) return false;
    return true;
}

} // namespace

DeriveReport derive(const EquationInstance& inst) {
    validate_instance(inst);
    const EquationDef& def = equation_def(inst.id);
    const AlgebraicSystem& sys = derive_system(inst.id);
    InstSystem numeric = instantiate(sys, inst.params);
    SolveResult solved =
        solve(numeric, {"a1"}, def.script.empty() ? nullptr : &def.script);
    DeriveReport report;
    report.system_text = sys.str();
    report.branches = solved.branches;
    report.curated = curated_branches(inst.id, inst.params);
    report.matches_catalog = branch_set_equal(report.branches, report.curated);
    report.notes = solved.notes;
    return report;
}

std::string derive_report_json(const DeriveReport& report) {
    nlohmann::json j;
    j["system"] = report.system_text;
    j["matches_catalog"] = report.matches_catalog;
    j["notes"] = report.notes;
    j["branches"] = nlohmann::json::array();
    for (const auto& b : report.branches)
        j["branches"].push_back(nlohmann::json::parse(branch_json(b)));
    j["curated"] = nlohmann::json::array();
    for (const auto& b : report.curated)
        j["curated"].push_back(nlohmann::json::parse(branch_json(b)));
    return j.dump(2);
}

namespace {

struct FamilySpec {
    FamilyKind kind;
    int branch_tag;      // 0: single/chooseable, 1: first sign, 2: second sign
    int required_c;      // 0 when the equation uses auxiliary A
    const char* condition; // printable validity condition
};

std::vector<FamilySpec> family_table(EquationId id) {
    switch (id) {
    case EquationId::kdv_burgers:
    case EquationId::rlw_burgers:
        return {{FamilyKind::weier_exp, 0, 0, ""},
                {FamilyKind::tanh_sq, 0, 0, ""},
                {FamilyKind::coth_sq, 0, 0, ""}};
    case EquationId::fisher:
        return {{FamilyKind::weier_exp, 1, 0, ""},  {FamilyKind::tanh_sq, 1, 0, ""},
                {FamilyKind::coth_sq, 1, 0, ""},    {FamilyKind::weier_exp, 2, 0, ""},
                {FamilyKind::tanh_sq, 2, 0, ""},    {FamilyKind::coth_sq, 2, 0, ""}};
    case EquationId::cahn_allen:
        return {{FamilyKind::jac_ds, 0, 2, "c = 2"},
                {FamilyKind::jac_nc, 0, 2, "c = 2"},
                {FamilyKind::tanh_lin, 0, 2, "c = 2"},
                {FamilyKind::coth_lin, 0, 2, "c = 2"}};
    case EquationId::mkdv_burgers:
        return {{FamilyKind::jac_ds, 0, 2, "c = 2 and s*lambda < 0"},
                {FamilyKind::jac_nc, 0, 2, "c = 2 and s*lambda < 0"},
                {FamilyKind::tanh_lin, 0, 2, "c = 2 and s*lambda < 0"},
                {FamilyKind::coth_lin, 0, 2, "c = 2 and s*lambda < 0"},
                {FamilyKind::jac_cn, 0, -2, "c = -2 and s*lambda > 0"},
                // the paper prints s*lambda < 0 here; the stored condition is the
                // one consistent with a1 = sqrt(-3cs/lambda) at c = -2 (disputed)
                {FamilyKind::jac_sd, 0, -2, "c = -2 and s*lambda > 0"}};
    case EquationId::telegraph: {
        const char* cond2 = "c = 2 and (mu < 0, nu > 0 or mu > 2/9, nu < 0)";
        const char* condm2 = "c = -2 and (mu < 0, nu < 0 or mu > 2/9, nu > 0)";
        return {{FamilyKind::jac_ds, 1, 2, cond2},   {FamilyKind::jac_nc, 1, 2, cond2},
                {FamilyKind::tanh_lin, 1, 2, cond2}, {FamilyKind::coth_lin, 1, 2, cond2},
                {FamilyKind::jac_cn, 1, -2, condm2}, {FamilyKind::jac_sd, 1, -2, condm2},
                {FamilyKind::jac_ds, 2, 2, cond2},   {FamilyKind::jac_nc, 2, 2, cond2},
                {FamilyKind::tanh_lin, 2, 2, cond2}, {FamilyKind::coth_lin, 2, 2, cond2},
                {FamilyKind::jac_cn, 2, -2, condm2}, {FamilyKind::jac_sd, 2, -2, condm2}};
    }
    }
    throw std::logic_error("unmapped equation id");
}

double surd_value(const Branch& b, const std::string& sym, double fallback = 0.0) {
    auto it = b.values.find(sym);
    return it == b.values.end() ? fallback : it->second.to_double();
}

SolutionFamily build_family(const EquationInstance& inst, int family_index,
                            const FamilySpec& spec, const Branch& branch,
                            const FamilyConstants& constants) {
    const EquationDef& def = equation_def(inst.id);
    SolutionFamily sol;
    sol.eq = inst.id;
    sol.index = family_index;
    sol.kind = spec.kind;
    sol.constants = constants;
    sol.alpha = inst.alpha;
    sol.beta = inst.beta;
    sol.branch = branch;
    sol.a0 = def.form == AnsatzForm::with_constant ? surd_value(branch, "a0") : 0.0;
    sol.a1 = surd_value(branch, "a1");
    sol.a = surd_value(branch, "a");
    sol.omega = def.omega_is_param ? to_double(param(inst.params, "omega"))
                                   : surd_value(branch, "omega");
    sol.aux_const = to_double(param(inst.params, aux_constant(def.aux)));
    if (constants.eps != 1 && constants.eps != -1)
        throw std::invalid_argument("eps must be +1 or -1");
    return sol;
}

} // namespace

SolutionFamily make_solution(const EquationInstance& inst, int family_index,
                             const FamilyConstants& constants, int branch_choice) {
    validate_instance(inst);
    auto table = family_table(inst.id);
    if (family_index < 1 || static_cast<std::size_t>(family_index) > table.size())
        throw std::invalid_argument("no catalogued family u" + std::to_string(family_index) +
                                    " for " + equation_name(inst.id));
    const FamilySpec& spec = table[static_cast<std::size_t>(family_index) - 1];
    if (spec.required_c != 0 && param(inst.params, "c") != spec.required_c)
        throw std::invalid_argument("condition violation for u" + std::to_string(family_index) +
                                    ": requires " + spec.condition);
    std::vector<Branch> branches = curated_branches(inst.id, inst.params);
    if (branches.empty())
        throw std::invalid_argument("condition violation for u" + std::to_string(family_index) +
                                    ": requires " + spec.condition);

    // Select a representative branch: positive a1 where the sign is a free
    // +/- (it is absorbed by eps), then the sign pair named by the family.
    std::vector<Branch> pool;
    for (const auto& b : branches) {
        if (inst.id == EquationId::cahn_allen || inst.id == EquationId::mkdv_burgers ||
            inst.id == EquationId::telegraph) {
            if (surd_value(b, "a1") <= 0) continue;
        }
        pool.push_back(b);
    }
    if (pool.empty()) pool = branches;

    const Branch* chosen = nullptr;
    if (spec.branch_tag == 0) {
        std::size_t want = 0;
        if (inst.id == EquationId::cahn_allen)
            want = branch_choice == 0 ? 0 : 1; // a > 0 first (curated order)
        if (want >= pool.size()) want = 0;
        // curated order for cahn-allen: a > 0 comes first
        if (inst.id == EquationId::cahn_allen) {
            std::sort(pool.begin(), pool.end(), [](const Branch& x, const Branch& y) {
                return surd_value(x, "a") > surd_value(y, "a");
            });
        }
        chosen = &pool[want];
    } else {
        // tag 1: a > 0 (A-equations) or omega > 0 (telegraph); tag 2: the mirror
        const char* sym = inst.id == EquationId::telegraph ? "omega" : "a";
        for (const auto& b : pool) {
            double v = surd_value(b, sym);
            if ((spec.branch_tag == 1 && v > 0) || (spec.branch_tag == 2 && v < 0)) {
                chosen = &b;
                break;
            }
        }
    }
    if (!chosen) throw std::invalid_argument("no branch available for u" +
                                             std::to_string(family_index));
    return build_family(inst, family_index, spec, *chosen, constants);
}

SolutionFamily make_solution(const EquationInstance& inst, int family_index, const Branch& branch,
                             const FamilyConstants& constants) {
    validate_instance(inst);
    auto table = family_table(inst.id);
    if (family_index < 1 || static_cast<std::size_t>(family_index) > table.size())
        throw std::invalid_argument("no catalogued family u" + std::to_string(family_index) +
                                    " for " + equation_name(inst.id));
    const FamilySpec& spec = table[static_cast<std::size_t>(family_index) - 1];
    if (spec.required_c != 0 && param(inst.params, "c") != spec.required_c)
        throw std::invalid_argument("condition violation for u" + std::to_string(family_index) +
                                    ": requires " + spec.condition);
    InstSystem numeric = instantiate(derive_system(inst.id), inst.params);
    if (!verify_assignment(numeric, branch))
        throw std::invalid_argument("branch does not satisfy the algebraic system exactly");
    return build_family(inst, family_index, spec, branch, constants);
}

double SolutionFamily::xi(double x, double t) const {
    double xpart = beta == 1.0 ? x : std::pow(x, beta) / beta;
    double tpart = alpha == 1.0 ? t : std::pow(t, alpha) / alpha;
    return xpart + omega * tpart;
}

double SolutionFamily::rate(double x, double t) const {
    double z = xi(x, t);
    double base = 1.0;
    switch (kind) {
    case FamilyKind::weier_exp: {
        // argument speed |d arg/d xi| = e^{a xi}, scaled by the local
        // logarithmic derivative of P (large near poles, ~2/arg far away)
        double speed = std::exp(a * z);
        double arg = speed / a + constants.c1;
        auto [p, pp] = weierstrass_p(arg, WeierstrassParams{constants.g3});
        double ratio = std::min(std::abs(pp) / std::max(std::abs(p), 1e-3), 1e3);
        base = 2.0 * std::abs(a) + speed * ratio;
        break;
    }
    case FamilyKind::tanh_sq:
        base = 2.0 * std::abs(a);
        break;
    case FamilyKind::coth_sq:
        base = std::max(2.0 * std::abs(a), 4.0 / std::max(std::abs(z), 0.02));
        break;
    case FamilyKind::tanh_lin:
        base = std::abs(a);
        break;
    case FamilyKind::coth_lin:
        base = std::max(std::abs(a), 4.0 / std::max(std::abs(z), 0.02));
        break;
    default: {
        // Jacobi-argument speed ~ sqrt2 |a| e^{-a xi}; resolve a fraction of
        // the 2K ~ 3.7 period
        double w = std::exp(-a * z);
        base = std::max(3.0 * std::abs(a), 28.0 * std::abs(a) * w);
        break;
    }
    }
    return std::max(1.0, base);
}

double SolutionFamily::eval(double x, double t, double* margin) const {
    double z = xi(x, t);
    double m = 1.0;
    double F = 0.0;
    switch (kind) {
    case FamilyKind::weier_exp: {
        double arg = std::exp(a * z) / a + constants.c1;
        auto [p, pp] = weierstrass_p(arg, WeierstrassParams{constants.g3});
        F = 6.0 / aux_const * std::exp(2.0 * a * z) * p;
        m = 1.0 / (1.0 + std::abs(p));
        break;
    }
    case FamilyKind::tanh_sq:
        F = solitary(SolitaryKind::tanh_sq_plus, a, aux_const, z);
        break;
    case FamilyKind::coth_sq:
        F = solitary(SolitaryKind::coth_sq_plus, a, aux_const, z);
        m = std::min(1.0, std::abs(0.5 * a * z));
        break;
    case FamilyKind::tanh_lin:
        F = solitary(SolitaryKind::tanh_minus, a, constants.eps, z);
        break;
    case FamilyKind::coth_lin:
        F = solitary(SolitaryKind::coth_minus, a, constants.eps, z);
        m = std::min(1.0, std::abs(0.5 * a * z));
        break;
    case FamilyKind::jac_ds: {
        double w = std::exp(-a * z);
        double arg = w + constants.c2;
        auto [sn, cn, dn] = jacobi_sn_cn_dn(arg, kModulus);
        if (std::abs(sn) < 1e-10) throw pole_proximity("ds pole: |sn| < 1e-10");
        F = constants.eps * a * w * dn / sn;
        m = std::min(1.0, std::abs(sn));
        break;
    }
    case FamilyKind::jac_nc: {
        double w = std::exp(-a * z);
        double arg = kSqrt2 * w + constants.c2;
        auto [sn, cn, dn] = jacobi_sn_cn_dn(arg, kModulus);
        if (std::abs(cn) < 1e-10) throw pole_proximity("nc pole: |cn| < 1e-10");
        F = constants.eps * a * w / cn;
        m = std::min(1.0, std::abs(cn));
        break;
    }
    case FamilyKind::jac_cn: {
        double w = std::exp(-a * z);
        F = constants.eps * a * w * jacobi_named(JacobiKind::cn, kSqrt2 * w + constants.c3, kModulus);
        break;
    }
    case FamilyKind::jac_sd: {
        double w = std::exp(-a * z);
        F = kModulus * constants.eps * a * w *
            jacobi_named(JacobiKind::sd, kSqrt2 * w + constants.c3, kModulus);
        break;
    }
    }
    double u = a0 + a1 * F;
    if (!std::isfinite(u) || std::abs(u) > kMagnitudeLimit)
        throw pole_proximity("magnitude overflow");
    if (margin) *margin = m;
    return u;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    double x0, x1, t0, t1;
    int nx, nt;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d,%lf:%lf:%d", &x0, &x1, &nx, &t0, &t1, &nt) != 6)
        throw std::invalid_argument("grid must be x0:x1:n,t0:t1:m");
    if (nx < 1 || nt < 1 || x1 < x0 || t1 < t0)
        throw std::invalid_argument("bad grid specification");
    g.x0 = x0;
    g.x1 = x1;
    g.nx = nx;
    g.t0 = t0;
    g.t1 = t1;
    g.nt = nt;
    return g;
}

namespace {

std::vector<double> grid_axis(double lo, double hi, int n) {
    std::vector<double> out;
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

// A single PDE term evaluated at a point via iterated conformable operators.
struct TermEvaluator {
    double coeff;
    int u_power;
    std::vector<DerivChain> chains;
};

StepPolicy t_axis_policy(const SolutionFamily& sol, double x, double t) {
    double r = sol.rate(x, t);
    return StepPolicy{std::max(1.0, r * std::abs(sol.omega) * std::pow(t, sol.alpha - 1.0) +
                                   (sol.alpha < 1.0 ? 2.0 / t : 0.0))};
}

StepPolicy x_axis_policy(const SolutionFamily& sol, double x, double t) {
    double r = sol.rate(x, t);
    return StepPolicy{std::max(1.0, r * std::pow(x, sol.beta - 1.0) +
                                   (sol.beta < 1.0 ? 2.0 / x : 0.0))};
}

double apply_chain(const SolutionFamily& sol, const DerivChain& chain, double x, double t) {
    double alpha = sol.alpha;
    double beta = sol.beta;
    StepPolicy tpol = t_axis_policy(sol, x, t);
    StepPolicy xpol = x_axis_policy(sol, x, t);

    std::function<double(double, double)> g = [&sol](double xx, double tt) {
        return sol.eval(xx, tt);
    };
    if (chain.t_alpha > 0) {
        auto inner = g;
        int n = chain.t_alpha;
        g = [inner, alpha, n, tpol](double xx, double tt) {
            return iterated_cfd([&inner, xx](double s) { return inner(xx, s); }, tt, alpha, n,
                                tpol);
        };
    }
    if (chain.x_beta > 0) {
        auto inner = g;
        int n = chain.x_beta;
        g = [inner, beta, n, xpol](double xx, double tt) {
            return iterated_cfd([&inner, tt](double s) { return inner(s, tt); }, xx, beta, n,
                                xpol);
        };
    }
    if (chain.x_int > 0) {
        auto inner = g;
        int n = chain.x_int;
        g = [inner, n, xpol](double xx, double tt) {
            return iterated_cfd([&inner, tt](double s) { return inner(s, tt); }, xx, 1.0, n,
                                xpol);
        };
    }
    return g(x, t);
}

} // namespace

ResidualReport residual(const EquationInstance& inst, const SolutionFamily& sol,
                        const GridSpec& grid) {
    validate_instance(inst);
    const EquationDef& def = equation_def(inst.id);
    FpdeAst ast = parse_pde(def.source_text, def.header);

    std::vector<TermEvaluator> terms;
    for (const auto& t : ast.terms) {
        TermEvaluator te;
        te.coeff = to_double(t.coeff_scalar);
        for (const auto& [s, e] : t.coeff_params)
            for (int i = 0; i < e; ++i) te.coeff *= to_double(param(inst.params, s));
        te.u_power = t.u_power;
        te.chains = t.chains;
        terms.push_back(std::move(te));
    }

    // widest stencil order actually used per axis
    int t_order = 0, x_order = 0;
    for (const auto& te : terms)
        for (const auto& ch : te.chains) {
            t_order = std::max(t_order, ch.t_alpha);
            x_order = std::max(x_order, ch.x_beta + ch.x_int);
        }

    ResidualReport report;
    report.grid = grid;
    double sumsq = 0;
    auto xs = grid_axis(grid.x0, grid.x1, grid.nx);
    auto ts = grid_axis(grid.t0, grid.t1, grid.nt);
    constexpr double kMargin = 0.12;

    for (double t : ts) {
        for (double x : xs) {
            try {
                double m = 1.0;
                sol.eval(x, t, &m);
                // probe margins across the stencil reach
                StepPolicy tpol = t_axis_policy(sol, x, t);
                StepPolicy xpol = x_axis_policy(sol, x, t);
                double reach_x = 0, reach_t = 0;
                for (int level = 1; level <= x_order; ++level)
                    reach_x += 2.0 * xpol.step(level, x);
                for (int level = 1; level <= t_order; ++level)
                    reach_t += 2.0 * tpol.step(level, t);
                for (double f : {1.0, 0.5}) {
                    for (double dx : {-f * reach_x, f * reach_x}) {
                        if (dx == 0.0) continue;
                        double mm = 1.0;
                        sol.eval(x + dx, t, &mm);
                        m = std::min(m, mm);
                    }
                    for (double dt : {-f * reach_t, f * reach_t}) {
                        if (dt == 0.0 || t + dt <= 0) continue;
                        double mm = 1.0;
                        sol.eval(x, t + dt, &mm);
                        m = std::min(m, mm);
                    }
                }
                if (m < kMargin) {
                    ++report.skipped;
                    ++report.skip_reasons["singularity proximity"];
                    continue;
                }
                double sum = 0, scale = 0;
                for (const auto& te : terms) {
                    double v = te.coeff;
                    for (int i = 0; i < te.u_power; ++i) v *= sol.eval(x, t);
                    for (const auto& ch : te.chains) v *= apply_chain(sol, ch, x, t);
                    sum += v;
                    scale += std::abs(v);
                }
                double res = std::abs(sum) / (1.0 + scale);
                report.max_residual = std::max(report.max_residual, res);
                sumsq += res * res;
                ++report.evaluated;
            } catch (const pole_proximity& e) {
                ++report.skipped;
                ++report.skip_reasons[e.what()];
            } catch (const std::domain_error& e) {
                ++report.skipped;
                ++report.skip_reasons[e.what()];
            }
        }
    }
    int total = report.evaluated + report.skipped;
    report.rms = report.evaluated ? std::sqrt(sumsq / report.evaluated) : 0.0;
    report.inconclusive = total == 0 || report.skipped * 5 >= total; // >= 20%
    return report;
}

std::string residual_report_json(const ResidualReport& r) {
    nlohmann::json j;
    j["grid"] = {{"x0", r.grid.x0}, {"x1", r.grid.x1}, {"nx", r.grid.nx},
                 {"t0", r.grid.t0}, {"t1", r.grid.t1}, {"nt", r.grid.nt}};
    j["max_residual"] = r.max_residual;
    j["rms"] = r.rms;
    j["evaluated"] = r.evaluated;
    j["skipped"] = r.skipped;
    j["inconclusive"] = r.inconclusive;
    j["skip_reasons"] = r.skip_reasons;
    return j.dump(2);
}

std::vector<SampleRow> sample(const SolutionFamily& sol, const GridSpec& grid) {
    std::vector<SampleRow> rows;
    auto xs = grid_axis(grid.x0, grid.x1, grid.nx);
    auto ts = grid_axis(grid.t0, grid.t1, grid.nt);
    for (double t : ts) {
        for (double x : xs) {
            SampleRow row;
            row.x = x;
            row.t = t;
            try {
                row.u = sol.eval(x, t);
            } catch (const pole_proximity&) {
                row.u.reset();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sample_csv(const std::vector<SampleRow>& rows) {
    std::string out = "x,t,u,skipped\n";
    char buf[96];
    for (const auto& row : rows) {
        if (row.u) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,0\n", row.x, row.t, *row.u);
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,,1\n", row.x, row.t);
        }
        out += buf;
    }
    return out;
}

} // namespace cfwave
