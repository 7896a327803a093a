#pragma once

#include "cfwave/elliptic.hpp"
#include "cfwave/pde.hpp"
#include "cfwave/solve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cfwave {

enum class EquationId { kdv_burgers, fisher, rlw_burgers, cahn_allen, mkdv_burgers, telegraph };

EquationId equation_from(const std::string& name);
const char* equation_name(EquationId id);

struct EquationDef {
    EquationId id;
    std::string name;
    std::string source_text;            // concrete-grammar equation
    std::vector<std::string> header;    // declared parameter symbols
    BetaMode beta_mode;
    AnsatzForm form;
    AuxVariant aux;
    std::vector<std::string> unknowns;  // solved symbols
    bool omega_is_param;                // true: the instance supplies omega
    SolveScript script;                 // nonempty when the generic strategy is stuck
    int family_count;                   // number of catalogued u_i
};

const EquationDef& equation_def(EquationId id);
const std::vector<EquationId>& all_equations();

struct EquationInstance {
    EquationId id;
    std::map<std::string, Rational> params; // equation params + aux constant (+ omega when free)
    double alpha = 1.0;
    double beta = 1.0;
};

void validate_instance(const EquationInstance& inst); // throws std::invalid_argument

// parse -> lower -> ansatz_substitute -> collect, cached per equation.
const AlgebraicSystem& derive_system(EquationId id);

// Exact closed-form parameter branches for the instance.
std::vector<Branch> curated_branches(EquationId id,
                                     const std::map<std::string, Rational>& params);

struct DeriveReport {
    std::string system_text;
    std::vector<Branch> branches; // solver output
    std::vector<Branch> curated;  // closed forms evaluated at the same parameters
    bool matches_catalog = false;
    std::vector<std::string> notes;
};

// Full pipeline: parse, lower, substitute, collect, instantiate, solve, then
// exact comparison against the curated closed forms.
DeriveReport derive(const EquationInstance& inst);
std::string derive_report_json(const DeriveReport& report);

enum class FamilyKind {
    weier_exp, // (6/b) e^{2a xi} P((1/a) e^{a xi} + c1, 0, g3)
    tanh_sq,   // (3a^2/2b) (1 + tanh(a xi/2))^2
    coth_sq,
    jac_ds,    // eps a e^{-a xi} ds(e^{-a xi} + c2, sqrt2/2)
    jac_nc,    // eps a e^{-a xi} nc(sqrt2 e^{-a xi} + c2, sqrt2/2)
    tanh_lin,  // (eps a / 2)(1 - tanh(a xi/2))
    coth_lin,
    jac_cn,    // eps a e^{-a xi} cn(sqrt2 e^{-a xi} + c3, sqrt2/2)
    jac_sd,    // (sqrt2/2) eps a e^{-a xi} sd(sqrt2 e^{-a xi} + c3, sqrt2/2)
};

struct FamilyConstants {
    double c1 = 0, c2 = 0, c3 = 0, g3 = 0;
    int eps = 1;
};

// An evaluable closed-form u(x, t).
struct SolutionFamily {
    EquationId eq;
    int index = 1; // u_i
    FamilyKind kind;
    FamilyConstants constants;
    double alpha = 1, beta = 1;
    double a0 = 0, a1 = 0, a = 0, omega = 0, aux_const = 0; // doubles for evaluation
    Branch branch;                                          // exact values

    double xi(double x, double t) const;
    // margin (optional out) is a 0..1 distance-to-singularity measure used by
    // the residual harness; throws pole_proximity at hard poles.
    double eval(double x, double t, double* margin = nullptr) const;
    // local xi-growth-rate estimate; FD steps shrink near poles and singular
    // lines so stencils stay inside the smooth region
    double rate(double x, double t) const;
};

// family_index is the paper's 1-based u_i. branch_choice picks the sign pair
// when the family admits both (Cahn-Allen): 0 = a > 0, 1 = a < 0.
SolutionFamily make_solution(const EquationInstance& inst, int family_index,
                             const FamilyConstants& constants, int branch_choice = 0);
// Spec-shaped overload taking an explicit (exactly verified) branch.
SolutionFamily make_solution(const EquationInstance& inst, int family_index, const Branch& branch,
                             const FamilyConstants& constants);

struct GridSpec {
    double x0 = 0.5, x1 = 2.0;
    int nx = 20;
    double t0 = 0.5, t1 = 2.0;
    int nt = 20;
};
GridSpec parse_grid(const std::string& text); // "x0:x1:n,t0:t1:m"

struct ResidualReport {
    GridSpec grid;
    double max_residual = 0;
    double rms = 0;
    int evaluated = 0;
    int skipped = 0;
    bool inconclusive = false;
    std::map<std::string, int> skip_reasons;
};

// Applies the conformable operators of the original fractional equation
// directly to u(x, t) at each non-skipped grid point; the residual is
// |sum of terms| / (1 + sum |term|).
ResidualReport residual(const EquationInstance& inst, const SolutionFamily& sol,
                        const GridSpec& grid);
std::string residual_report_json(const ResidualReport& report);

struct SampleRow {
    double x = 0, t = 0;
    std::optional<double> u;
};

std::vector<SampleRow> sample(const SolutionFamily& sol, const GridSpec& grid); // t-major
std::string sample_csv(const std::vector<SampleRow>& rows);

} // namespace cfwave
