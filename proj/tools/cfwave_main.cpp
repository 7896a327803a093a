#include "cfwave/catalog.hpp"
#include "cfwave/conformable.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::map<std::string, cfwave::Rational> parse_params(const std::string& text) {
    std::map<std::string, cfwave::Rational> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--params expects k=v,k=v,... got '" + item + "'");
        out[item.substr(0, eq)] = cfwave::parse_rational(item.substr(eq + 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int family_index(const std::string& name) {
    if (name.size() < 2 || name[0] != 'u')
        throw std::invalid_argument("--family expects u<N>, e.g. u2");
    return std::stoi(name.substr(1));
}

struct CommonArgs {
    std::string eq;
    std::string params;
    std::string omega, b, c;
    double alpha = 1.0;
    double beta = -1.0; // default: per-equation rule

    cfwave::EquationInstance instance() const {
        cfwave::EquationInstance inst;
        inst.id = cfwave::equation_from(eq);
        inst.params = parse_params(params);
        if (!omega.empty()) inst.params["omega"] = cfwave::parse_rational(omega);
        if (!b.empty()) inst.params["b"] = cfwave::parse_rational(b);
        if (!c.empty()) inst.params["c"] = cfwave::parse_rational(c);
        inst.alpha = alpha;
        const auto& def = cfwave::equation_def(inst.id);
        if (beta > 0) inst.beta = beta;
        else if (def.beta_mode == cfwave::BetaMode::beta_eq_alpha) inst.beta = alpha;
        else inst.beta = 1.0;
        return inst;
    }

    void attach(CLI::App* cmd, bool orders) {
        cmd->add_option("--eq", eq, "equation id (kdv-burgers, fisher, rlw-burgers, "
                                    "cahn-allen, mkdv-burgers, telegraph)")
            ->required();
        cmd->add_option("--params", params, "equation parameters, k=v,k=v with exact rationals");
        cmd->add_option("--omega", omega, "wave speed (kdv-burgers, rlw-burgers)");
        cmd->add_option("--b", b, "auxiliary constant b (kdv-burgers, fisher, rlw-burgers)");
        cmd->add_option("--c", c, "auxiliary constant c, 2 or -2 (cahn-allen, mkdv-burgers, "
                                  "telegraph)");
        if (orders) {
            cmd->add_option("--alpha", alpha, "time-fractional order in (0,1]");
            cmd->add_option("--beta", beta, "space-fractional order (where independent)");
        }
    }
};

cfwave::FamilyConstants parse_constants(double c1, double c2, double c3, double g3, int eps) {
    cfwave::FamilyConstants k;
    k.c1 = c1;
    k.c2 = c2;
    k.c3 = c3;
    k.g3 = g3;
    k.eps = eps;
    return k;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling-wave solution toolkit for conformable fractional PDEs"};
    app.require_subcommand(1);

    // derive
    auto* derive_cmd = app.add_subcommand("derive", "derive and solve the coefficient system");
    CommonArgs dargs;
    dargs.attach(derive_cmd, /*orders=*/false);
    bool as_json = false;
    derive_cmd->add_flag("--json", as_json, "print the full JSON report");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "numerical residual check of a solution");
    CommonArgs vargs;
    vargs.attach(verify_cmd, /*orders=*/true);
    std::string vfamily = "u1", vgrid;
    int vbranch = 0, veps = 1;
    double vc1 = 0, vc2 = 0.3, vc3 = 0.3, vg3 = 1.0;
    verify_cmd->add_option("--family", vfamily, "family index, e.g. u2")->required();
    verify_cmd->add_option("--grid", vgrid, "grid as x0:x1:n,t0:t1:m (default 0.5:2:20,0.5:2:20)");
    verify_cmd->add_option("--branch", vbranch, "sign-pair choice where applicable (0 or 1)");
    verify_cmd->add_option("--c1", vc1, "free constant c1 (Weierstrass families)");
    verify_cmd->add_option("--c2", vc2, "free constant c2 (c = 2 Jacobi families)");
    verify_cmd->add_option("--c3", vc3, "free constant c3 (c = -2 Jacobi families)");
    verify_cmd->add_option("--g3", vg3, "Weierstrass invariant g3");
    verify_cmd->add_option("--eps", veps, "sign epsilon, +1 or -1");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "tabulate a solution surface as CSV");
    CommonArgs sargs;
    sargs.attach(sample_cmd, /*orders=*/true);
    std::string sfamily = "u1", sgrid, sout;
    int sbranch = 0, seps = 1;
    double sc1 = 0, sc2 = 0.3, sc3 = 0.3, sg3 = 1.0;
    sample_cmd->add_option("--family", sfamily, "family index, e.g. u2")->required();
    sample_cmd->add_option("--grid", sgrid, "grid as x0:x1:n,t0:t1:m");
    sample_cmd->add_option("--out", sout, "output CSV path (default stdout)");
    sample_cmd->add_option("--branch", sbranch, "sign-pair choice where applicable");
    sample_cmd->add_option("--c1", sc1, "free constant c1");
    sample_cmd->add_option("--c2", sc2, "free constant c2");
    sample_cmd->add_option("--c3", sc3, "free constant c3");
    sample_cmd->add_option("--g3", sg3, "Weierstrass invariant g3");
    sample_cmd->add_option("--eps", seps, "sign epsilon, +1 or -1");

    // props
    auto* props_cmd = app.add_subcommand("props", "conformable-derivative law report");
    int trials = 200;
    std::uint64_t seed = 20240817;
    props_cmd->add_option("--trials", trials, "number of randomized trials");
    props_cmd->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*derive_cmd) {
            auto report = cfwave::derive(dargs.instance());
            if (as_json) {
                std::cout << cfwave::derive_report_json(report) << "\n";
            } else {
                std::cout << "system: " << report.system_text << "\n";
                std::cout << "branches: " << report.branches.size()
                          << (report.matches_catalog ? " (matches catalog)"
                                                     : " (MISMATCH with catalog)")
                          << "\n";
                for (const auto& b : report.branches)
                    std::cout << "  " << cfwave::branch_json(b) << "\n";
                return report.matches_catalog ? 0 : 1;
            }
        } else if (*verify_cmd) {
            auto inst = vargs.instance();
            auto sol = cfwave::make_solution(inst, family_index(vfamily),
                                             parse_constants(vc1, vc2, vc3, vg3, veps), vbranch);
            cfwave::GridSpec grid;
            if (!vgrid.empty()) grid = cfwave::parse_grid(vgrid);
            auto report = cfwave::residual(inst, sol, grid);
            std::cout << cfwave::residual_report_json(report) << "\n";
            return report.inconclusive ? 2 : 0;
        } else if (*sample_cmd) {
            auto inst = sargs.instance();
            auto sol = cfwave::make_solution(inst, family_index(sfamily),
                                             parse_constants(sc1, sc2, sc3, sg3, seps), sbranch);
            cfwave::GridSpec grid;
            if (!sgrid.empty()) grid = cfwave::parse_grid(sgrid);
            std::string csv = cfwave::sample_csv(cfwave::sample(sol, grid));
            if (sout.empty()) {
                std::cout << csv;
            } else {
                std::ofstream f(sout);
                if (!f) throw std::runtime_error("cannot open " + sout);
                f << csv;
            }
        } else if (*props_cmd) {
            auto report = cfwave::property_suite(trials, seed);
            std::cout << cfwave::law_report_json(report) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
