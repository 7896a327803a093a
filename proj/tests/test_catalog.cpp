#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfwave/catalog.hpp"
#include "cfwave/elliptic.hpp"

#include <cmath>

using namespace cfwave;
using doctest::Approx;

namespace {

EquationInstance fisher_instance(Rational b = 6, double alpha = 1.0) {
    EquationInstance inst;
    inst.id = EquationId::fisher;
    inst.params = {{"b", b}};
    inst.alpha = alpha;
    inst.beta = 1.0;
    return inst;
}

EquationInstance telegraph_instance(double alpha = 1.0) {
    EquationInstance inst;
    inst.id = EquationId::telegraph;
    inst.params = {{"mu", 1}, {"nu", -1}, {"c", 2}};
    inst.alpha = alpha;
    inst.beta = alpha;
    return inst;
}

EquationInstance mkdv_instance(Rational c, Rational lambda) {
    EquationInstance inst;
    inst.id = EquationId::mkdv_burgers;
    inst.params = {{"lambda", lambda}, {"r", 3}, {"s", 1}, {"c", c}};
    inst.alpha = 1.0;
    inst.beta = 1.0;
    return inst;
}

} // namespace

TEST_CASE("equation ids round-trip") {
    for (EquationId id : all_equations()) CHECK(equation_from(equation_name(id)) == id);
    CHECK_THROWS_AS(equation_from("heat"), std::invalid_argument);
}

TEST_CASE("instance validation") {
    EquationInstance bad = fisher_instance();
    bad.alpha = 0.0;
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = fisher_instance();
    bad.beta = 0.5; // fisher uses integer x-derivatives
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = fisher_instance(0);
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = telegraph_instance();
    bad.params["mu"] = Rational(2, 9);
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = telegraph_instance();
    bad.params["mu"] = Rational(1, 9); // 0 < mu < 2/9: imaginary wave speed
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = telegraph_instance();
    bad.params["c"] = 3;
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = fisher_instance();
    bad.params["lambda"] = 1; // not a fisher parameter
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
}

TEST_CASE("derive matches the curated closed forms on the spec instances") {
    EquationInstance kdv;
    kdv.id = EquationId::kdv_burgers;
    kdv.params = {{"lambda", 1}, {"mu", 2}, {"nu", 3}, {"omega", 5}, {"b", 1}};
    DeriveReport r = derive(kdv);
    CHECK(r.matches_catalog);
    REQUIRE(r.branches.size() == 1);
    CHECK(r.branches[0].values.at("a") == Surd(Rational(-2, 15)));
    CHECK(r.branches[0].values.at("a0") == Surd(Rational(-117, 25)));
    CHECK(r.branches[0].values.at("a1") == Surd(Rational(-6)));

    DeriveReport rf = derive(fisher_instance());
    CHECK(rf.matches_catalog);
    CHECK(rf.branches.size() == 2);

    EquationInstance rlw;
    rlw.id = EquationId::rlw_burgers;
    rlw.params = {{"p", 1}, {"q", 1}, {"r", 5}, {"s", 1}, {"omega", 1}, {"b", 1}};
    DeriveReport rr = derive(rlw);
    CHECK(rr.matches_catalog);
    REQUIRE(rr.branches.size() == 1);
    CHECK(rr.branches[0].values.at("a") == Surd(Rational(-1)));
    CHECK(rr.branches[0].values.at("a0") == Surd(Rational(4)));
    CHECK(rr.branches[0].values.at("a1") == Surd(Rational(-2)));

    DeriveReport rt = derive(telegraph_instance());
    CHECK(rt.matches_catalog);
    CHECK(rt.branches.size() == 4);
    std::string json = derive_report_json(rt);
    CHECK(json.find("matches_catalog") != std::string::npos);
}

TEST_CASE("make_solution: point values from the paper's explicit formulas") {
    // fisher u2 at x = 0, t -> 0+ with alpha = 1: (1/4)(1 + tanh 0)^2 = 1/4
    SolutionFamily u2 = make_solution(fisher_instance(), 2, {});
    CHECK(u2.eval(0.0, 1e-12) == Approx(0.25).epsilon(1e-9));

    // fisher u1 with c1 = 0, g3 = 4 at (0, 0): P(1, 0, 4)
    FamilyConstants k;
    k.c1 = 0.0;
    k.g3 = 4.0;
    SolutionFamily u1 = make_solution(fisher_instance(), 1, k);
    double expect = weierstrass_p(1.0, {4.0}).p;
    CHECK(u1.eval(0.0, 1e-14) == Approx(expect).epsilon(1e-10));

    // cahn-allen u3 upper signs, eps = 1: (1/2)(1 - tanh 0) = 1/2
    EquationInstance cahn;
    cahn.id = EquationId::cahn_allen;
    cahn.params = {{"c", 2}};
    SolutionFamily u3 = make_solution(cahn, 3, {}, 0);
    CHECK(u3.a > 0);
    CHECK(u3.eval(0.0, 1e-12) == Approx(0.5).epsilon(1e-9));
    SolutionFamily u3l = make_solution(cahn, 3, {}, 1);
    CHECK(u3l.a < 0);
}

TEST_CASE("make_solution: paper-consistency spot-check for fisher u1") {
    // composed a1 * F equals the literal e^{2xi} P(e^{xi} + c1, 0, g3)
    FamilyConstants k;
    k.c1 = 0.4;
    k.g3 = 2.0;
    SolutionFamily u1 = make_solution(fisher_instance(), 1, k);
    for (double x : {0.1, 0.6, 1.3}) {
        for (double t : {0.05, 0.4}) {
            double xi = x + 5.0 * t;
            double literal = std::exp(2.0 * xi) * weierstrass_p(std::exp(xi) + 0.4, {2.0}).p;
            CHECK(u1.eval(x, t) == Approx(literal).epsilon(1e-12));
        }
    }
}

TEST_CASE("make_solution: condition violations") {
    // mkdv u1 demands c = 2 with s*lambda < 0
    CHECK_THROWS_WITH_AS(static_cast<void>(make_solution(mkdv_instance(2, 6), 1, {})),
                         doctest::Contains("s*lambda < 0"), std::invalid_argument);
    // u5 demands c = -2
    CHECK_THROWS_WITH_AS(static_cast<void>(make_solution(mkdv_instance(2, -6), 5, {})),
                         doctest::Contains("c = -2"), std::invalid_argument);
    CHECK_NOTHROW(static_cast<void>(make_solution(mkdv_instance(2, -6), 1, {})));
    CHECK_NOTHROW(static_cast<void>(make_solution(mkdv_instance(-2, 6), 5, {})));
    // family index bounds
    CHECK_THROWS_AS(static_cast<void>(make_solution(fisher_instance(), 7, {})),
                    std::invalid_argument);
    // explicit-branch overload rejects a wrong branch
    Branch wrong;
    wrong.values.emplace("a0", Surd(Rational(1)));
    wrong.values.emplace("a1", Surd(Rational(1)));
    wrong.values.emplace("a", Surd(Rational(1)));
    wrong.values.emplace("omega", Surd(Rational(1)));
    CHECK_THROWS_AS(static_cast<void>(make_solution(fisher_instance(), 2, wrong, {})),
                    std::invalid_argument);
    // and accepts an exact one
    DeriveReport r = derive(fisher_instance());
    CHECK_NOTHROW(static_cast<void>(make_solution(fisher_instance(), 2, r.branches[0], {})));
}

TEST_CASE("residual: fisher u2 at alpha = 1 and alpha = 1/2") {
    SolutionFamily u2 = make_solution(fisher_instance(), 2, {});
    GridSpec grid; // default 0.5..2, 20x20
    ResidualReport rep = residual(fisher_instance(), u2, grid);
    CHECK(!rep.inconclusive);
    CHECK(rep.evaluated == 400);
    CHECK(rep.max_residual < 1e-8);

    SolutionFamily u2h = make_solution(fisher_instance(6, 0.5), 2, {});
    ResidualReport rep_h = residual(fisher_instance(6, 0.5), u2h, grid);
    CHECK(!rep_h.inconclusive);
    CHECK(rep_h.max_residual < 1e-5);
}

TEST_CASE("residual: telegraph u3 at alpha = 1/2 stays under the iterated-CFD tier") {
    EquationInstance inst = telegraph_instance(0.5);
    SolutionFamily u3 = make_solution(inst, 3, {});
    ResidualReport rep = residual(inst, u3, GridSpec{});
    CHECK(!rep.inconclusive);
    CHECK(rep.max_residual < 1e-4);
}

TEST_CASE("residual report JSON") {
    SolutionFamily u2 = make_solution(fisher_instance(), 2, {});
    GridSpec small{0.5, 2.0, 4, 0.5, 2.0, 4};
    std::string json = residual_report_json(residual(fisher_instance(), u2, small));
    CHECK(json.find("max_residual") != std::string::npos);
    CHECK(json.find("inconclusive") != std::string::npos);
}

TEST_CASE("sample: deterministic t-major ordering and CSV shape") {
    SolutionFamily u2 = make_solution(fisher_instance(), 2, {});
    GridSpec grid{0.5, 2.0, 2, 0.5, 2.0, 2};
    auto rows = sample(u2, grid);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].t == rows[1].t); // t-major: x varies fastest
    CHECK(rows[0].x < rows[1].x);
    CHECK(rows[1].t < rows[2].t);
    std::string csv = sample_csv(rows);
    CHECK(csv.substr(0, 14) == "x,t,u,skipped\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find(",0\n") != std::string::npos);
}

TEST_CASE("sample: fisher u2 is monotone in x at fixed t") {
    SolutionFamily u2 = make_solution(fisher_instance(), 2, {});
    GridSpec grid{0.5, 2.0, 20, 1.0, 1.0, 1};
    auto rows = sample(u2, grid);
    REQUIRE(rows.size() == 20);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].u.has_value());
        CHECK(*rows[i].u > *rows[i - 1].u);
    }
}

TEST_CASE("sample: pole-adjacent Weierstrass points are flagged, u left empty") {
    // shift the P argument onto the origin pole at the grid point (1, 0.1)
    FamilyConstants k;
    k.g3 = 4.0;
    k.c1 = -std::exp(1.5) + 1e-7;
    SolutionFamily u1 = make_solution(fisher_instance(), 1, k);
    GridSpec grid{1.0, 1.0, 1, 0.1, 0.1, 1};
    auto rows = sample(u1, grid);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].u.has_value());
    std::string csv = sample_csv(rows);
    CHECK(csv.find(",,1\n") != std::string::npos);
}

TEST_CASE("parse_grid accepts the CLI format") {
    GridSpec g = parse_grid("0.5:2:20,0.6:1.9:7");
    CHECK(g.x0 == 0.5);
    CHECK(g.x1 == 2.0);
    CHECK(g.nx == 20);
    CHECK(g.t0 == 0.6);
    CHECK(g.t1 == 1.9);
    CHECK(g.nt == 7);
    CHECK_THROWS_AS(parse_grid("1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("2:1:5,1:2:5"), std::invalid_argument);
}

TEST_CASE("mkdv u6 keeps the internally consistent amplitude") {
    // a1 = sqrt(-3cs/lambda) at c = -2 requires s*lambda > 0; the composed
    // prefactor a1 * (sqrt2/2) * a equals the printed sqrt(3s/lambda)
    EquationInstance inst = mkdv_instance(-2, 6);
    SolutionFamily u6 = make_solution(inst, 6, {});
    CHECK(u6.a1 == Approx(std::sqrt(6.0 * 1.0 / 6.0)).epsilon(1e-12)); // sqrt(-3cs/lambda)
    double prefactor = u6.a1 * (std::sqrt(2.0) / 2.0) * u6.a;
    CHECK(prefactor == Approx(std::sqrt(3.0 * 1.0 / 6.0)).epsilon(1e-12));
}
