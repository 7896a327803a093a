#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfwave/catalog.hpp"
#include "cfwave/solve.hpp"

using namespace cfwave;

namespace {

InstSystem instantiate_catalog(EquationId id, const std::map<std::string, Rational>& params) {
    return instantiate(derive_system(id), params);
}

Surd rat(long long n, long long d = 1) { return Surd(Rational(n, d)); }

Branch branch_of(std::initializer_list<std::pair<const char*, Surd>> vals) {
    Branch b;
    for (auto& [k, v] : vals) b.values.emplace(k, v);
    return b;
}

} // namespace

TEST_CASE("instantiate: KdV-Burgers at (1,2,3) leaves a system over the unknowns") {
    InstSystem sys = instantiate_catalog(
        EquationId::kdv_burgers,
        {{"lambda", 1}, {"mu", 2}, {"nu", 3}, {"omega", 5}, {"b", 1}});
    REQUIRE(sys.equations.size() == 4);
    for (const auto& eq : sys.equations)
        for (const auto& s : eq.symbols())
            CHECK((s == "a0" || s == "a1" || s == "a"));
}

TEST_CASE("instantiate: empty system stays empty") {
    AlgebraicSystem sys;
    sys.unknowns = {"a1"};
    InstSystem inst = instantiate(sys, {});
    CHECK(inst.equations.empty());
}

TEST_CASE("instantiate: errors") {
    const AlgebraicSystem& sys = derive_system(EquationId::telegraph);
    CHECK_THROWS_WITH_AS(static_cast<void>(instantiate(sys, {{"mu", 1}, {"c", 2}})),
                         "missing parameter: nu", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(instantiate(sys, {{"mu", 1}, {"nu", -1}, {"c", 2}, {"a1", 3}})),
        "parameter assigned to an unknown symbol: a1", std::invalid_argument);
}

TEST_CASE("solve: Cahn-Allen yields exactly the paper's 4 branches") {
    InstSystem sys = instantiate_catalog(EquationId::cahn_allen, {{"c", 2}});
    SolveResult res = solve(sys, {"a1"});
    REQUIRE(res.branches.size() == 4);
    Surd half_rt2 = *sqrt_exact(Rational(1, 2));
    Surd rt2 = *sqrt_exact(Rational(2));
    std::vector<Branch> expect;
    for (int sa : {+1, -1})
        for (int s1 : {+1, -1}) {
            Surd a = sa > 0 ? half_rt2 : -half_rt2;
            expect.push_back(branch_of({{"a1", s1 > 0 ? rt2 : -rt2},
                                        {"a", a},
                                        {"omega", a * rat(-3)}}));
        }
    for (const auto& e : expect)
        CHECK(std::count(res.branches.begin(), res.branches.end(), e) == 1);
    // every branch back-substitutes exactly
    for (const auto& b : res.branches) CHECK(verify_assignment(sys, b));
}

TEST_CASE("solve: Cahn-Allen with c = -2 has no real branches") {
    InstSystem sys = instantiate_catalog(EquationId::cahn_allen, {{"c", -2}});
    CHECK(solve(sys, {"a1"}).branches.empty());
}

TEST_CASE("solve: Fisher branch pair (0, 1, +-1, +-5) at b = 6") {
    InstSystem sys = instantiate_catalog(EquationId::fisher, {{"b", 6}});
    SolveResult res = solve(sys, {"a1"});
    REQUIRE(res.branches.size() == 2);
    CHECK(std::count(res.branches.begin(), res.branches.end(),
                     branch_of({{"a0", rat(0)}, {"a1", rat(1)}, {"a", rat(1)},
                                {"omega", rat(5)}})) == 1);
    CHECK(std::count(res.branches.begin(), res.branches.end(),
                     branch_of({{"a0", rat(0)}, {"a1", rat(1)}, {"a", rat(-1)},
                                {"omega", rat(-5)}})) == 1);
}

TEST_CASE("solve: KdV-Burgers single branch at the spec's instance") {
    InstSystem sys = instantiate_catalog(
        EquationId::kdv_burgers,
        {{"lambda", 1}, {"mu", 2}, {"nu", 3}, {"omega", 5}, {"b", 1}});
    SolveResult res = solve(sys, {"a1"});
    REQUIRE(res.branches.size() == 1);
    CHECK(res.branches[0] ==
          branch_of({{"a0", rat(-117, 25)}, {"a1", rat(-6)}, {"a", rat(-2, 15)}}));
    CHECK(!res.branches[0].provenance.empty());
}

TEST_CASE("solve: RLW-Burgers at the spec's instance") {
    InstSystem sys = instantiate_catalog(
        EquationId::rlw_burgers,
        {{"p", 1}, {"q", 1}, {"r", 5}, {"s", 1}, {"omega", 1}, {"b", 1}});
    SolveResult res = solve(sys, {"a1"});
    REQUIRE(res.branches.size() == 1);
    CHECK(res.branches[0] == branch_of({{"a0", rat(4)}, {"a1", rat(-2)}, {"a", rat(-1)}}));
}

TEST_CASE("solve: mKdV-Burgers a1^2 = -3cs/lambda") {
    InstSystem sys = instantiate_catalog(
        EquationId::mkdv_burgers, {{"lambda", -6}, {"r", 3}, {"s", 1}, {"c", 2}});
    SolveResult res = solve(sys, {"a1"});
    REQUIRE(res.branches.size() == 2);
    for (const auto& b : res.branches) {
        CHECK(b.values.at("a") == rat(1));
        CHECK(b.values.at("omega") == rat(2));
        CHECK(b.values.at("a1") * b.values.at("a1") == rat(1));
    }
}

TEST_CASE("solve: telegraph needs its script; generic strategy reports stuck") {
    InstSystem sys = instantiate_catalog(EquationId::telegraph,
                                         {{"mu", 1}, {"nu", -1}, {"c", 2}});
    CHECK_THROWS_AS(static_cast<void>(solve(sys, {"a1"})), not_triangularizable);

    const SolveScript& script = equation_def(EquationId::telegraph).script;
    SolveResult res = solve(sys, {"a1"}, &script);
    REQUIRE(res.branches.size() == 4);
    // omega = +-3 sqrt(1/7), a = 3 mu/(2 omega) = +-sqrt(7)/2, a1^2 = 4/7
    for (const auto& b : res.branches) {
        const Surd& a = b.values.at("a");
        const Surd& w = b.values.at("omega");
        const Surd& a1 = b.values.at("a1");
        CHECK(a * a == rat(7, 4));
        CHECK(w * w == rat(9, 7));
        CHECK(a1 * a1 == rat(4, 7));
        CHECK(a.d() == 7);
        // the sign pairing survives exact back-substitution only when a and
        // omega agree: a = 3 mu / (2 omega)
        CHECK(a * w * rat(2) == rat(3));
    }
}

TEST_CASE("verify_assignment: exact zero verdicts per equation") {
    InstSystem sys = instantiate_catalog(
        EquationId::kdv_burgers,
        {{"lambda", 1}, {"mu", 2}, {"nu", 3}, {"omega", 5}, {"b", 1}});
    Branch good = branch_of({{"a0", rat(-117, 25)}, {"a1", rat(-6)}, {"a", rat(-2, 15)}});
    for (const auto& v : evaluate_equations(sys, good)) CHECK(v.is_zero());
    Branch bad = branch_of({{"a0", rat(0)}, {"a1", rat(-6)}, {"a", rat(-2, 15)}});
    CHECK(!verify_assignment(sys, bad));
}

TEST_CASE("verify_assignment: the all-zero assignment satisfies Fisher's a1-divisible "
          "equations but solve never returns it") {
    InstSystem sys = instantiate_catalog(EquationId::fisher, {{"b", 6}});
    Branch zero = branch_of({{"a0", rat(0)}, {"a1", rat(0)}, {"a", rat(0)}, {"omega", rat(0)}});
    auto values = evaluate_equations(sys, zero);
    for (const auto& v : values) CHECK(v.is_zero());
    SolveResult res = solve(sys, {"a1"});
    for (const auto& b : res.branches) CHECK(!b.values.at("a1").is_zero());
    bool noted = false;
    for (const auto& n : res.notes)
        if (n.find("a1") != std::string::npos && n.find("excluded") != std::string::npos)
            noted = true;
    CHECK(noted);
}

TEST_CASE("verify_assignment: mKdV-Burgers spec example with exact surds") {
    InstSystem sys = instantiate_catalog(
        EquationId::mkdv_burgers, {{"lambda", -6}, {"r", 3}, {"s", 1}, {"c", 2}});
    for (int sign : {+1, -1}) {
        Branch b = branch_of({{"a1", rat(sign)}, {"a", rat(1)}, {"omega", rat(2)}});
        CHECK(verify_assignment(sys, b));
    }
}

TEST_CASE("solve error taxonomy") {
    // inconsistent: an equation is a nonzero constant
    {
        AlgebraicSystem sys;
        sys.unknowns = {"a1"};
        sys.equations.emplace_back(AnsatzPoly::Key{0, 0}, MultiPoly::constant(1));
        InstSystem inst = instantiate(sys, {});
        CHECK_THROWS_AS(static_cast<void>(solve(inst, {})), inconsistent_system);
    }
    // degree too high: univariate cubic with no alternative
    {
        AlgebraicSystem sys;
        sys.unknowns = {"a"};
        MultiPoly cubic = MultiPoly::symbol("a", 3) - MultiPoly::constant(2);
        sys.equations.emplace_back(AnsatzPoly::Key{0, 0}, cubic);
        InstSystem inst = instantiate(sys, {});
        CHECK_THROWS_AS(static_cast<void>(solve(inst, {})), degree_too_high);
    }
    // not triangularizable: two unknowns in every equation, no content to split
    {
        AlgebraicSystem sys;
        sys.unknowns = {"a", "omega"};
        MultiPoly mixed = MultiPoly::symbol("a") * MultiPoly::symbol("omega") -
                          MultiPoly::constant(1) + MultiPoly::symbol("a");
        sys.equations.emplace_back(AnsatzPoly::Key{0, 0}, mixed);
        InstSystem inst = instantiate(sys, {});
        CHECK_THROWS_AS(static_cast<void>(solve(inst, {})), not_triangularizable);
    }
}

TEST_CASE("branch JSON shape") {
    Branch b = branch_of({{"a", *sqrt_exact(Rational(7, 4))}});
    b.provenance.push_back("curated closed form");
    std::string j = branch_json(b);
    CHECK(j.find("\"a\"") != std::string::npos);
    CHECK(j.find("\"p\":\"0\"") != std::string::npos);
    CHECK(j.find("\"q\":\"1/2\"") != std::string::npos);
    CHECK(j.find("\"d\":\"7\"") != std::string::npos);
    CHECK(j.find("provenance") != std::string::npos);
}
