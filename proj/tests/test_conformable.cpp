#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfwave/conformable.hpp"
#include "cfwave/pde.hpp"

#include <cmath>
#include <random>

using namespace cfwave;
using doctest::Approx;

TEST_CASE("cfd: power rule D^alpha t^beta = beta t^(beta-alpha)") {
    for (double beta : {0.5, 1.0, 2.0, 3.0}) {
        for (double alpha : {0.3, 0.5, 1.0}) {
            for (double t : {0.5, 1.0, 2.0}) {
                RealFn f = [beta](double s) { return std::pow(s, beta); };
                double got = cfd(f, t, alpha);
                double expect = beta * std::pow(t, beta - alpha);
                CHECK(std::abs(got - expect) / (1.0 + std::abs(expect)) < 1e-8);
            }
        }
    }
    // the spec's worked instance: f = t^2, alpha = 1/2, t = 4 -> 2*4^(3/2) = 16
    CHECK(cfd([](double s) { return s * s; }, 4.0, 0.5) == Approx(16.0).epsilon(1e-10));
}

TEST_CASE("cfd: alpha = 1 is the classical derivative") {
    CHECK(cfd([](double s) { return std::sin(s); }, 1.0, 1.0) ==
          Approx(std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("cfd: exponential case to 1e-8 relative") {
    RealFn f = [](double s) { return std::exp(3.0 * s); };
    double expect = std::pow(2.0, 0.3) * 3.0 * std::exp(6.0);
    CHECK(std::abs(cfd(f, 2.0, 0.7) - expect) / expect < 1e-8);
}

TEST_CASE("cfd: domain errors") {
    RealFn f = [](double s) { return s; };
    CHECK_THROWS_AS(cfd(f, -1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(cfd(f, 0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(cfd(f, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(cfd(f, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(cfd(f, 2e-5, 0.5), std::domain_error); // stencil would cross t <= 0
}

TEST_CASE("cfd_limit: identity function gives t^(1-alpha) * 1") {
    for (double alpha : {0.3, 0.6, 1.0}) {
        RealFn f = [](double s) { return s; };
        CHECK(cfd_limit(f, 1.0, alpha) == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("cfd_limit matches the power rule to 1e-6") {
    for (double beta : {0.5, 2.0, 3.0}) {
        for (double alpha : {0.3, 0.7, 1.0}) {
            RealFn f = [beta](double s) { return std::pow(s, beta); };
            double expect = beta * std::pow(1.7, beta - alpha);
            CHECK(std::abs(cfd_limit(f, 1.7, alpha) - expect) / (1.0 + std::abs(expect)) < 1e-6);
        }
    }
}

TEST_CASE("cfd_limit and cfd agree on random polynomials") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> t_dist(0.5, 3.0);
    const double alphas[4] = {0.3, 0.5, 0.7, 1.0};
    for (int trial = 0; trial < 20; ++trial) {
        double c0 = coeff(rng), c1 = coeff(rng), c2 = coeff(rng), c3 = coeff(rng);
        RealFn f = [=](double s) { return ((c3 * s + c2) * s + c1) * s + c0; };
        double t = t_dist(rng);
        double alpha = alphas[trial % 4];
        double a = cfd(f, t, alpha);
        double b = cfd_limit(f, t, alpha);
        CHECK(std::abs(a - b) / (1.0 + std::abs(a)) < 1e-6);
    }
}

TEST_CASE("iterated_cfd: classical second derivative") {
    RealFn f = [](double s) { return s * s; };
    CHECK(iterated_cfd(f, 1.3, 1.0, 2) == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("iterated_cfd: n = 2 on t^3 at alpha = 1/2 gives (15/2) t^2") {
    RealFn f = [](double s) { return s * s * s; };
    double got = iterated_cfd(f, 2.0, 0.5, 2);
    CHECK(std::abs(got - 30.0) / 30.0 < 1e-5);
}

TEST_CASE("iterated_cfd guards and argument checks") {
    RealFn f = [](double s) { return s; };
    CHECK_THROWS_AS(iterated_cfd(f, 1.0, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(iterated_cfd(f, 1.0, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(iterated_cfd(f, 1e-6, 0.5, 2), std::domain_error);
}

TEST_CASE("property_suite: all four laws within their tolerances") {
    LawReport report = property_suite(400, 20240817);
    CHECK(report.trials == 400);
    CHECK(report.linearity < 1e-12);
    CHECK(report.power_rule < 1e-8);
    CHECK(report.product_rule < 1e-7);
    CHECK(report.chain_rule < 1e-7);
    std::string json = law_report_json(report);
    CHECK(json.find("power_rule") != std::string::npos);
    CHECK(json.find("\"seed\": 20240817") != std::string::npos);
}

TEST_CASE("cross-validation: numeric CFD of u(x,t) = U(xi) matches the lowered ODE") {
    // smooth polynomial profile U and its exact derivatives
    auto U = [](double xi) { return 0.3 * xi * xi * xi - 1.2 * xi + 2.0; };
    auto U1 = [](double xi) { return 0.9 * xi * xi - 1.2; };
    auto U2 = [](double xi) { return 1.8 * xi; };
    auto U3 = [](double) { return 1.8; };

    const std::vector<std::string> params = {"lambda", "mu", "nu"};
    FpdeAst ast = parse_pde("D{t,a}u + lambda*u*D{x,b}u + mu*D{x,2b}u + nu*D{x,3b}u = 0",
                            params);
    const double lambda = 0.7, mu = -1.3, nu = 0.4, omega = 1.9;

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pt(0.5, 3.0);
    const double orders[3] = {0.5, 0.7, 1.0};
    for (int trial = 0; trial < 20; ++trial) {
        double x = pt(rng), t = pt(rng);
        double alpha = orders[trial % 3];
        double beta = orders[(trial / 3) % 3];
        auto u = [&](double xx, double tt) {
            return U(std::pow(xx, beta) / beta + omega * std::pow(tt, alpha) / alpha);
        };
        // numeric left side via iterated conformable operators
        double numeric = 0.0;
        numeric += iterated_cfd([&](double s) { return u(x, s); }, t, alpha, 1);
        numeric += lambda * u(x, t) * iterated_cfd([&](double s) { return u(s, t); }, x, beta, 1);
        numeric += mu * iterated_cfd([&](double s) { return u(s, t); }, x, beta, 2);
        numeric += nu * iterated_cfd([&](double s) { return u(s, t); }, x, beta, 3);
        // lowered ODE evaluated at U: omega U' + lambda U U' + mu U'' + nu U'''
        double xi = std::pow(x, beta) / beta + omega * std::pow(t, alpha) / alpha;
        double exact = omega * U1(xi) + lambda * U(xi) * U1(xi) + mu * U2(xi) + nu * U3(xi);
        CHECK(std::abs(numeric - exact) / (1.0 + std::abs(exact)) < 1e-6);
    }
    CHECK(ast.terms.size() == 4); // the AST drives the shape above
}
