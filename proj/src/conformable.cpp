#include "cfwave/conformable.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace cfwave {

namespace {

// 4th-order central difference.
double central4(const RealFn& f, double t, double h) {
    return (8.0 * (f(t + h) - f(t - h)) - (f(t + 2.0 * h) - f(t - 2.0 * h))) / (12.0 * h);
}

// One Richardson level over the 4th-order stencil: O(h^6).
double derivative_fd(const RealFn& f, double t, double h) {
    double d1 = central4(f, t, h);
    double d2 = central4(f, t, 0.5 * h);
    return (16.0 * d2 - d1) / 15.0;
}

void check_domain(double t, double alpha) {
    if (!(t > 0)) throw std::domain_error("conformable derivative requires t > 0");
    if (!(alpha > 0) || alpha > 1) throw std::domain_error("alpha must lie in (0,1]");
}

} // namespace

double cfd(const RealFn& f, double t, double alpha) {
    check_domain(t, alpha);
    double h = std::max(1e-5, 1e-3 * t);
    if (t < 5.0 * h) throw std::domain_error("stencil would cross t <= 0");
    return std::pow(t, 1.0 - alpha) * derivative_fd(f, t, h);
}

double cfd_limit(const RealFn& f, double t, double alpha) {
    check_domain(t, alpha);
    double scale = std::pow(t, 1.0 - alpha);
    constexpr int levels = 6;
    double eps0 = 1e-2;
    if (t + eps0 * scale <= 0) throw std::domain_error("stencil would cross t <= 0");
    double tableau[levels][levels];
    for (int i = 0; i < levels; ++i) {
        double eps = eps0 / std::ldexp(1.0, i);
        tableau[i][0] = (f(t + eps * scale) - f(t)) / eps;
        for (int j = 1; j <= i; ++j) {
            double w = std::ldexp(1.0, j);
            tableau[i][j] = (w * tableau[i][j - 1] - tableau[i - 1][j - 1]) / (w - 1.0);
        }
    }
    return tableau[levels - 1][levels - 1];
}

double StepPolicy::factor(int level) const {
    switch (level) {
    case 1: return 1e-3;
    case 2: return 5e-3;
    default: return 2e-2;
    }
}

double StepPolicy::step(int level, double t) const {
    if (scale > 0) {
        static constexpr double abs_factor[3] = {0.06, 0.12, 0.24};
        double h = abs_factor[std::clamp(level, 1, 3) - 1] / scale;
        // keep every nested stencil strictly inside t > 0
        return std::min(h, t / 12.0);
    }
    return std::max(1e-5, factor(level) * t);
}

double iterated_cfd(const RealFn& f, double t, double alpha, int n, const StepPolicy& policy) {
    check_domain(t, alpha);
    if (n < 1 || n > 3) throw std::invalid_argument("iterated_cfd supports 1 <= n <= 3");
    // worst-case stencil reach across all levels
    double reach = 0;
    for (int level = 1; level <= n; ++level) reach += 2.0 * policy.step(level, t);
    if (t - reach <= 0 || t < 5.0 * policy.step(1, t))
        throw std::domain_error("stencil would cross t <= 0");
    if (n == 1) return std::pow(t, 1.0 - alpha) * derivative_fd(f, t, policy.step(1, t));
    RealFn inner = [&f, alpha, n, &policy](double s) {
        return iterated_cfd(f, s, alpha, n - 1, policy);
    };
    return std::pow(t, 1.0 - alpha) * derivative_fd(inner, t, policy.step(n, t));
}

namespace {

struct TestFn {
    RealFn f;
    RealFn df; // analytic derivative
};

std::vector<TestFn> smooth_family() {
    std::vector<TestFn> out;
    out.push_back({[](double t) { return t * t; }, [](double t) { return 2.0 * t; }});
    out.push_back({[](double t) { return t * t * t - 2.0 * t + 1.0; },
                   [](double t) { return 3.0 * t * t - 2.0; }});
    out.push_back({[](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }});
    out.push_back({[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }});
    out.push_back({[](double t) { return std::sin(t * t); },
                   [](double t) { return 2.0 * t * std::cos(t * t); }});
    out.push_back({[](double t) { return std::exp(0.5 * t) * std::sin(t); },
                   [](double t) {
                       return std::exp(0.5 * t) * (0.5 * std::sin(t) + std::cos(t));
                   }});
    return out;
}

double rel_err(double approx, double exact) {
    return std::abs(approx - exact) / (1.0 + std::abs(exact));
}

} // namespace

LawReport property_suite(int trials, std::uint64_t seed) {
    LawReport report;
    report.trials = trials;
    report.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t_dist(0.5, 3.0);
    const double alphas[4] = {0.3, 0.5, 0.7, 1.0};
    auto family = smooth_family();
    std::uniform_int_distribution<std::size_t> pick(0, family.size() - 1);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> beta_dist(0.5, 3.0);

    for (int trial = 0; trial < trials; ++trial) {
        double t = t_dist(rng);
        double alpha = alphas[trial % 4];
        const TestFn& F = family[pick(rng)];
        const TestFn& G = family[pick(rng)];
        double tpow = std::pow(t, 1.0 - alpha);

        // (1.2) linearity
        double ca = coeff(rng), cb = coeff(rng);
        RealFn combo = [&, ca, cb](double s) { return ca * F.f(s) + cb * G.f(s); };
        double lhs = cfd(combo, t, alpha);
        double rhs = ca * cfd(F.f, t, alpha) + cb * cfd(G.f, t, alpha);
        report.linearity = std::max(report.linearity, rel_err(lhs, rhs));

        // (1.3) power rule: D^alpha t^beta = beta t^(beta-alpha)
        double beta = beta_dist(rng);
        RealFn powfn = [beta](double s) { return std::pow(s, beta); };
        double power = cfd(powfn, t, alpha);
        report.power_rule =
            std::max(report.power_rule, rel_err(power, beta * std::pow(t, beta - alpha)));

        // (1.4) product rule, both derivatives analytic
        RealFn prod = [&](double s) { return F.f(s) * G.f(s); };
        double dprod = cfd(prod, t, alpha);
        double expect = G.f(t) * tpow * F.df(t) + F.f(t) * tpow * G.df(t);
        report.product_rule = std::max(report.product_rule, rel_err(dprod, expect));

        // (1.5) chain rule: D^alpha f(g(t)) = f'(g(t)) D^alpha g(t), on pairs
        // whose composition keeps bounded higher derivatives over [0.5, 3]
        static const std::vector<std::pair<TestFn, TestFn>> pairs = [] {
            TestFn sine{[](double s) { return std::sin(s); },
                        [](double s) { return std::cos(s); }};
            TestFn square{[](double s) { return s * s; }, [](double s) { return 2.0 * s; }};
            TestFn cubic{[](double s) { return s * s * s - 2.0 * s + 1.0; },
                         [](double s) { return 3.0 * s * s - 2.0; }};
            TestFn soft_exp{[](double s) { return std::exp(0.3 * s); },
                            [](double s) { return 0.3 * std::exp(0.3 * s); }};
            std::vector<std::pair<TestFn, TestFn>> p;
            p.emplace_back(sine, square); // sin(t^2)
            p.emplace_back(square, sine);
            p.emplace_back(cubic, sine);
            p.emplace_back(soft_exp, sine);
            p.emplace_back(soft_exp, square);
            return p;
        }();
        const auto& [outer, inner] = pairs[static_cast<std::size_t>(trial) % pairs.size()];
        RealFn comp = [&](double s) { return outer.f(inner.f(s)); };
        double dcomp = cfd(comp, t, alpha);
        double chain = outer.df(inner.f(t)) * tpow * inner.df(t);
        report.chain_rule = std::max(report.chain_rule, rel_err(dcomp, chain));
    }
    return report;
}

std::string law_report_json(const LawReport& report) {
    nlohmann::json j{
        {"laws",
         {{"linearity", report.linearity},
          {"power_rule", report.power_rule},
          {"product_rule", report.product_rule},
          {"chain_rule", report.chain_rule}}},
        {"trials", report.trials},
        {"seed", report.seed},
    };
    return j.dump(2);
}

} // namespace cfwave
