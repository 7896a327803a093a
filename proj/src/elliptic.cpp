#include "cfwave/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cfwave {

double agm(double x, double y) {
    if (!(x > 0) || !(y > 0)) throw std::domain_error("agm requires positive arguments");
    double a = x, b = y;
    for (int i = 0; i < 64 && a != b; ++i) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        if (an == a && bn == b) break;
        a = an;
        b = bn;
    }
    return 0.5 * (a + b);
}

double elliptic_K(double k) {
    if (!(k > 0.0) || !(k < 1.0)) throw std::domain_error("modulus must lie in (0,1)");
    double kp = std::sqrt((1.0 - k) * (1.0 + k));
    constexpr double pi = 3.14159265358979323846;
    return pi / (2.0 * agm(1.0, kp));
}

JacobiTriple jacobi_sn_cn_dn(double z, double k) {
    if (!(k > 0.0) || !(k < 1.0)) throw std::domain_error("modulus must lie in (0,1)");
    double K = elliptic_K(k);
    if (std::abs(z) > 4.0 * K) z = std::remainder(z, 4.0 * K);
    if (z == 0.0) return {0.0, 1.0, 1.0};

    // AGM scale; c_n -> 0 quadratically.
    std::vector<double> a{1.0}, c{k};
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    std::size_t n = 0;
    while (std::abs(c.back()) > std::numeric_limits<double>::epsilon() * a.back() && n < 32) {
        double an = 0.5 * (a.back() + b);
        double cn = 0.5 * (a.back() - b);
        b = std::sqrt(a.back() * b);
        a.push_back(an);
        c.push_back(cn);
        ++n;
    }
    double phi = std::ldexp(1.0, static_cast<int>(n)) * a[n] * z;
    for (std::size_t i = n; i >= 1; --i) {
        double s = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    double sn = std::sin(phi);
    double cn = std::cos(phi);
    // dn never changes sign on the real line (dn >= sqrt(1-k^2) > 0)
    double dn = std::sqrt(std::max(0.0, 1.0 - k * k * sn * sn));
    return {sn, cn, dn};
}

JacobiKind jacobi_kind_from(const std::string& name) {
    if (name == "cn") return JacobiKind::cn;
    if (name == "nc") return JacobiKind::nc;
    if (name == "ds") return JacobiKind::ds;
    if (name == "sd") return JacobiKind::sd;
    throw std::invalid_argument("unknown Jacobi function: " + name);
}

double jacobi_named(JacobiKind kind, double z, double k) {
    auto [sn, cn, dn] = jacobi_sn_cn_dn(z, k);
    constexpr double tiny = 1e-10;
    switch (kind) {
    case JacobiKind::cn:
        return cn;
    case JacobiKind::nc:
        if (std::abs(cn) < tiny) throw pole_proximity("nc pole: |cn| < 1e-10");
        return 1.0 / cn;
    case JacobiKind::ds:
        if (std::abs(sn) < tiny) throw pole_proximity("ds pole: |sn| < 1e-10");
        return dn / sn;
    case JacobiKind::sd:
        if (std::abs(dn) < tiny) throw pole_proximity("sd pole: |dn| < 1e-10");
        return sn / dn;
    }
    throw std::logic_error("unreachable");
}

namespace {

constexpr double kPoleMagnitude = 1e12;

// Laurent coefficients of P(z;0,g3): P = z^-2 + sum_{m>=2} c_m z^(2m-2),
// c_2 = 0, c_3 = g3/28, c_m = 3/((2m+1)(m-3)) * sum_{i=2}^{m-2} c_i c_{m-i}.
struct LaurentSeries {
    std::vector<double> c; // c[m] for m >= 2; c[0], c[1] unused

    explicit LaurentSeries(double g3) {
        c.assign(24, 0.0);
        if (c.size() > 3) c[3] = g3 / 28.0;
        for (std::size_t m = 4; m < c.size(); ++m) {
            double sum = 0.0;
            for (std::size_t i = 2; i + 2 <= m; ++i) sum += c[i] * c[m - i];
            c[m] = 3.0 * sum / ((2.0 * m + 1.0) * (m - 3.0));
        }
    }

    WeierstrassValue eval(double z) const {
        double z2 = z * z;
        double p = 1.0 / z2;
        double pp = -2.0 / (z2 * z);
        double zpow = z2; // z^(2m-2) for m = 2
        int tiny_run = 0;
        for (std::size_t m = 2; m < c.size(); ++m) {
            double term = c[m] * zpow;
            p += term;
            pp += (2.0 * m - 2.0) * term / z;
            // only every third coefficient is nonzero for g2 = 0, so stop
            // after a full stride of negligible terms
            tiny_run = std::abs(term) < 1e-18 ? tiny_run + 1 : 0;
            if (tiny_run >= 3) break;
            zpow *= z2;
        }
        return {p, pp};
    }
};

} // namespace

WeierstrassValue weierstrass_p(double z, const WeierstrassParams& params, int extra_doublings) {
    double g3 = params.g3;
    if (z == 0.0 || std::abs(z) < 1e-8) throw pole_proximity("P pole at the origin");
    double sign = z < 0 ? -1.0 : 1.0; // P even, P' odd
    double az = std::abs(z);

    double r0 = 1.0;
    if (g3 != 0.0) r0 = std::clamp(0.5 * std::pow(std::abs(g3), -1.0 / 6.0), 0.25, 1.0);
    int m = 0;
    if (az > r0) m = static_cast<int>(std::ceil(std::log2(az / r0)));
    m += extra_doublings;
    double z0 = std::ldexp(az, -m);

    LaurentSeries series(g3);
    auto [p, pp] = series.eval(z0);
    for (int i = 0; i < m; ++i) {
        // P(2z) = (P'')^2/(4 P'^2) - 2P with P'' = 6P^2, simplified to avoid
        // cancellation: P(2z) = P (P^3 + 2 g3) / (4 P^3 - g3).
        // P'(2z) = (2 P^6 - 10 g3 P^3 - g3^2) / P'^3.
        double p3 = p * p * p;
        double denom = 4.0 * p3 - g3; // = P'^2
        if (denom == 0.0 || pp == 0.0)
            throw pole_proximity("P duplication step at a half-period");
        double p2z = p * (p3 + 2.0 * g3) / denom;
        double pp2z = (2.0 * p3 * p3 - 10.0 * g3 * p3 - g3 * g3) / (pp * pp * pp);
        p = p2z;
        pp = pp2z;
        if (std::abs(p) > kPoleMagnitude) throw pole_proximity("|P| exceeds 1e12");
    }
    if (std::abs(p) > kPoleMagnitude) throw pole_proximity("|P| exceeds 1e12");
    return {p, sign * pp};
}

double solitary(SolitaryKind kind, double a, double k, double xi) {
    double half = 0.5 * a * xi;
    switch (kind) {
    case SolitaryKind::tanh_sq_plus: {
        double t = 1.0 + std::tanh(half);
        return 1.5 * a * a / k * t * t;
    }
    case SolitaryKind::coth_sq_plus: {
        if (std::abs(half) < 1e-10) throw pole_proximity("coth singularity at xi = 0");
        double t = 1.0 + 1.0 / std::tanh(half);
        return 1.5 * a * a / k * t * t;
    }
    case SolitaryKind::tanh_minus:
        return 0.5 * k * a * (1.0 - std::tanh(half));
    case SolitaryKind::coth_minus:
        if (std::abs(half) < 1e-10) throw pole_proximity("coth singularity at xi = 0");
        return 0.5 * k * a * (1.0 - 1.0 / std::tanh(half));
    }
    throw std::logic_error("unreachable");
}

} // namespace cfwave
