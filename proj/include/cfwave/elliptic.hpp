#pragma once

#include <stdexcept>
#include <string>

namespace cfwave {

// Raised when an evaluation lands too close to a pole; grid harnesses skip
// the sample point.
class pole_proximity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arithmetic-geometric mean of two positive reals, to machine precision.
double agm(double x, double y);

// Complete elliptic integral K(k) = pi / (2 agm(1, sqrt(1-k^2))), k in (0,1).
double elliptic_K(double k);

struct JacobiTriple {
    double sn, cn, dn;
};

// Jacobi elliptic functions on the real line, modulus k in (0,1); computed by
// the AGM form of the descending Landen transformation, argument reduced
// modulo 4K first.
JacobiTriple jacobi_sn_cn_dn(double z, double k);

enum class JacobiKind { cn, nc, ds, sd };
JacobiKind jacobi_kind_from(const std::string& name);

// nc = 1/cn, ds = dn/sn, sd = sn/dn; throws pole_proximity when the relevant
// denominator magnitude is below 1e-10.
double jacobi_named(JacobiKind kind, double z, double k);

struct WeierstrassParams {
    double g3 = 0; // g2 is fixed to 0
};

struct WeierstrassValue {
    double p, p_prime;
};

// Weierstrass P with invariants (0, g3) at real z: Laurent series inside a
// radius r0 = clamp(0.5*|g3|^(-1/6), 0.25, 1.0), then repeated duplication.
// Throws pole_proximity when |P| exceeds 1e12. extra_doublings is a test hook
// for the duplication-consistency check.
WeierstrassValue weierstrass_p(double z, const WeierstrassParams& params,
                               int extra_doublings = 0);

enum class SolitaryKind { tanh_sq_plus, coth_sq_plus, tanh_minus, coth_minus };

// Closed-form solitary profiles:
//   tanh_sq_plus:  (3a^2/(2b)) * (1 + tanh(a xi/2))^2      (k = b)
//   coth_sq_plus:  (3a^2/(2b)) * (1 + coth(a xi/2))^2      (k = b)
//   tanh_minus:    (eps a/2)   * (1 - tanh(a xi/2))        (k = eps)
//   coth_minus:    (eps a/2)   * (1 - coth(a xi/2))        (k = eps)
// k is b for the squared forms and eps for the linear forms. The coth forms
// throw pole_proximity when |a xi / 2| < 1e-10.
double solitary(SolitaryKind kind, double a, double k, double xi);

} // namespace cfwave
