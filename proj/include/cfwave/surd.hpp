#pragma once

#include "cfwave/rational.hpp"

#include <optional>
#include <stdexcept>
#include <tuple>

namespace cfwave {

class incompatible_radicands : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class radicand_too_large : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact value p + q*sqrt(d) with rational p, q and squarefree-normalized
// rational d >= 0; q == 0 implies d == 0. Arithmetic is closed for operands
// sharing the same d (or one rational); products of two pure radicals
// (p == 0) with different radicands are also closed, since
// sqrt(d1)*sqrt(d2) = sqrt(d1*d2) renormalizes. Anything else throws
// incompatible_radicands.
class Surd {
public:
    Surd() = default;
    Surd(const Rational& rational_value) : p_(rational_value) {} // NOLINT(google-explicit-constructor)
    Surd(long long n) : p_(n) {}                                 // NOLINT(google-explicit-constructor)
    static Surd make(const Rational& p, const Rational& q, const Rational& d);

    const Rational& p() const { return p_; }
    const Rational& q() const { return q_; }
    const Rational& d() const { return d_; }
    bool is_rational() const { return q_ == 0; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }
    bool is_pure() const { return p_ == 0; } // pure radical or zero

    Surd operator-() const;
    Surd operator+(const Surd& o) const;
    Surd operator-(const Surd& o) const;
    Surd operator*(const Surd& o) const;
    Surd operator/(const Surd& o) const;
    Surd inverse() const;
    Surd pow(int e) const;

    bool operator==(const Surd& o) const {
        return p_ == o.p_ && q_ == o.q_ && d_ == o.d_;
    }
    bool operator!=(const Surd& o) const { return !(*this == o); }
    bool operator<(const Surd& o) const { // structural order (for canonical sorting)
        return std::tie(p_, q_, d_) < std::tie(o.p_, o.q_, o.d_);
    }

    double to_double() const;
    std::string str() const; // e.g. "-3/2*sqrt(2)", "5", "1/2+1/2*sqrt(5)"

private:
    friend std::optional<Surd> sqrt_exact(const Rational& r);
    Rational p_ = 0, q_ = 0, d_ = 0;
};

// Exact square root of a nonnegative rational; nullopt when r < 0.
std::optional<Surd> sqrt_exact(const Rational& r);

// n = k^2 * s with s squarefree; requires n > 0.
std::pair<Int, Int> squarefree_split(const Int& n);

} // namespace cfwave
