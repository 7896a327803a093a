#include "cfwave/surd.hpp"

#include <cmath>
#include <sstream>

namespace cfwave {

namespace {

const Int kTrialLimit = 1'000'000;
const Int kResidualLimit = Int(kTrialLimit) * kTrialLimit;

} // namespace

std::pair<Int, Int> squarefree_split(const Int& n) {
    if (n <= 0) throw std::invalid_argument("squarefree_split requires n > 0");
    Int rest = n, k = 1, s = 1;
    for (Int f = 2; f * f <= rest && f <= kTrialLimit; ++f) {
        if (rest % f != 0) continue;
        int e = 0;
        while (rest % f == 0) {
            rest /= f;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) k *= f;
        if (e % 2) s *= f;
    }
    if (rest > 1) {
        Int r = boost::multiprecision::sqrt(rest);
        if (r * r == rest) {
            k *= r;
        } else if (rest <= kResidualLimit) {
            // no factor <= 1e6 and <= 1e12: necessarily prime
            s *= rest;
        } else {
            throw radicand_too_large("cannot squarefree-normalize radicand " + rest.str());
        }
    }
    return {k, s};
}

std::optional<Surd> sqrt_exact(const Rational& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Surd(Rational(0));
    // sqrt(n/m) = sqrt(n*m)/m
    Int nm = numerator(r) * denominator(r);
    auto [k, s] = squarefree_split(nm);
    Rational q(k, denominator(r));
    if (s == 1) return Surd(q);
    Surd out; // s is squarefree: construct the canonical form directly
    out.q_ = q;
    out.d_ = Rational(s);
    return out;
}

Surd Surd::make(const Rational& p, const Rational& q, const Rational& d) {
    Surd out;
    out.p_ = p;
    if (q == 0 || d == 0) return out;
    if (d < 0) throw std::invalid_argument("negative radicand");
    auto root = sqrt_exact(d);
    if (root->is_rational()) {
        out.p_ += q * root->p();
        return out;
    }
    out.q_ = q * root->q();
    out.d_ = root->d();
    return out;
}

Surd Surd::operator-() const {
    Surd out;
    out.p_ = -p_;
    out.q_ = -q_;
    out.d_ = d_;
    return out;
}

Surd Surd::operator+(const Surd& o) const {
    if (is_rational()) {
        Surd out = o;
        out.p_ += p_;
        return out;
    }
    if (o.is_rational()) {
        Surd out = *this;
        out.p_ += o.p_;
        return out;
    }
    if (d_ != o.d_)
        throw incompatible_radicands("cannot add sqrt(" + rational_str(d_) + ") and sqrt(" +
                                     rational_str(o.d_) + ")");
    Surd out;
    out.p_ = p_ + o.p_;
    out.q_ = q_ + o.q_;
    out.d_ = out.q_ == 0 ? Rational(0) : d_;
    return out;
}

Surd Surd::operator-(const Surd& o) const { return *this + (-o); }

Surd Surd::operator*(const Surd& o) const {
    if (is_rational() || o.is_rational()) {
        const Surd& val = is_rational() ? o : *this;
        const Rational& r = is_rational() ? p_ : o.p_;
        Surd out;
        out.p_ = val.p_ * r;
        out.q_ = val.q_ * r;
        out.d_ = out.q_ == 0 ? Rational(0) : val.d_;
        return out;
    }
    if (d_ == o.d_) {
        Surd out;
        out.p_ = p_ * o.p_ + q_ * o.q_ * d_;
        out.q_ = p_ * o.q_ + q_ * o.p_;
        out.d_ = out.q_ == 0 ? Rational(0) : d_;
        return out;
    }
    if (is_pure() && o.is_pure()) {
        // q1*sqrt(d1) * q2*sqrt(d2) = q1*q2*sqrt(d1*d2)
        return make(0, q_ * o.q_, d_ * o.d_);
    }
    throw incompatible_radicands("cannot multiply values over sqrt(" + rational_str(d_) +
                                 ") and sqrt(" + rational_str(o.d_) + ")");
}

Surd Surd::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero surd");
    if (is_rational()) return Surd(Rational(1) / p_);
    // 1/(p+q*sqrt(d)) = (p - q*sqrt(d)) / (p^2 - q^2*d); the denominator is
    // nonzero because d is squarefree (p^2 = q^2 d has no rational solution).
    Rational denom = p_ * p_ - q_ * q_ * d_;
    Surd out;
    out.p_ = p_ / denom;
    out.q_ = -q_ / denom;
    out.d_ = d_;
    return out;
}

Surd Surd::operator/(const Surd& o) const { return *this * o.inverse(); }

Surd Surd::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Surd out{Rational(1)};
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
}

double Surd::to_double() const {
    return cfwave::to_double(p_) + cfwave::to_double(q_) * std::sqrt(cfwave::to_double(d_));
}

std::string Surd::str() const {
    if (is_rational()) return rational_str(p_);
    std::ostringstream os;
    if (p_ != 0) {
        os << rational_str(p_);
        if (q_ > 0) os << "+";
    }
    if (q_ == -1) os << "-";
    else if (q_ != 1) os << rational_str(q_) << "*";
    os << "sqrt(" << rational_str(d_) << ")";
    return os.str();
}

} // namespace cfwave
