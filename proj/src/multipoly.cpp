#include "cfwave/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cfwave {

int symbol_rank(const std::string& s) {
    if (s == "a0") return 0;
    if (s == "a1") return 1;
    if (s == "a") return 2;
    if (s == "b") return 3;
    if (s == "c") return 4;
    if (s == "omega") return 5;
    return 6;
}

bool symbol_less(const std::string& lhs, const std::string& rhs) {
    int rl = symbol_rank(lhs), rr = symbol_rank(rhs);
    if (rl != rr) return rl < rr;
    return lhs < rhs;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        } else if (symbol_less(a[i].first, b[j].first)) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

int mono_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [_, e] : m) d += e;
    return d;
}

bool MonoGrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    int da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    // Lexicographic: first symbol (in global order) with differing exponent
    // decides; the higher exponent is the larger monomial.
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return a[i].second < b[j].second;
            ++i, ++j;
        } else if (symbol_less(a[i].first, b[j].first)) {
            return false; // a has positive exponent where b has zero: a is larger
        } else {
            return true;
        }
    }
    if (i < a.size()) return false;
    if (j < b.size()) return true;
    return false;
}

MultiPoly MultiPoly::constant(const Rational& r) {
    MultiPoly p;
    p.add_term({}, r);
    return p;
}

MultiPoly MultiPoly::symbol(const std::string& name, int exp) {
    MultiPoly p;
    if (exp == 0) return constant(1);
    p.add_term({{name, exp}}, 1);
    return p;
}

MultiPoly MultiPoly::term(const Rational& coeff, const Monomial& mono) {
    MultiPoly p;
    p.add_term(mono, coeff);
    return p;
}

void MultiPoly::add_term(const Monomial& mono, const Rational& coeff) {
    if (coeff == 0) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(mono, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MultiPoly::constant_value() const {
    if (terms_.empty()) return 0;
    return terms_.begin()->second;
}

int MultiPoly::total_degree() const {
    int d = 0;
    for (const auto& [m, _] : terms_) d = std::max(d, mono_degree(m));
    return d;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
    MultiPoly out = *this;
    out += other;
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const {
    MultiPoly out = *this;
    out -= other;
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
    MultiPoly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
    return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
    *this = *this * other;
    return *this;
}

MultiPoly MultiPoly::operator*(const Rational& s) const {
    MultiPoly out;
    if (s == 0) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

MultiPoly MultiPoly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    MultiPoly out = constant(1);
    for (int i = 0; i < e; ++i) out *= *this;
    return out;
}

MultiPoly MultiPoly::substituted(const std::string& sym, const Rational& value) const {
    MultiPoly out;
    for (const auto& [m, c] : terms_) {
        Rational coeff = c;
        Monomial rest;
        for (const auto& [s, e] : m) {
            if (s == sym) {
                for (int i = 0; i < e; ++i) coeff *= value;
            } else {
                rest.emplace_back(s, e);
            }
        }
        out.add_term(rest, coeff);
    }
    return out;
}

Rational MultiPoly::evaluate(const std::map<std::string, Rational>& values) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (const auto& [s, e] : m) {
            auto it = values.find(s);
            if (it == values.end()) throw std::invalid_argument("unbound symbol in evaluate: " + s);
            for (int i = 0; i < e; ++i) t *= it->second;
        }
        sum += t;
    }
    return sum;
}

std::vector<std::string> MultiPoly::symbols() const {
    std::vector<std::string> out;
    for (const auto& [m, _] : terms_)
        for (const auto& [s, e] : m)
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    std::sort(out.begin(), out.end(), symbol_less);
    return out;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        bool wrote_coeff = false;
        if (mag != 1 || m.empty()) {
            os << rational_str(mag);
            wrote_coeff = true;
        }
        for (const auto& [s, e] : m) {
            if (wrote_coeff) os << "*";
            os << s;
            if (e != 1) os << "^" << e;
            wrote_coeff = true;
        }
    }
    return os.str();
}

namespace {

struct PolyLexer {
    const std::string& text;
    std::size_t pos = 0;
    bool allow_primes;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

class PolyParser {
public:
    PolyParser(const std::string& text,
               const std::function<void(const std::string&, std::size_t)>& validate, bool primes)
        : lex_{text, 0, primes}, validate_(validate) {}

    MultiPoly parse() {
        MultiPoly p = parse_sum();
        lex_.skip_ws();
        if (lex_.pos != lex_.text.size())
            throw parse_error("unexpected trailing input", lex_.pos);
        return p;
    }

private:
    PolyLexer lex_;
    const std::function<void(const std::string&, std::size_t)>& validate_;

    MultiPoly parse_sum() {
        bool neg = false;
        if (lex_.eat('-')) neg = true;
        else lex_.eat('+');
        MultiPoly acc = parse_product();
        if (neg) acc = -acc;
        while (true) {
            char c = lex_.peek();
            if (c == '+' || c == '-') {
                ++lex_.pos;
                MultiPoly t = parse_product();
                if (c == '-') acc -= t;
                else acc += t;
            } else {
                break;
            }
        }
        return acc;
    }

    MultiPoly parse_product() {
        MultiPoly acc = parse_factor();
        while (lex_.eat('*')) acc *= parse_factor();
        return acc;
    }

    int parse_exponent() {
        lex_.skip_ws();
        std::size_t start = lex_.pos;
        std::string digits;
        while (lex_.pos < lex_.text.size() && std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
            digits += lex_.text[lex_.pos++];
        if (digits.empty()) throw parse_error("expected integer exponent", start);
        if (digits.size() > 2) throw parse_error("exponent too large", start);
        return std::stoi(digits);
    }

    MultiPoly parse_factor() {
        char c = lex_.peek();
        std::size_t start = lex_.pos;
        if (c == '(') {
            ++lex_.pos;
            MultiPoly inner = parse_sum();
            if (!lex_.eat(')')) throw parse_error("expected ')'", lex_.pos);
            if (lex_.eat('^')) inner = inner.pow(parse_exponent());
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (lex_.pos < lex_.text.size() &&
                   std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
                digits += lex_.text[lex_.pos++];
            Rational r{Int(digits)};
            lex_.skip_ws();
            if (lex_.pos < lex_.text.size() && lex_.text[lex_.pos] == '/') {
                ++lex_.pos;
                lex_.skip_ws();
                std::string den;
                while (lex_.pos < lex_.text.size() &&
                       std::isdigit(static_cast<unsigned char>(lex_.text[lex_.pos])))
                    den += lex_.text[lex_.pos++];
                if (den.empty()) throw parse_error("expected denominator", lex_.pos);
                Int d{den};
                if (d == 0) throw parse_error("zero denominator", lex_.pos);
                r /= Rational(d);
            }
            MultiPoly p = MultiPoly::constant(r);
            if (lex_.eat('^')) p = p.pow(parse_exponent());
            return p;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (lex_.pos < lex_.text.size() &&
                   (std::isalnum(static_cast<unsigned char>(lex_.text[lex_.pos])) ||
                    lex_.text[lex_.pos] == '_'))
                name += lex_.text[lex_.pos++];
            if (lex_.allow_primes) {
                while (lex_.pos < lex_.text.size() && lex_.text[lex_.pos] == '\'')
                    name += lex_.text[lex_.pos++];
            }
            validate_(name, start);
            int exp = 1;
            if (lex_.eat('^')) exp = parse_exponent();
            return MultiPoly::symbol(name, exp);
        }
        throw parse_error("unexpected character", lex_.pos);
    }
};

} // namespace

MultiPoly parse_poly(const std::string& text,
                     const std::function<void(const std::string&, std::size_t)>& validate_ident,
                     bool allow_primes) {
    return PolyParser(text, validate_ident, allow_primes).parse();
}

} // namespace cfwave
