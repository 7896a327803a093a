#include "cfwave/pde.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

namespace cfwave {

namespace {

constexpr int kMaxOrderCount = 4; // per-operator application bound
constexpr int kMaxChainOrder = 3; // total xi-derivative order supported

struct RawTerm {
    Rational scalar = 1;
    Monomial params;
    int u_power = 0;
    std::vector<DerivChain> chains;
};

using TermSum = std::vector<RawTerm>;

RawTerm term_mul(const RawTerm& a, const RawTerm& b) {
    RawTerm out;
    out.scalar = a.scalar * b.scalar;
    out.params = mono_mul(a.params, b.params);
    out.u_power = a.u_power + b.u_power;
    out.chains = a.chains;
    out.chains.insert(out.chains.end(), b.chains.begin(), b.chains.end());
    return out;
}

TermSum sum_mul(const TermSum& a, const TermSum& b) {
    TermSum out;
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(term_mul(x, y));
    return out;
}

void sum_append(TermSum& a, const TermSum& b, bool negate) {
    for (auto t : b) {
        if (negate) t.scalar = -t.scalar;
        a.push_back(std::move(t));
    }
}

bool term_key_less(const PdeTerm& a, const PdeTerm& b) {
    if (a.u_power != b.u_power) return a.u_power < b.u_power;
    if (a.chains != b.chains) return a.chains < b.chains;
    return MonoGrlexLess{}(a.coeff_params, b.coeff_params);
}

class PdeParser {
public:
    PdeParser(const std::string& text, const std::vector<std::string>& header)
        : text_(text), header_(header) {}

    FpdeAst parse() {
        TermSum lhs = parse_sum();
        expect('=');
        TermSum rhs = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw parse_error("unexpected trailing input", pos_);
        sum_append(lhs, rhs, /*negate=*/true);
        return finalize(lhs);
    }

private:
    const std::string& text_;
    const std::vector<std::string>& header_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw parse_error(std::string("expected '") + c + "'", pos_);
    }

    int parse_int(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            digits += text_[pos_++];
        if (digits.empty()) throw parse_error(std::string("expected ") + what, start);
        if (digits.size() > 3) throw parse_error("order bound exceeded", start);
        return std::stoi(digits);
    }

    TermSum parse_sum() {
        TermSum acc;
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        sum_append(acc, parse_product(), neg);
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                sum_append(acc, parse_product(), c == '-');
            } else {
                break;
            }
        }
        return acc;
    }

    TermSum parse_product() {
        TermSum acc = parse_factor();
        while (eat('*')) acc = sum_mul(acc, parse_factor());
        return acc;
    }

    TermSum parse_factor() {
        char c = peek();
        std::size_t start = pos_;
        if (c == '(') {
            ++pos_;
            TermSum inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                digits += text_[pos_++];
            Rational r{Int(digits)};
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                int den = parse_int("denominator");
                if (den == 0) throw parse_error("zero denominator", pos_);
                r /= den;
            }
            RawTerm t;
            t.scalar = r;
            return {t};
        }
        if (c == 'D') return parse_chain();
        if (c == 'u') {
            ++pos_;
            // 'u' must stand alone, not as an identifier prefix
            if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                        text_[pos_] == '_' || text_[pos_] == '{'))
                throw parse_error("undeclared symbol", start);
            RawTerm t;
            t.u_power = 1;
            if (eat('^')) t.u_power = parse_int("integer exponent");
            return {t};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                name += text_[pos_++];
            if (std::find(header_.begin(), header_.end(), name) == header_.end())
                throw parse_error("undeclared symbol '" + name + "'", start);
            int exp = 1;
            if (eat('^')) exp = parse_int("integer exponent");
            RawTerm t;
            t.params = Monomial{{name, exp}};
            return {t};
        }
        throw parse_error("unexpected character", pos_);
    }

    // ("D{" axis "," order "}")+ "u"
    TermSum parse_chain() {
        DerivChain chain;
        while (peek() == 'D') {
            std::size_t start = pos_;
            ++pos_;
            if (!eat('{')) throw parse_error("malformed derivative token", start);
            char axis = peek();
            if (axis != 't' && axis != 'x') throw parse_error("malformed derivative token", pos_);
            ++pos_;
            if (!eat(',')) throw parse_error("malformed derivative token", pos_);
            int count = 1;
            skip_ws();
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                count = parse_int("derivative order");
            char letter = '\0';
            skip_ws();
            if (pos_ < text_.size() && (text_[pos_] == 'a' || text_[pos_] == 'b'))
                letter = text_[pos_++];
            if (!eat('}')) throw parse_error("malformed derivative token", pos_);
            if (count <= 0) throw parse_error("malformed derivative token", start);
            if (count > kMaxOrderCount) throw parse_error("order bound exceeded", start);
            if (axis == 't') {
                if (letter != 'a') throw parse_error("malformed derivative token", start);
                chain.t_alpha += count;
                if (chain.t_alpha > kMaxOrderCount) throw parse_error("order bound exceeded", start);
            } else if (letter == 'a' || letter == 'b') {
                chain.x_beta += count;
                if (letter == 'a') chain.x_alpha_token = true;
                if (chain.x_beta > kMaxOrderCount) throw parse_error("order bound exceeded", start);
            } else {
                chain.x_int += count;
                if (chain.x_int > kMaxOrderCount) throw parse_error("order bound exceeded", start);
            }
        }
        std::size_t upos = pos_;
        if (!eat('u')) throw parse_error("expected 'u' after derivative token", upos);
        if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                    text_[pos_] == '_'))
            throw parse_error("undeclared symbol", upos);
        if (chain.total() == 0) throw parse_error("malformed derivative token", upos);
        RawTerm t;
        t.chains.push_back(chain);
        return {t};
    }

    FpdeAst finalize(TermSum& raw) {
        FpdeAst ast;
        ast.header = header_;
        std::vector<PdeTerm> terms;
        for (auto& rt : raw) {
            if (rt.scalar == 0) continue;
            PdeTerm t;
            t.coeff_scalar = rt.scalar;
            t.coeff_params = rt.params;
            t.u_power = rt.u_power;
            t.chains = rt.chains;
            std::sort(t.chains.begin(), t.chains.end());
            int total_order = 0;
            for (const auto& ch : t.chains) total_order += ch.total();
            if (t.chains.size() >= 2 && total_order > 3 && t.u_power > 3)
                throw parse_error("term exceeds sanity bound", 0);
            terms.push_back(std::move(t));
        }
        std::sort(terms.begin(), terms.end(), term_key_less);
        // merge equal keys
        for (auto& t : terms) {
            if (!ast.terms.empty()) {
                PdeTerm& last = ast.terms.back();
                if (last.u_power == t.u_power && last.chains == t.chains &&
                    last.coeff_params == t.coeff_params) {
                    last.coeff_scalar += t.coeff_scalar;
                    continue;
                }
            }
            ast.terms.push_back(std::move(t));
        }
        ast.terms.erase(std::remove_if(ast.terms.begin(), ast.terms.end(),
                                       [](const PdeTerm& t) { return t.coeff_scalar == 0; }),
                        ast.terms.end());
        return ast;
    }
};

std::string chain_str(const DerivChain& ch) {
    std::ostringstream os;
    auto emit = [&os](char axis, int n, char letter) {
        os << "D{" << axis << ",";
        if (letter) {
            if (n != 1) os << n;
            os << letter;
        } else {
            os << n;
        }
        os << "}";
    };
    if (ch.t_alpha > 0) emit('t', ch.t_alpha, 'a');
    if (ch.x_beta > 0) emit('x', ch.x_beta, ch.x_alpha_token ? 'a' : 'b');
    if (ch.x_int > 0) emit('x', ch.x_int, '\0');
    os << "u";
    return os.str();
}

} // namespace

FpdeAst parse_pde(const std::string& text, const std::vector<std::string>& header) {
    return PdeParser(text, header).parse();
}

std::string format_pde(const FpdeAst& ast) {
    if (ast.terms.empty()) return "0 = 0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : ast.terms) {
        Rational mag = t.coeff_scalar < 0 ? Rational(-t.coeff_scalar) : t.coeff_scalar;
        if (first) {
            if (t.coeff_scalar < 0) os << "-";
            first = false;
        } else {
            os << (t.coeff_scalar < 0 ? " - " : " + ");
        }
        std::vector<std::string> factors;
        if (mag != 1) factors.push_back(rational_str(mag));
        for (const auto& [s, e] : t.coeff_params)
            factors.push_back(e == 1 ? s : s + "^" + std::to_string(e));
        if (t.u_power > 0)
            factors.push_back(t.u_power == 1 ? "u" : "u^" + std::to_string(t.u_power));
        for (const auto& ch : t.chains) factors.push_back(chain_str(ch));
        if (factors.empty()) factors.push_back("1");
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    os << " = 0";
    return os.str();
}

bool DerivMonoLess::operator()(const DerivMono& a, const DerivMono& b) const {
    int ga = a[1] + 2 * a[2] + 3 * a[3];
    int gb = b[1] + 2 * b[2] + 3 * b[3];
    if (ga != gb) return ga < gb;
    int da = a[0] + a[1] + a[2] + a[3];
    int db = b[0] + b[1] + b[2] + b[3];
    if (da != db) return da < db;
    return a < b;
}

void ReducedOde::add(const DerivMono& m, const MultiPoly& coeff) {
    if (coeff.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms.erase(it);
    }
}

ReducedOde ReducedOde::operator+(const ReducedOde& o) const {
    ReducedOde out = *this;
    for (const auto& [m, c] : o.terms) out.add(m, c);
    return out;
}

ReducedOde lower_to_ode(const FpdeAst& ast, BetaMode mode) {
    ReducedOde ode;
    for (const auto& t : ast.terms) {
        DerivMono mono{0, 0, 0, 0};
        mono[0] = t.u_power;
        int omega_power = 0;
        for (const auto& ch : t.chains) {
            if (ch.x_alpha_token && mode != BetaMode::beta_eq_alpha)
                throw std::invalid_argument(
                    "x-axis alpha-order derivative requires the beta=alpha mode");
            int order = ch.total();
            if (order > kMaxChainOrder)
                throw std::invalid_argument("total xi-derivative order > 3 is unsupported");
            omega_power += ch.t_alpha;
            mono[order] += 1;
        }
        MultiPoly coeff = MultiPoly::term(t.coeff_scalar, t.coeff_params);
        if (omega_power > 0) coeff *= MultiPoly::symbol("omega", omega_power);
        ode.add(mono, coeff);
    }
    return ode;
}

namespace {

std::string deriv_mono_str(const DerivMono& m) {
    static const char* base[4] = {"u", "u'", "u''", "u'''"};
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += base[i];
        if (m[i] != 1) out += "^" + std::to_string(m[i]);
    }
    return out;
}

} // namespace

std::string format_ode(const ReducedOde& ode) {
    if (ode.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : ode.terms) {
        std::string mono = deriv_mono_str(m);
        if (c.term_count() > 1) {
            if (!first) os << " + ";
            os << "(" << c.str() << ")*" << mono;
        } else {
            Rational scalar = c.terms().begin()->second;
            Monomial sym = c.terms().begin()->first;
            Rational mag = scalar < 0 ? Rational(-scalar) : scalar;
            if (first) {
                if (scalar < 0) os << "-";
            } else {
                os << (scalar < 0 ? " - " : " + ");
            }
            std::string coeff_str;
            if (mag != 1) coeff_str = rational_str(mag);
            for (const auto& [s, e] : sym) {
                if (!coeff_str.empty()) coeff_str += "*";
                coeff_str += e == 1 ? s : s + "^" + std::to_string(e);
            }
            if (!coeff_str.empty()) os << coeff_str << "*";
            os << mono;
        }
        first = false;
    }
    return os.str();
}

ReducedOde read_ode(const std::string& text, const std::vector<std::string>& params) {
    auto validate = [&params](const std::string& name, std::size_t pos) {
        if (name == "u" || name == "u'" || name == "u''" || name == "u'''") return;
        if (name == "omega") return;
        if (std::find(params.begin(), params.end(), name) != params.end()) return;
        throw parse_error("unknown symbol '" + name + "'", pos);
    };
    MultiPoly p = parse_poly(text, validate, /*allow_primes=*/true);
    ReducedOde ode;
    for (const auto& [mono, coeff] : p.terms()) {
        DerivMono dm{0, 0, 0, 0};
        Monomial rest;
        for (const auto& [s, e] : mono) {
            if (s == "u") dm[0] += e;
            else if (s == "u'") dm[1] += e;
            else if (s == "u''") dm[2] += e;
            else if (s == "u'''") dm[3] += e;
            else rest.emplace_back(s, e);
        }
        ode.add(dm, MultiPoly::term(coeff, rest));
    }
    return ode;
}

} // namespace cfwave
