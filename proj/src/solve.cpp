#include "cfwave/solve.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace cfwave {

SurdPoly SurdPoly::constant(const Surd& s) {
    SurdPoly p;
    p.add_term({}, s);
    return p;
}

void SurdPoly::add_term(const UMono& m, const Surd& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool SurdPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Surd SurdPoly::constant_value() const {
    if (terms_.empty()) return Surd(Rational(0));
    return terms_.begin()->second;
}

SurdPoly SurdPoly::operator+(const SurdPoly& o) const {
    SurdPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

SurdPoly SurdPoly::operator-(const SurdPoly& o) const {
    SurdPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

SurdPoly SurdPoly::operator*(const SurdPoly& o) const {
    SurdPoly out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            UMono m = ma;
            for (const auto& [s, e] : mb) m[s] += e;
            out.add_term(m, ca * cb);
        }
    return out;
}

SurdPoly SurdPoly::scaled(const Surd& s) const {
    SurdPoly out;
    if (s.is_zero()) return out;
    for (const auto& [m, c] : terms_) out.add_term(m, c * s);
    return out;
}

SurdPoly SurdPoly::times_mono(const UMono& mono) const {
    SurdPoly out;
    for (const auto& [m, c] : terms_) {
        UMono nm = m;
        for (const auto& [s, e] : mono) nm[s] += e;
        out.add_term(nm, c);
    }
    return out;
}

SurdPoly SurdPoly::substituted(const std::string& sym, const Surd& value) const {
    SurdPoly out;
    for (const auto& [m, c] : terms_) {
        UMono rest;
        Surd coeff = c;
        for (const auto& [s, e] : m) {
            if (s == sym) coeff = coeff * value.pow(e);
            else rest.emplace(s, e);
        }
        out.add_term(rest, coeff);
    }
    return out;
}

int SurdPoly::min_exponent(const std::string& sym) const {
    int e = -1;
    for (const auto& [m, _] : terms_) {
        auto it = m.find(sym);
        int cur = it == m.end() ? 0 : it->second;
        e = e < 0 ? cur : std::min(e, cur);
        if (e == 0) return 0;
    }
    return e < 0 ? 0 : e;
}

int SurdPoly::degree_in(const std::string& sym) const {
    int d = 0;
    for (const auto& [m, _] : terms_) {
        auto it = m.find(sym);
        if (it != m.end()) d = std::max(d, it->second);
    }
    return d;
}

SurdPoly SurdPoly::divided_by_power(const std::string& sym, int e) const {
    SurdPoly out;
    for (const auto& [m, c] : terms_) {
        UMono nm = m;
        auto it = nm.find(sym);
        if (it == nm.end() || it->second < e)
            throw std::logic_error("monomial not divisible in divided_by_power");
        it->second -= e;
        if (it->second == 0) nm.erase(it);
        out.add_term(nm, c);
    }
    return out;
}

std::set<std::string> SurdPoly::symbols() const {
    std::set<std::string> out;
    for (const auto& [m, _] : terms_)
        for (const auto& [s, e] : m) out.insert(s);
    return out;
}

std::string SurdPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.str() << ")";
        for (const auto& [s, e] : m) {
            os << "*" << s;
            if (e != 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

InstSystem instantiate(const AlgebraicSystem& sys, const std::map<std::string, Rational>& params) {
    for (const auto& [name, _] : params)
        if (std::find(sys.unknowns.begin(), sys.unknowns.end(), name) != sys.unknowns.end())
            throw std::invalid_argument("parameter assigned to an unknown symbol: " + name);
    for (const auto& p : sys.params)
        if (!params.count(p)) throw std::invalid_argument("missing parameter: " + p);

    InstSystem out;
    out.unknowns = sys.unknowns;
    for (const auto& [key, poly] : sys.equations) {
        SurdPoly sp;
        for (const auto& [mono, coeff] : poly.terms()) {
            Rational scalar = coeff;
            UMono um;
            for (const auto& [s, e] : mono) {
                auto it = params.find(s);
                if (it != params.end()) {
                    for (int i = 0; i < e; ++i) scalar *= it->second;
                } else {
                    um[s] += e;
                }
            }
            sp.add_term(um, Surd(scalar));
        }
        out.equations.push_back(std::move(sp));
    }
    return out;
}

namespace {

std::string mono_str(const UMono& m) {
    std::string out;
    for (const auto& [s, e] : m) {
        if (!out.empty()) out += "*";
        out += s;
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
}

struct Work {
    std::vector<SurdPoly> eqs;
    Branch branch;
};

class Solver {
public:
    Solver(const InstSystem& sys, const std::set<std::string>& nonzero, const SolveScript* script)
        : sys_(sys), nonzero_(nonzero), script_(script) {}

    SolveResult run() {
        SolveResult result;
        if (!nonzero_.empty()) {
            std::string syms;
            for (const auto& s : nonzero_) syms += (syms.empty() ? "" : ", ") + s;
            result.notes.push_back("degenerate solutions with " + syms +
                                   " = 0 are excluded by assumption");
        }
        Work w;
        w.eqs = sys_.equations;
        if (script_) {
            run_script(w, 0);
        } else {
            generic(std::move(w), 0);
        }
        for (auto& b : found_) {
            if (verify_assignment(sys_, b)) result.branches.push_back(std::move(b));
        }
        auto& bs = result.branches;
        std::sort(bs.begin(), bs.end(), [](const Branch& x, const Branch& y) {
            auto xi = x.values.begin();
            auto yi = y.values.begin();
            for (; xi != x.values.end() && yi != y.values.end(); ++xi, ++yi) {
                if (xi->first != yi->first) return symbol_less(xi->first, yi->first);
                if (!(xi->second == yi->second)) return xi->second < yi->second;
            }
            return x.values.size() < y.values.size();
        });
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
        return result;
    }

private:
    const InstSystem& sys_;
    const std::set<std::string>& nonzero_;
    const SolveScript* script_;
    std::vector<Branch> found_;

    bool assigned(const Work& w, const std::string& sym) const {
        return w.branch.values.count(sym) > 0;
    }

    // Strips declared-nonzero content and drops satisfied equations.
    // Returns false if some equation is a nonzero constant (branch dies).
    bool normalize(Work& w) {
        auto& eqs = w.eqs;
        for (auto& eq : eqs) {
            if (eq.is_zero()) continue;
            for (const auto& sym : nonzero_) {
                int e = eq.min_exponent(sym);
                if (e > 0) {
                    eq = eq.divided_by_power(sym, e);
                    w.branch.provenance.push_back("divided an equation by " + sym +
                                                  (e > 1 ? "^" + std::to_string(e) : "") + " (" +
                                                  sym + " != 0)");
                }
            }
        }
        bool dead = false;
        for (const auto& eq : eqs)
            if (!eq.is_zero() && eq.is_constant()) dead = true;
        if (dead) {
            if (w.branch.values.empty())
                throw inconsistent_system("an equation reduces to a nonzero constant");
            return false;
        }
        eqs.erase(std::remove_if(eqs.begin(), eqs.end(),
                                 [](const SurdPoly& e) { return e.is_zero(); }),
                  eqs.end());
        return true;
    }

    struct Candidate {
        int degree;
        int index;
        std::string sym;
    };

    // Univariate root computation; returns the roots (possibly empty when the
    // real square root does not exist).
    std::vector<Surd> roots_of(const SurdPoly& eq, const std::string& sym) {
        int deg = eq.degree_in(sym);
        std::vector<Surd> coeff(static_cast<std::size_t>(deg) + 1, Surd(Rational(0)));
        for (const auto& [m, c] : eq.terms()) {
            int e = 0;
            for (const auto& [s, ex] : m) {
                if (s == sym) e = ex;
                else throw solve_error("equation not univariate in " + sym);
            }
            coeff[static_cast<std::size_t>(e)] = coeff[static_cast<std::size_t>(e)] + c;
        }
        if (deg == 1) return {-(coeff[0] / coeff[1])};
        if (deg != 2) throw degree_too_high("univariate degree " + std::to_string(deg) +
                                            " > 2 in " + sym);
        if (coeff[1].is_zero()) {
            Surd v = -(coeff[0] / coeff[2]);
            if (!v.is_rational())
                throw incompatible_radicands("nested radical while solving for " + sym);
            auto r = sqrt_exact(v.p());
            if (!r) return {};
            if (r->is_zero()) return {*r};
            return {*r, -*r};
        }
        if (!coeff[0].is_rational() || !coeff[1].is_rational() || !coeff[2].is_rational())
            throw incompatible_radicands("quadratic with irrational coefficients in " + sym);
        Rational a = coeff[2].p(), b = coeff[1].p(), c0 = coeff[0].p();
        Rational disc = b * b - 4 * a * c0;
        auto s = sqrt_exact(disc);
        if (!s) return {};
        Surd two_a{Rational(2) * a};
        Surd r1 = (Surd(-b) + *s) / two_a;
        Surd r2 = (Surd(-b) - *s) / two_a;
        if (r1 == r2) return {r1};
        return {r1, r2};
    }

    void assign_and_continue(Work w, const std::string& sym, const Surd& value,
                             const std::string& how, int depth,
                             const std::function<void(Work, int)>& cont) {
        w.branch.values.emplace(sym, value);
        w.branch.provenance.push_back(how + ": " + sym + " = " + value.str());
        for (auto& eq : w.eqs) eq = eq.substituted(sym, value);
        cont(std::move(w), depth + 1);
    }

    void generic(Work w, int depth) {
        if (depth > 64) throw solve_error("solver recursion limit exceeded");
        if (!normalize(w)) return;
        if (w.eqs.empty()) {
            for (const auto& u : sys_.unknowns)
                if (!assigned(w, u))
                    throw not_triangularizable("underdetermined: no equation left for " + u);
            found_.push_back(std::move(w.branch));
            return;
        }
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < w.eqs.size(); ++i) {
            auto syms = w.eqs[i].symbols();
            if (syms.size() == 1)
                cands.push_back({w.eqs[i].degree_in(*syms.begin()), static_cast<int>(i),
                                 *syms.begin()});
        }
        if (cands.empty()) {
            if (try_content_split(w, depth)) return;
            throw not_triangularizable("no equation univariate in a single unknown");
        }
        auto best = *std::min_element(cands.begin(), cands.end(),
                                      [](const Candidate& a, const Candidate& b) {
                                          return std::tie(a.degree, a.index) <
                                                 std::tie(b.degree, b.index);
                                      });
        if (best.degree > 2)
            throw degree_too_high("univariate degree " + std::to_string(best.degree) + " > 2 in " +
                                  best.sym);
        auto roots = roots_of(w.eqs[static_cast<std::size_t>(best.index)], best.sym);
        if (roots.empty())
            w.branch.provenance.push_back("no real root for " + best.sym + "; branch dropped");
        std::string how = "solved equation " + std::to_string(best.index) + " for " + best.sym;
        for (const auto& r : roots)
            assign_and_continue(w, best.sym, r, how, depth,
                                [this](Work nw, int d) { generic(std::move(nw), d); });
    }

    // When stuck, split on a non-declared unknown that divides a whole
    // equation: either it is zero, or it can be divided out.
    bool try_content_split(Work& w, int depth) {
        for (std::size_t i = 0; i < w.eqs.size(); ++i) {
            for (const auto& sym : w.eqs[i].symbols()) {
                if (nonzero_.count(sym)) continue;
                int e = w.eqs[i].min_exponent(sym);
                if (e <= 0) continue;
                // case sym = 0
                assign_and_continue(w, sym, Surd(Rational(0)), "case split", depth,
                                    [this](Work nw, int d) { generic(std::move(nw), d); });
                // case sym != 0: divide it out of this equation
                Work w2 = w;
                w2.eqs[i] = w2.eqs[i].divided_by_power(sym, e);
                w2.branch.provenance.push_back("assumed " + sym + " != 0 and divided equation " +
                                               std::to_string(i) + " by " + sym + "^" +
                                               std::to_string(e));
                generic(std::move(w2), depth + 1);
                return true;
            }
        }
        return false;
    }

    void check_index(const Work& w, int idx) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= w.eqs.size())
            throw solve_error("script equation index out of range: " + std::to_string(idx));
    }

    // Reduction of target by source on a pivot monomial: source must be
    // linear in the pivot with all other monomials of smaller total degree.
    SurdPoly reduce_poly(const SurdPoly& target, const SurdPoly& source, const UMono& pivot) {
        auto pit = source.terms().find(pivot);
        if (pit == source.terms().end())
            throw solve_error("reduce: pivot monomial absent from source equation");
        Surd lc = pit->second;
        int pivot_deg = 0;
        for (const auto& [s, e] : pivot) pivot_deg += e;
        for (const auto& [m, c] : source.terms()) {
            if (m == pivot) continue;
            int d = 0;
            for (const auto& [s, e] : m) d += e;
            if (d >= pivot_deg) throw solve_error("reduce: source not dominated by pivot");
        }
        SurdPoly rest = source;
        rest.add_term(pivot, -lc); // rest = source - lc*pivot
        SurdPoly out = target;
        for (int guard = 0; guard < 1000; ++guard) {
            const auto* hit = static_cast<const std::pair<const UMono, Surd>*>(nullptr);
            for (const auto& term : out.terms()) {
                bool divisible = true;
                for (const auto& [s, e] : pivot) {
                    auto it = term.first.find(s);
                    if (it == term.first.end() || it->second < e) {
                        divisible = false;
                        break;
                    }
                }
                if (divisible) {
                    hit = &term;
                    break;
                }
            }
            if (!hit) return out;
            UMono quotient = hit->first;
            for (const auto& [s, e] : pivot) {
                quotient[s] -= e;
                if (quotient[s] == 0) quotient.erase(s);
            }
            Surd factor = hit->second / lc;
            // out -= factor * quotient * (lc*pivot + rest); the pivot part
            // cancels the hit term exactly.
            SurdPoly subtract = rest.times_mono(quotient).scaled(factor);
            out.add_term(hit->first, -hit->second);
            out = out - subtract;
        }
        throw solve_error("reduce: did not terminate");
    }

    void run_script(Work w, std::size_t step_idx) {
        for (; step_idx < script_->size(); ++step_idx) {
            const SolveStep& st = (*script_)[step_idx];
            switch (st.kind) {
            case SolveStep::Kind::divide_nonzero: {
                for (auto& eq : w.eqs) {
                    int e = eq.min_exponent(st.symbol);
                    if (e > 0) eq = eq.divided_by_power(st.symbol, e);
                }
                w.branch.provenance.push_back("divided all equations by their " + st.symbol +
                                              " content (" + st.symbol + " != 0)");
                break;
            }
            case SolveStep::Kind::multiply: {
                check_index(w, st.eq);
                w.eqs.push_back(w.eqs[static_cast<std::size_t>(st.eq)].times_mono(st.monomial));
                w.branch.provenance.push_back("appended equation " +
                                              std::to_string(w.eqs.size() - 1) + " = " +
                                              mono_str(st.monomial) + " * equation " +
                                              std::to_string(st.eq));
                break;
            }
            case SolveStep::Kind::combine: {
                check_index(w, st.eq);
                check_index(w, st.src);
                SurdPoly combined =
                    w.eqs[static_cast<std::size_t>(st.eq)].scaled(Surd(st.c_target)) +
                    w.eqs[static_cast<std::size_t>(st.src)].scaled(Surd(st.c_source));
                w.eqs.push_back(std::move(combined));
                w.branch.provenance.push_back(
                    "appended equation " + std::to_string(w.eqs.size() - 1) + " = " +
                    rational_str(st.c_target) + " * equation " + std::to_string(st.eq) + " + " +
                    rational_str(st.c_source) + " * equation " + std::to_string(st.src));
                break;
            }
            case SolveStep::Kind::reduce: {
                check_index(w, st.eq);
                check_index(w, st.src);
                w.eqs.push_back(reduce_poly(w.eqs[static_cast<std::size_t>(st.eq)],
                                            w.eqs[static_cast<std::size_t>(st.src)], st.monomial));
                w.branch.provenance.push_back("appended equation " +
                                              std::to_string(w.eqs.size() - 1) + ": equation " +
                                              std::to_string(st.eq) + " reduced by equation " +
                                              std::to_string(st.src) + " on " +
                                              mono_str(st.monomial));
                break;
            }
            case SolveStep::Kind::solve_uni: {
                check_index(w, st.eq);
                const SurdPoly& eq = w.eqs[static_cast<std::size_t>(st.eq)];
                auto syms = eq.symbols();
                if (syms.size() != 1 || *syms.begin() != st.symbol)
                    throw solve_error("script: equation " + std::to_string(st.eq) +
                                      " is not univariate in " + st.symbol);
                auto roots = roots_of(eq, st.symbol);
                std::string how = "solved equation " + std::to_string(st.eq) + " for " + st.symbol;
                for (const auto& r : roots)
                    assign_and_continue(w, st.symbol, r, how, 0,
                                        [this, step_idx](Work nw, int) {
                                            run_script(std::move(nw), step_idx + 1);
                                        });
                return; // forked (or died: no real roots)
            }
            }
        }
        generic(std::move(w), 0);
    }
};

} // namespace

SolveStep SolveStep::divide_nonzero(std::string sym) {
    SolveStep s;
    s.kind = Kind::divide_nonzero;
    s.symbol = std::move(sym);
    return s;
}
SolveStep SolveStep::multiply(int eq, UMono m) {
    SolveStep s;
    s.kind = Kind::multiply;
    s.eq = eq;
    s.monomial = std::move(m);
    return s;
}
SolveStep SolveStep::combine(int target, int source, Rational ct, Rational cs) {
    SolveStep s;
    s.kind = Kind::combine;
    s.eq = target;
    s.src = source;
    s.c_target = std::move(ct);
    s.c_source = std::move(cs);
    return s;
}
SolveStep SolveStep::reduce(int target, int source, UMono pivot) {
    SolveStep s;
    s.kind = Kind::reduce;
    s.eq = target;
    s.src = source;
    s.monomial = std::move(pivot);
    return s;
}
SolveStep SolveStep::solve_uni(int eq, std::string sym) {
    SolveStep s;
    s.kind = Kind::solve_uni;
    s.eq = eq;
    s.symbol = std::move(sym);
    return s;
}

SolveResult solve(const InstSystem& sys, const std::set<std::string>& nonzero,
                  const SolveScript* script) {
    if (sys.unknowns.size() > 5)
        throw solve_error("more than 5 unknowns is unsupported");
    return Solver(sys, nonzero, script).run();
}

std::vector<Surd> evaluate_equations(const InstSystem& sys, const Branch& branch) {
    std::vector<Surd> out;
    for (const auto& eq : sys.equations) {
        Surd sum{Rational(0)};
        for (const auto& [m, c] : eq.terms()) {
            Surd t = c;
            for (const auto& [s, e] : m) {
                auto it = branch.values.find(s);
                if (it == branch.values.end())
                    throw solve_error("verify: unassigned unknown " + s);
                t = t * it->second.pow(e);
            }
            sum = sum + t;
        }
        out.push_back(sum);
    }
    return out;
}

bool verify_assignment(const InstSystem& sys, const Branch& branch) {
    for (const auto& v : evaluate_equations(sys, branch))
        if (!v.is_zero()) return false;
    return true;
}

std::string branch_json(const Branch& branch) {
    nlohmann::json unknowns = nlohmann::json::object();
    for (const auto& [sym, v] : branch.values) {
        unknowns[sym] = {{"p", rational_str(v.p())},
                         {"q", rational_str(v.q())},
                         {"d", rational_str(v.d())}};
    }
    nlohmann::json j{{"unknowns", unknowns}, {"provenance", branch.provenance}};
    return j.dump();
}

} // namespace cfwave
