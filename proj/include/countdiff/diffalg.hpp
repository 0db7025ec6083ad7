#ifndef COUNTDIFF_DIFFALG_HPP
#define COUNTDIFF_DIFFALG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "multi_index.hpp"
#include "rational_function.hpp"
#include "ranking.hpp"
#include "sigma_system.hpp"

namespace countdiff {

struct DerivativeTag {};
struct CoefficientTag {};

/// Function index paired with a multi-index. `function` is the position in
/// the function priority, 0 being the lowest. The comparison is the orderly
/// ranking: total order first, then function priority, then the multi-index
/// lexicographically with the first base variable most significant.
template <class Tag> struct Jet {
    unsigned function = 0;
    MultiIndex mu;

    unsigned order() const { return countdiff::order(mu); }

    friend bool operator<(const Jet &a, const Jet &b) {
        const unsigned oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        if (a.function != b.function) return a.function < b.function;
        return a.mu < b.mu;
    }
    friend bool operator==(const Jet &a, const Jet &b) { return a.function == b.function && a.mu == b.mu; }
    friend bool operator!=(const Jet &a, const Jet &b) { return !(a == b); }
};

/// Derivative u^(j)_mu of an unknown function.
using DiffVar = Jet<DerivativeTag>;
/// Taylor coefficient g^(j)_mu of an unknown function at the expansion point.
using CoefficientVariable = Jet<CoefficientTag>;

using DifferentialPolynomial = Polynomial<DiffVar, RationalFunction>;
using CoefficientPolynomial = Polynomial<CoefficientVariable, Rational>;
using ExpansionPoint = std::vector<Rational>;

inline CoefficientVariable rho(const DiffVar &v) { return {v.function, v.mu}; }
inline DiffVar rho_inverse(const CoefficientVariable &g) { return {g.function, g.mu}; }

/// Names of the unknown functions (by priority) and of the base variables.
class OrderlyRanking {
public:
    OrderlyRanking() = default;
    /// `priority` lists the functions from highest to lowest.
    OrderlyRanking(std::vector<std::string> priority, std::vector<std::string> basevars)
        : basevars_(std::move(basevars)) {
        if (priority.empty()) throw InvalidSystem("no unknown functions");
        if (basevars_.empty()) throw InvalidSystem("no base variables");
        functions_.assign(priority.rbegin(), priority.rend());
        std::vector<std::string> all = functions_;
        all.insert(all.end(), basevars_.begin(), basevars_.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw InvalidSystem("name declared twice");
        for (const auto &f : functions_)
            if (f == "D") throw InvalidSystem("'D' is reserved");
    }

    std::size_t function_count() const { return functions_.size(); }
    std::size_t base_count() const { return basevars_.size(); }
    const std::string &function_name(unsigned j) const { return functions_.at(j); }
    const std::vector<std::string> &basevars() const { return basevars_; }
    std::vector<std::string> priority() const { return {functions_.rbegin(), functions_.rend()}; }
    static const char *tie_break() { return "orderly"; }

    std::optional<unsigned> function_index(const std::string &name) const {
        for (std::size_t j = 0; j < functions_.size(); ++j)
            if (functions_[j] == name) return static_cast<unsigned>(j);
        return std::nullopt;
    }
    std::optional<unsigned> base_index(const std::string &name) const {
        for (std::size_t i = 0; i < basevars_.size(); ++i)
            if (basevars_[i] == name) return static_cast<unsigned>(i);
        return std::nullopt;
    }

    DiffVar function(unsigned j) const { return {j, MultiIndex(base_count(), 0)}; }

    /// `u1`, `D(u1,t)`, `D(u,x,2,t)`.
    std::string name(const DiffVar &v) const {
        if (order(v.mu) == 0) return function_name(v.function);
        std::string s = "D(" + function_name(v.function);
        for (std::size_t i = 0; i < v.mu.size(); ++i) {
            if (v.mu[i] == 0) continue;
            s += "," + basevars_[i];
            if (v.mu[i] > 1) s += "," + std::to_string(v.mu[i]);
        }
        return s + ")";
    }

    /// `u1[2]` with one base variable, `u[1,0,2]` otherwise.
    std::string name(const CoefficientVariable &g) const {
        std::string s = function_name(g.function) + "[";
        for (std::size_t i = 0; i < g.mu.size(); ++i) s += (i ? "," : "") + std::to_string(g.mu[i]);
        return s + "]";
    }

    friend bool operator==(const OrderlyRanking &a, const OrderlyRanking &b) {
        return a.functions_ == b.functions_ && a.basevars_ == b.basevars_;
    }

private:
    std::vector<std::string> functions_; // lowest priority first
    std::vector<std::string> basevars_;
};

inline std::string to_string(const DifferentialPolynomial &p, const OrderlyRanking &r) {
    auto base = [&](unsigned i) { return r.basevars().at(i); };
    return render(
        p, [&](const DiffVar &v) { return r.name(v); },
        [&](const RationalFunction &c) { return rational_function_text(c, base); });
}

inline std::string to_string(const CoefficientPolynomial &p, const OrderlyRanking &r) {
    return render(p, [&](const CoefficientVariable &g) { return r.name(g); });
}

// ---------------------------------------------------------------------------
// derivation

inline DiffVar shifted(DiffVar v, unsigned i) {
    ++v.mu.at(i);
    return v;
}

/// Total derivative with respect to the i-th base variable.
inline DifferentialPolynomial derive(const DifferentialPolynomial &p, unsigned i) {
    DifferentialPolynomial r = p.map_coefficients([&](const RationalFunction &c) { return c.derivative(i); });
    for (const DiffVar &v : p.variables()) r += p.derivative(v) * DifferentialPolynomial::variable(shifted(v, i));
    return r;
}

inline DifferentialPolynomial derive(DifferentialPolynomial p, const MultiIndex &theta) {
    for (unsigned i = 0; i < theta.size(); ++i)
        for (unsigned k = 0; k < theta[i]; ++k) p = derive(p, i);
    return p;
}

struct RittReduction {
    DifferentialPolynomial remainder;
    /// (factor, exponent): the product of factor^exponent times the input
    /// equals the remainder modulo the differential ideal of T.
    std::vector<std::pair<DifferentialPolynomial, unsigned>> multipliers;
};

namespace detail {

/// Member of T and derivation multi-index whose prolongation reduces v in p.
inline std::optional<std::pair<std::size_t, MultiIndex>>
reducer_for(const DiffVar &v, unsigned degree, const std::vector<DifferentialPolynomial> &T) {
    for (std::size_t k = 0; k < T.size(); ++k) {
        const DiffVar ld = leader(T[k]);
        if (ld.function != v.function || !in_cone(ld.mu, v.mu)) continue;
        if (ld.mu == v.mu && degree < T[k].degree(ld)) continue;
        return std::make_pair(k, difference(v.mu, ld.mu));
    }
    return std::nullopt;
}

} // namespace detail

/// Ritt reduction: eliminates every derivative of a leader of T occurring
/// properly, and every leader occurring with degree at least its degree in T.
inline RittReduction ritt_reduce(const DifferentialPolynomial &p, const std::vector<DifferentialPolynomial> &T) {
    for (const auto &t : T)
        if (t.is_constant()) throw NotSimple("reduction by a constant");
    RittReduction out;
    out.remainder = p;
    for (;;) {
        std::optional<std::pair<DiffVar, std::pair<std::size_t, MultiIndex>>> hit;
        const auto vars = out.remainder.variables();
        for (auto it = vars.rbegin(); it != vars.rend() && !hit; ++it) {
            if (auto r = detail::reducer_for(*it, out.remainder.degree(*it), T)) hit.emplace(*it, *r);
        }
        if (!hit) return out;
        const DiffVar &v = hit->first;
        const DifferentialPolynomial q = derive(T[hit->second.first], hit->second.second);
        auto pd = pseudo_divide(out.remainder, q, v);
        if (pd.exponent > 0) out.multipliers.emplace_back(q.coefficient(v, q.degree(v)), pd.exponent);
        out.remainder = std::move(pd.remainder);
    }
}

// ---------------------------------------------------------------------------
// power series coefficients

inline void check_point(const ExpansionPoint &zeta, std::size_t n) {
    if (zeta.size() != n)
        throw InvalidSystem("expansion point has " + std::to_string(zeta.size()) + " coordinates, expected " +
                            std::to_string(n));
}

/// Replaces every derivative by its Taylor coefficient symbol and evaluates
/// the coefficients at zeta.
inline CoefficientPolynomial rho(const DifferentialPolynomial &p, const ExpansionPoint &zeta) {
    CoefficientPolynomial r;
    for (const auto &[m, c] : p.terms()) {
        Monomial<CoefficientVariable> g;
        g.reserve(m.size());
        for (const auto &[v, e] : m) g.emplace_back(rho(v), e);
        r.add_term(std::move(g), c.evaluate(zeta));
    }
    return r;
}

struct Postponed {
    std::vector<DifferentialPolynomial> derivatives;
    CoefficientPolynomial coefficient_equation;
};

/// p = 0 has the same power series solutions at zeta as its first
/// derivatives together with rho(p) = 0.
inline Postponed postpone(const DifferentialPolynomial &p, const ExpansionPoint &zeta) {
    Postponed out;
    out.coefficient_equation = rho(p, zeta);
    for (unsigned i = 0; i < zeta.size(); ++i) out.derivatives.push_back(derive(p, i));
    return out;
}

// ---------------------------------------------------------------------------
// differential systems

/// Differential equations together with algebraic inequations on Taylor
/// coefficients. `leaders` holds explicitly declared leaders for inputs that
/// only describe a leader set.
struct DifferentialSystem {
    OrderlyRanking ranking;
    std::vector<DifferentialPolynomial> equations;
    std::vector<CoefficientPolynomial> coefficient_inequations;
    std::optional<ExpansionPoint> point;
    std::vector<DiffVar> leaders;

    friend bool operator==(const DifferentialSystem &a, const DifferentialSystem &b) {
        return a.ranking == b.ranking && a.equations == b.equations &&
               a.coefficient_inequations == b.coefficient_inequations && a.point == b.point &&
               a.leaders == b.leaders;
    }
};

namespace detail {

inline DiffVar parse_jet(const Expr &e, const OrderlyRanking &r) {
    if (e.args.empty() || e.arg(0).kind != Expr::Kind::Symbol) e.fail("D needs a function name first");
    auto j = r.function_index(e.arg(0).name);
    if (!j) e.arg(0).fail("unknown function '" + e.arg(0).name + "'");
    DiffVar v = r.function(*j);
    for (std::size_t k = 1; k < e.args.size(); ++k) {
        const Expr &a = e.arg(k);
        if (a.kind != Expr::Kind::Symbol) a.fail("expected a base variable");
        auto i = r.base_index(a.name);
        if (!i) a.fail("unknown base variable '" + a.name + "'");
        unsigned times = 1;
        if (k + 1 < e.args.size() && e.arg(k + 1).kind == Expr::Kind::Number) {
            const Rational c = e.arg(k + 1).value;
            if (!is_integer(c) || sgn(c) <= 0) e.arg(k + 1).fail("derivative count must be positive");
            times = static_cast<unsigned>(c.get_num().get_ui());
            ++k;
        }
        v.mu[*i] += times;
    }
    return v;
}

inline CoefficientVariable parse_coefficient_variable(const Expr &e, const OrderlyRanking &r, RationalContext ctx) {
    auto j = r.function_index(e.name);
    if (!j) e.fail("unknown function '" + e.name + "'");
    if (e.args.size() != r.base_count()) e.fail("expected " + std::to_string(r.base_count()) + " indices");
    CoefficientVariable g{*j, MultiIndex(r.base_count(), 0)};
    for (std::size_t k = 0; k < e.args.size(); ++k) {
        const long v = ctx.integer(e.arg(k));
        if (v < 0) e.arg(k).fail("negative index");
        g.mu[k] = static_cast<unsigned>(v);
    }
    return g;
}

struct DifferentialContext {
    const OrderlyRanking &ranking;

    DifferentialPolynomial one() const { return DifferentialPolynomial(RationalFunction(1)); }

    DifferentialPolynomial leaf(const Expr &e) {
        switch (e.kind) {
        case Expr::Kind::Number:
            return DifferentialPolynomial(RationalFunction(e.value));
        case Expr::Kind::Symbol:
            if (auto j = ranking.function_index(e.name)) return DifferentialPolynomial::variable(ranking.function(*j));
            if (auto i = ranking.base_index(e.name)) return DifferentialPolynomial(RationalFunction::variable(*i));
            e.fail("unknown name '" + e.name + "'");
        case Expr::Kind::Call:
            if (e.name == "D") return DifferentialPolynomial::variable(parse_jet(e, ranking));
            e.fail("unknown function '" + e.name + "'");
        default:
            e.fail("Taylor coefficients are not allowed in differential equations");
        }
    }

    DifferentialPolynomial divide(const DifferentialPolynomial &a, const DifferentialPolynomial &b, const Expr &e) {
        if (!b.is_constant() || b.is_zero()) e.fail("only division by nonzero functions of the base variables");
        return a.scaled(RationalFunction(1) / b.constant_coefficient());
    }

    unsigned exponent(const Expr &e) { return RationalContext().exponent(e); }

    DifferentialPolynomial factorial(const DifferentialPolynomial &a, const Expr &e) {
        if (!a.is_constant() || !a.constant_coefficient().is_constant()) e.fail("factorial of a non-constant");
        return DifferentialPolynomial(
            RationalFunction(RationalContext().factorial(a.constant_coefficient().constant_value(), e)));
    }
};

/// Polynomials over Q in Taylor coefficient symbols. Index expressions and
/// parameters are resolved through `params`.
struct CoefficientContext {
    const OrderlyRanking &ranking;
    RationalContext params;

    CoefficientPolynomial one() const { return CoefficientPolynomial(Rational(1)); }

    CoefficientPolynomial leaf(const Expr &e) {
        if (e.kind == Expr::Kind::Indexed)
            return CoefficientPolynomial::variable(parse_coefficient_variable(e, ranking, params));
        if (e.kind == Expr::Kind::Call && e.name == "sum") return sum(e);
        return CoefficientPolynomial(params.leaf(e));
    }

    CoefficientPolynomial divide(const CoefficientPolynomial &a, const CoefficientPolynomial &b, const Expr &e) {
        if (!b.is_constant() || b.is_zero()) e.fail("only division by nonzero constants is allowed");
        return a.scaled(Rational(1) / b.constant_coefficient());
    }

    unsigned exponent(const Expr &e) { return params.exponent(e); }

    CoefficientPolynomial factorial(const CoefficientPolynomial &a, const Expr &e) {
        if (!a.is_constant()) e.fail("factorial of a non-constant");
        return CoefficientPolynomial(params.factorial(a.constant_coefficient(), e));
    }

    // sum(i, lo, hi, body)
    CoefficientPolynomial sum(const Expr &e) {
        if (e.args.size() != 4 || e.arg(0).kind != Expr::Kind::Symbol) e.fail("expected sum(name, from, to, term)");
        const std::string name = e.arg(0).name;
        const long lo = params.integer(e.arg(1));
        const long hi = params.integer(e.arg(2));
        CoefficientPolynomial total;
        for (long i = lo; i <= hi; ++i) {
            // fall back to the enclosing parameters
            RationalContext chained([&, i](const std::string &s, Rational &out) {
                if (s == name) {
                    out = Rational(i);
                    return true;
                }
                Expr probe;
                probe.kind = Expr::Kind::Symbol;
                probe.name = s;
                try {
                    out = params.leaf(probe);
                    return true;
                } catch (const ParseError &) {
                    return false;
                }
            });
            CoefficientContext body{ranking, chained};
            total += evaluate_expression<CoefficientPolynomial>(e.arg(3), body);
        }
        return total;
    }
};

} // namespace detail

inline DifferentialPolynomial parse_differential_polynomial(const std::string &text, const OrderlyRanking &r,
                                                            std::size_t line = 1, std::size_t column_offset = 0) {
    detail::DifferentialContext ctx{r};
    return evaluate_expression<DifferentialPolynomial>(*parse_expression(text, line, column_offset), ctx);
}

inline CoefficientPolynomial parse_coefficient_polynomial(const std::string &text, const OrderlyRanking &r,
                                                          std::size_t line = 1, std::size_t column_offset = 0,
                                                          RationalContext params = RationalContext()) {
    detail::CoefficientContext ctx{r, std::move(params)};
    return evaluate_expression<CoefficientPolynomial>(*parse_expression(text, line, column_offset), ctx);
}

/// Parses rationals separated by spaces or commas.
inline ExpansionPoint parse_point(const std::string &text, std::size_t line = 1, std::size_t column_offset = 0) {
    ExpansionPoint out;
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::string w;
    while (in >> w) {
        RationalContext ctx;
        out.push_back(evaluate_expression<Rational>(*parse_expression(w, line, column_offset), ctx));
    }
    return out;
}

namespace detail {

/// Shared header of the differential file formats: `funcs`, `basevars` and
/// `ranking orderly a>b`. Returns true if the line was consumed.
struct RankingHeader {
    std::vector<std::string> funcs, basevars, priority;

    bool consume(const std::string &kw, const std::string &rest, std::size_t lineno, std::size_t rest_at) {
        if (kw == "funcs") {
            funcs = ranking_names(rest);
        } else if (kw == "basevars") {
            basevars = ranking_names(rest);
        } else if (kw == "ranking") {
            std::string t = rest;
            std::replace(t.begin(), t.end(), '>', ' ');
            auto words = split_words(t);
            if (words.empty() || words.front() != "orderly")
                throw ParseError("only orderly rankings are supported", lineno, rest_at + 1);
            priority.assign(words.begin() + 1, words.end());
        } else {
            return false;
        }
        return true;
    }

    OrderlyRanking build(std::size_t lineno) const {
        if (funcs.empty() || basevars.empty()) throw ParseError("'funcs' and 'basevars' must come first", lineno, 1);
        std::vector<std::string> order = funcs;
        if (!priority.empty()) {
            std::vector<std::string> a = priority, b = funcs;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) throw ParseError("ranking must list every function once", lineno, 1);
            order = priority;
        }
        try {
            return OrderlyRanking(order, basevars);
        } catch (const InvalidSystem &e) {
            throw ParseError(e.what(), lineno, 1);
        }
    }
};

} // namespace detail

/// Parses the differential system format:
///   funcs u1 u2
///   basevars t
///   ranking orderly u1>u2     (optional; default is the `funcs` order)
///   point 1                   (optional expansion point)
///   eq <differential polynomial>, derivatives written D(u1,t,2)
///   ineq <polynomial in Taylor coefficients u1[0], u[1,0]>
///   leader <derivative>       (leader set only inputs)
inline DifferentialSystem parse_differential_system(const std::string &text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    detail::RankingHeader header;
    std::optional<OrderlyRanking> ranking;
    DifferentialSystem s;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        auto [kw, rest_at] = detail::keyword(line);
        if (kw.empty()) continue;
        const std::string rest = line.substr(rest_at);
        if (header.consume(kw, rest, lineno, rest_at)) {
            if (ranking) throw ParseError("ranking header after the first member", lineno, 1);
            continue;
        }
        if (!ranking) {
            ranking = header.build(lineno);
            s.ranking = *ranking;
        }
        if (kw == "eq") {
            s.equations.push_back(parse_differential_polynomial(rest, *ranking, lineno, rest_at));
        } else if (kw == "ineq") {
            s.coefficient_inequations.push_back(parse_coefficient_polynomial(rest, *ranking, lineno, rest_at));
        } else if (kw == "point") {
            s.point = parse_point(rest, lineno, rest_at);
            if (s.point->size() != ranking->base_count())
                throw ParseError("point needs one coordinate per base variable", lineno, rest_at + 1);
        } else if (kw == "leader") {
            auto p = parse_differential_polynomial(rest, *ranking, lineno, rest_at);
            if (p.size() != 1 || p.leading_monomial().size() != 1 || p.leading_monomial()[0].second != 1 ||
                !CoefficientTraits<RationalFunction>::is_one(p.leading_coefficient()))
                throw ParseError("leader must be a single derivative", lineno, rest_at + 1);
            s.leaders.push_back(p.leading_monomial()[0].first);
        } else {
            throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
        }
    }
    if (!ranking) {
        ranking = header.build(lineno);
        s.ranking = *ranking;
    }
    return s;
}

inline std::string render_point(const ExpansionPoint &zeta) {
    std::string out;
    for (std::size_t i = 0; i < zeta.size(); ++i) out += (i ? " " : "") + zeta[i].get_str();
    return out;
}

inline std::string render_differential_system(const DifferentialSystem &s) {
    const auto &r = s.ranking;
    std::string out = "funcs";
    for (const auto &f : r.priority()) out += " " + f;
    out += "\nbasevars";
    for (const auto &x : r.basevars()) out += " " + x;
    out += "\nranking orderly ";
    const auto pr = r.priority();
    for (std::size_t i = 0; i < pr.size(); ++i) out += (i ? ">" : "") + pr[i];
    out += "\n";
    if (s.point) out += "point " + render_point(*s.point) + "\n";
    for (const auto &p : s.equations) out += "eq " + to_string(p, r) + "\n";
    for (const auto &q : s.coefficient_inequations) out += "ineq " + to_string(q, r) + "\n";
    for (const auto &v : s.leaders) out += "leader " + r.name(v) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// simple differential systems

/// Leaders of the equations. Throws NotSimple unless they are pairwise
/// distinct and none is a derivative of another.
inline std::vector<DiffVar> checked_leaders(const DifferentialSystem &s) {
    std::vector<DiffVar> lds;
    for (const auto &p : s.equations) {
        if (p.is_constant()) throw NotSimple("constant equation " + to_string(p, s.ranking));
        lds.push_back(leader(p));
    }
    for (std::size_t a = 0; a < lds.size(); ++a)
        for (std::size_t b = 0; b < lds.size(); ++b)
            if (a != b && lds[a].function == lds[b].function && in_cone(lds[a].mu, lds[b].mu))
                throw NotSimple(s.ranking.name(lds[b]) + " is a derivative of the leader " +
                                s.ranking.name(lds[a]));
    return lds;
}

/// Throws unless coefficients are pole free at zeta and no initial or
/// separant vanishes identically there.
inline void check_expansion_point(const DifferentialSystem &s, const ExpansionPoint &zeta) {
    check_point(zeta, s.ranking.base_count());
    for (const auto &p : s.equations) {
        rho(p, zeta);
        if (rho(initial(p), zeta).is_zero())
            throw VanishingInitialOrSeparant("initial of " + to_string(p, s.ranking) + " vanishes at the point");
        if (rho(separant(p), zeta).is_zero())
            throw VanishingInitialOrSeparant("separant of " + to_string(p, s.ranking) + " vanishes at the point");
    }
}

struct PassivityReport {
    /// Cross-derivative pairs whose difference reduced to zero.
    std::size_t pairs_checked = 0;
    /// Pairs beyond the order bound, not examined.
    std::size_t pairs_skipped = 0;
    std::vector<std::string> failures;

    bool passive() const { return failures.empty() && pairs_skipped == 0; }
};

/// For every pair of equations with leaders of the same function, reduces
/// the cross-derivative difference at the componentwise maximum of the
/// leaders by the system. Pairs above `order_bound` are skipped.
inline PassivityReport check_passivity(const DifferentialSystem &s, unsigned order_bound) {
    const auto lds = checked_leaders(s);
    PassivityReport rep;
    for (std::size_t a = 0; a < lds.size(); ++a) {
        for (std::size_t b = a + 1; b < lds.size(); ++b) {
            if (lds[a].function != lds[b].function) continue;
            const MultiIndex w = componentwise_max(lds[a].mu, lds[b].mu);
            if (order(w) > order_bound) {
                ++rep.pairs_skipped;
                continue;
            }
            const auto P = derive(s.equations[a], difference(w, lds[a].mu));
            const auto Q = derive(s.equations[b], difference(w, lds[b].mu));
            const DiffVar top{lds[a].function, w};
            const auto diff = Q.coefficient(top, 1) * P - P.coefficient(top, 1) * Q;
            const auto red = ritt_reduce(diff, s.equations);
            if (red.remainder.is_zero()) {
                ++rep.pairs_checked;
            } else {
                rep.failures.push_back(s.ranking.name(lds[a]) + " and " + s.ranking.name(lds[b]) + ": " +
                                       to_string(red.remainder, s.ranking));
            }
        }
    }
    return rep;
}

/// All Taylor coefficients of order <= l as a ranking for the algebraic
/// layer, ordered like the corresponding derivatives.
struct CoefficientRanking {
    std::vector<CoefficientVariable> variables;
    Ranking ranking;
    std::map<CoefficientVariable, unsigned> position;

    CoefficientRanking(const OrderlyRanking &r, unsigned l) {
        for (const auto &mu : indices_up_to(r.base_count(), l))
            for (unsigned j = 0; j < r.function_count(); ++j) variables.push_back({j, mu});
        std::sort(variables.begin(), variables.end());
        std::vector<std::string> names;
        for (const auto &g : variables) {
            position.emplace(g, static_cast<unsigned>(names.size()));
            names.push_back(r.name(g));
        }
        ranking = Ranking(std::move(names));
    }

    /// Throws InvalidSystem if q involves a coefficient of higher order.
    AlgebraicPolynomial to_algebraic(const CoefficientPolynomial &q) const {
        AlgebraicPolynomial a;
        for (const auto &[mono, c] : q.terms()) {
            Monomial<unsigned> t;
            for (const auto &[g, e] : mono) {
                auto it = position.find(g);
                if (it == position.end()) throw InvalidSystem("coefficient beyond the truncation order");
                t.emplace_back(it->second, e);
            }
            a.add_term(std::move(t), c);
        }
        return a;
    }
};

/// Algebraic system in the Taylor coefficients of order <= l, with the
/// coefficient variables it is ranked over and the principal derivatives
/// its equations solve for.
struct Truncation {
    SigmaSystem system;
    std::vector<CoefficientVariable> variables;
    std::vector<DiffVar> principal;
};

namespace detail {

/// Per function: the Janet-complete leader set, origins pointing into the
/// equation list.
struct JanetCover {
    std::vector<std::vector<JanetElement>> by_function;
    std::vector<std::vector<std::size_t>> equation_of; // generator -> equation

    JanetCover(const std::vector<DiffVar> &lds, std::size_t m) : by_function(m), equation_of(m) {
        std::vector<std::vector<MultiIndex>> gens(m);
        for (std::size_t k = 0; k < lds.size(); ++k) {
            gens[lds[k].function].push_back(lds[k].mu);
            equation_of[lds[k].function].push_back(k);
        }
        for (std::size_t j = 0; j < m; ++j) by_function[j] = janet_completion(gens[j]);
    }

    /// Equation and derivation producing the principal derivative v.
    std::optional<std::pair<std::size_t, MultiIndex>> prolongation(const DiffVar &v,
                                                                   const std::vector<DiffVar> &lds) const {
        for (const auto &el : by_function[v.function]) {
            if (!el.covers(v.mu)) continue;
            const std::size_t eq = equation_of[v.function][el.origin];
            return std::make_pair(eq, difference(v.mu, lds[eq].mu));
        }
        return std::nullopt;
    }
};

} // namespace detail

/// Builds the truncated system: rho of one prolongation per principal
/// derivative of order <= l (chosen through Janet completion), plus the
/// coefficient inequations of order <= l. The ranking lists every Taylor
/// coefficient of order <= l in the orderly ranking.
inline Truncation truncate(const DifferentialSystem &s, const ExpansionPoint &zeta, unsigned l) {
    const auto lds = checked_leaders(s);
    check_expansion_point(s, zeta);
    const auto &r = s.ranking;
    const std::size_t m = r.function_count();
    const std::size_t n = r.base_count();

    Truncation out;
    const CoefficientRanking coeffs(r, l);
    out.variables = coeffs.variables;
    auto to_algebraic = [&](const CoefficientPolynomial &q) { return coeffs.to_algebraic(q); };

    detail::JanetCover cover(lds, m);
    std::map<std::pair<std::size_t, MultiIndex>, DifferentialPolynomial> memo;
    std::vector<AlgebraicPolynomial> eqs;
    for (const auto &g : out.variables) {
        const DiffVar v = rho_inverse(g);
        auto pro = cover.prolongation(v, lds);
        if (!pro) continue;
        out.principal.push_back(v);
        // derive from the nearest already computed prolongation
        DifferentialPolynomial q = s.equations[pro->first];
        MultiIndex done(n, 0);
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned k = 0; k < pro->second[i]; ++k) {
                ++done[i];
                auto key = std::make_pair(pro->first, done);
                auto it = memo.find(key);
                if (it == memo.end()) it = memo.emplace(key, derive(q, i)).first;
                q = it->second;
            }
        }
        eqs.push_back(to_algebraic(rho(q, zeta)));
    }
    std::vector<AlgebraicPolynomial> ineqs;
    for (const auto &q : s.coefficient_inequations) {
        bool fits = true;
        for (const auto &g : q.variables()) fits = fits && g.order() <= l;
        if (fits) ineqs.push_back(to_algebraic(q));
    }
    out.system = SigmaSystem(coeffs.ranking, eqs, ineqs);
    return out;
}

/// The truncated system validated as a simple system.
inline SimpleSystem truncation_system(const DifferentialSystem &s, const ExpansionPoint &zeta, unsigned l) {
    Truncation t = truncate(s, zeta, l);
    try {
        return validate_simple(t.system);
    } catch (const NotWeaklyTriangular &e) {
        throw NotSimple(std::string("truncated system is not triangular: ") + e.what());
    } catch (const ConstantMember &e) {
        throw NotSimple(std::string("truncated system has a constant member: ") + e.what());
    }
}

} // namespace countdiff

#endif // COUNTDIFF_DIFFALG_HPP
