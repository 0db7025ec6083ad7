#ifndef COUNTDIFF_DIFFCOUNT_HPP
#define COUNTDIFF_DIFFCOUNT_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "counting.hpp"
#include "diffalg.hpp"
#include "dimension.hpp"
#include "parallel.hpp"
#include "sigma_system.hpp"

namespace countdiff {

// ---------------------------------------------------------------------------
// simple differential systems and the closed formula

/// A differential system whose leaders are triangular, with per-equation
/// data and the result of the cross-derivative check. Inequations are only
/// allowed on parametric Taylor coefficients.
class SimpleDifferentialSystem {
public:
    explicit SimpleDifferentialSystem(DifferentialSystem s, unsigned passivity_bound = 8)
        : system_(std::move(s)), leader_set_(LeaderSet::of(system_)) {
        if (!system_.leaders.empty()) throw NotSimple("declared leaders without equations cannot be counted");
        leaders_ = checked_leaders(system_);
        for (std::size_t k = 0; k < leaders_.size(); ++k) {
            orders_.push_back(leaders_[k].order());
            degrees_.push_back(system_.equations[k].degree(leaders_[k]));
        }
        std::set<CoefficientVariable> vars;
        for (const auto &q : system_.coefficient_inequations) {
            if (q.is_constant()) throw NotSimple("constant inequation " + to_string(q, system_.ranking));
            for (const auto &g : q.variables()) {
                if (leader_set_.is_principal(g.function, g.mu))
                    throw NotSimple("inequation on the principal coefficient " + system_.ranking.name(g));
                vars.insert(g);
            }
        }
        inequation_variables_.assign(vars.begin(), vars.end());
        passivity_ = check_passivity(system_, passivity_bound);
    }

    const DifferentialSystem &system() const { return system_; }
    const OrderlyRanking &ranking() const { return system_.ranking; }
    const LeaderSet &leader_set() const { return leader_set_; }
    const std::vector<DiffVar> &leaders() const { return leaders_; }
    const std::vector<unsigned> &orders() const { return orders_; }
    const std::vector<unsigned> &degrees() const { return degrees_; }
    const PassivityReport &passivity() const { return passivity_; }
    /// Results hold only if the system is passive, which was not confirmed.
    bool conditional() const { return !passivity_.passive(); }

    /// Product of leader degrees of the equations of order <= l.
    Integer degree_product(unsigned long l) const {
        Integer d = 1;
        for (std::size_t k = 0; k < degrees_.size(); ++k)
            if (orders_[k] <= l) d *= degrees_[k];
        return d;
    }

    unsigned max_order() const {
        unsigned m = 0;
        for (unsigned o : orders_) m = std::max(m, o);
        return m;
    }

    unsigned max_inequation_order() const {
        unsigned m = 0;
        for (const auto &g : inequation_variables_) m = std::max(m, g.order());
        return m;
    }

    /// Count of the coefficient inequations of order <= l on their own
    /// variables; `variables` receives how many coefficients they involve.
    CountingPolynomial inequation_factor(unsigned long l, unsigned &variables) const {
        std::vector<CoefficientVariable> used;
        std::vector<const CoefficientPolynomial *> qs;
        for (const auto &q : system_.coefficient_inequations) {
            bool fits = true;
            for (const auto &g : q.variables()) fits = fits && g.order() <= l;
            if (!fits) continue;
            qs.push_back(&q);
            for (const auto &g : q.variables()) used.push_back(g);
        }
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        variables = static_cast<unsigned>(used.size());
        if (qs.empty()) return CountingPolynomial(1);
        std::map<CoefficientVariable, unsigned> pos;
        std::vector<std::string> names;
        for (const auto &g : used) {
            pos.emplace(g, static_cast<unsigned>(names.size()));
            names.push_back(system_.ranking.name(g));
        }
        std::vector<AlgebraicPolynomial> ineqs;
        for (const auto *q : qs) {
            AlgebraicPolynomial a;
            for (const auto &[mono, c] : q->terms()) {
                Monomial<unsigned> t;
                for (const auto &[g, e] : mono) t.emplace_back(pos.at(g), e);
                a.add_term(std::move(t), c);
            }
            ineqs.push_back(std::move(a));
        }
        return count_simple(validate_simple(SigmaSystem(Ranking(names), {}, ineqs)));
    }

private:
    DifferentialSystem system_;
    LeaderSet leader_set_;
    std::vector<DiffVar> leaders_;
    std::vector<unsigned> orders_;
    std::vector<unsigned> degrees_;
    std::vector<CoefficientVariable> inequation_variables_;
    PassivityReport passivity_;
};

/// Value of the counting sequence at order l:
/// (product of degrees of equations of order <= l) * oo^(Omega(l) - k) * tau
/// where tau counts the k coefficients constrained by inequations.
inline CountingPolynomial counting_value_simple(const SimpleDifferentialSystem &S, unsigned long l) {
    unsigned k = 0;
    const CountingPolynomial tau = S.inequation_factor(l, k);
    const unsigned long omega = dimension_function(S.leader_set(), l);
    return CountingPolynomial(S.degree_product(l)) * CountingPolynomial::infinity(static_cast<unsigned>(omega - k)) *
           tau;
}

inline CountingSequence counting_sequence_simple(const SimpleDifferentialSystem &S, const ExpansionPoint &zeta) {
    check_expansion_point(S.system(), zeta);
    const DimensionPolynomial dp = dimension_polynomial(S.leader_set());
    const unsigned start = std::max({dp.stabilization, S.max_order(), S.max_inequation_order()});
    unsigned k = 0;
    const CountingPolynomial tau = S.inequation_factor(start, k);
    Integer degs = S.degree_product(start);
    auto tail = DifferentialCountingPolynomial::term(EllAlephPolynomial(Rational(degs)),
                                                     dp.omega - ExponentPolynomial(static_cast<long>(k))) *
                DifferentialCountingPolynomial::from_counting(tau);
    std::vector<CountingPolynomial> prefix;
    for (unsigned l = 0; l < start; ++l) prefix.push_back(counting_value_simple(S, l));
    return CountingSequence(std::move(prefix), std::move(tail)).minimal();
}

inline DifferentialCountingPolynomial differential_counting_polynomial_simple(const SimpleDifferentialSystem &S,
                                                                              const ExpansionPoint &zeta) {
    return counting_sequence_simple(S, zeta).tail();
}

struct LeadingTerm {
    Integer coefficient;
    unsigned long exponent = 0;

    friend bool operator==(const LeadingTerm &a, const LeadingTerm &b) {
        return a.coefficient == b.coefficient && a.exponent == b.exponent;
    }
};

inline LeadingTerm leading_term(const SimpleDifferentialSystem &S, unsigned long l) {
    return {S.degree_product(l), dimension_function(S.leader_set(), l)};
}

struct CrosscheckEntry {
    unsigned order = 0;
    CountingPolynomial closed_formula;
    CountingPolynomial truncation;
    /// The truncated system's certificate was fully proved.
    bool certified = false;
    bool matches() const { return closed_formula == truncation; }
};

struct CrosscheckReport {
    std::vector<CrosscheckEntry> entries;

    bool ok() const {
        for (const auto &e : entries)
            if (!e.matches() || !e.certified) return false;
        return true;
    }
    std::optional<unsigned> first_mismatch() const {
        for (const auto &e : entries)
            if (!e.matches() || !e.certified) return e.order;
        return std::nullopt;
    }
};

/// Compares the closed formula with the count of the truncated algebraic
/// system at every order up to max_order.
inline CrosscheckReport crosscheck_truncation(const SimpleDifferentialSystem &S, const ExpansionPoint &zeta,
                                              unsigned max_order) {
    const CountingSequence seq = counting_sequence_simple(S, zeta);
    CrosscheckReport rep;
    rep.entries = parallel_map<CrosscheckEntry>(max_order + 1, [&](std::size_t l) {
        CrosscheckEntry e;
        e.order = static_cast<unsigned>(l);
        e.closed_formula = seq.value(static_cast<long>(l));
        SimpleSystem t = truncation_system(S.system(), zeta, static_cast<unsigned>(l));
        e.certified = t.certified();
        e.truncation = count_simple(t.certified() ? t : t.override_assumptions());
        return e;
    });
    return rep;
}

// ---------------------------------------------------------------------------
// system templates

/// One line of a template: eq/ineq/cofinite, possibly under for/if.
struct TemplateStatement {
    enum class Kind { Eq, Ineq, Cofinite, For, If };
    Kind kind = Kind::Eq;
    ExprPtr expr;
    CofiniteRelation relation = CofiniteRelation::Alone;
    std::string description;
    std::string loop_variable;
    ExprPtr from, to;
    Condition condition;
    std::shared_ptr<TemplateStatement> body;
    std::size_t line = 0;
};

using Parameters = std::map<std::string, Rational>;

/// Family of algebraic systems in Taylor coefficients indexed by the order l
/// and user parameters.
class SystemTemplate {
public:
    SystemTemplate(OrderlyRanking ranking, std::vector<std::pair<std::string, ExprPtr>> params,
                   std::vector<TemplateStatement> statements)
        : ranking_(std::move(ranking)), params_(std::move(params)), statements_(std::move(statements)) {}

    const OrderlyRanking &ranking() const { return ranking_; }

    /// The system at order l over every Taylor coefficient of order <= l.
    /// `given` overrides declared parameter defaults.
    SigmaSystem instantiate(unsigned l, const Parameters &given = {}) const {
        Parameters env = given;
        env["l"] = Rational(static_cast<long>(l));
        for (const auto &[name, e] : params_) {
            if (env.count(name)) continue;
            RationalContext ctx = context(env);
            env[name] = evaluate_expression<Rational>(*e, ctx);
        }
        Build b{CoefficientRanking(ranking_, l), {}, {}, {}};
        for (const auto &st : statements_) run(st, env, b);
        return SigmaSystem(b.coeffs.ranking, b.eqs, b.ineqs, b.cofinite);
    }

private:
    struct Build {
        CoefficientRanking coeffs;
        std::vector<AlgebraicPolynomial> eqs, ineqs;
        std::vector<CofiniteMarker> cofinite;
    };

    static RationalContext context(const Parameters &env) {
        return RationalContext([&env](const std::string &name, Rational &out) {
            auto it = env.find(name);
            if (it == env.end()) return false;
            out = it->second;
            return true;
        });
    }

    AlgebraicPolynomial polynomial(const TemplateStatement &st, const Parameters &env, const Build &b) const {
        detail::CoefficientContext ctx{ranking_, context(env)};
        CoefficientPolynomial q = evaluate_expression<CoefficientPolynomial>(*st.expr, ctx);
        for (const auto &g : q.variables())
            if (!b.coeffs.position.count(g))
                st.expr->fail(ranking_.name(g) + " exceeds the order l = " + env.at("l").get_str());
        return b.coeffs.to_algebraic(q);
    }

    void run(const TemplateStatement &st, const Parameters &env, Build &b) const {
        switch (st.kind) {
        case TemplateStatement::Kind::Eq:
            b.eqs.push_back(polynomial(st, env, b));
            return;
        case TemplateStatement::Kind::Ineq:
            b.ineqs.push_back(polynomial(st, env, b));
            return;
        case TemplateStatement::Kind::Cofinite: {
            if (st.expr->kind != Expr::Kind::Indexed) st.expr->fail("cofinite needs a Taylor coefficient");
            const auto g = detail::parse_coefficient_variable(*st.expr, ranking_, context(env));
            auto it = b.coeffs.position.find(g);
            if (it == b.coeffs.position.end()) st.expr->fail(ranking_.name(g) + " exceeds the order");
            b.cofinite.push_back({it->second, st.relation, st.description});
            return;
        }
        case TemplateStatement::Kind::If: {
            RationalContext ctx = context(env);
            if (ctx.holds(st.condition)) run(*st.body, env, b);
            return;
        }
        case TemplateStatement::Kind::For: {
            RationalContext ctx = context(env);
            const long lo = ctx.integer(*st.from);
            const long hi = ctx.integer(*st.to);
            Parameters inner = env;
            for (long i = lo; i <= hi; ++i) {
                inner[st.loop_variable] = Rational(i);
                run(*st.body, inner, b);
            }
            return;
        }
        }
    }

    OrderlyRanking ranking_;
    std::vector<std::pair<std::string, ExprPtr>> params_;
    std::vector<TemplateStatement> statements_;
};

namespace detail {

inline std::size_t find_top_level(const std::string &s, const std::string &token) {
    int depth = 0;
    for (std::size_t i = 0; i + token.size() <= s.size(); ++i) {
        const char c = s[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth == 0 && s.compare(i, token.size(), token) == 0) return i;
    }
    return std::string::npos;
}

inline TemplateStatement parse_statement(const std::string &text, std::size_t lineno, std::size_t offset) {
    auto [kw, rest_at] = keyword(text);
    const std::string rest = text.substr(rest_at);
    const std::size_t at = offset + rest_at;
    TemplateStatement st;
    st.line = lineno;
    if (kw == "eq" || kw == "ineq") {
        st.kind = kw == "eq" ? TemplateStatement::Kind::Eq : TemplateStatement::Kind::Ineq;
        st.expr = parse_expression(rest, lineno, at);
    } else if (kw == "cofinite") {
        auto words = split_words(rest);
        if (words.empty()) throw ParseError("cofinite needs a Taylor coefficient", lineno, at + 1);
        st.kind = TemplateStatement::Kind::Cofinite;
        st.expr = parse_expression(words[0], lineno, at);
        std::size_t first = 1;
        if (words.size() > 1 && (words[1] == "disjoint" || words[1] == "subsumes")) {
            st.relation = words[1] == "disjoint" ? CofiniteRelation::Disjoint : CofiniteRelation::Subsumes;
            first = 2;
        }
        for (std::size_t i = first; i < words.size(); ++i) st.description += (i > first ? " " : "") + words[i];
    } else if (kw == "for" || kw == "if") {
        const std::size_t colon = find_top_level(rest, ":");
        if (colon == std::string::npos) throw ParseError("expected ':'", lineno, at + rest.size() + 1);
        const std::string head = rest.substr(0, colon);
        st.body = std::make_shared<TemplateStatement>(parse_statement(rest.substr(colon + 1), lineno, at + colon + 1));
        if (kw == "if") {
            st.kind = TemplateStatement::Kind::If;
            st.condition = ExpressionParser(head, lineno, at).parse_condition();
        } else {
            st.kind = TemplateStatement::Kind::For;
            std::istringstream in(head);
            std::string var, in_kw;
            in >> var >> in_kw;
            if (var.empty() || in_kw != "in") throw ParseError("expected 'for <name> in <from>..<to>:'", lineno, at + 1);
            st.loop_variable = var;
            const std::size_t range_at = head.find(" in ") + 4;
            const std::string range = head.substr(range_at);
            const std::size_t dots = find_top_level(range, "..");
            if (dots == std::string::npos) throw ParseError("expected '..' in range", lineno, at + range_at + 1);
            st.from = parse_expression(range.substr(0, dots), lineno, at + range_at);
            st.to = parse_expression(range.substr(dots + 2), lineno, at + range_at + dots + 2);
        }
    } else {
        throw ParseError(kw.empty() ? "empty statement" : "unknown keyword '" + kw + "'", lineno, offset + 1);
    }
    return st;
}

} // namespace detail

/// Parses the template format: the ranking header of differential systems,
/// then
///   param zeta = 1
///   eq <polynomial in Taylor coefficients; u1[i], sum(i, a, b, term)>
///   ineq <...>
///   cofinite u2[1] [disjoint|subsumes] [description]
///   for i in <from>..<to>: <statement>
///   if <a> <op> <b>: <statement>
/// The order is available as `l`.
inline SystemTemplate parse_template(const std::string &text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    detail::RankingHeader header;
    std::optional<OrderlyRanking> ranking;
    std::vector<std::pair<std::string, ExprPtr>> params;
    std::vector<TemplateStatement> statements;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        auto [kw, rest_at] = detail::keyword(line);
        if (kw.empty()) continue;
        if (header.consume(kw, line.substr(rest_at), lineno, rest_at)) {
            if (ranking) throw ParseError("ranking header after the first statement", lineno, 1);
            continue;
        }
        if (!ranking) ranking = header.build(lineno);
        if (kw == "param") {
            const std::string rest = line.substr(rest_at);
            const std::size_t eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError("expected 'param <name> = <value>'", lineno, rest_at + 1);
            auto names = detail::split_words(rest.substr(0, eq));
            if (names.size() != 1) throw ParseError("expected one parameter name", lineno, rest_at + 1);
            params.emplace_back(names[0], parse_expression(rest.substr(eq + 1), lineno, rest_at + eq + 1));
            continue;
        }
        statements.push_back(detail::parse_statement(line, lineno, 0));
    }
    if (!ranking) ranking = header.build(lineno);
    return SystemTemplate(*ranking, std::move(params), std::move(statements));
}

// ---------------------------------------------------------------------------
// strata

/// Part of a disjoint decomposition of a solution set: a simple differential
/// system counted by the closed formula, a template family summed over a
/// parameter range, or a given counting sequence.
struct Stratum {
    enum class Kind { Closed, Family, Sequence };
    Kind kind = Kind::Sequence;
    std::string label;

    std::shared_ptr<const SimpleDifferentialSystem> closed;
    ExpansionPoint point;

    std::shared_ptr<const SystemTemplate> family;
    Parameters fixed;
    /// Optional range parameter name = from..to, bounds may use l.
    std::string range_variable;
    ExprPtr range_from, range_to;

    CountingSequence sequence;

    static Stratum closed_form(SimpleDifferentialSystem s, ExpansionPoint zeta, std::string label = {}) {
        Stratum st;
        st.kind = Kind::Closed;
        st.label = std::move(label);
        st.sequence = counting_sequence_simple(s, zeta);
        st.closed = std::make_shared<const SimpleDifferentialSystem>(std::move(s));
        st.point = std::move(zeta);
        return st;
    }

    static Stratum of_sequence(CountingSequence seq, std::string label = {}) {
        Stratum st;
        st.kind = Kind::Sequence;
        st.label = std::move(label);
        st.sequence = std::move(seq);
        return st;
    }

    static Stratum of_family(SystemTemplate t, Parameters fixed = {}, std::string label = {}) {
        Stratum st;
        st.kind = Kind::Family;
        st.label = std::move(label);
        st.family = std::make_shared<const SystemTemplate>(std::move(t));
        st.fixed = std::move(fixed);
        return st;
    }

    /// Algebraic systems generated at order l.
    std::vector<SigmaSystem> systems(unsigned l) const {
        if (kind != Kind::Family) return {};
        if (range_variable.empty()) return {family->instantiate(l, fixed)};
        Parameters env = fixed;
        env["l"] = Rational(static_cast<long>(l));
        RationalContext ctx([&env](const std::string &name, Rational &out) {
            auto it = env.find(name);
            if (it == env.end()) return false;
            out = it->second;
            return true;
        });
        const long lo = ctx.integer(*range_from);
        const long hi = ctx.integer(*range_to);
        std::vector<SigmaSystem> out;
        for (long i = lo; i <= hi; ++i) {
            Parameters p = fixed;
            p[range_variable] = Rational(i);
            out.push_back(family->instantiate(l, p));
        }
        return out;
    }

    CountingPolynomial value(unsigned l) const {
        if (kind != Kind::Family) return sequence.value(static_cast<long>(l));
        CountingPolynomial total;
        for (const auto &s : systems(l)) {
            SimpleSystem simple = validate_simple(s);
            if (!simple.certified())
                throw UncertifiedSystem("stratum " + label + " at l = " + std::to_string(l) + ": " +
                                        simple.warnings().front());
            total += count_simple(simple);
        }
        return total;
    }
};

struct FitOptions {
    /// Largest order from which a closed form may start.
    unsigned max_start = 6;
    /// Degree bounds of fitted exponents and coefficients; 0 picks the
    /// number of base variables for exponents.
    unsigned exponent_degree = 0;
    unsigned coefficient_degree = 2;
    /// Orders checked beyond the interpolation points.
    unsigned verify = 2;
};

struct StratifiedResult {
    CountingSequence sequence;
    /// Per-order sums that were computed.
    std::vector<CountingPolynomial> values;
    bool fitted = false;
    /// Highest order at which the closed form was checked against the sums.
    unsigned verified_through = 0;
};

namespace detail {

/// Coefficients c0, c1, ... of the interpolating polynomial through (x_i, y_i).
inline std::vector<Rational> interpolate(const std::vector<Rational> &xs, const std::vector<Rational> &ys) {
    const std::size_t n = xs.size();
    std::vector<Rational> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    std::vector<Rational> poly{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
        // poly = poly * (x - xs[k]) + dd[k]
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * xs[k];
        }
        next[0] += dd[k];
        poly = std::move(next);
    }
    while (!poly.empty() && sgn(poly.back()) == 0) poly.pop_back();
    return poly;
}

inline std::optional<DifferentialCountingPolynomial> fit_window(const std::vector<CountingPolynomial> &values,
                                                                unsigned start, unsigned points,
                                                                unsigned exponent_degree,
                                                                unsigned coefficient_degree) {
    using Terms = std::vector<std::pair<unsigned, CountingPolynomial::AlephPart>>;
    std::vector<Terms> rows;
    for (unsigned l = start; l < start + points; ++l) {
        const auto &tm = values.at(l).terms();
        rows.emplace_back(tm.rbegin(), tm.rend());
        if (rows.back().size() != rows.front().size()) return std::nullopt;
    }
    std::vector<Rational> xs;
    for (unsigned l = start; l < start + points; ++l) xs.push_back(Rational(static_cast<long>(l)));
    DifferentialCountingPolynomial out;
    for (std::size_t t = 0; t < rows.front().size(); ++t) {
        std::vector<Rational> es;
        std::set<unsigned> alephs;
        for (const auto &row : rows) {
            es.push_back(Rational(static_cast<long>(row[t].first)));
            for (const auto &[a, c] : row[t].second) alephs.insert(a);
        }
        auto ec = interpolate(xs, es);
        if (ec.size() > exponent_degree + 1) return std::nullopt;
        EllAlephPolynomial coefficient;
        for (unsigned a : alephs) {
            std::vector<Rational> cs;
            for (const auto &row : rows) {
                auto it = row[t].second.find(a);
                cs.push_back(it == row[t].second.end() ? Rational(0) : Rational(it->second));
            }
            auto cc = interpolate(xs, cs);
            if (cc.size() > coefficient_degree + 1) return std::nullopt;
            for (std::size_t i = 0; i < cc.size(); ++i)
                coefficient += (EllAlephPolynomial::variable(kEll, static_cast<unsigned>(i)) *
                                EllAlephPolynomial::variable(kAleph, a))
                                   .scaled(cc[i]);
        }
        try {
            out += DifferentialCountingPolynomial::term(coefficient, ExponentPolynomial::from_coefficients(ec));
        } catch (const NotIntegerValued &) {
            return std::nullopt;
        }
    }
    return out;
}

} // namespace detail

inline std::size_t base_count_of(const std::vector<Stratum> &strata) {
    std::size_t n = 1;
    for (const auto &s : strata) {
        if (s.closed) n = std::max(n, s.closed->ranking().base_count());
        if (s.family) n = std::max(n, s.family->ranking().base_count());
    }
    return n;
}

/// Per-order sum of all strata at the orders 0..last.
inline std::vector<CountingPolynomial> stratified_values(const std::vector<Stratum> &strata, unsigned last) {
    return parallel_map<CountingPolynomial>(last + 1, [&](std::size_t l) {
        CountingPolynomial total;
        for (const auto &s : strata) total += s.value(static_cast<unsigned>(l));
        return total;
    });
}

/// Sums the strata order by order. Without template families the sequences
/// add symbolically; otherwise a closed form is fitted to the per-order sums
/// (interpolation on degree + 2 orders, then `verify` further orders) from
/// the first start order where that succeeds. Throws FitFailure if none does.
inline StratifiedResult stratified_counting_report(const std::vector<Stratum> &strata, FitOptions opt = {}) {
    StratifiedResult res;
    bool families = false;
    for (const auto &s : strata) families = families || s.kind == Stratum::Kind::Family;
    if (!families) {
        std::vector<CountingSequence> parts;
        for (const auto &s : strata) parts.push_back(s.sequence);
        res.sequence = sum_sequences(parts);
        return res;
    }
    const unsigned edeg = opt.exponent_degree ? opt.exponent_degree : static_cast<unsigned>(base_count_of(strata));
    const unsigned points = std::max(edeg, opt.coefficient_degree) + 2;
    const unsigned last = opt.max_start + points + opt.verify - 1;
    res.values = stratified_values(strata, last);
    for (unsigned start = 0; start <= opt.max_start; ++start) {
        auto tail = detail::fit_window(res.values, start, points, edeg, opt.coefficient_degree);
        if (!tail) continue;
        bool ok = true;
        const unsigned through = start + points + opt.verify - 1;
        for (unsigned l = start; l <= through && ok; ++l) {
            try {
                ok = tail->evaluate(l) == res.values[l];
            } catch (const Error &) {
                ok = false;
            }
        }
        if (!ok) continue;
        std::vector<CountingPolynomial> prefix(res.values.begin(), res.values.begin() + start);
        res.sequence = CountingSequence(std::move(prefix), *tail).minimal();
        res.fitted = true;
        res.verified_through = through;
        return res;
    }
    throw FitFailure("no closed form with exponent degree <= " + std::to_string(edeg) +
                     " and coefficient degree <= " + std::to_string(opt.coefficient_degree) +
                     " starting at an order <= " + std::to_string(opt.max_start));
}

inline CountingSequence stratified_counting(const std::vector<Stratum> &strata, FitOptions opt = {}) {
    return stratified_counting_report(strata, opt).sequence;
}

// ---------------------------------------------------------------------------
// manifests

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidSystem("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Manifest {
    std::vector<Stratum> strata;
    FitOptions fit;
};

/// Parses a manifest listing strata, paths relative to `base_dir`:
///   system <file.dsys> [point <coords>]
///   template <file.tsys> [name=value ...] [name=from..to]
///   sequence <counting sequence>
///   fit [start <n>] [degree <n>] [coefficients <n>]
inline Manifest parse_manifest(const std::string &text, const std::filesystem::path &base_dir) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    Manifest m;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        auto [kw, rest_at] = detail::keyword(line);
        if (kw.empty()) continue;
        const std::string rest = line.substr(rest_at);
        auto words = detail::split_words(rest);
        auto file_of = [&](const std::string &w) { return (base_dir / w).string(); };
        if (kw == "system") {
            if (words.empty()) throw ParseError("system needs a file", lineno, rest_at + 1);
            DifferentialSystem ds = parse_differential_system(read_text_file(file_of(words[0])));
            std::optional<ExpansionPoint> zeta = ds.point;
            if (words.size() > 1) {
                if (words[1] != "point") throw ParseError("expected 'point'", lineno, rest_at + 1);
                std::string coords;
                for (std::size_t i = 2; i < words.size(); ++i) coords += words[i] + " ";
                zeta = parse_point(coords, lineno, rest_at);
            }
            if (!zeta) throw ParseError("no expansion point for " + words[0], lineno, rest_at + 1);
            m.strata.push_back(Stratum::closed_form(SimpleDifferentialSystem(std::move(ds)), *zeta, words[0]));
        } else if (kw == "template") {
            if (words.empty()) throw ParseError("template needs a file", lineno, rest_at + 1);
            Stratum st = Stratum::of_family(parse_template(read_text_file(file_of(words[0]))), {}, words[0]);
            // rejoin so that `k = 1..l` and `k=1..l` both work
            std::string args;
            for (std::size_t i = 1; i < words.size(); ++i) args += words[i];
            std::size_t pos = 0;
            while (pos < args.size()) {
                const std::size_t eq = args.find('=', pos);
                if (eq == std::string::npos) throw ParseError("expected name=value", lineno, rest_at + 1);
                const std::string name = args.substr(pos, eq - pos);
                std::size_t next = args.find('=', eq + 1);
                std::size_t end = args.size();
                if (next != std::string::npos) {
                    // the value ends where the next name starts
                    end = next;
                    while (end > eq + 1 && (std::isalnum(static_cast<unsigned char>(args[end - 1])) ||
                                            args[end - 1] == '_'))
                        --end;
                    if (end == eq + 1) throw ParseError("cannot split template arguments", lineno, rest_at + 1);
                }
                const std::string value = args.substr(eq + 1, end - eq - 1);
                const std::size_t dots = detail::find_top_level(value, "..");
                if (dots != std::string::npos) {
                    if (!st.range_variable.empty()) throw ParseError("only one range per template", lineno, 1);
                    st.range_variable = name;
                    st.range_from = parse_expression(value.substr(0, dots), lineno, rest_at);
                    st.range_to = parse_expression(value.substr(dots + 2), lineno, rest_at);
                } else {
                    RationalContext ctx;
                    st.fixed[name] = evaluate_expression<Rational>(*parse_expression(value, lineno, rest_at), ctx);
                }
                pos = end;
            }
            m.strata.push_back(std::move(st));
        } else if (kw == "sequence") {
            m.strata.push_back(Stratum::of_sequence(parse_sequence(rest, lineno), "sequence"));
        } else if (kw == "fit") {
            for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
                const unsigned v = static_cast<unsigned>(std::stoul(words[i + 1]));
                if (words[i] == "start") {
                    m.fit.max_start = v;
                } else if (words[i] == "degree") {
                    m.fit.exponent_degree = v;
                } else if (words[i] == "coefficients") {
                    m.fit.coefficient_degree = v;
                } else {
                    throw ParseError("unknown fit option '" + words[i] + "'", lineno, rest_at + 1);
                }
            }
        } else {
            throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
        }
    }
    return m;
}

inline Manifest load_manifest(const std::string &path) {
    return parse_manifest(read_text_file(path), std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// comparing nested solution sets

struct SequenceComparison {
    Decision decision = Decision::Unknown;
    /// Order at which the decision was made (first distinct order).
    std::optional<unsigned> order;
    std::optional<std::pair<unsigned, unsigned>> witness;
    std::vector<unsigned> orders_checked;
};

/// Compares the counting sequences of S1 and S2 where Sol(S1) is contained
/// in Sol(S2): distinct as soon as the truncations differ at one order,
/// equal when every checked order is equal, the tails agree symbolically and
/// no N0 occurs. The tail order is checked first.
inline SequenceComparison compare_sequences(const CountingSequence &a, const CountingSequence &b, unsigned K,
                                            unsigned extra_orders = 10) {
    SequenceComparison out;
    const unsigned tail_order =
        static_cast<unsigned>(std::max(a.stabilization_order(), b.stabilization_order()));
    std::vector<unsigned> orders{tail_order};
    for (unsigned l = 0; l <= tail_order + extra_orders; ++l)
        if (l != tail_order) orders.push_back(l);
    bool all_equal = true;
    for (unsigned l : orders) {
        out.orders_checked.push_back(l);
        const SetDecision d = decide_sets(a.value(l), b.value(l), K);
        if (d.decision == Decision::Distinct) {
            out.decision = Decision::Distinct;
            out.order = l;
            out.witness = d.witness;
            return out;
        }
        if (d.decision != Decision::Equal) all_equal = false;
    }
    const bool symbolic = a.tail() == b.tail() && !a.tail().has_aleph();
    out.decision = all_equal && symbolic ? Decision::Equal : Decision::Unknown;
    return out;
}

} // namespace countdiff

#endif // COUNTDIFF_DIFFCOUNT_HPP
