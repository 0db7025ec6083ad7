#ifndef COUNTDIFF_SIGMA_SYSTEM_HPP
#define COUNTDIFF_SIGMA_SYSTEM_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "counting.hpp"
#include "ranking.hpp"

namespace countdiff {

/// How a countable inequation family on a variable relates to finite
/// inequations with the same leader.
enum class CofiniteRelation {
    Alone,    // no finite inequations allowed next to the family
    Disjoint, // the family excludes points different from the finite ones
    Subsumes, // the family already contains every point the finite ones exclude
};

/// Opaque stand-in for a countably infinite family of inequations in one
/// variable, e.g. x - i != 0 for all natural i.
struct CofiniteMarker {
    unsigned variable = 0;
    CofiniteRelation relation = CofiniteRelation::Alone;
    std::string description;

    friend bool operator==(const CofiniteMarker &a, const CofiniteMarker &b) {
        return a.variable == b.variable && a.relation == b.relation && a.description == b.description;
    }
};

/// Finitely many equations, finitely many inequations and countable
/// inequation families over a ranking. Members are kept in canonical order.
class SigmaSystem {
public:
    SigmaSystem() = default;
    explicit SigmaSystem(Ranking ranking, std::vector<AlgebraicPolynomial> equations = {},
                         std::vector<AlgebraicPolynomial> inequations = {}, std::vector<CofiniteMarker> cofinite = {})
        : ranking_(std::move(ranking)), equations_(std::move(equations)), inequations_(std::move(inequations)),
          cofinite_(std::move(cofinite)) {
        for (const auto &m : cofinite_)
            if (m.variable >= ranking_.size()) throw InvalidSystem("cofinite marker on an unknown variable");
        auto check = [&](const std::vector<AlgebraicPolynomial> &ps) {
            for (const auto &p : ps)
                for (unsigned v : p.variables())
                    if (v >= ranking_.size()) throw InvalidSystem("polynomial uses a variable outside the ranking");
        };
        check(equations_);
        check(inequations_);
        std::sort(equations_.begin(), equations_.end(), canonical_polynomial_less);
        std::sort(inequations_.begin(), inequations_.end(), canonical_polynomial_less);
        std::sort(cofinite_.begin(), cofinite_.end(),
                  [](const CofiniteMarker &a, const CofiniteMarker &b) { return a.variable < b.variable; });
    }

    const Ranking &ranking() const { return ranking_; }
    const std::vector<AlgebraicPolynomial> &equations() const { return equations_; }
    const std::vector<AlgebraicPolynomial> &inequations() const { return inequations_; }
    const std::vector<CofiniteMarker> &cofinite() const { return cofinite_; }
    bool is_finite() const { return cofinite_.empty(); }

    friend bool operator==(const SigmaSystem &a, const SigmaSystem &b) {
        return a.ranking_ == b.ranking_ && a.equations_ == b.equations_ && a.inequations_ == b.inequations_ &&
               a.cofinite_ == b.cofinite_;
    }

private:
    Ranking ranking_;
    std::vector<AlgebraicPolynomial> equations_;
    std::vector<AlgebraicPolynomial> inequations_;
    std::vector<CofiniteMarker> cofinite_;
};

/// Members of a system sharing one leader.
struct LeaderBucket {
    std::vector<AlgebraicPolynomial> equations;
    std::vector<AlgebraicPolynomial> inequations;
    std::optional<CofiniteMarker> cofinite;
};

using Levels = std::map<unsigned, LeaderBucket>;

inline Levels partition_by_leader(const SigmaSystem &s) {
    Levels out;
    for (const auto &p : s.equations()) {
        if (p.is_constant()) throw ConstantMember("equation " + to_string(p, s.ranking()) + " is a constant");
        out[leader(p)].equations.push_back(p);
    }
    for (const auto &p : s.inequations()) {
        if (p.is_constant()) throw ConstantMember("inequation " + to_string(p, s.ranking()) + " is a constant");
        out[leader(p)].inequations.push_back(p);
    }
    for (const auto &m : s.cofinite()) {
        auto &b = out[m.variable];
        if (b.cofinite) throw InvalidSystem("two cofinite markers on variable " + s.ranking().name(m.variable));
        b.cofinite = m;
    }
    return out;
}

// ---------------------------------------------------------------------------
// nonvanishing certificates

/// Rational constants whose nonvanishing an argument relied on. Reasoning
/// over Q carries over to F_p when p divides none of them.
class UnitLog {
public:
    void note(const Rational &c) {
        if (sgn(c) == 0) return;
        add(abs(c.get_num()));
        add(c.get_den());
    }
    void merge(const UnitLog &o) { units_.insert(o.units_.begin(), o.units_.end()); }
    const std::set<Integer> &units() const { return units_; }
    bool divisible_by_any(std::int64_t p) const {
        for (const auto &u : units_)
            if (divisible_by(u, p)) return true;
        return false;
    }

private:
    void add(const Integer &z) {
        if (z > 1) units_.insert(z);
    }
    std::set<Integer> units_;
};

/// normalize_primitive, recording the scaling constant.
inline AlgebraicPolynomial normalize_logged(const AlgebraicPolynomial &p, UnitLog *log) {
    if (p.is_zero()) return p;
    AlgebraicPolynomial q = normalize_primitive(p);
    if (log) log->note(p.leading_coefficient() / q.leading_coefficient());
    return q;
}

/// Pseudo-reduces p modulo the equations in `levels`, greatest leader first.
/// On the solution set of a system whose initials do not vanish the result
/// vanishes exactly where p does.
inline AlgebraicPolynomial reduce_by_equations(const AlgebraicPolynomial &p, const Levels &levels, UnitLog *log) {
    AlgebraicPolynomial r = normalize_logged(p, log);
    for (auto it = levels.rbegin(); it != levels.rend() && !r.is_constant(); ++it) {
        if (it->second.equations.size() != 1) continue;
        const auto &g = it->second.equations.front();
        const unsigned w = it->first;
        if (r.degree(w) < g.degree(w)) continue;
        AlgebraicPolynomial c = initial(g);
        if (c.is_constant() && log) log->note(c.constant_coefficient());
        r = normalize_logged(pseudo_remainder(r, g, w), log);
    }
    return r;
}

/// Sound but incomplete test that h vanishes nowhere on the solutions of
/// `levels` (assumed to have non-vanishing initials).
inline bool prove_nonzero(const AlgebraicPolynomial &h, const Levels &levels, UnitLog *log) {
    AlgebraicPolynomial r = reduce_by_equations(h, levels, log);
    if (r.is_zero()) return false;
    if (r.is_constant()) {
        if (log) log->note(r.constant_coefficient());
        return true;
    }
    const unsigned top = leader(r);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = levels.begin(); it != levels.end() && it->first <= top; ++it) {
            for (const auto &q : it->second.inequations) {
                if (auto d = try_divide(r, q)) {
                    r = *d;
                    changed = true;
                    if (r.is_constant()) {
                        if (log) log->note(r.constant_coefficient());
                        return true;
                    }
                } else if (try_divide(q, r)) {
                    return true;
                }
            }
        }
    }
    const unsigned v = leader(r);
    auto it = levels.find(v);
    if (it == levels.end() || it->second.equations.size() != 1) return false;
    AlgebraicPolynomial res = resultant(it->second.equations.front(), r, v);
    if (res.is_zero()) return false;
    return prove_nonzero(res, levels, log);
}

// ---------------------------------------------------------------------------
// simple systems

enum class Certainty { Proved, AssumedByCaller };

inline const char *to_string(Certainty c) { return c == Certainty::Proved ? "proved" : "assumed"; }

struct Certificate {
    Certainty weakly_triangular = Certainty::Proved;
    Certainty initials_nonvanishing = Certainty::Proved;
    Certainty squarefree = Certainty::Proved;
    Certainty ineqs_pairwise_coprime = Certainty::Proved;

    bool all_proved() const {
        return weakly_triangular == Certainty::Proved && initials_nonvanishing == Certainty::Proved &&
               squarefree == Certainty::Proved && ineqs_pairwise_coprime == Certainty::Proved;
    }
};

/// A sigma system together with the evidence that it is simple.
class SimpleSystem {
public:
    SimpleSystem() = default;
    SimpleSystem(SigmaSystem system, Certificate certificate, std::vector<std::string> warnings = {})
        : system_(std::move(system)), certificate_(certificate), warnings_(std::move(warnings)) {}

    const SigmaSystem &system() const { return system_; }
    const Certificate &certificate() const { return certificate_; }
    const std::vector<std::string> &warnings() const { return warnings_; }
    bool overridden() const { return overridden_; }
    bool certified() const { return overridden_ || certificate_.all_proved(); }

    /// Caller takes responsibility for every AssumedByCaller flag.
    SimpleSystem override_assumptions() const {
        SimpleSystem s = *this;
        s.overridden_ = true;
        return s;
    }

    friend bool operator==(const SimpleSystem &a, const SimpleSystem &b) { return a.system_ == b.system_; }

private:
    SigmaSystem system_;
    Certificate certificate_;
    std::vector<std::string> warnings_;
    bool overridden_ = false;
};

/// Checks the simple-system conditions. Weak triangularity is decided
/// syntactically; the semantic conditions are proved where possible and
/// otherwise flagged AssumedByCaller with a warning.
inline SimpleSystem validate_simple(const SigmaSystem &s, UnitLog *log = nullptr) {
    const Ranking &rk = s.ranking();
    Levels all = partition_by_leader(s);
    Certificate cert;
    std::vector<std::string> warnings;
    for (const auto &[v, b] : all) {
        if (b.equations.size() > 1)
            throw NotWeaklyTriangular("two equations with leader " + rk.name(v));
        if (b.equations.size() == 1 && (!b.inequations.empty() || b.cofinite))
            throw NotWeaklyTriangular("equation and inequations share the leader " + rk.name(v));
        if (b.cofinite && b.cofinite->relation == CofiniteRelation::Alone && !b.inequations.empty())
            throw InvalidSystem("cofinite family on " + rk.name(v) +
                                " next to finite inequations needs 'disjoint' or 'subsumes'");
    }
    Levels lower;
    for (const auto &[v, b] : all) {
        std::vector<AlgebraicPolynomial> members = b.equations;
        members.insert(members.end(), b.inequations.begin(), b.inequations.end());
        for (const auto &p : members) {
            if (!prove_nonzero(initial(p), lower, log)) {
                cert.initials_nonvanishing = Certainty::AssumedByCaller;
                warnings.push_back("initial of " + to_string(p, rk) + " not proved nonvanishing");
            }
            if (p.degree(v) >= 2) {
                AlgebraicPolynomial disc = resultant(p, p.derivative(v), v);
                if (disc.is_zero() || !prove_nonzero(disc, lower, log)) {
                    cert.squarefree = Certainty::AssumedByCaller;
                    warnings.push_back("square-freeness of " + to_string(p, rk) + " not proved");
                }
            }
        }
        for (std::size_t i = 0; i < b.inequations.size(); ++i) {
            for (std::size_t j = i + 1; j < b.inequations.size(); ++j) {
                const auto *a = &b.inequations[i];
                const auto *c = &b.inequations[j];
                if (a->degree(v) < c->degree(v)) std::swap(a, c);
                AlgebraicPolynomial res = resultant(*a, *c, v);
                if (res.is_zero() || !prove_nonzero(res, lower, log)) {
                    cert.ineqs_pairwise_coprime = Certainty::AssumedByCaller;
                    warnings.push_back("inequations " + to_string(*a, rk) + " and " + to_string(*c, rk) +
                                       " not proved coprime");
                }
            }
        }
        lower[v] = b;
    }
    return SimpleSystem(s, cert, std::move(warnings));
}

/// Product formula: an equation leader contributes its degree, finitely many
/// inequations oo minus their degree sum, a countable family oo - N0, a free
/// variable oo.
inline CountingPolynomial count_simple(const SimpleSystem &simple) {
    if (!simple.certified())
        throw UncertifiedSystem("system is not certified simple; override the assumptions to count it");
    const SigmaSystem &s = simple.system();
    Levels levels = partition_by_leader(s);
    CountingPolynomial result(1);
    for (unsigned v = 0; v < s.ranking().size(); ++v) {
        auto it = levels.find(v);
        CountingPolynomial tau = CountingPolynomial::infinity();
        if (it != levels.end()) {
            const LeaderBucket &b = it->second;
            if (!b.equations.empty()) {
                tau = CountingPolynomial(static_cast<long>(b.equations.front().degree(v)));
            } else {
                long excluded = 0;
                for (const auto &q : b.inequations) excluded += q.degree(v);
                if (b.cofinite) {
                    tau -= CountingPolynomial::aleph0();
                    if (b.cofinite->relation == CofiniteRelation::Subsumes) excluded = 0;
                }
                tau -= CountingPolynomial(excluded);
            }
        }
        result *= tau;
    }
    return result;
}

struct LeadingData {
    unsigned degree = 0;
    CountingPolynomial::AlephPart coefficient;
};

inline LeadingData leading_data(const CountingPolynomial &c) {
    return LeadingData{c.degree(), c.leading_coefficient()};
}

// ---------------------------------------------------------------------------
// text format

namespace detail {

inline std::string strip_comment(const std::string &line) {
    const std::size_t hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

inline std::vector<std::string> split_words(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

/// Splits "keyword rest" returning the keyword and the column where the rest
/// begins.
inline std::pair<std::string, std::size_t> keyword(const std::string &line) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {"", 0};
    std::size_t e = line.find_first_of(" \t\r", b);
    if (e == std::string::npos) e = line.size();
    std::size_t rest = line.find_first_not_of(" \t\r", e);
    return {line.substr(b, e - b), rest == std::string::npos ? line.size() : rest};
}

inline std::vector<std::string> ranking_names(const std::string &rest) {
    std::string t = rest;
    int depth = 0;
    for (char &c : t) {
        depth += (c == '[') - (c == ']');
        if (c == '<' || (c == ',' && depth == 0)) c = ' ';
    }
    return split_words(t);
}

} // namespace detail

/// Parses the system format:
///   vars x y        (x < y; `vars x < y` is accepted too)
///   eq <poly>
///   ineq <poly>
///   cofinite <var> [disjoint|subsumes] [description]
inline SigmaSystem parse_system(const std::string &text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::optional<Ranking> ranking;
    std::vector<AlgebraicPolynomial> eqs, ineqs;
    std::vector<CofiniteMarker> markers;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        auto [kw, rest_at] = detail::keyword(line);
        if (kw.empty()) continue;
        const std::string rest = line.substr(rest_at);
        if (kw == "vars") {
            if (ranking) throw ParseError("duplicate 'vars' line", lineno, 1);
            try {
                ranking = Ranking(detail::ranking_names(rest));
            } catch (const InvalidSystem &e) {
                throw ParseError(e.what(), lineno, rest_at + 1);
            }
            continue;
        }
        if (!ranking) throw ParseError("'vars' must come first", lineno, 1);
        if (kw == "eq" || kw == "ineq") {
            AlgebraicPolynomial p = parse_polynomial(rest, *ranking, lineno, rest_at);
            (kw == "eq" ? eqs : ineqs).push_back(std::move(p));
        } else if (kw == "cofinite") {
            auto words = detail::split_words(rest);
            if (words.empty()) throw ParseError("cofinite needs a variable", lineno, rest_at + 1);
            auto v = ranking->index_of(words[0]);
            if (!v) throw ParseError("unknown variable '" + words[0] + "'", lineno, rest_at + 1);
            CofiniteMarker m;
            m.variable = *v;
            std::size_t first_desc = 1;
            if (words.size() > 1 && (words[1] == "disjoint" || words[1] == "subsumes")) {
                m.relation = words[1] == "disjoint" ? CofiniteRelation::Disjoint : CofiniteRelation::Subsumes;
                first_desc = 2;
            }
            for (std::size_t i = first_desc; i < words.size(); ++i)
                m.description += (m.description.empty() ? "" : " ") + words[i];
            markers.push_back(std::move(m));
        } else {
            throw ParseError("unknown keyword '" + kw + "'", lineno, line.find(kw) + 1);
        }
    }
    if (!ranking) throw ParseError("missing 'vars' line", lineno + 1, 1);
    return SigmaSystem(*ranking, std::move(eqs), std::move(ineqs), std::move(markers));
}

inline std::string render_system(const SigmaSystem &s) {
    std::string out = "vars";
    for (const auto &n : s.ranking().names()) out += " " + n;
    out += "\n";
    for (const auto &p : s.equations()) out += "eq " + to_string(p, s.ranking()) + "\n";
    for (const auto &p : s.inequations()) out += "ineq " + to_string(p, s.ranking()) + "\n";
    for (const auto &m : s.cofinite()) {
        out += "cofinite " + s.ranking().name(m.variable);
        if (m.relation == CofiniteRelation::Disjoint) out += " disjoint";
        if (m.relation == CofiniteRelation::Subsumes) out += " subsumes";
        if (!m.description.empty()) out += " " + m.description;
        out += "\n";
    }
    return out;
}

} // namespace countdiff

#endif // COUNTDIFF_SIGMA_SYSTEM_HPP
