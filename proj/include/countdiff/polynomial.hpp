#ifndef COUNTDIFF_POLYNOMIAL_HPP
#define COUNTDIFF_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "number.hpp"

namespace countdiff {

/// Sparse power product: (variable, exponent) pairs sorted by variable in
/// decreasing rank, exponents strictly positive.
template <class Var> using Monomial = std::vector<std::pair<Var, unsigned>>;

/// Lexicographic comparison with the highest ranked variable most
/// significant. This is the canonical term order of every polynomial.
template <class Var> bool monomial_less(const Monomial<Var> &a, const Monomial<Var> &b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].first < b[i].first) return true;
        if (b[i].first < a[i].first) return false;
        if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
}

template <class Var> Monomial<Var> monomial_mul(const Monomial<Var> &a, const Monomial<Var> &b) {
    Monomial<Var> r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (b[j].first < a[i].first) {
            r.push_back(a[i++]);
        } else if (a[i].first < b[j].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

/// Quotient a / b if b divides a.
template <class Var>
std::optional<Monomial<Var>> monomial_div(const Monomial<Var> &a, const Monomial<Var> &b) {
    Monomial<Var> r;
    std::size_t i = 0;
    for (const auto &[v, e] : b) {
        while (i < a.size() && v < a[i].first) r.push_back(a[i++]);
        if (i == a.size() || a[i].first < v || a[i].second < e) return std::nullopt;
        if (a[i].second > e) r.emplace_back(v, a[i].second - e);
        ++i;
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    return r;
}

template <class Var> unsigned monomial_degree(const Monomial<Var> &m, const Var &v) {
    for (const auto &[w, e] : m) {
        if (w == v) return e;
        if (w < v) break;
    }
    return 0;
}

template <class Var> unsigned monomial_total_degree(const Monomial<Var> &m) {
    unsigned d = 0;
    for (const auto &entry : m) d += entry.second;
    return d;
}

/// Sparse multivariate polynomial with exact coefficients. `Var` must be
/// totally ordered by the ranking (operator<); `Coeff` must be a field with a
/// `CoefficientTraits` specialization. Values are immutable in spirit: every
/// operation returns a new polynomial and stored terms are never zero.
template <class Var, class Coeff> class Polynomial {
public:
    using variable_type = Var;
    using coefficient_type = Coeff;
    using monomial_type = Monomial<Var>;
    using traits = CoefficientTraits<Coeff>;

    struct Descending {
        bool operator()(const monomial_type &a, const monomial_type &b) const {
            return monomial_less(b, a);
        }
    };
    using term_map = std::map<monomial_type, Coeff, Descending>;

    Polynomial() = default;
    Polynomial(const Coeff &c) { // NOLINT: constants convert implicitly
        if (!traits::is_zero(c)) terms_.emplace(monomial_type{}, c);
    }
    Polynomial(long c) : Polynomial(Coeff(traits::from_rational(Rational(c)))) {} // NOLINT

    static Polynomial variable(const Var &v, unsigned exponent = 1) {
        Polynomial p;
        if (exponent == 0) {
            p.terms_.emplace(monomial_type{}, traits::one());
        } else {
            p.terms_.emplace(monomial_type{{v, exponent}}, traits::one());
        }
        return p;
    }

    static Polynomial term(const Coeff &c, monomial_type m) {
        Polynomial p;
        p.add_term(std::move(m), c);
        return p;
    }

    const term_map &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    /// Coefficient of the empty monomial.
    Coeff constant_coefficient() const {
        if (terms_.empty()) return traits::zero();
        auto it = terms_.rbegin();
        return it->first.empty() ? it->second : traits::zero();
    }

    const Coeff &leading_coefficient() const { return terms_.begin()->second; }
    const monomial_type &leading_monomial() const { return terms_.begin()->first; }

    /// Greatest variable occurring, if any. In the canonical order this is the
    /// first variable of the leading monomial.
    std::optional<Var> greatest_variable() const {
        if (is_constant()) return std::nullopt;
        return terms_.begin()->first.front().first;
    }

    unsigned degree(const Var &v) const {
        unsigned d = 0;
        for (const auto &[m, c] : terms_) d = std::max(d, monomial_degree(m, v));
        return d;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto &[m, c] : terms_) d = std::max(d, monomial_total_degree(m));
        return d;
    }

    std::set<Var> variables() const {
        std::set<Var> vs;
        for (const auto &[m, c] : terms_)
            for (const auto &entry : m) vs.insert(entry.first);
        return vs;
    }

    bool contains(const Var &v) const {
        for (const auto &[m, c] : terms_)
            if (monomial_degree(m, v) > 0) return true;
        return false;
    }

    /// Coefficient of v^k, viewing the polynomial as univariate in v.
    Polynomial coefficient(const Var &v, unsigned k) const {
        Polynomial r;
        for (const auto &[m, c] : terms_) {
            if (monomial_degree(m, v) != k) continue;
            monomial_type rest;
            for (const auto &entry : m)
                if (!(entry.first == v)) rest.push_back(entry);
            r.add_term(std::move(rest), c);
        }
        return r;
    }

    /// All coefficients with respect to v, keyed by degree.
    std::map<unsigned, Polynomial> coefficients(const Var &v) const {
        std::map<unsigned, Polynomial> out;
        for (const auto &[m, c] : terms_) {
            monomial_type rest;
            unsigned k = 0;
            for (const auto &entry : m) {
                if (entry.first == v) {
                    k = entry.second;
                } else {
                    rest.push_back(entry);
                }
            }
            out[k].add_term(std::move(rest), c);
        }
        return out;
    }

    void add_term(monomial_type m, const Coeff &c) {
        if (traits::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), c);
            return;
        }
        it->second += c;
        if (traits::is_zero(it->second)) terms_.erase(it);
    }

    Polynomial &operator+=(const Polynomial &o) {
        for (const auto &[m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o) {
        for (const auto &[m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial &operator*=(const Polynomial &o) {
        *this = *this * o;
        return *this;
    }

    Polynomial operator-() const {
        Polynomial r;
        for (const auto &[m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
        return r;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        Polynomial r;
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                Coeff c = ca * cb;
                r.add_term(monomial_mul(ma, mb), c);
            }
        }
        return r;
    }

    Polynomial scaled(const Coeff &s) const {
        if (traits::is_zero(s)) return {};
        Polynomial r;
        for (const auto &[m, c] : terms_) {
            Coeff t = c * s;
            r.terms_.emplace_hint(r.terms_.end(), m, t);
        }
        return r;
    }

    Polynomial times_monomial(const monomial_type &mono) const {
        Polynomial r;
        for (const auto &[m, c] : terms_) r.terms_.emplace(monomial_mul(m, mono), c);
        return r;
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        for (; i != a.terms_.end(); ++i, ++j) {
            if (i->first != j->first || !(i->second == j->second)) return false;
        }
        return true;
    }
    friend bool operator!=(const Polynomial &a, const Polynomial &b) { return !(a == b); }

    /// Canonical total order on polynomials: compare term by term from the
    /// leading term; used to sort systems deterministically.
    friend bool canonical_less(const Polynomial &a, const Polynomial &b,
                               const std::function<bool(const Coeff &, const Coeff &)> &cless) {
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
            if (i->first != j->first) return monomial_less(i->first, j->first);
            if (!(i->second == j->second)) return cless(i->second, j->second);
        }
        return i == a.terms_.end() && j != b.terms_.end();
    }

    /// Formal partial derivative with respect to v.
    Polynomial derivative(const Var &v) const {
        Polynomial r;
        for (const auto &[m, c] : terms_) {
            monomial_type nm;
            unsigned e = 0;
            for (const auto &entry : m) {
                if (entry.first == v) {
                    e = entry.second;
                    if (e > 1) nm.emplace_back(v, e - 1);
                } else {
                    nm.push_back(entry);
                }
            }
            if (e == 0) continue;
            Coeff t = c * traits::from_rational(Rational(static_cast<long>(e)));
            r.add_term(std::move(nm), t);
        }
        return r;
    }

    template <class F> auto map_coefficients(F f) const {
        using NewCoeff = std::decay_t<decltype(f(std::declval<const Coeff &>()))>;
        Polynomial<Var, NewCoeff> r;
        for (const auto &[m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

    /// Evaluates a ring homomorphism given by images of variables and
    /// coefficients. `var_image(v)` and `coeff_image(c)` must return values of
    /// the target polynomial type.
    template <class Target, class VarImage, class CoeffImage>
    Target evaluate(VarImage var_image, CoeffImage coeff_image) const {
        Target r;
        std::map<Var, std::vector<Target>> powers;
        for (const auto &[m, c] : terms_) {
            Target t = coeff_image(c);
            for (const auto &[v, e] : m) {
                auto &pw = powers[v];
                if (pw.empty()) pw.push_back(var_image(v));
                while (pw.size() < e) pw.push_back(pw.back() * pw.front());
                t = t * pw[e - 1];
            }
            r += t;
        }
        return r;
    }

    /// Replaces v by `value`.
    Polynomial substitute(const Var &v, const Polynomial &value) const {
        return evaluate<Polynomial>(
            [&](const Var &w) { return w == v ? value : Polynomial::variable(w); },
            [](const Coeff &c) { return Polynomial(c); });
    }

private:
    term_map terms_;
};

template <class Var, class Coeff>
Polynomial<Var, Coeff> pow(const Polynomial<Var, Coeff> &p, unsigned e) {
    Polynomial<Var, Coeff> r(CoefficientTraits<Coeff>::one());
    Polynomial<Var, Coeff> b = p;
    while (e != 0) {
        if (e & 1U) r *= b;
        e >>= 1U;
        if (e != 0) b = b * b;
    }
    return r;
}

/// Leader (greatest variable) of a nonconstant polynomial.
template <class Var, class Coeff> Var leader(const Polynomial<Var, Coeff> &p) {
    auto v = p.greatest_variable();
    if (!v) throw ConstantPolynomial("polynomial has no ranked variable");
    return *v;
}

/// Coefficient of the highest power of the leader.
template <class Var, class Coeff>
Polynomial<Var, Coeff> initial(const Polynomial<Var, Coeff> &p) {
    Var v = leader(p);
    return p.coefficient(v, p.degree(v));
}

/// Partial derivative with respect to the leader.
template <class Var, class Coeff>
Polynomial<Var, Coeff> separant(const Polynomial<Var, Coeff> &p) {
    return p.derivative(leader(p));
}

/// p minus its leading part ini(p)*ld(p)^d.
template <class Var, class Coeff> Polynomial<Var, Coeff> tail(const Polynomial<Var, Coeff> &p) {
    Var v = leader(p);
    const unsigned d = p.degree(v);
    Polynomial<Var, Coeff> r;
    for (const auto &[m, c] : p.terms())
        if (monomial_degree(m, v) != d) r.add_term(m, c);
    return r;
}

/// Canonical string rendering. `name(v)` names variables; `coeff(c, negative)`
/// renders |c| (setting `negative` when c < 0) and reports via `atomic`
/// whether it can be followed by "*monomial" without parentheses.
struct CoefficientText {
    std::string text;
    bool negative = false;
    bool is_one = false;
    bool atomic = true;
};

inline CoefficientText rational_text(const Rational &c) {
    CoefficientText t;
    t.negative = sgn(c) < 0;
    Rational a = abs(c);
    t.is_one = a == 1;
    t.text = a.get_str();
    return t;
}

template <class Var, class Coeff, class Namer, class CoeffText>
std::string render(const Polynomial<Var, Coeff> &p, Namer name, CoeffText coeff_text) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        CoefficientText ct = coeff_text(c);
        std::string body;
        if (m.empty()) {
            body = ct.text;
        } else {
            std::string mono;
            for (const auto &[v, e] : m) {
                if (!mono.empty()) mono += '*';
                mono += name(v);
                if (e > 1) mono += '^' + std::to_string(e);
            }
            if (ct.is_one) {
                body = mono;
            } else {
                body = (ct.atomic ? ct.text : "(" + ct.text + ")") + "*" + mono;
            }
        }
        if (first) {
            out += ct.negative ? "-" + body : body;
        } else {
            out += ct.negative ? " - " + body : " + " + body;
        }
        first = false;
    }
    return out;
}

template <class Var, class Namer>
std::string render(const Polynomial<Var, Rational> &p, Namer name) {
    return render(p, name, rational_text);
}

} // namespace countdiff

#endif // COUNTDIFF_POLYNOMIAL_HPP
