#ifndef COUNTDIFF_COUNTING_HPP
#define COUNTDIFF_COUNTING_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expression.hpp"
#include "polynomial.hpp"

namespace countdiff {

/// Element of Z[oo, N0]: map from oo-exponent to a polynomial in N0 (map from
/// N0-exponent to integer). No zero coefficients are stored.
class CountingPolynomial {
public:
    using AlephPart = std::map<unsigned, Integer>;
    using TermMap = std::map<unsigned, AlephPart>;

    CountingPolynomial() = default;
    CountingPolynomial(long c) { add_term(0, 0, Integer(c)); } // NOLINT
    CountingPolynomial(const Integer &c) { add_term(0, 0, c); } // NOLINT

    static CountingPolynomial infinity(unsigned k = 1) {
        CountingPolynomial p;
        p.add_term(k, 0, 1);
        return p;
    }
    static CountingPolynomial aleph0() {
        CountingPolynomial p;
        p.add_term(0, 1, 1);
        return p;
    }

    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool has_aleph() const {
        for (const auto &[e, part] : terms_)
            for (const auto &[a, c] : part)
                if (a > 0) return true;
        return false;
    }

    Integer coefficient(unsigned inf_exp, unsigned aleph_exp = 0) const {
        auto it = terms_.find(inf_exp);
        if (it == terms_.end()) return 0;
        auto jt = it->second.find(aleph_exp);
        return jt == it->second.end() ? Integer(0) : jt->second;
    }

    /// Degree in oo; throws ZeroPolynomial for 0.
    unsigned degree() const {
        if (terms_.empty()) throw ZeroPolynomial("the zero counting polynomial has no degree");
        return terms_.rbegin()->first;
    }
    const AlephPart &leading_coefficient() const {
        if (terms_.empty()) throw ZeroPolynomial("the zero counting polynomial has no leading coefficient");
        return terms_.rbegin()->second;
    }

    void add_term(unsigned inf_exp, unsigned aleph_exp, const Integer &c) {
        if (sgn(c) == 0) return;
        AlephPart &part = terms_[inf_exp];
        Integer &slot = part[aleph_exp];
        slot += c;
        if (sgn(slot) == 0) {
            part.erase(aleph_exp);
            if (part.empty()) terms_.erase(inf_exp);
        }
    }

    CountingPolynomial &operator+=(const CountingPolynomial &o) {
        for (const auto &[e, part] : o.terms_)
            for (const auto &[a, c] : part) add_term(e, a, c);
        return *this;
    }
    CountingPolynomial &operator-=(const CountingPolynomial &o) {
        for (const auto &[e, part] : o.terms_)
            for (const auto &[a, c] : part) add_term(e, a, -c);
        return *this;
    }
    CountingPolynomial operator-() const {
        CountingPolynomial r;
        r -= *this;
        return r;
    }
    friend CountingPolynomial operator+(CountingPolynomial a, const CountingPolynomial &b) { return a += b; }
    friend CountingPolynomial operator-(CountingPolynomial a, const CountingPolynomial &b) { return a -= b; }
    friend CountingPolynomial operator*(const CountingPolynomial &a, const CountingPolynomial &b) {
        CountingPolynomial r;
        for (const auto &[e1, p1] : a.terms_)
            for (const auto &[a1, c1] : p1)
                for (const auto &[e2, p2] : b.terms_)
                    for (const auto &[a2, c2] : p2) r.add_term(e1 + e2, a1 + a2, c1 * c2);
        return r;
    }
    CountingPolynomial &operator*=(const CountingPolynomial &o) { return *this = *this * o; }
    friend bool operator==(const CountingPolynomial &a, const CountingPolynomial &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const CountingPolynomial &a, const CountingPolynomial &b) { return !(a == b); }

    /// Value at oo = x; requires an N0-free polynomial.
    Integer evaluate(const Integer &x) const {
        if (has_aleph()) throw HasAleph("cannot evaluate a counting polynomial containing N0");
        Integer r = 0;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Integer t = it->second.at(0);
            Integer pw;
            mpz_pow_ui(pw.get_mpz_t(), x.get_mpz_t(), it->first);
            r += t * pw;
        }
        return r;
    }

    /// Substitutes N0 by the given counting polynomial.
    CountingPolynomial substitute_aleph(const CountingPolynomial &value) const {
        CountingPolynomial r;
        for (const auto &[e, part] : terms_) {
            for (const auto &[a, c] : part) {
                CountingPolynomial t = CountingPolynomial(c) * infinity(e);
                for (unsigned i = 0; i < a; ++i) t *= value;
                r += t;
            }
        }
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            for (auto jt = it->second.rbegin(); jt != it->second.rend(); ++jt) {
                std::string mono = power_text("oo", it->first);
                std::string al = power_text("N0", jt->first);
                if (!al.empty()) mono = mono.empty() ? al : mono + "*" + al;
                append_term(out, Rational(jt->second), mono);
            }
        }
        return out;
    }

    /// Appends "c*mono" with canonical sign handling.
    static void append_term(std::string &out, const Rational &c, const std::string &mono) {
        const bool neg = sgn(c) < 0;
        Rational a = abs(c);
        std::string body;
        if (mono.empty()) {
            body = a.get_str();
        } else if (a == 1) {
            body = mono;
        } else {
            body = a.get_str() + "*" + mono;
        }
        if (out.empty()) {
            out = neg ? "-" + body : body;
        } else {
            out += neg ? " - " + body : " + " + body;
        }
    }

    static std::string power_text(const std::string &base, unsigned e) {
        if (e == 0) return "";
        if (e == 1) return base;
        return base + "^" + std::to_string(e);
    }

private:
    TermMap terms_;
};

inline std::ostream &operator<<(std::ostream &os, const CountingPolynomial &p) { return os << p.to_string(); }

/// q1 < q2 eventually (for all large oo); both must be N0-free.
inline bool eventual_less(const CountingPolynomial &q1, const CountingPolynomial &q2) {
    if (q1.has_aleph() || q2.has_aleph()) throw HasAleph("eventual order is defined on N0-free polynomials only");
    CountingPolynomial d = q2 - q1;
    if (d.is_zero()) return false;
    return sgn(d.leading_coefficient().at(0)) > 0;
}

/// N0 replaced by k: the excluded countable set shrunk to k points.
inline CountingPolynomial upper_estimate(const CountingPolynomial &p, unsigned long k) {
    return p.substitute_aleph(CountingPolynomial(Integer(k)));
}

/// N0 replaced by oo - k: the excluded set enlarged to all but k points.
inline CountingPolynomial lower_estimate(const CountingPolynomial &p, unsigned long k) {
    return p.substitute_aleph(CountingPolynomial::infinity() - CountingPolynomial(Integer(k)));
}

enum class Decision { Equal, Distinct, Unknown };

inline const char *to_string(Decision d) {
    switch (d) {
    case Decision::Equal:
        return "Equal";
    case Decision::Distinct:
        return "Distinct";
    default:
        return "Unknown";
    }
}

struct SetDecision {
    Decision decision = Decision::Unknown;
    /// estimate parameters that separated the sets (Distinct with N0 only)
    std::optional<std::pair<unsigned, unsigned>> witness;
};

/// Decides Sol1 = Sol2 from counting polynomials, assuming Sol1 is contained
/// in Sol2. Never answers Equal when N0 occurs.
inline SetDecision decide_sets(const CountingPolynomial &c1, const CountingPolynomial &c2, unsigned K = 32) {
    SetDecision out;
    if (!c1.has_aleph() && !c2.has_aleph()) {
        out.decision = c1 == c2 ? Decision::Equal : Decision::Distinct;
        return out;
    }
    for (unsigned k1 = 0; k1 <= K; ++k1) {
        CountingPolynomial up = upper_estimate(c1, k1);
        for (unsigned k2 = 0; k2 <= K; ++k2) {
            if (eventual_less(up, lower_estimate(c2, k2))) {
                out.decision = Decision::Distinct;
                out.witness = std::make_pair(k1, k2);
                return out;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// polynomials in l

/// Variables of the coefficient ring Q[l, N0].
enum : unsigned { kEll = 0, kAleph = 1 };

using EllAlephPolynomial = Polynomial<unsigned, Rational>;

inline std::string ell_aleph_name(unsigned v) { return v == kEll ? "l" : "N0"; }

/// Polynomial in l with rational coefficients that is integer valued on the
/// naturals. Used for oo-exponents and dimension polynomials.
class ExponentPolynomial {
public:
    ExponentPolynomial() = default;
    ExponentPolynomial(long c) : coeffs_{Rational(c)} { trim(); } // NOLINT

    /// Builds from coefficients c0 + c1*l + ...; validates integer values at
    /// l = 0..degree.
    static ExponentPolynomial from_coefficients(std::vector<Rational> cs) {
        ExponentPolynomial e;
        e.coeffs_ = std::move(cs);
        e.trim();
        e.check_integer_valued();
        return e;
    }

    static ExponentPolynomial from_polynomial(const EllAlephPolynomial &p) {
        std::vector<Rational> cs(p.degree(kEll) + 1);
        for (const auto &[m, c] : p.terms()) {
            if (monomial_degree(m, static_cast<unsigned>(kAleph)) > 0)
                throw HasAleph("exponent polynomial must not contain N0");
            cs[monomial_degree(m, static_cast<unsigned>(kEll))] += c;
        }
        return from_coefficients(std::move(cs));
    }

    static ExponentPolynomial ell() { return from_coefficients({Rational(0), Rational(1)}); }

    const std::vector<Rational> &coefficients() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }

    Rational value(const Rational &x) const {
        Rational r = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
        return r;
    }

    Integer integer_value(long x) const {
        Rational v = value(Rational(x));
        if (!is_integer(v)) throw NotIntegerValued("exponent polynomial is not integer valued");
        return v.get_num();
    }

    EllAlephPolynomial to_polynomial() const {
        EllAlephPolynomial p;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            p += EllAlephPolynomial::variable(kEll, static_cast<unsigned>(i)).scaled(coeffs_[i]);
        return p;
    }

    friend ExponentPolynomial operator+(const ExponentPolynomial &a, const ExponentPolynomial &b) {
        ExponentPolynomial r;
        r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) r.coeffs_[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
        r.trim();
        return r;
    }
    friend ExponentPolynomial operator-(const ExponentPolynomial &a, const ExponentPolynomial &b) {
        return a + b.negated();
    }
    friend ExponentPolynomial operator*(const ExponentPolynomial &a, const ExponentPolynomial &b) {
        if (a.is_zero() || b.is_zero()) return {};
        ExponentPolynomial r;
        r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        r.trim();
        return r;
    }
    friend bool operator==(const ExponentPolynomial &a, const ExponentPolynomial &b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const ExponentPolynomial &a, const ExponentPolynomial &b) { return !(a == b); }

    ExponentPolynomial negated() const {
        ExponentPolynomial r = *this;
        for (auto &c : r.coeffs_) c = -c;
        return r;
    }

    /// Sign of a - b for all large l: -1, 0 or 1.
    friend int eventual_compare(const ExponentPolynomial &a, const ExponentPolynomial &b) {
        ExponentPolynomial d = a - b;
        if (d.is_zero()) return 0;
        return sgn(d.coeffs_.back());
    }

    std::string to_string() const { return render(to_polynomial(), ell_aleph_name); }

private:
    void trim() {
        while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
    }
    void check_integer_valued() const {
        for (int x = 0; x <= std::max(degree(), 0); ++x) {
            if (!is_integer(value(Rational(x))))
                throw NotIntegerValued("polynomial " + to_string() + " is not integer valued at l = " +
                                       std::to_string(x));
        }
    }

    std::vector<Rational> coeffs_;
};

// ---------------------------------------------------------------------------
// differential counting polynomials

/// Finite sum of c_i(l, N0) * oo^{e_i(l)} with pairwise distinct exponent
/// polynomials, terms sorted by eventual dominance of the exponents.
class DifferentialCountingPolynomial {
public:
    struct Term {
        EllAlephPolynomial coefficient;
        ExponentPolynomial exponent;
    };

    DifferentialCountingPolynomial() = default;
    DifferentialCountingPolynomial(long c) { add(EllAlephPolynomial(Rational(c)), ExponentPolynomial()); } // NOLINT

    static DifferentialCountingPolynomial term(const EllAlephPolynomial &c, const ExponentPolynomial &e) {
        DifferentialCountingPolynomial d;
        d.add(c, e);
        return d;
    }
    static DifferentialCountingPolynomial infinity_power(const ExponentPolynomial &e) {
        return term(EllAlephPolynomial(Rational(1)), e);
    }

    /// Embeds an l-free counting polynomial.
    static DifferentialCountingPolynomial from_counting(const CountingPolynomial &p) {
        DifferentialCountingPolynomial d;
        for (const auto &[e, part] : p.terms()) {
            EllAlephPolynomial c;
            for (const auto &[a, z] : part) c += EllAlephPolynomial::variable(kAleph, a).scaled(Rational(z));
            d.add(c, ExponentPolynomial(static_cast<long>(e)));
        }
        return d;
    }

    const std::vector<Term> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool has_aleph() const {
        for (const auto &t : terms_)
            if (t.coefficient.contains(kAleph)) return true;
        return false;
    }

    DifferentialCountingPolynomial &operator+=(const DifferentialCountingPolynomial &o) {
        for (const auto &t : o.terms_) add(t.coefficient, t.exponent);
        return *this;
    }
    DifferentialCountingPolynomial &operator-=(const DifferentialCountingPolynomial &o) {
        for (const auto &t : o.terms_) add(-t.coefficient, t.exponent);
        return *this;
    }
    DifferentialCountingPolynomial operator-() const {
        DifferentialCountingPolynomial r;
        r -= *this;
        return r;
    }
    friend DifferentialCountingPolynomial operator+(DifferentialCountingPolynomial a,
                                                    const DifferentialCountingPolynomial &b) {
        return a += b;
    }
    friend DifferentialCountingPolynomial operator-(DifferentialCountingPolynomial a,
                                                    const DifferentialCountingPolynomial &b) {
        return a -= b;
    }
    friend DifferentialCountingPolynomial operator*(const DifferentialCountingPolynomial &a,
                                                    const DifferentialCountingPolynomial &b) {
        DifferentialCountingPolynomial r;
        for (const auto &s : a.terms_)
            for (const auto &t : b.terms_) r.add(s.coefficient * t.coefficient, s.exponent + t.exponent);
        return r;
    }
    friend bool operator==(const DifferentialCountingPolynomial &a, const DifferentialCountingPolynomial &b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (a.terms_[i].exponent != b.terms_[i].exponent || a.terms_[i].coefficient != b.terms_[i].coefficient)
                return false;
        }
        return true;
    }
    friend bool operator!=(const DifferentialCountingPolynomial &a, const DifferentialCountingPolynomial &b) {
        return !(a == b);
    }

    /// Specializes l to `order`.
    CountingPolynomial evaluate(long order) const {
        CountingPolynomial r;
        const Rational x(order);
        for (const auto &t : terms_) {
            EllAlephPolynomial c = t.coefficient.substitute(kEll, EllAlephPolynomial(x));
            if (c.is_zero()) continue;
            Rational e = t.exponent.value(x);
            if (sgn(e) < 0) {
                throw NegativeExponent("exponent " + t.exponent.to_string() + " is negative at l = " +
                                       std::to_string(order));
            }
            if (!is_integer(e)) throw NotIntegerValued("exponent is not an integer at l = " + std::to_string(order));
            const unsigned ee = static_cast<unsigned>(e.get_num().get_ui());
            for (const auto &[m, q] : c.terms()) {
                if (!is_integer(q))
                    throw NotIntegerValued("coefficient is not an integer at l = " + std::to_string(order));
                r.add_term(ee, monomial_degree(m, static_cast<unsigned>(kAleph)), q.get_num());
            }
        }
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto &t : terms_) append(out, t);
        return out;
    }

private:
    void add(const EllAlephPolynomial &c, const ExponentPolynomial &e) {
        if (c.is_zero()) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e, [](const Term &t, const ExponentPolynomial &x) {
            return eventual_compare(t.exponent, x) > 0;
        });
        if (it != terms_.end() && it->exponent == e) {
            it->coefficient += c;
            if (it->coefficient.is_zero()) terms_.erase(it);
            return;
        }
        terms_.insert(it, Term{c, e});
    }

    static std::string infinity_text(const ExponentPolynomial &e) {
        if (e.is_zero()) return "";
        if (e.is_constant()) return CountingPolynomial::power_text("oo", static_cast<unsigned>(e.integer_value(0).get_ui()));
        if (e == ExponentPolynomial::ell()) return "oo^l";
        return "oo^(" + e.to_string() + ")";
    }

    static void append(std::string &out, const Term &t) {
        const std::string inf = infinity_text(t.exponent);
        if (!t.coefficient.contains(kEll) || inf.empty()) {
            // flatten into one printed term per coefficient monomial
            for (const auto &[m, q] : t.coefficient.terms()) {
                std::string mono;
                const unsigned ell_deg = monomial_degree(m, static_cast<unsigned>(kEll));
                const unsigned aleph_deg = monomial_degree(m, static_cast<unsigned>(kAleph));
                std::string lpart = CountingPolynomial::power_text("l", ell_deg);
                std::string apart = CountingPolynomial::power_text("N0", aleph_deg);
                for (const std::string *s : std::initializer_list<const std::string *>{&lpart, &inf, &apart}) {
                    if (s->empty()) continue;
                    mono = mono.empty() ? *s : mono + "*" + *s;
                }
                CountingPolynomial::append_term(out, q, mono);
            }
            return;
        }
        EllAlephPolynomial c = t.coefficient;
        bool neg = sgn(c.leading_coefficient()) < 0;
        if (neg) c = -c;
        std::string body;
        if (c.size() == 1) {
            std::string ct = render(c, ell_aleph_name);
            body = ct + "*" + inf;
        } else {
            body = "(" + render(c, ell_aleph_name) + ")*" + inf;
        }
        if (out.empty()) {
            out = neg ? "-" + body : body;
        } else {
            out += neg ? " - " + body : " + " + body;
        }
    }

    std::vector<Term> terms_;
};

inline std::ostream &operator<<(std::ostream &os, const DifferentialCountingPolynomial &p) {
    return os << p.to_string();
}

/// Sequence l -> counting polynomial: explicit values for l < L0 and a
/// symbolic tail valid for l >= L0.
class CountingSequence {
public:
    CountingSequence() = default;
    explicit CountingSequence(DifferentialCountingPolynomial tail) : tail_(std::move(tail)) {}
    CountingSequence(std::vector<CountingPolynomial> prefix, DifferentialCountingPolynomial tail)
        : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

    const std::vector<CountingPolynomial> &prefix() const { return prefix_; }
    const DifferentialCountingPolynomial &tail() const { return tail_; }
    std::size_t stabilization_order() const { return prefix_.size(); }

    CountingPolynomial value(long order) const {
        if (order >= 0 && static_cast<std::size_t>(order) < prefix_.size()) return prefix_[order];
        return tail_.evaluate(order);
    }

    /// Copy whose prefix is extended to `order` entries.
    CountingSequence extended(std::size_t order) const {
        CountingSequence r = *this;
        while (r.prefix_.size() < order) r.prefix_.push_back(tail_.evaluate(static_cast<long>(r.prefix_.size())));
        return r;
    }

    /// Drops trailing prefix entries that the tail already reproduces.
    CountingSequence minimal() const {
        CountingSequence r = *this;
        while (!r.prefix_.empty()) {
            const long l = static_cast<long>(r.prefix_.size()) - 1;
            std::optional<CountingPolynomial> v;
            try {
                v = tail_.evaluate(l);
            } catch (const Error &) {
            }
            if (!v || *v != r.prefix_.back()) break;
            r.prefix_.pop_back();
        }
        return r;
    }

    friend bool operator==(const CountingSequence &a, const CountingSequence &b) {
        return a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
    }

    std::string to_string() const {
        if (prefix_.empty()) return tail_.to_string();
        std::string out;
        for (std::size_t i = 0; i < prefix_.size(); ++i) {
            out += "l=" + std::to_string(i) + ": " + prefix_[i].to_string() + "; ";
        }
        out += "l>=" + std::to_string(prefix_.size()) + ": " + tail_.to_string();
        return out;
    }

private:
    std::vector<CountingPolynomial> prefix_;
    DifferentialCountingPolynomial tail_;
};

/// Pointwise sum; the result stabilizes at the largest input stabilization
/// order.
inline CountingSequence sum_sequences(const std::vector<CountingSequence> &parts) {
    std::size_t order = 0;
    for (const auto &s : parts) order = std::max(order, s.stabilization_order());
    std::vector<CountingPolynomial> prefix(order);
    DifferentialCountingPolynomial tail;
    for (const auto &s : parts) {
        CountingSequence e = s.extended(order);
        for (std::size_t i = 0; i < order; ++i) prefix[i] += e.prefix()[i];
        tail += s.tail();
    }
    return CountingSequence(std::move(prefix), std::move(tail)).minimal();
}

// ---------------------------------------------------------------------------
// parsing of counting text

namespace detail {

inline EllAlephPolynomial parse_ell_aleph(const Expr &e) {
    using P = EllAlephPolynomial;
    switch (e.kind) {
    case Expr::Kind::Number:
        return P(e.value);
    case Expr::Kind::Symbol:
        if (e.name == "l") return P::variable(kEll);
        if (e.name == "N0") return P::variable(kAleph);
        e.fail("unexpected symbol '" + e.name + "' in coefficient");
    case Expr::Kind::Add:
        return parse_ell_aleph(e.arg(0)) + parse_ell_aleph(e.arg(1));
    case Expr::Kind::Sub:
        return parse_ell_aleph(e.arg(0)) - parse_ell_aleph(e.arg(1));
    case Expr::Kind::Mul:
        return parse_ell_aleph(e.arg(0)) * parse_ell_aleph(e.arg(1));
    case Expr::Kind::Neg:
        return -parse_ell_aleph(e.arg(0));
    case Expr::Kind::Div: {
        P d = parse_ell_aleph(e.arg(1));
        if (!d.is_constant() || d.is_zero()) e.fail("division by a non-constant or zero");
        return parse_ell_aleph(e.arg(0)).scaled(Rational(1) / d.constant_coefficient());
    }
    case Expr::Kind::Pow: {
        RationalContext ctx;
        return pow(parse_ell_aleph(e.arg(0)), ctx.exponent(e.arg(1)));
    }
    default:
        e.fail("unexpected expression in coefficient");
    }
}

inline DifferentialCountingPolynomial parse_dcp(const Expr &e) {
    using D = DifferentialCountingPolynomial;
    switch (e.kind) {
    case Expr::Kind::Number:
        return D::term(EllAlephPolynomial(e.value), ExponentPolynomial());
    case Expr::Kind::Symbol:
        if (e.name == "oo") return D::infinity_power(ExponentPolynomial(1));
        return D::term(parse_ell_aleph(e), ExponentPolynomial());
    case Expr::Kind::Add:
        return parse_dcp(e.arg(0)) + parse_dcp(e.arg(1));
    case Expr::Kind::Sub:
        return parse_dcp(e.arg(0)) - parse_dcp(e.arg(1));
    case Expr::Kind::Mul:
        return parse_dcp(e.arg(0)) * parse_dcp(e.arg(1));
    case Expr::Kind::Neg:
        return -parse_dcp(e.arg(0));
    case Expr::Kind::Div: {
        EllAlephPolynomial d = parse_ell_aleph(e.arg(1));
        if (!d.is_constant() || d.is_zero()) e.fail("division by a non-constant or zero");
        return parse_dcp(e.arg(0)) * D::term(EllAlephPolynomial(Rational(1) / d.constant_coefficient()), {});
    }
    case Expr::Kind::Pow: {
        const Expr &base = e.arg(0);
        if (base.kind == Expr::Kind::Symbol && base.name == "oo")
            return D::infinity_power(ExponentPolynomial::from_polynomial(parse_ell_aleph(e.arg(1))));
        RationalContext ctx;
        const unsigned k = ctx.exponent(e.arg(1));
        D b = parse_dcp(base);
        D r(1);
        for (unsigned i = 0; i < k; ++i) r = r * b;
        return r;
    }
    default:
        e.fail("unexpected expression in counting polynomial");
    }
}

} // namespace detail

inline DifferentialCountingPolynomial parse_differential_counting(const std::string &text, std::size_t line = 1,
                                                                  std::size_t column_offset = 0) {
    return detail::parse_dcp(*parse_expression(text, line, column_offset));
}

inline CountingPolynomial parse_counting(const std::string &text, std::size_t line = 1,
                                         std::size_t column_offset = 0) {
    DifferentialCountingPolynomial d = parse_differential_counting(text, line, column_offset);
    for (const auto &t : d.terms()) {
        if (t.coefficient.contains(kEll) || !t.exponent.is_constant())
            throw ParseError("counting polynomial must not depend on l", line, column_offset + 1);
    }
    return d.evaluate(0);
}

/// Parses "expr" or "l=0: expr; l=1: expr; l>=2: expr".
inline CountingSequence parse_sequence(const std::string &text, std::size_t line = 1) {
    std::vector<CountingPolynomial> prefix;
    std::optional<DifferentialCountingPolynomial> tail;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        std::string part = text.substr(start, end - start);
        std::size_t offset = start;
        const std::size_t first = part.find_first_not_of(" \t");
        if (first == std::string::npos) {
            if (end == text.size()) break;
            throw ParseError("empty sequence entry", line, start + 1);
        }
        if (tail) throw ParseError("entries after the tail", line, start + first + 1);
        const std::size_t colon = part.find(':');
        if (colon == std::string::npos) {
            if (!prefix.empty()) throw ParseError("expected 'l>=K:' before the tail", line, start + first + 1);
            tail = parse_differential_counting(part, line, offset);
        } else {
            std::string head = part.substr(0, colon);
            head.erase(std::remove_if(head.begin(), head.end(), ::isspace), head.end());
            std::string body = part.substr(colon + 1);
            if (head.rfind("l>=", 0) == 0) {
                if (std::stoul(head.substr(3)) != prefix.size())
                    throw ParseError("tail must start right after the listed orders", line, start + first + 1);
                tail = parse_differential_counting(body, line, offset + colon + 1);
            } else if (head.rfind("l=", 0) == 0) {
                if (std::stoul(head.substr(2)) != prefix.size())
                    throw ParseError("orders must be listed consecutively from 0", line, start + first + 1);
                prefix.push_back(parse_counting(body, line, offset + colon + 1));
            } else {
                throw ParseError("expected 'l=K:' or 'l>=K:'", line, start + first + 1);
            }
        }
        start = end + 1;
    }
    if (!tail) throw ParseError("sequence has no tail", line, text.size() + 1);
    return CountingSequence(std::move(prefix), std::move(*tail));
}

} // namespace countdiff

#endif // COUNTDIFF_COUNTING_HPP
