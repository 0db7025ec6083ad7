#ifndef COUNTDIFF_ALGEBRA_HPP
#define COUNTDIFF_ALGEBRA_HPP

#include <optional>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace countdiff {

template <class Var, class Coeff> struct PseudoDivision {
    Polynomial<Var, Coeff> quotient;
    Polynomial<Var, Coeff> remainder;
    /// ini(q)^exponent * p == quotient * q + remainder
    unsigned exponent = 0;
};

/// Pseudo-division of p by q with respect to v. The exponent is always
/// max(deg_v p - deg_v q + 1, 0), so the multiplier is predictable.
template <class Var, class Coeff>
PseudoDivision<Var, Coeff> pseudo_divide(const Polynomial<Var, Coeff> &p,
                                         const Polynomial<Var, Coeff> &q, const Var &v) {
    using P = Polynomial<Var, Coeff>;
    const unsigned n = q.degree(v);
    if (n == 0 || q.is_zero()) throw NotReducible("divisor has degree 0 in the given variable");
    const P lc = q.coefficient(v, n);
    PseudoDivision<Var, Coeff> out;
    const unsigned m = p.degree(v);
    const unsigned target = m >= n ? m - n + 1 : 0;
    P r = p;
    P s;
    unsigned e = 0;
    while (!r.is_zero()) {
        const unsigned d = r.degree(v);
        if (d < n) break;
        P t = r.coefficient(v, d) * P::variable(v, d - n);
        r = lc * r - t * q;
        s = lc * s + t;
        ++e;
    }
    if (e < target) {
        P f = pow(lc, target - e);
        r = f * r;
        s = f * s;
    }
    out.quotient = std::move(s);
    out.remainder = std::move(r);
    out.exponent = target;
    return out;
}

template <class Var, class Coeff>
Polynomial<Var, Coeff> pseudo_remainder(const Polynomial<Var, Coeff> &p,
                                        const Polynomial<Var, Coeff> &q, const Var &v) {
    return pseudo_divide(p, q, v).remainder;
}

/// Exact quotient a / b, or nothing if b does not divide a.
template <class Var, class Coeff>
std::optional<Polynomial<Var, Coeff>> try_divide(const Polynomial<Var, Coeff> &a,
                                                 const Polynomial<Var, Coeff> &b) {
    using P = Polynomial<Var, Coeff>;
    if (b.is_zero()) throw InexactDivision("division by zero polynomial");
    P q;
    P r = a;
    const auto &lm = b.leading_monomial();
    const Coeff &lc = b.leading_coefficient();
    while (!r.is_zero()) {
        auto mono = monomial_div(r.leading_monomial(), lm);
        if (!mono) return std::nullopt;
        Coeff c = r.leading_coefficient() / lc;
        P t = P::term(c, *mono);
        q += t;
        r -= t * b;
    }
    return q;
}

template <class Var, class Coeff>
Polynomial<Var, Coeff> divide_exact(const Polynomial<Var, Coeff> &a,
                                    const Polynomial<Var, Coeff> &b) {
    auto q = try_divide(a, b);
    if (!q) throw InexactDivision("polynomial division is not exact");
    return *q;
}

// ---------------------------------------------------------------------------
// gcd machinery over Q

template <class Var> using QPoly = Polynomial<Var, Rational>;

/// Scales p to integer coefficients with content 1 and positive leading
/// coefficient. Zero stays zero.
template <class Var> QPoly<Var> normalize_primitive(const QPoly<Var> &p) {
    if (p.is_zero()) return p;
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (const auto &[m, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational s(den_lcm, num_gcd);
    s.canonicalize();
    if (sgn(p.leading_coefficient()) < 0) s = -s;
    return p.scaled(s);
}

template <class Var> QPoly<Var> make_monic(const QPoly<Var> &p) {
    if (p.is_zero()) return p;
    return p.scaled(Rational(1) / p.leading_coefficient());
}

template <class Var> QPoly<Var> gcd(const QPoly<Var> &a, const QPoly<Var> &b);

/// Content of p as a polynomial in v: gcd of its v-coefficients.
template <class Var> QPoly<Var> content(const QPoly<Var> &p, const Var &v) {
    if (p.is_zero()) return p;
    QPoly<Var> g;
    for (const auto &[k, c] : p.coefficients(v)) {
        g = gcd(g, c);
        if (g.is_constant()) return QPoly<Var>(Rational(1));
    }
    return g;
}

template <class Var> QPoly<Var> primitive_part(const QPoly<Var> &p, const Var &v) {
    if (p.is_zero()) return p;
    return normalize_primitive(divide_exact(p, content(p, v)));
}

/// Greatest common divisor in Q[vars], normalized by `normalize_primitive`.
template <class Var> QPoly<Var> gcd(const QPoly<Var> &a, const QPoly<Var> &b) {
    using P = QPoly<Var>;
    if (a.is_zero()) return normalize_primitive(b);
    if (b.is_zero()) return normalize_primitive(a);
    if (a.is_constant() || b.is_constant()) return P(Rational(1));
    if (a == b) return normalize_primitive(a);
    const Var va = *a.greatest_variable();
    const Var vb = *b.greatest_variable();
    const Var v = va < vb ? vb : va;
    if (!a.contains(v)) return gcd(a, content(b, v));
    if (!b.contains(v)) return gcd(content(a, v), b);
    P ca = content(a, v);
    P cb = content(b, v);
    P g0 = gcd(ca, cb);
    P x = divide_exact(a, ca);
    P y = divide_exact(b, cb);
    if (x.degree(v) < y.degree(v)) std::swap(x, y);
    while (!y.is_zero()) {
        if (y.degree(v) == 0) {
            x = P(Rational(1));
            break;
        }
        P r = pseudo_remainder(x, y, v);
        x = std::move(y);
        y = r.is_zero() ? r : divide_exact(r, content(r, v));
    }
    if (!x.is_constant()) x = divide_exact(x, content(x, v));
    return normalize_primitive(g0 * x);
}

// ---------------------------------------------------------------------------
// subresultants

/// Fraction-free determinant (Bareiss). Entries must lie in an integral
/// domain where `divide_exact` applies.
template <class Var, class Coeff>
Polynomial<Var, Coeff> determinant(std::vector<std::vector<Polynomial<Var, Coeff>>> m) {
    using P = Polynomial<Var, Coeff>;
    const std::size_t n = m.size();
    if (n == 0) return P(CoefficientTraits<Coeff>::one());
    bool negate = false;
    P prev(CoefficientTraits<Coeff>::one());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero()) ++piv;
            if (piv == n) return P();
            std::swap(m[k], m[piv]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                P t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = divide_exact(t, prev);
            }
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

template <class Var, class Coeff> struct SubresultantData {
    /// S_j for j = 0..deg_v(q)-1 (index j), each of v-degree <= j.
    std::vector<Polynomial<Var, Coeff>> subresultants;
    /// principal coefficients psc_j = coefficient of v^j in S_j.
    std::vector<Polynomial<Var, Coeff>> principal;
};

/// Subresultants of p and q in v computed from Sylvester submatrices.
/// Requires deg_v p >= deg_v q >= 1.
template <class Var, class Coeff>
SubresultantData<Var, Coeff> subresultants(const Polynomial<Var, Coeff> &p,
                                           const Polynomial<Var, Coeff> &q, const Var &v) {
    using P = Polynomial<Var, Coeff>;
    const unsigned m = p.degree(v);
    const unsigned n = q.degree(v);
    auto pc = p.coefficients(v);
    auto qc = q.coefficients(v);
    auto coeff_of = [](const std::map<unsigned, P> &cs, int k) {
        auto it = cs.find(static_cast<unsigned>(k));
        return (k < 0 || it == cs.end()) ? P() : it->second;
    };
    SubresultantData<Var, Coeff> out;
    out.subresultants.resize(n);
    out.principal.resize(n);
    for (unsigned j = 0; j < n; ++j) {
        const unsigned rows = m + n - 2 * j;
        const unsigned top = m + n - j - 1; // highest power in the rows
        // row r represents v^{shift} * f; entry at power k is coeff(f, k - shift)
        std::vector<std::pair<const std::map<unsigned, P> *, unsigned>> row_def;
        for (unsigned s = n - j; s-- > 0;) row_def.emplace_back(&pc, s);
        for (unsigned s = m - j; s-- > 0;) row_def.emplace_back(&qc, s);
        P sj;
        for (unsigned i = 0; i <= j; ++i) {
            std::vector<std::vector<P>> mat(rows, std::vector<P>(rows));
            for (unsigned r = 0; r < rows; ++r) {
                const auto &[cs, shift] = row_def[r];
                for (unsigned c = 0; c + 1 < rows; ++c) {
                    const int power = static_cast<int>(top - c);
                    mat[r][c] = coeff_of(*cs, power - static_cast<int>(shift));
                }
                mat[r][rows - 1] = coeff_of(*cs, static_cast<int>(i) - static_cast<int>(shift));
            }
            P d = determinant(std::move(mat));
            if (i == j) out.principal[j] = d;
            sj += d * P::variable(v, i);
        }
        out.subresultants[j] = std::move(sj);
    }
    return out;
}

/// Subresultant sequence p, q, S_{n-1}, ..., S_0 (resultant last).
template <class Var, class Coeff>
std::vector<Polynomial<Var, Coeff>> subresultant_chain(const Polynomial<Var, Coeff> &p,
                                                       const Polynomial<Var, Coeff> &q,
                                                       const Var &v) {
    if (p.is_zero() || q.is_zero()) throw ZeroInput("subresultant chain of a zero polynomial");
    std::vector<Polynomial<Var, Coeff>> chain{p, q};
    const unsigned m = p.degree(v);
    const unsigned n = q.degree(v);
    if (m < n) throw ZeroInput("first argument must have degree at least that of the second");
    if (n == 0) {
        chain.push_back(pow(q, m));
        return chain;
    }
    auto data = subresultants(p, q, v);
    for (unsigned j = n; j-- > 0;) chain.push_back(data.subresultants[j]);
    return chain;
}

template <class Var, class Coeff>
Polynomial<Var, Coeff> resultant(const Polynomial<Var, Coeff> &p, const Polynomial<Var, Coeff> &q,
                                 const Var &v) {
    if (p.degree(v) < q.degree(v)) {
        auto r = resultant(q, p, v);
        return (p.degree(v) * q.degree(v)) % 2 == 1 ? -r : r;
    }
    return subresultant_chain(p, q, v).back();
}

/// p / gcd(p, dp/dv), keeping the content of p in v.
template <class Var> QPoly<Var> squarefree_part(const QPoly<Var> &p, const Var &v) {
    if (p.degree(v) == 0) throw ConstantInV("polynomial does not involve the variable");
    QPoly<Var> g = gcd(p, p.derivative(v));
    if (g.degree(v) == 0) return p;
    return divide_exact(p, primitive_part(g, v));
}

} // namespace countdiff

#endif // COUNTDIFF_ALGEBRA_HPP
