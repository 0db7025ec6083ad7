#ifndef COUNTDIFF_DIMENSION_HPP
#define COUNTDIFF_DIMENSION_HPP

#include <string>
#include <vector>

#include "counting.hpp"
#include "diffalg.hpp"
#include "multi_index.hpp"

namespace countdiff {

/// Inclusion-exclusion enumerates every subset of one function's leaders.
inline constexpr std::size_t kMaxLeadersPerFunction = 16;

/// Leaders of a differential system: per function, the minimal generators of
/// the cone of principal derivatives.
class LeaderSet {
public:
    LeaderSet(std::size_t m, std::size_t n) : n_(n), gens_(m) {}

    static LeaderSet of(const DifferentialSystem &s) {
        LeaderSet L(s.ranking.function_count(), s.ranking.base_count());
        for (const auto &p : s.equations) {
            if (p.is_constant()) throw NotSimple("constant equation " + to_string(p, s.ranking));
            const DiffVar v = leader(p);
            L.add(v.function, v.mu);
        }
        for (const auto &v : s.leaders) L.add(v.function, v.mu);
        return L;
    }

    /// Adds a leader; non-minimal generators are absorbed.
    void add(std::size_t j, MultiIndex mu) {
        if (mu.size() != n_) throw InvalidSystem("leader " + index_text(mu) + " has the wrong length");
        auto &g = gens_.at(j);
        g.push_back(std::move(mu));
        g = minimal_generators(std::move(g));
    }

    std::size_t function_count() const { return gens_.size(); }
    std::size_t base_count() const { return n_; }
    const std::vector<MultiIndex> &generators(std::size_t j) const { return gens_.at(j); }

    bool is_principal(std::size_t j, const MultiIndex &mu) const {
        for (const auto &g : gens_.at(j))
            if (in_cone(g, mu)) return true;
        return false;
    }

    friend bool operator==(const LeaderSet &a, const LeaderSet &b) { return a.n_ == b.n_ && a.gens_ == b.gens_; }

private:
    std::size_t n_;
    std::vector<std::vector<MultiIndex>> gens_;
};

namespace detail {

/// Signed orders of the componentwise maxima of all nonempty leader subsets:
/// (order, +1 for odd subsets, -1 for even).
inline std::vector<std::pair<unsigned, int>> inclusion_exclusion_terms(const std::vector<MultiIndex> &gens) {
    if (gens.size() > kMaxLeadersPerFunction)
        throw LeaderSetTooLarge(std::to_string(gens.size()) + " leaders for one function, at most " +
                                std::to_string(kMaxLeadersPerFunction) + " supported");
    std::vector<std::pair<unsigned, int>> out;
    const std::size_t k = gens.size();
    for (unsigned long mask = 1; mask < (1UL << k); ++mask) {
        MultiIndex w;
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (1UL << i))) continue;
            w = w.empty() ? gens[i] : componentwise_max(w, gens[i]);
            ++bits;
        }
        out.emplace_back(order(w), bits % 2 == 1 ? 1 : -1);
    }
    return out;
}

/// C(l - a + n, n), the number of multi-indices of order <= l - a.
inline Integer cone_size(long l, unsigned a, std::size_t n) {
    if (l < static_cast<long>(a)) return 0;
    return binomial(static_cast<unsigned long>(l - a) + n, n);
}

/// C(l - a + n, n) as a polynomial in l.
inline ExponentPolynomial cone_polynomial(unsigned a, std::size_t n) {
    EllAlephPolynomial r(Rational(1));
    const EllAlephPolynomial l = EllAlephPolynomial::variable(kEll);
    for (std::size_t i = 1; i <= n; ++i) {
        const Rational inv = Rational(1) / Rational(static_cast<long>(i));
        r *= (l + EllAlephPolynomial(Rational(static_cast<long>(i) - static_cast<long>(a)))).scaled(inv);
    }
    return ExponentPolynomial::from_polynomial(r);
}

} // namespace detail

/// Number of parametric derivatives of order <= l.
inline unsigned long dimension_function(const LeaderSet &L, unsigned long l) {
    const std::size_t n = L.base_count();
    const long ll = static_cast<long>(l);
    Integer total = 0;
    for (std::size_t j = 0; j < L.function_count(); ++j) {
        total += detail::cone_size(ll, 0, n);
        for (const auto &[a, sign] : detail::inclusion_exclusion_terms(L.generators(j)))
            total -= sign * detail::cone_size(ll, a, n);
    }
    return total.get_ui();
}

struct DimensionPolynomial {
    ExponentPolynomial omega;
    /// omega(l) equals the dimension function for every l >= stabilization.
    unsigned stabilization = 0;
};

inline DimensionPolynomial dimension_polynomial(const LeaderSet &L) {
    const std::size_t n = L.base_count();
    DimensionPolynomial out;
    for (std::size_t j = 0; j < L.function_count(); ++j) {
        out.omega = out.omega + detail::cone_polynomial(0, n);
        for (const auto &[a, sign] : detail::inclusion_exclusion_terms(L.generators(j))) {
            const auto c = detail::cone_polynomial(a, n);
            out.omega = sign > 0 ? out.omega - c : out.omega + c;
            out.stabilization = std::max(out.stabilization, a);
        }
    }
    return out;
}

struct DifferentialInvariants {
    int type = 0;
    Integer typical_dimension;
    Integer differential_dimension;
    /// omega = sum a_i * C(l + i, i)
    std::vector<Integer> binomial_coefficients;
};

/// Expansion of omega in the basis C(l + i, i), i = 0..n.
inline DifferentialInvariants differential_invariants(const ExponentPolynomial &omega, std::size_t n) {
    if (omega.degree() > static_cast<int>(n))
        throw DegreeExceedsN("dimension polynomial " + omega.to_string() + " has degree above " + std::to_string(n));
    DifferentialInvariants out;
    out.binomial_coefficients.assign(n + 1, Integer(0));
    ExponentPolynomial rest = omega;
    while (!rest.is_zero()) {
        const int d = rest.degree();
        const Rational a = rest.coefficients().back() * Rational(factorial(static_cast<unsigned long>(d)));
        if (!is_integer(a)) throw NotIntegerValued("dimension polynomial " + omega.to_string());
        out.binomial_coefficients[static_cast<std::size_t>(d)] = a.get_num();
        rest = rest - detail::cone_polynomial(0, static_cast<std::size_t>(d)) * ExponentPolynomial(a.get_num().get_si());
    }
    out.type = std::max(omega.degree(), 0);
    out.typical_dimension = out.binomial_coefficients[static_cast<std::size_t>(out.type)];
    out.differential_dimension = out.binomial_coefficients[n];
    return out;
}

/// Inverse of the binomial expansion.
inline ExponentPolynomial from_binomial_basis(const std::vector<Integer> &a) {
    ExponentPolynomial r;
    for (std::size_t i = 0; i < a.size(); ++i)
        r = r + detail::cone_polynomial(0, i) * ExponentPolynomial(a[i].get_si());
    return r;
}

} // namespace countdiff

#endif // COUNTDIFF_DIMENSION_HPP
