#ifndef COUNTDIFF_NUMBER_HPP
#define COUNTDIFF_NUMBER_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace countdiff {

using Integer = mpz_class;
using Rational = mpq_class;

/// Operations a polynomial coefficient type has to provide. Specialized for
/// `Rational` here and for `RationalFunction` in rational_function.hpp.
template <class C> struct CoefficientTraits;

template <> struct CoefficientTraits<Rational> {
    static bool is_zero(const Rational &c) { return sgn(c) == 0; }
    static bool is_one(const Rational &c) { return c == 1; }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_rational(const Rational &q) { return q; }
};

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }
inline std::string to_string(const Integer &z) { return z.get_str(); }

inline bool is_integer(const Rational &q) { return q.get_den() == 1; }

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// Exact integer power of a rational.
inline Rational pow(const Rational &base, unsigned long e) {
    Rational r(1);
    Rational b = base;
    while (e != 0) {
        if (e & 1U) r *= b;
        b *= b;
        e >>= 1U;
    }
    return r;
}

/// Reduces a rational modulo a prime; throws when the denominator is not
/// invertible.
inline std::int64_t reduce_mod(const Rational &q, std::int64_t p) {
    Integer m(static_cast<long>(p));
    Integer num = q.get_num() % m;
    Integer den = q.get_den() % m;
    if (sgn(den) == 0) {
        throw CoefficientNotReducible("denominator of " + q.get_str() + " vanishes modulo " +
                                      std::to_string(p));
    }
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    Integer r = (num * inv) % m;
    if (sgn(r) < 0) r += m;
    return r.get_si();
}

inline bool divisible_by(const Integer &z, std::int64_t p) {
    return mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

} // namespace countdiff

#endif // COUNTDIFF_NUMBER_HPP
