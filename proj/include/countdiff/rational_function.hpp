#ifndef COUNTDIFF_RATIONAL_FUNCTION_HPP
#define COUNTDIFF_RATIONAL_FUNCTION_HPP

#include <string>
#include <vector>

#include "algebra.hpp"

namespace countdiff {

/// Polynomial in the base (independent) variables x_0..x_{n-1}, identified by
/// index.
using BasePolynomial = Polynomial<unsigned, Rational>;

/// Element of Q(x_0, ..., x_{n-1}) kept as a reduced fraction whose
/// denominator has leading coefficient 1.
class RationalFunction {
public:
    RationalFunction() : den_(Rational(1)) {}
    RationalFunction(const Rational &c) : num_(c), den_(Rational(1)) {} // NOLINT
    RationalFunction(long c) : RationalFunction(Rational(c)) {}         // NOLINT
    explicit RationalFunction(BasePolynomial num) : num_(std::move(num)), den_(Rational(1)) {}
    RationalFunction(BasePolynomial num, BasePolynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw InexactDivision("rational function with zero denominator");
        normalize();
    }

    static RationalFunction variable(unsigned i) {
        return RationalFunction(BasePolynomial::variable(i));
    }

    const BasePolynomial &numerator() const { return num_; }
    const BasePolynomial &denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const { return den_.is_constant(); }
    /// Value when constant.
    Rational constant_value() const {
        return num_.constant_coefficient() / den_.constant_coefficient();
    }

    RationalFunction &operator+=(const RationalFunction &o) {
        if (den_.is_constant() && o.den_.is_constant()) {
            num_ += o.num_;
            return *this;
        }
        if (den_ == o.den_) {
            num_ += o.num_;
        } else {
            num_ = num_ * o.den_ + o.num_ * den_;
            den_ = den_ * o.den_;
        }
        normalize();
        return *this;
    }
    RationalFunction &operator-=(const RationalFunction &o) { return *this += -o; }
    RationalFunction &operator*=(const RationalFunction &o) {
        num_ = num_ * o.num_;
        if (!o.den_.is_constant()) {
            den_ = den_ * o.den_;
            normalize();
        } else if (num_.is_zero()) {
            den_ = BasePolynomial(Rational(1));
        } else if (!den_.is_constant()) {
            normalize();
        }
        return *this;
    }
    RationalFunction &operator/=(const RationalFunction &o) {
        if (o.is_zero()) throw InexactDivision("division by zero rational function");
        num_ = num_ * o.den_;
        den_ = den_ * o.num_;
        normalize();
        return *this;
    }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(RationalFunction a, const RationalFunction &b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction &b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction &b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction &b) { return a /= b; }
    friend bool operator==(const RationalFunction &a, const RationalFunction &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction &a, const RationalFunction &b) { return !(a == b); }

    RationalFunction derivative(unsigned i) const {
        BasePolynomial n = num_.derivative(i) * den_ - num_ * den_.derivative(i);
        return RationalFunction(std::move(n), den_ * den_);
    }

    /// Value at a point; throws PoleAtExpansionPoint if the denominator
    /// vanishes there.
    Rational evaluate(const std::vector<Rational> &point) const {
        Rational d = evaluate_polynomial(den_, point);
        if (sgn(d) == 0) throw PoleAtExpansionPoint("coefficient has a pole at the expansion point");
        return evaluate_polynomial(num_, point) / d;
    }

    static Rational evaluate_polynomial(const BasePolynomial &p, const std::vector<Rational> &point) {
        Rational r = 0;
        for (const auto &[m, c] : p.terms()) {
            Rational t = c;
            for (const auto &[v, e] : m) {
                if (v >= point.size()) throw InvalidSystem("expansion point has too few coordinates");
                t *= pow(point[v], e);
            }
            r += t;
        }
        return r;
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = BasePolynomial(Rational(1));
            return;
        }
        if (!den_.is_constant()) {
            BasePolynomial g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = divide_exact(num_, g);
                den_ = divide_exact(den_, g);
            }
        }
        Rational lc = den_.leading_coefficient();
        if (lc != 1) {
            Rational inv = Rational(1) / lc;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    BasePolynomial num_;
    BasePolynomial den_;
};

template <> struct CoefficientTraits<RationalFunction> {
    static bool is_zero(const RationalFunction &c) { return c.is_zero(); }
    static bool is_one(const RationalFunction &c) { return c.is_constant() && c.constant_value() == 1; }
    static RationalFunction zero() { return RationalFunction(); }
    static RationalFunction one() { return RationalFunction(Rational(1)); }
    static RationalFunction from_rational(const Rational &q) { return RationalFunction(q); }
};

/// Canonical text of a rational function coefficient for `render`.
template <class Namer> CoefficientText rational_function_text(const RationalFunction &c, Namer name) {
    if (c.is_constant()) return rational_text(c.constant_value());
    CoefficientText t;
    const BasePolynomial &n = c.numerator();
    const BasePolynomial &d = c.denominator();
    BasePolynomial shown = n;
    if (n.size() == 1 && sgn(n.leading_coefficient()) < 0) {
        t.negative = true;
        shown = -n;
    }
    std::string ns = render(shown, name);
    if (d.is_constant()) {
        t.text = ns;
        t.atomic = shown.size() == 1;
        return t;
    }
    std::string ds = render(d, name);
    if (shown.size() > 1) ns = "(" + ns + ")";
    if (d.size() > 1 || d.leading_monomial().size() > 1) ds = "(" + ds + ")";
    t.text = ns + "/" + ds;
    t.atomic = false;
    return t;
}

} // namespace countdiff

#endif // COUNTDIFF_RATIONAL_FUNCTION_HPP
