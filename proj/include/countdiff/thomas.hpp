#ifndef COUNTDIFF_THOMAS_HPP
#define COUNTDIFF_THOMAS_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sigma_system.hpp"

namespace countdiff {

/// Partition of the solution set of a finite system into simple systems.
struct Decomposition {
    SigmaSystem input;
    std::vector<SimpleSystem> components;
    /// splitting decisions, in the order they were taken
    std::vector<std::string> log;
    /// constants the computation divided by or relied on being nonzero
    UnitLog units;
};

struct DecomposeOptions {
    std::size_t max_steps = 200000;
};

namespace detail {

struct PolyLess {
    bool operator()(const AlgebraicPolynomial &a, const AlgebraicPolynomial &b) const {
        return canonical_polynomial_less(a, b);
    }
};

struct PendingItem {
    AlgebraicPolynomial poly;
    bool equation = true;
};

struct Branch {
    Levels placed;
    std::vector<PendingItem> queue;
    std::set<AlgebraicPolynomial, PolyLess> zero_facts;
    std::set<AlgebraicPolynomial, PolyLess> nonzero_facts;
    UnitLog units;
};

enum class Status { Zero, Nonzero, Unknown };

class ThomasEngine {
public:
    ThomasEngine(const SigmaSystem &input, DecomposeOptions options) : input_(input), options_(options) {}

    Decomposition run() {
        if (!input_.is_finite()) throw InvalidSystem("decomposition needs a finite system (no cofinite markers)");
        Decomposition out;
        out.input = input_;
        Branch root;
        for (const auto &p : input_.equations()) root.queue.push_back({p, true});
        for (const auto &p : input_.inequations()) root.queue.push_back({p, false});
        std::vector<Branch> stack{std::move(root)};
        while (!stack.empty()) {
            Branch b = std::move(stack.back());
            stack.pop_back();
            std::vector<Branch> children;
            const Outcome o = advance(b, children);
            if (o == Outcome::Finished) {
                out.components.push_back(finish(b));
                out.units.merge(b.units);
            } else if (o == Outcome::Split) {
                // push in reverse so the nonzero branch is explored first
                for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
            } else {
                out.units.merge(b.units);
            }
        }
        std::sort(out.components.begin(), out.components.end(), component_less);
        out.log = std::move(log_);
        return out;
    }

private:
    enum class Outcome { Finished, Dead, Split };

    struct GcdResult {
        bool split = false;
        AlgebraicPolynomial split_on;
        unsigned degree = 0;
        AlgebraicPolynomial gcd;
    };

    std::string show(const AlgebraicPolynomial &p) const { return to_string(p, input_.ranking()); }

    void step() {
        if (++steps_ > options_.max_steps)
            throw DecompositionLimit("decomposition exceeded " + std::to_string(options_.max_steps) + " steps");
    }

    static bool item_less(const PendingItem &a, const PendingItem &b) {
        auto la = a.poly.greatest_variable();
        auto lb = b.poly.greatest_variable();
        if (la != lb) return !la || (lb && *la < *lb);
        if (a.equation != b.equation) return a.equation;
        return canonical_polynomial_less(a.poly, b.poly);
    }

    Status status(const AlgebraicPolynomial &c, Branch &b) {
        AlgebraicPolynomial nc = normalize_logged(c, &b.units);
        if (nc.is_zero()) return Status::Zero;
        if (nc.is_constant()) return Status::Nonzero;
        if (b.zero_facts.count(nc)) return Status::Zero;
        if (b.nonzero_facts.count(nc)) return Status::Nonzero;
        AlgebraicPolynomial r = reduce_by_equations(nc, b.placed, &b.units);
        if (r.is_zero()) return Status::Zero;
        if (r.is_constant()) return Status::Nonzero;
        if (b.zero_facts.count(r)) return Status::Zero;
        if (b.nonzero_facts.count(r)) return Status::Nonzero;
        if (prove_nonzero(r, b.placed, &b.units)) return Status::Nonzero;
        return Status::Unknown;
    }

    /// gcd of a and b in v over every point of the branch, assuming both
    /// initials are nonzero there; deg_v a >= deg_v b >= 1.
    GcdResult conditional_gcd(const AlgebraicPolynomial &a, const AlgebraicPolynomial &b, unsigned v, Branch &br) {
        GcdResult g;
        const unsigned n = b.degree(v);
        auto data = subresultants(a, b, v);
        for (unsigned j = 0; j < n; ++j) {
            const Status s = status(data.principal[j], br);
            if (s == Status::Zero) continue;
            if (s == Status::Unknown) {
                g.split = true;
                g.split_on = data.principal[j];
                return g;
            }
            g.degree = j;
            g.gcd = data.subresultants[j];
            return g;
        }
        g.degree = n;
        g.gcd = b;
        return g;
    }

    void split(Branch &b, const AlgebraicPolynomial &c, const PendingItem &item, std::vector<Branch> &children) {
        AlgebraicPolynomial nc = normalize_logged(c, &b.units);
        AlgebraicPolynomial r = reduce_by_equations(nc, b.placed, &b.units);
        log_.push_back("split on " + show(nc));
        Branch nonzero = b;
        nonzero.queue.push_back({nc, false});
        nonzero.queue.push_back(item);
        nonzero.nonzero_facts.insert(nc);
        nonzero.nonzero_facts.insert(r);
        Branch zero = std::move(b);
        zero.queue.push_back({nc, true});
        zero.queue.push_back(item);
        zero.zero_facts.insert(nc);
        zero.zero_facts.insert(r);
        children.push_back(std::move(nonzero));
        children.push_back(std::move(zero));
    }

    /// cont * pp = 0 splits into (cont != 0, pp = 0) and (cont = 0).
    void split_factor(Branch &b, const AlgebraicPolynomial &cont, const AlgebraicPolynomial &pp,
                      std::vector<Branch> &children) {
        AlgebraicPolynomial nc = normalize_logged(cont, &b.units);
        log_.push_back("split on factor " + show(nc));
        Branch nonzero = b;
        nonzero.queue.push_back({nc, false});
        push(nonzero, pp, true);
        nonzero.nonzero_facts.insert(nc);
        Branch zero = std::move(b);
        zero.queue.push_back({nc, true});
        zero.zero_facts.insert(nc);
        children.push_back(std::move(nonzero));
        children.push_back(std::move(zero));
    }

    void push(Branch &b, const AlgebraicPolynomial &p, bool equation) {
        b.queue.push_back({normalize_logged(p, &b.units), equation});
    }

    AlgebraicPolynomial pquo(const AlgebraicPolynomial &a, const AlgebraicPolynomial &g, unsigned v, Branch &b) {
        return normalize_logged(pseudo_divide(a, g, v).quotient, &b.units);
    }

    Outcome advance(Branch &b, std::vector<Branch> &children) {
        while (!b.queue.empty()) {
            step();
            auto it = std::min_element(b.queue.begin(), b.queue.end(), item_less);
            PendingItem item = *it;
            b.queue.erase(it);

            AlgebraicPolynomial p = reduce_by_equations(item.poly, b.placed, &b.units);
            if (p.is_constant()) {
                const bool zero = p.is_zero();
                if (!zero) b.units.note(p.constant_coefficient());
                if (zero != item.equation) return Outcome::Dead;
                continue;
            }
            const unsigned v = leader(p);
            const AlgebraicPolynomial cont = content(p, v);
            if (!cont.is_constant()) {
                const AlgebraicPolynomial pp = divide_exact(p, cont);
                if (!item.equation) {
                    push(b, cont, false);
                    push(b, pp, false);
                    continue;
                }
                split_factor(b, cont, pp, children);
                return Outcome::Split;
            }
            if (p.degree(v) >= 2) {
                const AlgebraicPolynomial g = gcd(p, p.derivative(v));
                if (g.degree(v) > 0) {
                    b.units.note(Rational(p.degree(v)));
                    push(b, divide_exact(p, g), item.equation);
                    continue;
                }
            }
            const unsigned d = p.degree(v);
            const AlgebraicPolynomial c = initial(p);
            const Status sc = status(c, b);
            if (sc == Status::Zero) {
                push(b, tail(p), item.equation);
                continue;
            }
            if (sc == Status::Unknown) {
                split(b, c, item, children);
                return Outcome::Split;
            }
            if (d >= 2) {
                GcdResult g = conditional_gcd(p, p.derivative(v), v, b);
                if (g.split) {
                    split(b, g.split_on, item, children);
                    return Outcome::Split;
                }
                if (g.degree > 0) {
                    b.units.note(Rational(d));
                    b.queue.push_back({pquo(p, g.gcd, v, b), item.equation});
                    continue;
                }
            }
            LeaderBucket &level = b.placed[v];
            if (item.equation) {
                if (!level.equations.empty()) {
                    AlgebraicPolynomial f = level.equations.front();
                    const bool p_first = p.degree(v) >= f.degree(v);
                    GcdResult g = conditional_gcd(p_first ? p : f, p_first ? f : p, v, b);
                    if (g.split) {
                        split(b, g.split_on, item, children);
                        return Outcome::Split;
                    }
                    if (g.degree == 0) return Outcome::Dead;
                    level.equations.clear();
                    push(b, g.gcd, true);
                    continue;
                }
                bool requeued = false;
                for (const auto &q : level.inequations) {
                    const bool p_first = p.degree(v) >= q.degree(v);
                    GcdResult g = conditional_gcd(p_first ? p : q, p_first ? q : p, v, b);
                    if (g.split) {
                        split(b, g.split_on, item, children);
                        return Outcome::Split;
                    }
                    if (g.degree == 0) continue;
                    if (g.degree == d) return Outcome::Dead;
                    b.queue.push_back({pquo(p, g.gcd, v, b), true});
                    requeued = true;
                    break;
                }
                if (requeued) continue;
                level.inequations.clear();
                level.equations = {p};
            } else {
                if (!level.equations.empty()) {
                    AlgebraicPolynomial f = level.equations.front();
                    const bool f_first = f.degree(v) >= p.degree(v);
                    GcdResult g = conditional_gcd(f_first ? f : p, f_first ? p : f, v, b);
                    if (g.split) {
                        split(b, g.split_on, item, children);
                        return Outcome::Split;
                    }
                    if (g.degree == 0) continue;
                    if (g.degree == f.degree(v)) return Outcome::Dead;
                    level.equations.clear();
                    b.queue.push_back({pquo(f, g.gcd, v, b), true});
                    continue;
                }
                bool handled = false;
                for (const auto &r : level.inequations) {
                    const bool p_first = p.degree(v) >= r.degree(v);
                    GcdResult g = conditional_gcd(p_first ? p : r, p_first ? r : p, v, b);
                    if (g.split) {
                        split(b, g.split_on, item, children);
                        return Outcome::Split;
                    }
                    if (g.degree == 0) continue;
                    handled = true;
                    if (g.degree < d) b.queue.push_back({pquo(p, g.gcd, v, b), false});
                    break;
                }
                if (handled) continue;
                level.inequations.push_back(p);
            }
        }
        return Outcome::Finished;
    }

    SimpleSystem finish(const Branch &b) const {
        std::vector<AlgebraicPolynomial> eqs, ineqs;
        for (const auto &[v, level] : b.placed) {
            eqs.insert(eqs.end(), level.equations.begin(), level.equations.end());
            ineqs.insert(ineqs.end(), level.inequations.begin(), level.inequations.end());
        }
        return SimpleSystem(SigmaSystem(input_.ranking(), std::move(eqs), std::move(ineqs)), Certificate{});
    }

    static bool component_less(const SimpleSystem &a, const SimpleSystem &b) {
        auto key = [](const SimpleSystem &s) {
            std::vector<unsigned> leaders;
            for (const auto &e : s.system().equations()) leaders.push_back(leader(e));
            return leaders;
        };
        auto ka = key(a);
        auto kb = key(b);
        if (ka != kb) return ka < kb;
        return render_system(a.system()) < render_system(b.system());
    }

    const SigmaSystem &input_;
    DecomposeOptions options_;
    std::size_t steps_ = 0;
    std::vector<std::string> log_;
};

} // namespace detail

/// Algebraic Thomas decomposition: simple systems with pairwise disjoint
/// solution sets whose union is the solution set of `s`. Processes the
/// smallest pending leader first and splits on initials and subresultant
/// coefficients whose vanishing is undetermined.
inline Decomposition decompose(const SigmaSystem &s, DecomposeOptions options = {}) {
    return detail::ThomasEngine(s, options).run();
}

inline CountingPolynomial count_decomposition(const Decomposition &d) {
    CountingPolynomial total;
    for (const auto &c : d.components) total += count_simple(c);
    return total;
}

/// Counting polynomial of the constructible set defined by a finite system.
inline CountingPolynomial count_constructible(const SigmaSystem &s, DecomposeOptions options = {}) {
    return count_decomposition(decompose(s, options));
}

// ---------------------------------------------------------------------------
// finite field verification

struct PrimeFieldReport {
    std::int64_t prime = 0;
    std::uint64_t points = 0;
    std::uint64_t input_count = 0;
    std::vector<std::uint64_t> component_counts;
    std::uint64_t uncovered = 0;  // input solutions in no component
    std::uint64_t overlapping = 0; // input solutions in several components
    std::uint64_t extraneous = 0; // component points that are no input solutions

    bool partition_ok() const { return uncovered == 0 && overlapping == 0 && extraneous == 0; }
};

namespace detail {

/// Polynomial with coefficients reduced mod p, evaluated by direct term
/// expansion.
class ModPolynomial {
public:
    ModPolynomial(const AlgebraicPolynomial &poly, std::int64_t p) : p_(p) {
        for (const auto &[m, c] : poly.terms()) {
            std::int64_t r = reduce_mod(c, p);
            if (r != 0) terms_.push_back({r, m});
        }
    }

    std::int64_t evaluate(const std::vector<std::vector<std::int64_t>> &powers) const {
        std::int64_t acc = 0;
        for (const auto &t : terms_) {
            std::int64_t v = t.coefficient;
            for (const auto &[var, e] : t.monomial) v = v * powers[var][e] % p_;
            acc = (acc + v) % p_;
        }
        return acc;
    }

private:
    struct Term {
        std::int64_t coefficient;
        Monomial<unsigned> monomial;
    };
    std::int64_t p_;
    std::vector<Term> terms_;
};

struct ModSystem {
    std::vector<ModPolynomial> equations;
    std::vector<ModPolynomial> inequations;

    ModSystem(const SigmaSystem &s, std::int64_t p) {
        for (const auto &e : s.equations()) equations.emplace_back(e, p);
        for (const auto &q : s.inequations()) inequations.emplace_back(q, p);
    }

    bool contains(const std::vector<std::vector<std::int64_t>> &powers) const {
        for (const auto &e : equations)
            if (e.evaluate(powers) != 0) return false;
        for (const auto &q : inequations)
            if (q.evaluate(powers) == 0) return false;
        return true;
    }
};

inline unsigned max_degree(const SigmaSystem &s) {
    unsigned d = 1;
    for (const auto &e : s.equations()) d = std::max(d, e.total_degree());
    for (const auto &q : s.inequations()) d = std::max(d, q.total_degree());
    return d;
}

} // namespace detail

/// Enumerates F_p^n and checks that the components partition the input's
/// solution points. Throws CoefficientNotReducible when the computation over
/// Q divided by a multiple of p.
inline PrimeFieldReport verify_over_prime_field(const Decomposition &d, std::int64_t p,
                                                std::uint64_t max_points = 20000000) {
    if (d.units.divisible_by_any(p))
        throw CoefficientNotReducible("the decomposition relies on a constant divisible by " + std::to_string(p));
    const SigmaSystem &in = d.input;
    const std::size_t n = in.ranking().size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<std::uint64_t>(p);
        if (total > max_points) throw InvalidSystem("too many points to enumerate");
    }
    detail::ModSystem input(in, p);
    std::vector<detail::ModSystem> comps;
    unsigned deg = detail::max_degree(in);
    for (const auto &c : d.components) {
        comps.emplace_back(c.system(), p);
        deg = std::max(deg, detail::max_degree(c.system()));
    }
    PrimeFieldReport rep;
    rep.prime = p;
    rep.points = total;
    rep.component_counts.assign(comps.size(), 0);
    std::vector<std::int64_t> point(n, 0);
    std::vector<std::vector<std::int64_t>> powers(n, std::vector<std::int64_t>(deg + 1, 1));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            point[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(p));
            rest /= static_cast<std::uint64_t>(p);
            for (unsigned e = 1; e <= deg; ++e) powers[i][e] = powers[i][e - 1] * point[i] % p;
        }
        const bool member = input.contains(powers);
        if (member) ++rep.input_count;
        unsigned hits = 0;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (comps[c].contains(powers)) {
                ++hits;
                ++rep.component_counts[c];
            }
        }
        if (member && hits == 0) ++rep.uncovered;
        if (member && hits > 1) ++rep.overlapping;
        if (!member && hits > 0) ++rep.extraneous;
    }
    return rep;
}

/// Number of F_p points of a finite system, by enumeration.
inline std::uint64_t count_points_mod_p(const SigmaSystem &s, std::int64_t p) {
    detail::ModSystem sys(s, p);
    const std::size_t n = s.ranking().size();
    const unsigned deg = detail::max_degree(s);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(p);
    std::vector<std::vector<std::int64_t>> powers(n, std::vector<std::int64_t>(deg + 1, 1));
    std::uint64_t count = 0;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t x = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(p));
            rest /= static_cast<std::uint64_t>(p);
            for (unsigned e = 1; e <= deg; ++e) powers[i][e] = powers[i][e - 1] * x % p;
        }
        if (sys.contains(powers)) ++count;
    }
    return count;
}

} // namespace countdiff

#endif // COUNTDIFF_THOMAS_HPP
