// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "countdiff/countdiff.hpp"

using namespace countdiff;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

DifferentialSystem load(const std::string &name) {
    return parse_differential_system(corpus::read_file(corpus::data_path(name)));
}
CountingSequence from_manifest(const std::string &name) {
    const Manifest m = load_manifest(corpus::data_path(name));
    return stratified_counting(m.strata, m.fit);
}
CountingPolynomial C(const std::string &text) { return parse_counting(text); }

Outcome navier_stokes() {
    Outcome o;
    const DifferentialSystem s = load("navier_stokes.dsys");
    const SimpleDifferentialSystem simple(s);
    const CountingSequence seq = counting_sequence_simple(simple, {Rational(0), Rational(0), Rational(0), Rational(0)});
    const ExponentPolynomial expected =
        ExponentPolynomial::from_coefficients({Rational(4), Rational(17, 2), Rational(11, 2), Rational(1)});
    o.require(seq.prefix().empty() && seq.tail().terms().size() == 1, "not a single oo-power: " + seq.to_string());
    if (!o.ok) return o;
    const auto &t = seq.tail().terms().front();
    o.require(t.coefficient == EllAlephPolynomial(Rational(1)) && t.exponent == expected,
              "exponent " + t.exponent.to_string());
    const CrosscheckReport rep = crosscheck_truncation(simple, *s.point, 3);
    const unsigned long omega[] = {4, 19, 51, 106};
    for (unsigned l = 0; l <= 3; ++l)
        o.require(rep.entries[l].certified && rep.entries[l].truncation == CountingPolynomial::infinity(omega[l]),
                  "truncation at l=" + std::to_string(l) + " is " + rep.entries[l].truncation.to_string());
    if (o.ok) o.detail = seq.to_string() + "; truncations oo^4, oo^19, oo^51, oo^106";
    return o;
}

Outcome hard_example() {
    Outcome o;
    const CountingSequence t = from_manifest("hard_T.mf");
    const CountingSequence s = from_manifest("hard_S.mf");
    o.require(s.value(0) == C("oo^2 - oo + 1"), "c(S)(0) = " + s.value(0).to_string());
    for (long l = 1; l <= 10; ++l)
        o.require(s.value(l) == C("oo^3 - oo^2 + oo - N0"), "c(S)(" + std::to_string(l) + ") = " + s.value(l).to_string());
    const SequenceComparison c = compare_sequences(t, s, 2);
    o.require(c.decision == Decision::Distinct, std::string("compare gave ") + to_string(c.decision));
    if (o.ok)
        o.detail = "c(S) = " + s.to_string() + "; compare Distinct with k1=" + std::to_string(c.witness->first) +
                   " k2=" + std::to_string(c.witness->second);
    return o;
}

Outcome better_example() {
    Outcome o;
    const CountingSequence s = from_manifest("better_S.mf");
    const CountingSequence t = from_manifest("better_T.mf");
    for (long l = 1; l <= 10; ++l) {
        const CountingPolynomial expected = CountingPolynomial::infinity(l + 2) - CountingPolynomial::infinity(l + 1) +
                                            CountingPolynomial(l + 1) * CountingPolynomial::infinity(l) -
                                            CountingPolynomial(l) * CountingPolynomial::infinity(l - 1);
        o.require(s.value(l) == expected, "c(S)(" + std::to_string(l) + ") = " + s.value(l).to_string());
        const CountingPolynomial subset = (CountingPolynomial::infinity() - CountingPolynomial(1)) *
                                          CountingPolynomial::infinity(l + 1);
        o.require(t.value(l) == subset, "c(T)(" + std::to_string(l) + ") = " + t.value(l).to_string());
        o.require(eventual_less(t.value(l), s.value(l)), "c(T) not below c(S) at l=" + std::to_string(l));
    }
    const auto d = dimension_polynomial(LeaderSet::of(load("better_leaders.dsys")));
    o.require(d.omega == ExponentPolynomial::from_coefficients({Rational(2), Rational(1)}),
              "dimension polynomial " + d.omega.to_string());
    if (o.ok) o.detail = "c(S) = " + s.to_string() + "; omega = " + d.omega.to_string();
    return o;
}

std::vector<corpus::SplitSystem> split_corpus() {
    std::mt19937 rng(2024);
    const std::int64_t primes[] = {5, 7, 11, 13, 17};
    std::vector<corpus::SplitSystem> out;
    for (int i = 0; i < 100; ++i) out.push_back(corpus::random_split_system(rng, primes[i % 5], 4, 3));
    return out;
}

Outcome finite_field_oracle() {
    Outcome o;
    std::size_t points = 0;
    for (const auto &sys : split_corpus()) {
        const Integer value = count_constructible(sys.system).evaluate(Integer(static_cast<long>(sys.prime)));
        const std::uint64_t enumerated = corpus::brute_force_count(sys.system, sys.prime);
        points += enumerated;
        o.require(value == Integer(static_cast<unsigned long>(enumerated)),
                  "p=" + std::to_string(sys.prime) + " count " + value.get_str() + " vs " + std::to_string(enumerated) +
                      " for\n" + render_system(sys.system));
    }
    if (o.ok) o.detail = "100 systems, " + std::to_string(points) + " points enumerated";
    return o;
}

Outcome partition_property() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto &sys : split_corpus()) {
        const Decomposition d = decompose(sys.system);
        const PrimeFieldReport rep = verify_over_prime_field(d, sys.prime);
        o.require(rep.partition_ok(), "split system over F_" + std::to_string(sys.prime) + ":\n" + render_system(sys.system));
        ++checked;
    }
    const auto files = corpus::nonsplit_files();
    o.require(files.size() >= 25, "only " + std::to_string(files.size()) + " non-split systems");
    for (const auto &f : files) {
        const Decomposition d = decompose(parse_system(corpus::read_file(f)));
        int primes = 0;
        for (std::int64_t p : {5, 7, 11, 13, 17}) {
            if (d.units.divisible_by_any(p)) continue;
            o.require(verify_over_prime_field(d, p).partition_ok(), f + " over F_" + std::to_string(p));
            ++primes;
            ++checked;
        }
        o.require(primes > 0, f + ": no usable prime");
    }
    if (o.ok) o.detail = std::to_string(checked) + " (system, prime) pairs partitioned";
    return o;
}

Outcome dimension_oracle() {
    Outcome o;
    std::mt19937 rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        const LeaderSet L = corpus::random_leader_set(rng);
        for (unsigned l = 0; l <= 8; ++l)
            o.require(dimension_function(L, l) == corpus::enumerate_parametric(L, l),
                      "dimension function at l=" + std::to_string(l) + ", trial " + std::to_string(trial));
        const DimensionPolynomial d = dimension_polynomial(L);
        for (unsigned l = d.stabilization; l <= d.stabilization + 5; ++l)
            o.require(d.omega.integer_value(l) == Integer(dimension_function(L, l)),
                      "dimension polynomial at l=" + std::to_string(l) + ", trial " + std::to_string(trial));
    }
    if (o.ok) o.detail = "200 leader sets, l <= 8 and [L0, L0+5]";
    return o;
}

Outcome closed_formula_vs_truncation() {
    Outcome o;
    const std::pair<const char *, unsigned> cases[] = {
        {"heat.dsys", 5}, {"wave.dsys", 5}, {"u1sq.dsys", 5}, {"navier_stokes.dsys", 3}};
    std::string summary;
    for (const auto &[name, lmax] : cases) {
        const DifferentialSystem s = load(name);
        const SimpleDifferentialSystem simple(s);
        const CrosscheckReport rep = crosscheck_truncation(simple, *s.point, lmax);
        o.require(rep.ok(), std::string(name) + " differs at l=" + std::to_string(rep.first_mismatch().value_or(0)));
        summary += std::string(summary.empty() ? "" : ", ") + name + " l<=" + std::to_string(lmax);
    }
    if (o.ok) o.detail = summary;
    return o;
}

Outcome counting_ring_properties() {
    Outcome o;
    std::mt19937 rng(808);
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const auto a = corpus::random_counting(rng), b = corpus::random_counting(rng), c = corpus::random_counting(rng);
        o.require(a + b == b + a && a * b == b * a, "commutativity");
        o.require((a + b) + c == a + (b + c) && (a * b) * c == a * (b * c), "associativity");
        o.require(a * (b + c) == a * b + a * c, "distributivity");
        o.require(a + CountingPolynomial() == a && a * CountingPolynomial(1) == a && (a - a).is_zero(), "identities");
    }
    for (int i = 0; i < n; ++i) {
        const auto a = corpus::random_counting(rng, false), b = corpus::random_counting(rng, false);
        const int held = int(eventual_less(a, b)) + int(eventual_less(b, a)) + int(a == b);
        o.require(held == 1, "trichotomy fails for " + a.to_string() + " and " + b.to_string());
    }
    std::uniform_int_distribution<int> shift(0, 3), coef(1, 4);
    std::uniform_int_distribution<unsigned long> kk(0, 20);
    for (int i = 0; i < n; ++i) {
        // N0-degree one with negative N0 coefficient
        const CountingPolynomial q = corpus::random_counting(rng, false);
        CountingPolynomial p = q;
        p.add_term(static_cast<unsigned>(shift(rng)), 1, Integer(-coef(rng)));
        const unsigned long k = kk(rng), k2 = 1 + kk(rng);
        o.require(eventual_less(lower_estimate(p, k2), upper_estimate(p, k)), "upper does not dominate lower for " + p.to_string());
        o.require(eventual_less(upper_estimate(p, k + 1), upper_estimate(p, k)), "upper estimate not decreasing");
        o.require(eventual_less(lower_estimate(p, k2), lower_estimate(p, k2 + 1)), "lower estimate not increasing");
    }
    for (int i = 0; i < n; ++i) {
        CountingPolynomial a = corpus::random_counting(rng);
        if (!a.has_aleph()) a += CountingPolynomial::aleph0();
        o.require(decide_sets(a, a, 3).decision != Decision::Equal, "Equal with N0 for " + a.to_string());
        o.require(decide_sets(corpus::random_counting(rng), a, 3).decision != Decision::Equal, "Equal with N0");
    }
    if (o.ok) o.detail = "1000 instances per property";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "Navier-Stokes counting polynomial and truncations", 10, navier_stokes},
        {2, "hard example strata and comparison", 5, hard_example},
        {3, "better example strata, dimension and eventual order", 5, better_example},
        {4, "finite field oracle on split systems", 60, finite_field_oracle},
        {5, "decomposition partition property", 60, partition_property},
        {6, "dimension oracle", 30, dimension_oracle},
        {7, "closed formula vs truncation", 30, closed_formula_vs_truncation},
        {8, "counting ring properties", 30, counting_ring_properties},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && secs >= c.limit_seconds) {
            o.ok = false;
            o.detail = "too slow";
        }
        if (!o.ok) ++failed;
        std::printf("criterion %d: %s  %s  (%.2f s, limit %.0f s)  %s\n", c.id, o.ok ? "PASS" : "FAIL", c.name, secs,
                    c.limit_seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
