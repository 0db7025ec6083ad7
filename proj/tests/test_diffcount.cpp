#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "countdiff/diffcount.hpp"

using namespace countdiff;

namespace {

DifferentialSystem load(const std::string &name) {
    return parse_differential_system(corpus::read_file(corpus::data_path(name)));
}
SimpleDifferentialSystem simple(const std::string &name) { return SimpleDifferentialSystem(load(name)); }
CountingSequence sequence(const std::string &name) {
    const SimpleDifferentialSystem s = simple(name);
    return counting_sequence_simple(s, *s.system().point);
}
Manifest manifest(const std::string &name) { return load_manifest(corpus::data_path(name)); }
CountingPolynomial C(const std::string &text) { return parse_counting(text); }

const char *const kClosedCorpus[] = {"heat.dsys", "wave.dsys", "u1sq.dsys", "navier_stokes.dsys", "hard_T.dsys",
                                     "better_T.dsys"};

} // namespace

TEST(DiffCount, ClosedFormulaExamples) {
    EXPECT_EQ(sequence("u1sq.dsys").to_string(), "l=0: oo; l>=1: 2*oo");
    EXPECT_EQ(sequence("navier_stokes.dsys").to_string(), "oo^(l^3 + 11/2*l^2 + 17/2*l + 4)");
    EXPECT_EQ(sequence("heat.dsys").to_string(), "oo^(2*l + 1)");
    EXPECT_EQ(sequence("better_T.dsys").to_string(), "oo^(l + 2) - oo^(l + 1)");
    EXPECT_EQ(sequence("hard_T.dsys").to_string(), "l=0: oo^2 - oo; l>=1: oo^3 - oo^2");

    const SimpleDifferentialSystem free(parse_differential_system("funcs u\nbasevars t\npoint 0\n"));
    EXPECT_EQ(counting_sequence_simple(free, {Rational(0)}).to_string(), "oo^(l + 1)");
    EXPECT_EQ(differential_counting_polynomial_simple(simple("u1sq.dsys"), {Rational(0)}).to_string(), "2*oo");
}

TEST(DiffCount, LeadingTerms) {
    EXPECT_EQ(leading_term(simple("u1sq.dsys"), 3), (LeadingTerm{2, 1}));
    EXPECT_EQ(leading_term(simple("u1sq.dsys"), 0), (LeadingTerm{1, 1}));
    const SimpleDifferentialSystem free(parse_differential_system("funcs u v\nbasevars x y\n"));
    for (unsigned l = 0; l <= 5; ++l) EXPECT_EQ(leading_term(free, l), (LeadingTerm{1, 2 * binomial(l + 2, 2).get_ui()}));

    for (const char *name : kClosedCorpus) {
        const SimpleDifferentialSystem s = simple(name);
        const CountingSequence seq = counting_sequence_simple(s, *s.system().point);
        for (unsigned l = 0; l <= 6; ++l) {
            const LeadingTerm lt = leading_term(s, l);
            EXPECT_EQ(lt.exponent, dimension_function(s.leader_set(), l)) << name;
            const LeadingData d = leading_data(seq.value(l));
            EXPECT_EQ(d.degree, lt.exponent) << name << " at l = " << l;
            EXPECT_EQ(d.coefficient, (CountingPolynomial::AlephPart{{0, lt.coefficient}})) << name << " at l = " << l;
        }
        EXPECT_FALSE(seq.tail().has_aleph()) << name;
    }
}

TEST(DiffCount, ClosedFormulaMatchesTruncation) {
    const std::pair<const char *, unsigned> cases[] = {{"heat.dsys", 4},          {"wave.dsys", 4},
                                                       {"u1sq.dsys", 5},          {"navier_stokes.dsys", 3},
                                                       {"hard_T.dsys", 4},        {"better_T.dsys", 4}};
    for (const auto &[name, lmax] : cases) {
        const SimpleDifferentialSystem s = simple(name);
        const CrosscheckReport rep = crosscheck_truncation(s, *s.system().point, lmax);
        EXPECT_TRUE(rep.ok()) << name << " first mismatch at " << rep.first_mismatch().value_or(0);
        ASSERT_EQ(rep.entries.size(), lmax + 1);
    }
    const SimpleDifferentialSystem ns = simple("navier_stokes.dsys");
    const CrosscheckReport rep = crosscheck_truncation(ns, *ns.system().point, 3);
    const char *expected[] = {"oo^4", "oo^19", "oo^51", "oo^106"};
    for (unsigned l = 0; l <= 3; ++l) EXPECT_EQ(rep.entries[l].truncation.to_string(), expected[l]);
}

TEST(DiffCount, SystemsThatAreNotCounted) {
    EXPECT_THROW(SimpleDifferentialSystem(parse_differential_system("funcs u\nbasevars t\neq D(u,t) - u\nineq u[1]\n")),
                 NotSimple);
    EXPECT_THROW(simple("ns_leaders.dsys"), NotSimple);
    const SimpleDifferentialSystem hard = simple("hard_T.dsys");
    EXPECT_THROW(counting_sequence_simple(hard, {Rational(0)}), PoleAtExpansionPoint);

    const SimpleDifferentialSystem open(
        parse_differential_system("funcs u\nbasevars x y\npoint 0 0\neq D(u,x) - y*u\neq D(u,y)\n"));
    EXPECT_TRUE(open.conditional());
    EXPECT_FALSE(simple("navier_stokes.dsys").conditional());
}

TEST(DiffCount, TemplatesInstantiate) {
    const SystemTemplate t = parse_template(corpus::read_file(corpus::data_path("hard_Tinf.tsys")));
    EXPECT_EQ(render_system(t.instantiate(2)),
              "vars u2[0] u1[0] u2[1] u1[1] u2[2] u1[2]\n"
              "eq u2[0]\neq -u1[0] + 1\neq u1[1]*u2[1] - u1[1] - 1\neq u2[2]\neq 2*u1[2]*u2[1] - u1[2] + 2\n"
              "ineq u2[1] - 1\nineq 2*u2[1] - 1\n"
              "cofinite u2[1] subsumes u2[1] avoids 1/i for every natural i\n");
    EXPECT_TRUE(t.instantiate(0).cofinite().empty());
    // zeta as an override of the declared default
    EXPECT_EQ(count_simple(validate_simple(t.instantiate(3, {{"zeta", Rational(2)}}))), C("oo - N0"));

    const SystemTemplate k = parse_template(corpus::read_file(corpus::data_path("better_Tk.tsys")));
    EXPECT_EQ(count_simple(validate_simple(k.instantiate(3, {{"k", Rational(2)}}))), C("oo^3"));

    EXPECT_THROW(parse_template("funcs u\nbasevars t\nfor i in 0..l eq u[i]\n"), ParseError);
    EXPECT_THROW(parse_template("funcs u\nbasevars t\nwhile l: eq u[0]\n"), ParseError);
    EXPECT_THROW(parse_template("funcs u\nbasevars t\neq u[l+1]\n").instantiate(1), ParseError);
}

TEST(DiffCount, StratifiedHardExample) {
    const CountingSequence s = stratified_counting(manifest("hard_S.mf").strata);
    EXPECT_EQ(s.value(0), C("oo^2 - oo + 1"));
    for (long l = 1; l <= 10; ++l) EXPECT_EQ(s.value(l), C("oo^3 - oo^2 + oo - N0"));
    const auto values = stratified_values(manifest("hard_S.mf").strata, 10);
    for (long l = 0; l <= 10; ++l) EXPECT_EQ(values[l], s.value(l));
}

TEST(DiffCount, StratifiedBetterExample) {
    const StratifiedResult r = stratified_counting_report(manifest("better_S.mf").strata);
    EXPECT_TRUE(r.fitted);
    EXPECT_EQ(r.sequence.tail().to_string(), "oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)");
    const auto values = stratified_values(manifest("better_S.mf").strata, 10);
    for (long l = 1; l <= 10; ++l) {
        CountingPolynomial expected = CountingPolynomial::infinity(l + 2) - CountingPolynomial::infinity(l + 1) +
                                      CountingPolynomial(l + 1) * CountingPolynomial::infinity(l) -
                                      CountingPolynomial(l) * CountingPolynomial::infinity(l - 1);
        EXPECT_EQ(values[l], expected) << l;
        EXPECT_EQ(r.sequence.value(l), expected) << l;
    }
}

TEST(DiffCount, SingleStratumIsTheClosedFormula) {
    for (const char *name : kClosedCorpus) {
        const SimpleDifferentialSystem s = simple(name);
        const CountingSequence direct = counting_sequence_simple(s, *s.system().point);
        const CountingSequence wrapped = stratified_counting({Stratum::closed_form(s, *s.system().point, name)});
        for (long l = 0; l <= 8; ++l) EXPECT_EQ(direct.value(l), wrapped.value(l)) << name;
    }
    const CountingSequence given = parse_sequence("l=0: 1; l>=1: oo^l");
    const CountingSequence sum = stratified_counting({Stratum::of_sequence(given), Stratum::of_sequence(given)});
    EXPECT_EQ(sum.value(3), C("2*oo^3"));
}

TEST(DiffCount, FitFailureIsReported) {
    // 2^l copies of a point: not polynomial in l
    Stratum copies = Stratum::of_family(parse_template("funcs u\nbasevars t\nfor i in 0..l: eq u[i]\n"));
    copies.range_variable = "k";
    copies.range_from = parse_expression("1");
    copies.range_to = parse_expression("2^l");
    FitOptions opt;
    opt.max_start = 2;
    EXPECT_THROW(stratified_counting({copies}, opt), FitFailure);
    EXPECT_EQ(stratified_values({copies}, 4)[4], C("16"));
}

TEST(DiffCount, CompareNestedSets) {
    const CountingSequence t = stratified_counting(manifest("hard_T.mf").strata);
    const CountingSequence s = stratified_counting(manifest("hard_S.mf").strata);
    const SequenceComparison c = compare_sequences(t, s, 2);
    EXPECT_EQ(c.decision, Decision::Distinct);
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_EQ(*c.witness, std::make_pair(0u, 1u));
    EXPECT_EQ(c.order, 1u);

    const CountingSequence ns = sequence("navier_stokes.dsys");
    EXPECT_EQ(compare_sequences(ns, sequence("navier_stokes.dsys"), 4).decision, Decision::Equal);
    // N0 present: equal sequences are never reported Equal
    EXPECT_EQ(compare_sequences(s, s, 4).decision, Decision::Unknown);

    const CountingSequence bt = sequence("better_T.dsys");
    const CountingSequence bs = stratified_counting(manifest("better_S.mf").strata);
    for (long l = 1; l <= 10; ++l) EXPECT_TRUE(eventual_less(bt.value(l), bs.value(l))) << l;
    EXPECT_EQ(compare_sequences(bt, bs, 2).decision, Decision::Distinct);
}

TEST(DiffCount, ParallelMapKeepsOrderAndRethrows) {
    const auto squares = parallel_map<long>(50, [](std::size_t i) { return static_cast<long>(i * i); });
    for (std::size_t i = 0; i < squares.size(); ++i) EXPECT_EQ(squares[i], static_cast<long>(i * i));
    EXPECT_THROW(parallel_map<int>(20,
                                   [](std::size_t i) -> int {
                                       if (i == 7) throw FitFailure("seven");
                                       return 0;
                                   }),
                 FitFailure);
}
