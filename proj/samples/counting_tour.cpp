// A short tour: count an algebraic system, a differential system, and a
// solution set split into strata.

#include <iostream>

#include "countdiff/countdiff.hpp"

using namespace countdiff;

int main() {
    // y1 = +-1, y2 free, y3 avoids 0 and 1
    const SigmaSystem alg = parse_system("vars y1 y2 y3\neq y1^2 - 1\nineq y3*(y3 - 1)\n");
    std::cout << "algebraic:    " << count_constructible(alg) << "\n";

    const Decomposition d = decompose(parse_system("vars x y\neq y^2 - x\n"));
    std::cout << "y^2 = x:      " << count_decomposition(d) << " in " << d.components.size() << " components\n";

    // power series solutions of the heat equation around the origin
    const SimpleDifferentialSystem heat(
        parse_differential_system("funcs u\nbasevars x t\npoint 0 0\neq D(u,t) - D(u,x,2)\n"));
    std::cout << "heat:         " << counting_sequence_simple(heat, {Rational(0), Rational(0)}).to_string() << "\n";
    std::cout << "  dimension:  " << dimension_polynomial(heat.leader_set()).omega.to_string() << "\n";

    // u2*u1' = u1 - 1/t around t = 1, with u2 linear: split on u2(1) = 0
    const DifferentialSystem generic = parse_differential_system("funcs u1 u2\nbasevars t\nranking orderly u1>u2\n"
                                                                 "point 1\neq u2*D(u1,t) - u1 + 1/t\n"
                                                                 "eq D(u2,t,2)\nineq u2[0]\n");
    const SystemTemplate vanishing = parse_template(
        "funcs u1 u2\nbasevars t\nranking orderly u1>u2\n"
        "eq u2[0]\n"
        "for i in 0..l: eq (i*u2[1] - 1)*u1[i] + (-1)^i*i!\n"
        "for i in 2..l: eq u2[i]\n"
        "if l >= 1: cofinite u2[1] subsumes\n"
        "for i in 1..l: ineq i*u2[1] - 1\n");
    const Stratum t = Stratum::closed_form(SimpleDifferentialSystem(generic), {Rational(1)}, "u2(1) != 0");
    const CountingSequence whole = stratified_counting({t, Stratum::of_family(vanishing, {}, "u2(1) = 0")});
    std::cout << "strata:       " << whole.to_string() << "\n";

    const SequenceComparison c = compare_sequences(t.sequence, whole, 4);
    std::cout << "generic part: " << to_string(c.decision) << " from the whole set";
    if (c.order) std::cout << " at order " << *c.order;
    std::cout << "\n";
}
