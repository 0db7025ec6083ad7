#ifndef COUNTDIFF_IO_HPP
#define COUNTDIFF_IO_HPP

#include <string>

#include <json.hpp>

#include "diffcount.hpp"
#include "thomas.hpp"

namespace countdiff {

/// Version of the structured output documents.
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

inline Json to_json(const CountingPolynomial &c) {
    Json terms = Json::array();
    for (auto it = c.terms().rbegin(); it != c.terms().rend(); ++it)
        for (auto a = it->second.rbegin(); a != it->second.rend(); ++a)
            terms.push_back({{"infinity", it->first}, {"aleph0", a->first}, {"coefficient", a->second.get_str()}});
    return {{"text", c.to_string()}, {"terms", terms}};
}

inline Json to_json(const ExponentPolynomial &e) {
    Json cs = Json::array();
    for (const auto &c : e.coefficients()) cs.push_back(c.get_str());
    return {{"text", e.to_string()}, {"coefficients", cs}};
}

inline Json to_json(const DifferentialCountingPolynomial &d) {
    Json terms = Json::array();
    for (const auto &t : d.terms())
        terms.push_back({{"coefficient", render(t.coefficient, ell_aleph_name)}, {"exponent", to_json(t.exponent)}});
    return {{"text", d.to_string()}, {"terms", terms}};
}

inline Json to_json(const CountingSequence &s) {
    Json prefix = Json::array();
    for (const auto &c : s.prefix()) prefix.push_back(to_json(c));
    return {{"text", s.to_string()},
            {"stabilization_order", s.stabilization_order()},
            {"prefix", prefix},
            {"tail", to_json(s.tail())}};
}

inline Json to_json(const SimpleSystem &s) {
    const auto &sys = s.system();
    Json eqs = Json::array(), ineqs = Json::array(), cof = Json::array();
    for (const auto &p : sys.equations()) eqs.push_back(to_string(p, sys.ranking()));
    for (const auto &p : sys.inequations()) ineqs.push_back(to_string(p, sys.ranking()));
    for (const auto &m : sys.cofinite()) cof.push_back({{"variable", sys.ranking().name(m.variable)}, {"description", m.description}});
    const auto &c = s.certificate();
    return {{"equations", eqs},
            {"inequations", ineqs},
            {"cofinite", cof},
            {"count", to_json(count_simple(s.certified() ? s : s.override_assumptions()))},
            {"certificate",
             {{"weakly_triangular", to_string(c.weakly_triangular)},
              {"initials_nonvanishing", to_string(c.initials_nonvanishing)},
              {"squarefree", to_string(c.squarefree)},
              {"ineqs_pairwise_coprime", to_string(c.ineqs_pairwise_coprime)}}},
            {"warnings", s.warnings()}};
}

inline Json to_json(const Decomposition &d) {
    Json comps = Json::array();
    for (const auto &c : d.components) comps.push_back(to_json(c));
    Json units = Json::array();
    for (const auto &u : d.units.units()) units.push_back(u.get_str());
    return {{"components", comps}, {"count", to_json(count_decomposition(d))}, {"units", units}, {"log", d.log}};
}

inline Json to_json(const PassivityReport &r) {
    return {{"passive", r.passive()},
            {"pairs_checked", r.pairs_checked},
            {"pairs_skipped", r.pairs_skipped},
            {"failures", r.failures}};
}

inline Json to_json(const DimensionPolynomial &d, std::size_t n) {
    Json out = {{"omega", to_json(d.omega)}, {"stabilization", d.stabilization}};
    const auto inv = differential_invariants(d.omega, n);
    Json basis = Json::array();
    for (const auto &a : inv.binomial_coefficients) basis.push_back(a.get_str());
    out["differential_type"] = inv.type;
    out["typical_dimension"] = inv.typical_dimension.get_str();
    out["differential_dimension"] = inv.differential_dimension.get_str();
    out["binomial_coefficients"] = basis;
    return out;
}

inline Json to_json(const CrosscheckReport &r) {
    Json entries = Json::array();
    for (const auto &e : r.entries)
        entries.push_back({{"order", e.order},
                           {"closed_formula", e.closed_formula.to_string()},
                           {"truncation", e.truncation.to_string()},
                           {"certified", e.certified},
                           {"matches", e.matches()}});
    return {{"ok", r.ok()}, {"entries", entries}};
}

inline Json to_json(const SequenceComparison &c) {
    Json out = {{"decision", to_string(c.decision)}, {"orders_checked", c.orders_checked}};
    if (c.order) out["order"] = *c.order;
    if (c.witness) out["witness"] = {c.witness->first, c.witness->second};
    return out;
}

/// Top-level structured document for one command.
inline Json document(const std::string &command, Json result) {
    return {{"schema", kSchemaVersion}, {"command", command}, {"result", std::move(result)}};
}

inline Json error_document(const std::string &command, const std::string &kind, const std::string &message) {
    return {{"schema", kSchemaVersion}, {"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
}

} // namespace countdiff

#endif // COUNTDIFF_IO_HPP
