// countdiff: counting solutions of algebraic and differential systems.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "countdiff/countdiff.hpp"

using namespace countdiff;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string command;
    std::vector<std::string> inputs;
    std::string output = "text";
    std::string ranking;
    std::string point;
    unsigned max_order = 3;
    unsigned K = 32;
    bool assert_subset = false;
    bool show_systems = false;
};

bool structured(const Options &o) { return o.output == "structured"; }

std::string extension(const std::string &path) { return fs::path(path).extension().string(); }

/// Rewrites the ranking line of a system file.
std::string with_ranking(const std::string &text, const std::string &ranking, bool differential) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        auto [kw, at] = detail::keyword(detail::strip_comment(line));
        (void)at;
        if (!differential && kw == "vars") {
            out << "vars " << ranking << "\n";
        } else if (differential && kw == "ranking") {
            continue;
        } else {
            out << line << "\n";
            if (differential && kw == "basevars") out << "ranking orderly " << ranking << "\n";
        }
    }
    return out.str();
}

SigmaSystem load_sigma(const Options &o, const std::string &path) {
    std::string text = read_text_file(path);
    if (!o.ranking.empty()) text = with_ranking(text, o.ranking, false);
    return parse_system(text);
}

DifferentialSystem load_differential(const Options &o, const std::string &path) {
    std::string text = read_text_file(path);
    if (!o.ranking.empty()) text = with_ranking(text, o.ranking, true);
    return parse_differential_system(text);
}

ExpansionPoint point_of(const Options &o, const DifferentialSystem &s) {
    if (!o.point.empty()) {
        ExpansionPoint z = parse_point(o.point);
        check_point(z, s.ranking.base_count());
        return z;
    }
    if (!s.point) throw InvalidSystem("no expansion point: give --point or a 'point' line");
    return *s.point;
}

struct Counted {
    CountingSequence sequence;
    std::vector<std::string> notes;
    Json detail;
};

Counted count_file(const Options &o, const std::string &path) {
    Counted c;
    if (extension(path) == ".mf") {
        if (!o.ranking.empty()) throw InvalidSystem("--ranking cannot be applied to a manifest");
        Manifest m = load_manifest(path);
        Json strata = Json::array();
        for (const auto &s : m.strata) {
            if (s.closed && s.closed->conditional())
                c.notes.push_back("stratum " + s.label + " is counted conditional on passivity");
            strata.push_back({{"label", s.label},
                              {"kind", s.kind == Stratum::Kind::Closed   ? "closed"
                                       : s.kind == Stratum::Kind::Family ? "family"
                                                                         : "sequence"}});
        }
        const StratifiedResult r = stratified_counting_report(m.strata, m.fit);
        c.sequence = r.sequence;
        c.detail = {{"strata", strata}, {"fitted", r.fitted}};
        if (r.fitted) c.detail["verified_through"] = r.verified_through;
        return c;
    }
    const SimpleDifferentialSystem s(load_differential(o, path));
    const ExpansionPoint zeta = point_of(o, s.system());
    c.sequence = counting_sequence_simple(s, zeta);
    if (s.conditional()) c.notes.push_back("result is conditional on passivity");
    c.detail = {{"passivity", to_json(s.passivity())}};
    return c;
}

void emit(const Options &o, const Json &result, const std::string &text, const std::vector<std::string> &notes = {}) {
    if (structured(o)) {
        Json r = result;
        if (!notes.empty()) r["notes"] = notes;
        std::cout << document(o.command, r).dump(2) << "\n";
        return;
    }
    std::cout << text;
    for (const auto &n : notes) std::cerr << "note: " << n << "\n";
}

int run_count_alg(const Options &o) {
    const Decomposition d = decompose(load_sigma(o, o.inputs.at(0)));
    const CountingPolynomial c = count_decomposition(d);
    emit(o, {{"count", to_json(c)}, {"components", d.components.size()}}, c.to_string() + "\n");
    return 0;
}

int run_decompose(const Options &o) {
    const Decomposition d = decompose(load_sigma(o, o.inputs.at(0)));
    std::ostringstream text;
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        const SimpleSystem &s = d.components[i];
        text << "# component " << i + 1 << ": " << count_simple(s.certified() ? s : s.override_assumptions()).to_string()
             << (s.certified() ? "" : " (assumed)") << "\n"
             << render_system(s.system());
        for (const auto &w : s.warnings()) text << "# warning: " << w << "\n";
    }
    text << "# total: " << count_decomposition(d).to_string() << "\n";
    emit(o, to_json(d), text.str());
    return 0;
}

int run_count_diff(const Options &o) {
    const Counted c = count_file(o, o.inputs.at(0));
    Json r = {{"sequence", to_json(c.sequence)}};
    r.update(c.detail);
    emit(o, r, c.sequence.to_string() + "\n", c.notes);
    return 0;
}

int run_dimension(const Options &o) {
    const DifferentialSystem s = load_differential(o, o.inputs.at(0));
    const LeaderSet L = LeaderSet::of(s);
    const DimensionPolynomial d = dimension_polynomial(L);
    const DifferentialInvariants inv = differential_invariants(d.omega, L.base_count());
    std::ostringstream text;
    text << "omega: " << d.omega.to_string() << "\n"
         << "stabilization: " << d.stabilization << "\n"
         << "type: " << inv.type << "\n"
         << "typical_dimension: " << inv.typical_dimension.get_str() << "\n"
         << "differential_dimension: " << inv.differential_dimension.get_str() << "\n";
    emit(o, to_json(d, L.base_count()), text.str());
    return 0;
}

int run_truncate(const Options &o) {
    const SimpleDifferentialSystem s(load_differential(o, o.inputs.at(0)));
    const ExpansionPoint zeta = point_of(o, s.system());
    const CrosscheckReport rep = crosscheck_truncation(s, zeta, o.max_order);
    std::ostringstream text;
    for (const auto &e : rep.entries) {
        text << "l=" << e.order << ": " << e.truncation.to_string();
        if (!e.matches()) text << " (closed formula " << e.closed_formula.to_string() << ")";
        if (!e.certified) text << " (assumed)";
        text << "\n";
    }
    if (o.show_systems) text << render_system(truncation_system(s.system(), zeta, o.max_order).system());
    std::vector<std::string> notes;
    if (s.conditional()) notes.push_back("closed formula is conditional on passivity");
    emit(o, to_json(rep), text.str(), notes);
    if (!rep.ok()) {
        std::cerr << "error: truncation disagrees with the closed formula at l = " << *rep.first_mismatch() << "\n";
        return 1;
    }
    return 0;
}

int run_compare(const Options &o) {
    const Counted a = count_file(o, o.inputs.at(0));
    const Counted b = count_file(o, o.inputs.at(1));
    const SequenceComparison c = compare_sequences(a.sequence, b.sequence, o.K);
    std::vector<std::string> notes = a.notes;
    notes.insert(notes.end(), b.notes.begin(), b.notes.end());
    std::ostringstream text;
    text << to_string(c.decision) << "\n";
    if (c.order) text << "order: " << *c.order << "\n";
    if (c.witness) text << "witness: k1=" << c.witness->first << " k2=" << c.witness->second << "\n";
    if (!o.assert_subset)
        text << "conditional: valid only if the solutions of " << o.inputs[0] << " are contained in those of "
             << o.inputs[1] << " (not checked; pass --assert-subset to assert it)\n";
    Json r = to_json(c);
    r["first"] = to_json(a.sequence);
    r["second"] = to_json(b.sequence);
    r["containment_asserted"] = o.assert_subset;
    emit(o, r, text.str(), notes);
    return c.decision == Decision::Unknown ? 2 : 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Counts solutions of algebraic and differential systems"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--output", o.output, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    };
    auto *alg = app.add_subcommand("count-alg", "count the solutions of a system file (.sys)");
    alg->add_option("system", o.inputs, "system file")->required()->expected(1)->check(CLI::ExistingFile);
    alg->add_option("--ranking", o.ranking, "variable order, lowest first, e.g. 'x<y'");
    common(alg);

    auto *dec = app.add_subcommand("decompose", "disjoint decomposition into simple systems (.sys)");
    dec->add_option("system", o.inputs, "system file")->required()->expected(1)->check(CLI::ExistingFile);
    dec->add_option("--ranking", o.ranking, "variable order, lowest first, e.g. 'x<y'");
    common(dec);

    auto *cd = app.add_subcommand("count-diff", "counting sequence of a differential system (.dsys) or manifest (.mf)");
    cd->add_option("system", o.inputs, "system or manifest")->required()->expected(1)->check(CLI::ExistingFile);
    cd->add_option("--point", o.point, "expansion point, e.g. 0,0,0,0");
    cd->add_option("--ranking", o.ranking, "function priority, e.g. 'u>v'");
    common(cd);

    auto *dim = app.add_subcommand("dimension", "dimension polynomial of the leaders of a .dsys file");
    dim->add_option("system", o.inputs, "system file")->required()->expected(1)->check(CLI::ExistingFile);
    dim->add_option("--ranking", o.ranking, "function priority, e.g. 'u>v'");
    common(dim);

    auto *tr = app.add_subcommand("truncate", "count truncated systems and check them against the closed formula");
    tr->add_option("system", o.inputs, "system file")->required()->expected(1)->check(CLI::ExistingFile);
    tr->add_option("--point", o.point, "expansion point, e.g. 0,0");
    tr->add_option("--ranking", o.ranking, "function priority, e.g. 'u>v'");
    tr->add_option("--max-order", o.max_order, "largest truncation order")->check(CLI::Range(0, 64));
    tr->add_flag("--show-system", o.show_systems, "print the truncated system at the largest order");
    common(tr);

    auto *cmp = app.add_subcommand("compare", "decide whether two nested solution sets are equal");
    cmp->add_option("first", o.inputs, "subset (.dsys or .mf) then superset")->required()->expected(2)
        ->check(CLI::ExistingFile);
    cmp->add_option("--K", o.K, "largest estimate parameter")->check(CLI::Range(0, 1000));
    cmp->add_option("--point", o.point, "expansion point for .dsys inputs");
    cmp->add_flag("--assert-subset", o.assert_subset, "assert that the first solution set lies in the second");
    common(cmp);

    CLI11_PARSE(app, argc, argv);
    o.command = app.get_subcommands().front()->get_name();

    try {
        if (o.command == "count-alg") return run_count_alg(o);
        if (o.command == "decompose") return run_decompose(o);
        if (o.command == "count-diff") return run_count_diff(o);
        if (o.command == "dimension") return run_dimension(o);
        if (o.command == "truncate") return run_truncate(o);
        return run_compare(o);
    } catch (const Error &e) {
        if (structured(o)) std::cout << error_document(o.command, e.kind(), e.what()).dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception &e) {
        if (structured(o)) std::cout << error_document(o.command, "InternalError", e.what()).dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
