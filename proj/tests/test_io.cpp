#include <filesystem>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "countdiff/io.hpp"

using namespace countdiff;

namespace {

std::vector<std::string> corpus_files(const std::string &ext) {
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::recursive_directory_iterator(corpus::data_path("")))
        if (e.path().extension() == ext) out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Io, AlgebraicRoundTripOnCorpus) {
    const auto files = corpus_files(".sys");
    ASSERT_GE(files.size(), 26u);
    for (const auto &f : files) {
        const SigmaSystem s = parse_system(corpus::read_file(f));
        EXPECT_EQ(parse_system(render_system(s)), s) << f;
    }
}

TEST(Io, DifferentialRoundTripOnCorpus) {
    const auto files = corpus_files(".dsys");
    ASSERT_GE(files.size(), 8u);
    for (const auto &f : files) {
        const std::string once = render_differential_system(parse_differential_system(corpus::read_file(f)));
        EXPECT_EQ(render_differential_system(parse_differential_system(once)), once) << f;
    }
}

TEST(Io, StructuredCountingDocument) {
    const Decomposition d = decompose(parse_system(corpus::read_file(corpus::data_path("split3.sys"))));
    const Json doc = document("count-alg", to_json(d));
    EXPECT_EQ(doc["schema"], 1);
    EXPECT_EQ(doc["command"], "count-alg");
    EXPECT_EQ(doc["result"]["count"]["text"], "2*oo^2 - 4*oo");
    const Json &terms = doc["result"]["count"]["terms"];
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[0]["infinity"], 2);
    EXPECT_EQ(terms[0]["coefficient"], "2");
    EXPECT_EQ(terms[1]["coefficient"], "-4");
    EXPECT_EQ(doc["result"]["components"][0]["certificate"]["squarefree"], "proved");
    // byte-identical on repetition
    EXPECT_EQ(doc.dump(), document("count-alg", to_json(decompose(d.input))).dump());
}

TEST(Io, StructuredSequenceUsesExactRationals) {
    const DifferentialSystem ns =
        parse_differential_system(corpus::read_file(corpus::data_path("navier_stokes.dsys")));
    const SimpleDifferentialSystem s(ns);
    const Json j = to_json(counting_sequence_simple(s, *ns.point));
    EXPECT_EQ(j["text"], "oo^(l^3 + 11/2*l^2 + 17/2*l + 4)");
    EXPECT_EQ(j["stabilization_order"], 0);
    const Json &e = j["tail"]["terms"][0]["exponent"]["coefficients"];
    EXPECT_EQ(e, Json::parse(R"(["4", "17/2", "11/2", "1"])"));

    const Json dim = to_json(dimension_polynomial(LeaderSet::of(ns)), 4);
    EXPECT_EQ(dim["differential_type"], 3);
    EXPECT_EQ(dim["typical_dimension"], "6");
    EXPECT_EQ(dim["differential_dimension"], "0");
    EXPECT_EQ(to_json(s.passivity())["passive"], true);
}

TEST(Io, StructuredComparisonAndErrors) {
    SequenceComparison c;
    c.decision = Decision::Distinct;
    c.order = 1;
    c.witness = std::make_pair(0u, 1u);
    c.orders_checked = {1};
    const Json j = to_json(c);
    EXPECT_EQ(j["decision"], "Distinct");
    EXPECT_EQ(j["witness"], Json::parse("[0, 1]"));

    const Json err = error_document("count-diff", "PoleAtExpansionPoint", "pole");
    EXPECT_EQ(err["schema"], kSchemaVersion);
    EXPECT_EQ(err["error"]["kind"], "PoleAtExpansionPoint");
    EXPECT_FALSE(err.contains("result"));
}

TEST(Io, ManifestPathsAreRelative) {
    const Manifest m = load_manifest(corpus::data_path("better_S.mf"));
    ASSERT_EQ(m.strata.size(), 3u);
    EXPECT_EQ(m.strata[0].kind, Stratum::Kind::Closed);
    EXPECT_EQ(m.strata[1].range_variable, "k");
    EXPECT_EQ(m.strata[2].kind, Stratum::Kind::Family);
    EXPECT_THROW(parse_manifest("frobnicate x\n", corpus::data_path("")), ParseError);
    EXPECT_THROW(parse_manifest("system missing.dsys\n", corpus::data_path("")), InvalidSystem);
    const Manifest seq = parse_manifest("sequence l=0: 1; l>=1: oo\nfit start 3 coefficients 1\n", "");
    EXPECT_EQ(seq.fit.max_start, 3u);
    EXPECT_EQ(seq.fit.coefficient_degree, 1u);
}
