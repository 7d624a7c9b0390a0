#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ned/graph.hpp"

using namespace ned;
using Catch::Matchers::WithinAbs;

TEST_CASE("significance divides counts by the document total") {
  SignificanceVector sig = significance("d1", {{"A", 2}, {"B", 1}, {"C", 1}});
  CHECK_THAT(sig.scores.at("A"), WithinAbs(0.5, 1e-12));
  CHECK_THAT(sig.scores.at("B"), WithinAbs(0.25, 1e-12));
  CHECK_THAT(sig.scores.at("C"), WithinAbs(0.25, 1e-12));

  SignificanceVector solo = significance("d2", {{"A", 3}});
  CHECK_THAT(solo.scores.at("A"), WithinAbs(1.0, 1e-12));
}

TEST_CASE("significance rejects empty and non-positive inputs") {
  CHECK_THROWS_MATCHES(significance("d1", {}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::StartsWith("NoEntities")));
  CHECK_THROWS_MATCHES(significance("d1", {{"A", 0}}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::StartsWith("InvalidArgument")));
  CHECK_THROWS_MATCHES(significance("d1", {{"A", 2}, {"B", -1}}), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::StartsWith("InvalidArgument")));
}

TEST_CASE("significance scores sum to one") {
  auto rng = test_helpers::make_rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto terms = test_helpers::random_terms(rng, 1, 12);
    SignificanceVector sig = significance("d", terms);
    double sum = 0.0;
    for (const auto& [term, s] : sig.scores) {
      CHECK(s > 0.0);
      sum += s;
    }
    CHECK_THAT(sum, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("a document contributes the sum of endpoint scores per pair") {
  SignificanceVector sig = significance("d1", {{"A", 2}, {"B", 1}, {"C", 1}});
  auto edges = doc_edge_contribution(sig);
  REQUIRE(edges.size() == 3);
  CHECK_THAT(edges.at({"A", "B"}), WithinAbs(0.75, 1e-12));
  CHECK_THAT(edges.at({"A", "C"}), WithinAbs(0.75, 1e-12));
  CHECK_THAT(edges.at({"B", "C"}), WithinAbs(0.5, 1e-12));
}

TEST_CASE("single-term documents contribute no edges") {
  SignificanceVector sig = significance("d1", {{"A", 5}});
  CHECK(doc_edge_contribution(sig).empty());
}

TEST_CASE("per-document edge weights total n minus one") {
  auto rng = test_helpers::make_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto terms = test_helpers::random_terms(rng, 2, 15);
    auto edges = doc_edge_contribution(significance("d", terms));
    double total = 0.0;
    for (const auto& [key, w] : edges) total += w;
    CHECK_THAT(total,
               WithinAbs(static_cast<double>(terms.size()) - 1.0, 1e-9));
  }
}

TEST_CASE("doc edge contributions match the direct oracle") {
  auto rng = test_helpers::make_rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto terms = test_helpers::random_terms(rng, 2, 10);
    auto edges = doc_edge_contribution(significance("d", terms));
    auto expected = test_helpers::oracle_doc_pairs(terms);
    REQUIRE(edges.size() == expected.size());
    for (const auto& [key, w] : expected) {
      CHECK_THAT(edges.at(key), WithinAbs(w, 1e-12));
    }
  }
}

TEST_CASE("edge keys are unordered") {
  CHECK(make_edge_key("b", "a") == make_edge_key("a", "b"));
  CHECK(make_edge_key("a", "b").first == "a");
}

TEST_CASE("block aggregation sums contributions across documents") {
  DocTerms docs;
  docs.push_back({"d1", {{"A", 1}, {"B", 1}}});
  docs.push_back({"d2", {{"A", 1}, {"B", 1}}});
  TermGraph g = aggregate_block(3, docs);
  CHECK(g.block_index == 3);
  CHECK(g.doc_count == 2);
  REQUIRE(g.edge_weights.size() == 1);
  CHECK_THAT(g.edge_weights.at({"A", "B"}), WithinAbs(2.0, 1e-12));
  CHECK_THAT(g.weighted_degree("A"), WithinAbs(2.0, 1e-12));
  CHECK_THAT(g.weighted_degree("B"), WithinAbs(2.0, 1e-12));
  CHECK(g.weighted_degree("C") == 0.0);
}

TEST_CASE("single-term documents yield isolated nodes") {
  DocTerms docs;
  docs.push_back({"d1", {{"A", 2}}});
  docs.push_back({"d2", {{"B", 1}, {"C", 1}}});
  TermGraph g = aggregate_block(0, docs);
  CHECK(g.nodes == std::set<std::string>{"A", "B", "C"});
  CHECK(g.edge_weights.size() == 1);
  CHECK(g.weighted_degree("A") == 0.0);
}

TEST_CASE("empty blocks aggregate to empty graphs") {
  TermGraph g = aggregate_block(5, {});
  CHECK(g.nodes.empty());
  CHECK(g.edge_weights.empty());
  CHECK(g.doc_count == 0);
}

TEST_CASE("degrees satisfy the handshake identity") {
  auto rng = test_helpers::make_rng(31);
  DocTerms docs;
  for (int d = 0; d < 40; ++d) {
    docs.push_back({"d" + std::to_string(d),
                    test_helpers::random_terms(rng, 1, 8)});
  }
  TermGraph g = aggregate_block(0, docs);
  double degree_sum = 0.0;
  for (const std::string& node : g.nodes) degree_sum += g.weighted_degree(node);
  CHECK_THAT(degree_sum, WithinAbs(2.0 * g.total_edge_weight(), 1e-9));

  // Degree of each node equals the sum of its incident edge weights.
  for (const std::string& node : g.nodes) {
    double incident = 0.0;
    for (const auto& [key, w] : g.edge_weights) {
      if (key.first == node || key.second == node) incident += w;
    }
    CHECK_THAT(g.weighted_degree(node), WithinAbs(incident, 1e-9));
  }
}

TEST_CASE("aggregation equals the oracle pair sums") {
  auto rng = test_helpers::make_rng(55);
  DocTerms docs;
  for (int d = 0; d < 25; ++d) {
    docs.push_back({"d" + std::to_string(d),
                    test_helpers::random_terms(rng, 2, 8)});
  }
  std::map<EdgeKey, double> expected;
  for (const auto& [id, terms] : docs) {
    for (const auto& [key, w] : test_helpers::oracle_doc_pairs(terms)) {
      expected[key] += w;
    }
  }
  TermGraph g = aggregate_block(0, docs);
  REQUIRE(g.edge_weights.size() == expected.size());
  for (const auto& [key, w] : expected) {
    CHECK_THAT(g.edge_weights.at(key), WithinAbs(w, 1e-9));
  }
}

TEST_CASE("graphml export lists nodes and weighted edges") {
  DocTerms docs;
  docs.push_back({"d1", {{"a<b", 1}, {"c&d", 1}}});
  TermGraph g = aggregate_block(2, docs);
  std::string xml = to_graphml(g);
  CHECK(xml.find("<graph id=\"block_2\" edgedefault=\"undirected\">") !=
        std::string::npos);
  CHECK(xml.find("<node id=\"a&lt;b\"/>") != std::string::npos);
  CHECK(xml.find("<node id=\"c&amp;d\"/>") != std::string::npos);
  CHECK(xml.find("source=\"a&lt;b\" target=\"c&amp;d\"") != std::string::npos);
  CHECK(xml.find("<data key=\"w\">1</data>") != std::string::npos);
}

TEST_CASE("edge list json carries block and weights") {
  DocTerms docs;
  docs.push_back({"d1", {{"A", 1}, {"B", 3}}});
  TermGraph g = aggregate_block(4, docs);
  nlohmann::ordered_json j = to_edge_list_json(g);
  CHECK(j["block"] == 4);
  REQUIRE(j["edges"].size() == 1);
  CHECK(j["edges"][0]["a"] == "A");
  CHECK(j["edges"][0]["b"] == "B");
  CHECK_THAT(j["edges"][0]["w"].get<double>(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, 0.1, 2.0 / 3.0, 1e-17, 123456.789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}
