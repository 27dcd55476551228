#include <doctest.h>

#include <random>

#include "corpus_fixture.hpp"
#include "generators.hpp"
#include "stpa/analysis.hpp"
#include "stpa/errors.hpp"
#include "stpa/graph.hpp"
#include "stpa/model.hpp"

using namespace stpa;
using stpa::testing::load_corpus;
using stpa::testing::random_model;

TEST_CASE("identifier validation") {
  CHECK(Identifier::valid("L1"));
  CHECK(Identifier::valid("UCA7.3"));
  CHECK(Identifier::valid("LS7.3.1"));
  CHECK(Identifier::valid("blue_team"));
  CHECK(Identifier::valid("a"));
  CHECK_FALSE(Identifier::valid(""));
  CHECK_FALSE(Identifier::valid("7up"));
  CHECK_FALSE(Identifier::valid(".dot"));
  CHECK_FALSE(Identifier::valid("has space"));
  CHECK_FALSE(Identifier::valid("dash-ed"));
  CHECK_THROWS_AS(Identifier("9bad"), std::invalid_argument);
}

TEST_CASE("identifier comparison is byte-wise and case-sensitive") {
  CHECK(Identifier("CA11") < Identifier("CA7"));  // '1' < '7'
  CHECK(Identifier("A") < Identifier("a"));
  CHECK(Identifier("L1") == Identifier("L1"));
  CHECK(Identifier("l1") != Identifier("L1"));
}

TEST_CASE("empty model builds an empty graph") {
  StpaModel model;
  TraceGraph graph = build_trace_graph(model);
  CHECK(graph.edges().empty());
  CHECK(graph.nodes().empty());
}

TEST_CASE("corpus graph has one edge per reference") {
  StpaModel model = load_corpus();
  TraceGraph graph = build_trace_graph(model);

  // 1 leads_to + 1 inverts + 4 uca-on + 4 uca-hazard + 3 scenario-on
  // + 3 addresses + 8 ca endpoints + 6 fb endpoints
  CHECK(graph.edges().size() == 30);

  TraceEdge expected{{ElementKind::Hazard, Identifier("H1")},
                     {ElementKind::Loss, Identifier("L1")},
                     Relation::HazardLeadsToLoss};
  bool found = false;
  for (const TraceEdge& edge : graph.edges()) {
    if (edge == expected) found = true;
  }
  CHECK(found);
}

TEST_CASE("graph rejects dangling references") {
  StpaModel model;
  Hazard hazard;
  hazard.id = Identifier("H1");
  hazard.description = "h";
  hazard.leads_to.push_back(Identifier("L9"));
  model.hazards.emplace(hazard.id, hazard);
  CHECK_THROWS_AS(build_trace_graph(model), IntegrityError);
}

TEST_CASE("trace follows the causal chain on the corpus") {
  StpaModel model = load_corpus();
  TraceGraph graph = build_trace_graph(model);

  auto paths = trace(graph, Identifier("LS7.3.1"), ElementKind::Loss);
  REQUIRE(paths.size() == 1);
  REQUIRE(paths[0].size() == 4);
  CHECK(paths[0][0].id == Identifier("LS7.3.1"));
  CHECK(paths[0][1].id == Identifier("UCA7.3"));
  CHECK(paths[0][2].id == Identifier("H1"));
  CHECK(paths[0][3].id == Identifier("L1"));
}

TEST_CASE("trace from an element of the target kind is the degenerate path") {
  StpaModel model = load_corpus();
  TraceGraph graph = build_trace_graph(model);
  auto paths = trace(graph, Identifier("L1"), ElementKind::Loss);
  REQUIRE(paths.size() == 1);
  REQUIRE(paths[0].size() == 1);
  CHECK(paths[0][0].id == Identifier("L1"));
}

TEST_CASE("trace on an unknown id reports not-found") {
  StpaModel model = load_corpus();
  TraceGraph graph = build_trace_graph(model);
  CHECK_THROWS_AS(trace(graph, Identifier("LS9.9.9"), ElementKind::Loss), NotFoundError);
}

TEST_CASE("trace resolves ids across kinds and flags ambiguity") {
  StpaModel model;
  Loss loss;
  loss.id = Identifier("X1");
  loss.description = "a loss";
  model.losses.emplace(loss.id, loss);
  Hazard hazard;
  hazard.id = Identifier("X1");  // same id, different kind: legal
  hazard.description = "a hazard";
  hazard.leads_to.push_back(Identifier("X1"));
  model.hazards.emplace(hazard.id, hazard);

  TraceGraph graph = build_trace_graph(model);
  CHECK(graph.resolve(Identifier("X1")).size() == 2);
  CHECK_THROWS_AS(trace(graph, Identifier("X1"), ElementKind::Loss), NotFoundError);
  auto paths = trace(graph, NodeRef{ElementKind::Hazard, Identifier("X1")}, ElementKind::Loss);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].size() == 2);
}

TEST_CASE("rebuilding the graph from an unchanged model is idempotent") {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    StpaModel model = random_model(rng);
    TraceGraph first = build_trace_graph(model);
    TraceGraph second = build_trace_graph(model);
    CHECK(first.edges() == second.edges());
    CHECK(first.nodes() == second.nodes());
  }
}

TEST_CASE("every scenario in a valid model traces to a loss") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    StpaModel model = random_model(rng);
    TraceGraph graph = build_trace_graph(model);
    for (const auto& [id, scenario] : model.scenarios) {
      auto paths = trace(graph, NodeRef{ElementKind::Scenario, id}, ElementKind::Loss);
      CHECK(!paths.empty());
    }
  }
}

TEST_CASE("removing a referenced element makes validate fail") {
  std::mt19937 rng(13);
  int exercised = 0;
  for (int i = 0; i < 60 && exercised < 30; ++i) {
    StpaModel model = random_model(rng);
    if (model.hazards.empty()) continue;
    // Every hazard references at least one loss; deleting that loss must
    // break referential integrity.
    const Hazard& hazard = model.hazards.begin()->second;
    StpaModel broken = model;
    broken.losses.erase(hazard.leads_to.front());
    CHECK(has_errors(validate(broken)));
    ++exercised;

    if (!model.ucas.empty()) {
      StpaModel no_ca = model;
      no_ca.control_actions.erase(model.ucas.begin()->second.on);
      CHECK(has_errors(validate(no_ca)));
    }
    if (!model.scenarios.empty()) {
      StpaModel no_uca = model;
      no_uca.ucas.erase(model.scenarios.begin()->second.on);
      CHECK(has_errors(validate(no_uca)));
    }
  }
  CHECK(exercised > 0);
}
