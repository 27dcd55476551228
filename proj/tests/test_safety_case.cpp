#include <doctest.h>

#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <string>

#include "corpus_fixture.hpp"
#include "generators.hpp"
#include "stpa/parse.hpp"
#include "stpa/safety_case.hpp"

using namespace stpa;
using stpa::testing::load_corpus;
using stpa::testing::random_model;

namespace {

void walk(const CaeNode& node, const auto& visit) {
  visit(node);
  for (const CaeNode& child : node.children) walk(child, visit);
}

// Claim children are arguments, argument children are claims or
// evidence, evidence is a leaf, and every leaf is an undeveloped claim
// or an evidence node.
void check_alternation(const CaeNode& node) {
  if (node.kind == CaeKind::Evidence) {
    CHECK(node.children.empty());
    return;
  }
  if (node.children.empty()) {
    CHECK(node.kind == CaeKind::Claim);
    CHECK_FALSE(node.developed);
    return;
  }
  for (const CaeNode& child : node.children) {
    if (node.kind == CaeKind::Claim) {
      CHECK(child.kind == CaeKind::Argument);
    } else {
      CHECK(child.kind != CaeKind::Argument);
    }
    check_alternation(child);
  }
}

int count_nodes(const CaeNode& node) {
  int total = 1;
  for (const CaeNode& child : node.children) total += count_nodes(child);
  return total;
}

int count_json_nodes(const nlohmann::json& node) {
  int total = 1;
  for (const nlohmann::json& child : node.at("children")) total += count_json_nodes(child);
  return total;
}

}  // namespace

TEST_CASE("empty model produces a single undeveloped top claim") {
  CaeNode root = generate_case(StpaModel{}, "");
  CHECK(root.kind == CaeKind::Claim);
  CHECK_FALSE(root.developed);
  CHECK(root.children.empty());
  CHECK(root.id == "c-top");
}

TEST_CASE("corpus case matches the hand-expanded node set") {
  StpaModel model = load_corpus();
  CaeNode root = generate_case(model, model.context);

  std::multiset<std::string> observed;
  walk(root, [&](const CaeNode& node) {
    observed.insert(std::string(to_keyword(node.kind)) + " " + node.id);
  });

  // Manual expansion of the pattern over the corpus: one loss, one
  // hazard, four control actions each carrying one UCA, three scenarios
  // with one mitigation each, and UCA24.6 left without scenarios.
  const std::multiset<std::string> expected = {
      "claim c-top",
      "argument a-losses",
      "claim c-L1",
      "argument a-L1",
      "claim c-H1",
      "argument a-H1",
      "claim c-CA11",
      "claim c-CA17",
      "claim c-CA24",
      "claim c-CA7",
      "argument a-UCA11.1",
      "argument a-UCA17.2",
      "argument a-UCA24.6",
      "argument a-UCA7.3",
      "evidence e-M1",
      "evidence e-M2",
      "evidence e-M3",
      "claim c-UCA24.6",
  };
  CHECK(observed == expected);
}

TEST_CASE("corpus case alternates claim and argument and flags the evidence gap") {
  StpaModel model = load_corpus();
  CaeNode root = generate_case(model, model.context);
  check_alternation(root);

  int undeveloped = 0;
  walk(root, [&](const CaeNode& node) {
    if (!node.developed) {
      ++undeveloped;
      CHECK(node.source_element == Identifier("UCA24.6"));
    }
  });
  CHECK(undeveloped == 1);
}

TEST_CASE("every corpus mitigation appears as exactly one evidence node") {
  StpaModel model = load_corpus();
  CaeNode root = generate_case(model, model.context);
  std::map<std::string, int> evidence;
  walk(root, [&](const CaeNode& node) {
    if (node.kind == CaeKind::Evidence) {
      REQUIRE(node.source_element.has_value());
      evidence[node.source_element->str()] += 1;
    }
  });
  CHECK(evidence == std::map<std::string, int>{{"M1", 1}, {"M2", 1}, {"M3", 1}});
}

TEST_CASE("a hazard without ucas becomes an undeveloped claim with no argument") {
  ParseResult result = parse(
      "model \"m\" context \"\"\n"
      "loss L1 \"x\"\n"
      "hazard H1 \"h\" leads_to [L1]\n",
      "bare.stpa");
  REQUIRE(result.ok());
  CaeNode root = generate_case(*result.model, "");
  const CaeNode& hazard_claim = root.children.at(0).children.at(0).children.at(0).children.at(0);
  CHECK(hazard_claim.id == "c-H1");
  CHECK_FALSE(hazard_claim.developed);
  CHECK(hazard_claim.children.empty());
}

TEST_CASE("node ids get numeric suffixes when a source repeats") {
  // CA1's UCA cites both hazards, so its claim appears under H1 and H2.
  ParseResult result = parse(
      "model \"m\" context \"\"\n"
      "loss L1 \"x\"\n"
      "hazard H1 \"h1\" leads_to [L1]\n"
      "hazard H2 \"h2\" leads_to [L1]\n"
      "entity a \"A\" kind controller\n"
      "entity b \"B\" kind process\n"
      "ca CA1 from a to b \"act\"\n"
      "uca U1 on CA1 type not_provided context \"c\" hazards [H1, H2]\n",
      "suffix.stpa");
  REQUIRE(result.ok());
  CaeNode root = generate_case(*result.model, "");
  std::set<std::string> ids;
  walk(root, [&](const CaeNode& node) { CHECK(ids.insert(node.id).second); });
  CHECK(ids.count("c-CA1") == 1);
  CHECK(ids.count("c-CA1-2") == 1);
}

TEST_CASE("generation and serialization are deterministic") {
  StpaModel model = load_corpus();
  std::string first = case_to_json(generate_case(model, model.context));
  std::string second = case_to_json(generate_case(model, model.context));
  CHECK(first == second);
  std::string doc = case_document_to_json(model, generate_case(model, model.context));
  CHECK(doc == case_document_to_json(model, generate_case(model, model.context)));
  CHECK(doc.find("\"constraints\"") != std::string::npos);
  CHECK(doc.find("SC1") != std::string::npos);
}

TEST_CASE("case json round-trips through a json parser with the node count intact") {
  std::mt19937 rng(47);
  for (int i = 0; i < 30; ++i) {
    StpaModel model = random_model(rng);
    CaeNode root = generate_case(model, model.context);
    nlohmann::json parsed = nlohmann::json::parse(case_to_json(root));
    CHECK(count_json_nodes(parsed) == count_nodes(root));
  }
}

TEST_CASE("alternation holds on random models") {
  std::mt19937 rng(53);
  for (int i = 0; i < 50; ++i) {
    StpaModel model = random_model(rng);
    CaeNode root = generate_case(model, model.context);
    check_alternation(root);
    // Traceability: every sourced node points at a declared element.
    walk(root, [&](const CaeNode& node) {
      if (!node.source_element) return;
      const Identifier& id = *node.source_element;
      bool declared = model.losses.count(id) || model.hazards.count(id) ||
                      model.control_actions.count(id) || model.ucas.count(id) ||
                      model.mitigations.count(id);
      CHECK(declared);
    });
  }
}

TEST_CASE("every mitigation of a valid model appears as evidence at least once") {
  // In a valid model every mitigation chain reaches a loss (scenario ->
  // uca -> hazard -> loss references are all mandatory), so each
  // mitigation is reachable and must show up in the tree.
  std::mt19937 rng(59);
  for (int i = 0; i < 50; ++i) {
    StpaModel model = random_model(rng);
    CaeNode root = generate_case(model, model.context);
    std::set<Identifier> seen;
    walk(root, [&](const CaeNode& node) {
      if (node.kind == CaeKind::Evidence && node.source_element) {
        seen.insert(*node.source_element);
      }
    });
    for (const auto& [id, mitigation] : model.mitigations) {
      CHECK_MESSAGE(seen.count(id) == 1, "mitigation '" << id.str() << "' missing from the case");
    }
  }
}
