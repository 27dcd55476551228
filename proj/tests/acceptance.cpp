// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "corpus_fixture.hpp"
#include "dot_checker.hpp"
#include "generators.hpp"
#include "stpa/analysis.hpp"
#include "stpa/graph.hpp"
#include "stpa/parse.hpp"
#include "stpa/safety_case.hpp"
#include "stpa/serialize.hpp"
#include "stpa/export.hpp"

using namespace stpa;
using stpa::testing::GenLimits;
using stpa::testing::load_corpus;
using stpa::testing::parse_dot;
using stpa::testing::random_model;
using stpa::testing::read_file;

namespace {

int failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
  if (ok) {
    std::printf("PASS: %d. %s\n", number, name);
  } else {
    std::printf("FAIL: %d. %s%s%s\n", number, name, detail.empty() ? "" : ": ",
                detail.c_str());
    ++failures;
  }
}

template <typename Fn>
void criterion(int number, const char* name, Fn&& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(number, name, ok, detail);
}

int run_command(const std::string& command, std::string* output) {
  std::string path = "/tmp/stpa_acceptance_out";
  int status = std::system((command + " >" + path + " 2>/dev/null").c_str());
  if (output) *output = read_file(path);
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// Criterion 1: exactly 4 candidate cells per control action on random
// models of up to 50 control actions, with the whole property gate
// finishing inside 5 seconds.
bool guide_phrase_completeness(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(1001);
  GenLimits limits;
  limits.max_entities = 12;
  limits.max_cas = 50;
  limits.max_ucas = 40;
  for (int i = 0; i < 300; ++i) {
    StpaModel model = random_model(rng, limits);
    std::size_t cells = enumerate_candidates(model).size();
    if (cells != 4 * model.control_actions.size()) {
      detail = "model " + std::to_string(i) + " produced " + std::to_string(cells) + " cells for " +
               std::to_string(model.control_actions.size()) + " control actions";
      return false;
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  if (ms >= 5000) {
    detail = "property gate took " + std::to_string(ms) + " ms (limit 5000)";
    return false;
  }
  return true;
}

// Criterion 2: the bundled corpus validates cleanly through the CLI and
// the focus report for L1 is byte-identical to the committed golden file.
bool corpus_reproduction(std::string& detail) {
  const std::string corpus = stpa::testing::corpus_path();
  int validate_rc = run_command(std::string(STPA_CLI_PATH) + " validate " + corpus, nullptr);
  if (validate_rc != 0) {
    detail = "validate exited " + std::to_string(validate_rc);
    return false;
  }
  std::string focus_out;
  int focus_rc =
      run_command(std::string(STPA_CLI_PATH) + " focus " + corpus + " --loss L1", &focus_out);
  if (focus_rc != 0) {
    detail = "focus exited " + std::to_string(focus_rc);
    return false;
  }
  std::string golden = read_file(std::string(STPA_GOLDEN_DIR) + "/focus_l1.txt");
  if (focus_out != golden) {
    detail = "focus output differs from golden file";
    return false;
  }
  return true;
}

// Criterion 3: in 1000 randomized valid models, every loss scenario has
// at least one trace path to a loss. Zero violations tolerated.
bool traceability_soundness(std::string& detail) {
  std::mt19937 rng(1003);
  for (int i = 0; i < 1000; ++i) {
    StpaModel model = random_model(rng);
    TraceGraph graph = build_trace_graph(model);
    for (const auto& [id, scenario] : model.scenarios) {
      auto paths = trace(graph, NodeRef{ElementKind::Scenario, id}, ElementKind::Loss);
      if (paths.empty()) {
        detail = "scenario '" + id.str() + "' in model " + std::to_string(i) +
                 " has no path to a loss";
        return false;
      }
    }
  }
  return true;
}

// Criterion 4: serialize-parse is a fixpoint (byte-identical on the
// second pass) for the corpus and 1000 randomized models.
bool round_trip(std::string& detail) {
  std::string corpus_text = serialize(load_corpus());
  ParseResult corpus_again = parse(corpus_text, "corpus-canonical.stpa");
  if (!corpus_again.ok() || serialize(*corpus_again.model) != corpus_text) {
    detail = "corpus canonical form is not a fixpoint";
    return false;
  }
  std::mt19937 rng(1004);
  for (int i = 0; i < 1000; ++i) {
    StpaModel model = random_model(rng);
    std::string first = serialize(model);
    ParseResult reparsed = parse(first, "gen.stpa");
    if (!reparsed.ok()) {
      detail = "model " + std::to_string(i) + " failed to reparse its canonical form";
      return false;
    }
    if (serialize(*reparsed.model) != first) {
      detail = "model " + std::to_string(i) + " is not a serialize-parse fixpoint";
      return false;
    }
  }
  return true;
}

// Criterion 5: the generated CAE tree for the corpus alternates
// claim/argument, carries one evidence node per reachable mitigation,
// and its node multiset equals the hand-derived fixture.
bool safety_case_shape(std::string& detail) {
  StpaModel model = load_corpus();
  CaeNode root = generate_case(model, model.context);

  bool alternation_ok = true;
  std::multiset<std::string> observed;
  std::multiset<std::string> evidence_sources;
  auto walk = [&](auto&& self, const CaeNode& node) -> void {
    observed.insert(std::string(to_keyword(node.kind)) + " " + node.id);
    if (node.kind == CaeKind::Evidence) {
      if (!node.children.empty()) alternation_ok = false;
      if (node.source_element) evidence_sources.insert(node.source_element->str());
      return;
    }
    if (node.children.empty()) {
      if (node.kind != CaeKind::Claim || node.developed) alternation_ok = false;
      return;
    }
    for (const CaeNode& child : node.children) {
      bool child_ok = node.kind == CaeKind::Claim ? child.kind == CaeKind::Argument
                                                  : child.kind != CaeKind::Argument;
      if (!child_ok) alternation_ok = false;
      self(self, child);
    }
  };
  walk(walk, root);

  if (!alternation_ok) {
    detail = "claim/argument alternation violated";
    return false;
  }

  std::multiset<std::string> expected_evidence;
  for (const auto& [id, mitigation] : model.mitigations) expected_evidence.insert(id.str());
  if (evidence_sources != expected_evidence) {
    detail = "evidence nodes do not cover the reachable mitigations exactly once";
    return false;
  }

  std::multiset<std::string> expected;
  std::istringstream fixture(read_file(std::string(STPA_GOLDEN_DIR) + "/case_counts.txt"));
  std::string line;
  while (std::getline(fixture, line)) {
    if (!line.empty()) expected.insert(line);
  }
  if (observed != expected) {
    detail = "node multiset differs from the committed fixture (" +
             std::to_string(observed.size()) + " vs " + std::to_string(expected.size()) +
             " nodes)";
    return false;
  }
  return true;
}

// Criterion 6: the corpus coverage report lists CA11 among the control
// actions with no return feedback.
bool feedback_gap_lint(std::string& detail) {
  CoverageReport report = coverage(load_corpus());
  bool found = std::any_of(report.cas_without_return_feedback.begin(),
                           report.cas_without_return_feedback.end(),
                           [](const CaId& id) { return id == Identifier("CA11"); });
  if (!found) {
    detail = "CA11 missing from cas_without_return_feedback";
    return false;
  }
  return true;
}

// Criterion 7: impact(corpus, [CA7]) equals the hand-computed downstream
// set, and impact is monotone in the changed set on random models.
bool impact_closure(std::string& detail) {
  std::vector<Identifier> impacted = impact(load_corpus(), {Identifier("CA7")});
  std::vector<std::string> got;
  for (const Identifier& id : impacted) got.push_back(id.str());
  if (got != std::vector<std::string>{"LS7.3.1", "M1", "UCA7.3"}) {
    detail = "impact(corpus, [CA7]) mismatch";
    return false;
  }

  std::mt19937 rng(1007);
  for (int i = 0; i < 200; ++i) {
    StpaModel model = random_model(rng);
    std::vector<Identifier> all;
    for (const auto& [id, loss] : model.losses) all.push_back(id);
    for (const auto& [id, hazard] : model.hazards) all.push_back(id);
    for (const auto& [id, ca] : model.control_actions) all.push_back(id);
    for (const auto& [id, uca] : model.ucas) all.push_back(id);
    for (const auto& [id, scenario] : model.scenarios) all.push_back(id);
    if (all.size() < 2) continue;
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t cut = 1 + static_cast<std::size_t>(stpa::testing::pick(rng, 0, all.size() - 2));
    std::vector<Identifier> subset(all.begin(), all.begin() + cut);

    std::vector<Identifier> small_impact = impact(model, subset);
    std::vector<Identifier> large_impact = impact(model, all);
    std::set<Identifier> large_set(large_impact.begin(), large_impact.end());
    for (const Identifier& id : small_impact) {
      if (!large_set.count(id)) {
        detail = "monotonicity violated for '" + id.str() + "' in model " + std::to_string(i);
        return false;
      }
    }
  }
  return true;
}

// Criterion 8: DOT output for the corpus and 100 random models passes
// the in-repo tokenizer; control-action edges are red, feedback blue.
bool dot_validity(std::string& detail) {
  auto check_model = [&](const StpaModel& model, bool cluster, const std::string& what) {
    stpa::testing::DotGraph graph = parse_dot(to_dot(model, cluster));
    std::size_t red = 0;
    std::size_t blue = 0;
    for (const auto& edge : graph.edges) {
      auto color = edge.attrs.find("color");
      if (color == edge.attrs.end()) {
        detail = what + ": edge without color";
        return false;
      }
      if (color->second == "red") {
        ++red;
      } else if (color->second == "blue") {
        ++blue;
      } else {
        detail = what + ": unexpected edge color " + color->second;
        return false;
      }
    }
    if (red != model.control_actions.size() || blue != model.feedback_links.size()) {
      detail = what + ": edge color counts do not match the model";
      return false;
    }
    return true;
  };

  if (!check_model(load_corpus(), false, "corpus")) return false;
  if (!check_model(load_corpus(), true, "corpus clustered")) return false;
  std::mt19937 rng(1008);
  for (int i = 0; i < 100; ++i) {
    if (!check_model(random_model(rng), i % 2 == 0, "model " + std::to_string(i))) return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "guide-phrase completeness (4 cells per control action, < 5 s)",
            guide_phrase_completeness);
  criterion(2, "corpus reproduction (validate exit 0; focus L1 golden)", corpus_reproduction);
  criterion(3, "traceability soundness (1000 models, every scenario reaches a loss)",
            traceability_soundness);
  criterion(4, "round-trip (serialize-parse fixpoint, corpus + 1000 models)", round_trip);
  criterion(5, "safety-case pattern shape (alternation, evidence, fixture multiset)",
            safety_case_shape);
  criterion(6, "feedback-gap lint (corpus reports CA11)", feedback_gap_lint);
  criterion(7, "impact closure (CA7 downstream set; monotonicity)", impact_closure);
  criterion(8, "DOT validity (tokenizer; red control, blue feedback)", dot_validity);

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
