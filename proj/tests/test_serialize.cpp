#include <doctest.h>

#include <random>
#include <string>

#include "corpus_fixture.hpp"
#include "generators.hpp"
#include "stpa/parse.hpp"
#include "stpa/serialize.hpp"

using namespace stpa;
using stpa::testing::load_corpus;
using stpa::testing::random_model;

TEST_CASE("empty model serializes to exactly the header line") {
  StpaModel model;
  model.name = "m";
  CHECK(serialize(model) == "model \"m\" context \"\"\n");
}

TEST_CASE("statements are grouped and sorted regardless of declaration order") {
  ParseResult result = parse(
      "model \"m\" context \"\"\n"
      "entity b \"B\" kind process\n"
      "loss L2 \"two\"\n"
      "entity a \"A\" kind controller\n"
      "hazard H1 \"h\" leads_to [L2, L1]\n"
      "loss L1 \"one\"\n",
      "shuffled.stpa");
  REQUIRE(result.ok());
  CHECK(serialize(*result.model) ==
        "model \"m\" context \"\"\n"
        "loss L1 \"one\"\n"
        "loss L2 \"two\"\n"
        "hazard H1 \"h\" leads_to [L2, L1]\n"  // list order is content, not formatting
        "entity a \"A\" kind controller\n"
        "entity b \"B\" kind process\n");
}

TEST_CASE("corpus serialization is a fixpoint") {
  std::string first = serialize(load_corpus());
  ParseResult reparsed = parse(first, "canonical.stpa");
  REQUIRE(reparsed.ok());
  CHECK(serialize(*reparsed.model) == first);
}

TEST_CASE("serialize-parse fixpoint holds for random models") {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    StpaModel model = random_model(rng);
    std::string first = serialize(model);
    ParseResult reparsed = parse(first, "gen.stpa");
    REQUIRE_MESSAGE(reparsed.ok(), "iteration " << i << ": " << first);
    CHECK(serialize(*reparsed.model) == first);
  }
}

TEST_CASE("escaped characters survive the round trip") {
  StpaModel model;
  model.name = "quote \" slash \\";
  model.context = "line\nbreak\ttab\rcr";
  std::string text = serialize(model);
  ParseResult reparsed = parse(text, "esc.stpa");
  REQUIRE(reparsed.ok());
  CHECK(reparsed.model->name == model.name);
  CHECK(reparsed.model->context == model.context);
  CHECK(serialize(*reparsed.model) == text);
}

TEST_CASE("optional clauses are omitted when at their defaults") {
  ParseResult result = parse(
      "model \"m\" context \"\"\n"
      "loss L1 \"x\"\n"
      "hazard H1 \"h\" leads_to [L1]\n"
      "entity a \"A\" kind controller boundary inside\n"
      "entity b \"B\" kind process\n"
      "ca CA1 from a to b \"act\"\n"
      "uca U1 on CA1 type not_provided context \"c\" hazards [H1]\n"
      "scenario S1 on U1 category human \"d\"\n"
      "mitigation M1 addresses [S1] \"fix\" status proposed\n",
      "defaults.stpa");
  REQUIRE(result.ok());
  std::string text = serialize(*result.model);
  CHECK(text.find("boundary") == std::string::npos);
  CHECK(text.find("status") == std::string::npos);
  CHECK(text.find("mechanism") == std::string::npos);
  CHECK(text.find("priority") == std::string::npos);
}
