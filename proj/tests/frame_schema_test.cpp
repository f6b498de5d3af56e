#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fvqa/frame_schema.hpp"
#include "support/fixtures.hpp"

namespace fvqa {
namespace {

std::vector<std::string> elements(const VerbFrame& f) {
  std::vector<std::string> out;
  for (const auto& s : f.slots) out.push_back(s.element);
  return out;
}

TEST(ParseAbstractDefinition, Cooking) {
  const auto f = parse_abstract_definition(
      "an AGENT cooks a FOOD in a CONTAINER over a HEATSOURCE using a TOOL in a PLACE",
      {"cook", "cooks", "cooking"});
  EXPECT_EQ(f.verb_id, "cooking");
  ASSERT_EQ(f.slots.size(), 6u);
  EXPECT_TRUE(f.slots[0].is_subject());
  EXPECT_EQ(f.slots[0].element, "AGENT");
  EXPECT_TRUE(f.slots[1].is_direct_object);
  EXPECT_FALSE(f.slots[1].connector);
  const std::vector<std::string> connectors = {"in", "over", "using", "in"};
  for (std::size_t i = 0; i < connectors.size(); ++i) {
    ASSERT_TRUE(f.slots[i + 2].connector);
    EXPECT_EQ(*f.slots[i + 2].connector, connectors[i]);
    EXPECT_FALSE(f.slots[i + 2].is_direct_object);
  }
  EXPECT_EQ(elements(f), (std::vector<std::string>{"AGENT", "FOOD", "CONTAINER", "HEATSOURCE",
                                                   "TOOL", "PLACE"}));
}

TEST(ParseAbstractDefinition, BuyingDropsArticleBeforeSeller) {
  const auto f = parse_abstract_definition(
      "AGENT buys GOODS with PAYMENT from the SELLER in a PLACE", {"buy", "buys", "buying"});
  ASSERT_EQ(f.slots.size(), 5u);
  EXPECT_TRUE(f.slots[0].is_subject());
  EXPECT_TRUE(f.slots[1].is_direct_object);
  EXPECT_EQ(*f.slots[2].connector, "with");
  EXPECT_EQ(*f.slots[3].connector, "from");
  EXPECT_EQ(*f.slots[4].connector, "in");
}

TEST(ParseAbstractDefinition, MinimalFrame) {
  const auto f = parse_abstract_definition("the AGENT sleeps", VerbForms::from_base("sleep"));
  ASSERT_EQ(f.slots.size(), 1u);
  EXPECT_TRUE(f.slots[0].is_subject());
}

TEST(ParseAbstractDefinition, UnseenConnectorKeptVerbatim) {
  const auto f = parse_abstract_definition("an AGENT sprays SUBSTANCE onto a DESTINATION",
                                           VerbForms::from_base("spray"));
  EXPECT_EQ(*f.slots[2].connector, "onto");
}

TEST(ParseAbstractDefinition, Errors) {
  const auto cook = VerbForms::from_base("cook");
  try {
    parse_abstract_definition("someone cooks something", cook);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSlotsFound);
  }
  try {
    parse_abstract_definition("an AGENT bakes a FOOD", cook);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVerbNotFound);
  }
  try {
    parse_abstract_definition("cooks a FOOD", cook);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSubject);
  }
  try {
    parse_abstract_definition("an AGENT cooks an AGENT", cook);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(VerbForms, NaiveMorphology) {
  EXPECT_EQ(VerbForms::from_base("cook"), (VerbForms{"cook", "cooks", "cooking"}));
  EXPECT_EQ(VerbForms::from_base("catch"), (VerbForms{"catch", "catches", "catching"}));
  EXPECT_EQ(VerbForms::from_base("open"), (VerbForms{"open", "opens", "opening"}));
  EXPECT_EQ(VerbForms::from_base("stop"), (VerbForms{"stop", "stops", "stopping"}));
  EXPECT_EQ(VerbForms::from_base("bake"), (VerbForms{"bake", "bakes", "baking"}));
  EXPECT_EQ(VerbForms::from_base("carry"), (VerbForms{"carry", "carries", "carrying"}));
  EXPECT_EQ(VerbForms::from_base("tie"), (VerbForms{"tie", "ties", "tying"}));
  EXPECT_EQ(VerbForms::from_base("buy"), (VerbForms{"buy", "buys", "buying"}));
  EXPECT_EQ(VerbForms::from_base("go").third_person, "goes");
  EXPECT_EQ(VerbForms::from_base("see").gerund, "seeing");
}

// Random definitions in the sublanguage: slot order, slot count and
// determinism all follow from the token sequence.
TEST(ParseAbstractDefinition, PropertiesOnRandomDefinitions) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> names = {"AGENT", "FOOD",  "TOOL",   "PLACE",
                                          "ITEM",  "GOODS", "SELLER", "VICTIM"};
  const std::vector<std::string> preps = {"in", "with", "using", "at", "from", "over", "onto"};
  const std::vector<std::string> arts = {"", "a", "an", "the"};
  const auto forms = VerbForms::from_base("cook");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> chosen = names;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(1 + rng() % 6);
    std::ostringstream def;
    def << arts[rng() % arts.size()] << ' ' << chosen[0] << " cooks";
    for (std::size_t i = 1; i < chosen.size(); ++i) {
      if (i > 1 || rng() % 2) def << ' ' << preps[rng() % preps.size()];
      def << ' ' << arts[rng() % arts.size()] << ' ' << chosen[i];
    }
    const auto f = parse_abstract_definition(def.str(), forms);
    EXPECT_EQ(elements(f), chosen) << def.str();
    EXPECT_EQ(f, parse_abstract_definition(def.str(), forms));
    for (std::size_t i = 1; i < f.slots.size(); ++i) {
      EXPECT_NE(static_cast<bool>(f.slots[i].connector), f.slots[i].is_direct_object);
    }
  }
}

TEST(LoadFrameset, ParsesRecordsAndFallsBackOnForms) {
  const auto frames = testing::sample_frames();
  EXPECT_EQ(frames.size(), 4u);
  EXPECT_EQ(frames.at("catching").forms.third_person, "catches");

  const auto two = parse_frameset(Json::parse(R"([
    {"verb": "cooking", "forms": {"base": "cook"}, "abstract": "an AGENT cooks a FOOD"},
    {"verb": "buying", "forms": {"base": "buy", "third": "buys", "gerund": "buying"},
     "abstract": "AGENT buys GOODS"}])"));
  EXPECT_EQ(two.size(), 2u);
  EXPECT_EQ(two.at("cooking").forms.gerund, "cooking");
}

TEST(LoadFrameset, Errors) {
  auto code_of = [](const std::string& text) {
    try {
      parse_frameset(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of("[]"), ErrorCode::kEmptyFrameSet);
  EXPECT_EQ(code_of(R"([{"verb": "x", "forms": {"base": "x"}, "abstract": "AGENT x"},
                        {"verb": "x", "forms": {"base": "x"}, "abstract": "AGENT x"}])"),
            ErrorCode::kDuplicateVerb);
  EXPECT_EQ(code_of(R"([{"verb": "cooking", "forms": {"base": "cook"},
                         "abstract": "an AGENT bakes"}])"),
            ErrorCode::kParse);
  try {
    parse_frameset(Json::parse(R"([{"verb": "cooking", "forms": {"base": "cook"},
                                    "abstract": "an AGENT bakes"}])"),
                   "schema.json");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("schema.json: record 1 (verb 'cooking')"),
              std::string::npos);
  }
}

TEST(LoadFrameset, EmptyFileIsEmptyFrameSet) {
  const std::string path = ::testing::TempDir() + "/empty_schema.json";
  { std::ofstream(path) << "  \n"; }
  try {
    load_frameset(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyFrameSet);
  }
}

}  // namespace
}  // namespace fvqa
