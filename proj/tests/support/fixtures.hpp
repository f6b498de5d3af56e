#ifndef FVQA_TESTS_SUPPORT_FIXTURES_HPP_
#define FVQA_TESTS_SUPPORT_FIXTURES_HPP_

#include <string>
#include <vector>

#include "fvqa/frame_schema.hpp"
#include "fvqa/realizer.hpp"

namespace fvqa::testing {

// The four verbs of the published sample tables.
inline Json sample_schema_json() {
  return Json::parse(R"([
    {"verb": "cooking", "forms": {"base": "cook", "third": "cooks", "gerund": "cooking"},
     "abstract": "an AGENT cooks a FOOD in a CONTAINER over a HEATSOURCE using a TOOL in a PLACE"},
    {"verb": "buying", "forms": {"base": "buy", "third": "buys", "gerund": "buying"},
     "abstract": "AGENT buys GOODS with PAYMENT from the SELLER in a PLACE"},
    {"verb": "catching", "forms": {"base": "catch", "third": "catches", "gerund": "catching"},
     "abstract": "an AGENT catches a CAUGHTITEM with a TOOL at a PLACE"},
    {"verb": "opening", "forms": {"base": "open", "third": "opens", "gerund": "opening"},
     "abstract": "the AGENT opens the ITEM with the TOOL at the PLACE"}
  ])");
}

inline FrameSet sample_frames() { return parse_frameset(sample_schema_json(), "sample"); }

inline ImageAnnotation make_annotation(
    std::string image, std::string verb,
    std::vector<std::pair<std::string, std::string>> fillers, int annotator = 0) {
  ImageAnnotation a;
  a.image_id = std::move(image);
  a.verb_id = std::move(verb);
  a.annotator_index = annotator;
  for (auto& [k, v] : fillers) a.fillers[k] = v;
  return a;
}

// A cooking image with a blank heat source.
inline ImageAnnotation boy_cooking() {
  return make_annotation("cooking_21", "cooking",
                         {{"AGENT", "boy"},
                          {"FOOD", "meat"},
                          {"CONTAINER", "wok"},
                          {"HEATSOURCE", ""},
                          {"TOOL", "spatula"},
                          {"PLACE", "kitchen"}});
}

// First buying image: Seller and Place cells are blank.
inline ImageAnnotation adolescent_buying() {
  return make_annotation("buying_3", "buying",
                         {{"AGENT", "adolescent"},
                          {"GOODS", "book"},
                          {"PAYMENT", "cash"},
                          {"SELLER", ""},
                          {"PLACE", ""}});
}

inline ImageAnnotation woman_buying() {
  return make_annotation("buying_7", "buying",
                         {{"AGENT", "woman"},
                          {"GOODS", "shoe"},
                          {"PAYMENT", "credit card"},
                          {"SELLER", "person"},
                          {"PLACE", "shoe shop"}});
}

}  // namespace fvqa::testing

#endif  // FVQA_TESTS_SUPPORT_FIXTURES_HPP_
