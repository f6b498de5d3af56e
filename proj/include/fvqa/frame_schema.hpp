#ifndef FVQA_FRAME_SCHEMA_HPP_
#define FVQA_FRAME_SCHEMA_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

struct VerbForms {
  std::string base;          // cook
  std::string third_person;  // cooks
  std::string gerund;        // cooking

  // Naive English morphology for verbs whose schema record omits a form.
  static VerbForms from_base(std::string_view base);

  bool operator==(const VerbForms&) const = default;
};

namespace morphology {

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

inline std::string third_person(std::string_view base) {
  std::string b(base);
  if (b.empty()) return b;
  if (ends_with(b, "s") || ends_with(b, "x") || ends_with(b, "z") ||
      ends_with(b, "ch") || ends_with(b, "sh") || ends_with(b, "o")) {
    return b + "es";
  }
  if (b.size() >= 2 && b.back() == 'y' && !is_vowel(b[b.size() - 2])) {
    return b.substr(0, b.size() - 1) + "ies";
  }
  return b + "s";
}

inline std::string gerund(std::string_view base) {
  std::string b(base);
  if (b.empty()) return b;
  if (ends_with(b, "ie")) return b.substr(0, b.size() - 2) + "ying";
  if (ends_with(b, "ee") || ends_with(b, "ye") || ends_with(b, "oe")) {
    return b + "ing";
  }
  if (b.size() >= 2 && b.back() == 'e') return b.substr(0, b.size() - 1) + "ing";

  // Consonant doubling for single-syllable consonant-vowel-consonant stems
  // (stop -> stopping, sit -> sitting).
  if (b.size() >= 3) {
    const char c1 = b[b.size() - 3], v = b[b.size() - 2], c2 = b.back();
    int vowel_groups = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (is_vowel(b[i]) && (i == 0 || !is_vowel(b[i - 1]))) ++vowel_groups;
    }
    if (!is_vowel(c1) && is_vowel(v) && !is_vowel(c2) && c2 != 'w' &&
        c2 != 'x' && c2 != 'y' && vowel_groups == 1) {
      return b + c2 + "ing";
    }
  }
  return b + "ing";
}

}  // namespace morphology

inline VerbForms VerbForms::from_base(std::string_view base) {
  return VerbForms{std::string(base), morphology::third_person(base),
                   morphology::gerund(base)};
}

// A frame-element position in an abstract definition. The subject slot has
// neither a connector nor the direct-object flag.
struct Slot {
  std::string element;
  std::optional<std::string> connector;
  bool is_direct_object = false;

  bool is_subject() const { return !connector && !is_direct_object; }
  bool operator==(const Slot&) const = default;
};

struct VerbFrame {
  std::string verb_id;
  VerbForms forms;
  std::vector<Slot> slots;
  std::string definition_text;

  std::optional<std::size_t> index_of(std::string_view element) const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].element == element) return i;
    }
    return std::nullopt;
  }
  bool has(std::string_view element) const {
    return index_of(element).has_value();
  }
  const Slot& subject() const { return slots.front(); }

  bool operator==(const VerbFrame&) const = default;
};

using FrameSet = std::map<std::string, VerbFrame, std::less<>>;

inline bool is_article(std::string_view lowered) {
  return lowered == "a" || lowered == "an" || lowered == "the";
}

// Parses the constrained abstract-definition sublanguage, e.g.
//   "an AGENT cooks a FOOD in a CONTAINER over a HEATSOURCE using a TOOL"
// Uppercase tokens are slots in order of appearance. A slot's connector is the
// last non-article lowercase word since the previous slot or the verb; a
// post-verb slot with no such word is the direct object. The first slot must
// precede the verb and is the subject.
inline VerbFrame parse_abstract_definition(std::string_view text,
                                           const VerbForms& forms,
                                           std::string verb_id = {}) {
  VerbFrame frame;
  frame.verb_id = verb_id.empty() ? forms.gerund : std::move(verb_id);
  frame.forms = forms;
  frame.definition_text = std::string(text);

  struct Token {
    std::string raw;
    bool slot;
  };
  std::vector<Token> tokens;
  for (const auto& word : text::split_ws(text)) {
    auto core = text::strip_nonalpha(word);
    if (core.empty()) continue;
    const auto lowered = text::to_lower(core);
    if (!is_article(lowered) && text::is_upper_run(core)) {
      tokens.push_back({std::string(core), true});
    } else {
      tokens.push_back({lowered, false});
    }
  }

  const bool any_slot = std::any_of(tokens.begin(), tokens.end(),
                                    [](const Token& t) { return t.slot; });
  if (!any_slot) {
    throw Error(ErrorCode::kNoSlotsFound,
                "no uppercase slot in \"" + frame.definition_text + "\"");
  }

  std::optional<std::size_t> verb_at;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].slot && (tokens[i].raw == forms.third_person ||
                            tokens[i].raw == forms.base)) {
      verb_at = i;
      break;
    }
  }
  if (!verb_at) {
    throw Error(ErrorCode::kVerbNotFound,
                "neither \"" + forms.third_person + "\" nor \"" + forms.base +
                    "\" in \"" + frame.definition_text + "\"");
  }

  std::optional<std::string> pending;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (i == *verb_at) {
      pending.reset();
      continue;
    }
    if (!tok.slot) {
      if (!is_article(tok.raw)) pending = tok.raw;
      continue;
    }
    if (!seen.insert(tok.raw).second) {
      throw Error(ErrorCode::kParse, "slot " + tok.raw + " repeated in \"" +
                                         frame.definition_text + "\"");
    }
    Slot slot;
    slot.element = tok.raw;
    if (frame.slots.empty()) {
      if (i > *verb_at) {
        throw Error(ErrorCode::kNoSubject, "first slot " + tok.raw +
                                               " follows the verb in \"" +
                                               frame.definition_text + "\"");
      }
    } else if (pending) {
      slot.connector = *pending;
    } else {
      slot.is_direct_object = true;
    }
    pending.reset();
    frame.slots.push_back(std::move(slot));
  }
  return frame;
}

// Schema records: [{"verb": "cooking", "forms": {"base": "cook", "third":
// "cooks", "gerund": "cooking"}, "abstract": "an AGENT cooks a FOOD ..."}].
// Missing forms fall back to VerbForms::from_base; a missing base falls back
// to the verb id.
inline FrameSet parse_frameset(const Json& records,
                               const std::string& source = "<schema>") {
  if (!records.is_array()) {
    throw Error(ErrorCode::kParse, source + ": schema must be a JSON array");
  }
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyFrameSet, source + ": no verb records");
  }
  FrameSet frames;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::string where = source + ": record " + std::to_string(i + 1);
    if (!rec.is_object() || !rec.contains("verb") || !rec.contains("abstract")) {
      throw Error(ErrorCode::kParse, where + ": needs \"verb\" and \"abstract\"");
    }
    const auto verb = rec["verb"].get<std::string>();
    VerbForms forms;
    const Json no_forms = Json::object();
    const Json& f = rec.contains("forms") ? rec["forms"] : no_forms;
    forms.base = f.value("base", verb);
    const auto fallback = VerbForms::from_base(forms.base);
    forms.third_person = f.value("third", fallback.third_person);
    forms.gerund = f.value("gerund", fallback.gerund);

    VerbFrame frame;
    try {
      frame = parse_abstract_definition(rec["abstract"].get<std::string>(),
                                        forms, verb);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse,
                  where + " (verb '" + verb + "'): " + e.what());
    }
    if (!frames.emplace(verb, std::move(frame)).second) {
      throw Error(ErrorCode::kDuplicateVerb,
                  where + ": verb '" + verb + "' defined twice");
    }
  }
  return frames;
}

inline FrameSet load_frameset(const std::string& path) {
  auto in = open_input(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (text::trim(content).empty()) {
    throw Error(ErrorCode::kEmptyFrameSet, path + ": empty file");
  }
  Json records;
  try {
    records = Json::parse(content);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  return parse_frameset(records, path);
}

}  // namespace fvqa

#endif  // FVQA_FRAME_SCHEMA_HPP_
