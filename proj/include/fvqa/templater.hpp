#ifndef FVQA_TEMPLATER_HPP_
#define FVQA_TEMPLATER_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/frame_schema.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

enum class WhClass { kWho, kWhere, kWhat, kWhatPhrase };

struct WhWord {
  WhClass cls = WhClass::kWhat;
  std::string text;  // only used by kWhatPhrase, e.g. "what item"
  // Instrument elements take the "what does the AGENT use to ..." form when
  // their connector is "using" or "with".
  bool instrument = false;

  // Lowercase interrogative phrase that opens the question.
  std::string phrase() const {
    switch (cls) {
      case WhClass::kWho: return "who";
      case WhClass::kWhere: return "where";
      case WhClass::kWhat: return "what";
      case WhClass::kWhatPhrase: return text;
    }
    return "what";
  }

  bool operator==(const WhWord&) const = default;
};

class WhLexicon {
 public:
  WhLexicon() = default;

  void set(std::string element, WhWord word) {
    entries_[std::move(element)] = std::move(word);
  }
  const WhWord* find(std::string_view element) const {
    auto it = entries_.find(element);
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return entries_.size(); }

  // Entries for the elements shown in the published sample tables. Anything
  // else falls through to the "what <element>" default.
  static WhLexicon defaults() {
    WhLexicon lex;
    for (auto e : {"AGENT", "SELLER", "COAGENT", "VICTIM"}) {
      lex.set(e, {WhClass::kWho, {}, false});
    }
    for (auto e : {"PLACE", "LOCATION"}) lex.set(e, {WhClass::kWhere, {}, false});
    for (auto e : {"FOOD", "CONTAINER", "HEATSOURCE", "PAYMENT"}) {
      lex.set(e, {WhClass::kWhat, {}, false});
    }
    for (auto e : {"ITEM", "GOODS", "CAUGHTITEM"}) {
      lex.set(e, {WhClass::kWhatPhrase, "what item", false});
    }
    lex.set("TOOL", {WhClass::kWhat, {}, true});
    return lex;
  }

  // {"AGENT": {"wh": "who"}, "GOODS": {"wh": "what_phrase", "text": "what
  // item"}, "TOOL": {"wh": "what", "instrument": true}}
  static WhLexicon from_json(const Json& j, const std::string& source = "<lexicon>") {
    if (!j.is_object()) {
      throw Error(ErrorCode::kParse, source + ": lexicon must be a JSON object");
    }
    WhLexicon lex;
    for (const auto& [element, entry] : j.items()) {
      if (!entry.is_object() || !entry.contains("wh")) {
        throw Error(ErrorCode::kParse, source + ": entry " + element + " needs \"wh\"");
      }
      const auto wh = entry["wh"].get<std::string>();
      WhWord word;
      word.instrument = entry.value("instrument", false);
      if (wh == "who") {
        word.cls = WhClass::kWho;
      } else if (wh == "where") {
        word.cls = WhClass::kWhere;
      } else if (wh == "what") {
        word.cls = WhClass::kWhat;
      } else if (wh == "what_phrase") {
        word.cls = WhClass::kWhatPhrase;
        word.text = text::normalize_answer(
            entry.value("text", "what " + text::to_lower(element)));
      } else {
        throw Error(ErrorCode::kParse,
                    source + ": entry " + element + " has unknown wh \"" + wh + "\"");
      }
      lex.set(text::to_upper(element), std::move(word));
    }
    return lex;
  }

  static WhLexicon load(const std::string& path) {
    return from_json(read_json_file(path), path);
  }

 private:
  std::map<std::string, WhWord, std::less<>> entries_;
};

inline WhWord wh_word_for(std::string_view element, const WhLexicon& lexicon) {
  if (const auto* entry = lexicon.find(element)) return *entry;
  return {WhClass::kWhatPhrase, "what " + text::to_lower(element), false};
}

inline constexpr std::string_view kVerbTarget = "VERB";

struct QuestionTemplate {
  std::string verb_id;
  std::string target;                // element name or kVerbTarget
  std::vector<std::string> context;  // in slot order
  std::string surface;
  std::size_t ordinal = 0;  // position in the verb's generated list

  bool operator==(const QuestionTemplate&) const = default;
};

namespace grammar {

// Connectors are read verbatim from definitions; "using" is asked about as
// "with" ("What does the AGENT cook with TOOL?").
inline std::string render_connector(std::string_view connector) {
  if (connector == "using") return "with";
  return std::string(connector);
}

inline void append_context(std::vector<std::string>& words, const VerbFrame& frame,
                           const std::vector<std::size_t>& context) {
  for (std::size_t idx : context) {
    const Slot& s = frame.slots[idx];
    if (s.is_subject()) continue;  // already the actor of the question
    if (s.connector) words.push_back(render_connector(*s.connector));
    words.push_back(s.element);
  }
}

inline std::string finish(std::vector<std::string> words) {
  return text::capitalize_first(text::join(words, " ") + "?");
}

inline bool is_instrument(const Slot& slot, const WhWord& wh) {
  if (slot.element == "TOOL") return true;
  return wh.instrument && slot.connector &&
         (*slot.connector == "using" || *slot.connector == "with");
}

}  // namespace grammar

// Builds the question surface for one (target, context) choice.
inline std::string render_surface(const VerbFrame& frame, std::size_t target,
                                  const std::vector<std::size_t>& context,
                                  const WhLexicon& lexicon) {
  const Slot& slot = frame.slots[target];
  const WhWord wh = wh_word_for(slot.element, lexicon);
  const std::string& actor = frame.subject().element;
  std::vector<std::string> words;

  if (target == 0) {
    // "Who is cooking?", "Who is buying GOODS?"
    words = {wh.phrase(), "is", frame.forms.gerund};
    grammar::append_context(words, frame, context);
  } else if (grammar::is_instrument(slot, wh)) {
    words = {"what", "does", "the", actor, "use", "to", frame.forms.base};
    grammar::append_context(words, frame, context);
  } else if (wh.cls == WhClass::kWhere || slot.element == "PLACE") {
    words = {"where", "does", "the", actor, frame.forms.base};
    grammar::append_context(words, frame, context);
  } else {
    // "Who does the AGENT buy GOODS from?" strands the target's connector.
    words = {wh.phrase(), "does", "the", actor, frame.forms.base};
    grammar::append_context(words, frame, context);
    if (slot.connector) words.push_back(*slot.connector);
  }
  return grammar::finish(std::move(words));
}

// Hold-one-out enumeration: every slot is a target once, and for each target
// every subset of the other slots (binary-counting order over slot order, size
// capped by max_context) becomes the context. A VERB-target template is
// appended when the frame has an AGENT.
inline std::vector<QuestionTemplate> generate_templates(
    const VerbFrame& frame, const WhLexicon& lexicon,
    std::optional<std::size_t> max_context = std::nullopt) {
  std::vector<QuestionTemplate> out;
  const std::size_t k = frame.slots.size();
  if (k == 0) return out;
  if (k > 63) throw Error(ErrorCode::kOutOfRange, "frame has too many slots");

  for (std::size_t target = 0; target < k; ++target) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != target) others.push_back(i);
    }
    const std::uint64_t subsets = std::uint64_t{1} << others.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      if (max_context &&
          static_cast<std::size_t>(std::popcount(mask)) > *max_context) {
        continue;
      }
      std::vector<std::size_t> context;
      for (std::size_t b = 0; b < others.size(); ++b) {
        if (mask & (std::uint64_t{1} << b)) context.push_back(others[b]);
      }
      QuestionTemplate t;
      t.verb_id = frame.verb_id;
      t.target = frame.slots[target].element;
      for (std::size_t idx : context) t.context.push_back(frame.slots[idx].element);
      t.surface = render_surface(frame, target, context, lexicon);
      t.ordinal = out.size();
      out.push_back(std::move(t));
    }
  }

  if (frame.has("AGENT")) {
    QuestionTemplate t;
    t.verb_id = frame.verb_id;
    t.target = std::string(kVerbTarget);
    t.surface = "What is the AGENT doing?";
    t.ordinal = out.size();
    out.push_back(std::move(t));
  }
  return out;
}

using TemplateMap = std::map<std::string, std::vector<QuestionTemplate>, std::less<>>;

inline TemplateMap generate_all(const FrameSet& frames, const WhLexicon& lexicon,
                                std::optional<std::size_t> max_context = std::nullopt) {
  TemplateMap all;
  for (const auto& [verb, frame] : frames) {
    all.emplace(verb, generate_templates(frame, lexicon, max_context));
  }
  return all;
}

inline std::size_t total_templates(const TemplateMap& all) {
  std::size_t n = 0;
  for (const auto& [verb, list] : all) n += list.size();
  return n;
}

inline Json to_json(const QuestionTemplate& t) {
  return Json{{"verb", t.verb_id},
              {"target", t.target},
              {"context", t.context},
              {"surface", t.surface}};
}

inline QuestionTemplate template_from_json(const Json& j) {
  QuestionTemplate t;
  t.verb_id = j.at("verb").get<std::string>();
  t.target = j.at("target").get<std::string>();
  t.context = j.value("context", std::vector<std::string>{});
  t.surface = j.at("surface").get<std::string>();
  return t;
}

inline void write_templates_jsonl(std::ostream& out, const TemplateMap& all) {
  for (const auto& [verb, list] : all) {
    for (const auto& t : list) out << to_json(t).dump() << '\n';
  }
}

}  // namespace fvqa

#endif  // FVQA_TEMPLATER_HPP_
