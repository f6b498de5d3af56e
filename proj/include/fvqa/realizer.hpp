#ifndef FVQA_REALIZER_HPP_
#define FVQA_REALIZER_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/frame_schema.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/templater.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

enum class Split { kTrain, kDev, kTest };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

inline Split parse_split(std::string_view s) {
  const auto lowered = text::to_lower(s);
  if (lowered == "train") return Split::kTrain;
  if (lowered == "dev" || lowered == "val" || lowered == "development") return Split::kDev;
  if (lowered == "test") return Split::kTest;
  throw Error(ErrorCode::kParse, "unknown split \"" + std::string(s) + "\"");
}

// One annotator's frame for one image. Absent or empty fillers mean the
// element is not visible.
struct ImageAnnotation {
  std::string image_id;
  std::string verb_id;
  std::map<std::string, std::string, std::less<>> fillers;
  int annotator_index = 0;

  std::string_view filler(std::string_view element) const {
    auto it = fillers.find(element);
    return it == fillers.end() ? std::string_view{} : std::string_view(it->second);
  }
};

struct QASample {
  std::string sample_id;
  std::string image_id;
  std::string verb_id;
  std::string question;
  std::string answer;
  std::string frame_element;  // element name or "VERB"
  Split split = Split::kTrain;
  std::vector<std::string> context;
  std::size_t template_ordinal = 0;

  bool operator==(const QASample&) const = default;
};

// Insertion-ordered string index; used for the answer (C) and element (R)
// class vocabularies.
class IndexedSet {
 public:
  IndexedSet() = default;
  explicit IndexedSet(std::vector<std::string> items) {
    for (auto& s : items) insert(std::move(s));
  }

  std::size_t insert(std::string s) {
    auto [it, fresh] = index_.emplace(s, items_.size());
    if (fresh) items_.push_back(std::move(s));
    return it->second;
  }
  std::optional<std::size_t> find(std::string_view s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& at(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<std::string>& items() const { return items_; }

  std::uint64_t hash() const {
    std::uint64_t h = text::fnv1a("");
    for (const auto& s : items_) {
      h = text::fnv1a(s, h);
      h = text::fnv1a(std::string_view("\x1f", 1), h);
    }
    return h;
  }

 private:
  std::vector<std::string> items_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Samples plus class vocabularies computed from the train split only, sorted
// lexicographically. Dev/test answers never seen in train have no index.
struct Dataset {
  std::vector<QASample> samples;
  IndexedSet answer_vocab;
  IndexedSet element_vocab;

  static Dataset from_samples(std::vector<QASample> samples) {
    Dataset d;
    std::set<std::string> answers, elements;
    for (const auto& s : samples) {
      if (s.split != Split::kTrain) continue;
      answers.insert(s.answer);
      elements.insert(s.frame_element);
    }
    d.answer_vocab = IndexedSet({answers.begin(), answers.end()});
    d.element_vocab = IndexedSet({elements.begin(), elements.end()});
    d.samples = std::move(samples);
    return d;
  }

  std::vector<QASample> split(Split s) const {
    std::vector<QASample> out;
    for (const auto& x : samples) {
      if (x.split == s) out.push_back(x);
    }
    return out;
  }
};

using SplitAssignment = std::map<std::string, Split, std::less<>>;

// Instantiates one template with one annotation. Returns nothing when the
// answer or any placeholder in the surface has an empty filler.
inline std::optional<QASample> realize(const QuestionTemplate& tmpl,
                                       const ImageAnnotation& ann,
                                       const VerbFrame& frame) {
  if (tmpl.verb_id != ann.verb_id || frame.verb_id != ann.verb_id) {
    throw Error(ErrorCode::kVerbMismatch, "template verb '" + tmpl.verb_id +
                                              "' vs annotation verb '" +
                                              ann.verb_id + "'");
  }

  QASample s;
  s.image_id = ann.image_id;
  s.verb_id = ann.verb_id;
  s.frame_element = tmpl.target;
  s.context = tmpl.context;
  s.template_ordinal = tmpl.ordinal;
  if (tmpl.target == kVerbTarget) {
    s.answer = text::normalize_answer(frame.forms.gerund);
  } else {
    s.answer = text::normalize_answer(ann.filler(tmpl.target));
    if (s.answer.empty()) return std::nullopt;
  }

  std::vector<std::string> words;
  for (const auto& token : text::split_ws(tmpl.surface)) {
    if (!text::is_placeholder(token)) {
      words.push_back(token);
      continue;
    }
    const auto bare = text::strip_nonalpha(token);
    const auto filler = text::trim(ann.filler(bare));
    if (filler.empty()) return std::nullopt;
    words.push_back(std::string(filler) + std::string(token.substr(bare.size())));
  }
  s.question = text::join(words, " ");
  return s;
}

inline void validate_annotation(const ImageAnnotation& ann, const FrameSet& frames) {
  auto it = frames.find(ann.verb_id);
  if (it == frames.end()) {
    throw Error(ErrorCode::kUnknownVerb, "image '" + ann.image_id +
                                             "' has unknown verb '" + ann.verb_id + "'");
  }
  for (const auto& [element, filler] : ann.fillers) {
    if (!it->second.has(element)) {
      throw Error(ErrorCode::kUnknownElement, "image '" + ann.image_id + "': '" +
                                                  element + "' is not a slot of '" +
                                                  ann.verb_id + "'");
    }
  }
}

struct RealizeCounts {
  std::size_t raw = 0;   // realizable (template, annotation) pairs
  std::size_t kept = 0;  // after exact-triple dedup

  RealizeCounts& operator+=(const RealizeCounts& o) {
    raw += o.raw;
    kept += o.kept;
    return *this;
  }
};

// Realizes every annotation of a single image against its verb's templates.
// Output is in canonical order (verb, template ordinal, annotator) with exact
// (image, question, answer) duplicates removed unless dedup is false. Sample
// ids are "<image_id>#<n>".
inline std::vector<QASample> realize_image(std::span<const ImageAnnotation> anns,
                                           const TemplateMap& templates,
                                           const FrameSet& frames, Split split,
                                           bool dedup = true,
                                           RealizeCounts* counts = nullptr) {
  struct Keyed {
    int annotator;
    QASample sample;
  };
  std::vector<Keyed> realized;
  for (const auto& ann : anns) {
    validate_annotation(ann, frames);
    const auto& frame = frames.find(ann.verb_id)->second;
    auto tit = templates.find(ann.verb_id);
    if (tit == templates.end()) continue;
    for (const auto& tmpl : tit->second) {
      if (auto s = realize(tmpl, ann, frame)) {
        s->split = split;
        realized.push_back({ann.annotator_index, std::move(*s)});
      }
    }
  }
  std::stable_sort(realized.begin(), realized.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.sample.image_id, a.sample.verb_id, a.sample.template_ordinal,
                    a.annotator) < std::tie(b.sample.image_id, b.sample.verb_id,
                                            b.sample.template_ordinal, b.annotator);
  });

  std::vector<QASample> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (auto& k : realized) {
    if (dedup && !seen.emplace(k.sample.image_id, k.sample.question, k.sample.answer).second) {
      continue;
    }
    out.push_back(std::move(k.sample));
  }
  std::size_t n = 0;
  for (auto& s : out) s.sample_id = s.image_id + "#" + std::to_string(n++);
  if (counts) *counts += RealizeCounts{realized.size(), out.size()};
  return out;
}

struct BuildOptions {
  bool dedup = true;
};

inline Dataset build_dataset(std::span<const ImageAnnotation> annotations,
                             const TemplateMap& templates, const FrameSet& frames,
                             const SplitAssignment& splits, BuildOptions options = {},
                             RealizeCounts* counts = nullptr) {
  std::map<std::string, std::vector<ImageAnnotation>> by_image;
  for (const auto& ann : annotations) by_image[ann.image_id].push_back(ann);

  std::vector<QASample> samples;
  for (const auto& [image, anns] : by_image) {
    auto it = splits.find(image);
    if (it == splits.end()) {
      throw Error(ErrorCode::kUnknownImage, "image '" + image + "' has no split");
    }
    auto part = realize_image(anns, templates, frames, it->second, options.dedup, counts);
    std::move(part.begin(), part.end(), std::back_inserter(samples));
  }
  return Dataset::from_samples(std::move(samples));
}

// --- JSON-lines formats -----------------------------------------------------

// {"image_id": "cooking_21", "verb": "cooking", "frames": [{"agent": "boy",
// ...}, ...]}; element keys are case-insensitive.
inline std::vector<ImageAnnotation> annotations_from_json(const Json& j) {
  std::vector<ImageAnnotation> out;
  const auto image = j.at("image_id").get<std::string>();
  const auto verb = j.at("verb").get<std::string>();
  int index = 0;
  for (const auto& frame : j.at("frames")) {
    ImageAnnotation ann;
    ann.image_id = image;
    ann.verb_id = verb;
    ann.annotator_index = index++;
    for (const auto& [element, filler] : frame.items()) {
      ann.fillers[text::to_upper(element)] =
          filler.is_null() ? std::string() : filler.get<std::string>();
    }
    out.push_back(std::move(ann));
  }
  return out;
}

inline std::vector<ImageAnnotation> load_annotations(const std::string& path) {
  std::vector<ImageAnnotation> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    auto anns = annotations_from_json(j);
    std::move(anns.begin(), anns.end(), std::back_inserter(out));
  });
  return out;
}

inline SplitAssignment load_splits(const std::string& path) {
  SplitAssignment splits;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    splits[j.at("image_id").get<std::string>()] = parse_split(j.at("split").get<std::string>());
  });
  return splits;
}

inline Json to_json(const QASample& s) {
  return Json{{"sample_id", s.sample_id}, {"image_id", s.image_id},
              {"verb", s.verb_id},        {"question", s.question},
              {"answer", s.answer},       {"element", s.frame_element},
              {"split", to_string(s.split)}, {"context", s.context},
              {"template", s.template_ordinal}};
}

inline QASample sample_from_json(const Json& j) {
  QASample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.image_id = j.at("image_id").get<std::string>();
  s.verb_id = j.at("verb").get<std::string>();
  s.question = j.at("question").get<std::string>();
  s.answer = j.at("answer").get<std::string>();
  s.frame_element = j.at("element").get<std::string>();
  s.split = parse_split(j.at("split").get<std::string>());
  s.context = j.value("context", std::vector<std::string>{});
  s.template_ordinal = j.value("template", std::size_t{0});
  if (s.answer.empty()) throw Error(ErrorCode::kParse, "empty answer");
  return s;
}

inline void write_samples_jsonl(std::ostream& out, std::span<const QASample> samples) {
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

inline Dataset load_dataset(const std::string& path) {
  std::vector<QASample> samples;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    samples.push_back(sample_from_json(j));
  });
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, path + ": no samples");
  return Dataset::from_samples(std::move(samples));
}

}  // namespace fvqa

#endif  // FVQA_REALIZER_HPP_
