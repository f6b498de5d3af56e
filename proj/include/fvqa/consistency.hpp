#ifndef FVQA_CONSISTENCY_HPP_
#define FVQA_CONSISTENCY_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/evalmetrics.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

// (answer, frame element) pairs observed in training data. An answer is
// consistent with an element iff some training sample carries both.
class ConsistencyIndex {
 public:
  void add(std::string_view answer, std::string_view element) {
    const auto a = text::normalize_answer(answer);
    per_answer_[a].insert(std::string(element));
    pairs_.emplace(a, std::string(element));
  }

  bool contains(std::string_view answer, std::string_view element) const {
    auto it = per_answer_.find(text::normalize_answer(answer));
    return it != per_answer_.end() && it->second.count(element) > 0;
  }

  std::size_t distinct_elements(std::string_view answer) const {
    auto it = per_answer_.find(text::normalize_answer(answer));
    return it == per_answer_.end() ? 0 : it->second.size();
  }

  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  const std::map<std::string, std::set<std::string, std::less<>>, std::less<>>& per_answer()
      const {
    return per_answer_;
  }
  bool empty() const { return pairs_.empty(); }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> per_answer_;
};

// Callers pass the train split; nothing here filters by split.
inline ConsistencyIndex build_index(std::span<const QASample> train) {
  ConsistencyIndex idx;
  for (const auto& s : train) idx.add(s.answer, s.frame_element);
  return idx;
}

inline bool is_consistent(std::string_view answer, std::string_view element,
                          const ConsistencyIndex& idx) {
  return idx.contains(answer, element);
}

inline std::size_t distinct_element_count(std::string_view answer,
                                          const ConsistencyIndex& idx) {
  return idx.distinct_elements(answer);
}

// Percentage of predictions whose (answer, element) pair is in the index.
inline double consistency_rate(std::span<const Prediction> preds, const ConsistencyIndex& idx) {
  if (preds.empty()) throw Error(ErrorCode::kEmptyDataset, "no predictions");
  std::size_t consistent = 0;
  for (const auto& p : preds) {
    if (!p.element) {
      throw Error(ErrorCode::kMissingElementPrediction,
                  "prediction '" + p.sample_id + "' has no element");
    }
    if (idx.contains(p.answer, *p.element)) ++consistent;
  }
  return 100.0 * static_cast<double>(consistent) / static_cast<double>(preds.size());
}

// Single-head predictions carry no element; they are scored against the
// element targeted by the sample's question template.
inline std::vector<Prediction> with_template_elements(std::span<const Prediction> preds,
                                                      std::span<const QASample> gold) {
  const auto aligned = align(preds, gold);
  std::vector<Prediction> out;
  out.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    Prediction p = *aligned[i];
    if (!p.element) p.element = gold[i].frame_element;
    out.push_back(std::move(p));
  }
  return out;
}

inline Json to_json(const ConsistencyIndex& idx) {
  Json j = Json::object();
  for (const auto& [answer, elements] : idx.per_answer()) {
    j[answer] = std::vector<std::string>(elements.begin(), elements.end());
  }
  return j;
}

}  // namespace fvqa

#endif  // FVQA_CONSISTENCY_HPP_
