#ifndef FVQA_MTL_BASELINES_HPP_
#define FVQA_MTL_BASELINES_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/evalmetrics.hpp"
#include "fvqa/realizer.hpp"

namespace fvqa::mtl {

namespace detail {

// Most frequent key; ties go to the lexicographically smallest.
inline std::string modal(const std::map<std::string, std::size_t>& counts) {
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [answer, count] : counts) {
    if (count > best_count) {
      best = answer;
      best_count = count;
    }
  }
  return best;
}

}  // namespace detail

inline std::string prior_baseline(std::span<const QASample> train) {
  if (train.empty()) throw Error(ErrorCode::kEmptyDataset, "train split is empty");
  std::map<std::string, std::size_t> counts;
  for (const auto& s : train) ++counts[s.answer];
  return detail::modal(counts);
}

inline std::map<std::string, std::string, std::less<>> per_verb_prior(
    std::span<const QASample> train) {
  if (train.empty()) throw Error(ErrorCode::kEmptyDataset, "train split is empty");
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& s : train) ++counts[s.verb_id][s.answer];
  std::map<std::string, std::string, std::less<>> out;
  for (const auto& [verb, c] : counts) out[verb] = detail::modal(c);
  return out;
}

inline std::vector<Prediction> predict_constant(std::span<const QASample> samples,
                                                const std::string& answer) {
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({s.sample_id, answer, std::nullopt});
  return out;
}

// Verbs unseen in training fall back to the global prior.
inline std::vector<Prediction> predict_per_verb(
    std::span<const QASample> samples,
    const std::map<std::string, std::string, std::less<>>& by_verb, const std::string& fallback) {
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    auto it = by_verb.find(s.verb_id);
    out.push_back({s.sample_id, it == by_verb.end() ? fallback : it->second, std::nullopt});
  }
  return out;
}

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_BASELINES_HPP_
