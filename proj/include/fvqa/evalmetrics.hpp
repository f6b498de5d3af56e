#ifndef FVQA_EVALMETRICS_HPP_
#define FVQA_EVALMETRICS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/taxonomy.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

struct Prediction {
  std::string sample_id;
  std::string answer;
  std::optional<std::string> element;

  bool operator==(const Prediction&) const = default;
};

inline bool answers_match(std::string_view a, std::string_view b) {
  return text::normalize_answer(a) == text::normalize_answer(b);
}

// Pairs each gold sample with its prediction. Every gold sample must have a
// prediction and every prediction must name a gold sample.
inline std::vector<const Prediction*> align(std::span<const Prediction> preds,
                                            std::span<const QASample> gold) {
  std::unordered_map<std::string_view, const Prediction*> by_id;
  by_id.reserve(preds.size());
  for (const auto& p : preds) by_id[p.sample_id] = &p;
  std::vector<const Prediction*> out;
  out.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = by_id.find(g.sample_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMissingPrediction, "no prediction for '" + g.sample_id + "'");
    }
    out.push_back(it->second);
  }
  if (by_id.size() > gold.size()) {
    std::unordered_map<std::string_view, char> gold_ids;
    for (const auto& g : gold) gold_ids[g.sample_id] = 1;
    for (const auto& [id, p] : by_id) {
      if (!gold_ids.count(id)) {
        throw Error(ErrorCode::kUnknownSample, "prediction for unknown sample '" +
                                                   std::string(id) + "'");
      }
    }
  }
  return out;
}

inline std::size_t count_correct(std::span<const Prediction> preds,
                                 std::span<const QASample> gold) {
  const auto aligned = align(preds, gold);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (answers_match(aligned[i]->answer, gold[i].answer)) ++correct;
  }
  return correct;
}

// Exact (normalized, case-insensitive) match rate, in percent.
inline double accuracy(std::span<const Prediction> preds, std::span<const QASample> gold) {
  if (gold.empty()) throw Error(ErrorCode::kEmptyDataset, "no gold samples");
  const double correct = static_cast<double>(count_correct(preds, gold));
  return 100.0 * correct / static_cast<double>(gold.size());
}

// WUPS over aligned singleton answer sets.
inline double wups(std::span<const Prediction> preds, std::span<const QASample> gold,
                   const Taxonomy& t, const WupsOptions& opt = {}) {
  const auto aligned = align(preds, gold);
  std::vector<AnswerSet> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g.push_back({gold[i].answer});
    p.push_back({aligned[i]->answer});
  }
  return wups(std::span<const AnswerSet>(g), std::span<const AnswerSet>(p), t, opt);
}

// Rows are systems, columns are (correct, incorrect).
struct Contingency2x2 {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};

  static Contingency2x2 of(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) {
    return Contingency2x2{{{{a, b}, {c, d}}}};
  }
};

inline constexpr double kChiSquareCritical1Dof01 = 6.635;

// Pearson chi-square for a 2x2 table with expected counts from the marginals;
// yates applies the 0.5 continuity correction to every |O - E|.
inline double chi_square_2x2(const Contingency2x2& table, bool yates = true) {
  const auto& o = table.counts;
  const double row[2] = {static_cast<double>(o[0][0] + o[0][1]),
                         static_cast<double>(o[1][0] + o[1][1])};
  const double col[2] = {static_cast<double>(o[0][0] + o[1][0]),
                         static_cast<double>(o[0][1] + o[1][1])};
  const double n = row[0] + row[1];
  if (row[0] == 0 || row[1] == 0 || col[0] == 0 || col[1] == 0) {
    throw Error(ErrorCode::kDegenerateTable, "a row or column total is zero");
  }
  const double c = yates ? 0.5 : 0.0;
  double stat = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = row[i] * col[j] / n;
      const double dev = std::max(std::abs(static_cast<double>(o[i][j]) - expected) - c, 0.0);
      stat += dev * dev / expected;
    }
  }
  return stat;
}

// Correct/incorrect counts of two systems over the same gold samples.
inline Contingency2x2 contingency(std::span<const Prediction> system_a,
                                  std::span<const Prediction> system_b,
                                  std::span<const QASample> gold) {
  const auto a = count_correct(system_a, gold);
  const auto b = count_correct(system_b, gold);
  return Contingency2x2::of(a, gold.size() - a, b, gold.size() - b);
}

enum class BreakdownKey { kWh, kVerb, kElement };

inline BreakdownKey parse_breakdown_key(std::string_view s) {
  if (s == "wh") return BreakdownKey::kWh;
  if (s == "verb") return BreakdownKey::kVerb;
  if (s == "element" || s == "role") return BreakdownKey::kElement;
  throw Error(ErrorCode::kParse, "unknown breakdown key '" + std::string(s) + "'");
}

inline std::string group_of(const QASample& s, BreakdownKey key) {
  switch (key) {
    case BreakdownKey::kWh: return text::first_word(s.question);
    case BreakdownKey::kVerb: return s.verb_id;
    case BreakdownKey::kElement: return s.frame_element;
  }
  return {};
}

using GroupAccuracy = std::map<std::string, double, std::less<>>;

inline GroupAccuracy breakdown(std::span<const Prediction> preds,
                               std::span<const QASample> gold, BreakdownKey key) {
  const auto aligned = align(preds, gold);
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> tally;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& [correct, total] = tally[group_of(gold[i], key)];
    ++total;
    if (answers_match(aligned[i]->answer, gold[i].answer)) ++correct;
  }
  GroupAccuracy out;
  for (const auto& [group, ct] : tally) {
    out[group] = 100.0 * static_cast<double>(ct.first) / static_cast<double>(ct.second);
  }
  return out;
}

struct HistogramBin {
  std::string label;
  double low = 0;   // exclusive, except for the first bin
  double high = 0;  // inclusive
  bool zero = false;
  std::size_t count = 0;
};

// -100, -90, ..., 100.
inline std::vector<double> default_histogram_edges() {
  std::vector<double> edges;
  for (int e = -100; e <= 100; e += 10) edges.push_back(e);
  return edges;
}

namespace detail {

inline std::string percent(double v) {
  std::ostringstream os;
  os << v << '%';
  return os.str();
}

}  // namespace detail

// Histogram of per-group accuracy differences acc_b - acc_a. Intervals are
// (lo, hi]; an exact 0 difference gets its own bin, so the interval ending at
// 0 is open on both sides. The first interval is closed on the left.
inline std::vector<HistogramBin> difference_histogram(const GroupAccuracy& acc_a,
                                                      const GroupAccuracy& acc_b,
                                                      const std::vector<double>& edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw Error(ErrorCode::kOutOfRange, "need at least two ascending bin edges");
  }
  std::vector<HistogramBin> bins;
  bool zero_inserted = false;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    if (!zero_inserted && lo >= 0) {
      bins.push_back({"0%", 0, 0, true, 0});
      zero_inserted = true;
    }
    const bool first = i == 0;
    const char* close = hi == 0 ? ")" : "]";
    bins.push_back({(first ? "[" : "(") + detail::percent(lo) + "," + detail::percent(hi) + close,
                    lo, hi, false, 0});
  }
  if (!zero_inserted) bins.push_back({"0%", 0, 0, true, 0});

  if (acc_a.size() != acc_b.size()) {
    throw Error(ErrorCode::kKeyMismatch, "group sets differ in size");
  }
  for (const auto& [group, a] : acc_a) {
    auto it = acc_b.find(group);
    if (it == acc_b.end()) {
      throw Error(ErrorCode::kKeyMismatch, "group '" + group + "' missing from second map");
    }
    const double d = it->second - a;
    HistogramBin* target = nullptr;
    for (std::size_t i = 0; i < bins.size() && !target; ++i) {
      auto& b = bins[i];
      if (b.zero) {
        if (d == 0) target = &b;
      } else if (d != 0 && d <= b.high && (d > b.low || (i == 0 && d == b.low))) {
        target = &b;
      }
    }
    if (!target) {
      throw Error(ErrorCode::kOutOfRange, "difference " + std::to_string(d) + " for '" +
                                              group + "' outside the bin edges");
    }
    ++target->count;
  }
  return bins;
}

inline Json to_json(const Prediction& p) {
  Json j{{"sample_id", p.sample_id}, {"answer", p.answer}};
  if (p.element) j["element"] = *p.element;
  return j;
}

inline Prediction prediction_from_json(const Json& j) {
  Prediction p;
  p.sample_id = j.at("sample_id").get<std::string>();
  p.answer = j.at("answer").get<std::string>();
  if (j.contains("element") && !j["element"].is_null()) {
    p.element = j["element"].get<std::string>();
  }
  return p;
}

inline std::vector<Prediction> load_predictions(const std::string& path) {
  std::vector<Prediction> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(prediction_from_json(j)); });
  return out;
}

inline void write_predictions_jsonl(std::ostream& out, std::span<const Prediction> preds) {
  for (const auto& p : preds) out << to_json(p).dump() << '\n';
}

}  // namespace fvqa

#endif  // FVQA_EVALMETRICS_HPP_
