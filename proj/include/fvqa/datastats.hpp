#ifndef FVQA_DATASTATS_HPP_
#define FVQA_DATASTATS_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fvqa/jsonl.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

using FreqMap = std::map<std::string, std::size_t, std::less<>>;

struct StatsReport {
  std::size_t samples = 0;
  FreqMap element_freq;
  FreqMap answer_freq;
  FreqMap wh_dist;
  std::map<std::size_t, std::size_t> length_hist;  // whitespace tokens -> count

  // Counting is commutative, so shards can be merged in any order.
  StatsReport& operator+=(const StatsReport& o) {
    samples += o.samples;
    for (const auto& [k, v] : o.element_freq) element_freq[k] += v;
    for (const auto& [k, v] : o.answer_freq) answer_freq[k] += v;
    for (const auto& [k, v] : o.wh_dist) wh_dist[k] += v;
    for (const auto& [k, v] : o.length_hist) length_hist[k] += v;
    return *this;
  }

  void add(const QASample& s) {
    ++samples;
    ++element_freq[s.frame_element];
    ++answer_freq[s.answer];
    ++wh_dist[text::first_word(s.question)];
    ++length_hist[text::split_ws(s.question).size()];
  }
};

inline StatsReport compute_stats(std::span<const QASample> samples, Split split) {
  StatsReport r;
  for (const auto& s : samples) {
    if (s.split == split) r.add(s);
  }
  return r;
}

// Descending by count; ties broken lexicographically.
inline std::vector<std::pair<std::string, std::size_t>> top_k(const FreqMap& freq,
                                                              std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (items.size() > k) items.resize(k);
  return items;
}

inline Json to_json(const StatsReport& r, std::size_t k) {
  auto top = [k](const FreqMap& m) {
    Json arr = Json::array();
    for (const auto& [name, count] : top_k(m, k)) arr.push_back({name, count});
    return arr;
  };
  Json lengths = Json::object();
  for (const auto& [len, count] : r.length_hist) lengths[std::to_string(len)] = count;
  return Json{{"samples", r.samples},
              {"distinct_elements", r.element_freq.size()},
              {"distinct_answers", r.answer_freq.size()},
              {"top_elements", top(r.element_freq)},
              {"top_answers", top(r.answer_freq)},
              {"wh", r.wh_dist},
              {"length", lengths}};
}

inline std::string to_table(const StatsReport& r, std::size_t k) {
  std::ostringstream os;
  os << "samples: " << r.samples << "\n\n";
  auto table = [&os](const std::string& title, const auto& rows) {
    std::size_t width = title.size();
    for (const auto& [name, count] : rows) width = std::max(width, name.size());
    os << std::left << std::setw(static_cast<int>(width) + 2) << title << "frequency\n";
    for (const auto& [name, count] : rows) {
      os << std::left << std::setw(static_cast<int>(width) + 2) << name << count << '\n';
    }
    os << '\n';
  };
  table("Frame element", top_k(r.element_freq, k));
  table("Answer", top_k(r.answer_freq, k));
  table("Wh-word", top_k(r.wh_dist, r.wh_dist.size()));
  std::vector<std::pair<std::string, std::size_t>> lengths;
  for (const auto& [len, count] : r.length_hist) lengths.emplace_back(std::to_string(len), count);
  table("Length", lengths);
  return os.str();
}

// Long format for plotting: distribution,key,count.
inline std::string to_csv(const StatsReport& r) {
  std::ostringstream os;
  os << "distribution,key,count\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& [k, v] : r.element_freq) os << "element," << quote(k) << ',' << v << '\n';
  for (const auto& [k, v] : r.answer_freq) os << "answer," << quote(k) << ',' << v << '\n';
  for (const auto& [k, v] : r.wh_dist) os << "wh," << quote(k) << ',' << v << '\n';
  for (const auto& [k, v] : r.length_hist) os << "length," << k << ',' << v << '\n';
  return os.str();
}

}  // namespace fvqa

#endif  // FVQA_DATASTATS_HPP_
