#ifndef FVQA_TAXONOMY_HPP_
#define FVQA_TAXONOMY_HPP_

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/text.hpp"

namespace fvqa {

// Rooted is-a graph. Depth is the length of the shortest hypernym chain to
// the root, counting the root as depth 1. Immutable after construction; all
// queries are const and safe to run concurrently.
class Taxonomy {
 public:
  using NodeId = std::size_t;
  static constexpr std::string_view kSyntheticRoot = "*root*";

  // Lookup key for node names and surfaces: lowercase, '_' read as a space,
  // whitespace collapsed. "body_of_water" and "Body of  water" collide.
  static std::string key(std::string_view s) {
    std::string t(s);
    std::replace(t.begin(), t.end(), '_', ' ');
    return text::normalize_answer(t);
  }

  // edges are (child, parent). Parentless nodes hang off a synthetic root
  // when there is more than one of them.
  static Taxonomy from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges,
      const std::vector<std::pair<std::string, std::string>>& synonyms = {}) {
    Taxonomy t;
    for (const auto& [child, parent] : edges) {
      const NodeId c = t.intern(child);
      const NodeId p = t.intern(parent);
      if (c == p) {
        throw Error(ErrorCode::kCyclicTaxonomy, "self edge on '" + child + "'");
      }
      t.parents_[c].push_back(p);
    }
    if (t.names_.empty()) throw Error(ErrorCode::kEmptyDataset, "taxonomy has no edges");
    for (auto& ps : t.parents_) {
      std::sort(ps.begin(), ps.end());
      ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    }

    std::vector<NodeId> tops;
    for (NodeId n = 0; n < t.names_.size(); ++n) {
      if (t.parents_[n].empty()) tops.push_back(n);
    }
    if (tops.empty()) throw Error(ErrorCode::kCyclicTaxonomy, "no parentless node");
    if (tops.size() == 1) {
      t.root_ = tops.front();
    } else {
      t.root_ = t.intern(std::string(kSyntheticRoot));
      for (NodeId n : tops) t.parents_[n].push_back(t.root_);
    }
    t.check_acyclic();
    t.compute_depths();

    for (const auto& [surface, node] : synonyms) {
      auto it = t.by_key_.find(key(node));
      if (it == t.by_key_.end()) {
        throw Error(ErrorCode::kUnknownNode,
                    "synonym '" + surface + "' names unknown node '" + node + "'");
      }
      t.synonyms_[key(surface)] = it->second;
    }
    return t;
  }

  static Taxonomy load(const std::string& edges_path,
                       const std::string& synonyms_path = {}) {
    auto edges = read_tsv_pairs(edges_path);
    std::vector<std::pair<std::string, std::string>> synonyms;
    if (!synonyms_path.empty()) synonyms = read_tsv_pairs(synonyms_path);
    return from_edges(edges, synonyms);
  }

  static std::vector<std::pair<std::string, std::string>> read_tsv_pairs(
      const std::string& path) {
    auto in = open_input(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (text::trim(line).empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::kParse,
                    path + ":" + std::to_string(line_no) + ": expected two tab-separated fields");
      }
      out.emplace_back(std::string(text::trim(line.substr(0, tab))),
                       std::string(text::trim(line.substr(tab + 1))));
    }
    return out;
  }

  std::size_t size() const { return names_.size(); }
  NodeId root() const { return root_; }
  const std::string& name(NodeId n) const { return names_.at(n); }

  std::optional<NodeId> node(std::string_view name) const {
    auto it = by_key_.find(key(name));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  // Surface string to node: synonyms first, then node names.
  std::optional<NodeId> resolve(std::string_view term) const {
    const auto k = key(term);
    if (auto it = synonyms_.find(k); it != synonyms_.end()) return it->second;
    if (auto it = by_key_.find(k); it != by_key_.end()) return it->second;
    return std::nullopt;
  }

  int depth(NodeId n) const { return depth_.at(n); }
  int depth(std::string_view name) const { return depth(require(name)); }

  // All ancestors of n including n itself.
  std::vector<NodeId> ancestors(NodeId n) const {
    std::vector<char> seen(names_.size(), 0);
    std::vector<NodeId> out, stack{n};
    seen[n] = 1;
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      out.push_back(x);
      for (NodeId p : parents_[x]) {
        if (!seen[p]) {
          seen[p] = 1;
          stack.push_back(p);
        }
      }
    }
    return out;
  }

  // Depth of the deepest common ancestor.
  int lcs_depth(NodeId a, NodeId b) const {
    auto aa = ancestors(a);
    std::vector<char> mark(names_.size(), 0);
    for (NodeId x : aa) mark[x] = 1;
    int best = 0;
    for (NodeId x : ancestors(b)) {
      if (mark[x]) best = std::max(best, depth_[x]);
    }
    return best;
  }
  int lcs_depth(std::string_view a, std::string_view b) const {
    return lcs_depth(require(a), require(b));
  }

 private:
  NodeId intern(const std::string& name) {
    const auto k = key(name);
    auto [it, fresh] = by_key_.emplace(k, names_.size());
    if (fresh) {
      names_.push_back(name);
      parents_.emplace_back();
    }
    return it->second;
  }

  NodeId require(std::string_view name) const {
    auto n = node(name);
    if (!n) throw Error(ErrorCode::kUnknownNode, "'" + std::string(name) + "'");
    return *n;
  }

  void check_acyclic() const {
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<char> state(names_.size(), 0);
    for (NodeId start = 0; start < names_.size(); ++start) {
      if (state[start]) continue;
      std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
      state[start] = 1;
      while (!stack.empty()) {
        auto& [n, i] = stack.back();
        if (i < parents_[n].size()) {
          const NodeId p = parents_[n][i++];
          if (state[p] == 1) {
            throw Error(ErrorCode::kCyclicTaxonomy, "cycle through '" + names_[p] + "'");
          }
          if (state[p] == 0) {
            state[p] = 1;
            stack.emplace_back(p, 0);
          }
        } else {
          state[n] = 2;
          stack.pop_back();
        }
      }
    }
  }

  void compute_depths() {
    std::vector<std::vector<NodeId>> children(names_.size());
    for (NodeId n = 0; n < names_.size(); ++n) {
      for (NodeId p : parents_[n]) children[p].push_back(n);
    }
    depth_.assign(names_.size(), 0);
    std::deque<NodeId> queue{root_};
    depth_[root_] = 1;
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      for (NodeId c : children[n]) {
        if (depth_[c] == 0) {
          depth_[c] = depth_[n] + 1;
          queue.push_back(c);
        }
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<NodeId>> parents_;
  std::map<std::string, NodeId, std::less<>> by_key_;
  std::map<std::string, NodeId, std::less<>> synonyms_;
  std::vector<int> depth_;
  NodeId root_ = 0;
};

// Wu-Palmer similarity, 2*depth(lcs) / (depth(a) + depth(b)). Terms missing
// from the taxonomy score 1 on normalized string equality and 0 otherwise.
inline double wup(std::string_view a, std::string_view b, const Taxonomy& t) {
  const auto na = t.resolve(a);
  const auto nb = t.resolve(b);
  if (!na || !nb) {
    return text::normalize_answer(a) == text::normalize_answer(b) ? 1.0 : 0.0;
  }
  if (*na == *nb) return 1.0;
  const double lcs = t.lcs_depth(*na, *nb);
  const double score = 2.0 * lcs / (t.depth(*na) + t.depth(*nb));
  // Multiple inheritance can make the LCS deeper than a shortest-path depth.
  return std::min(score, 1.0);
}

enum class WupsMode {
  kBinary,      // per-sample score >= threshold counts 1, else 0
  kDownweight,  // per-pair WUP below threshold is scaled by 0.1
};

struct WupsOptions {
  std::optional<double> threshold;
  WupsMode mode = WupsMode::kBinary;
};

using AnswerSet = std::vector<std::string>;

namespace detail {

inline double scaled_wup(std::string_view a, std::string_view b, const Taxonomy& t,
                         const WupsOptions& opt) {
  const double w = wup(a, b, t);
  if (opt.mode == WupsMode::kDownweight && opt.threshold && w < *opt.threshold) {
    return 0.1 * w;
  }
  return w;
}

}  // namespace detail

// Per-sample term of the WUPS sum: the smaller of the two max-product
// directions between gold set A and predicted set T.
inline double wups_sample(const AnswerSet& gold, const AnswerSet& pred, const Taxonomy& t,
                          const WupsOptions& opt = {}) {
  if (gold.empty() || pred.empty()) throw Error(ErrorCode::kEmptyAnswerSet, "empty answer set");
  double gold_side = 1.0;
  for (const auto& a : gold) {
    double best = 0.0;
    for (const auto& p : pred) best = std::max(best, detail::scaled_wup(a, p, t, opt));
    gold_side *= best;
  }
  double pred_side = 1.0;
  for (const auto& p : pred) {
    double best = 0.0;
    for (const auto& a : gold) best = std::max(best, detail::scaled_wup(a, p, t, opt));
    pred_side *= best;
  }
  double score = std::min(gold_side, pred_side);
  if (opt.threshold && opt.mode == WupsMode::kBinary) {
    score = score >= *opt.threshold ? 1.0 : 0.0;
  }
  return score;
}

// Corpus WUPS as a percentage.
inline double wups(std::span<const AnswerSet> gold, std::span<const AnswerSet> pred,
                   const Taxonomy& t, const WupsOptions& opt = {}) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(gold.size()) + " gold vs " +
                                                std::to_string(pred.size()) + " predicted");
  }
  if (gold.empty()) throw Error(ErrorCode::kLengthMismatch, "no samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) sum += wups_sample(gold[i], pred[i], t, opt);
  return 100.0 * sum / static_cast<double>(gold.size());
}

// Converts a WordNet data file (data.noun layout) into the edge-list and
// synonym TSV formats. Node names are "<first lemma>.<offset>"; "@" and "@i"
// pointers are hypernym edges. A lemma shared by several synsets maps to the
// first synset in file order.
struct ConvertCounts {
  std::size_t synsets = 0;
  std::size_t edges = 0;
  std::size_t synonyms = 0;
};

inline ConvertCounts convert_wordnet_data(std::istream& in, std::ostream& edges_out,
                                          std::ostream& synonyms_out) {
  struct Synset {
    std::string offset;
    std::vector<std::string> lemmas;
    std::vector<std::string> hypernyms;
  };
  std::vector<Synset> synsets;
  std::map<std::string, std::string> name_of;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == ' ') continue;  // license header
    const auto bar = line.find(" | ");
    std::istringstream fields(line.substr(0, bar));
    Synset s;
    std::string lex_filenum, ss_type, w_cnt_hex;
    if (!(fields >> s.offset >> lex_filenum >> ss_type >> w_cnt_hex)) continue;
    const int w_cnt = std::stoi(w_cnt_hex, nullptr, 16);
    for (int i = 0; i < w_cnt; ++i) {
      std::string word, lex_id;
      fields >> word >> lex_id;
      const auto paren = word.find('(');  // adjective markers like "(a)"
      if (paren != std::string::npos) word.resize(paren);
      s.lemmas.push_back(text::to_lower(word));
    }
    int p_cnt = 0;
    fields >> p_cnt;
    for (int i = 0; i < p_cnt; ++i) {
      std::string symbol, offset, pos, source_target;
      fields >> symbol >> offset >> pos >> source_target;
      if (symbol == "@" || symbol == "@i") s.hypernyms.push_back(offset);
    }
    if (s.lemmas.empty()) continue;
    name_of[s.offset] = s.lemmas.front() + "." + s.offset;
    synsets.push_back(std::move(s));
  }

  ConvertCounts counts;
  std::set<std::string> used;
  for (const auto& s : synsets) {
    ++counts.synsets;
    const auto& self = name_of[s.offset];
    for (const auto& h : s.hypernyms) {
      auto it = name_of.find(h);
      if (it == name_of.end()) continue;
      edges_out << self << '\t' << it->second << '\n';
      ++counts.edges;
    }
    for (const auto& lemma : s.lemmas) {
      const auto k = Taxonomy::key(lemma);
      if (!used.insert(k).second) continue;
      synonyms_out << k << '\t' << self << '\n';
      ++counts.synonyms;
    }
  }
  return counts;
}

}  // namespace fvqa

#endif  // FVQA_TAXONOMY_HPP_
