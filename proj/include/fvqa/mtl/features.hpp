#ifndef FVQA_MTL_FEATURES_HPP_
#define FVQA_MTL_FEATURES_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/mtl/params.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/text.hpp"

namespace fvqa::mtl {

// Bag-of-words question vocabulary. Id 0 is the shared unknown-word row.
class QuestionVocab {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::string_view kUnkToken = "<unk>";

  QuestionVocab() { words_.insert(std::string(kUnkToken)); }

  static std::vector<std::string> tokenize(std::string_view question) {
    std::vector<std::string> out;
    for (const auto& raw : text::split_ws(question)) {
      std::string t = text::to_lower(raw);
      while (!t.empty() && (t.back() == '?' || t.back() == ',' || t.back() == '.')) {
        t.pop_back();
      }
      if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
  }

  // Sorted word list so ids do not depend on sample order.
  static QuestionVocab build(std::span<const QASample> train) {
    std::set<std::string> words;
    for (const auto& s : train) {
      for (auto& t : tokenize(s.question)) words.insert(std::move(t));
    }
    QuestionVocab v;
    for (const auto& w : words) v.words_.insert(w);
    return v;
  }

  std::vector<std::size_t> encode(std::string_view question) const {
    std::vector<std::size_t> ids;
    for (const auto& t : tokenize(question)) ids.push_back(words_.find(t).value_or(kUnk));
    return ids;
  }

  std::size_t size() const { return words_.size(); }
  const IndexedSet& words() const { return words_; }

 private:
  IndexedSet words_;
};

// Per-image feature vectors: either loaded from a file or derived on demand
// from a hash of the image id and a seed.
class ImageFeatures {
 public:
  static ImageFeatures synthetic(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw Error(ErrorCode::kDimMismatch, "feature dimension must be positive");
    ImageFeatures f;
    f.dim_ = dim;
    f.seed_ = seed;
    return f;
  }

  static ImageFeatures from_map(std::size_t dim, std::map<std::string, Vector, std::less<>> by_id) {
    for (const auto& [id, v] : by_id) {
      if (static_cast<std::size_t>(v.size()) != dim) {
        throw Error(ErrorCode::kDimMismatch, "features for '" + id + "' have wrong dimension");
      }
    }
    ImageFeatures f;
    f.dim_ = dim;
    f.loaded_ = std::move(by_id);
    return f;
  }

  // First record {"dim": N}, then {"image_id": ..., "features": [...]}.
  static ImageFeatures load(const std::string& path) {
    ImageFeatures f;
    f.loaded_.emplace();
    bool have_header = false;
    for_each_jsonl(path, [&](const Json& j, std::size_t) {
      if (!have_header) {
        f.dim_ = j.at("dim").get<std::size_t>();
        if (f.dim_ == 0) throw Error(ErrorCode::kDimMismatch, "dim must be positive");
        have_header = true;
        return;
      }
      const auto values = j.at("features").get<std::vector<double>>();
      if (values.size() != f.dim_) {
        throw Error(ErrorCode::kDimMismatch, "expected " + std::to_string(f.dim_) +
                                                 " features, got " +
                                                 std::to_string(values.size()));
      }
      Vector v(static_cast<Eigen::Index>(f.dim_));
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw Error(ErrorCode::kParse, "non-finite feature");
        v(static_cast<Eigen::Index>(i)) = values[i];
      }
      (*f.loaded_)[j.at("image_id").get<std::string>()] = std::move(v);
    });
    if (!have_header) throw Error(ErrorCode::kParse, path + ": missing {\"dim\": N} header");
    return f;
  }

  std::size_t dim() const { return dim_; }
  bool is_synthetic() const { return !loaded_.has_value(); }
  std::uint64_t seed() const { return seed_; }

  Vector lookup(std::string_view image_id) const {
    if (loaded_) {
      auto it = loaded_->find(image_id);
      if (it == loaded_->end()) {
        throw Error(ErrorCode::kUnknownImage, "no features for '" + std::string(image_id) + "'");
      }
      return it->second;
    }
    std::mt19937_64 rng(splitmix64(text::fnv1a(image_id) ^ splitmix64(seed_)));
    Vector v(static_cast<Eigen::Index>(dim_));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 2.0 * unit_uniform(rng) - 1.0;
    return v;
  }

 private:
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  std::optional<std::map<std::string, Vector, std::less<>>> loaded_;
};

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_FEATURES_HPP_
