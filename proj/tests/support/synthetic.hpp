#ifndef FVQA_TESTS_SUPPORT_SYNTHETIC_HPP_
#define FVQA_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fvqa/mtl/features.hpp"
#include "fvqa/mtl/model.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/templater.hpp"
#include "support/fixtures.hpp"

namespace fvqa::testing {

struct SceneOptions {
  std::size_t images = 40;
  std::size_t words_per_element = 4;
  std::size_t image_dim = 32;
  std::optional<std::size_t> max_context = 1;
  double noise = 0.1;
  double test_fraction = 0.0;
  std::uint64_t seed = 1;
};

struct SceneData {
  Dataset dataset;
  mtl::ImageFeatures features;
};

// Random annotations of the four sample verbs. Every element draws its filler
// from its own small vocabulary ("place0", "place1", ...), so each answer
// belongs to a single element. An image's feature vector is the sum of fixed
// random embeddings of its fillers plus noise, so the image determines the
// answer once the question has picked the element.
inline SceneData element_conditioned_scenes(const SceneOptions& opt) {
  const FrameSet frames = sample_frames();
  const auto templates = generate_all(frames, WhLexicon::defaults(), opt.max_context);
  std::mt19937_64 rng(mtl::splitmix64(opt.seed));

  std::map<std::string, mtl::Vector> word_embedding;
  auto embedding_of = [&](const std::string& word) -> const mtl::Vector& {
    auto it = word_embedding.find(word);
    if (it != word_embedding.end()) return it->second;
    mtl::Vector v(static_cast<Eigen::Index>(opt.image_dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 2.0 * mtl::unit_uniform(rng) - 1.0;
    return word_embedding.emplace(word, v).first->second;
  };

  std::vector<ImageAnnotation> anns;
  SplitAssignment splits;
  std::map<std::string, mtl::Vector, std::less<>> features;
  std::vector<std::string> verbs;
  for (const auto& [verb, frame] : frames) verbs.push_back(verb);

  for (std::size_t i = 0; i < opt.images; ++i) {
    const std::string& verb = verbs[rng() % verbs.size()];
    const auto& frame = frames.find(verb)->second;
    ImageAnnotation ann;
    ann.image_id = "img" + std::to_string(i);
    ann.verb_id = verb;
    mtl::Vector feature = mtl::Vector::Zero(static_cast<Eigen::Index>(opt.image_dim));
    for (const auto& slot : frame.slots) {
      const std::string word =
          text::to_lower(slot.element) + std::to_string(rng() % opt.words_per_element);
      ann.fillers[slot.element] = word;
      feature += embedding_of(word);
    }
    for (Eigen::Index k = 0; k < feature.size(); ++k) {
      feature(k) += opt.noise * (2.0 * mtl::unit_uniform(rng) - 1.0);
    }
    features[ann.image_id] = feature;
    const bool test = mtl::unit_uniform(rng) < opt.test_fraction;
    splits[ann.image_id] = test ? Split::kTest : Split::kTrain;
    anns.push_back(std::move(ann));
  }
  return {build_dataset(anns, templates, frames, splits),
          mtl::ImageFeatures::from_map(opt.image_dim, std::move(features))};
}

// n encoded examples with distinct random images, 1-4 random tokens and
// uniformly random labels within dims.
inline std::vector<mtl::Example> random_examples(std::size_t n, const mtl::ModelDims& dims,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(mtl::splitmix64(seed));
  std::vector<mtl::Example> out(n);
  for (auto& ex : out) {
    const std::size_t len = 1 + rng() % 4;
    for (std::size_t i = 0; i < len; ++i) ex.tokens.push_back(rng() % dims.vocab);
    ex.image.resize(static_cast<Eigen::Index>(dims.image_dim));
    for (Eigen::Index i = 0; i < ex.image.size(); ++i) {
      ex.image(i) = 2.0 * mtl::unit_uniform(rng) - 1.0;
    }
    ex.answer = rng() % dims.answers;
    ex.element = rng() % dims.elements;
  }
  return out;
}

}  // namespace fvqa::testing

#endif  // FVQA_TESTS_SUPPORT_SYNTHETIC_HPP_
