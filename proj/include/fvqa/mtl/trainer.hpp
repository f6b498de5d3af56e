#ifndef FVQA_MTL_TRAINER_HPP_
#define FVQA_MTL_TRAINER_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/evalmetrics.hpp"
#include "fvqa/mtl/features.hpp"
#include "fvqa/mtl/model.hpp"
#include "fvqa/mtl/params.hpp"
#include "fvqa/mtl/rmsprop.hpp"
#include "fvqa/realizer.hpp"

namespace fvqa::mtl {

struct TrainConfig {
  std::size_t batch_size = 500;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  std::size_t word_dim = 32;
  std::size_t hidden_dim = 64;
  LossMode loss_mode = LossMode::kSum;
  bool single_task = false;
  RmspropConfig optimizer;

  Objective objective() const { return {loss_mode, single_task}; }
};

// Measured on the full training set with the parameters at the end of the
// epoch.
struct EpochStats {
  double loss = 0;
  double answer_accuracy = 0;   // percent
  double element_accuracy = 0;  // percent

  bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
  MultitaskParams params;
  std::vector<EpochStats> history;
};

// Fisher-Yates driven by raw mt19937_64 output so the permutation is the
// same under every standard library.
inline void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

inline EpochStats measure(std::span<const Example> data, const MultitaskParams& p,
                          const Objective& obj) {
  EpochStats s;
  std::size_t answer_hits = 0, element_hits = 0, element_total = 0;
  double total = 0.0;
  for (const auto& ex : data) {
    const auto a = forward_pass(ex, p);
    total += detail::example_loss(a, ex, obj);
    if (argmax(a.answer_log_prob) == *ex.answer) ++answer_hits;
    if (ex.element) {
      ++element_total;
      if (argmax(a.element_log_prob) == *ex.element) ++element_hits;
    }
  }
  const double n = static_cast<double>(data.size());
  s.loss = obj.scale() * total / n;
  s.answer_accuracy = 100.0 * static_cast<double>(answer_hits) / n;
  s.element_accuracy =
      element_total ? 100.0 * static_cast<double>(element_hits) / static_cast<double>(element_total)
                    : 0.0;
  return s;
}

// Mini-batch rmsprop with a seeded shuffle each epoch. Single-threaded and
// bit-reproducible for a given (data, dims, config).
inline TrainResult train(std::span<const Example> data, const ModelDims& dims,
                         const TrainConfig& config,
                         const std::function<void(std::size_t, const EpochStats&)>& on_epoch = {}) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "no training examples");
  if (config.batch_size == 0 || config.epochs == 0) {
    throw Error(ErrorCode::kOutOfRange, "batch size and epochs must be at least 1");
  }
  const Objective obj = config.objective();
  for (const auto& ex : data) {
    if (!ex.answer || (!obj.single_task && !ex.element)) {
      throw Error(ErrorCode::kUnlabeledSample, "training example lacks a label");
    }
  }

  TrainResult result;
  result.params = MultitaskParams::initialized(dims, config.seed);
  RmspropState state = RmspropState::for_params(result.params, config.optimizer);
  std::mt19937_64 rng(splitmix64(config.seed ^ 0x5bd1e995ull));

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Example> batch;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      MultitaskParams grad = MultitaskParams::zeros(dims);
      const double weight = obj.scale() / static_cast<double>(end - start);
      for (std::size_t i = start; i < end; ++i) {
        accumulate_gradient(data[order[i]], result.params, obj, weight, grad);
      }
      rmsprop_step(result.params, grad, state);
    }
    result.history.push_back(measure(data, result.params, obj));
    if (on_epoch) on_epoch(epoch, result.history.back());
  }
  return result;
}

// Everything needed to map dataset records to and from model indices.
struct Model {
  QuestionVocab vocab;
  IndexedSet answers;
  IndexedSet elements;
  MultitaskParams params;
  bool single_task = false;
};

inline std::vector<Example> encode_samples(std::span<const QASample> samples,
                                           const QuestionVocab& vocab, const IndexedSet& answers,
                                           const IndexedSet& elements,
                                           const ImageFeatures& features) {
  std::vector<Example> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    Example ex;
    ex.tokens = vocab.encode(s.question);
    if (ex.tokens.empty()) {
      throw Error(ErrorCode::kEmptyQuestion, "sample '" + s.sample_id + "' has no words");
    }
    ex.image = features.lookup(s.image_id);
    ex.answer = answers.find(s.answer);
    ex.element = elements.find(s.frame_element);
    out.push_back(std::move(ex));
  }
  return out;
}

inline Model train_model(const Dataset& dataset, const ImageFeatures& features,
                         const TrainConfig& config, std::vector<EpochStats>* history = nullptr,
                         const std::function<void(std::size_t, const EpochStats&)>& on_epoch = {}) {
  const auto train_split = dataset.split(Split::kTrain);
  if (train_split.empty()) throw Error(ErrorCode::kEmptyDataset, "train split is empty");
  Model m;
  m.vocab = QuestionVocab::build(train_split);
  m.answers = dataset.answer_vocab;
  m.elements = dataset.element_vocab;
  m.single_task = config.single_task;
  const auto examples = encode_samples(train_split, m.vocab, m.answers, m.elements, features);
  ModelDims dims{m.vocab.size(), config.word_dim,  config.hidden_dim,
                 features.dim(), m.answers.size(), m.elements.size()};
  auto result = train(examples, dims, config, on_epoch);
  m.params = std::move(result.params);
  if (history) *history = std::move(result.history);
  return m;
}

// Argmax of each head, ties to the lower class index. Single-task models
// leave the element empty.
inline std::vector<Prediction> predict(const Model& model, std::span<const QASample> samples,
                                       const ImageFeatures& features) {
  const auto dims = model.params.dims();
  if (dims.answers != model.answers.size() || dims.elements != model.elements.size() ||
      dims.vocab != model.vocab.size()) {
    throw Error(ErrorCode::kDimMismatch, "parameters do not match the vocabularies");
  }
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    Example ex;
    ex.tokens = model.vocab.encode(s.question);
    ex.image = features.lookup(s.image_id);
    const auto a = forward_pass(ex, model.params);
    Prediction p;
    p.sample_id = s.sample_id;
    p.answer = model.answers.at(argmax(a.answer_log_prob));
    if (!model.single_task) p.element = model.elements.at(argmax(a.element_log_prob));
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<Prediction> predict(const Dataset& dataset, const Model& model, Split split,
                                       const ImageFeatures& features) {
  const auto part = dataset.split(split);
  return predict(model, part, features);
}

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_TRAINER_HPP_
