#ifndef FVQA_MTL_MODEL_HPP_
#define FVQA_MTL_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvqa/error.hpp"
#include "fvqa/mtl/params.hpp"

namespace fvqa::mtl {

// One encoded <image, question> pair with its labels.
struct Example {
  std::vector<std::size_t> tokens;  // question word ids
  Vector image;                     // raw image features
  std::optional<std::size_t> answer;
  std::optional<std::size_t> element;
};

enum class LossMode {
  kSum,      // CE(answer) + CE(element)
  kAverage,  // half of kSum
};

struct Objective {
  LossMode mode = LossMode::kSum;
  // Drops the element head from the loss (answer-only ablation).
  bool single_task = false;

  double scale() const { return mode == LossMode::kAverage ? 0.5 : 1.0; }
};

inline Vector log_softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

inline Vector softmax(const Vector& logits) { return log_softmax(logits).array().exp(); }

// Index of the largest entry; ties go to the lower index.
inline std::size_t argmax(const Vector& v) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
  }
  return best;
}

namespace detail {

inline Vector mean_embedding(std::span<const std::size_t> tokens, const MultitaskParams& p) {
  if (tokens.empty()) throw Error(ErrorCode::kEmptyQuestion, "question has no tokens");
  Vector sum = Vector::Zero(p.word_embeddings.cols());
  for (std::size_t t : tokens) {
    if (t >= static_cast<std::size_t>(p.word_embeddings.rows())) {
      throw Error(ErrorCode::kDimMismatch, "token id " + std::to_string(t) + " outside vocab");
    }
    sum += p.word_embeddings.row(static_cast<Eigen::Index>(t)).transpose();
  }
  return sum / static_cast<double>(tokens.size());
}

}  // namespace detail

// tanh(W_q * mean(word embeddings) + b_q); token order does not matter.
inline Vector encode_question(std::span<const std::size_t> tokens, const MultitaskParams& p) {
  const Vector mean = detail::mean_embedding(tokens, p);
  return (p.question_proj * mean + p.question_bias).array().tanh();
}

inline Vector encode_image(const Vector& raw, const MultitaskParams& p) {
  if (raw.size() != p.image_proj.cols()) {
    throw Error(ErrorCode::kDimMismatch, "image features have " + std::to_string(raw.size()) +
                                             " values, model expects " +
                                             std::to_string(p.image_proj.cols()));
  }
  return (p.image_proj * raw + p.image_bias).array().tanh();
}

// Intermediate values kept for backpropagation.
struct Activations {
  Vector mean_embedding;
  Vector question;  // tanh output
  Vector image;     // tanh output
  Vector fused;     // question .* image
  Vector hidden1;
  Vector hidden2;
  Vector answer_log_prob;
  Vector element_log_prob;
};

inline Activations forward_pass(const Example& ex, const MultitaskParams& p) {
  Activations a;
  a.mean_embedding = detail::mean_embedding(ex.tokens, p);
  a.question = (p.question_proj * a.mean_embedding + p.question_bias).array().tanh();
  a.image = encode_image(ex.image, p);
  a.fused = a.question.cwiseProduct(a.image);
  a.hidden1 = (p.fusion1 * a.fused + p.fusion1_bias).array().tanh();
  a.hidden2 = (p.fusion2 * a.hidden1 + p.fusion2_bias).array().tanh();
  a.answer_log_prob = log_softmax(p.answer_head * a.hidden2 + p.answer_bias);
  a.element_log_prob = log_softmax(p.element_head * a.hidden2 + p.element_bias);
  return a;
}

struct Distributions {
  Vector answer;
  Vector element;
};

inline Distributions forward(const Example& ex, const MultitaskParams& p) {
  const auto a = forward_pass(ex, p);
  return {a.answer_log_prob.array().exp(), a.element_log_prob.array().exp()};
}

namespace detail {

inline void check_labels(const Example& ex, const MultitaskParams& p, const Objective& obj) {
  if (!ex.answer || (!obj.single_task && !ex.element)) {
    throw Error(ErrorCode::kUnlabeledSample, "training example lacks a label");
  }
  if (*ex.answer >= static_cast<std::size_t>(p.answer_head.rows()) ||
      (!obj.single_task && *ex.element >= static_cast<std::size_t>(p.element_head.rows()))) {
    throw Error(ErrorCode::kDimMismatch, "label outside the class range");
  }
}

inline double example_loss(const Activations& a, const Example& ex, const Objective& obj) {
  double l = -a.answer_log_prob(static_cast<Eigen::Index>(*ex.answer));
  if (!obj.single_task) l -= a.element_log_prob(static_cast<Eigen::Index>(*ex.element));
  return l;
}

}  // namespace detail

// Mean over the batch of the per-example cross-entropy sum.
inline double loss(std::span<const Example> batch, const MultitaskParams& p,
                   const Objective& obj = {}) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  double total = 0.0;
  for (const auto& ex : batch) {
    detail::check_labels(ex, p, obj);
    total += detail::example_loss(forward_pass(ex, p), ex, obj);
  }
  return obj.scale() * total / static_cast<double>(batch.size());
}

// Adds d(loss)/d(params) for one example, pre-multiplied by weight, into grad.
// Returns the unweighted example loss.
inline double accumulate_gradient(const Example& ex, const MultitaskParams& p,
                                  const Objective& obj, double weight,
                                  MultitaskParams& grad) {
  detail::check_labels(ex, p, obj);
  const Activations a = forward_pass(ex, p);

  // Softmax + cross-entropy: d/dlogits = prob - onehot.
  Vector d_answer = a.answer_log_prob.array().exp();
  d_answer(static_cast<Eigen::Index>(*ex.answer)) -= 1.0;
  d_answer *= weight;
  grad.answer_head.noalias() += d_answer * a.hidden2.transpose();
  grad.answer_bias += d_answer;
  Vector d_hidden2 = p.answer_head.transpose() * d_answer;

  if (!obj.single_task) {
    Vector d_element = a.element_log_prob.array().exp();
    d_element(static_cast<Eigen::Index>(*ex.element)) -= 1.0;
    d_element *= weight;
    grad.element_head.noalias() += d_element * a.hidden2.transpose();
    grad.element_bias += d_element;
    d_hidden2.noalias() += p.element_head.transpose() * d_element;
  }

  const Vector d_z2 = d_hidden2.array() * (1.0 - a.hidden2.array().square());
  grad.fusion2.noalias() += d_z2 * a.hidden1.transpose();
  grad.fusion2_bias += d_z2;

  const Vector d_hidden1 = p.fusion2.transpose() * d_z2;
  const Vector d_z1 = d_hidden1.array() * (1.0 - a.hidden1.array().square());
  grad.fusion1.noalias() += d_z1 * a.fused.transpose();
  grad.fusion1_bias += d_z1;

  const Vector d_fused = p.fusion1.transpose() * d_z1;
  const Vector d_zq =
      (d_fused.array() * a.image.array()) * (1.0 - a.question.array().square());
  const Vector d_zv =
      (d_fused.array() * a.question.array()) * (1.0 - a.image.array().square());

  grad.question_proj.noalias() += d_zq * a.mean_embedding.transpose();
  grad.question_bias += d_zq;
  const Vector d_mean = p.question_proj.transpose() * d_zq;
  const double share = 1.0 / static_cast<double>(ex.tokens.size());
  for (std::size_t t : ex.tokens) {
    grad.word_embeddings.row(static_cast<Eigen::Index>(t)) += share * d_mean.transpose();
  }

  grad.image_proj.noalias() += d_zv * ex.image.transpose();
  grad.image_bias += d_zv;

  return detail::example_loss(a, ex, obj);
}

// Exact gradient of loss(batch, p, obj). Examples are reduced in batch order.
inline MultitaskParams gradients(std::span<const Example> batch, const MultitaskParams& p,
                                 const Objective& obj = {}, double* loss_out = nullptr) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  MultitaskParams grad = MultitaskParams::zeros(p.dims());
  const double weight = obj.scale() / static_cast<double>(batch.size());
  double total = 0.0;
  for (const auto& ex : batch) total += accumulate_gradient(ex, p, obj, weight, grad);
  if (loss_out) *loss_out = obj.scale() * total / static_cast<double>(batch.size());
  return grad;
}

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_MODEL_HPP_
