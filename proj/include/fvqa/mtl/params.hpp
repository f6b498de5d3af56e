#ifndef FVQA_MTL_PARAMS_HPP_
#define FVQA_MTL_PARAMS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "fvqa/error.hpp"

namespace fvqa::mtl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Uniform double in [0, 1) from the top 53 bits; std distributions are not
// portable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct ModelDims {
  std::size_t vocab = 1;  // question words, including the UNK row 0
  std::size_t word_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t image_dim = 64;
  std::size_t answers = 1;   // C
  std::size_t elements = 1;  // R

  bool operator==(const ModelDims&) const = default;
};

// Shared question/image encoders, the two-layer tanh fusion stack, and the
// answer and frame-element softmax heads.
struct MultitaskParams {
  static constexpr std::size_t kTensorCount = 13;
  static constexpr std::array<std::string_view, kTensorCount> kNames = {
      "word_embeddings", "question_proj", "question_bias", "image_proj", "image_bias",
      "fusion1",         "fusion1_bias",  "fusion2",       "fusion2_bias",
      "answer_head",     "answer_bias",   "element_head",  "element_bias"};

  Matrix word_embeddings;  // vocab x word_dim
  Matrix question_proj;    // hidden x word_dim
  Vector question_bias;
  Matrix image_proj;  // hidden x image_dim
  Vector image_bias;
  Matrix fusion1;  // hidden x hidden
  Vector fusion1_bias;
  Matrix fusion2;
  Vector fusion2_bias;
  Matrix answer_head;  // answers x hidden
  Vector answer_bias;
  Matrix element_head;  // elements x hidden
  Vector element_bias;

  static MultitaskParams zeros(const ModelDims& d) {
    if (d.answers == 0 || d.elements == 0 || d.vocab == 0 || d.hidden_dim == 0 ||
        d.word_dim == 0 || d.image_dim == 0) {
      throw Error(ErrorCode::kShapeMismatch, "model dimensions must be positive");
    }
    const auto v = static_cast<Eigen::Index>(d.vocab);
    const auto w = static_cast<Eigen::Index>(d.word_dim);
    const auto h = static_cast<Eigen::Index>(d.hidden_dim);
    const auto im = static_cast<Eigen::Index>(d.image_dim);
    const auto c = static_cast<Eigen::Index>(d.answers);
    const auto r = static_cast<Eigen::Index>(d.elements);
    MultitaskParams p;
    p.word_embeddings = Matrix::Zero(v, w);
    p.question_proj = Matrix::Zero(h, w);
    p.question_bias = Vector::Zero(h);
    p.image_proj = Matrix::Zero(h, im);
    p.image_bias = Vector::Zero(h);
    p.fusion1 = Matrix::Zero(h, h);
    p.fusion1_bias = Vector::Zero(h);
    p.fusion2 = Matrix::Zero(h, h);
    p.fusion2_bias = Vector::Zero(h);
    p.answer_head = Matrix::Zero(c, h);
    p.answer_bias = Vector::Zero(c);
    p.element_head = Matrix::Zero(r, h);
    p.element_bias = Vector::Zero(r);
    return p;
  }

  // Each matrix uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static MultitaskParams initialized(const ModelDims& d, std::uint64_t seed) {
    MultitaskParams p = zeros(d);
    std::mt19937_64 rng(splitmix64(seed));
    auto fill = [&rng](Matrix& m) {
      const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          m(i, j) = (2.0 * unit_uniform(rng) - 1.0) * limit;
        }
      }
    };
    fill(p.word_embeddings);
    fill(p.question_proj);
    fill(p.image_proj);
    fill(p.fusion1);
    fill(p.fusion2);
    fill(p.answer_head);
    fill(p.element_head);
    return p;
  }

  ModelDims dims() const {
    return ModelDims{static_cast<std::size_t>(word_embeddings.rows()),
                     static_cast<std::size_t>(word_embeddings.cols()),
                     static_cast<std::size_t>(fusion1.rows()),
                     static_cast<std::size_t>(image_proj.cols()),
                     static_cast<std::size_t>(answer_head.rows()),
                     static_cast<std::size_t>(element_head.rows())};
  }

  // Flat views of every tensor in kNames order (column-major storage).
  std::array<std::span<double>, kTensorCount> tensors() {
    return {flat(word_embeddings), flat(question_proj), flat(question_bias),
            flat(image_proj),      flat(image_bias),    flat(fusion1),
            flat(fusion1_bias),    flat(fusion2),       flat(fusion2_bias),
            flat(answer_head),     flat(answer_bias),   flat(element_head),
            flat(element_bias)};
  }
  std::array<std::span<const double>, kTensorCount> tensors() const {
    auto views = const_cast<MultitaskParams*>(this)->tensors();
    std::array<std::span<const double>, kTensorCount> out;
    for (std::size_t i = 0; i < kTensorCount; ++i) out[i] = views[i];
    return out;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (auto t : tensors()) n += t.size();
    return n;
  }

  bool same_shape(const MultitaskParams& o) const {
    auto a = tensors();
    auto b = o.tensors();
    for (std::size_t i = 0; i < kTensorCount; ++i) {
      if (a[i].size() != b[i].size()) return false;
    }
    return dims() == o.dims();
  }

 private:
  template <class T>
  static std::span<double> flat(T& m) {
    return {m.data(), static_cast<std::size_t>(m.size())};
  }
};

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_PARAMS_HPP_
