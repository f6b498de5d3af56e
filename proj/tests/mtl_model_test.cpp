#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fvqa/mtl/model.hpp"
#include "fvqa/mtl/params.hpp"
#include "fvqa/mtl/rmsprop.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace fvqa::mtl {

// Keeps discovered test names readable.
void PrintTo(const Objective& o, std::ostream* os) {
  *os << (o.mode == LossMode::kSum ? "sum" : "average") << (o.single_task ? "/single" : "");
}

namespace {

const ModelDims kToy{6, 3, 4, 5, 3, 2};

TEST(Softmax, ClosedForm) {
  Vector logits(2);
  logits << std::log(3.0), 0.0;
  const Vector p = softmax(logits);
  EXPECT_NEAR(p(0), 0.75, 1e-15);
  EXPECT_NEAR(p(1), 0.25, 1e-15);
  Vector huge(3);
  huge << 1000.0, 1000.0, -1000.0;
  const Vector q = softmax(huge);
  EXPECT_TRUE(q.allFinite());
  EXPECT_NEAR(q(0), 0.5, 1e-12);
}

TEST(Argmax, TiesGoLow) {
  Vector v = Vector::Constant(4, 0.25);
  EXPECT_EQ(argmax(v), 0u);
  v(2) = 0.3;
  EXPECT_EQ(argmax(v), 2u);
}

TEST(EncodeQuestion, Properties) {
  const auto p = MultitaskParams::initialized(kToy, 1);
  const std::vector<std::size_t> one = {3};
  const Vector expected =
      (p.question_proj * p.word_embeddings.row(3).transpose() + p.question_bias).array().tanh();
  EXPECT_TRUE(encode_question(one, p).isApprox(expected, 1e-15));

  const std::vector<std::size_t> a = {1, 2, 5, 2};
  const std::vector<std::size_t> b = {2, 5, 2, 1};
  EXPECT_TRUE(encode_question(a, p).isApprox(encode_question(b, p), 1e-15));

  auto zero = p;
  zero.word_embeddings.setZero();
  zero.question_bias.setConstant(0.3);
  const Vector tb = Vector::Constant(4, std::tanh(0.3));
  EXPECT_TRUE(encode_question(a, zero).isApprox(tb, 1e-15));
  EXPECT_TRUE(encode_question(one, zero).isApprox(tb, 1e-15));

  try {
    encode_question({}, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyQuestion);
  }
}

TEST(EncodeImage, Properties) {
  auto p = MultitaskParams::zeros({2, 2, 4, 4, 1, 1});
  p.image_bias << 0.1, -0.2, 0.3, 0.0;
  const Vector raw = Vector::LinSpaced(4, -1.0, 1.0);
  EXPECT_TRUE(encode_image(Vector::Zero(4), p).isApprox(Vector(p.image_bias.array().tanh())));
  p.image_bias.setZero();
  p.image_proj.setIdentity();
  EXPECT_TRUE(encode_image(raw, p).isApprox(Vector(raw.array().tanh())));
  try {
    encode_image(Vector::Zero(3), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimMismatch);
  }
}

TEST(SyntheticFeatures, Reproducible) {
  const auto f = ImageFeatures::synthetic(16, 7);
  EXPECT_EQ(f.lookup("img1"), ImageFeatures::synthetic(16, 7).lookup("img1"));
  EXPECT_NE(f.lookup("img1"), f.lookup("img2"));
  EXPECT_NE(f.lookup("img1"), ImageFeatures::synthetic(16, 8).lookup("img1"));
  EXPECT_LE(f.lookup("img1").cwiseAbs().maxCoeff(), 1.0);
}

TEST(Forward, ValidSimplices) {
  const auto p = MultitaskParams::initialized(kToy, 2);
  for (const auto& ex : testing::random_examples(50, kToy, 3)) {
    const auto d = forward(ex, p);
    EXPECT_NEAR(d.answer.sum(), 1.0, 1e-6);
    EXPECT_NEAR(d.element.sum(), 1.0, 1e-6);
    EXPECT_GE(d.answer.minCoeff(), 0.0);
    EXPECT_GE(d.element.minCoeff(), 0.0);
  }
}

TEST(Forward, ZeroHeadsAreUniform) {
  auto p = MultitaskParams::initialized(kToy, 2);
  p.answer_head.setZero();
  p.element_head.setZero();
  const auto batch = testing::random_examples(4, kToy, 5);
  const auto d = forward(batch[0], p);
  EXPECT_TRUE(d.answer.isApprox(Vector::Constant(3, 1.0 / 3)));
  EXPECT_TRUE(d.element.isApprox(Vector::Constant(2, 0.5)));
  EXPECT_NEAR(loss(batch, p), std::log(3.0) + std::log(2.0), 1e-12);
  EXPECT_NEAR(loss(batch, p, {LossMode::kSum, true}), std::log(3.0), 1e-12);
}

TEST(Loss, PerfectPredictionsAreZero) {
  auto p = MultitaskParams::zeros(kToy);
  auto batch = testing::random_examples(3, kToy, 6);
  for (auto& ex : batch) {
    ex.answer = 1;
    ex.element = 0;
  }
  p.answer_bias << 0, 800, 0;
  p.element_bias << 800, 0;
  EXPECT_EQ(loss(batch, p), 0.0);
}

TEST(Loss, AverageIsHalfOfSum) {
  const auto p = MultitaskParams::initialized(kToy, 9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto batch = testing::random_examples(1 + seed % 7, kToy, seed);
    EXPECT_EQ(loss(batch, p, {LossMode::kAverage}), 0.5 * loss(batch, p, {LossMode::kSum}));
  }
}

TEST(Loss, Errors) {
  const auto p = MultitaskParams::initialized(kToy, 9);
  auto batch = testing::random_examples(2, kToy, 1);
  batch[1].element.reset();
  try {
    loss(batch, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnlabeledSample);
  }
  EXPECT_NO_THROW(loss(batch, p, {LossMode::kSum, true}));
  EXPECT_THROW(loss({}, p), Error);
  batch[0].answer = 3;
  EXPECT_THROW(loss(batch, p, {LossMode::kSum, true}), Error);
}

class GradientCheck : public ::testing::TestWithParam<Objective> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  const ModelDims dims{7, 3, 4, 5, 3, 2};
  const auto batch = testing::random_examples(5, dims, 12);
  const auto p = MultitaskParams::initialized(dims, 13);
  double analytic_loss = 0.0;
  const auto g = gradients(batch, p, GetParam(), &analytic_loss);
  EXPECT_NEAR(analytic_loss, loss(batch, p, GetParam()), 1e-12);
  const auto n = testing::numeric_gradient(batch, p, GetParam(), 1e-5);
  const auto ga = g.tensors();
  const auto gn = n.tensors();
  for (std::size_t t = 0; t < ga.size(); ++t) {
    for (std::size_t i = 0; i < ga[t].size(); ++i) {
      EXPECT_LT(testing::relative_error(ga[t][i], gn[t][i]), 1e-4)
          << MultitaskParams::kNames[t] << "[" << i << "] " << ga[t][i] << " vs " << gn[t][i];
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Objectives, GradientCheck,
                         ::testing::Values(Objective{LossMode::kSum, false},
                                           Objective{LossMode::kAverage, false},
                                           Objective{LossMode::kSum, true}),
                         [](const ::testing::TestParamInfo<Objective>& info) {
                           if (info.param.single_task) return std::string("SingleTask");
                           return std::string(info.param.mode == LossMode::kSum ? "Sum"
                                                                                : "Average");
                         });

TEST(Gradients, SingleTaskLeavesElementHeadUntouched) {
  const auto batch = testing::random_examples(5, kToy, 2);
  const auto p = MultitaskParams::initialized(kToy, 4);
  const auto g = gradients(batch, p, {LossMode::kSum, true});
  EXPECT_EQ(g.element_head.squaredNorm(), 0.0);
  EXPECT_EQ(g.element_bias.squaredNorm(), 0.0);
}

TEST(Gradients, SoftmaxRowsSumToZero) {
  // Bias gradient of a softmax head is mean(prob - onehot), whose entries sum
  // to zero; with zero heads each column of the weight gradient does too.
  auto p = MultitaskParams::initialized(kToy, 4);
  p.answer_head.setZero();
  p.element_head.setZero();
  const auto batch = testing::random_examples(6, kToy, 8);
  const auto g = gradients(batch, p);
  EXPECT_NEAR(g.answer_bias.sum(), 0.0, 1e-12);
  EXPECT_NEAR(g.element_bias.sum(), 0.0, 1e-12);
  EXPECT_LT(g.answer_head.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Rmsprop, HandExample) {
  std::vector<double> theta = {1.0}, grad = {1.0}, acc = {0.0};
  rmsprop_update(theta, grad, acc, {0.01, 0.9, 1e-8});
  EXPECT_NEAR(acc[0], 0.1, 1e-15);
  EXPECT_NEAR(theta[0], 1.0 - 0.01 / (std::sqrt(0.1) + 1e-8), 1e-15);
  EXPECT_NEAR(theta[0], 0.96838, 1e-5);
}

TEST(Rmsprop, ZeroGradientDecaysAccumulator) {
  std::vector<double> theta = {0.5, -2.0}, grad = {0.0, 0.0}, acc = {0.4, 0.0};
  rmsprop_update(theta, grad, acc, {});
  EXPECT_EQ(theta, (std::vector<double>{0.5, -2.0}));
  EXPECT_DOUBLE_EQ(acc[0], 0.36);
  EXPECT_EQ(acc[1], 0.0);
}

TEST(Rmsprop, DeterministicAndShapeChecked) {
  const auto p0 = MultitaskParams::initialized(kToy, 1);
  const auto batch = testing::random_examples(5, kToy, 1);
  auto run = [&] {
    auto p = p0;
    auto state = RmspropState::for_params(p);
    for (int i = 0; i < 2; ++i) rmsprop_step(p, gradients(batch, p), state);
    for (auto t : state.accumulator.tensors()) {
      for (double v : t) EXPECT_GE(v, 0.0);
    }
    return p;
  };
  const auto a = run();
  const auto b = run();
  const auto ta = a.tensors();
  const auto tb = b.tensors();
  for (std::size_t t = 0; t < ta.size(); ++t) {
    EXPECT_TRUE(std::equal(ta[t].begin(), ta[t].end(), tb[t].begin()));
  }

  auto p = p0;
  auto state = RmspropState::for_params(p);
  const auto wrong = MultitaskParams::zeros({6, 3, 4, 5, 4, 2});
  try {
    rmsprop_step(p, wrong, state);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  std::vector<double> x(2), y(3), z(2);
  EXPECT_THROW(rmsprop_update(x, y, z, {}), Error);
}

TEST(Params, InitializationIsScaledAndSeeded) {
  const ModelDims dims{10, 8, 16, 12, 5, 4};
  const auto p = MultitaskParams::initialized(dims, 3);
  EXPECT_EQ(p.dims(), dims);
  EXPECT_LE(p.fusion1.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 32));
  EXPECT_LE(p.image_proj.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 28));
  EXPECT_GT(p.fusion1.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(p.answer_bias.squaredNorm(), 0.0);
  EXPECT_EQ(p.parameter_count(), 10u * 8 + 16 * 8 + 16 + 16 * 12 + 16 + 256 + 16 + 256 + 16 +
                                     5 * 16 + 5 + 4 * 16 + 4);
  EXPECT_EQ(MultitaskParams::initialized(dims, 3).fusion2, p.fusion2);
  EXPECT_NE(MultitaskParams::initialized(dims, 4).fusion2, p.fusion2);
  EXPECT_THROW(MultitaskParams::zeros({1, 1, 1, 1, 0, 1}), Error);
}

}  // namespace
}  // namespace fvqa::mtl
