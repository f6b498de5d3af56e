#ifndef FVQA_MTL_RMSPROP_HPP_
#define FVQA_MTL_RMSPROP_HPP_

#include <cmath>
#include <cstddef>
#include <span>

#include "fvqa/error.hpp"
#include "fvqa/mtl/params.hpp"

namespace fvqa::mtl {

struct RmspropConfig {
  double learning_rate = 1e-3;
  double decay = 0.9;  // rho
  double epsilon = 1e-8;
};

// acc <- rho * acc + (1 - rho) * g^2;  theta <- theta - lr * g / (sqrt(acc) + eps)
inline void rmsprop_update(std::span<double> theta, std::span<const double> grad,
                           std::span<double> acc, const RmspropConfig& cfg) {
  if (theta.size() != grad.size() || theta.size() != acc.size()) {
    throw Error(ErrorCode::kShapeMismatch, "rmsprop operands differ in size");
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    acc[i] = cfg.decay * acc[i] + (1.0 - cfg.decay) * g * g;
    theta[i] -= cfg.learning_rate * g / (std::sqrt(acc[i]) + cfg.epsilon);
  }
}

struct RmspropState {
  RmspropConfig config;
  MultitaskParams accumulator;

  static RmspropState for_params(const MultitaskParams& p, RmspropConfig cfg = {}) {
    return RmspropState{cfg, MultitaskParams::zeros(p.dims())};
  }
};

inline void rmsprop_step(MultitaskParams& params, const MultitaskParams& grads,
                         RmspropState& state) {
  if (!params.same_shape(grads) || !params.same_shape(state.accumulator)) {
    throw Error(ErrorCode::kShapeMismatch, "gradient or accumulator shape differs from params");
  }
  auto theta = params.tensors();
  const auto g = grads.tensors();
  auto acc = state.accumulator.tensors();
  for (std::size_t i = 0; i < MultitaskParams::kTensorCount; ++i) {
    rmsprop_update(theta[i], g[i], acc[i], state.config);
  }
}

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_RMSPROP_HPP_
