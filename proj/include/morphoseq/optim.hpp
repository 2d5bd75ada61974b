#pragma once

#include <functional>
#include <span>
#include <vector>

#include "morphoseq/matrix.hpp"

namespace morphoseq {

struct AdadeltaConfig {
  double rho = 0.95;
  double eps = 1e-6;
};

/// Running averages Adadelta keeps for one parameter tensor.
struct AdadeltaState {
  Matrix acc_grad;    // EMA of g^2
  Matrix acc_update;  // EMA of delta^2
  double rho = 0.95;
  double eps = 1e-6;

  static AdadeltaState fresh(const Matrix& param, AdadeltaConfig cfg = {});
};

/// One Adadelta update of `param` in place. Throws DimensionError when shapes differ.
void adadelta_step(Matrix& param, const Matrix& grad, AdadeltaState& state);

using LossFn = std::function<double(std::span<const double>)>;

/// Central-difference gradient estimate, one entry per scalar in `params`.
/// Throws NumericError if the loss is not finite at a probe point.
std::vector<double> finite_diff_grad(const LossFn& loss, std::span<const double> params,
                                     double h = 1e-5);

}  // namespace morphoseq
