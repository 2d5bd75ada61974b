#include <cmath>

#include "morphoseq/errors.hpp"
#include "morphoseq/optim.hpp"

namespace morphoseq {

AdadeltaState AdadeltaState::fresh(const Matrix& param, AdadeltaConfig cfg) {
  return AdadeltaState{Matrix(param.rows(), param.cols()), Matrix(param.rows(), param.cols()),
                       cfg.rho, cfg.eps};
}

void adadelta_step(Matrix& param, const Matrix& grad, AdadeltaState& state) {
  if (!param.same_shape(grad) || !param.same_shape(state.acc_grad) ||
      !param.same_shape(state.acc_update)) {
    throw DimensionError("adadelta_step: param " + param.shape_string() + ", grad " +
                         grad.shape_string() + ", state " + state.acc_grad.shape_string());
  }
  const double rho = state.rho;
  const double eps = state.eps;
  double* p = param.data();
  const double* g = grad.data();
  double* eg = state.acc_grad.data();
  double* ed = state.acc_update.data();
  for (std::size_t i = 0, n = param.size(); i < n; ++i) {
    eg[i] = rho * eg[i] + (1.0 - rho) * g[i] * g[i];
    const double delta = -(std::sqrt(ed[i] + eps) / std::sqrt(eg[i] + eps)) * g[i];
    ed[i] = rho * ed[i] + (1.0 - rho) * delta * delta;
    p[i] += delta;
  }
}

}  // namespace morphoseq
