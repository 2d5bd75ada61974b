#include <cmath>
#include <string>

#include "morphoseq/errors.hpp"
#include "morphoseq/optim.hpp"

namespace morphoseq {

std::vector<double> finite_diff_grad(const LossFn& loss, std::span<const double> params,
                                     double h) {
  if (!(h > 0.0)) throw ArgumentError("finite_diff_grad: step must be positive");
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  auto eval = [&](std::size_t i) {
    const double v = loss(theta);
    if (!std::isfinite(v)) {
      throw NumericError("finite_diff_grad: non-finite loss probing parameter " +
                         std::to_string(i));
    }
    return v;
  };
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double orig = theta[i];
    theta[i] = orig + h;
    const double up = eval(i);
    theta[i] = orig - h;
    const double down = eval(i);
    theta[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace morphoseq
