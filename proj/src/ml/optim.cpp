#include "qts/ml/optim.hpp"

#include <cmath>

#include "qts/errors.hpp"

namespace qts::ml {

void Adam::update(std::vector<double>& params, const std::vector<double>& grads) {
  if (params.size() != m.size() || grads.size() != m.size())
    throw ConfigError("adam size mismatch");
  for (double g : grads)
    if (!std::isfinite(g)) throw OptimError("non-finite gradient");

  ++step;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace qts::ml
