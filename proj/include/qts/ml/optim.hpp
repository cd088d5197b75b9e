#pragma once

#include <cstdint>
#include <vector>

namespace qts::ml {

// Adam with bias correction. Throws OptimError on a non-finite gradient so the
// trainer can record the run as failed instead of silently diverging.
struct Adam {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<double> m, v;

  explicit Adam(std::size_t n_params, double learning_rate = 0.001)
      : lr(learning_rate), m(n_params, 0.0), v(n_params, 0.0) {}

  void update(std::vector<double>& params, const std::vector<double>& grads);
};

}  // namespace qts::ml
