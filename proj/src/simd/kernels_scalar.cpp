#include "kernels_internal.hpp"

namespace qts::simd {

namespace {

void apply_1q_scalar(cplx* psi, size_t n, int t, const cplx u[4]) {
  const size_t stride = size_t{1} << t;
  for (size_t base = 0; base < n; base += 2 * stride) {
    for (size_t i = base; i < base + stride; ++i) {
      const cplx a = psi[i];
      const cplx b = psi[i + stride];
      psi[i] = u[0] * a + u[1] * b;
      psi[i + stride] = u[2] * a + u[3] * b;
    }
  }
}

void apply_ctrl_1q_scalar(cplx* psi, size_t n, int c, int t, const cplx u[4]) {
  const size_t stride = size_t{1} << t;
  const size_t cbit = size_t{1} << c;
  for (size_t base = 0; base < n; base += 2 * stride) {
    for (size_t i = base; i < base + stride; ++i) {
      if (!(i & cbit)) continue;
      const cplx a = psi[i];
      const cplx b = psi[i + stride];
      psi[i] = u[0] * a + u[1] * b;
      psi[i + stride] = u[2] * a + u[3] * b;
    }
  }
}

double expect_z_scalar(const cplx* psi, size_t n, int t) {
  const size_t stride = size_t{1} << t;
  double acc = 0.0;
  for (size_t base = 0; base < n; base += 2 * stride) {
    for (size_t i = base; i < base + stride; ++i) {
      acc += std::norm(psi[i]);
      acc -= std::norm(psi[i + stride]);
    }
  }
  return acc;
}

double norm_sq_scalar(const cplx* psi, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += std::norm(psi[i]);
  return acc;
}

}  // namespace

namespace detail {
const KernelSet scalar_kernels = {apply_1q_scalar, apply_ctrl_1q_scalar, expect_z_scalar, norm_sq_scalar, "scalar"};
}

}  // namespace qts::simd
