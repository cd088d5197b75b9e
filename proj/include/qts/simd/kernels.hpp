#pragma once
#include <complex>
#include <cstddef>
#include <string>

namespace qts::simd {

using cplx = std::complex<double>;

// Hot inner loops of the statevector simulator. Each operation has a scalar
// reference implementation and (on x86-64) an AVX2+FMA variant; the active set
// is chosen at runtime. All kernels act in place on an interleaved
// (re,im) array of 2^n amplitudes, little-endian qubit ordering.
struct KernelSet {
  // psi' = U psi on qubit t, U = [[u00,u01],[u10,u11]] (row-major 2x2)
  void (*apply_1q)(cplx* psi, size_t n_amps, int t, const cplx u[4]);
  // controlled-U: applies U on target t where control bit c is 1
  void (*apply_ctrl_1q)(cplx* psi, size_t n_amps, int c, int t, const cplx u[4]);
  // <Z_t> = sum_i (-1)^{bit t of i} |psi_i|^2
  double (*expect_z)(const cplx* psi, size_t n_amps, int t);
  double (*norm_sq)(const cplx* psi, size_t n_amps);
  const char* name;
};

// name: "scalar", "avx2", or "auto" (best available). Throws ConfigError for
// unknown names or when a forced variant is unsupported on this CPU.
const KernelSet& select_kernels(const std::string& name = "auto");

// process-wide active set used by the simulator (defaults to "auto")
const KernelSet& active_kernels();
void set_active_kernels(const std::string& name);

bool avx2_supported();

}  // namespace qts::simd
