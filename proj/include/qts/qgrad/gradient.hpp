#pragma once

#include <vector>

#include "qts/qsim/program.hpp"

namespace qts::qgrad {

// Jacobians of the measured <Z> expectations. d_inputs is chain-ruled through
// each gate's scaler and prefactor down to the raw input feature.
struct CircuitGradient {
  int n_measured = 0;
  int n_trainable = 0;
  int n_inputs = 0;
  std::vector<double> d_params;  // row-major n_measured x n_trainable
  std::vector<double> d_inputs;  // row-major n_measured x n_inputs

  double dp(int j, int i) const { return d_params[static_cast<std::size_t>(j) * n_trainable + i]; }
  double di(int j, int f) const { return d_inputs[static_cast<std::size_t>(j) * n_inputs + f]; }
};

struct GradientResult {
  std::vector<double> expectations;
  CircuitGradient grad;
};

// Adjoint differentiation: one forward sweep plus one backward sweep shared by
// all measured observables. Production gradient path.
GradientResult adjoint_gradient(const qsim::GateProgram& program, const std::vector<double>& params,
                                const std::vector<double>& inputs);

// Parameter-shift rule, contributions summed over occurrences of a shared
// index: +-pi/2 two-term rule for plain rotations, the exact four-term rule
// (+-pi/2 and +-3pi/2) for controlled rotations, whose generator spectrum
// {0, +-1/2} adds a half-frequency component. Test oracle; throws
// UnsupportedGateError on a parameterized non-rotation gate.
CircuitGradient param_shift_gradient(const qsim::GateProgram& program,
                                     const std::vector<double>& params,
                                     const std::vector<double>& inputs);

}  // namespace qts::qgrad
