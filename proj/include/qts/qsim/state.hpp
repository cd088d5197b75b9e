#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qts/qsim/program.hpp"

namespace qts::qsim {

// Little-endian: qubit 0 is the least significant bit of the amplitude index.
struct StateVector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amplitudes;
};

StateVector zero_state(int n_qubits);  // ConfigError unless 1 <= n_qubits <= 16

// 2x2 row-major action on the target qubit: rotations use RP(theta) =
// exp(-i theta P / 2); H ignores theta; CNOT/CRP yield the controlled block.
void gate_unitary(GateKind kind, double theta, std::complex<double> u[4]);

void apply_gate_inplace(StateVector& state, const Gate& gate, const std::vector<double>& params,
                        const std::vector<double>& inputs);
StateVector apply_gate(StateVector state, const Gate& gate, const std::vector<double>& params,
                       const std::vector<double>& inputs);

double expect_z(const StateVector& state, int qubit);
double norm_sq(const StateVector& state);

struct RunResult {
  StateVector state;
  std::vector<double> expectations;  // <Z> per measured qubit, in program order
};

RunResult run_program(const GateProgram& program, const std::vector<double>& params,
                      const std::vector<double>& inputs);

}  // namespace qts::qsim
