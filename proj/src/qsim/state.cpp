#include "qts/qsim/state.hpp"

#include <cmath>

#include "qts/errors.hpp"
#include "qts/simd/kernels.hpp"

namespace qts::qsim {

using cplx = std::complex<double>;

void gate_unitary(GateKind kind, double theta, cplx u[4]) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      u[0] = r; u[1] = r; u[2] = r; u[3] = -r;
      return;
    }
    case GateKind::CNOT:
      u[0] = 0; u[1] = 1; u[2] = 1; u[3] = 0;
      return;
    case GateKind::RX:
    case GateKind::CRX:
      u[0] = c; u[1] = cplx(0, -s);
      u[2] = cplx(0, -s); u[3] = c;
      return;
    case GateKind::RY:
    case GateKind::CRY:
      u[0] = c; u[1] = -s;
      u[2] = s; u[3] = c;
      return;
    case GateKind::RZ:
    case GateKind::CRZ:
      u[0] = cplx(c, -s); u[1] = 0;
      u[2] = 0; u[3] = cplx(c, s);
      return;
  }
  throw ConfigError("gate_unitary: unknown gate kind");
}

namespace {

void gate_matrix(const Gate& g, const std::vector<double>& params, const std::vector<double>& inputs,
                 cplx u[4]) {
  gate_unitary(g.kind, g.has_angle() ? resolve_angle(g.angle, params, inputs) : 0.0, u);
}

void check_qubits(const StateVector& state, const Gate& g) {
  if (g.target < 0 || g.target >= state.n_qubits) throw ConfigError("gate target out of range");
  if (g.is_controlled()) {
    if (g.control < 0 || g.control >= state.n_qubits) throw ConfigError("gate control out of range");
    if (g.control == g.target) throw ConfigError("control equals target");
  }
}

}  // namespace

StateVector zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 16) throw ConfigError("n_qubits out of [1, 16]");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, 0.0);
  s.amplitudes[0] = 1.0;
  return s;
}

void apply_gate_inplace(StateVector& state, const Gate& gate, const std::vector<double>& params,
                        const std::vector<double>& inputs) {
  check_qubits(state, gate);
  cplx u[4];
  gate_matrix(gate, params, inputs, u);
  const auto& k = simd::active_kernels();
  if (gate.is_controlled())
    k.apply_ctrl_1q(state.amplitudes.data(), state.amplitudes.size(), gate.control, gate.target, u);
  else
    k.apply_1q(state.amplitudes.data(), state.amplitudes.size(), gate.target, u);
}

StateVector apply_gate(StateVector state, const Gate& gate, const std::vector<double>& params,
                       const std::vector<double>& inputs) {
  apply_gate_inplace(state, gate, params, inputs);
  return state;
}

double expect_z(const StateVector& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits) throw ConfigError("qubit out of range");
  return simd::active_kernels().expect_z(state.amplitudes.data(), state.amplitudes.size(), qubit);
}

double norm_sq(const StateVector& state) {
  return simd::active_kernels().norm_sq(state.amplitudes.data(), state.amplitudes.size());
}

RunResult run_program(const GateProgram& program, const std::vector<double>& params,
                      const std::vector<double>& inputs) {
  if (static_cast<int>(params.size()) != program.n_trainable)
    throw ConfigError("params length != n_trainable");
  if (static_cast<int>(inputs.size()) != program.n_inputs)
    throw ConfigError("inputs length != n_inputs");

  RunResult r;
  r.state = zero_state(program.n_qubits);
  for (const Gate& g : program.gates) apply_gate_inplace(r.state, g, params, inputs);
  r.expectations.reserve(program.measured_qubits.size());
  for (int q : program.measured_qubits) r.expectations.push_back(expect_z(r.state, q));
  return r;
}

}  // namespace qts::qsim
