#include "qts/qgrad/gradient.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qts/errors.hpp"
#include "qts/qsim/state.hpp"
#include "qts/simd/kernels.hpp"

namespace qts::qgrad {

namespace {

using cplx = std::complex<double>;
using qsim::AngleKind;
using qsim::Gate;
using qsim::GateKind;
using qsim::GateProgram;

enum class Pauli { X, Y, Z };

Pauli rotation_axis(GateKind kind) {
  switch (kind) {
    case GateKind::RX: case GateKind::CRX: return Pauli::X;
    case GateKind::RY: case GateKind::CRY: return Pauli::Y;
    case GateKind::RZ: case GateKind::CRZ: return Pauli::Z;
    default: throw UnsupportedGateError("parameterized gate is not a Pauli rotation");
  }
}

// Im <lam| Pi_1(control) P(target) |psi>, the adjoint-method contribution of a
// rotation gate evaluated at the state just after that gate.
double pauli_overlap_im(const std::vector<cplx>& lam, const std::vector<cplx>& psi, Pauli p,
                        int target, int control) {
  const std::size_t n = psi.size();
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t cbit = control >= 0 ? std::size_t{1} << control : 0;
  cplx acc = 0.0;
  switch (p) {
    case Pauli::Z:
      for (std::size_t i = 0; i < n; ++i) {
        if (cbit && !(i & cbit)) continue;
        const cplx term = std::conj(lam[i]) * psi[i];
        acc += (i & tbit) ? -term : term;
      }
      break;
    case Pauli::X:
      for (std::size_t i = 0; i < n; ++i) {
        if (cbit && !(i & cbit)) continue;
        acc += std::conj(lam[i]) * psi[i ^ tbit];
      }
      break;
    case Pauli::Y:
      for (std::size_t i = 0; i < n; ++i) {
        if (cbit && !(i & cbit)) continue;
        const cplx term = std::conj(lam[i]) * psi[i ^ tbit];
        acc += (i & tbit) ? cplx(0, 1) * term : cplx(0, -1) * term;
      }
      break;
  }
  return acc.imag();
}

void apply_resolved(std::vector<cplx>& amps, const Gate& g, double theta) {
  cplx u[4];
  qsim::gate_unitary(g.kind, theta, u);
  const auto& k = simd::active_kernels();
  if (g.is_controlled())
    k.apply_ctrl_1q(amps.data(), amps.size(), g.control, g.target, u);
  else
    k.apply_1q(amps.data(), amps.size(), g.target, u);
}

void accumulate(CircuitGradient& grad, const Gate& g, int j, double d,
                const std::vector<double>& inputs) {
  if (g.angle.kind == AngleKind::Trainable) {
    grad.d_params[static_cast<std::size_t>(j) * grad.n_trainable + g.angle.index] += d;
  } else {
    grad.d_inputs[static_cast<std::size_t>(j) * grad.n_inputs + g.angle.index] +=
        d * qsim::angle_input_derivative(g.angle, inputs);
  }
}

}  // namespace

GradientResult adjoint_gradient(const GateProgram& program, const std::vector<double>& params,
                                const std::vector<double>& inputs) {
  if (static_cast<int>(params.size()) != program.n_trainable)
    throw ConfigError("params length != n_trainable");
  if (static_cast<int>(inputs.size()) != program.n_inputs)
    throw ConfigError("inputs length != n_inputs");

  const int n_meas = static_cast<int>(program.measured_qubits.size());
  GradientResult out;
  out.grad.n_measured = n_meas;
  out.grad.n_trainable = program.n_trainable;
  out.grad.n_inputs = program.n_inputs;
  out.grad.d_params.assign(static_cast<std::size_t>(n_meas) * program.n_trainable, 0.0);
  out.grad.d_inputs.assign(static_cast<std::size_t>(n_meas) * program.n_inputs, 0.0);

  // Forward sweep, caching resolved angles for the backward sweep.
  std::vector<double> angles(program.gates.size(), 0.0);
  qsim::StateVector psi = qsim::zero_state(program.n_qubits);
  for (std::size_t k = 0; k < program.gates.size(); ++k) {
    const Gate& g = program.gates[k];
    if (g.has_angle()) angles[k] = qsim::resolve_angle(g.angle, params, inputs);
    apply_resolved(psi.amplitudes, g, angles[k]);
  }
  out.expectations.reserve(n_meas);
  for (int q : program.measured_qubits) out.expectations.push_back(qsim::expect_z(psi, q));

  // lam_j = Z_j |psi>, all back-propagated together.
  std::vector<std::vector<cplx>> lam(n_meas);
  for (int j = 0; j < n_meas; ++j) {
    lam[j] = psi.amplitudes;
    const std::size_t bit = std::size_t{1} << program.measured_qubits[j];
    for (std::size_t i = 0; i < lam[j].size(); ++i)
      if (i & bit) lam[j][i] = -lam[j][i];
  }

  for (std::size_t k = program.gates.size(); k-- > 0;) {
    const Gate& g = program.gates[k];
    if (g.has_angle() && g.angle.kind != AngleKind::Constant) {
      const Pauli p = rotation_axis(g.kind);
      for (int j = 0; j < n_meas; ++j) {
        const double d =
            pauli_overlap_im(lam[j], psi.amplitudes, p, g.target, g.is_controlled() ? g.control : -1);
        accumulate(out.grad, g, j, d, inputs);
      }
    }
    apply_resolved(psi.amplitudes, g, -angles[k]);  // rotations invert by -theta; H/CNOT self-inverse
    for (int j = 0; j < n_meas; ++j) apply_resolved(lam[j], g, -angles[k]);
  }
  return out;
}

CircuitGradient param_shift_gradient(const GateProgram& program, const std::vector<double>& params,
                                     const std::vector<double>& inputs) {
  if (static_cast<int>(params.size()) != program.n_trainable)
    throw ConfigError("params length != n_trainable");
  if (static_cast<int>(inputs.size()) != program.n_inputs)
    throw ConfigError("inputs length != n_inputs");

  const int n_meas = static_cast<int>(program.measured_qubits.size());
  CircuitGradient grad;
  grad.n_measured = n_meas;
  grad.n_trainable = program.n_trainable;
  grad.n_inputs = program.n_inputs;
  grad.d_params.assign(static_cast<std::size_t>(n_meas) * program.n_trainable, 0.0);
  grad.d_inputs.assign(static_cast<std::size_t>(n_meas) * program.n_inputs, 0.0);

  std::vector<double> angles(program.gates.size(), 0.0);
  for (std::size_t k = 0; k < program.gates.size(); ++k)
    if (program.gates[k].has_angle())
      angles[k] = qsim::resolve_angle(program.gates[k].angle, params, inputs);

  auto run_shifted = [&](std::size_t shift_at, double delta) {
    qsim::StateVector psi = qsim::zero_state(program.n_qubits);
    for (std::size_t k = 0; k < program.gates.size(); ++k)
      apply_resolved(psi.amplitudes, program.gates[k], angles[k] + (k == shift_at ? delta : 0.0));
    std::vector<double> exps(n_meas);
    for (int j = 0; j < n_meas; ++j) exps[j] = qsim::expect_z(psi, program.measured_qubits[j]);
    return exps;
  };

  // Plain rotations obey the two-term +-pi/2 rule. A controlled rotation's
  // generator has eigenvalues {0, +-1/2}, so its expectation carries both
  // half- and unit-frequency terms and needs the exact four-term rule
  // d1 [f(t+pi/2) - f(t-pi/2)] - d2 [f(t+3pi/2) - f(t-3pi/2)].
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double d1 = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
  const double d2 = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);
  for (std::size_t k = 0; k < program.gates.size(); ++k) {
    const Gate& g = program.gates[k];
    if (!g.has_angle() || g.angle.kind == AngleKind::Constant) {
      if (!g.has_angle() && g.angle.kind != AngleKind::Constant)
        throw UnsupportedGateError("parameterized gate is not a Pauli rotation");
      continue;
    }
    rotation_axis(g.kind);  // validates the kind
    const std::vector<double> ep = run_shifted(k, half_pi);
    const std::vector<double> em = run_shifted(k, -half_pi);
    if (g.is_controlled()) {
      const std::vector<double> ep3 = run_shifted(k, 3.0 * half_pi);
      const std::vector<double> em3 = run_shifted(k, -3.0 * half_pi);
      for (int j = 0; j < n_meas; ++j)
        accumulate(grad, g, j, d1 * (ep[j] - em[j]) - d2 * (ep3[j] - em3[j]), inputs);
    } else {
      for (int j = 0; j < n_meas; ++j) accumulate(grad, g, j, (ep[j] - em[j]) / 2.0, inputs);
    }
  }
  return grad;
}

}  // namespace qts::qgrad
