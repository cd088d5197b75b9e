#pragma once

// Test-side oracles, deliberately independent of the library's simulator and
// gradient code: angles, gate matrices and expectations are all re-derived
// here from first principles and compared against the production paths.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "qts/qsim/program.hpp"
#include "qts/qsim/state.hpp"
#include "qts/rng.hpp"

namespace testsup {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using qts::qsim::AngleKind;
using qts::qsim::Gate;
using qts::qsim::GateKind;
using qts::qsim::GateProgram;
using qts::qsim::Scaler;

inline double oracle_scaler(Scaler s, double x) {
  switch (s) {
    case Scaler::Identity: return x;
    case Scaler::Arccos: {
      constexpr double eps = 1e-7;
      if (x < eps) x = eps;
      if (x > 1.0 - eps) x = 1.0 - eps;
      return std::acos(x);
    }
    case Scaler::Arctan: return std::atan(x);
    case Scaler::ArctanSquare: return std::atan(x * x);
  }
  return 0.0;
}

inline double oracle_angle(const qts::qsim::AngleSource& a, const std::vector<double>& params,
                           const std::vector<double>& inputs) {
  switch (a.kind) {
    case AngleKind::Constant: return a.value;
    case AngleKind::Trainable: return params[a.index];
    case AngleKind::Input: return a.prefactor * oracle_scaler(a.scaler, inputs[a.index]);
  }
  return 0.0;
}

inline Eigen::Matrix2cd oracle_2x2(GateKind kind, double th) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd u;
  const double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
  switch (kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      u << r, r, r, -r;
      break;
    }
    case GateKind::CNOT: u << 0, 1, 1, 0; break;
    case GateKind::RX:
    case GateKind::CRX: u << c, -1i * s, -1i * s, c; break;
    case GateKind::RY:
    case GateKind::CRY: u << c, -s, s, c; break;
    case GateKind::RZ:
    case GateKind::CRZ: u << std::exp(-1i * th / 2.0), 0, 0, std::exp(1i * th / 2.0); break;
  }
  return u;
}

// Full 2^n matrix of a (possibly controlled) one-qubit gate, little-endian.
inline Mat embed_gate(int n_qubits, const Gate& g, double th) {
  const std::size_t n = std::size_t{1} << n_qubits;
  const Eigen::Matrix2cd u = oracle_2x2(g.kind, th);
  const std::size_t tbit = std::size_t{1} << g.target;
  const bool controlled = g.control >= 0;
  const std::size_t cbit = controlled ? std::size_t{1} << g.control : 0;
  Mat m = Mat::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (controlled && (j & cbit) == 0) {
      m(j, j) = 1.0;
      continue;
    }
    for (int bi = 0; bi < 2; ++bi) {
      const std::size_t i = (j & ~tbit) | (bi ? tbit : 0);
      m(i, j) = u(bi, (j >> g.target) & 1);
    }
  }
  return m;
}

// Dense matrix-chain oracle: multiply every gate unitary into |0...0> and read
// out <Z_q> for the measured qubits.
inline std::vector<double> dense_oracle(const GateProgram& prog, const std::vector<double>& params,
                                        const std::vector<double>& inputs) {
  const std::size_t n = std::size_t{1} << prog.n_qubits;
  Vec psi = Vec::Zero(n);
  psi(0) = 1.0;
  for (const auto& g : prog.gates) {
    const double th = g.has_angle() ? oracle_angle(g.angle, params, inputs) : 0.0;
    psi = embed_gate(prog.n_qubits, g, th) * psi;
  }
  std::vector<double> out;
  for (int q : prog.measured_qubits) {
    const std::size_t bit = std::size_t{1} << q;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += ((i & bit) ? -1.0 : 1.0) * std::norm(psi(i));
    out.push_back(e);
  }
  return out;
}

struct RandomProgram {
  GateProgram prog;
  std::vector<double> params;
  std::vector<double> inputs;
};

// Valid random program touching all gate kinds, angle sources and scalers.
// Inputs feeding an arccos scaler stay inside the unclamped region so the
// analytic input derivative matches finite differences.
inline RandomProgram random_program(qts::Rng& rng, int max_qubits = 4, int max_gates = 12) {
  RandomProgram rp;
  const int n = 1 + static_cast<int>(rng.integer(max_qubits));
  const int n_gates = 1 + static_cast<int>(rng.integer(max_gates));
  rp.prog.n_qubits = n;

  int n_trainable = 0, n_inputs = 0;
  std::set<int> arccos_features;
  const double pi = 3.14159265358979323846;

  for (int gi = 0; gi < n_gates; ++gi) {
    const int max_kind = n >= 2 ? 8 : 4;  // controlled kinds need 2 qubits
    const auto kind = static_cast<GateKind>(rng.integer(max_kind));
    Gate g;
    g.kind = kind;
    g.target = static_cast<int>(rng.integer(n));
    if (kind == GateKind::CNOT || kind == GateKind::CRX || kind == GateKind::CRY ||
        kind == GateKind::CRZ) {
      do {
        g.control = static_cast<int>(rng.integer(n));
      } while (g.control == g.target);
    }
    if (g.has_angle()) {
      switch (rng.integer(3)) {
        case 0:
          g.angle = qts::qsim::AngleSource::constant(rng.uniform(-pi, pi));
          break;
        case 1: {
          const bool reuse = n_trainable > 0 && rng.integer(2) == 0;
          const int idx = reuse ? static_cast<int>(rng.integer(n_trainable)) : n_trainable++;
          g.angle = qts::qsim::AngleSource::trainable(idx);
          break;
        }
        default: {
          const bool reuse = n_inputs > 0 && rng.integer(2) == 0;
          const int idx = reuse ? static_cast<int>(rng.integer(n_inputs)) : n_inputs++;
          const auto scaler = static_cast<Scaler>(rng.integer(4));
          if (scaler == Scaler::Arccos) arccos_features.insert(idx);
          g.angle = qts::qsim::AngleSource::input(idx, scaler, rng.uniform(-2.0, 2.0));
          break;
        }
      }
    }
    rp.prog.gates.push_back(g);
  }

  rp.prog.n_trainable = n_trainable;
  rp.prog.n_inputs = n_inputs;

  std::vector<int> qubits(n);
  for (int q = 0; q < n; ++q) qubits[q] = q;
  rng.shuffle(qubits);
  const int n_meas = 1 + static_cast<int>(rng.integer(n));
  rp.prog.measured_qubits.assign(qubits.begin(), qubits.begin() + n_meas);

  for (int i = 0; i < n_trainable; ++i) rp.params.push_back(rng.uniform(-pi, pi));
  for (int i = 0; i < n_inputs; ++i)
    rp.inputs.push_back(arccos_features.count(i) ? rng.uniform(0.05, 0.95)
                                                 : rng.uniform(-0.95, 0.95));
  rp.prog.validate();
  return rp;
}

// Central finite differences of run_program expectations.
inline void fd_gradient(const GateProgram& prog, std::vector<double> params,
                        std::vector<double> inputs, double h, std::vector<double>* d_params,
                        std::vector<double>* d_inputs) {
  const std::size_t n_meas = prog.measured_qubits.size();
  d_params->assign(n_meas * params.size(), 0.0);
  d_inputs->assign(n_meas * inputs.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] += h;
    const auto ep = qts::qsim::run_program(prog, params, inputs).expectations;
    params[i] -= 2 * h;
    const auto em = qts::qsim::run_program(prog, params, inputs).expectations;
    params[i] += h;
    for (std::size_t j = 0; j < n_meas; ++j)
      (*d_params)[j * params.size() + i] = (ep[j] - em[j]) / (2 * h);
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    inputs[i] += h;
    const auto ep = qts::qsim::run_program(prog, params, inputs).expectations;
    inputs[i] -= 2 * h;
    const auto em = qts::qsim::run_program(prog, params, inputs).expectations;
    inputs[i] += h;
    for (std::size_t j = 0; j < n_meas; ++j)
      (*d_inputs)[j * inputs.size() + i] = (ep[j] - em[j]) / (2 * h);
  }
}

inline bool close_rel(double a, double b, double rel, double floor = 1.0) {
  return std::abs(a - b) <= rel * std::max({floor, std::abs(a), std::abs(b)});
}

}  // namespace testsup
