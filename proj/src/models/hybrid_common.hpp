#pragma once

// Internal helpers shared by the hybrid model builders.

#include <vector>

#include "qts/errors.hpp"
#include "qts/models/ansatz.hpp"
#include "qts/qgrad/gradient.hpp"
#include "qts/qsim/program.hpp"

namespace qts::models::detail {

inline qsim::Gate rot(Axis axis, int qubit, qsim::AngleSource src) {
  switch (axis) {
    case Axis::X: return qsim::Gate::rx(qubit, src);
    case Axis::Y: return qsim::Gate::ry(qubit, src);
    case Axis::Z: return qsim::Gate::rz(qubit, src);
  }
  throw ConfigError("bad axis");
}

inline qsim::Gate crot(Axis axis, int control, int target, qsim::AngleSource src) {
  switch (axis) {
    case Axis::X: return qsim::Gate::crx(control, target, src);
    case Axis::Y: return qsim::Gate::cry(control, target, src);
    case Axis::Z: return qsim::Gate::crz(control, target, src);
  }
  throw ConfigError("bad axis");
}

// y[j] += scale * sum_i upstream[i] * jac[i][j] for a row-major (n_rows x n_cols) Jacobian.
inline void add_vjp(const std::vector<double>& upstream, const std::vector<double>& jac, int n_rows,
                    int n_cols, double scale, double* out) {
  for (int i = 0; i < n_rows; ++i) {
    const double u = scale * upstream[i];
    if (u == 0.0) continue;
    const double* row = jac.data() + static_cast<std::size_t>(i) * n_cols;
    for (int j = 0; j < n_cols; ++j) out[j] += u * row[j];
  }
}

// PQC used by both recurrent gate-cell models: H everywhere, arctan /
// arctan-square angle encoding of the n-dim input, then m layers of nearest +
// second-nearest CNOT chains followed by an RZ RX RZ triplet per qubit.
inline qsim::GateProgram make_gate_cell_pqc(int n, int m, int n_measured) {
  using qsim::AngleSource;
  using qsim::Gate;
  qsim::GateProgram p;
  p.n_qubits = n;
  p.n_inputs = n;
  p.n_trainable = 3 * n * m;
  for (int q = 0; q < n; ++q) p.gates.push_back(Gate::h(q));
  for (int q = 0; q < n; ++q) {
    p.gates.push_back(Gate::ry(q, AngleSource::input(q, qsim::Scaler::Arctan)));
    p.gates.push_back(Gate::rz(q, AngleSource::input(q, qsim::Scaler::ArctanSquare)));
  }
  int idx = 0;
  for (int layer = 0; layer < m; ++layer) {
    for (int q = 0; q + 1 < n; ++q) p.gates.push_back(Gate::cnot(q, q + 1));
    for (int q = 0; q + 2 < n; ++q) p.gates.push_back(Gate::cnot(q, q + 2));
    for (int q = 0; q < n; ++q) {
      p.gates.push_back(Gate::rz(q, AngleSource::trainable(idx++)));
      p.gates.push_back(Gate::rx(q, AngleSource::trainable(idx++)));
      p.gates.push_back(Gate::rz(q, AngleSource::trainable(idx++)));
    }
  }
  for (int q = 0; q < n_measured; ++q) p.measured_qubits.push_back(q);
  p.validate();
  return p;
}

}  // namespace qts::models::detail
