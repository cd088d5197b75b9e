#include "qts/qsim/program.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "qts/errors.hpp"

namespace qts::qsim {

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
  }
  return "?";
}

double apply_scaler(Scaler s, double x) {
  switch (s) {
    case Scaler::Identity: return x;
    case Scaler::Arccos:
      if (x < -1.0 || x > 1.0) throw DomainError("arccos argument out of [-1, 1]");
      return std::acos(std::clamp(x, kArccosClampEps, 1.0 - kArccosClampEps));
    case Scaler::Arctan: return std::atan(x);
    case Scaler::ArctanSquare: return std::atan(x * x);
  }
  throw ConfigError("unknown scaler");
}

double scaler_derivative(Scaler s, double x) {
  switch (s) {
    case Scaler::Identity: return 1.0;
    case Scaler::Arccos: {
      if (x < -1.0 || x > 1.0) throw DomainError("arccos argument out of [-1, 1]");
      const double xc = std::clamp(x, kArccosClampEps, 1.0 - kArccosClampEps);
      return -1.0 / std::sqrt(1.0 - xc * xc);
    }
    case Scaler::Arctan: return 1.0 / (1.0 + x * x);
    case Scaler::ArctanSquare: {
      const double x2 = x * x;
      return 2.0 * x / (1.0 + x2 * x2);
    }
  }
  throw ConfigError("unknown scaler");
}

double resolve_angle(const AngleSource& a, const std::vector<double>& params,
                     const std::vector<double>& inputs) {
  switch (a.kind) {
    case AngleKind::Constant: return a.value;
    case AngleKind::Trainable:
      if (a.index < 0 || static_cast<std::size_t>(a.index) >= params.size())
        throw ConfigError("trainable index out of range");
      return params[a.index];
    case AngleKind::Input:
      if (a.index < 0 || static_cast<std::size_t>(a.index) >= inputs.size())
        throw ConfigError("input index out of range");
      return a.prefactor * apply_scaler(a.scaler, inputs[a.index]);
  }
  throw ConfigError("unknown angle source");
}

double angle_input_derivative(const AngleSource& a, const std::vector<double>& inputs) {
  if (a.kind != AngleKind::Input) return 0.0;
  if (a.index < 0 || static_cast<std::size_t>(a.index) >= inputs.size())
    throw ConfigError("input index out of range");
  return a.prefactor * scaler_derivative(a.scaler, inputs[a.index]);
}

void GateProgram::validate() const {
  if (n_qubits < 1 || n_qubits > 16) throw ConfigError("n_qubits out of [1, 16]");
  std::set<int> train_seen, input_seen;
  for (const Gate& g : gates) {
    if (g.target < 0 || g.target >= n_qubits) throw ConfigError("gate target out of range");
    const bool ctrl_kind = g.kind == GateKind::CNOT || g.kind == GateKind::CRX ||
                           g.kind == GateKind::CRY || g.kind == GateKind::CRZ;
    if (ctrl_kind) {
      if (g.control < 0 || g.control >= n_qubits) throw ConfigError("gate control out of range");
      if (g.control == g.target) throw ConfigError("control equals target");
    } else if (g.control >= 0) {
      throw ConfigError("unexpected control on single-qubit gate");
    }
    if (g.has_angle()) {
      if (g.angle.kind == AngleKind::Trainable) {
        if (g.angle.index < 0 || g.angle.index >= n_trainable)
          throw ConfigError("trainable index outside [0, n_trainable)");
        train_seen.insert(g.angle.index);
      } else if (g.angle.kind == AngleKind::Input) {
        if (g.angle.index < 0 || g.angle.index >= n_inputs)
          throw ConfigError("input index outside [0, n_inputs)");
        input_seen.insert(g.angle.index);
      }
    } else if (g.angle.kind != AngleKind::Constant) {
      throw ConfigError("angle source on angle-free gate");
    }
  }
  if (static_cast<int>(train_seen.size()) != n_trainable)
    throw ConfigError("trainable indices do not cover [0, n_trainable)");
  if (static_cast<int>(input_seen.size()) != n_inputs)
    throw ConfigError("input indices do not cover [0, n_inputs)");
  if (measured_qubits.empty()) throw ConfigError("measured_qubits empty");
  std::set<int> meas(measured_qubits.begin(), measured_qubits.end());
  if (meas.size() != measured_qubits.size()) throw ConfigError("measured_qubits not distinct");
  for (int q : measured_qubits)
    if (q < 0 || q >= n_qubits) throw ConfigError("measured qubit out of range");
}

namespace {

const char* scaler_name(Scaler s) {
  switch (s) {
    case Scaler::Identity: return "id";
    case Scaler::Arccos: return "acos";
    case Scaler::Arctan: return "atan";
    case Scaler::ArctanSquare: return "atan2sq";
  }
  return "?";
}

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void dump_angle(std::ostringstream& os, const AngleSource& a) {
  switch (a.kind) {
    case AngleKind::Constant: os << " const(" << fmt_double(a.value) << ")"; break;
    case AngleKind::Trainable: os << " theta[" << a.index << "]"; break;
    case AngleKind::Input:
      os << " in[" << a.index << "]:" << scaler_name(a.scaler);
      if (a.prefactor != 1.0) os << "*" << fmt_double(a.prefactor);
      break;
  }
}

}  // namespace

std::string GateProgram::netlist() const {
  std::ostringstream os;
  os << "qubits " << n_qubits << "\n";
  for (const Gate& g : gates) {
    os << gate_name(g.kind);
    if (g.is_controlled())
      os << " q" << g.control << ">q" << g.target;
    else
      os << " q" << g.target;
    if (g.has_angle()) dump_angle(os, g.angle);
    os << "\n";
  }
  os << "measure";
  for (int q : measured_qubits) os << " q" << q;
  os << "\n";
  return os.str();
}

}  // namespace qts::qsim
