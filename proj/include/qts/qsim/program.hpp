#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qts::qsim {

enum class GateKind { H, RX, RY, RZ, CNOT, CRX, CRY, CRZ };

enum class AngleKind { Constant, Trainable, Input };

// Input-angle transforms. ArctanSquare is atan(x*x) with its own analytic
// derivative so gradients never need an expression tree.
enum class Scaler { Identity, Arccos, Arctan, ArctanSquare };

inline constexpr double kArccosClampEps = 1e-7;

struct AngleSource {
  AngleKind kind = AngleKind::Constant;
  double value = 0.0;                 // Constant
  int index = -1;                     // Trainable / Input
  Scaler scaler = Scaler::Identity;   // Input
  double prefactor = 1.0;             // Input: angle = prefactor * scaler(x)

  static AngleSource constant(double v) { return {AngleKind::Constant, v, -1, Scaler::Identity, 1.0}; }
  static AngleSource trainable(int param_index) {
    return {AngleKind::Trainable, 0.0, param_index, Scaler::Identity, 1.0};
  }
  static AngleSource input(int feature_index, Scaler s = Scaler::Identity, double prefactor = 1.0) {
    return {AngleKind::Input, 0.0, feature_index, s, prefactor};
  }
};

struct Gate {
  GateKind kind = GateKind::H;
  int target = -1;
  int control = -1;  // -1 when uncontrolled
  AngleSource angle; // meaningful only when has_angle()

  bool has_angle() const { return kind != GateKind::H && kind != GateKind::CNOT; }
  bool is_controlled() const { return control >= 0; }

  static Gate h(int q) { return {GateKind::H, q, -1, {}}; }
  static Gate rx(int q, AngleSource a) { return {GateKind::RX, q, -1, a}; }
  static Gate ry(int q, AngleSource a) { return {GateKind::RY, q, -1, a}; }
  static Gate rz(int q, AngleSource a) { return {GateKind::RZ, q, -1, a}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, {}}; }
  static Gate crx(int control, int target, AngleSource a) { return {GateKind::CRX, target, control, a}; }
  static Gate cry(int control, int target, AngleSource a) { return {GateKind::CRY, target, control, a}; }
  static Gate crz(int control, int target, AngleSource a) { return {GateKind::CRZ, target, control, a}; }
};

const char* gate_name(GateKind kind);

// Resolved rotation angle for one gate. Arccos arguments must lie in [-1, 1]
// (DomainError otherwise) and are clamped to [eps, 1-eps] before acos; the
// derivative is evaluated at the clamped argument.
double resolve_angle(const AngleSource& a, const std::vector<double>& params,
                     const std::vector<double>& inputs);
// d(angle)/d(raw input); zero for Constant/Trainable sources.
double angle_input_derivative(const AngleSource& a, const std::vector<double>& inputs);

double apply_scaler(Scaler s, double x);
double scaler_derivative(Scaler s, double x);

struct GateProgram {
  int n_qubits = 0;
  std::vector<Gate> gates;
  int n_trainable = 0;
  int n_inputs = 0;
  std::vector<int> measured_qubits;

  // Throws ConfigError unless: qubit indices valid and distinct per gate,
  // trainable indices cover exactly [0, n_trainable), input indices cover
  // exactly [0, n_inputs), measured_qubits nonempty/distinct/in range.
  void validate() const;

  // One gate per line: kind, qubits, angle source. For golden-file tests.
  std::string netlist() const;
};

struct ResetPoint {
  std::size_t gate_position;  // gates at index >= gate_position see fresh qubits
  std::vector<int> qubits;
};

// Compiles mid-circuit |0> resets into a wider program: at each reset point the
// named qubits' subsequent gates are rerouted onto fresh ancillas, and
// measured_qubits follow the final generation. Throws ResourceError if the
// expanded program would exceed 16 qubits.
GateProgram reset_qubits_fresh(const GateProgram& program, const std::vector<ResetPoint>& resets);

}  // namespace qts::qsim
