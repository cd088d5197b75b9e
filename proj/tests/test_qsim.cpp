#include <cmath>
#include <complex>

#include "doctest.h"
#include "qts/errors.hpp"
#include "qts/qsim/program.hpp"
#include "qts/qsim/state.hpp"
#include "support.hpp"

using namespace qts;
using namespace qts::qsim;
using std::complex;

namespace {
constexpr double kPi = 3.14159265358979323846;

StateVector basis_state(int n_qubits, std::size_t index) {
  StateVector s = zero_state(n_qubits);
  s.amplitudes[0] = 0.0;
  s.amplitudes[index] = 1.0;
  return s;
}
}  // namespace

TEST_SUITE("qsim") {

TEST_CASE("zero_state bounds and shape") {
  for (int n : {1, 5, 16}) {
    auto s = zero_state(n);
    CHECK(s.n_qubits == n);
    CHECK(s.amplitudes.size() == (std::size_t{1} << n));
    CHECK(s.amplitudes[0] == complex<double>(1.0, 0.0));
    CHECK(norm_sq(s) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(zero_state(0), ConfigError);
  CHECK_THROWS_AS(zero_state(17), ConfigError);
  CHECK_THROWS_AS(zero_state(-3), ConfigError);
}

TEST_CASE("gate_unitary matches closed forms") {
  complex<double> u[4];
  const double th = 0.7;
  const double c = std::cos(th / 2), s = std::sin(th / 2);

  gate_unitary(GateKind::H, 0.0, u);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(u[0] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(u[1] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(u[2] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(u[3] - complex<double>(-r)) < 1e-15);

  gate_unitary(GateKind::RX, th, u);
  CHECK(std::abs(u[0] - complex<double>(c)) < 1e-15);
  CHECK(std::abs(u[1] - complex<double>(0, -s)) < 1e-15);
  CHECK(std::abs(u[2] - complex<double>(0, -s)) < 1e-15);
  CHECK(std::abs(u[3] - complex<double>(c)) < 1e-15);

  gate_unitary(GateKind::RY, th, u);
  CHECK(std::abs(u[0] - complex<double>(c)) < 1e-15);
  CHECK(std::abs(u[1] - complex<double>(-s)) < 1e-15);
  CHECK(std::abs(u[2] - complex<double>(s)) < 1e-15);
  CHECK(std::abs(u[3] - complex<double>(c)) < 1e-15);

  gate_unitary(GateKind::RZ, th, u);
  CHECK(std::abs(u[0] - std::exp(complex<double>(0, -th / 2))) < 1e-15);
  CHECK(std::abs(u[1]) == 0.0);
  CHECK(std::abs(u[2]) == 0.0);
  CHECK(std::abs(u[3] - std::exp(complex<double>(0, th / 2))) < 1e-15);

  gate_unitary(GateKind::CNOT, 0.0, u);  // controlled block is X
  CHECK(u[0] == complex<double>(0.0));
  CHECK(u[1] == complex<double>(1.0));
  CHECK(u[2] == complex<double>(1.0));
  CHECK(u[3] == complex<double>(0.0));

  // Controlled rotations share the plain rotation block.
  complex<double> v[4];
  gate_unitary(GateKind::CRY, th, u);
  gate_unitary(GateKind::RY, th, v);
  for (int i = 0; i < 4; ++i) CHECK(u[i] == v[i]);
}

TEST_CASE("little-endian amplitude layout") {
  // H on qubit 0 of |00> populates indices 0 and 1 (bit 0 is the LSB).
  auto s = zero_state(2);
  apply_gate_inplace(s, Gate::h(0), {}, {});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitudes[0] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(s.amplitudes[1] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(s.amplitudes[2]) == 0.0);
  CHECK(std::abs(s.amplitudes[3]) == 0.0);

  // H on qubit 1 populates indices 0 and 2.
  auto t = zero_state(2);
  apply_gate_inplace(t, Gate::h(1), {}, {});
  CHECK(std::abs(t.amplitudes[0] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(t.amplitudes[2] - complex<double>(r)) < 1e-15);
  CHECK(std::abs(t.amplitudes[1]) == 0.0);
}

TEST_CASE("cnot truth table") {
  // control 0, target 1: |q1 q0> = index q1*2 + q0.
  const std::size_t expect[4] = {0, 3, 2, 1};  // 00->00, 01->11, 10->10, 11->01
  for (std::size_t in = 0; in < 4; ++in) {
    auto s = basis_state(2, in);
    apply_gate_inplace(s, Gate::cnot(0, 1), {}, {});
    CHECK(std::abs(s.amplitudes[expect[in]] - complex<double>(1.0)) < 1e-15);
    CHECK(norm_sq(s) == doctest::Approx(1.0));
  }
}

TEST_CASE("single-qubit rotation expectations") {
  GateProgram p;
  p.n_qubits = 1;
  p.measured_qubits = {0};

  p.gates = {Gate::ry(0, AngleSource::constant(kPi))};
  CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(-1.0));

  p.gates = {Gate::rx(0, AngleSource::constant(kPi / 2))};
  CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(0.0));

  // <Z> after RY(theta)|0> is cos(theta).
  for (double th : {0.3, 1.1, 2.9}) {
    p.gates = {Gate::ry(0, AngleSource::constant(th))};
    CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(std::cos(th)));
  }

  // RZ only shifts phase of a basis state.
  p.gates = {Gate::rz(0, AngleSource::constant(1.23))};
  CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(1.0));
}

TEST_CASE("controlled rotation acts only when control is |1>") {
  GateProgram p;
  p.n_qubits = 2;
  p.measured_qubits = {1};
  p.gates = {Gate::cry(0, 1, AngleSource::constant(0.9))};
  CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(1.0));

  p.gates = {Gate::rx(0, AngleSource::constant(kPi)),
             Gate::cry(0, 1, AngleSource::constant(0.9))};
  CHECK(run_program(p, {}, {}).expectations[0] == doctest::Approx(std::cos(0.9)));
}

TEST_CASE("expect_z and norm_sq") {
  StateVector s;
  s.n_qubits = 2;
  s.amplitudes = {complex<double>(0.5, 0.0), complex<double>(0.0, 0.5),
                  complex<double>(-0.5, 0.0), complex<double>(0.0, -0.5)};
  CHECK(norm_sq(s) == doctest::Approx(1.0));
  CHECK(expect_z(s, 0) == doctest::Approx(0.0));
  CHECK(expect_z(s, 1) == doctest::Approx(0.0));

  StateVector t;
  t.n_qubits = 1;
  t.amplitudes = {complex<double>(0.6, 0.0), complex<double>(0.0, 0.8)};
  CHECK(expect_z(t, 0) == doctest::Approx(0.36 - 0.64));
  CHECK_THROWS_AS(expect_z(t, 1), ConfigError);
}

TEST_CASE("random programs agree with dense matrix oracle") {
  Rng rng(20240811);
  for (int trial = 0; trial < 60; ++trial) {
    auto rp = testsup::random_program(rng, 4, 12);
    auto res = run_program(rp.prog, rp.params, rp.inputs);
    auto ref = testsup::dense_oracle(rp.prog, rp.params, rp.inputs);
    REQUIRE(res.expectations.size() == ref.size());
    for (std::size_t j = 0; j < ref.size(); ++j)
      CHECK(std::abs(res.expectations[j] - ref[j]) < 1e-12);
    CHECK(std::abs(norm_sq(res.state) - 1.0) < 1e-10);
  }
}

TEST_CASE("norm preserved over long circuits") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto rp = testsup::random_program(rng, 6, 60);
    auto res = run_program(rp.prog, rp.params, rp.inputs);
    CHECK(std::abs(norm_sq(res.state) - 1.0) < 1e-10);
  }
}

TEST_CASE("scaler values and derivatives") {
  CHECK(apply_scaler(Scaler::Identity, 0.37) == 0.37);
  CHECK(apply_scaler(Scaler::Arctan, 2.0) == doctest::Approx(std::atan(2.0)));
  CHECK(apply_scaler(Scaler::ArctanSquare, 1.3) == doctest::Approx(std::atan(1.69)));
  CHECK(apply_scaler(Scaler::Arccos, 0.5) == doctest::Approx(std::acos(0.5)));

  // Min-max scaled data hits 0 and 1 exactly; both clamp to the open interval.
  CHECK(apply_scaler(Scaler::Arccos, 0.0) == doctest::Approx(std::acos(kArccosClampEps)));
  CHECK(apply_scaler(Scaler::Arccos, 1.0) == doctest::Approx(std::acos(1.0 - kArccosClampEps)));
  CHECK(apply_scaler(Scaler::Arccos, -0.8) == doctest::Approx(std::acos(kArccosClampEps)));
  CHECK_THROWS_AS(apply_scaler(Scaler::Arccos, 1.0 + 1e-9), DomainError);
  CHECK_THROWS_AS(apply_scaler(Scaler::Arccos, -1.0 - 1e-9), DomainError);

  CHECK(scaler_derivative(Scaler::Identity, 5.0) == 1.0);
  CHECK(scaler_derivative(Scaler::Arctan, 2.0) == doctest::Approx(1.0 / 5.0));
  const double x = 1.3;
  CHECK(scaler_derivative(Scaler::ArctanSquare, x) ==
        doctest::Approx(2 * x / (1 + x * x * x * x)));
  CHECK(scaler_derivative(Scaler::Arccos, 0.5) == doctest::Approx(-1.0 / std::sqrt(0.75)));
  // Derivative is taken at the clamped argument, so it stays finite at 1.
  const double xc = 1.0 - kArccosClampEps;
  CHECK(scaler_derivative(Scaler::Arccos, 1.0) == doctest::Approx(-1.0 / std::sqrt(1 - xc * xc)));
}

TEST_CASE("angle resolution") {
  std::vector<double> params = {0.4, -1.7};
  std::vector<double> inputs = {0.25};
  CHECK(resolve_angle(AngleSource::constant(2.5), params, inputs) == 2.5);
  CHECK(resolve_angle(AngleSource::trainable(1), params, inputs) == -1.7);
  CHECK(resolve_angle(AngleSource::input(0, Scaler::Arccos, 3.0), params, inputs) ==
        doctest::Approx(3.0 * std::acos(0.25)));
  CHECK(angle_input_derivative(AngleSource::trainable(1), inputs) == 0.0);
  CHECK(angle_input_derivative(AngleSource::input(0, Scaler::Arctan, 2.0), inputs) ==
        doctest::Approx(2.0 / (1 + 0.25 * 0.25)));
}

TEST_CASE("program validation rejects malformed programs") {
  GateProgram ok;
  ok.n_qubits = 2;
  ok.gates = {Gate::h(0), Gate::cnot(0, 1)};
  ok.measured_qubits = {0, 1};
  CHECK_NOTHROW(ok.validate());

  auto bad = ok;
  bad.n_qubits = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = ok;
  bad.gates[0].target = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = ok;
  bad.gates[1].control = 1;
  bad.gates[1].target = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = ok;  // sparse trainable indices
  bad.gates.push_back(Gate::ry(0, AngleSource::trainable(1)));
  bad.n_trainable = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = ok;  // input index out of declared range
  bad.gates.push_back(Gate::ry(0, AngleSource::input(3)));
  bad.n_inputs = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = ok;
  bad.measured_qubits = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.measured_qubits = {0, 0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.measured_qubits = {2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("run_program checks vector lengths") {
  GateProgram p;
  p.n_qubits = 1;
  p.gates = {Gate::ry(0, AngleSource::trainable(0))};
  p.n_trainable = 1;
  p.measured_qubits = {0};
  CHECK_THROWS_AS(run_program(p, {}, {}), ConfigError);
  CHECK_THROWS_AS(run_program(p, {0.1, 0.2}, {}), ConfigError);
  CHECK_THROWS_AS(run_program(p, {0.1}, {0.5}), ConfigError);
  CHECK_NOTHROW(run_program(p, {0.1}, {}));
}

TEST_CASE("netlist golden output") {
  GateProgram p;
  p.n_qubits = 2;
  p.gates = {Gate::h(0), Gate::ry(1, AngleSource::trainable(0)),
             Gate::cnot(0, 1),
             Gate::rz(0, AngleSource::input(0, Scaler::Arccos, 2.0)),
             Gate::crx(1, 0, AngleSource::constant(0.5))};
  p.n_trainable = 1;
  p.n_inputs = 1;
  p.measured_qubits = {1, 0};
  CHECK(p.netlist() ==
        "qubits 2\n"
        "H q0\n"
        "RY q1 theta[0]\n"
        "CNOT q0>q1\n"
        "RZ q0 in[0]:acos*2\n"
        "CRX q1>q0 const(0.5)\n"
        "measure q1 q0\n");
}

TEST_CASE("reset compilation: no reset points is the identity") {
  Rng rng(11);
  auto rp = testsup::random_program(rng, 3, 8);
  auto out = reset_qubits_fresh(rp.prog, {});
  CHECK(out.n_qubits == rp.prog.n_qubits);
  CHECK(out.netlist() == rp.prog.netlist());
}

TEST_CASE("reset compilation remaps later gates onto fresh wires") {
  GateProgram p;
  p.n_qubits = 2;
  p.gates = {Gate::ry(0, AngleSource::constant(0.8)), Gate::cnot(0, 1),
             Gate::ry(0, AngleSource::constant(1.7))};
  p.measured_qubits = {0, 1};

  auto out = reset_qubits_fresh(p, {{2, {0}}});
  CHECK(out.n_qubits == 3);
  REQUIRE(out.gates.size() == 3);
  CHECK(out.gates[0].target == 0);
  CHECK(out.gates[1].control == 0);
  CHECK(out.gates[1].target == 1);
  CHECK(out.gates[2].target == 2);  // rerouted to the fresh wire
  CHECK(out.measured_qubits == std::vector<int>{2, 1});

  // Semantics of a true |0> reset: the rerouted wire sees RY(1.7) on |0>,
  // the entangled partner keeps <Z> = cos(0.8).
  auto res = run_program(out, {}, {});
  CHECK(res.expectations[0] == doctest::Approx(std::cos(1.7)));
  CHECK(res.expectations[1] == doctest::Approx(std::cos(0.8)));
}

TEST_CASE("reset before any gate is equivalent to relabeling") {
  GateProgram p;
  p.n_qubits = 2;
  p.gates = {Gate::ry(0, AngleSource::constant(0.4)), Gate::cnot(0, 1)};
  p.measured_qubits = {0, 1};
  auto out = reset_qubits_fresh(p, {{0, {0, 1}}});
  CHECK(out.n_qubits == 4);
  auto a = run_program(p, {}, {});
  auto b = run_program(out, {}, {});
  for (std::size_t j = 0; j < a.expectations.size(); ++j)
    CHECK(a.expectations[j] == doctest::Approx(b.expectations[j]));
}

TEST_CASE("recurrent-style reset expansion: 2+2 qubits, 4 steps -> 10 wires") {
  // Two data qubits reset after each of the first three steps, two hidden
  // qubits never reset: 4 + 3*2 = 10 simulated qubits.
  GateProgram p;
  p.n_qubits = 4;
  std::vector<ResetPoint> resets;
  for (int step = 0; step < 4; ++step) {
    p.gates.push_back(Gate::ry(0, AngleSource::constant(0.1 + step)));
    p.gates.push_back(Gate::ry(1, AngleSource::constant(0.2 + step)));
    p.gates.push_back(Gate::cnot(0, 2));
    p.gates.push_back(Gate::cnot(1, 3));
    if (step < 3) resets.push_back({p.gates.size(), {0, 1}});
  }
  p.measured_qubits = {0, 1};
  auto out = reset_qubits_fresh(p, resets);
  CHECK(out.n_qubits == 10);
  CHECK(out.measured_qubits == std::vector<int>{8, 9});
  CHECK_NOTHROW(out.validate());
  CHECK_NOTHROW(run_program(out, {}, {}));
}

TEST_CASE("reset expansion resource and argument errors") {
  GateProgram p;
  p.n_qubits = 14;
  p.gates = {Gate::h(0)};
  p.measured_qubits = {0};
  CHECK_THROWS_AS(reset_qubits_fresh(p, {{1, {0, 1, 2}}}), ResourceError);
  CHECK_NOTHROW(reset_qubits_fresh(p, {{1, {0, 1}}}));  // exactly 16 is fine

  GateProgram q;
  q.n_qubits = 2;
  q.gates = {Gate::h(0)};
  q.measured_qubits = {0};
  CHECK_THROWS_AS(reset_qubits_fresh(q, {{2, {0}}}), ConfigError);  // past program end
  CHECK_THROWS_AS(reset_qubits_fresh(q, {{0, {5}}}), ConfigError);  // bad qubit
}

}  // TEST_SUITE
