#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "doctest.h"
#include "qts/errors.hpp"
#include "qts/ml/blocks.hpp"
#include "qts/models/builders.hpp"
#include "qts/models/model.hpp"
#include "qts/rng.hpp"

using namespace qts;
using namespace qts::models;

namespace {

constexpr double kTwoPi = 2 * 3.14159265358979323846;

ml::Vec random_sequence(int l, int d, Rng& rng) {
  ml::Vec seq(static_cast<std::size_t>(l) * d);
  for (double& v : seq) v = rng.uniform(0.05, 0.95);  // arccos-safe window
  return seq;
}

double loss_of(const Model& model, const ml::Vec& seq, const ml::Vec& target, const ml::Vec& p) {
  return ml::mse_loss(model.forward(seq, p), target).loss;
}

bool close_rel(double a, double b, double rel, double floor_ = 0.1) {
  return std::abs(a - b) <= rel * std::max({floor_, std::abs(a), std::abs(b)});
}

// forward_backward gradient vs central finite differences of the forward loss.
void check_gradient(const Model& model, int l, int d, unsigned seed) {
  Rng rng(seed);
  const ml::Vec seq = random_sequence(l, d, rng);
  ml::Vec target(d);
  for (double& v : target) v = rng.uniform(0.1, 0.9);
  ml::Vec params = model.init_params(rng);
  REQUIRE(static_cast<int>(params.size()) == model.param_counts().total());

  std::vector<double> dp(params.size(), 0.0);
  const double loss = model.forward_backward(seq, target, params, 1.0, dp.data());
  CHECK(loss == doctest::Approx(loss_of(model, seq, target, params)).epsilon(1e-10));

  const double h = 1e-5;
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] += h;
    const double up = loss_of(model, seq, target, params);
    params[i] -= 2 * h;
    const double dn = loss_of(model, seq, target, params);
    params[i] += h;
    const double fd = (up - dn) / (2 * h);
    INFO("param ", i, ": analytic ", dp[i], " vs fd ", fd);
    CHECK(close_rel(dp[i], fd, 1e-4));
  }

  // grad_scale multiplies the accumulated gradient; accumulation adds.
  std::vector<double> dp2(params.size(), 1.0);
  model.forward_backward(seq, target, params, 2.0, dp2.data());
  for (std::size_t i = 0; i < dp.size(); ++i)
    CHECK(dp2[i] == doctest::Approx(1.0 + 2.0 * dp[i]).epsilon(1e-9));
}

AnsatzDescriptor two_block_ansatz() {
  // E:X | VS:Y -- minimal descriptor satisfying every cyclic constraint for d=1.
  AnsatzDescriptor a;
  a.blocks = {{BlockKind::Enc, Axis::X, 0}, {BlockKind::VarSingle, Axis::Y, -1}};
  return a;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("parameter counts: classical baselines") {
  CHECK(build_mlp(4, 1, 1, 8)->param_counts().classical == 49);
  CHECK(build_mlp(4, 1, 1, 8)->param_counts().quantum == 0);
  CHECK(build_mlp(8, 2, 3, 16)->param_counts().classical ==
        (16 * 16 + 16) + 2 * (16 * 16 + 16) + (16 * 2 + 2));
  CHECK(build_rnn(4, 1, 1, 8)->param_counts().classical == 88 + 9);
  CHECK(build_rnn(8, 3, 2, 8)->param_counts().classical ==
        (8 * 11 + 16) + (8 * 16 + 16) + (8 * 3 + 3));
  CHECK(build_lstm(4, 1, 1, 8)->param_counts().classical == 4 * (8 * 9 + 8) + 9);
  CHECK(build_lstm(8, 3, 2, 8)->param_counts().classical ==
        4 * (8 * 11 + 8) + 4 * (8 * 16 + 8) + (8 * 3 + 3));
}

TEST_CASE("parameter counts: hybrid models") {
  auto dqnn = build_dqnn(4, 1, 4, 1);
  CHECK(dqnn->param_counts().classical == (4 * 4 + 4) + (4 * 1 + 1));  // 25
  CHECK(dqnn->param_counts().quantum == 3 * 4 * 1);
  CHECK(build_dqnn(8, 3, 6, 2)->param_counts().quantum == 3 * 6 * 2);
  CHECK(build_dqnn(8, 3, 6, 2)->param_counts().classical == (24 * 6 + 6) + (6 * 3 + 3));

  auto qrnn = build_qrnn(4, 1, 2, 2, false);
  CHECK(qrnn->param_counts().quantum == 3 * 4 + 3);  // shared across steps
  CHECK(qrnn->param_counts().classical == 2 * 1 + 1);
  auto qrnn_reset = build_qrnn(4, 1, 2, 2, true);
  CHECK(qrnn_reset->param_counts().quantum == qrnn->param_counts().quantum);

  CHECK(build_qlstm(4, 1, 4, 1)->param_counts().quantum == 6 * 3 * 4 * 1);  // 72
  CHECK(build_qlstm(4, 1, 4, 1)->param_counts().classical == 4 * 1 + 1);
  CHECK(build_qlstm(4, 3, 6, 3)->param_counts().quantum == 6 * 3 * 6 * 3);  // 324

  auto leq = build_leqlstm(4, 1, 2, 8);
  CHECK(leq->param_counts().quantum == 4 * 3 * 6 * 2);
  CHECK(leq->param_counts().classical ==
        ((8 + 1) * 6 + 6) + 4 * (6 * 8 + 8) + (8 * 1 + 1));

  auto ru = build_ruqnn(2, 1, 4, two_block_ansatz());
  CHECK(ru->param_counts().quantum == 2 * 4);  // one VarSingle per step, fresh weights
  CHECK(ru->param_counts().classical == 4 * 1 + 1);
}

TEST_CASE("quantum registers per gate-cell grid point") {
  for (int n : {4, 6}) {
    for (int m : {1, 2, 3}) {
      for (int d : {1, 2, 3}) {
        if (n <= d) continue;
        auto model = build_qlstm(4, d, n, m);
        CHECK(model->param_counts().quantum == 6 * 3 * n * m);
        Rng rng(1);
        CHECK(static_cast<int>(model->init_params(rng).size()) ==
              model->param_counts().total());
      }
    }
  }
}

TEST_CASE("recurrent encoding uses exponentially graded prefactors") {
  // With zero variational weights the circuit reduces to RX(beta_a (x0 + x1))
  // per qubit; a one-hot readout then gives cos(beta_a (x0 + x1)).
  const int n = 4, l = 2;
  auto model = build_ruqnn(l, 1, n, two_block_ansatz());
  const int nq = model->param_counts().quantum;
  const ml::Vec seq = {0.31, 0.24};
  const double s = seq[0] + seq[1];
  for (int a = 0; a < n; ++a) {
    ml::Vec params(model->param_counts().total(), 0.0);
    params[nq + a] = 1.0;  // out_lin weight row one-hot on qubit a
    const double beta = std::pow(3.0, a) / std::pow(3.0, n - 1);
    CHECK(model->forward(seq, params)[0] == doctest::Approx(std::cos(beta * s)));
  }
}

TEST_CASE("forward output dimension and determinism") {
  Rng rng(88);
  auto check = [&](std::unique_ptr<Model> model, int l, int d) {
    const ml::Vec seq = random_sequence(l, d, rng);
    const ml::Vec p = model->init_params(rng);
    const ml::Vec y = model->forward(seq, p);
    CHECK(static_cast<int>(y.size()) == d);
    CHECK(model->forward(seq, p) == y);
  };
  check(build_dqnn(4, 1, 4, 1), 4, 1);
  check(build_ruqnn(2, 2, 4, AnsatzDescriptor::parse("E:X:0 | E:Y:1 | VS:X | VS:Y")), 2, 2);
  check(build_qrnn(3, 2, 2, 2, false), 3, 2);
  check(build_qlstm(3, 1, 4, 1), 3, 1);
  check(build_leqlstm(3, 1, 1, 4), 3, 1);
  check(build_mlp(4, 2, 2, 8), 4, 2);
  check(build_rnn(4, 2, 2, 8), 4, 2);
  check(build_lstm(4, 2, 2, 8), 4, 2);
}

TEST_CASE("gradients match finite differences: classical") {
  check_gradient(*build_mlp(4, 1, 2, 6), 4, 1, 101);
  check_gradient(*build_rnn(4, 2, 2, 5), 4, 2, 102);
  check_gradient(*build_lstm(4, 2, 2, 4), 4, 2, 103);
}

TEST_CASE("gradients match finite differences: hybrid feedforward") {
  check_gradient(*build_dqnn(4, 1, 4, 1), 4, 1, 104);
  check_gradient(*build_ruqnn(2, 1, 3, two_block_ansatz()), 2, 1, 105);
}

TEST_CASE("gradients match finite differences: hybrid recurrent") {
  check_gradient(*build_qrnn(3, 1, 2, 2, false), 3, 1, 106);
  check_gradient(*build_qrnn(3, 1, 2, 2, true), 3, 1, 107);
  check_gradient(*build_qlstm(2, 1, 4, 1), 2, 1, 108);
  check_gradient(*build_leqlstm(2, 1, 1, 4), 2, 1, 109);
}

TEST_CASE("init respects segment-wise distributions") {
  auto model = build_dqnn(4, 1, 4, 1);
  Rng rng(7);
  const ml::Vec p = model->init_params(rng);
  REQUIRE(p.size() == 37);
  // input linear: W (16) within +-1/sqrt(4), biases (4) zero
  for (int i = 0; i < 16; ++i) CHECK(std::abs(p[i]) <= 0.5);
  for (int i = 16; i < 20; ++i) CHECK(p[i] == 0.0);
  // quantum segment: U[0, 2pi), essentially surely some value > 1
  double q_max = 0.0;
  for (int i = 20; i < 32; ++i) {
    CHECK(p[i] >= 0.0);
    CHECK(p[i] < kTwoPi);
    q_max = std::max(q_max, p[i]);
  }
  CHECK(q_max > 1.0);
  // output linear: W (4) within +-1/2, bias zero
  for (int i = 32; i < 36; ++i) CHECK(std::abs(p[i]) <= 0.5);
  CHECK(p[36] == 0.0);

  Rng r1(9), r2(9);
  CHECK(model->init_params(r1) == model->init_params(r2));
}

TEST_CASE("ansatz constraints hold for every sample") {
  for (int d : {1, 2, 3}) {
    Rng rng(1000 + d);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = sample_ansatz(d, rng);
      CHECK(a.satisfies(d));
      CHECK_NOTHROW(a.validate(d));
      CHECK_FALSE(a.blocks.empty());
      CHECK(a.blocks.front().kind != BlockKind::VarEnt);
      CHECK(a.blocks.back().axis != Axis::Z);
      int var_blocks = 0;
      std::vector<int> enc_per_dim(d, 0);
      for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const auto& b = a.blocks[i];
        const auto& next = a.blocks[(i + 1) % a.blocks.size()];
        if (a.blocks.size() > 1) CHECK(b.axis != next.axis);
        if (b.kind == BlockKind::Enc)
          ++enc_per_dim[b.dim_index];
        else
          ++var_blocks;
      }
      for (int c : enc_per_dim) {
        CHECK(c >= 1);
        CHECK(c <= 3);
      }
      CHECK(var_blocks >= 1);
      CHECK(var_blocks <= 12);
    }
  }
}

TEST_CASE("ansatz serialization round trip") {
  Rng rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = sample_ansatz(2, rng);
    const auto b = AnsatzDescriptor::parse(a.serialize());
    CHECK(b.serialize() == a.serialize());
    REQUIRE(b.blocks.size() == a.blocks.size());
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
      CHECK(b.blocks[i].kind == a.blocks[i].kind);
      CHECK(b.blocks[i].axis == a.blocks[i].axis);
      CHECK(b.blocks[i].dim_index == a.blocks[i].dim_index);
    }
  }
  CHECK(two_block_ansatz().serialize() == "E:X:0 | VS:Y");
  CHECK_THROWS_AS(AnsatzDescriptor::parse(""), ConfigError);
  CHECK_THROWS_AS(AnsatzDescriptor::parse("Q:X"), ConfigError);
  CHECK_THROWS_AS(AnsatzDescriptor::parse("VS:W"), ConfigError);
}

TEST_CASE("ansatz validation rejects each constraint violation") {
  AnsatzDescriptor a;
  a.blocks = {{BlockKind::VarEnt, Axis::X, -1}, {BlockKind::Enc, Axis::Y, 0}};
  CHECK_THROWS_AS(a.validate(1), ConfigError);  // starts with entangler

  a.blocks = {{BlockKind::Enc, Axis::X, 0}, {BlockKind::VarSingle, Axis::Z, -1}};
  CHECK_THROWS_AS(a.validate(1), ConfigError);  // ends on Z

  a.blocks = {{BlockKind::Enc, Axis::X, 0}, {BlockKind::VarSingle, Axis::X, -1}};
  CHECK_THROWS_AS(a.validate(1), ConfigError);  // adjacent same axis

  a.blocks = {{BlockKind::Enc, Axis::X, 0}, {BlockKind::VarSingle, Axis::X, -1}};
  a.blocks[1].axis = Axis::Y;
  CHECK_THROWS_AS(a.validate(2), ConfigError);  // dimension 1 never encoded

  a.blocks = {{BlockKind::Enc, Axis::X, 0}, {BlockKind::Enc, Axis::Y, 0},
              {BlockKind::Enc, Axis::X, 0}, {BlockKind::Enc, Axis::Y, 0},
              {BlockKind::VarSingle, Axis::X, -1}};
  CHECK_THROWS_AS(a.validate(1), ConfigError);  // four encodings of one dim

  a.blocks = {{BlockKind::Enc, Axis::X, 0}};
  CHECK_THROWS_AS(a.validate(1), ConfigError);  // no variational block
}

TEST_CASE("grid enumeration per kind") {
  const auto dq = grid_specs(ModelKind::Dqnn, 4, 1);
  REQUIRE(dq.size() == 9);
  CHECK(dq[0].id() == "dqnn-layers1-qubits4");
  CHECK(dq[1].id() == "dqnn-layers2-qubits4");  // last axis varies fastest
  CHECK(dq[3].id() == "dqnn-layers1-qubits6");
  CHECK(dq[8].id() == "dqnn-layers3-qubits8");

  CHECK(grid_specs(ModelKind::Qlstm, 4, 1).size() == 6);
  CHECK(grid_specs(ModelKind::Qlstm, 4, 3).size() == 6);
  CHECK(grid_specs(ModelKind::Mlp, 4, 1).size() == 9);
  CHECK(grid_specs(ModelKind::Leqlstm, 4, 1).size() == 9);

  const auto qr = grid_specs(ModelKind::Qrnn, 4, 2);
  REQUIRE(qr.size() == 9);
  for (const auto& s : qr) CHECK(s.hp("reset") == 0);

  CHECK_THROWS_AS(grid_specs(ModelKind::Ruqnn, 4, 1), ConfigError);
}

TEST_CASE("factory enforces the benchmark grid") {
  ModelSpec spec;
  spec.kind = ModelKind::Dqnn;
  spec.seq_len = 4;
  spec.data_dim = 1;
  spec.hyper = {{"qubits", 5}, {"layers", 1}};
  CHECK_THROWS_AS(build_model(spec, true), ConfigError);
  CHECK_NOTHROW(build_model(spec, false));

  spec.hyper = {{"qubits", 4}, {"layers", 4}};
  CHECK_THROWS_AS(build_model(spec, true), ConfigError);
  spec.hyper = {{"qubits", 4}, {"layers", 2}};
  CHECK_NOTHROW(build_model(spec, true));
  spec.hyper = {{"qubits", 4}};
  CHECK_THROWS_AS(build_model(spec, true), ConfigError);  // missing hyperparameter

  ModelSpec ru;
  ru.kind = ModelKind::Ruqnn;
  ru.seq_len = 2;
  ru.data_dim = 1;
  ru.hyper = {{"qubits", 4}};
  CHECK_THROWS_AS(build_model(ru, true), ConfigError);  // ansatz required
  ru.ansatz = two_block_ansatz().serialize();
  CHECK_NOTHROW(build_model(ru, true));

  ModelSpec qr;
  qr.kind = ModelKind::Qrnn;
  qr.seq_len = 4;
  qr.data_dim = 1;
  qr.hyper = {{"data_qubits", 3}, {"hidden_qubits", 3}, {"reset", 1}};
  CHECK_THROWS_AS(build_model(qr, true), ConfigError);  // reset variant pinned to 2+2
  qr.hyper = {{"data_qubits", 2}, {"hidden_qubits", 2}, {"reset", 1}};
  CHECK_NOTHROW(build_model(qr, true));
}

TEST_CASE("kind names and spec identifiers") {
  for (auto kind : {ModelKind::Dqnn, ModelKind::Ruqnn, ModelKind::Qrnn, ModelKind::Qlstm,
                    ModelKind::Leqlstm, ModelKind::Mlp, ModelKind::Rnn, ModelKind::Lstm})
    CHECK(kind_from_name(kind_name(kind)) == kind);
  CHECK_THROWS_AS(kind_from_name("transformer"), ConfigError);

  ModelSpec a;
  a.kind = ModelKind::Ruqnn;
  a.hyper = {{"qubits", 6}};
  a.ansatz = "E:X:0 | VS:Y";
  const std::string id1 = a.id();
  a.ansatz = "E:Y:0 | VS:X";
  CHECK(a.id() != id1);
  a.ansatz = "E:X:0 | VS:Y";
  CHECK(a.id() == id1);
  CHECK(id1.substr(0, 13) == "ruqnn-qubits6");
}

TEST_CASE("builders reject non-positive shapes") {
  CHECK_THROWS_AS(build_mlp(0, 1, 1, 8), ConfigError);
  CHECK_THROWS_AS(build_rnn(4, 1, 0, 8), ConfigError);
  CHECK_THROWS_AS(build_lstm(4, 1, 1, 0), ConfigError);
  CHECK_THROWS_AS(build_dqnn(4, 0, 4, 1), ConfigError);
  CHECK_THROWS_AS(build_qrnn(4, 1, 0, 2, false), ConfigError);
  CHECK_THROWS_AS(build_qrnn(4, 4, 2, 2, false), ConfigError);  // data dim above 3
  CHECK_THROWS_AS(build_qlstm(4, 3, 3, 1), ConfigError);        // no hidden width left
  CHECK_THROWS_AS(build_leqlstm(4, 1, 1, 0), ConfigError);
  CHECK_THROWS_AS(build_ruqnn(4, 1, 1, two_block_ansatz()), ConfigError);
}

}  // TEST_SUITE
