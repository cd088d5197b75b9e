#include "hybrid_common.hpp"
#include "qts/errors.hpp"
#include "qts/models/builders.hpp"
#include "qts/qsim/state.hpp"

namespace qts::models {

namespace {

using qsim::AngleSource;
using qsim::Gate;
using qsim::Scaler;

// Data + hidden register; each step arccos-encodes x_t onto every data qubit,
// then applies one shared-weight variational layer (RZ RY RZ triplet per qubit
// plus CNOT-RZ-CNOT entanglers over the full open chain). The reset variant
// reroutes the data qubits onto fresh ancillas between steps.
class QrnnModel final : public Model {
 public:
  QrnnModel(int seq_len, int data_dim, int data_qubits, int hidden_qubits, bool reset)
      : l_(seq_len), d_(data_dim), dq_(data_qubits), hq_(hidden_qubits), reset_(reset) {
    if (d_ > 3) throw ConfigError("qrnn supports data dimension up to 3");
    const int n = dq_ + hq_;
    out_lin_ = {dq_, d_, true};

    qsim::GateProgram base;
    base.n_qubits = n;
    base.n_inputs = l_ * d_;
    base.n_trainable = 3 * n + (n - 1);

    std::vector<qsim::ResetPoint> resets;
    for (int t = 0; t < l_; ++t) {
      // encoding: one arccos-scaled rotation per data dimension, X/Y alternating,
      // stacked on every data qubit
      for (int q = 0; q < dq_; ++q) {
        if (d_ == 1) {
          base.gates.push_back(Gate::ry(q, AngleSource::input(t * d_, Scaler::Arccos)));
        } else {
          base.gates.push_back(Gate::rx(q, AngleSource::input(t * d_ + 0, Scaler::Arccos)));
          base.gates.push_back(Gate::ry(q, AngleSource::input(t * d_ + 1, Scaler::Arccos)));
          if (d_ == 3)
            base.gates.push_back(Gate::rx(q, AngleSource::input(t * d_ + 2, Scaler::Arccos)));
        }
      }
      // shared variational layer: indices identical across steps
      for (int q = 0; q < n; ++q) {
        base.gates.push_back(Gate::rz(q, AngleSource::trainable(3 * q + 0)));
        base.gates.push_back(Gate::ry(q, AngleSource::trainable(3 * q + 1)));
        base.gates.push_back(Gate::rz(q, AngleSource::trainable(3 * q + 2)));
      }
      for (int q = 0; q + 1 < n; ++q) {
        base.gates.push_back(Gate::cnot(q, q + 1));
        base.gates.push_back(Gate::rz(q + 1, AngleSource::trainable(3 * n + q)));
        base.gates.push_back(Gate::cnot(q, q + 1));
      }
      if (reset_ && t + 1 < l_) {
        std::vector<int> data_reg(dq_);
        for (int q = 0; q < dq_; ++q) data_reg[q] = q;
        resets.push_back({base.gates.size(), std::move(data_reg)});
      }
    }
    for (int q = 0; q < dq_; ++q) base.measured_qubits.push_back(q);

    prog_ = reset_ ? qsim::reset_qubits_fresh(base, resets) : std::move(base);
    prog_.validate();
  }

  ParamCounts param_counts() const override {
    return {out_lin_.param_count(), prog_.n_trainable};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p = ml::init_quantum_params(prog_.n_trainable, rng);
    const ml::Vec o = out_lin_.init_params(rng);
    p.insert(p.end(), o.begin(), o.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    const auto [p_q, p_out] = split(params);
    const auto run = qsim::run_program(prog_, p_q, seq);
    return out_lin_.forward(run.expectations, p_out);
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const auto [p_q, p_out] = split(params);
    const auto res = qgrad::adjoint_gradient(prog_, p_q, seq);
    const ml::Vec y = out_lin_.forward(res.expectations, p_out);

    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    double* dp_q = dp;
    double* dp_out = dp + prog_.n_trainable;
    const ml::Vec dE = out_lin_.backward(res.expectations, p_out, dy, dp_out);
    detail::add_vjp(dE, res.grad.d_params, dq_, prog_.n_trainable, 1.0, dp_q);
    return mse.loss;
  }

  int total_qubits() const { return prog_.n_qubits; }

 private:
  std::pair<ml::Vec, ml::Vec> split(const ml::Vec& params) const {
    const int a = prog_.n_trainable;
    return {ml::Vec(params.begin(), params.begin() + a), ml::Vec(params.begin() + a, params.end())};
  }

  int l_, d_, dq_, hq_;
  bool reset_;
  ml::Linear out_lin_;
  qsim::GateProgram prog_;
};

}  // namespace

std::unique_ptr<Model> build_qrnn(int seq_len, int data_dim, int data_qubits, int hidden_qubits,
                                  bool reset) {
  if (seq_len < 1 || data_dim < 1 || data_qubits < 1 || hidden_qubits < 1)
    throw ConfigError("bad qrnn hyperparameters");
  return std::make_unique<QrnnModel>(seq_len, data_dim, data_qubits, hidden_qubits, reset);
}

}  // namespace qts::models
