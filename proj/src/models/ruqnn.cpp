#include <cmath>

#include "hybrid_common.hpp"
#include "qts/errors.hpp"
#include "qts/models/builders.hpp"
#include "qts/qsim/state.hpp"

namespace qts::models {

namespace {

using qsim::AngleSource;
using qsim::Gate;

// Recurrent-encoding circuit: the ansatz block list is appended once per time
// step, encoding gates carry exponentially graded prefactors 3^a/3^(n-1), and
// every step owns an independent copy of the variational weights. One flat
// program; <Z> on all qubits feeds a linear readout.
class RuqnnModel final : public Model {
 public:
  RuqnnModel(int seq_len, int data_dim, int n_qubits, AnsatzDescriptor ansatz)
      : l_(seq_len), d_(data_dim), n_(n_qubits), ansatz_(std::move(ansatz)) {
    ansatz_.validate(d_);
    out_lin_ = {n_, d_, true};

    std::vector<double> beta(n_);
    for (int a = 0; a < n_; ++a) beta[a] = std::pow(3.0, a) / std::pow(3.0, n_ - 1);

    prog_.n_qubits = n_;
    prog_.n_inputs = l_ * d_;
    int idx = 0;
    for (int t = 0; t < l_; ++t) {
      for (const AnsatzBlock& b : ansatz_.blocks) {
        switch (b.kind) {
          case BlockKind::Enc:
            for (int a = 0; a < n_; ++a)
              prog_.gates.push_back(detail::rot(
                  b.axis, a,
                  AngleSource::input(t * d_ + b.dim_index, qsim::Scaler::Identity, beta[a])));
            break;
          case BlockKind::VarSingle:
            for (int q = 0; q < n_; ++q)
              prog_.gates.push_back(detail::rot(b.axis, q, AngleSource::trainable(idx++)));
            break;
          case BlockKind::VarEnt:
            for (int q = 0; q + 1 < n_; ++q)
              prog_.gates.push_back(detail::crot(b.axis, q, q + 1, AngleSource::trainable(idx++)));
            break;
        }
      }
    }
    prog_.n_trainable = idx;
    for (int q = 0; q < n_; ++q) prog_.measured_qubits.push_back(q);
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
    detail::add_vjp(dE, res.grad.d_params, n_, prog_.n_trainable, 1.0, dp_q);
    return mse.loss;
  }

  const AnsatzDescriptor& ansatz() const { return ansatz_; }

 private:
  std::pair<ml::Vec, ml::Vec> split(const ml::Vec& params) const {
    const int a = prog_.n_trainable;
    return {ml::Vec(params.begin(), params.begin() + a), ml::Vec(params.begin() + a, params.end())};
  }

  int l_, d_, n_;
  AnsatzDescriptor ansatz_;
  ml::Linear out_lin_;
  qsim::GateProgram prog_;
};

}  // namespace

std::unique_ptr<Model> build_ruqnn(int seq_len, int data_dim, int n_qubits,
                                   const AnsatzDescriptor& ansatz) {
  if (seq_len < 1 || data_dim < 1 || n_qubits < 2)
    throw ConfigError("bad ru-qnn hyperparameters");
  return std::make_unique<RuqnnModel>(seq_len, data_dim, n_qubits, ansatz);
}

}  // namespace qts::models
