#include "qts/models/builders.hpp"

#include "hybrid_common.hpp"
#include "qts/errors.hpp"
#include "qts/qsim/state.hpp"

namespace qts::models {

namespace {

using qsim::AngleSource;
using qsim::Gate;

// Whole input sequence -> linear -> per-qubit RY encoding -> m layers of
// (RZ RY RZ triplet per qubit, nearest-neighbor CNOT chain) -> <Z> on every
// qubit -> linear readout.
class DqnnModel final : public Model {
 public:
  DqnnModel(int seq_len, int data_dim, int n_qubits, int layers)
      : l_(seq_len), d_(data_dim), n_(n_qubits), m_(layers) {
    in_lin_ = {l_ * d_, n_, true};
    out_lin_ = {n_, d_, true};

    prog_.n_qubits = n_;
    prog_.n_inputs = n_;
    prog_.n_trainable = 3 * n_ * m_;
    int idx = 0;
    for (int q = 0; q < n_; ++q) prog_.gates.push_back(Gate::ry(q, AngleSource::input(q)));
    for (int layer = 0; layer < m_; ++layer) {
      for (int q = 0; q < n_; ++q) {
        prog_.gates.push_back(Gate::rz(q, AngleSource::trainable(idx++)));
        prog_.gates.push_back(Gate::ry(q, AngleSource::trainable(idx++)));
        prog_.gates.push_back(Gate::rz(q, AngleSource::trainable(idx++)));
      }
      for (int q = 0; q + 1 < n_; ++q) prog_.gates.push_back(Gate::cnot(q, q + 1));
    }
    for (int q = 0; q < n_; ++q) prog_.measured_qubits.push_back(q);
    prog_.validate();
  }

  ParamCounts param_counts() const override {
    return {in_lin_.param_count() + out_lin_.param_count(), prog_.n_trainable};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p = in_lin_.init_params(rng);
    const ml::Vec q = ml::init_quantum_params(prog_.n_trainable, rng);
    const ml::Vec o = out_lin_.init_params(rng);
    p.insert(p.end(), q.begin(), q.end());
    p.insert(p.end(), o.begin(), o.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    const auto [p_in, p_q, p_out] = split(params);
    const ml::Vec z = in_lin_.forward(seq, p_in);
    const auto run = qsim::run_program(prog_, p_q, z);
    return out_lin_.forward(run.expectations, p_out);
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const auto [p_in, p_q, p_out] = split(params);
    const ml::Vec z = in_lin_.forward(seq, p_in);
    const auto res = qgrad::adjoint_gradient(prog_, p_q, z);
    const ml::Vec y = out_lin_.forward(res.expectations, p_out);

    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    double* dp_in = dp;
    double* dp_q = dp + in_lin_.param_count();
    double* dp_out = dp_q + prog_.n_trainable;
    const ml::Vec dE = out_lin_.backward(res.expectations, p_out, dy, dp_out);
    detail::add_vjp(dE, res.grad.d_params, n_, prog_.n_trainable, 1.0, dp_q);
    ml::Vec dz(n_, 0.0);
    detail::add_vjp(dE, res.grad.d_inputs, n_, n_, 1.0, dz.data());
    in_lin_.backward(seq, p_in, dz, dp_in);
    return mse.loss;
  }

 private:
  std::tuple<ml::Vec, ml::Vec, ml::Vec> split(const ml::Vec& params) const {
    const int a = in_lin_.param_count();
    const int b = a + prog_.n_trainable;
    return {ml::Vec(params.begin(), params.begin() + a),
            ml::Vec(params.begin() + a, params.begin() + b),
            ml::Vec(params.begin() + b, params.end())};
  }

  int l_, d_, n_, m_;
  ml::Linear in_lin_, out_lin_;
  qsim::GateProgram prog_;
};

}  // namespace

std::unique_ptr<Model> build_dqnn(int seq_len, int data_dim, int n_qubits, int layers) {
  if (seq_len < 1 || data_dim < 1 || n_qubits < 1 || layers < 1)
    throw ConfigError("bad d-qnn hyperparameters");
  return std::make_unique<DqnnModel>(seq_len, data_dim, n_qubits, layers);
}

}  // namespace qts::models
