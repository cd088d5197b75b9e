#include <cmath>

#include "hybrid_common.hpp"
#include "qts/errors.hpp"
#include "qts/models/builders.hpp"
#include "qts/qsim/state.hpp"

namespace qts::models {

namespace qd = qts::models::detail;

namespace {

// LSTM cell whose gate networks are six weight-independent PQCs sharing one
// circuit shape. Cell state is n-dim, hidden state is the first h = n - d
// readouts of PQC5; PQC6 post-processes the last internal state for readout.
class QlstmModel final : public Model {
 public:
  QlstmModel(int seq_len, int data_dim, int n_qubits, int layers)
      : l_(seq_len), d_(data_dim), n_(n_qubits), m_(layers), h_(n_qubits - data_dim) {
    if (h_ < 1) throw ConfigError("qlstm needs more qubits than data dimensions");
    pqc_full_ = qd::make_gate_cell_pqc(n_, m_, n_);
    pqc_h_ = qd::make_gate_cell_pqc(n_, m_, h_);
    qp_ = pqc_full_.n_trainable;
    out_lin_ = {n_, d_, true};
  }

  ParamCounts param_counts() const override { return {out_lin_.param_count(), 6 * qp_}; }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p = ml::init_quantum_params(6 * qp_, rng);
    const ml::Vec o = out_lin_.init_params(rng);
    p.insert(p.end(), o.begin(), o.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    ml::Vec h(h_, 0.0), c(n_, 0.0), s;
    for (int t = 0; t < l_; ++t) {
      const ml::Vec v = step_input(seq, h, t);
      const ml::Vec f = ml::activate(ml::Act::Sigmoid, qsim::run_program(pqc_full_, pqc(params, 0), v).expectations);
      const ml::Vec i = ml::activate(ml::Act::Sigmoid, qsim::run_program(pqc_full_, pqc(params, 1), v).expectations);
      const ml::Vec g = ml::activate(ml::Act::Tanh, qsim::run_program(pqc_full_, pqc(params, 2), v).expectations);
      const ml::Vec o = ml::activate(ml::Act::Sigmoid, qsim::run_program(pqc_full_, pqc(params, 3), v).expectations);
      s.assign(n_, 0.0);
      for (int j = 0; j < n_; ++j) {
        c[j] = f[j] * c[j] + i[j] * g[j];
        s[j] = o[j] * std::tanh(c[j]);
      }
      if (t + 1 < l_) h = qsim::run_program(pqc_h_, pqc(params, 4), s).expectations;
    }
    const ml::Vec e6 = qsim::run_program(pqc_full_, pqc(params, 5), s).expectations;
    return out_lin_.forward(e6, ml::Vec(params.end() - out_lin_.param_count(), params.end()));
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    struct StepCache {
      ml::Vec v, f, i, g, o, c_prev, c, tanh_c, s;
      qgrad::GradientResult j1, j2, j3, j4, j5;
    };
    std::vector<StepCache> steps(l_);

    ml::Vec h(h_, 0.0), c(n_, 0.0);
    for (int t = 0; t < l_; ++t) {
      StepCache& sc = steps[t];
      sc.v = step_input(seq, h, t);
      sc.c_prev = c;
      sc.j1 = qgrad::adjoint_gradient(pqc_full_, pqc(params, 0), sc.v);
      sc.j2 = qgrad::adjoint_gradient(pqc_full_, pqc(params, 1), sc.v);
      sc.j3 = qgrad::adjoint_gradient(pqc_full_, pqc(params, 2), sc.v);
      sc.j4 = qgrad::adjoint_gradient(pqc_full_, pqc(params, 3), sc.v);
      sc.f = ml::activate(ml::Act::Sigmoid, sc.j1.expectations);
      sc.i = ml::activate(ml::Act::Sigmoid, sc.j2.expectations);
      sc.g = ml::activate(ml::Act::Tanh, sc.j3.expectations);
      sc.o = ml::activate(ml::Act::Sigmoid, sc.j4.expectations);
      sc.c.assign(n_, 0.0);
      sc.tanh_c.assign(n_, 0.0);
      sc.s.assign(n_, 0.0);
      for (int j = 0; j < n_; ++j) {
        sc.c[j] = sc.f[j] * c[j] + sc.i[j] * sc.g[j];
        sc.tanh_c[j] = std::tanh(sc.c[j]);
        sc.s[j] = sc.o[j] * sc.tanh_c[j];
      }
      c = sc.c;
      if (t + 1 < l_) {
        sc.j5 = qgrad::adjoint_gradient(pqc_h_, pqc(params, 4), sc.s);
        h = sc.j5.expectations;
      }
    }

    const auto res6 = qgrad::adjoint_gradient(pqc_full_, pqc(params, 5), steps[l_ - 1].s);
    const ml::Vec p_out(params.end() - out_lin_.param_count(), params.end());
    const ml::Vec y = out_lin_.forward(res6.expectations, p_out);
    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    double* dp_out = dp + 6 * qp_;
    const ml::Vec dE6 = out_lin_.backward(res6.expectations, p_out, dy, dp_out);
    qd::add_vjp(dE6, res6.grad.d_params, n_, qp_, 1.0, dp + 5 * qp_);

    ml::Vec dh(h_, 0.0), dc(n_, 0.0);
    for (int t = l_ - 1; t >= 0; --t) {
      const StepCache& sc = steps[t];
      ml::Vec ds(n_, 0.0);
      if (t == l_ - 1) qd::add_vjp(dE6, res6.grad.d_inputs, n_, n_, 1.0, ds.data());
      if (t + 1 < l_) {
        qd::add_vjp(dh, sc.j5.grad.d_params, h_, qp_, 1.0, dp + 4 * qp_);
        qd::add_vjp(dh, sc.j5.grad.d_inputs, h_, n_, 1.0, ds.data());
      }

      ml::Vec dE1(n_), dE2(n_), dE3(n_), dE4(n_);
      for (int j = 0; j < n_; ++j) {
        const double dct = dc[j] + ds[j] * sc.o[j] * (1.0 - sc.tanh_c[j] * sc.tanh_c[j]);
        const double dgo = ds[j] * sc.tanh_c[j];
        const double dgf = dct * sc.c_prev[j];
        const double dgi = dct * sc.g[j];
        const double dgg = dct * sc.i[j];
        dE1[j] = dgf * sc.f[j] * (1.0 - sc.f[j]);
        dE2[j] = dgi * sc.i[j] * (1.0 - sc.i[j]);
        dE3[j] = dgg * (1.0 - sc.g[j] * sc.g[j]);
        dE4[j] = dgo * sc.o[j] * (1.0 - sc.o[j]);
        dc[j] = dct * sc.f[j];
      }

      ml::Vec dv(n_, 0.0);
      qd::add_vjp(dE1, sc.j1.grad.d_params, n_, qp_, 1.0, dp + 0 * qp_);
      qd::add_vjp(dE2, sc.j2.grad.d_params, n_, qp_, 1.0, dp + 1 * qp_);
      qd::add_vjp(dE3, sc.j3.grad.d_params, n_, qp_, 1.0, dp + 2 * qp_);
      qd::add_vjp(dE4, sc.j4.grad.d_params, n_, qp_, 1.0, dp + 3 * qp_);
      qd::add_vjp(dE1, sc.j1.grad.d_inputs, n_, n_, 1.0, dv.data());
      qd::add_vjp(dE2, sc.j2.grad.d_inputs, n_, n_, 1.0, dv.data());
      qd::add_vjp(dE3, sc.j3.grad.d_inputs, n_, n_, 1.0, dv.data());
      qd::add_vjp(dE4, sc.j4.grad.d_inputs, n_, n_, 1.0, dv.data());
      dh.assign(dv.begin(), dv.begin() + h_);  // remainder is d(x_t), not needed
    }
    return mse.loss;
  }

 private:
  ml::Vec step_input(const ml::Vec& seq, const ml::Vec& h, int t) const {
    ml::Vec v(n_);
    for (int j = 0; j < h_; ++j) v[j] = h[j];
    for (int j = 0; j < d_; ++j) v[h_ + j] = seq[static_cast<std::size_t>(t) * d_ + j];
    return v;
  }

  ml::Vec pqc(const ml::Vec& params, int which) const {
    return ml::Vec(params.begin() + static_cast<std::size_t>(which) * qp_,
                   params.begin() + static_cast<std::size_t>(which + 1) * qp_);
  }

  int l_, d_, n_, m_, h_, qp_ = 0;
  qsim::GateProgram pqc_full_, pqc_h_;
  ml::Linear out_lin_;
};

}  // namespace

std::unique_ptr<Model> build_qlstm(int seq_len, int data_dim, int n_qubits, int layers) {
  if (seq_len < 1 || data_dim < 1 || n_qubits < 2 || layers < 1)
    throw ConfigError("bad qlstm hyperparameters");
  if (n_qubits <= data_dim) throw ConfigError("qlstm needs more qubits than data dimensions");
  return std::make_unique<QlstmModel>(seq_len, data_dim, n_qubits, layers);
}

}  // namespace qts::models
