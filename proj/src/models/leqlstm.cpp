#include <cmath>

#include "hybrid_common.hpp"
#include "qts/errors.hpp"
#include "qts/models/builders.hpp"
#include "qts/qsim/state.hpp"

namespace qts::models {

namespace qd = qts::models::detail;

namespace {

constexpr int kRegister = 6;  // fixed register width of the four gate PQCs

// LSTM cell with a classical compression layer in front of four fixed-width
// PQCs and a trainable linear head behind each, so hidden size is decoupled
// from qubit count.
class LeqlstmModel final : public Model {
 public:
  LeqlstmModel(int seq_len, int data_dim, int layers, int hidden)
      : l_(seq_len), d_(data_dim), m_(layers), h_(hidden) {
    pqc_ = qd::make_gate_cell_pqc(kRegister, m_, kRegister);
    qp_ = pqc_.n_trainable;
    in_lin_ = {h_ + d_, kRegister, true};
    head_ = {kRegister, h_, true};
    out_lin_ = {h_, d_, true};
  }

  ParamCounts param_counts() const override {
    return {in_lin_.param_count() + 4 * head_.param_count() + out_lin_.param_count(), 4 * qp_};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p = ml::init_quantum_params(4 * qp_, rng);
    auto append = [&p](const ml::Vec& v) { p.insert(p.end(), v.begin(), v.end()); };
    append(in_lin_.init_params(rng));
    for (int k = 0; k < 4; ++k) append(head_.init_params(rng));
    append(out_lin_.init_params(rng));
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    const Offsets off(*this);
    ml::Vec h(h_, 0.0), c(h_, 0.0);
    for (int t = 0; t < l_; ++t) {
      const ml::Vec u = in_lin_.forward(step_input(seq, h, t), seg(params, off.in_lin, in_lin_.param_count()));
      ml::Vec gate[4];
      for (int k = 0; k < 4; ++k) {
        const ml::Vec e = qsim::run_program(pqc_, seg(params, k * qp_, qp_), u).expectations;
        gate[k] = head_.forward(e, seg(params, off.head + k * head_.param_count(), head_.param_count()));
      }
      const ml::Vec f = ml::activate(ml::Act::Sigmoid, gate[0]);
      const ml::Vec i = ml::activate(ml::Act::Sigmoid, gate[1]);
      const ml::Vec g = ml::activate(ml::Act::Tanh, gate[2]);
      const ml::Vec o = ml::activate(ml::Act::Sigmoid, gate[3]);
      for (int j = 0; j < h_; ++j) {
        c[j] = f[j] * c[j] + i[j] * g[j];
        h[j] = o[j] * std::tanh(c[j]);
      }
    }
    return out_lin_.forward(h, seg(params, off.out_lin, out_lin_.param_count()));
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const Offsets off(*this);
    struct StepCache {
      ml::Vec v, u, f, i, g, o, c_prev, c, tanh_c;
      qgrad::GradientResult jac[4];
    };
    std::vector<StepCache> steps(l_);

    ml::Vec h(h_, 0.0), c(h_, 0.0);
    for (int t = 0; t < l_; ++t) {
      StepCache& sc = steps[t];
      sc.v = step_input(seq, h, t);
      sc.c_prev = c;
      sc.u = in_lin_.forward(sc.v, seg(params, off.in_lin, in_lin_.param_count()));
      ml::Vec gate[4];
      for (int k = 0; k < 4; ++k) {
        sc.jac[k] = qgrad::adjoint_gradient(pqc_, seg(params, k * qp_, qp_), sc.u);
        gate[k] = head_.forward(sc.jac[k].expectations,
                                seg(params, off.head + k * head_.param_count(), head_.param_count()));
      }
      sc.f = ml::activate(ml::Act::Sigmoid, gate[0]);
      sc.i = ml::activate(ml::Act::Sigmoid, gate[1]);
      sc.g = ml::activate(ml::Act::Tanh, gate[2]);
      sc.o = ml::activate(ml::Act::Sigmoid, gate[3]);
      sc.c.assign(h_, 0.0);
      sc.tanh_c.assign(h_, 0.0);
      for (int j = 0; j < h_; ++j) {
        sc.c[j] = sc.f[j] * c[j] + sc.i[j] * sc.g[j];
        sc.tanh_c[j] = std::tanh(sc.c[j]);
        h[j] = sc.o[j] * sc.tanh_c[j];
      }
      c = sc.c;
    }

    const ml::Vec p_out = seg(params, off.out_lin, out_lin_.param_count());
    const ml::Vec y = out_lin_.forward(h, p_out);
    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    ml::Vec dh = out_lin_.backward(h, p_out, dy, dp + off.out_lin);
    ml::Vec dc(h_, 0.0);
    for (int t = l_ - 1; t >= 0; --t) {
      const StepCache& sc = steps[t];
      ml::Vec dgate[4];
      for (int k = 0; k < 4; ++k) dgate[k].assign(h_, 0.0);
      for (int j = 0; j < h_; ++j) {
        const double dct = dc[j] + dh[j] * sc.o[j] * (1.0 - sc.tanh_c[j] * sc.tanh_c[j]);
        const double dgo = dh[j] * sc.tanh_c[j];
        dgate[0][j] = dct * sc.c_prev[j] * sc.f[j] * (1.0 - sc.f[j]);
        dgate[1][j] = dct * sc.g[j] * sc.i[j] * (1.0 - sc.i[j]);
        dgate[2][j] = dct * sc.i[j] * (1.0 - sc.g[j] * sc.g[j]);
        dgate[3][j] = dgo * sc.o[j] * (1.0 - sc.o[j]);
        dc[j] = dct * sc.f[j];
      }

      ml::Vec du(kRegister, 0.0);
      for (int k = 0; k < 4; ++k) {
        const ml::Vec dE = head_.backward(sc.jac[k].expectations,
                                          seg(params, off.head + k * head_.param_count(), head_.param_count()),
                                          dgate[k], dp + off.head + k * head_.param_count());
        qd::add_vjp(dE, sc.jac[k].grad.d_params, kRegister, qp_, 1.0, dp + k * qp_);
        qd::add_vjp(dE, sc.jac[k].grad.d_inputs, kRegister, kRegister, 1.0, du.data());
      }
      const ml::Vec dv = in_lin_.backward(sc.v, seg(params, off.in_lin, in_lin_.param_count()), du,
                                          dp + off.in_lin);
      dh.assign(dv.begin(), dv.begin() + h_);  // remainder is d(x_t), not needed
    }
    return mse.loss;
  }

 private:
  struct Offsets {
    explicit Offsets(const LeqlstmModel& md)
        : in_lin(4 * md.qp_),
          head(in_lin + md.in_lin_.param_count()),
          out_lin(head + 4 * md.head_.param_count()) {}
    int in_lin, head, out_lin;
  };

  ml::Vec step_input(const ml::Vec& seq, const ml::Vec& h, int t) const {
    ml::Vec v(h_ + d_);
    for (int j = 0; j < h_; ++j) v[j] = h[j];
    for (int j = 0; j < d_; ++j) v[h_ + j] = seq[static_cast<std::size_t>(t) * d_ + j];
    return v;
  }

  static ml::Vec seg(const ml::Vec& params, int offset, int count) {
    return ml::Vec(params.begin() + offset, params.begin() + offset + count);
  }

  int l_, d_, m_, h_, qp_ = 0;
  qsim::GateProgram pqc_;
  ml::Linear in_lin_, head_, out_lin_;
};

}  // namespace

std::unique_ptr<Model> build_leqlstm(int seq_len, int data_dim, int layers, int hidden) {
  if (seq_len < 1 || data_dim < 1 || layers < 1 || hidden < 1)
    throw ConfigError("bad leqlstm hyperparameters");
  return std::make_unique<LeqlstmModel>(seq_len, data_dim, layers, hidden);
}

}  // namespace qts::models
