#include <memory>

#include "qts/errors.hpp"
#include "qts/ml/blocks.hpp"
#include "qts/models/builders.hpp"

namespace qts::models {

namespace {

ml::Vec seg(const ml::Vec& params, int offset, int count) {
  return ml::Vec(params.begin() + offset, params.begin() + offset + count);
}

// Fully connected net on the flattened window: (l*d) -> hidden x layers with
// ReLU between, then a linear readout to d.
class MlpModel final : public Model {
 public:
  MlpModel(int seq_len, int data_dim, int layers, int hidden) : d_(data_dim) {
    int in = seq_len * data_dim;
    for (int j = 0; j < layers; ++j) {
      lins_.push_back({in, hidden, true});
      in = hidden;
    }
    out_lin_ = {in, d_, true};
  }

  ParamCounts param_counts() const override {
    int c = out_lin_.param_count();
    for (const auto& lin : lins_) c += lin.param_count();
    return {c, 0};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p;
    for (const auto& lin : lins_) {
      const ml::Vec v = lin.init_params(rng);
      p.insert(p.end(), v.begin(), v.end());
    }
    const ml::Vec v = out_lin_.init_params(rng);
    p.insert(p.end(), v.begin(), v.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    ml::Vec a = seq;
    int off = 0;
    for (const auto& lin : lins_) {
      a = ml::activate(ml::Act::Relu, lin.forward(a, seg(params, off, lin.param_count())));
      off += lin.param_count();
    }
    return out_lin_.forward(a, seg(params, off, out_lin_.param_count()));
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const int n_layers = static_cast<int>(lins_.size());
    std::vector<ml::Vec> xs(n_layers + 1), zs(n_layers);
    std::vector<int> offs(n_layers + 1);
    xs[0] = seq;
    int off = 0;
    for (int j = 0; j < n_layers; ++j) {
      offs[j] = off;
      zs[j] = lins_[j].forward(xs[j], seg(params, off, lins_[j].param_count()));
      xs[j + 1] = ml::activate(ml::Act::Relu, zs[j]);
      off += lins_[j].param_count();
    }
    offs[n_layers] = off;

    const ml::Vec p_out = seg(params, off, out_lin_.param_count());
    const ml::Vec y = out_lin_.forward(xs[n_layers], p_out);
    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    ml::Vec da = out_lin_.backward(xs[n_layers], p_out, dy, dp + off);
    for (int j = n_layers - 1; j >= 0; --j) {
      const ml::Vec dz = ml::activate_backward(ml::Act::Relu, zs[j], da);
      da = lins_[j].backward(xs[j], seg(params, offs[j], lins_[j].param_count()), dz, dp + offs[j]);
    }
    return mse.loss;
  }

 private:
  int d_;
  std::vector<ml::Linear> lins_;
  ml::Linear out_lin_;
};

// Stacked vanilla RNN; layer j at step t consumes layer j-1's output at the
// same step. Readout is a linear map from the top hidden state at the final
// step.
class RnnModel final : public Model {
 public:
  RnnModel(int seq_len, int data_dim, int layers, int hidden)
      : l_(seq_len), d_(data_dim), h_(hidden) {
    int in = data_dim;
    for (int j = 0; j < layers; ++j) {
      cells_.push_back({in, hidden});
      in = hidden;
    }
    head_ = {hidden, data_dim, true};
  }

  ParamCounts param_counts() const override {
    int c = head_.param_count();
    for (const auto& cell : cells_) c += cell.param_count();
    return {c, 0};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p;
    for (const auto& cell : cells_) {
      const ml::Vec v = cell.init_params(rng);
      p.insert(p.end(), v.begin(), v.end());
    }
    const ml::Vec v = head_.init_params(rng);
    p.insert(p.end(), v.begin(), v.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    const int n_layers = static_cast<int>(cells_.size());
    std::vector<ml::Vec> h(n_layers, ml::Vec(h_, 0.0));
    int head_off = 0;
    for (const auto& cell : cells_) head_off += cell.param_count();
    for (int t = 0; t < l_; ++t) {
      ml::Vec x(seq.begin() + static_cast<std::size_t>(t) * d_,
                seq.begin() + static_cast<std::size_t>(t + 1) * d_);
      int off = 0;
      for (int j = 0; j < n_layers; ++j) {
        h[j] = cells_[j].forward(x, h[j], seg(params, off, cells_[j].param_count()));
        x = h[j];
        off += cells_[j].param_count();
      }
    }
    return head_.forward(h[n_layers - 1], seg(params, head_off, head_.param_count()));
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const int n_layers = static_cast<int>(cells_.size());
    std::vector<int> offs(n_layers);
    int off = 0;
    for (int j = 0; j < n_layers; ++j) {
      offs[j] = off;
      off += cells_[j].param_count();
    }
    const int head_off = off;

    // H[j][t] = output of layer j at step t; X[j][t] = its input.
    std::vector<std::vector<ml::Vec>> H(n_layers, std::vector<ml::Vec>(l_));
    std::vector<std::vector<ml::Vec>> X(n_layers, std::vector<ml::Vec>(l_));
    const ml::Vec h0(h_, 0.0);
    for (int t = 0; t < l_; ++t) {
      ml::Vec x(seq.begin() + static_cast<std::size_t>(t) * d_,
                seq.begin() + static_cast<std::size_t>(t + 1) * d_);
      for (int j = 0; j < n_layers; ++j) {
        X[j][t] = x;
        const ml::Vec& h_prev = t > 0 ? H[j][t - 1] : h0;
        H[j][t] = cells_[j].forward(x, h_prev, seg(params, offs[j], cells_[j].param_count()));
        x = H[j][t];
      }
    }

    const ml::Vec p_head = seg(params, head_off, head_.param_count());
    const ml::Vec y = head_.forward(H[n_layers - 1][l_ - 1], p_head);
    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    std::vector<ml::Vec> dh_next(n_layers, ml::Vec(h_, 0.0));  // from step t+1
    ml::Vec dtop = head_.backward(H[n_layers - 1][l_ - 1], p_head, dy, dp + head_off);
    for (int t = l_ - 1; t >= 0; --t) {
      ml::Vec from_above = t == l_ - 1 ? dtop : ml::Vec(h_, 0.0);
      for (int j = n_layers - 1; j >= 0; --j) {
        ml::Vec dh = dh_next[j];
        for (int q = 0; q < h_; ++q) dh[q] += from_above[q];
        const ml::Vec& h_prev = t > 0 ? H[j][t - 1] : h0;
        auto bk = cells_[j].backward(X[j][t], h_prev, H[j][t],
                                     seg(params, offs[j], cells_[j].param_count()), dh,
                                     dp + offs[j]);
        dh_next[j] = bk.dh_prev;
        from_above = bk.dx;
      }
    }
    return mse.loss;
  }

 private:
  int l_, d_, h_;
  std::vector<ml::RnnCell> cells_;
  ml::Linear head_;
};

// Stacked LSTM with the same wiring as RnnModel.
class LstmModel final : public Model {
 public:
  LstmModel(int seq_len, int data_dim, int layers, int hidden)
      : l_(seq_len), d_(data_dim), h_(hidden) {
    int in = data_dim;
    for (int j = 0; j < layers; ++j) {
      cells_.push_back({in, hidden});
      in = hidden;
    }
    head_ = {hidden, data_dim, true};
  }

  ParamCounts param_counts() const override {
    int c = head_.param_count();
    for (const auto& cell : cells_) c += cell.param_count();
    return {c, 0};
  }

  ml::Vec init_params(Rng& rng) const override {
    ml::Vec p;
    for (const auto& cell : cells_) {
      const ml::Vec v = cell.init_params(rng);
      p.insert(p.end(), v.begin(), v.end());
    }
    const ml::Vec v = head_.init_params(rng);
    p.insert(p.end(), v.begin(), v.end());
    return p;
  }

  ml::Vec forward(const ml::Vec& seq, const ml::Vec& params) const override {
    const int n_layers = static_cast<int>(cells_.size());
    std::vector<ml::Vec> h(n_layers, ml::Vec(h_, 0.0)), c(n_layers, ml::Vec(h_, 0.0));
    int head_off = 0;
    for (const auto& cell : cells_) head_off += cell.param_count();
    for (int t = 0; t < l_; ++t) {
      ml::Vec x(seq.begin() + static_cast<std::size_t>(t) * d_,
                seq.begin() + static_cast<std::size_t>(t + 1) * d_);
      int off = 0;
      for (int j = 0; j < n_layers; ++j) {
        ml::Vec h_t, c_t;
        cells_[j].forward(x, h[j], c[j], seg(params, off, cells_[j].param_count()), h_t, c_t);
        h[j] = h_t;
        c[j] = c_t;
        x = h[j];
        off += cells_[j].param_count();
      }
    }
    return head_.forward(h[n_layers - 1], seg(params, head_off, head_.param_count()));
  }

  double forward_backward(const ml::Vec& seq, const ml::Vec& target, const ml::Vec& params,
                          double grad_scale, double* dp) const override {
    const int n_layers = static_cast<int>(cells_.size());
    std::vector<int> offs(n_layers);
    int off = 0;
    for (int j = 0; j < n_layers; ++j) {
      offs[j] = off;
      off += cells_[j].param_count();
    }
    const int head_off = off;

    std::vector<std::vector<ml::Vec>> H(n_layers, std::vector<ml::Vec>(l_));
    std::vector<std::vector<ml::Vec>> C(n_layers, std::vector<ml::Vec>(l_));
    std::vector<std::vector<ml::Vec>> X(n_layers, std::vector<ml::Vec>(l_));
    std::vector<std::vector<ml::LstmCell::Cache>> caches(n_layers,
                                                         std::vector<ml::LstmCell::Cache>(l_));
    const ml::Vec zero(h_, 0.0);
    for (int t = 0; t < l_; ++t) {
      ml::Vec x(seq.begin() + static_cast<std::size_t>(t) * d_,
                seq.begin() + static_cast<std::size_t>(t + 1) * d_);
      for (int j = 0; j < n_layers; ++j) {
        X[j][t] = x;
        const ml::Vec& h_prev = t > 0 ? H[j][t - 1] : zero;
        const ml::Vec& c_prev = t > 0 ? C[j][t - 1] : zero;
        cells_[j].forward(x, h_prev, c_prev, seg(params, offs[j], cells_[j].param_count()),
                          H[j][t], C[j][t], &caches[j][t]);
        x = H[j][t];
      }
    }

    const ml::Vec p_head = seg(params, head_off, head_.param_count());
    const ml::Vec y = head_.forward(H[n_layers - 1][l_ - 1], p_head);
    const auto mse = ml::mse_loss(y, target);
    ml::Vec dy(mse.grad);
    for (double& v : dy) v *= grad_scale;

    std::vector<ml::Vec> dh_next(n_layers, ml::Vec(h_, 0.0));
    std::vector<ml::Vec> dc_next(n_layers, ml::Vec(h_, 0.0));
    ml::Vec dtop = head_.backward(H[n_layers - 1][l_ - 1], p_head, dy, dp + head_off);
    for (int t = l_ - 1; t >= 0; --t) {
      ml::Vec from_above = t == l_ - 1 ? dtop : ml::Vec(h_, 0.0);
      for (int j = n_layers - 1; j >= 0; --j) {
        ml::Vec dh = dh_next[j];
        for (int q = 0; q < h_; ++q) dh[q] += from_above[q];
        const ml::Vec& h_prev = t > 0 ? H[j][t - 1] : zero;
        const ml::Vec& c_prev = t > 0 ? C[j][t - 1] : zero;
        auto bk = cells_[j].backward(X[j][t], h_prev, c_prev, caches[j][t],
                                     seg(params, offs[j], cells_[j].param_count()), dh,
                                     dc_next[j], dp + offs[j]);
        dh_next[j] = bk.dh_prev;
        dc_next[j] = bk.dc_prev;
        from_above = bk.dx;
      }
    }
    return mse.loss;
  }

 private:
  int l_, d_, h_;
  std::vector<ml::LstmCell> cells_;
  ml::Linear head_;
};

}  // namespace

std::unique_ptr<Model> build_mlp(int seq_len, int data_dim, int layers, int hidden) {
  if (seq_len < 1 || data_dim < 1 || layers < 1 || hidden < 1)
    throw ConfigError("bad mlp hyperparameters");
  return std::make_unique<MlpModel>(seq_len, data_dim, layers, hidden);
}

std::unique_ptr<Model> build_rnn(int seq_len, int data_dim, int layers, int hidden) {
  if (seq_len < 1 || data_dim < 1 || layers < 1 || hidden < 1)
    throw ConfigError("bad rnn hyperparameters");
  return std::make_unique<RnnModel>(seq_len, data_dim, layers, hidden);
}

std::unique_ptr<Model> build_lstm(int seq_len, int data_dim, int layers, int hidden) {
  if (seq_len < 1 || data_dim < 1 || layers < 1 || hidden < 1)
    throw ConfigError("bad lstm hyperparameters");
  return std::make_unique<LstmModel>(seq_len, data_dim, layers, hidden);
}

}  // namespace qts::models
