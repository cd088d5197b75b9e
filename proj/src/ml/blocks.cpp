#include "qts/ml/blocks.hpp"

#include <cmath>
#include <numbers>

#include "qts/errors.hpp"

namespace qts::ml {

double act_apply(Act kind, double x) {
  switch (kind) {
    case Act::Relu: return x > 0.0 ? x : 0.0;
    case Act::Tanh: return std::tanh(x);
    case Act::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  throw ConfigError("unknown activation");
}

namespace {

double act_deriv(Act kind, double x) {
  switch (kind) {
    case Act::Relu: return x > 0.0 ? 1.0 : 0.0;
    case Act::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Act::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
  }
  throw ConfigError("unknown activation");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Vec activate(Act kind, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = act_apply(kind, x[i]);
  return y;
}

Vec activate_backward(Act kind, const Vec& x, const Vec& dy) {
  if (x.size() != dy.size()) throw ConfigError("activation backward shape mismatch");
  Vec dx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = dy[i] * act_deriv(kind, x[i]);
  return dx;
}

Vec Linear::forward(const Vec& x, const Vec& p) const {
  if (static_cast<int>(x.size()) != in_dim) throw ConfigError("linear input size mismatch");
  if (static_cast<int>(p.size()) != param_count()) throw ConfigError("linear param size mismatch");
  Vec y(out_dim, 0.0);
  for (int o = 0; o < out_dim; ++o) {
    double acc = with_bias ? p[out_dim * in_dim + o] : 0.0;
    const double* w = p.data() + static_cast<std::size_t>(o) * in_dim;
    for (int i = 0; i < in_dim; ++i) acc += w[i] * x[i];
    y[o] = acc;
  }
  return y;
}

Vec Linear::backward(const Vec& x, const Vec& p, const Vec& dy, double* dp) const {
  if (static_cast<int>(dy.size()) != out_dim) throw ConfigError("linear upstream size mismatch");
  Vec dx(in_dim, 0.0);
  for (int o = 0; o < out_dim; ++o) {
    const double g = dy[o];
    const double* w = p.data() + static_cast<std::size_t>(o) * in_dim;
    double* dw = dp + static_cast<std::size_t>(o) * in_dim;
    for (int i = 0; i < in_dim; ++i) {
      dw[i] += g * x[i];
      dx[i] += g * w[i];
    }
    if (with_bias) dp[out_dim * in_dim + o] += g;
  }
  return dx;
}

Vec Linear::init_params(Rng& rng) const {
  Vec p(param_count(), 0.0);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (int i = 0; i < out_dim * in_dim; ++i) p[i] = rng.uniform(-bound, bound);
  return p;  // biases stay zero
}

Vec RnnCell::forward(const Vec& x, const Vec& h_prev, const Vec& p) const {
  if (static_cast<int>(x.size()) != input_dim || static_cast<int>(h_prev.size()) != hidden_dim)
    throw ConfigError("rnn cell input shape mismatch");
  if (static_cast<int>(p.size()) != param_count()) throw ConfigError("rnn cell param size mismatch");
  const int h = hidden_dim, in = input_dim;
  const double* w_ih = p.data();
  const double* b_ih = w_ih + h * in;
  const double* w_hh = b_ih + h;
  const double* b_hh = w_hh + h * h;
  Vec out(h);
  for (int o = 0; o < h; ++o) {
    double a = b_ih[o] + b_hh[o];
    for (int i = 0; i < in; ++i) a += w_ih[o * in + i] * x[i];
    for (int j = 0; j < h; ++j) a += w_hh[o * h + j] * h_prev[j];
    out[o] = std::tanh(a);
  }
  return out;
}

RnnCell::Back RnnCell::backward(const Vec& x, const Vec& h_prev, const Vec& h_t, const Vec& p,
                                const Vec& dh, double* dp) const {
  const int h = hidden_dim, in = input_dim;
  const double* w_ih = p.data();
  const double* w_hh = p.data() + h * in + h;
  double* dw_ih = dp;
  double* db_ih = dp + h * in;
  double* dw_hh = db_ih + h;
  double* db_hh = dw_hh + h * h;

  Back back{Vec(in, 0.0), Vec(h, 0.0)};
  for (int o = 0; o < h; ++o) {
    const double da = dh[o] * (1.0 - h_t[o] * h_t[o]);
    db_ih[o] += da;
    db_hh[o] += da;
    for (int i = 0; i < in; ++i) {
      dw_ih[o * in + i] += da * x[i];
      back.dx[i] += da * w_ih[o * in + i];
    }
    for (int j = 0; j < h; ++j) {
      dw_hh[o * h + j] += da * h_prev[j];
      back.dh_prev[j] += da * w_hh[o * h + j];
    }
  }
  return back;
}

Vec RnnCell::init_params(Rng& rng) const {
  const int h = hidden_dim, in = input_dim;
  Vec p(param_count(), 0.0);
  const double bi = 1.0 / std::sqrt(static_cast<double>(in));
  const double bh = 1.0 / std::sqrt(static_cast<double>(h));
  for (int i = 0; i < h * in; ++i) p[i] = rng.uniform(-bi, bi);
  double* w_hh = p.data() + h * in + h;
  for (int i = 0; i < h * h; ++i) w_hh[i] = rng.uniform(-bh, bh);
  return p;
}

void LstmCell::forward(const Vec& x, const Vec& h_prev, const Vec& c_prev, const Vec& p, Vec& h_t,
                       Vec& c_t, Cache* cache) const {
  if (static_cast<int>(x.size()) != input_dim || static_cast<int>(h_prev.size()) != hidden_dim ||
      static_cast<int>(c_prev.size()) != hidden_dim)
    throw ConfigError("lstm cell input shape mismatch");
  if (static_cast<int>(p.size()) != param_count()) throw ConfigError("lstm cell param size mismatch");
  const int h = hidden_dim, in = input_dim;
  const int per_gate = h * in + h * h + h;

  Vec a(4 * static_cast<std::size_t>(h));
  for (int g = 0; g < 4; ++g) {
    const double* w_x = p.data() + static_cast<std::size_t>(g) * per_gate;
    const double* w_h = w_x + h * in;
    const double* b = w_h + h * h;
    for (int o = 0; o < h; ++o) {
      double acc = b[o];
      for (int i = 0; i < in; ++i) acc += w_x[o * in + i] * x[i];
      for (int j = 0; j < h; ++j) acc += w_h[o * h + j] * h_prev[j];
      a[g * h + o] = acc;
    }
  }

  Vec gi(h), gf(h), gg(h), go(h), tanh_c(h);
  h_t.assign(h, 0.0);
  c_t.assign(h, 0.0);
  for (int o = 0; o < h; ++o) {
    gi[o] = sigmoid(a[0 * h + o]);
    gf[o] = sigmoid(a[1 * h + o]);
    gg[o] = std::tanh(a[2 * h + o]);
    go[o] = sigmoid(a[3 * h + o]);
    c_t[o] = gf[o] * c_prev[o] + gi[o] * gg[o];
    tanh_c[o] = std::tanh(c_t[o]);
    h_t[o] = go[o] * tanh_c[o];
  }
  if (cache) *cache = Cache{std::move(gi), std::move(gf), std::move(gg), std::move(go), c_t, std::move(tanh_c)};
}

LstmCell::Back LstmCell::backward(const Vec& x, const Vec& h_prev, const Vec& c_prev,
                                  const Cache& cache, const Vec& p, const Vec& dh, const Vec& dc,
                                  double* dp) const {
  const int h = hidden_dim, in = input_dim;
  const int per_gate = h * in + h * h + h;

  Vec da(4 * static_cast<std::size_t>(h));
  Back back{Vec(in, 0.0), Vec(h, 0.0), Vec(h, 0.0)};
  for (int o = 0; o < h; ++o) {
    const double dct = dc[o] + dh[o] * cache.o[o] * (1.0 - cache.tanh_c[o] * cache.tanh_c[o]);
    const double dgo = dh[o] * cache.tanh_c[o];
    const double dgi = dct * cache.g[o];
    const double dgf = dct * c_prev[o];
    const double dgg = dct * cache.i[o];
    back.dc_prev[o] = dct * cache.f[o];
    da[0 * h + o] = dgi * cache.i[o] * (1.0 - cache.i[o]);
    da[1 * h + o] = dgf * cache.f[o] * (1.0 - cache.f[o]);
    da[2 * h + o] = dgg * (1.0 - cache.g[o] * cache.g[o]);
    da[3 * h + o] = dgo * cache.o[o] * (1.0 - cache.o[o]);
  }
  for (int g = 0; g < 4; ++g) {
    const double* w_x = p.data() + static_cast<std::size_t>(g) * per_gate;
    const double* w_h = w_x + h * in;
    double* dw_x = dp + static_cast<std::size_t>(g) * per_gate;
    double* dw_h = dw_x + h * in;
    double* db = dw_h + h * h;
    for (int o = 0; o < h; ++o) {
      const double d = da[g * h + o];
      db[o] += d;
      for (int i = 0; i < in; ++i) {
        dw_x[o * in + i] += d * x[i];
        back.dx[i] += d * w_x[o * in + i];
      }
      for (int j = 0; j < h; ++j) {
        dw_h[o * h + j] += d * h_prev[j];
        back.dh_prev[j] += d * w_h[o * h + j];
      }
    }
  }
  return back;
}

Vec LstmCell::init_params(Rng& rng) const {
  const int h = hidden_dim, in = input_dim;
  const int per_gate = h * in + h * h + h;
  Vec p(param_count(), 0.0);
  const double bi = 1.0 / std::sqrt(static_cast<double>(in));
  const double bh = 1.0 / std::sqrt(static_cast<double>(h));
  for (int g = 0; g < 4; ++g) {
    double* w_x = p.data() + static_cast<std::size_t>(g) * per_gate;
    double* w_h = w_x + h * in;
    for (int i = 0; i < h * in; ++i) w_x[i] = rng.uniform(-bi, bi);
    for (int i = 0; i < h * h; ++i) w_h[i] = rng.uniform(-bh, bh);
  }
  return p;
}

MseResult mse_loss(const Vec& pred, const Vec& target) {
  if (pred.size() != target.size() || pred.empty()) throw ConfigError("mse shape mismatch");
  MseResult r;
  r.grad.resize(pred.size());
  const double inv = 1.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.loss += d * d * inv;
    r.grad[i] = 2.0 * d * inv;
  }
  return r;
}

Vec init_quantum_params(int count, Rng& rng) {
  Vec p(count);
  for (double& v : p) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

}  // namespace qts::ml
