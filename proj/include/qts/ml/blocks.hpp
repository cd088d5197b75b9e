#pragma once

#include <vector>

#include "qts/rng.hpp"

namespace qts::ml {

using Vec = std::vector<double>;

enum class Act { Relu, Tanh, Sigmoid };

double act_apply(Act kind, double x);
Vec activate(Act kind, const Vec& x);
// dx given pre-activation x and upstream dy
Vec activate_backward(Act kind, const Vec& x, const Vec& dy);

// y = W x + b. Params flattened as [W row-major (out_dim x in_dim), b].
struct Linear {
  int in_dim = 0;
  int out_dim = 0;
  bool with_bias = true;

  int param_count() const { return out_dim * in_dim + (with_bias ? out_dim : 0); }
  Vec forward(const Vec& x, const Vec& p) const;
  // Accumulates into dp (length param_count), returns dL/dx.
  Vec backward(const Vec& x, const Vec& p, const Vec& dy, double* dp) const;
  Vec init_params(Rng& rng) const;  // W ~ U[-1/sqrt(in_dim), +], b = 0
};

// h_t = tanh(W_ih x + b_ih + W_hh h_prev + b_hh).
// Params: [W_ih (h x in), b_ih, W_hh (h x h), b_hh].
struct RnnCell {
  int input_dim = 0;
  int hidden_dim = 0;

  int param_count() const { return hidden_dim * (input_dim + hidden_dim) + 2 * hidden_dim; }
  Vec forward(const Vec& x, const Vec& h_prev, const Vec& p) const;
  struct Back {
    Vec dx, dh_prev;
  };
  // h_t is the cached forward output (post-tanh).
  Back backward(const Vec& x, const Vec& h_prev, const Vec& h_t, const Vec& p, const Vec& dh,
                double* dp) const;
  Vec init_params(Rng& rng) const;
};

// Standard 4-gate LSTM, one bias set per gate.
// Params per gate in order (i, f, g, o): [W_x (h x in), W_h (h x h), b].
struct LstmCell {
  int input_dim = 0;
  int hidden_dim = 0;

  int param_count() const { return 4 * (hidden_dim * (input_dim + hidden_dim) + hidden_dim); }

  struct Cache {
    Vec i, f, g, o, c_t, tanh_c;
  };
  void forward(const Vec& x, const Vec& h_prev, const Vec& c_prev, const Vec& p, Vec& h_t, Vec& c_t,
               Cache* cache = nullptr) const;
  struct Back {
    Vec dx, dh_prev, dc_prev;
  };
  Back backward(const Vec& x, const Vec& h_prev, const Vec& c_prev, const Cache& cache, const Vec& p,
                const Vec& dh, const Vec& dc, double* dp) const;
  Vec init_params(Rng& rng) const;
};

// loss = mean((pred - target)^2) over all entries; grad = 2 (pred - target) / count.
struct MseResult {
  double loss = 0.0;
  Vec grad;
};
MseResult mse_loss(const Vec& pred, const Vec& target);

Vec init_quantum_params(int count, Rng& rng);  // U[0, 2*pi]

}  // namespace qts::ml
