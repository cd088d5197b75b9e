#pragma once

#include <map>
#include <memory>
#include <string>

#include "qts/ml/blocks.hpp"
#include "qts/rng.hpp"

namespace qts::models {

enum class ModelKind { Dqnn, Ruqnn, Qrnn, Qlstm, Leqlstm, Mlp, Rnn, Lstm };

const char* kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);  // ConfigError on unknown

struct ModelSpec {
  ModelKind kind = ModelKind::Mlp;
  int seq_len = 0;
  int data_dim = 0;
  std::map<std::string, int> hyper;  // kind-specific: qubits, layers, hidden, data_qubits, ...
  std::string ansatz;                // ruqnn only: serialized ansatz

  int hp(const std::string& key) const;  // ConfigError if missing
  std::string id() const;                // stable short identifier for records/paths
};

struct ParamCounts {
  int classical = 0;
  int quantum = 0;
  int total() const { return classical + quantum; }
};

// A built model: pure description + pure functions over an externally owned
// flat parameter vector (layout fixed per model, init order == layout order).
class Model {
 public:
  virtual ~Model() = default;

  virtual ParamCounts param_counts() const = 0;
  virtual ml::Vec init_params(Rng& rng) const = 0;

  // sequence: flattened seq_len x data_dim, time-major; returns data_dim outputs
  virtual ml::Vec forward(const ml::Vec& sequence, const ml::Vec& params) const = 0;

  // Per-tuple MSE (mean over data_dim) plus gradient accumulation:
  // dp += grad_scale * d(per-tuple MSE)/d(params). dp has param_counts().total() slots.
  virtual double forward_backward(const ml::Vec& sequence, const ml::Vec& target,
                                  const ml::Vec& params, double grad_scale, double* dp) const = 0;
};

}  // namespace qts::models
