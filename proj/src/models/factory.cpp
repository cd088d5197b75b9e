#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>

#include "qts/errors.hpp"
#include "qts/models/builders.hpp"

namespace qts::models {

namespace {

constexpr std::array<const char*, 8> kKindNames = {"dqnn", "ruqnn",   "qrnn", "qlstm",
                                                   "leqlstm", "mlp", "rnn",  "lstm"};

bool one_of(int v, std::initializer_list<int> allowed) {
  return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("hyperparameter off the benchmark grid: " + what);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const char* kind_name(ModelKind kind) { return kKindNames[static_cast<int>(kind)]; }

ModelKind kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (name == kKindNames[i]) return static_cast<ModelKind>(i);
  throw ConfigError("unknown model kind: " + name);
}

int ModelSpec::hp(const std::string& key) const {
  const auto it = hyper.find(key);
  if (it == hyper.end())
    throw ConfigError(std::string(kind_name(kind)) + " spec missing hyperparameter: " + key);
  return it->second;
}

std::string ModelSpec::id() const {
  std::ostringstream os;
  os << kind_name(kind);
  for (const auto& [key, value] : hyper) os << '-' << key << value;
  if (!ansatz.empty()) {
    os << '-' << std::hex << (fnv1a(ansatz) & 0xffffffffull);
  }
  return os.str();
}

std::unique_ptr<Model> build_model(const ModelSpec& spec, bool benchmark_mode) {
  const int l = spec.seq_len;
  const int d = spec.data_dim;
  switch (spec.kind) {
    case ModelKind::Dqnn: {
      const int n = spec.hp("qubits"), m = spec.hp("layers");
      if (benchmark_mode) {
        require(one_of(n, {4, 6, 8}), "dqnn qubits");
        require(one_of(m, {1, 2, 3}), "dqnn layers");
      }
      return build_dqnn(l, d, n, m);
    }
    case ModelKind::Ruqnn: {
      const int n = spec.hp("qubits");
      if (benchmark_mode) require(one_of(n, {4, 6, 8}), "ruqnn qubits");
      if (spec.ansatz.empty()) throw ConfigError("ruqnn spec missing ansatz");
      return build_ruqnn(l, d, n, AnsatzDescriptor::parse(spec.ansatz));
    }
    case ModelKind::Qrnn: {
      const int dq = spec.hp("data_qubits"), hq = spec.hp("hidden_qubits");
      const bool reset = spec.hyper.count("reset") != 0 && spec.hp("reset") != 0;
      if (benchmark_mode) {
        if (reset) {
          require(dq == 2 && hq == 2, "qrnn reset register sizes");
        } else {
          require(one_of(dq, {2, 3, 4}), "qrnn data_qubits");
          require(one_of(hq, {2, 3, 4}), "qrnn hidden_qubits");
        }
      }
      return build_qrnn(l, d, dq, hq, reset);
    }
    case ModelKind::Qlstm: {
      const int n = spec.hp("qubits"), m = spec.hp("layers");
      if (benchmark_mode) {
        require(one_of(n, {4, 6}), "qlstm qubits");
        require(one_of(m, {1, 2, 3}), "qlstm layers");
      }
      return build_qlstm(l, d, n, m);
    }
    case ModelKind::Leqlstm: {
      const int m = spec.hp("layers"), h = spec.hp("hidden");
      if (benchmark_mode) {
        require(one_of(m, {1, 2, 3}), "leqlstm layers");
        require(one_of(h, {8, 16, 32}), "leqlstm hidden");
      }
      return build_leqlstm(l, d, m, h);
    }
    case ModelKind::Mlp:
    case ModelKind::Rnn:
    case ModelKind::Lstm: {
      const int m = spec.hp("layers"), h = spec.hp("hidden");
      if (benchmark_mode) {
        require(one_of(m, {1, 2, 3}), "layers");
        require(one_of(h, {8, 16, 32}), "hidden");
      }
      if (spec.kind == ModelKind::Mlp) return build_mlp(l, d, m, h);
      if (spec.kind == ModelKind::Rnn) return build_rnn(l, d, m, h);
      return build_lstm(l, d, m, h);
    }
  }
  throw ConfigError("unknown model kind");
}

std::vector<std::pair<std::string, std::vector<int>>> grid_axes(ModelKind kind) {
  switch (kind) {
    case ModelKind::Dqnn:
      return {{"qubits", {4, 6, 8}}, {"layers", {1, 2, 3}}};
    case ModelKind::Ruqnn:
      return {{"qubits", {4, 6, 8}}};
    case ModelKind::Qrnn:
      return {{"data_qubits", {2, 3, 4}}, {"hidden_qubits", {2, 3, 4}}};
    case ModelKind::Qlstm:
      return {{"qubits", {4, 6}}, {"layers", {1, 2, 3}}};
    case ModelKind::Leqlstm:
    case ModelKind::Mlp:
    case ModelKind::Rnn:
    case ModelKind::Lstm:
      return {{"layers", {1, 2, 3}}, {"hidden", {8, 16, 32}}};
  }
  throw ConfigError("unknown model kind");
}

std::vector<ModelSpec> specs_from_axes(
    ModelKind kind, int seq_len, int data_dim,
    const std::vector<std::pair<std::string, std::vector<int>>>& axes) {
  if (axes.empty()) throw ConfigError("empty hyperparameter grid");
  for (const auto& [name, values] : axes)
    if (values.empty()) throw ConfigError("empty grid axis: " + name);

  std::vector<ModelSpec> out;
  std::vector<std::size_t> pos(axes.size(), 0);
  for (;;) {
    ModelSpec spec;
    spec.kind = kind;
    spec.seq_len = seq_len;
    spec.data_dim = data_dim;
    for (std::size_t a = 0; a < axes.size(); ++a) spec.hyper[axes[a].first] = axes[a].second[pos[a]];
    if (kind == ModelKind::Qrnn) spec.hyper.emplace("reset", 0);
    const bool skip = kind == ModelKind::Qlstm && spec.hp("qubits") <= data_dim;
    if (!skip) out.push_back(std::move(spec));

    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++pos[a] < axes[a].second.size()) break;
      pos[a] = 0;
      if (a == 0) return out;
    }
  }
}

std::vector<ModelSpec> grid_specs(ModelKind kind, int seq_len, int data_dim) {
  if (kind == ModelKind::Ruqnn)
    throw ConfigError("ruqnn has no fixed grid; its circuit comes from the ansatz search");
  return specs_from_axes(kind, seq_len, data_dim, grid_axes(kind));
}

}  // namespace qts::models
