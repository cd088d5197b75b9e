#pragma once

#include <memory>
#include <vector>

#include "qts/models/ansatz.hpp"
#include "qts/models/model.hpp"

namespace qts::models {

std::unique_ptr<Model> build_dqnn(int seq_len, int data_dim, int n_qubits, int layers);
std::unique_ptr<Model> build_ruqnn(int seq_len, int data_dim, int n_qubits,
                                   const AnsatzDescriptor& ansatz);
std::unique_ptr<Model> build_qrnn(int seq_len, int data_dim, int data_qubits, int hidden_qubits,
                                  bool reset);
std::unique_ptr<Model> build_qlstm(int seq_len, int data_dim, int n_qubits, int layers);
std::unique_ptr<Model> build_leqlstm(int seq_len, int data_dim, int layers, int hidden);
std::unique_ptr<Model> build_mlp(int seq_len, int data_dim, int layers, int hidden);
std::unique_ptr<Model> build_rnn(int seq_len, int data_dim, int layers, int hidden);
std::unique_ptr<Model> build_lstm(int seq_len, int data_dim, int layers, int hidden);

// Dispatches on spec.kind; benchmark mode additionally enforces the published
// hyperparameter grids (ConfigError off-grid).
std::unique_ptr<Model> build_model(const ModelSpec& spec, bool benchmark_mode = true);

// Ordered hyperparameter axes of each kind's benchmark grid (ruqnn: just the
// qubit axis; its circuit comes from the ansatz search, not a fixed grid).
std::vector<std::pair<std::string, std::vector<int>>> grid_axes(ModelKind kind);

// Cartesian product of the axes in lexicographic order, with kind-specific
// fixups (qlstm drops qubits <= data_dim, qrnn pins reset = 0).
std::vector<ModelSpec> specs_from_axes(
    ModelKind kind, int seq_len, int data_dim,
    const std::vector<std::pair<std::string, std::vector<int>>>& axes);

// Every default grid point for one model kind on a given task shape. ruqnn is
// excluded (ConfigError).
std::vector<ModelSpec> grid_specs(ModelKind kind, int seq_len, int data_dim);

}  // namespace qts::models
