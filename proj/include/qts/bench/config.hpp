#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qts/models/model.hpp"

namespace qts::bench {

// Parsed benchmark configuration; defaults reproduce the full 27-task matrix
// (3 datasets x 3 sequence lengths x 3 prediction steps) over all 8 models.
struct BenchmarkConfig {
  std::vector<std::string> datasets = {"mackey", "henon", "lorenz"};
  std::vector<int> seq_lens = {4, 8, 16};
  std::map<std::string, std::vector<int>> pred_steps = {
      {"mackey", {1, 70, 140}}, {"henon", {1, 2, 4}}, {"lorenz", {1, 13, 25}}};
  std::vector<models::ModelKind> kinds = {
      models::ModelKind::Dqnn, models::ModelKind::Ruqnn,   models::ModelKind::Qrnn,
      models::ModelKind::Qlstm, models::ModelKind::Leqlstm, models::ModelKind::Mlp,
      models::ModelKind::Rnn,  models::ModelKind::Lstm};
  // Per-kind axis restrictions; absent kinds use the full default grid.
  std::map<models::ModelKind, std::map<std::string, std::vector<int>>> grid_overrides;
  bool allow_off_grid = false;

  int n_points = 1000;
  int epoch_cap = 10000;
  double learning_rate = 0.001;
  int batch_size = 64;
  int jobs = 1;
  int search_circuits = 100;
  std::uint64_t search_seed = 0;
  std::string out_dir = "results";
};

// Key-value text format; see README for the full grammar. ConfigError with a
// line reference on unknown keys or off-grid overrides without allow_off_grid.
BenchmarkConfig parse_config(const std::string& text);
BenchmarkConfig load_config(const std::string& path);  // ConfigError if unreadable

}  // namespace qts::bench
