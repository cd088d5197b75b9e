#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qts/data/windows.hpp"
#include "qts/models/builders.hpp"

namespace qts::train {

struct TrainOptions {
  double learning_rate = 0.001;
  int batch_size = 64;
  int epoch_cap = 10000;
  int jobs = 1;                // unit-level parallelism for the search drivers
  bool benchmark_mode = true;  // enforce the published grids when building models
};

// One (model spec, seed) training unit, the atomic persisted object.
struct RunRecord {
  models::ModelSpec spec;
  std::string dataset_id;
  int k = 0;
  std::string phase = "grid";  // grid | search1 | search2
  std::uint64_t seed = 0;

  int epochs_run = 0;
  bool hit_epoch_cap = false;
  bool failed = false;  // non-finite loss or gradient; MSEs are then meaningless
  std::string note;

  double train_mse = 0.0, val_mse = 0.0, test_mse = 0.0;
  std::vector<double> val_history;  // one entry per epoch
  int classical_params = 0, quantum_params = 0;
  double wall_seconds = 0.0;

  int l() const { return spec.seq_len; }
};

// Ten-seed replication of one spec on one task.
struct AggregateRecord {
  models::ModelSpec spec;
  std::string dataset_id;
  int k = 0;
  double median_val_mse = 0.0;
  double median_test_mse = 0.0;
  double mad_test_mse = 0.0;
  int total_params = 0;
  int n_failed = 0;
  std::vector<RunRecord> runs;
};

// Persistence hook: lets the orchestrator skip completed units on resume.
// Keys are stable strings; see unit_key().
class RunStore {
 public:
  virtual ~RunStore() = default;
  virtual bool lookup(const std::string& key, RunRecord* rec) = 0;
  virtual void store(const std::string& key, const RunRecord& rec) = 0;
};

std::string unit_key(const std::string& phase, const std::string& dataset_id, int l, int k,
                     const models::ModelSpec& spec, std::uint64_t seed);

// True iff, over the last 400 entries, the means of the two 200-halves differ
// by at most sigma2 / (2 sqrt(200)); false with fewer than 400 entries.
bool converged(const std::vector<double>& val_losses);

double median(std::vector<double> values);                 // ConfigError on empty
double median_abs_deviation(std::vector<double> values);   // ConfigError on empty

// Evaluate mean per-tuple MSE over tuple range [begin, end).
double evaluate_mse(const models::Model& model, const data::WindowedDataset& ds,
                    const ml::Vec& params, std::size_t begin, std::size_t end);

RunRecord train(const models::ModelSpec& spec, const data::WindowedDataset& ds,
                const std::string& dataset_id, std::uint64_t seed, const TrainOptions& opts = {});

AggregateRecord aggregate(std::vector<RunRecord> runs);

// Seeds 0..9 (skipping units already in `store`), then aggregate.
AggregateRecord run_seeds(const models::ModelSpec& spec, const data::WindowedDataset& ds,
                          const std::string& dataset_id, const TrainOptions& opts = {},
                          RunStore* store = nullptr, const std::string& phase = "grid");

// True iff a beats b: lower median val MSE, ties by fewer total params;
// remaining ties keep the earlier candidate (callers enumerate grids in
// lexicographic order).
bool better_aggregate(const AggregateRecord& a, const AggregateRecord& b);

struct GridSearchResult {
  std::vector<AggregateRecord> all;  // grid order
  int best = -1;
};

GridSearchResult grid_search(const std::vector<models::ModelSpec>& specs,
                             const data::WindowedDataset& ds, const std::string& dataset_id,
                             const TrainOptions& opts = {}, RunStore* store = nullptr);

GridSearchResult grid_search(models::ModelKind kind, const data::WindowedDataset& ds,
                             const std::string& dataset_id, const TrainOptions& opts = {},
                             RunStore* store = nullptr);

struct AnsatzSearchResult {
  std::vector<RunRecord> stage1;          // n_circuits x {4,6,8} qubit counts, seed 0
  std::vector<AggregateRecord> stage2;    // ten best stage-1 candidates x ten seeds
  int winner = -1;                        // index into stage2
};

AnsatzSearchResult ansatz_search(const data::WindowedDataset& ds, const std::string& dataset_id,
                                 std::uint64_t search_seed = 0, int n_circuits = 100,
                                 const TrainOptions& opts = {}, RunStore* store = nullptr);

}  // namespace qts::train
