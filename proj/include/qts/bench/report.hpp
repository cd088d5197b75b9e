#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qts/train/trainer.hpp"

namespace qts::bench {

std::string format_double(double v);  // shortest decimal that round-trips

// Group completed records into per-spec aggregates, excluding stage-1 search
// candidates (their single-seed scores would distort model selection).
// Deterministically ordered by (dataset, l, k, model, spec id).
std::vector<train::AggregateRecord> aggregate_records(
    const std::vector<train::RunRecord>& records);

// Per (task, model kind) winner by median validation MSE (ties: fewer params,
// then spec-id order). Returns indices into `aggregates` ordered like it.
std::vector<std::size_t> select_winners(const std::vector<train::AggregateRecord>& aggregates);

struct RankingTable {
  struct Entry {
    std::string model;
    double best_median_test_mse = 0.0;
    int rank = 0;  // ties share the lower rank value
  };
  struct Task {
    std::string dataset;
    int l = 0, k = 0;
    std::vector<Entry> entries;  // ordered by rank, then model name
  };
  struct Average {
    std::string model;
    int n_tasks = 0;
    double average_rank = 0.0;
  };
  std::vector<Task> tasks;        // ordered by (dataset, l, k)
  std::vector<Average> averages;  // ordered by average rank, then model name
};

RankingTable rank_models(const std::vector<train::AggregateRecord>& aggregates);
RankingTable rank_models(const std::vector<train::RunRecord>& records);

// kind: mse_by_task | mse_vs_seqlen | mse_vs_params | ranking. Writes
// deterministic CSVs under out_dir (plus warnings_<kind>.txt when slices are
// missing); returns the paths written.
std::vector<std::filesystem::path> export_report(const std::vector<train::RunRecord>& records,
                                                 const std::string& kind,
                                                 const std::filesystem::path& out_dir);

}  // namespace qts::bench
