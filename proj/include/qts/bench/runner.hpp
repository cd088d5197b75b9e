#pragma once

#include <string>
#include <vector>

#include "qts/bench/config.hpp"
#include "qts/bench/records.hpp"
#include "qts/data/generators.hpp"

namespace qts::bench {

data::TimeSeries generate_dataset(const std::string& name, int n_points);  // raw, unscaled

struct RunSummary {
  std::size_t units_trained = 0;         // executed in this invocation
  std::size_t units_reused = 0;          // found completed in the store
  std::vector<std::string> failures;     // per-(task, model) hard errors, batch continued
};

// Runs grid searches (ansatz search for ruqnn) for every (dataset, l, k, model)
// the config selects, persisting each (grid-point, seed) unit through `store`.
// Completed units are never recomputed.
RunSummary run_benchmark(const BenchmarkConfig& cfg, JsonlRunStore& store);

}  // namespace qts::bench
