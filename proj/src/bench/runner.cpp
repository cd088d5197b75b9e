#include "qts/bench/runner.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "qts/bench/report.hpp"
#include "qts/data/windows.hpp"
#include "qts/errors.hpp"
#include "qts/models/builders.hpp"

namespace qts::bench {

namespace {

std::vector<models::ModelSpec> grid_for(const BenchmarkConfig& cfg, models::ModelKind kind, int l,
                                        int d) {
  auto axes = models::grid_axes(kind);
  const auto ov = cfg.grid_overrides.find(kind);
  if (ov != cfg.grid_overrides.end()) {
    for (auto& [name, values] : axes) {
      const auto it = ov->second.find(name);
      if (it != ov->second.end()) values = it->second;
    }
  }
  return models::specs_from_axes(kind, l, d, axes);
}

void write_search_summary(const JsonlRunStore& store, const std::string& dataset, int l, int k,
                          const train::AnsatzSearchResult& res) {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["l"] = l;
  j["k"] = k;
  j["stage1_runs"] = res.stage1.size();
  j["winner_ansatz"] = res.stage2[res.winner].spec.ansatz;
  j["winner_qubits"] = res.stage2[res.winner].spec.hp("qubits");
  j["winner_median_val_mse"] = res.stage2[res.winner].median_val_mse;
  j["winner_median_test_mse"] = res.stage2[res.winner].median_test_mse;
  auto& finalists = j["finalists"] = nlohmann::json::array();
  for (const auto& agg : res.stage2) {
    finalists.push_back({{"ansatz", agg.spec.ansatz},
                         {"qubits", agg.spec.hp("qubits")},
                         {"median_val_mse", agg.median_val_mse},
                         {"median_test_mse", agg.median_test_mse},
                         {"mad_test_mse", agg.mad_test_mse}});
  }
  std::ostringstream name;
  name << "ansatz-" << dataset << "-l" << l << "-k" << k << ".json";
  std::ofstream out(store.dir() / name.str(), std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write ansatz search summary");
  out << j.dump(2) << '\n';
}

}  // namespace

data::TimeSeries generate_dataset(const std::string& name, int n_points) {
  if (name == "mackey") return data::gen_mackey_glass(n_points);
  if (name == "henon") return data::gen_henon(n_points);
  if (name == "lorenz") return data::gen_lorenz(n_points);
  throw ConfigError("unknown dataset: " + name);
}

RunSummary run_benchmark(const BenchmarkConfig& cfg, JsonlRunStore& store) {
  train::TrainOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.batch_size = cfg.batch_size;
  opts.epoch_cap = cfg.epoch_cap;
  opts.jobs = cfg.jobs;
  opts.benchmark_mode = !cfg.allow_off_grid;

  RunSummary summary;
  const std::size_t stored_before = store.stored_this_session();

  for (const auto& name : cfg.datasets) {
    const data::TimeSeries scaled = data::minmax_scale(generate_dataset(name, cfg.n_points));
    for (int l : cfg.seq_lens) {
      for (int k : cfg.pred_steps.at(name)) {
        data::WindowedDataset ds;
        try {
          ds = data::make_windows(scaled, l, k);
        } catch (const std::exception& e) {
          summary.failures.push_back(name + "-l" + std::to_string(l) + "-k" + std::to_string(k) +
                                     ": " + e.what());
          std::cerr << "[bench] " << summary.failures.back() << '\n';
          continue;
        }
        for (const auto kind : cfg.kinds) {
          const std::string label = name + "-l" + std::to_string(l) + "-k" + std::to_string(k) +
                                    " " + models::kind_name(kind);
          try {
            if (kind == models::ModelKind::Ruqnn) {
              const auto res = train::ansatz_search(ds, name, cfg.search_seed,
                                                    cfg.search_circuits, opts, &store);
              write_search_summary(store, name, l, k, res);
            } else {
              train::grid_search(grid_for(cfg, kind, l, scaled.d), ds, name, opts, &store);
            }
          } catch (const std::exception& e) {
            summary.failures.push_back(label + ": " + e.what());
            std::cerr << "[bench] " << summary.failures.back() << '\n';
          }
        }
      }
    }
  }

  summary.units_trained = store.stored_this_session() - stored_before;
  summary.units_reused = store.completed_count() - store.stored_this_session();
  return summary;
}

}  // namespace qts::bench
