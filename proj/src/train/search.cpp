#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "qts/errors.hpp"
#include "qts/train/trainer.hpp"

namespace qts::train {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// exception after all workers drain.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = static_cast<int>(std::min<std::size_t>(jobs, n));
  threads.reserve(count);
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

RunRecord run_unit(const models::ModelSpec& spec, const data::WindowedDataset& ds,
                   const std::string& dataset_id, std::uint64_t seed, const std::string& phase,
                   const TrainOptions& opts, RunStore* store) {
  const std::string key = unit_key(phase, dataset_id, ds.l, ds.k, spec, seed);
  RunRecord rec;
  if (store && store->lookup(key, &rec)) return rec;
  rec = train(spec, ds, dataset_id, seed, opts);
  rec.phase = phase;
  if (store) store->store(key, rec);
  return rec;
}

}  // namespace

AggregateRecord run_seeds(const models::ModelSpec& spec, const data::WindowedDataset& ds,
                          const std::string& dataset_id, const TrainOptions& opts, RunStore* store,
                          const std::string& phase) {
  std::vector<RunRecord> runs(10);
  parallel_for(runs.size(), opts.jobs, [&](std::size_t seed) {
    runs[seed] = run_unit(spec, ds, dataset_id, seed, phase, opts, store);
  });
  return aggregate(std::move(runs));
}

GridSearchResult grid_search(const std::vector<models::ModelSpec>& specs,
                             const data::WindowedDataset& ds, const std::string& dataset_id,
                             const TrainOptions& opts, RunStore* store) {
  if (specs.empty()) throw ConfigError("empty hyperparameter grid");

  std::vector<std::vector<RunRecord>> runs(specs.size(), std::vector<RunRecord>(10));
  parallel_for(specs.size() * 10, opts.jobs, [&](std::size_t u) {
    const std::size_t g = u / 10, seed = u % 10;
    runs[g][seed] = run_unit(specs[g], ds, dataset_id, seed, "grid", opts, store);
  });

  GridSearchResult result;
  for (auto& r : runs) result.all.push_back(aggregate(std::move(r)));
  result.best = 0;
  for (std::size_t g = 1; g < result.all.size(); ++g)
    if (better_aggregate(result.all[g], result.all[result.best])) result.best = static_cast<int>(g);
  return result;
}

GridSearchResult grid_search(models::ModelKind kind, const data::WindowedDataset& ds,
                             const std::string& dataset_id, const TrainOptions& opts,
                             RunStore* store) {
  return grid_search(models::grid_specs(kind, ds.l, ds.d), ds, dataset_id, opts, store);
}

AnsatzSearchResult ansatz_search(const data::WindowedDataset& ds, const std::string& dataset_id,
                                 std::uint64_t search_seed, int n_circuits,
                                 const TrainOptions& opts, RunStore* store) {
  if (n_circuits < 1) throw ConfigError("ansatz search needs at least one circuit");

  static constexpr int kQubitChoices[] = {4, 6, 8};
  std::vector<models::ModelSpec> candidates;
  for (int c = 0; c < n_circuits; ++c) {
    Rng rng = Rng::child(search_seed, static_cast<std::uint64_t>(c));
    const std::string ansatz = models::sample_ansatz(ds.d, rng).serialize();
    for (int n : kQubitChoices) {
      models::ModelSpec spec;
      spec.kind = models::ModelKind::Ruqnn;
      spec.seq_len = ds.l;
      spec.data_dim = ds.d;
      spec.hyper = {{"qubits", n}};
      spec.ansatz = ansatz;
      candidates.push_back(std::move(spec));
    }
  }

  AnsatzSearchResult result;
  result.stage1.resize(candidates.size());
  parallel_for(candidates.size(), opts.jobs, [&](std::size_t i) {
    result.stage1[i] = run_unit(candidates[i], ds, dataset_id, 0, "search1", opts, store);
  });

  // Ten best single-run candidates by validation MSE, stable on stage-1 order.
  std::vector<std::size_t> idx(candidates.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto val_of = [&](std::size_t i) {
    return result.stage1[i].failed ? std::numeric_limits<double>::infinity()
                                   : result.stage1[i].val_mse;
  };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return val_of(a) < val_of(b); });
  idx.resize(std::min<std::size_t>(10, idx.size()));

  result.stage2.reserve(idx.size());
  for (std::size_t i : idx)
    result.stage2.push_back(run_seeds(candidates[i], ds, dataset_id, opts, store, "search2"));
  result.winner = 0;
  for (std::size_t g = 1; g < result.stage2.size(); ++g)
    if (better_aggregate(result.stage2[g], result.stage2[result.winner]))
      result.winner = static_cast<int>(g);
  return result;
}

}  // namespace qts::train
