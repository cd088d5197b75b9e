#include "qts/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qts/errors.hpp"
#include "qts/ml/optim.hpp"

namespace qts::train {

namespace {

double mean(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i];
  return s / n;
}

}  // namespace

std::string unit_key(const std::string& phase, const std::string& dataset_id, int l, int k,
                     const models::ModelSpec& spec, std::uint64_t seed) {
  std::ostringstream os;
  os << phase << '/' << dataset_id << "-l" << l << "-k" << k << '/' << spec.id() << "/s" << seed;
  return os.str();
}

bool converged(const std::vector<double>& val_losses) {
  if (val_losses.size() < 400) return false;
  const double* tail = val_losses.data() + val_losses.size() - 400;
  const double mu1 = mean(tail, 200);
  const double mu2 = mean(tail + 200, 200);
  double var2 = 0.0;
  for (int i = 200; i < 400; ++i) var2 += (tail[i] - mu2) * (tail[i] - mu2);
  const double sigma2 = std::sqrt(var2 / 200.0);
  return std::abs(mu1 - mu2) <= sigma2 / (2.0 * std::sqrt(200.0));
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_abs_deviation(std::vector<double> values) {
  const double med = median(values);
  for (double& v : values) v = std::abs(v - med);
  return median(std::move(values));
}

double evaluate_mse(const models::Model& model, const data::WindowedDataset& ds,
                    const ml::Vec& params, std::size_t begin, std::size_t end) {
  if (begin >= end) throw ConfigError("empty evaluation range");
  double total = 0.0;
  for (std::size_t i = begin; i < end; ++i)
    total += ml::mse_loss(model.forward(ds.sequences[i], params), ds.labels[i]).loss;
  return total / static_cast<double>(end - begin);
}

RunRecord train(const models::ModelSpec& spec, const data::WindowedDataset& ds,
                const std::string& dataset_id, std::uint64_t seed, const TrainOptions& opts) {
  if (spec.seq_len != ds.l || spec.data_dim != ds.d)
    throw ConfigError("model spec does not match dataset shape");
  if (ds.train_end == 0 || ds.val_end <= ds.train_end || ds.size() <= ds.val_end)
    throw ConfigError("dataset too small to split");

  const auto t0 = std::chrono::steady_clock::now();
  const auto model = models::build_model(spec, opts.benchmark_mode);

  RunRecord rec;
  rec.spec = spec;
  rec.dataset_id = dataset_id;
  rec.k = ds.k;
  rec.seed = seed;
  const auto counts = model->param_counts();
  rec.classical_params = counts.classical;
  rec.quantum_params = counts.quantum;

  Rng rng(seed);
  ml::Vec params = model->init_params(rng);
  if (static_cast<int>(params.size()) != counts.total())
    throw ConfigError("parameter layout does not match reported counts");

  ml::Adam adam(counts.total(), opts.learning_rate);
  std::vector<std::size_t> order(ds.train_end);
  std::iota(order.begin(), order.end(), std::size_t{0});
  ml::Vec grads(params.size());

  for (int epoch = 0; epoch < opts.epoch_cap; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b = 0; b < order.size() && !rec.failed; b += opts.batch_size) {
      const std::size_t n = std::min<std::size_t>(opts.batch_size, order.size() - b);
      std::fill(grads.begin(), grads.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = order[b + j];
        batch_loss += model->forward_backward(ds.sequences[i], ds.labels[i], params,
                                              1.0 / static_cast<double>(n), grads.data());
      }
      if (!std::isfinite(batch_loss)) {
        rec.failed = true;
        rec.note = "non-finite loss at epoch " + std::to_string(epoch);
        break;
      }
      try {
        adam.update(params, grads);
      } catch (const OptimError& e) {
        rec.failed = true;
        rec.note = std::string(e.what()) + " at epoch " + std::to_string(epoch);
      }
    }
    if (rec.failed) break;
    rec.val_history.push_back(evaluate_mse(*model, ds, params, ds.train_end, ds.val_end));
    rec.epochs_run = epoch + 1;
    if (converged(rec.val_history)) break;
    if (epoch + 1 == opts.epoch_cap) rec.hit_epoch_cap = true;
  }

  if (!rec.failed) {
    rec.train_mse = evaluate_mse(*model, ds, params, 0, ds.train_end);
    rec.val_mse = evaluate_mse(*model, ds, params, ds.train_end, ds.val_end);
    rec.test_mse = evaluate_mse(*model, ds, params, ds.val_end, ds.size());
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

AggregateRecord aggregate(std::vector<RunRecord> runs) {
  if (runs.empty()) throw ConfigError("aggregate of zero runs");
  AggregateRecord agg;
  agg.spec = runs.front().spec;
  agg.dataset_id = runs.front().dataset_id;
  agg.k = runs.front().k;
  agg.total_params = runs.front().classical_params + runs.front().quantum_params;

  std::vector<double> val, test;
  for (const auto& r : runs) {
    if (r.failed) {
      ++agg.n_failed;
      continue;
    }
    val.push_back(r.val_mse);
    test.push_back(r.test_mse);
  }
  if (val.empty()) {
    agg.median_val_mse = std::numeric_limits<double>::infinity();
    agg.median_test_mse = std::numeric_limits<double>::infinity();
    agg.mad_test_mse = std::numeric_limits<double>::infinity();
  } else {
    agg.median_val_mse = median(val);
    agg.median_test_mse = median(test);
    agg.mad_test_mse = median_abs_deviation(test);
  }
  agg.runs = std::move(runs);
  return agg;
}

bool better_aggregate(const AggregateRecord& a, const AggregateRecord& b) {
  if (a.median_val_mse != b.median_val_mse) return a.median_val_mse < b.median_val_mse;
  return a.total_params < b.total_params;
}

}  // namespace qts::train
