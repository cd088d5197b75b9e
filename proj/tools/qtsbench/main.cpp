// Command-line front end: dataset generation, chaos statistics, benchmark
// orchestration, ansatz search, and CSV reporting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qts/bench/config.hpp"
#include "qts/bench/records.hpp"
#include "qts/bench/report.hpp"
#include "qts/bench/runner.hpp"
#include "qts/data/windows.hpp"
#include "qts/errors.hpp"
#include "qts/stats/stats.hpp"
#include "qts/train/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using qts::bench::format_double;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;  // 0 = take from config
  bool resume = false;
};

qts::bench::BenchmarkConfig effective_config(const CommonArgs& args) {
  qts::bench::BenchmarkConfig cfg;
  if (!args.config_path.empty()) cfg = qts::bench::load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.jobs > 0) cfg.jobs = args.jobs;
  return cfg;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw qts::ResourceError("cannot write " + path.string());
  out << content;
}

int cmd_data_gen(const CommonArgs& args) {
  const auto cfg = effective_config(args);
  const fs::path dir = fs::path(cfg.out_dir) / "datasets";
  fs::create_directories(dir);
  for (const auto& name : cfg.datasets) {
    const auto series = qts::bench::generate_dataset(name, cfg.n_points);
    write_text(dir / (name + ".csv"), qts::data::to_csv(series));
    write_text(dir / (name + "_scaled.csv"), qts::data::to_csv(qts::data::minmax_scale(series)));
    std::cout << name << ": " << series.n_points << " points, " << series.d << " dims -> "
              << (dir / (name + ".csv")).string() << '\n';
  }
  return 0;
}

int cmd_stats(const CommonArgs& args, std::uint64_t seed) {
  const auto cfg = effective_config(args);
  std::string csv = "dataset,dims,points,mean_period,autocorr_lag,lyapunov_exponent,lyapunov_time\n";
  std::cout << "dataset   dims  points  mean_period  lag  lyap_exponent  lyap_time\n";
  for (const auto& name : cfg.datasets) {
    const auto series = qts::bench::generate_dataset(name, cfg.n_points);
    const auto st = qts::stats::dataset_stats(series, seed);
    std::cout << name << (name.size() < 8 ? std::string(8 - name.size(), ' ') : " ") << "  "
              << series.d << "     " << series.n_points << "    " << st.mean_period << "        "
              << st.lag << "    " << st.lyapunov_exponent << "       " << st.lyapunov_time << '\n';
    csv += name + ',' + std::to_string(series.d) + ',' + std::to_string(series.n_points) + ',' +
           format_double(st.mean_period) + ',' + std::to_string(st.lag) + ',' +
           format_double(st.lyapunov_exponent) + ',' + format_double(st.lyapunov_time) + '\n';
  }
  if (!args.out_dir.empty() || !args.config_path.empty()) {
    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "stats.csv", csv);
  }
  return 0;
}

int cmd_run(const CommonArgs& args) {
  const auto cfg = effective_config(args);
  qts::bench::JsonlRunStore store(cfg.out_dir);
  if (store.completed_count() > 0)
    std::cout << "resuming: " << store.completed_count() << " completed units found\n";
  const auto summary = qts::bench::run_benchmark(cfg, store);
  std::cout << "trained " << summary.units_trained << " units, reused " << summary.units_reused
            << ", failures " << summary.failures.size() << '\n';
  return summary.failures.empty() ? 0 : 1;
}

int cmd_ansatz_search(const CommonArgs& args, const std::string& dataset, int l, int k) {
  auto cfg = effective_config(args);
  cfg.datasets = {dataset};
  cfg.seq_lens = {l};
  cfg.pred_steps[dataset] = {k};
  cfg.kinds = {qts::models::ModelKind::Ruqnn};
  qts::bench::JsonlRunStore store(cfg.out_dir);
  const auto summary = qts::bench::run_benchmark(cfg, store);
  for (const auto& f : summary.failures) std::cerr << f << '\n';
  std::cout << "trained " << summary.units_trained << " units, reused " << summary.units_reused
            << '\n';
  return summary.failures.empty() ? 0 : 1;
}

int cmd_report(const CommonArgs& args, const std::string& kind) {
  const auto cfg = effective_config(args);
  qts::bench::JsonlRunStore store(cfg.out_dir);
  const auto written = qts::bench::export_report(store.all_completed(), kind,
                                                 fs::path(cfg.out_dir) / "reports");
  for (const auto& p : written) std::cout << p.string() << '\n';
  return 0;
}

int cmd_rank(const CommonArgs& args) {
  const auto cfg = effective_config(args);
  qts::bench::JsonlRunStore store(cfg.out_dir);
  const auto table = qts::bench::rank_models(store.all_completed());
  for (const auto& task : table.tasks) {
    std::cout << task.dataset << " l=" << task.l << " k=" << task.k << '\n';
    for (const auto& e : task.entries)
      std::cout << "  " << e.rank << ". " << e.model << "  median test MSE "
                << format_double(e.best_median_test_mse) << '\n';
  }
  std::cout << "average ranks\n";
  for (const auto& avg : table.averages)
    std::cout << "  " << avg.model << "  " << format_double(avg.average_rank) << "  (over "
              << avg.n_tasks << " tasks)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical time-series forecasting benchmark"};
  app.require_subcommand(1);

  CommonArgs args;
  app.add_option("--config", args.config_path, "Config file path")->capture_default_str();
  app.add_option("--out", args.out_dir, "Output directory (overrides config)");
  app.add_option("--jobs", args.jobs, "Parallel training jobs (overrides config)");
  app.add_flag("--resume", args.resume,
               "Resume from existing results (resuming is always safe; this flag just "
               "documents intent)");

  auto* data_gen = app.add_subcommand("data-gen", "Generate dataset CSVs");
  auto* stats = app.add_subcommand("stats", "Report chaos statistics per dataset");
  std::uint64_t stats_seed = 0;
  stats->add_option("--seed", stats_seed, "Seed for the Lyapunov estimation runs")
      ->capture_default_str();
  auto* run = app.add_subcommand("run", "Run the benchmark described by the config");
  auto* search = app.add_subcommand("ansatz-search", "Run the two-stage random-ansatz search");
  std::string search_dataset = "mackey";
  int search_l = 4, search_k = 1;
  search->add_option("--dataset", search_dataset, "Dataset name")->capture_default_str();
  search->add_option("--seq-len", search_l, "Sequence length l")->capture_default_str();
  search->add_option("--pred-step", search_k, "Prediction step k")->capture_default_str();
  auto* report = app.add_subcommand("report", "Export CSV reports from a results directory");
  std::string report_kind;
  report->add_option("kind", report_kind, "mse_by_task | mse_vs_seqlen | mse_vs_params | ranking")
      ->required();
  auto* rank = app.add_subcommand("rank", "Print the model ranking table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (data_gen->parsed()) return cmd_data_gen(args);
    if (stats->parsed()) return cmd_stats(args, stats_seed);
    if (run->parsed()) return cmd_run(args);
    if (search->parsed()) return cmd_ansatz_search(args, search_dataset, search_l, search_k);
    if (report->parsed()) return cmd_report(args, report_kind);
    if (rank->parsed()) return cmd_rank(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
