#include "qts/bench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "qts/errors.hpp"

namespace qts::bench {

namespace {

using train::AggregateRecord;
using train::RunRecord;

std::string hyper_string(const models::ModelSpec& spec) {
  std::string out;
  for (const auto& [key, value] : spec.hyper) {
    if (!out.empty()) out += ';';
    out += key + "=" + std::to_string(value);
  }
  if (!spec.ansatz.empty()) {
    const std::string id = spec.id();
    out += (out.empty() ? "" : ";") + ("circuit=" + id.substr(id.rfind('-') + 1));
  }
  return out;
}

std::tuple<std::string, int, int> task_of(const AggregateRecord& a) {
  return {a.dataset_id, a.spec.seq_len, a.k};
}

std::string task_label(const std::tuple<std::string, int, int>& t) {
  return std::get<0>(t) + "-l" + std::to_string(std::get<1>(t)) + "-k" +
         std::to_string(std::get<2>(t));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<AggregateRecord> aggregate_records(const std::vector<RunRecord>& records) {
  std::map<std::tuple<std::string, int, int, std::string>, std::vector<RunRecord>> groups;
  for (const auto& rec : records) {
    if (rec.phase == "search1") continue;
    groups[{rec.dataset_id, rec.spec.seq_len, rec.k, rec.spec.id()}].push_back(rec);
  }
  std::vector<AggregateRecord> out;
  out.reserve(groups.size());
  for (auto& [key, runs] : groups) {
    std::sort(runs.begin(), runs.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
    out.push_back(train::aggregate(std::move(runs)));
  }
  std::sort(out.begin(), out.end(), [](const AggregateRecord& a, const AggregateRecord& b) {
    return std::tuple(a.dataset_id, a.spec.seq_len, a.k, std::string(models::kind_name(a.spec.kind)),
                      a.spec.id()) <
           std::tuple(b.dataset_id, b.spec.seq_len, b.k, std::string(models::kind_name(b.spec.kind)),
                      b.spec.id());
  });
  return out;
}

std::vector<std::size_t> select_winners(const std::vector<AggregateRecord>& aggregates) {
  std::map<std::tuple<std::string, int, int, std::string>, std::size_t> best;
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    const auto key = std::tuple_cat(task_of(aggregates[i]),
                                    std::tuple(std::string(models::kind_name(aggregates[i].spec.kind))));
    const auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, i);
    } else if (train::better_aggregate(aggregates[i], aggregates[it->second])) {
      it->second = i;
    }
  }
  std::vector<std::size_t> out;
  out.reserve(best.size());
  for (const auto& [key, idx] : best) out.push_back(idx);
  std::sort(out.begin(), out.end());
  return out;
}

RankingTable rank_models(const std::vector<AggregateRecord>& aggregates) {
  const auto winners = select_winners(aggregates);

  std::map<std::tuple<std::string, int, int>, std::vector<RankingTable::Entry>> by_task;
  for (std::size_t idx : winners) {
    const auto& agg = aggregates[idx];
    by_task[task_of(agg)].push_back(
        {models::kind_name(agg.spec.kind), agg.median_test_mse, 0});
  }

  RankingTable table;
  std::map<std::string, std::pair<int, double>> totals;  // model -> (n_tasks, rank sum)
  for (auto& [task, entries] : by_task) {
    for (auto& e : entries) {
      e.rank = 1;
      for (const auto& other : entries)
        if (other.best_median_test_mse < e.best_median_test_mse) ++e.rank;
    }
    std::sort(entries.begin(), entries.end(),
              [](const RankingTable::Entry& a, const RankingTable::Entry& b) {
                return std::tie(a.rank, a.model) < std::tie(b.rank, b.model);
              });
    for (const auto& e : entries) {
      auto& [n, sum] = totals[e.model];
      ++n;
      sum += e.rank;
    }
    table.tasks.push_back({std::get<0>(task), std::get<1>(task), std::get<2>(task), entries});
  }
  for (const auto& [model, stat] : totals)
    table.averages.push_back({model, stat.first, stat.second / stat.first});
  std::sort(table.averages.begin(), table.averages.end(),
            [](const RankingTable::Average& a, const RankingTable::Average& b) {
              return std::tie(a.average_rank, a.model) < std::tie(b.average_rank, b.model);
            });
  return table;
}

RankingTable rank_models(const std::vector<RunRecord>& records) {
  return rank_models(aggregate_records(records));
}

std::vector<std::filesystem::path> export_report(const std::vector<RunRecord>& records,
                                                 const std::string& kind,
                                                 const std::filesystem::path& out_dir) {
  const auto aggregates = aggregate_records(records);
  std::vector<std::string> warnings;
  if (aggregates.empty()) warnings.push_back("no completed records");
  for (const auto& agg : aggregates)
    if (std::isinf(agg.median_val_mse))
      warnings.push_back(task_label(task_of(agg)) + " " + agg.spec.id() + ": all seeds failed");

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + path.string());
    out << content;
    written.push_back(path);
  };

  const auto winners = select_winners(aggregates);
  std::ostringstream csv;
  if (kind == "mse_by_task") {
    csv << "dataset,l,k,model,hyperparams,n_params,median_val_mse,median_test_mse,mad_test_mse\n";
    for (std::size_t idx : winners) {
      const auto& a = aggregates[idx];
      csv << a.dataset_id << ',' << a.spec.seq_len << ',' << a.k << ','
          << models::kind_name(a.spec.kind) << ',' << hyper_string(a.spec) << ',' << a.total_params
          << ',' << format_double(a.median_val_mse) << ',' << format_double(a.median_test_mse)
          << ',' << format_double(a.mad_test_mse) << '\n';
    }
    write_file("mse_by_task.csv", csv.str());
  } else if (kind == "mse_vs_seqlen") {
    // winners re-sorted so rows group by (dataset, k, model) across l
    std::vector<std::size_t> order = winners;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const auto& a = aggregates[x];
      const auto& b = aggregates[y];
      return std::tuple(a.dataset_id, a.k, std::string(models::kind_name(a.spec.kind)),
                        a.spec.seq_len) < std::tuple(b.dataset_id, b.k,
                                                     std::string(models::kind_name(b.spec.kind)),
                                                     b.spec.seq_len);
    });
    csv << "dataset,k,model,l,median_test_mse,mad_test_mse\n";
    for (std::size_t idx : order) {
      const auto& a = aggregates[idx];
      csv << a.dataset_id << ',' << a.k << ',' << models::kind_name(a.spec.kind) << ','
          << a.spec.seq_len << ',' << format_double(a.median_test_mse) << ','
          << format_double(a.mad_test_mse) << '\n';
    }
    write_file("mse_vs_seqlen.csv", csv.str());
  } else if (kind == "mse_vs_params") {
    csv << "dataset,l,k,model,hyperparams,n_params,median_test_mse,mad_test_mse\n";
    for (const auto& a : aggregates) {
      csv << a.dataset_id << ',' << a.spec.seq_len << ',' << a.k << ','
          << models::kind_name(a.spec.kind) << ',' << hyper_string(a.spec) << ',' << a.total_params
          << ',' << format_double(a.median_test_mse) << ',' << format_double(a.mad_test_mse)
          << '\n';
    }
    write_file("mse_vs_params.csv", csv.str());
  } else if (kind == "ranking") {
    const RankingTable table = rank_models(aggregates);
    csv << "dataset,l,k,model,best_median_test_mse,rank\n";
    for (const auto& task : table.tasks)
      for (const auto& e : task.entries)
        csv << task.dataset << ',' << task.l << ',' << task.k << ',' << e.model << ','
            << format_double(e.best_median_test_mse) << ',' << e.rank << '\n';
    write_file("ranking.csv", csv.str());

    std::ostringstream summary;
    summary << "model,n_tasks,average_rank\n";
    for (const auto& avg : table.averages)
      summary << avg.model << ',' << avg.n_tasks << ',' << format_double(avg.average_rank) << '\n';
    write_file("ranking_summary.csv", summary.str());
  } else {
    throw ConfigError("unknown report kind: " + kind);
  }

  if (!warnings.empty()) {
    std::string manifest;
    for (const auto& w : warnings) manifest += w + '\n';
    write_file("warnings_" + kind + ".txt", manifest);
  }
  return written;
}

}  // namespace qts::bench
