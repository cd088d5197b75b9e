#include "qts/bench/records.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

#include "qts/errors.hpp"

namespace qts::bench {

using nlohmann::json;

std::string record_to_json(const std::string& key, const train::RunRecord& rec) {
  json j;
  j["key"] = key;
  j["model"] = models::kind_name(rec.spec.kind);
  j["l"] = rec.spec.seq_len;
  j["dim"] = rec.spec.data_dim;
  j["hyper"] = rec.spec.hyper;
  if (!rec.spec.ansatz.empty()) j["ansatz"] = rec.spec.ansatz;
  j["dataset"] = rec.dataset_id;
  j["k"] = rec.k;
  j["phase"] = rec.phase;
  j["seed"] = rec.seed;
  j["epochs"] = rec.epochs_run;
  j["hit_cap"] = rec.hit_epoch_cap;
  j["failed"] = rec.failed;
  if (!rec.note.empty()) j["note"] = rec.note;
  j["train_mse"] = rec.train_mse;
  j["val_mse"] = rec.val_mse;
  j["test_mse"] = rec.test_mse;
  j["classical_params"] = rec.classical_params;
  j["quantum_params"] = rec.quantum_params;
  j["wall_seconds"] = rec.wall_seconds;
  j["val_history"] = rec.val_history;
  return j.dump();
}

train::RunRecord record_from_json(const std::string& line, std::string* key) {
  const json j = json::parse(line);
  train::RunRecord rec;
  if (key) *key = j.at("key").get<std::string>();
  rec.spec.kind = models::kind_from_name(j.at("model").get<std::string>());
  rec.spec.seq_len = j.at("l").get<int>();
  rec.spec.data_dim = j.at("dim").get<int>();
  rec.spec.hyper = j.at("hyper").get<std::map<std::string, int>>();
  if (j.contains("ansatz")) rec.spec.ansatz = j.at("ansatz").get<std::string>();
  rec.dataset_id = j.at("dataset").get<std::string>();
  rec.k = j.at("k").get<int>();
  rec.phase = j.at("phase").get<std::string>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.epochs_run = j.at("epochs").get<int>();
  rec.hit_epoch_cap = j.at("hit_cap").get<bool>();
  rec.failed = j.at("failed").get<bool>();
  if (j.contains("note")) rec.note = j.at("note").get<std::string>();
  rec.train_mse = j.at("train_mse").get<double>();
  rec.val_mse = j.at("val_mse").get<double>();
  rec.test_mse = j.at("test_mse").get<double>();
  rec.classical_params = j.at("classical_params").get<int>();
  rec.quantum_params = j.at("quantum_params").get<int>();
  rec.wall_seconds = j.at("wall_seconds").get<double>();
  rec.val_history = j.at("val_history").get<std::vector<double>>();
  return rec;
}

std::filesystem::path JsonlRunStore::records_path(const std::filesystem::path& dir) {
  return dir / "records.jsonl";
}

std::filesystem::path JsonlRunStore::index_path(const std::filesystem::path& dir) {
  return dir / "completed.idx";
}

JsonlRunStore::JsonlRunStore(const std::filesystem::path& dir) : dir_(dir) {
  std::filesystem::create_directories(dir_);

  std::set<std::string> completed;
  {
    std::ifstream idx(index_path(dir_));
    std::string line;
    while (std::getline(idx, line))
      if (!line.empty()) completed.insert(line);
  }
  std::ifstream recs(records_path(dir_));
  std::string line;
  while (std::getline(recs, line)) {
    if (line.empty()) continue;
    try {
      std::string key;
      train::RunRecord rec = record_from_json(line, &key);
      if (completed.count(key)) records_[key] = std::move(rec);  // last record wins
    } catch (const json::exception&) {
      // torn trailing line from a killed run; its key is absent from the
      // index, so the unit will simply be recomputed
    }
  }
}

bool JsonlRunStore::lookup(const std::string& key, train::RunRecord* rec) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = records_.find(key);
  if (it == records_.end()) return false;
  if (rec) *rec = it->second;
  return true;
}

void JsonlRunStore::store(const std::string& key, const train::RunRecord& rec) {
  std::lock_guard<std::mutex> lock(mutex_);
  {
    std::ofstream out(records_path(dir_), std::ios::app);
    if (!out) throw ResourceError("cannot append to " + records_path(dir_).string());
    out << record_to_json(key, rec) << '\n';
    out.flush();
    if (!out) throw ResourceError("failed writing record for " + key);
  }
  {
    std::ofstream idx(index_path(dir_), std::ios::app);
    if (!idx) throw ResourceError("cannot append to " + index_path(dir_).string());
    idx << key << '\n';
    idx.flush();
    if (!idx) throw ResourceError("failed writing completion index for " + key);
  }
  records_[key] = rec;
  ++stored_this_session_;
}

std::size_t JsonlRunStore::completed_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.size();
}

std::vector<train::RunRecord> JsonlRunStore::all_completed() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<train::RunRecord> out;
  out.reserve(records_.size());
  for (const auto& [key, rec] : records_) out.push_back(rec);
  return out;
}

}  // namespace qts::bench
