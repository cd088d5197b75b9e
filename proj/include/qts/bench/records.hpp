#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "qts/train/trainer.hpp"

namespace qts::bench {

std::string record_to_json(const std::string& key, const train::RunRecord& rec);
train::RunRecord record_from_json(const std::string& line, std::string* key);

// Append-only line-delimited record file plus a completion index. A unit
// counts as completed only when its key appears in the index, which is written
// (and flushed) after the record line, so torn writes are re-run, never
// trusted. Thread-safe.
class JsonlRunStore : public train::RunStore {
 public:
  explicit JsonlRunStore(const std::filesystem::path& dir);

  bool lookup(const std::string& key, train::RunRecord* rec) override;
  void store(const std::string& key, const train::RunRecord& rec) override;

  std::size_t completed_count() const;
  std::size_t stored_this_session() const { return stored_this_session_; }
  std::vector<train::RunRecord> all_completed() const;  // ordered by key

  const std::filesystem::path& dir() const { return dir_; }
  static std::filesystem::path records_path(const std::filesystem::path& dir);
  static std::filesystem::path index_path(const std::filesystem::path& dir);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, train::RunRecord> records_;
  std::size_t stored_this_session_ = 0;
};

}  // namespace qts::bench
