#include "qts/bench/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qts/errors.hpp"
#include "qts/models/builders.hpp"

namespace qts::bench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

long long parse_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) fail(line, "not an integer: '" + s + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "not an integer: '" + s + "'");
  }
}

std::vector<int> parse_int_list(const std::string& s, int line) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(static_cast<int>(parse_int(item, line)));
  if (out.empty()) fail(line, "empty list");
  return out;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(line, "not a boolean: '" + s + "'");
}

bool known_dataset(const std::string& name) {
  return name == "mackey" || name == "henon" || name == "lorenz";
}

}  // namespace

BenchmarkConfig parse_config(const std::string& text) {
  BenchmarkConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;  // "", "dataset.<name>", "model.<kind>", "search"
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("dataset.", 0) == 0) {
        if (!known_dataset(section.substr(8))) fail(line_no, "unknown dataset section: " + section);
      } else if (section.rfind("model.", 0) == 0) {
        models::kind_from_name(section.substr(6));  // throws on unknown kind
      } else if (section != "search") {
        fail(line_no, "unknown section: [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line_no, "expected key = value");

    if (section.empty()) {
      if (key == "datasets") {
        cfg.datasets = split_list(value);
        for (const auto& d : cfg.datasets)
          if (!known_dataset(d)) fail(line_no, "unknown dataset: " + d);
      } else if (key == "seq_lens") {
        cfg.seq_lens = parse_int_list(value, line_no);
      } else if (key == "models") {
        cfg.kinds.clear();
        for (const auto& name : split_list(value)) cfg.kinds.push_back(models::kind_from_name(name));
        if (cfg.kinds.empty()) fail(line_no, "empty model list");
      } else if (key == "points") {
        cfg.n_points = static_cast<int>(parse_int(value, line_no));
      } else if (key == "epoch_cap") {
        cfg.epoch_cap = static_cast<int>(parse_int(value, line_no));
      } else if (key == "learning_rate") {
        try {
          cfg.learning_rate = std::stod(value);
        } catch (...) {
          fail(line_no, "not a number: '" + value + "'");
        }
      } else if (key == "batch_size") {
        cfg.batch_size = static_cast<int>(parse_int(value, line_no));
      } else if (key == "jobs") {
        cfg.jobs = static_cast<int>(parse_int(value, line_no));
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "allow_off_grid") {
        cfg.allow_off_grid = parse_bool(value, line_no);
      } else {
        fail(line_no, "unknown key: " + key);
      }
    } else if (section.rfind("dataset.", 0) == 0) {
      if (key == "pred_steps") {
        cfg.pred_steps[section.substr(8)] = parse_int_list(value, line_no);
      } else {
        fail(line_no, "unknown key in [" + section + "]: " + key);
      }
    } else if (section == "search") {
      if (key == "circuits") {
        cfg.search_circuits = static_cast<int>(parse_int(value, line_no));
      } else if (key == "seed") {
        cfg.search_seed = static_cast<std::uint64_t>(parse_int(value, line_no));
      } else {
        fail(line_no, "unknown key in [search]: " + key);
      }
    } else {  // model.<kind>
      const auto kind = models::kind_from_name(section.substr(6));
      const auto axes = models::grid_axes(kind);
      const auto axis = std::find_if(axes.begin(), axes.end(),
                                     [&](const auto& a) { return a.first == key; });
      if (axis == axes.end())
        fail(line_no, "model " + section.substr(6) + " has no grid axis '" + key + "'");
      const auto values = parse_int_list(value, line_no);
      if (!cfg.allow_off_grid) {
        for (int v : values)
          if (std::find(axis->second.begin(), axis->second.end(), v) == axis->second.end())
            fail(line_no, key + " = " + std::to_string(v) +
                              " is off the benchmark grid (set allow_off_grid = true to permit)");
      }
      cfg.grid_overrides[kind][key] = values;
    }
  }

  if (cfg.n_points < 3) throw ConfigError("config: points must be at least 3");
  if (cfg.epoch_cap < 1) throw ConfigError("config: epoch_cap must be positive");
  if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be positive");
  if (cfg.jobs < 1) throw ConfigError("config: jobs must be positive");
  if (cfg.search_circuits < 1) throw ConfigError("config: search circuits must be positive");
  if (cfg.datasets.empty()) throw ConfigError("config: no datasets selected");
  for (const auto& l : cfg.seq_lens)
    if (l < 1) throw ConfigError("config: sequence lengths must be positive");
  for (const auto& d : cfg.datasets) {
    const auto it = cfg.pred_steps.find(d);
    if (it == cfg.pred_steps.end() || it->second.empty())
      throw ConfigError("config: no prediction steps for dataset " + d);
    for (int k : it->second)
      if (k < 1) throw ConfigError("config: prediction steps must be positive");
  }
  return cfg;
}

BenchmarkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qts::bench
