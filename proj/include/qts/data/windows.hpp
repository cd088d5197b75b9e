#pragma once

#include <vector>

#include "qts/data/generators.hpp"

namespace qts::data {

// Sliding-window prediction tuples: sequence = samples [i, i+l), label =
// sample i + l + k - 1 (the k-th step after the sequence). Chronological
// 60/20/20 split on tuple indices, boundaries floored.
struct WindowedDataset {
  int l = 0, k = 0, d = 0;
  std::vector<std::vector<double>> sequences;  // each flattened l x d, time-major
  std::vector<std::vector<double>> labels;     // each d
  std::size_t train_end = 0;                   // [0, train_end) = train
  std::size_t val_end = 0;                     // [train_end, val_end) = val, rest = test

  std::size_t size() const { return sequences.size(); }
};

WindowedDataset make_windows(const TimeSeries& series, int l, int k);

}  // namespace qts::data
