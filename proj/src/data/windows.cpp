#include "qts/data/windows.hpp"

#include "qts/errors.hpp"

namespace qts::data {

WindowedDataset make_windows(const TimeSeries& series, int l, int k) {
  if (l < 1) throw ConfigError("sequence length must be >= 1");
  if (k < 1) throw ConfigError("prediction steps must be >= 1");
  if (series.n_points <= l + k) throw ConfigError("series too short for window shape");

  const int count = series.n_points - k - l + 1;
  WindowedDataset w;
  w.l = l;
  w.k = k;
  w.d = series.d;
  w.sequences.reserve(count);
  w.labels.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> seq(static_cast<std::size_t>(l) * series.d);
    for (int t = 0; t < l; ++t)
      for (int dim = 0; dim < series.d; ++dim)
        seq[static_cast<std::size_t>(t) * series.d + dim] = series.at(i + t, dim);
    std::vector<double> label(series.d);
    for (int dim = 0; dim < series.d; ++dim) label[dim] = series.at(i + l + k - 1, dim);
    w.sequences.push_back(std::move(seq));
    w.labels.push_back(std::move(label));
  }
  w.train_end = static_cast<std::size_t>(count * 60 / 100);
  w.val_end = static_cast<std::size_t>(count * 80 / 100);
  return w;
}

}  // namespace qts::data
