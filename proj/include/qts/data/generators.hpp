#pragma once

#include <string>
#include <vector>

namespace qts::data {

struct TimeSeries {
  std::string generator_id;
  int d = 0;
  int n_points = 0;
  std::vector<double> data;  // row-major n_points x d

  double at(int t, int dim) const { return data[static_cast<std::size_t>(t) * d + dim]; }
  std::vector<double> column(int dim) const;
};

// dx/dt = 0.2 x(t-17) / (1 + x(t-17)^10) - 0.1 x(t), RK4 with unit step from
// x(0) = 1.2, constant history 1.2 for t < 0, delayed half-step values linearly
// interpolated from the stored unit grid. Deterministic, no transient discard.
TimeSeries gen_mackey_glass(int n_points);

// x' = 1 - 1.4 x^2 + y, y' = 0.3 x, iterated from (0, 0) inclusive.
TimeSeries gen_henon(int n_points);

// RK4 (step 0.03) of the Lorenz system, sigma=10 rho=28 beta=8/3 from (1,1,1);
// first 500 samples dropped.
TimeSeries gen_lorenz(int n_points);

struct ScaleInfo {
  std::vector<double> min, max;  // per dimension
};

// Per-dimension (x - min) / (max - min). DegenerateDataError on a constant dim.
TimeSeries minmax_scale(const TimeSeries& series, ScaleInfo* info = nullptr);
std::vector<double> minmax_invert(const ScaleInfo& info, const std::vector<double>& scaled_row);

std::string to_csv(const TimeSeries& series);  // header: t,x1..xd

}  // namespace qts::data
