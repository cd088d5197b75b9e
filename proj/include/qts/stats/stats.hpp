#pragma once

#include <cstdint>
#include <vector>

#include "qts/data/generators.hpp"
#include "qts/rng.hpp"

namespace qts::stats {

struct SeriesStats {
  double mean_period = 0.0;       // steps, mean over dimensions
  int lag = 1;                    // autocorrelation decay lag, mean over dims (rounded)
  double lyapunov_exponent = 0.0; // 1/steps, mean over dimensions
  double lyapunov_time = 0.0;     // 1/exponent

  std::vector<double> mean_period_per_dim;
  std::vector<int> lag_per_dim;
  std::vector<double> exponent_per_dim;
};

// Inverse of the amplitude-weighted mean frequency of the DFT. Weights are
// |A_k| over the half spectrum with the DC amplitude kept in the normalization
// (it adds nothing to the numerator). DegenerateDataError on a signal whose
// positive-frequency content vanishes.
double mean_period(const std::vector<double>& series);

// Smallest positive lag where the (mean-subtracted, unnormalized) autocorrelation
// drops below (1 - 1/e) of its lag-0 value. EstimationError if it never does.
int autocorr_lag(const std::vector<double>& series);

// Rosenstein largest-Lyapunov estimate on one scalar series: delay-embed,
// nearest neighbors constrained to |i - j| > min_tsep, mean log divergence
// tracked traj_len steps, least-squares slope. Each call subsamples
// ref_fraction of the reference points through rng, so averaging calls with
// child seeds gives the many-run protocol. EstimationError when no valid
// neighbor pairs remain.
double rosenstein_lyapunov(const std::vector<double>& series, int embedding_dim, int min_tsep,
                           int lag, int traj_len, Rng& rng, double ref_fraction = 0.8);

inline constexpr int kRosensteinRuns = 100;

// Per-dimension mean period and lag on the min-max scaled series; Rosenstein
// (embedding 2d+1, min_tsep = round(mean period), window = ceil(mean period))
// averaged over kRosensteinRuns sub-seeded runs, exponent averaged over dims.
// EstimationError if the final exponent is not positive.
SeriesStats dataset_stats(const data::TimeSeries& series, std::uint64_t seed);

}  // namespace qts::stats
