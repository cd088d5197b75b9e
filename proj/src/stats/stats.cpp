#include "qts/stats/stats.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qts/errors.hpp"

namespace qts::stats {

double mean_period(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 4) throw ConfigError("series too short for mean period");

  const int n_bins = n / 2 + 1;
  std::vector<double> in(series);
  std::vector<fftw_complex> out(n_bins);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  double num = 0.0, den = 0.0;
  for (int k = 0; k < n_bins; ++k) {
    const double amp = std::hypot(out[k][0], out[k][1]);
    num += amp * (static_cast<double>(k) / n);
    den += amp;
  }
  if (den == 0.0 || num == 0.0) throw DegenerateDataError("no positive-frequency content");
  return den / num;
}

int autocorr_lag(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 4) throw ConfigError("series too short for autocorrelation");
  const double mu = std::accumulate(series.begin(), series.end(), 0.0) / n;
  std::vector<double> xm(n);
  for (int i = 0; i < n; ++i) xm[i] = series[i] - mu;

  double ac0 = 0.0;
  for (int i = 0; i < n; ++i) ac0 += xm[i] * xm[i];
  const double threshold = (1.0 - 1.0 / std::numbers::e) * ac0;

  for (int lag = 1; lag < n; ++lag) {
    double ac = 0.0;
    for (int i = 0; i + lag < n; ++i) ac += xm[i] * xm[i + lag];
    if (ac < threshold) return lag;
  }
  throw EstimationError("autocorrelation never decays below threshold");
}

double rosenstein_lyapunov(const std::vector<double>& series, int embedding_dim, int min_tsep,
                           int lag, int traj_len, Rng& rng, double ref_fraction) {
  const int n = static_cast<int>(series.size());
  if (embedding_dim < 1 || lag < 1 || traj_len < 2) throw ConfigError("bad rosenstein parameters");
  const int m = n - (embedding_dim - 1) * lag;  // orbit count
  if (m <= traj_len + 1 || m <= min_tsep + 1) throw EstimationError("series too short to embed");

  auto orbit = [&](int i, int k) { return series[i + k * lag]; };

  // nearest neighbor of each orbit point, temporal separation enforced
  std::vector<int> nn(m, -1);
  for (int i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j = 0; j < m; ++j) {
      if (std::abs(i - j) <= min_tsep) continue;
      double d2 = 0.0;
      for (int k = 0; k < embedding_dim; ++k) {
        const double diff = orbit(i, k) - orbit(j, k);
        d2 += diff * diff;
      }
      if (d2 < best) {
        best = d2;
        best_j = j;
      }
    }
    nn[i] = best_j;
  }

  const int valid_last = m - traj_len;
  std::vector<int> refs;
  for (int i = 0; i < valid_last; ++i)
    if (nn[i] >= 0 && nn[i] < valid_last) refs.push_back(i);
  if (refs.empty()) throw EstimationError("no valid neighbor pairs");

  if (ref_fraction < 1.0) {
    const std::size_t keep =
        std::max<std::size_t>(1, static_cast<std::size_t>(refs.size() * ref_fraction));
    rng.shuffle(refs);
    refs.resize(keep);
  }

  std::vector<double> divergence(traj_len);
  for (int t = 0; t < traj_len; ++t) {
    double acc = 0.0;
    int cnt = 0;
    for (int i : refs) {
      double d2 = 0.0;
      for (int k = 0; k < embedding_dim; ++k) {
        const double diff = orbit(i + t, k) - orbit(nn[i] + t, k);
        d2 += diff * diff;
      }
      if (d2 > 0.0) {
        acc += 0.5 * std::log(d2);
        ++cnt;
      }
    }
    if (cnt == 0) throw EstimationError("all neighbor distances vanished");
    divergence[t] = acc / cnt;
  }

  // least-squares slope of divergence vs step index
  const double tbar = 0.5 * (traj_len - 1);
  const double dbar = std::accumulate(divergence.begin(), divergence.end(), 0.0) / traj_len;
  double sxy = 0.0, sxx = 0.0;
  for (int t = 0; t < traj_len; ++t) {
    sxy += (t - tbar) * (divergence[t] - dbar);
    sxx += (t - tbar) * (t - tbar);
  }
  return sxy / sxx;
}

SeriesStats dataset_stats(const data::TimeSeries& series, std::uint64_t seed) {
  const data::TimeSeries scaled = data::minmax_scale(series);
  const int d = series.d;
  const int emb = 2 * d + 1;

  SeriesStats st;
  double mp_sum = 0.0, lag_sum = 0.0, lam_sum = 0.0;
  for (int dim = 0; dim < d; ++dim) {
    const std::vector<double> col = scaled.column(dim);
    const double mp = mean_period(col);
    const int lag = autocorr_lag(col);
    const int tsep = static_cast<int>(std::lround(mp));
    const int traj = static_cast<int>(std::ceil(mp));

    double lam_dim = 0.0;
    for (int run = 0; run < kRosensteinRuns; ++run) {
      Rng rng = Rng::child(seed, static_cast<std::uint64_t>(dim) * kRosensteinRuns + run);
      lam_dim += rosenstein_lyapunov(col, emb, tsep, lag, traj, rng);
    }
    lam_dim /= kRosensteinRuns;

    st.mean_period_per_dim.push_back(mp);
    st.lag_per_dim.push_back(lag);
    st.exponent_per_dim.push_back(lam_dim);
    mp_sum += mp;
    lag_sum += lag;
    lam_sum += lam_dim;
  }

  st.mean_period = mp_sum / d;
  st.lag = std::max(1, static_cast<int>(std::lround(lag_sum / d)));
  st.lyapunov_exponent = lam_sum / d;
  if (st.lyapunov_exponent <= 0.0)
    throw EstimationError("non-positive Lyapunov exponent on benchmark series");
  st.lyapunov_time = 1.0 / st.lyapunov_exponent;
  return st;
}

}  // namespace qts::stats
