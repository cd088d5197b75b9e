#include <cmath>
#include <vector>

#include "doctest.h"
#include "qts/data/generators.hpp"
#include "qts/errors.hpp"
#include "qts/rng.hpp"
#include "qts/stats/stats.hpp"

using namespace qts;
using namespace qts::stats;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> sine(int n, double period, double amp = 1.0, double offset = 0.0) {
  std::vector<double> s(n);
  for (int t = 0; t < n; ++t) s[t] = offset + amp * std::sin(2 * kPi * t / period);
  return s;
}
}  // namespace

TEST_SUITE("chaostats") {

TEST_CASE("mean period recovers pure sinusoid periods") {
  for (double P : {10.0, 20.0, 50.0}) {
    const double mp = mean_period(sine(1000, P));
    CHECK(mp == doctest::Approx(P).epsilon(0.05));
  }
}

TEST_CASE("mean period of a two-tone signal sits between the tones") {
  auto a = sine(1000, 10.0);
  auto b = sine(1000, 40.0);
  std::vector<double> mix(1000);
  for (int t = 0; t < 1000; ++t) mix[t] = a[t] + b[t];
  const double mp = mean_period(mix);
  CHECK(mp > 10.0);
  CHECK(mp < 40.0);
}

TEST_CASE("mean period rejects degenerate input") {
  CHECK_THROWS_AS(mean_period(std::vector<double>(100, 0.0)), DegenerateDataError);
  CHECK_THROWS_AS(mean_period({1.0, 1.0}), ConfigError);  // below minimum length
}

TEST_CASE("autocorrelation lag basics") {
  // Alternating signal decorrelates immediately.
  std::vector<double> alt(200);
  for (int t = 0; t < 200; ++t) alt[t] = (t % 2 == 0) ? 1.0 : -1.0;
  CHECK(autocorr_lag(alt) == 1);

  // Slow sinusoids: lag grows with the period and is never zero.
  const int lag20 = autocorr_lag(sine(1000, 20.0));
  const int lag80 = autocorr_lag(sine(1000, 80.0));
  CHECK(lag20 >= 1);
  CHECK(lag80 > lag20);

  // A constant signal never crosses the threshold.
  CHECK_THROWS_AS(autocorr_lag(std::vector<double>(100, 3.0)), EstimationError);
}

TEST_CASE("divergence estimate vanishes on a periodic signal") {
  Rng rng(3);
  // Incommensurate period so neighbors are genuinely distinct orbit points
  // (a grid-aligned period would make distances pure rounding noise), and a
  // fit window of two periods so the oscillating divergence averages out.
  const auto s = sine(800, 25.7);
  const double lam = rosenstein_lyapunov(s, 3, 26, 6, 51, rng);
  CHECK(std::abs(lam) < 0.01);
}

TEST_CASE("divergence estimate is deterministic per seed") {
  auto series = data::gen_henon(600).column(0);
  Rng a(42), b(42), c(43);
  const double la = rosenstein_lyapunov(series, 5, 4, 1, 5, a);
  const double lb = rosenstein_lyapunov(series, 5, 4, 1, 5, b);
  const double lc = rosenstein_lyapunov(series, 5, 4, 1, 5, c);
  CHECK(la == lb);
  CHECK(la != lc);  // different subsample, different estimate
  CHECK(la > 0.0);
}

TEST_CASE("divergence estimate fails cleanly without neighbor pairs") {
  auto series = data::gen_henon(60).column(0);
  Rng rng(1);
  // min_tsep so large no admissible neighbor pair survives
  CHECK_THROWS_AS(rosenstein_lyapunov(series, 5, 500, 1, 5, rng), EstimationError);
}

TEST_CASE("benchmark series statistics land in the published windows") {
  // 1000-point benchmark datasets, scaled as in the pipeline.
  auto mg = data::minmax_scale(data::gen_mackey_glass(1000));
  auto mg_stats = dataset_stats(mg, 0);
  CHECK(mg_stats.mean_period > 0.9 * 44.0);
  CHECK(mg_stats.mean_period < 1.1 * 44.0);
  CHECK(mg_stats.lyapunov_time > 0.7 * 140.0);
  CHECK(mg_stats.lyapunov_time < 1.3 * 140.0);
  CHECK(mg_stats.lag >= 1);

  auto he = data::minmax_scale(data::gen_henon(1000));
  auto he_stats = dataset_stats(he, 0);
  CHECK(he_stats.mean_period > 3.0);
  CHECK(he_stats.mean_period < 5.0);
  CHECK(he_stats.lyapunov_time > 0.7 * 3.4);
  CHECK(he_stats.lyapunov_time < 1.3 * 3.4);
  CHECK(he_stats.mean_period_per_dim.size() == 2);
  CHECK(he_stats.exponent_per_dim.size() == 2);

  auto lo = data::minmax_scale(data::gen_lorenz(1000));
  auto lo_stats = dataset_stats(lo, 0);
  CHECK(lo_stats.lyapunov_time > 0.7 * 25.0);
  CHECK(lo_stats.lyapunov_time < 1.3 * 25.0);
  CHECK(lo_stats.mean_period > 0.0);
  CHECK(lo_stats.lyapunov_exponent == doctest::Approx(1.0 / lo_stats.lyapunov_time));
}

TEST_CASE("dataset statistics are deterministic per seed") {
  auto he = data::minmax_scale(data::gen_henon(1000));
  auto a = dataset_stats(he, 7);
  auto b = dataset_stats(he, 7);
  CHECK(a.lyapunov_exponent == b.lyapunov_exponent);
  CHECK(a.mean_period == b.mean_period);
  CHECK(a.lag == b.lag);
}

}  // TEST_SUITE
