#include "qts/data/generators.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qts/errors.hpp"

namespace qts::data {

std::vector<double> TimeSeries::column(int dim) const {
  std::vector<double> c(n_points);
  for (int t = 0; t < n_points; ++t) c[t] = at(t, dim);
  return c;
}

TimeSeries gen_mackey_glass(int n_points) {
  if (n_points < 1) throw ConfigError("n_points must be >= 1");
  constexpr double alpha = 0.2, gamma = 0.1, tau = 17.0, x0 = 1.2;
  constexpr int power = 10;

  std::vector<double> xs;
  xs.reserve(n_points);
  xs.push_back(x0);

  // x(t) for real t <= current grid point; constant x0 before t = 0
  auto delayed = [&xs](double t) {
    if (t <= 0.0) return x0;
    const double fi = std::floor(t);
    const int i = static_cast<int>(fi);
    const double frac = t - fi;
    if (frac == 0.0) return xs[i];
    return xs[i] + frac * (xs[i + 1] - xs[i]);
  };
  auto f = [&](double x, double xd) {
    double xdp = 1.0;
    for (int j = 0; j < power; ++j) xdp *= xd;
    return alpha * xd / (1.0 + xdp) - gamma * x;
  };

  for (int t = 0; t + 1 < n_points; ++t) {
    const double x = xs[t];
    const double d0 = delayed(t - tau);
    const double dh = delayed(t - tau + 0.5);
    const double d1 = delayed(t - tau + 1.0);
    const double k1 = f(x, d0);
    const double k2 = f(x + 0.5 * k1, dh);
    const double k3 = f(x + 0.5 * k2, dh);
    const double k4 = f(x + k3, d1);
    xs.push_back(x + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
  }

  TimeSeries s;
  s.generator_id = "mackey_glass";
  s.d = 1;
  s.n_points = n_points;
  s.data = std::move(xs);
  return s;
}

TimeSeries gen_henon(int n_points) {
  if (n_points < 1) throw ConfigError("n_points must be >= 1");
  TimeSeries s;
  s.generator_id = "henon";
  s.d = 2;
  s.n_points = n_points;
  s.data.reserve(2 * static_cast<std::size_t>(n_points));
  double x = 0.0, y = 0.0;
  for (int t = 0; t < n_points; ++t) {
    s.data.push_back(x);
    s.data.push_back(y);
    const double nx = 1.0 - 1.4 * x * x + y;
    y = 0.3 * x;
    x = nx;
  }
  return s;
}

namespace {

struct V3 {
  double x, y, z;
};

V3 lorenz_deriv(const V3& s) {
  constexpr double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
  return {sigma * (s.y - s.x), s.x * (rho - s.z) - s.y, s.x * s.y - beta * s.z};
}

V3 rk4_step(const V3& s, double h) {
  const V3 k1 = lorenz_deriv(s);
  const V3 s2{s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y, s.z + 0.5 * h * k1.z};
  const V3 k2 = lorenz_deriv(s2);
  const V3 s3{s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y, s.z + 0.5 * h * k2.z};
  const V3 k3 = lorenz_deriv(s3);
  const V3 s4{s.x + h * k3.x, s.y + h * k3.y, s.z + h * k3.z};
  const V3 k4 = lorenz_deriv(s4);
  return {s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          s.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

}  // namespace

TimeSeries gen_lorenz(int n_points) {
  if (n_points < 1) throw ConfigError("n_points must be >= 1");
  constexpr double h = 0.03;
  constexpr int discard = 500;

  TimeSeries s;
  s.generator_id = "lorenz";
  s.d = 3;
  s.n_points = n_points;
  s.data.reserve(3 * static_cast<std::size_t>(n_points));

  V3 st{1.0, 1.0, 1.0};
  for (int t = 0; t < discard; ++t) st = rk4_step(st, h);
  for (int t = 0; t < n_points; ++t) {
    s.data.push_back(st.x);
    s.data.push_back(st.y);
    s.data.push_back(st.z);
    st = rk4_step(st, h);
  }
  return s;
}

TimeSeries minmax_scale(const TimeSeries& series, ScaleInfo* info) {
  ScaleInfo si;
  si.min.assign(series.d, 0.0);
  si.max.assign(series.d, 0.0);
  for (int dim = 0; dim < series.d; ++dim) {
    double lo = series.at(0, dim), hi = lo;
    for (int t = 1; t < series.n_points; ++t) {
      const double v = series.at(t, dim);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi == lo) throw DegenerateDataError("constant dimension cannot be min-max scaled");
    si.min[dim] = lo;
    si.max[dim] = hi;
  }

  TimeSeries out = series;
  for (int t = 0; t < series.n_points; ++t)
    for (int dim = 0; dim < series.d; ++dim)
      out.data[static_cast<std::size_t>(t) * series.d + dim] =
          (series.at(t, dim) - si.min[dim]) / (si.max[dim] - si.min[dim]);
  if (info) *info = std::move(si);
  return out;
}

std::vector<double> minmax_invert(const ScaleInfo& info, const std::vector<double>& scaled_row) {
  if (scaled_row.size() != info.min.size()) throw ConfigError("scale info dimension mismatch");
  std::vector<double> out(scaled_row.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = info.min[i] + scaled_row[i] * (info.max[i] - info.min[i]);
  return out;
}

std::string to_csv(const TimeSeries& series) {
  std::ostringstream os;
  os << "t";
  for (int dim = 1; dim <= series.d; ++dim) os << ",x" << dim;
  os << "\n";
  char buf[32];
  for (int t = 0; t < series.n_points; ++t) {
    os << t;
    for (int dim = 0; dim < series.d; ++dim) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, series.at(t, dim));
      os << ',';
      os.write(buf, end - buf);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qts::data
