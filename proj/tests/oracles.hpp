#pragma once

// Independent reference implementations used by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "trajkit/semantic.hpp"

namespace oracle {

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Natural cubic spline in first-derivative (slope) form, evaluated as piecewise Hermite.
class SlopeSpline {
 public:
  SlopeSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    auto h = [&](std::size_t i) { return x_[i + 1] - x_[i]; };
    a[0][0] = 2.0;
    a[0][1] = 1.0;
    b[0] = 3.0 * (y_[1] - y_[0]) / h(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      a[i][i - 1] = 1.0 / h(i - 1);
      a[i][i] = 2.0 * (1.0 / h(i - 1) + 1.0 / h(i));
      a[i][i + 1] = 1.0 / h(i);
      b[i] = 3.0 * ((y_[i] - y_[i - 1]) / (h(i - 1) * h(i - 1)) + (y_[i + 1] - y_[i]) / (h(i) * h(i)));
    }
    a[n - 1][n - 2] = 1.0;
    a[n - 1][n - 1] = 2.0;
    b[n - 1] = 3.0 * (y_[n - 1] - y_[n - 2]) / h(n - 2);
    k_ = solve_dense(std::move(a), std::move(b));
  }

  double operator()(double t) const {
    std::size_t j = 0;
    while (j + 2 < x_.size() && t > x_[j + 1]) ++j;
    const double h = x_[j + 1] - x_[j];
    const double s = (t - x_[j]) / h;
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * y_[j] + h10 * h * k_[j] + h01 * y_[j + 1] + h11 * h * k_[j + 1];
  }

 private:
  std::vector<double> x_, y_, k_;
};

inline double naive_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Hampel identifier recomputed per window with full sorts.
inline std::vector<bool> naive_hampel(const std::vector<std::optional<double>>& x, std::size_t k, double n_sigmas) {
  std::vector<bool> out(x.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    std::vector<double> w;
    for (std::size_t j = (i >= k ? i - k : 0); j <= std::min(x.size() - 1, i + k); ++j) {
      if (x[j]) w.push_back(*x[j]);
    }
    const double m = naive_median(w);
    std::vector<double> dev;
    for (double v : w) dev.push_back(std::abs(v - m));
    out[i] = std::abs(*x[i] - m) > n_sigmas * 1.4826 * naive_median(dev);
  }
  return out;
}

// Winding number of a ring around (x, y); nonzero means enclosed.
inline int winding_number(double x, double y, const std::vector<trajkit::LonLat>& ring) {
  int wn = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % n];
    const double cross = (b.lon - a.lon) * (y - a.lat) - (x - a.lon) * (b.lat - a.lat);
    if (a.lat <= y) {
      if (b.lat > y && cross > 0) ++wn;
    } else if (b.lat <= y && cross < 0) {
      --wn;
    }
  }
  return wn;
}

// Euclidean distance from (x, y) to the nearest edge of a ring, in degrees.
inline double distance_to_ring(double x, double y, const std::vector<trajkit::LonLat>& ring) {
  double best = INFINITY;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    const double dx = b.lon - a.lon, dy = b.lat - a.lat;
    const double len2 = dx * dx + dy * dy;
    double s = len2 > 0 ? ((x - a.lon) * dx + (y - a.lat) * dy) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, std::hypot(x - (a.lon + s * dx), y - (a.lat + s * dy)));
  }
  return best;
}

// Convex hull (monotone chain), counter-clockwise.
inline std::vector<trajkit::LonLat> convex_hull(std::vector<trajkit::LonLat> p) {
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.lon < b.lon || (a.lon == b.lon && a.lat < b.lat); });
  auto cross = [](const trajkit::LonLat& o, const trajkit::LonLat& a, const trajkit::LonLat& b) {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
  };
  std::vector<trajkit::LonLat> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace oracle
