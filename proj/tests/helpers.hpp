#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Shared test utilities: KS statistics and small quadrature oracles.
// Deliberately independent of the library's own numerics.

namespace testutil {

// One-sample Kolmogorov-Smirnov distance against a CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double F = cdf(xs[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - F));
    d = std::max(d, std::abs(static_cast<double>(i) / n - F));
  }
  return d;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Gauss-Legendre nodes/weights on [-1,1], n in {1..8} (hard-coded classics).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on Legendre polynomials; plenty for the n used in tests.
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Integrate f over [lo,hi] with np panels of n-point Gauss-Legendre.
inline double integrate(const std::function<double(double)>& f, double lo, double hi, int panels,
                        int n = 8) {
  std::vector<double> xs, ws;
  gauss_legendre(n, xs, ws);
  double total = 0.0;
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h, mid = a + 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += ws[i] * f(mid + 0.5 * h * xs[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace testutil
