// Slow, independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "softscale/random.hpp"

namespace oracle {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  softscale::NormalSource normal(seed);
  std::vector<double> v(n);
  for (double& x : v) x = sd * normal();
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double energy(std::span<const double> v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

// argmin_b 0.5 (b - z)^2 + theta |b| by scanning [-5, 5] with step 1e-4,
// refined by a finer scan around the coarse winner.
inline double lasso_grid(double z, double theta) {
  auto objective = [&](double b) { return 0.5 * (b - z) * (b - z) + theta * std::abs(b); };
  double best = 0.0, best_val = objective(0.0);
  for (long i = -50000; i <= 50000; ++i) {
    const double b = static_cast<double>(i) * 1e-4;
    if (const double v = objective(b); v < best_val) best = b, best_val = v;
  }
  const double centre = best;
  for (long i = -1000; i <= 1000; ++i) {
    const double b = centre + static_cast<double>(i) * 1e-7;
    if (const double v = objective(b); v < best_val) best = b, best_val = v;
  }
  return best;
}

// LST fit by brute force: count how many |z| are strictly larger.
inline std::vector<double> lst_bruteforce(std::span<const double> z, std::size_t k) {
  std::vector<double> mags;
  for (double v : z) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double t = mags[k];
  std::vector<double> b(z.size(), 0.0);
  for (std::size_t j = 0; j < z.size(); ++j)
    if (std::abs(z[j]) > t) b[j] = (z[j] > 0 ? 1.0 : -1.0) * (std::abs(z[j]) - t);
  return b;
}

// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov-Smirnov statistic of a sample against N(mean, sd^2).
inline double ks_normal(std::vector<double> x, double mean, double sd) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = phi((x[i] - mean) / sd);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace oracle
