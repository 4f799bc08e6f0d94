#include "softscale/orthobasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace softscale {

CoeffSet::CoeffSet(std::vector<double> z, std::optional<double> sigma_)
    : sigma(sigma_), z_(std::move(z)), order_(z_.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    return std::abs(z_[a]) > std::abs(z_[b]);
  });
}

int CoeffSet::sign(std::size_t j) const {
  const double v = z_[j];
  return (v > 0.0) - (v < 0.0);
}

double CoeffSet::squared_norm() const {
  double s = 0.0;
  for (double v : z_) s += v * v;
  return s;
}

DesignMatrix::DesignMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_)
    throw std::invalid_argument("design matrix: expected " + std::to_string(n_ * n_) +
                                " entries, got " + std::to_string(entries_.size()));
}

double DesignMatrix::orthogonality_error() const {
  double worst = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a; b < n_; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n_; ++i) dot += (*this)(i, a) * (*this)(i, b);
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot * inv_n - target));
    }
  }
  return worst;
}

DesignMatrix trig_design_matrix(std::size_t n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("trig design matrix needs an even n >= 4, got " +
                                std::to_string(n));
  std::vector<double> g(n * n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = step * static_cast<double>(i);
    for (std::size_t k = 1; k <= n; ++k) {
      double v;
      if (k == 1) {
        v = 1.0;
      } else if (k == n) {
        v = std::cos(static_cast<double>(k) * x / 2.0);
      } else if (k % 2 == 0) {
        v = std::numbers::sqrt2 * std::cos(static_cast<double>(k) * x / 2.0);
      } else {
        v = std::numbers::sqrt2 * std::sin(static_cast<double>(k - 1) * x / 2.0);
      }
      g[i * n + (k - 1)] = v;
    }
  }
  return DesignMatrix(n, std::move(g));
}

namespace {

void check_length(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                std::to_string(expected) + ", got " + std::to_string(got) + ")");
}

}  // namespace

CoeffSet forward(const DesignMatrix& g, std::span<const double> y) {
  const std::size_t n = g.size();
  check_length(n, y.size(), "forward");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = y[i];
    const double* row = g.entries().data() + i * n;
    for (std::size_t j = 0; j < n; ++j) z[j] += row[j] * yi;
  }
  for (double& v : z) v *= scale;
  return CoeffSet(std::move(z));
}

std::vector<double> inverse(const DesignMatrix& g, std::span<const double> z) {
  const std::size_t n = g.size();
  check_length(n, z.size(), "inverse");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = g.entries().data() + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * z[j];
    y[i] = s * scale;
  }
  return y;
}

std::vector<double> TrigTransform::forward(std::span<const double> y) const {
  const CoeffSet c = softscale::forward(g_, y);
  return {c.values().begin(), c.values().end()};
}

std::vector<double> TrigTransform::inverse(std::span<const double> z) const {
  return softscale::inverse(g_, z);
}

}  // namespace softscale
