#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace softscale {

/// Orthonormal-domain coefficients together with their magnitude ordering.
///
/// Indices are 0-based. `order()[r]` is the index of the (r+1)-th largest
/// |z|; equal magnitudes are ordered by smaller index first so that every
/// downstream order statistic is reproducible.
class CoeffSet {
 public:
  CoeffSet() = default;
  explicit CoeffSet(std::vector<double> z, std::optional<double> sigma = std::nullopt);

  std::size_t size() const noexcept { return z_.size(); }
  std::span<const double> values() const noexcept { return z_; }
  double operator[](std::size_t j) const { return z_[j]; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

  // -1, 0 or +1.
  int sign(std::size_t j) const;

  // |z| of the coefficient at 0-based rank r.
  double magnitude_at_rank(std::size_t r) const { return std::abs(z_[order_[r]]); }

  double squared_norm() const;

  // Noise standard deviation per coefficient, when known or estimated.
  std::optional<double> sigma;

 private:
  std::vector<double> z_;
  std::vector<std::size_t> order_;
};

/// Contract shared by every orthonormal analysis/synthesis pair.
/// forward() must preserve the Euclidean norm and inverse() must undo it.
class OrthonormalTransform {
 public:
  virtual ~OrthonormalTransform() = default;
  virtual std::size_t size() const noexcept = 0;
  virtual std::vector<double> forward(std::span<const double> y) const = 0;
  virtual std::vector<double> inverse(std::span<const double> z) const = 0;
};

/// n x n design matrix with G'G = n I, stored row-major: entry (i, j) is
/// g_j(x_i).
class DesignMatrix {
 public:
  DesignMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  // max |(G'G / n - I)_{ij}|
  double orthogonality_error() const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Trigonometric basis on x_i = 2 pi i / n (i = 0..n-1), n even and >= 4.
///
/// With 1-based column index k:
///   k = 1          constant 1
///   k even, k < n  sqrt(2) cos(k x / 2)
///   k odd,  k > 1  sqrt(2) sin((k - 1) x / 2)
///   k = n          cos(n x / 2)
/// Throws std::invalid_argument for odd or too-small n.
DesignMatrix trig_design_matrix(std::size_t n);

/// z = G'y / sqrt(n), the orthonormal rescaling of the least-squares fit.
CoeffSet forward(const DesignMatrix& g, std::span<const double> y);

/// y = G z / sqrt(n).
std::vector<double> inverse(const DesignMatrix& g, std::span<const double> z);

class TrigTransform final : public OrthonormalTransform {
 public:
  explicit TrigTransform(std::size_t n) : g_(trig_design_matrix(n)) {}

  std::size_t size() const noexcept override { return g_.size(); }
  std::vector<double> forward(std::span<const double> y) const override;
  std::vector<double> inverse(std::span<const double> z) const override;
  const DesignMatrix& matrix() const noexcept { return g_; }

 private:
  DesignMatrix g_;
};

}  // namespace softscale
