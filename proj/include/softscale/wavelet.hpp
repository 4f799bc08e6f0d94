#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softscale/orthobasis.hpp"

namespace softscale::wavelet {

/// Orthogonal low-pass filter and its quadrature-mirror high-pass partner
/// g_i = (-1)^i h_{L-1-i}.
struct WaveletFilter {
  std::vector<double> lowpass;
  std::vector<double> highpass;

  static WaveletFilter from_lowpass(std::vector<double> taps);
  std::size_t length() const noexcept { return lowpass.size(); }
};

/// The 8-tap orthogonal Daubechies filter (four vanishing moments).
WaveletFilter daubechies8();

/// Periodic DWT coefficients down to level `coarsest_level` (J0).
///
/// `details[i]` holds the detail block of level J0 + i, so the blocks run
/// coarse to fine and block i has length 2^(J0 + i).
struct WaveletCoeffs {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
  int levels = 0;          // J, with n = 2^J
  int coarsest_level = 0;  // J0

  std::size_t size() const noexcept { return std::size_t{1} << levels; }

  /// (approx, d_J0, d_J0+1, ..., d_J-1) as one n-vector.
  std::vector<double> flatten() const;
  static WaveletCoeffs unflatten(std::span<const double> w, int levels, int coarsest_level);

  /// Finest-scale detail block d_{J-1}; empty when J0 == J.
  std::span<const double> finest_details() const;
};

/// Returns J for n = 2^J; throws std::invalid_argument otherwise.
int log2_exact(std::size_t n);

WaveletCoeffs dwt_decompose(std::span<const double> y, const WaveletFilter& filter,
                            int coarsest_level);
std::vector<double> dwt_reconstruct(const WaveletCoeffs& w, const WaveletFilter& filter);

/// Explicit orthonormal matrix H_J0 (row-major, n x n) with flatten(decompose(y)) = H y.
/// Built as a product of periodised per-level analysis matrices rather than by
/// running the cascade; quadratic memory, meant for small n.
std::vector<double> analysis_matrix(std::size_t n, const WaveletFilter& filter,
                                    int coarsest_level);

/// Flattened DWT behind the shared orthonormal-transform contract.
class WaveletTransform final : public OrthonormalTransform {
 public:
  WaveletTransform(std::size_t n, WaveletFilter filter, int coarsest_level);

  std::size_t size() const noexcept override { return n_; }
  std::vector<double> forward(std::span<const double> y) const override;
  std::vector<double> inverse(std::span<const double> z) const override;

  int levels() const noexcept { return levels_; }
  int coarsest_level() const noexcept { return coarsest_level_; }
  std::size_t approx_size() const noexcept { return std::size_t{1} << coarsest_level_; }

 private:
  std::size_t n_;
  int levels_;
  int coarsest_level_;
  WaveletFilter filter_;
};

}  // namespace softscale::wavelet
