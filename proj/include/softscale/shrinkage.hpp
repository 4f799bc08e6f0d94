#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "softscale/orthobasis.hpp"

namespace softscale {

/// sign(z_j) (|z_j| - theta)_+ per coordinate. Throws on negative theta.
std::vector<double> soft_threshold(std::span<const double> z, double theta);

/// z_j if |z_j| > theta, else 0. Throws on negative theta.
std::vector<double> hard_threshold(std::span<const double> z, double theta);

/// One point on the LARS soft-thresholding path.
///
/// At step k the threshold is the (k+1)-th largest |z| and exactly the k
/// largest coefficients survive, each shifted toward zero by the threshold.
struct LstFit {
  std::size_t k = 0;
  double threshold = 0.0;
  std::vector<std::size_t> active;  // in decreasing-|z| order
  std::vector<double> coeffs;       // b
};

enum class Scaling { none, ssp, adaptive };

std::string_view to_string(Scaling s);

/// An LstFit after per-component rescaling. Inactive components carry
/// alpha = 1 and stay at zero, so scaling never changes the active set.
struct ScaledFit {
  LstFit base;
  std::vector<double> alphas;
  std::vector<double> scaled;
  Scaling variant = Scaling::none;
};

/// How the single scaling value of LST-SSP is computed.
///   orthonormal:   (sum b_j z_j + s2 k) / sum b_j^2
///   mixed_scale:   (sum b z / (sqrt(n) s) + s2 k / n) / (sum b^2 / n), which
///                  mixes unit-variance and per-sample scales; for comparison only.
enum class SspFormula { orthonormal, mixed_scale };

std::string_view to_string(SspFormula f);

/// Fit at step k in [0, n-1]. Throws std::out_of_range otherwise.
LstFit lst_fit(const CoeffSet& z, std::size_t k);

/// Fits for k = 0..kmax from a single ordering of |z|; kmax <= n-1.
std::vector<LstFit> lst_path(const CoeffSet& z, std::size_t kmax);

/// LST fit with no scaling (alphas all 1).
ScaledFit unscaled(const LstFit& fit);

/// Adaptive scaling: alpha_j = 1 + t_k / |z_j| on the active set, so the
/// scaled coefficient is z_j - t_k^2 / z_j. `fallback` is the value the
/// definition assigns when z_j = 0; such a coordinate can never be active,
/// so it does not reach the output.
ScaledFit adaptive_scale(const LstFit& fit, const CoeffSet& z, double fallback = 1.0);

/// Single data-driven scaling value applied to every active coefficient.
/// At k = 0 the result is the unscaled zero fit (variant none).
ScaledFit ssp_scale(const LstFit& fit, const CoeffSet& z, double sigma2_hat,
                    SspFormula formula = SspFormula::orthonormal);

/// Same as ssp_scale but with a caller-supplied alpha (used by the
/// fixed-alpha unbiasedness oracle).
ScaledFit fixed_scale(const LstFit& fit, double alpha);

/// sqrt(2 s2 log n)
double universal_threshold(std::size_t n, double sigma2_hat);

/// Soft-thresholding at the universal threshold; k counts the survivors.
LstFit universal_fit(const CoeffSet& z, double sigma2_hat);

}  // namespace softscale
