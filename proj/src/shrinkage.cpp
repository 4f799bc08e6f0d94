#include "softscale/shrinkage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace softscale {

namespace {

void require_nonnegative(double theta) {
  if (!(theta >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
}

double signum(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

// Active coordinates must clear the threshold and carry the soft-thresholded
// value; anything else means the fit was built from different coefficients.
void require_consistent(const LstFit& fit, const CoeffSet& z) {
  if (fit.coeffs.size() != z.size())
    throw std::invalid_argument("fit and coefficients have different lengths");
  if (fit.active.size() != fit.k)
    throw std::invalid_argument("fit active set size does not match k");
  for (std::size_t j : fit.active) {
    if (j >= z.size()) throw std::invalid_argument("fit active index out of range");
    const double mag = std::abs(z[j]);
    const double expect = signum(z[j]) * (mag - fit.threshold);
    if (mag < fit.threshold || std::abs(fit.coeffs[j] - expect) > 1e-12 * (1.0 + mag))
      throw std::invalid_argument("fit is inconsistent with coefficients at index " +
                                  std::to_string(j));
  }
}

LstFit fit_at_rank(const CoeffSet& z, std::size_t k) {
  LstFit fit;
  fit.k = k;
  fit.threshold = z.magnitude_at_rank(k);
  fit.coeffs.assign(z.size(), 0.0);
  fit.active.assign(z.order().begin(), z.order().begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t j : fit.active)
    fit.coeffs[j] = signum(z[j]) * (std::abs(z[j]) - fit.threshold);
  return fit;
}

}  // namespace

std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::none: return "none";
    case Scaling::ssp: return "ssp";
    case Scaling::adaptive: return "adaptive";
  }
  return "?";
}

std::string_view to_string(SspFormula f) {
  return f == SspFormula::orthonormal ? "orthonormal" : "paper-literal";
}

std::vector<double> soft_threshold(std::span<const double> z, double theta) {
  require_nonnegative(theta);
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double shrunk = std::abs(z[j]) - theta;
    out[j] = shrunk > 0.0 ? signum(z[j]) * shrunk : 0.0;
  }
  return out;
}

std::vector<double> hard_threshold(std::span<const double> z, double theta) {
  require_nonnegative(theta);
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = std::abs(z[j]) > theta ? z[j] : 0.0;
  return out;
}

LstFit lst_fit(const CoeffSet& z, std::size_t k) {
  if (z.size() == 0 || k >= z.size())
    throw std::out_of_range("lst_fit: k=" + std::to_string(k) + " outside [0, " +
                            std::to_string(z.size()) + ")");
  return fit_at_rank(z, k);
}

std::vector<LstFit> lst_path(const CoeffSet& z, std::size_t kmax) {
  if (z.size() == 0 || kmax >= z.size())
    throw std::out_of_range("lst_path: kmax=" + std::to_string(kmax) + " outside [0, " +
                            std::to_string(z.size()) + ")");
  std::vector<LstFit> path;
  path.reserve(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) path.push_back(fit_at_rank(z, k));
  return path;
}

ScaledFit unscaled(const LstFit& fit) {
  ScaledFit out;
  out.base = fit;
  out.alphas.assign(fit.coeffs.size(), 1.0);
  out.scaled = fit.coeffs;
  out.variant = Scaling::none;
  return out;
}

ScaledFit adaptive_scale(const LstFit& fit, const CoeffSet& z, double fallback) {
  require_consistent(fit, z);
  ScaledFit out;
  out.base = fit;
  out.variant = Scaling::adaptive;
  out.alphas.assign(z.size(), 1.0);
  out.scaled.assign(z.size(), 0.0);
  for (std::size_t j : fit.active) {
    const double mag = std::abs(z[j]);
    const double alpha = mag > 0.0 ? 1.0 + fit.threshold / mag : fallback;
    out.alphas[j] = alpha;
    out.scaled[j] = alpha * fit.coeffs[j];
  }
  return out;
}

ScaledFit fixed_scale(const LstFit& fit, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("scaling value must be positive and finite");
  ScaledFit out;
  out.base = fit;
  out.variant = Scaling::ssp;
  out.alphas.assign(fit.coeffs.size(), 1.0);
  out.scaled.assign(fit.coeffs.size(), 0.0);
  for (std::size_t j : fit.active) {
    out.alphas[j] = alpha;
    out.scaled[j] = alpha * fit.coeffs[j];
  }
  return out;
}

ScaledFit ssp_scale(const LstFit& fit, const CoeffSet& z, double sigma2_hat, SspFormula formula) {
  if (!(sigma2_hat >= 0.0)) throw std::invalid_argument("ssp_scale: negative variance estimate");
  require_consistent(fit, z);
  if (fit.k == 0) return unscaled(fit);

  double cross = 0.0;
  double energy = 0.0;
  for (std::size_t j : fit.active) {
    cross += fit.coeffs[j] * z[j];
    energy += fit.coeffs[j] * fit.coeffs[j];
  }
  const double k = static_cast<double>(fit.k);
  double alpha;
  if (formula == SspFormula::orthonormal) {
    // A zero threshold leaves the fit unshrunk; energy > 0 whenever the
    // active coefficients are nonzero.
    if (energy == 0.0) return unscaled(fit);
    alpha = (cross + sigma2_hat * k) / energy;
  } else {
    // b / sqrt(n) against z / sigma-hat.
    const double n = static_cast<double>(z.size());
    const double sigma_hat = std::sqrt(sigma2_hat);
    if (energy == 0.0 || sigma_hat == 0.0)
      throw std::invalid_argument("ssp_scale: mixed-scale form needs positive variance");
    alpha = (cross / (std::sqrt(n) * sigma_hat) + sigma2_hat * k / n) / (energy / n);
  }
  return fixed_scale(fit, alpha);
}

double universal_threshold(std::size_t n, double sigma2_hat) {
  if (n < 2) throw std::invalid_argument("universal threshold needs n >= 2");
  if (!(sigma2_hat > 0.0)) throw std::invalid_argument("universal threshold needs positive variance");
  return std::sqrt(2.0 * sigma2_hat * std::log(static_cast<double>(n)));
}

LstFit universal_fit(const CoeffSet& z, double sigma2_hat) {
  const double theta = universal_threshold(z.size(), sigma2_hat);
  LstFit fit;
  fit.threshold = theta;
  fit.coeffs = soft_threshold(z.values(), theta);
  for (std::size_t j : z.order()) {
    if (std::abs(z[j]) <= theta) break;
    fit.active.push_back(j);
  }
  fit.k = fit.active.size();
  return fit;
}

}  // namespace softscale
