#include "softscale/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softscale/parallel.hpp"
#include "softscale/random.hpp"

namespace softscale {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::lst: return "lst";
    case Method::ssp: return "ssp";
    case Method::adaptive: return "adaptive";
    case Method::universal: return "universal";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "lst") return Method::lst;
  if (name == "ssp") return Method::ssp;
  if (name == "adaptive" || name == "as") return Method::adaptive;
  if (name == "universal" || name == "ust") return Method::universal;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(DfConvention c) {
  return c == DfConvention::k_factor ? "k-factor" : "paper-literal";
}

std::string_view to_string(NoiseMethod m) {
  switch (m) {
    case NoiseMethod::known: return "known";
    case NoiseMethod::mad: return "mad";
    case NoiseMethod::residual_regression: return "residual-regression";
  }
  return "?";
}

namespace {

void require_positive_variance(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw DegenerateVariance("noise variance must be positive, got " + std::to_string(sigma2));
}

double residual_energy(std::span<const double> fit, const CoeffSet& z) {
  if (fit.size() != z.size()) throw std::invalid_argument("fit and coefficients differ in length");
  double s = 0.0;
  for (std::size_t j = 0; j < fit.size(); ++j) {
    const double r = fit[j] - z[j];
    s += r * r;
  }
  return s;
}

void attach_loss(RiskRecord& rec, std::span<const double> fit, std::span<const double> truth) {
  if (!truth.empty()) rec.empirical_loss = empirical_loss(fit, truth);
}

double square(double v) { return v * v; }

}  // namespace

double empirical_loss(std::span<const double> fit, std::span<const double> truth) {
  if (fit.size() != truth.size() || fit.empty())
    throw std::invalid_argument("empirical_loss: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < fit.size(); ++j) s += square(fit[j] - truth[j]);
  return s / static_cast<double>(fit.size());
}

RiskRecord sure_lst(const LstFit& fit, const CoeffSet& z, double sigma2, DfConvention df,
                    std::span<const double> truth) {
  require_positive_variance(sigma2);
  const double n = static_cast<double>(z.size());
  const double dof = df == DfConvention::k_factor ? static_cast<double>(fit.k) : 1.0;
  RiskRecord rec;
  rec.k = fit.k;
  rec.variant = Method::lst;
  rec.criterion = residual_energy(fit.coeffs, z) / n - sigma2 + 2.0 * sigma2 * dof / n;
  attach_loss(rec, fit.coeffs, truth);
  return rec;
}

RiskRecord sure_ssp(const ScaledFit& sf, const CoeffSet& z, double sigma2, DfConvention df,
                    std::span<const double> truth) {
  require_positive_variance(sigma2);
  if (sf.variant == Scaling::adaptive)
    throw std::invalid_argument("sure_ssp: needs a single-scaling fit");
  const double alpha = sf.base.active.empty() ? 1.0 : sf.alphas[sf.base.active.front()];
  const double n = static_cast<double>(z.size());
  const double dof =
      df == DfConvention::k_factor ? alpha * static_cast<double>(sf.base.k) : alpha;
  RiskRecord rec;
  rec.k = sf.base.k;
  rec.variant = Method::ssp;
  rec.criterion = residual_energy(sf.scaled, z) / n - sigma2 + 2.0 * sigma2 * dof / n;
  attach_loss(rec, sf.scaled, truth);
  return rec;
}

RiskRecord sure_as(const ScaledFit& sf, const CoeffSet& z, double sigma2,
                   std::span<const double> truth) {
  require_positive_variance(sigma2);
  if (sf.variant != Scaling::adaptive && sf.base.k != 0)
    throw std::invalid_argument("sure_as: needs an adaptively scaled fit");
  const double n = static_cast<double>(z.size());
  double expansion = 0.0;
  for (std::size_t j : sf.base.active) expansion += square(sf.alphas[j] - 1.0);
  RiskRecord rec;
  rec.k = sf.base.k;
  rec.variant = Method::adaptive;
  rec.criterion = residual_energy(sf.scaled, z) / n - sigma2 +
                  2.0 * sigma2 * static_cast<double>(sf.base.k) / n +
                  2.0 * sigma2 * expansion / n;
  attach_loss(rec, sf.scaled, truth);
  return rec;
}

SteinReport stein_identity_check(std::size_t n, std::size_t k, std::span<const double> zeta,
                                 double sigma2, std::size_t reps, std::uint64_t seed,
                                 Scaling variant, unsigned workers) {
  if (n < 2 || k < 1 || k > n - 1)
    throw std::invalid_argument("stein_identity_check: need 1 <= k <= n-1");
  if (zeta.size() != n) throw std::invalid_argument("stein_identity_check: zeta must have length n");
  if (reps < 2) throw std::invalid_argument("stein_identity_check: need at least 2 replications");
  if (variant == Scaling::ssp)
    throw std::invalid_argument("stein_identity_check: variant must be none or adaptive");
  require_positive_variance(sigma2);

  const double sigma = std::sqrt(sigma2);
  std::vector<double> lhs(reps), rhs(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    NormalSource normal(seed + r);
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = zeta[j] + sigma * normal();
    const CoeffSet coeffs(std::move(z));
    const LstFit fit = lst_fit(coeffs, k);
    const ScaledFit sf = variant == Scaling::adaptive ? adaptive_scale(fit, coeffs) : unscaled(fit);
    double cross = 0.0;
    for (std::size_t j = 0; j < n; ++j) cross += (sf.scaled[j] - coeffs[j]) * (coeffs[j] - zeta[j]);
    double expansion = 0.0;
    for (std::size_t j : fit.active) expansion += square(sf.alphas[j] - 1.0);
    lhs[r] = cross / sigma2;
    rhs[r] = expansion - static_cast<double>(n - k);
  });

  auto mean_se = [reps](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / static_cast<double>(reps);
    double ss = 0.0;
    for (double x : v) ss += square(x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(reps - 1));
    return std::pair{mean, sd / std::sqrt(static_cast<double>(reps))};
  };
  std::vector<double> diff(reps);
  for (std::size_t r = 0; r < reps; ++r) diff[r] = lhs[r] - rhs[r];

  SteinReport out;
  out.n = n;
  out.k = k;
  out.reps = reps;
  out.variant = variant;
  std::tie(out.lhs_mean, out.lhs_se) = mean_se(lhs);
  std::tie(out.rhs_mean, out.rhs_se) = mean_se(rhs);
  std::tie(out.diff_mean, out.diff_se) = mean_se(diff);
  out.passed = std::abs(out.diff_mean) <= 3.0 * out.diff_se;
  return out;
}

NoiseEstimate mad_sigma(std::span<const double> details_finest) {
  if (details_finest.empty()) throw std::invalid_argument("mad_sigma: empty detail block");
  std::vector<double> mags(details_finest.size());
  std::transform(details_finest.begin(), details_finest.end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end());
  const std::size_t m = mags.size();
  const double median = m % 2 == 1 ? mags[m / 2] : 0.5 * (mags[m / 2 - 1] + mags[m / 2]);
  const double sigma = median / 0.6745;
  if (!(sigma > 0.0)) throw DegenerateVariance("mad_sigma: median absolute detail is zero");
  return {sigma * sigma, NoiseMethod::mad, false};
}

NoiseEstimate residual_sigma(const CoeffSet& z, std::span<const std::size_t> span) {
  const std::size_t n = z.size();
  std::vector<bool> in_span(n, false);
  std::size_t count = 0;
  for (std::size_t j : span) {
    if (j >= n) throw std::invalid_argument("residual_sigma: span index out of range");
    if (!in_span[j]) {
      in_span[j] = true;
      ++count;
    }
  }
  if (count >= n) throw std::invalid_argument("residual_sigma: span covers every coefficient");
  double rss = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (!in_span[j]) rss += square(z[j]);
  const double sigma2 = rss / static_cast<double>(n - count);
  return {sigma2, NoiseMethod::residual_regression, !(sigma2 > 0.0)};
}

std::size_t select_k(std::span<const RiskRecord> records) {
  if (records.empty()) throw std::invalid_argument("select_k: no records");
  const RiskRecord* best = &records.front();
  for (const RiskRecord& r : records) {
    if (r.criterion < best->criterion || (r.criterion == best->criterion && r.k < best->k))
      best = &r;
  }
  return best->k;
}

}  // namespace softscale
