#include "softscale/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softscale/orthobasis.hpp"
#include "softscale/parallel.hpp"
#include "softscale/random.hpp"
#include "softscale/signals.hpp"
#include "softscale/wavelet.hpp"

namespace softscale {

namespace {

constexpr std::size_t kTrueCount = 4;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
  MeanSe out;
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return out;
}

std::vector<double> draw(std::span<const double> mean, double sigma, std::uint64_t seed) {
  NormalSource normal(seed);
  std::vector<double> z(mean.begin(), mean.end());
  for (double& v : z) v += sigma * normal();
  return z;
}

}  // namespace

nlohmann::json CheckResult::to_json() const {
  return {{"name", name}, {"passed", passed}, {"details", details}};
}

std::vector<double> trig_coefficient_mean(std::size_t n) {
  const TargetSpec spec;
  std::vector<double> zeta(n, 0.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t c = 0; c < spec.true_components.size(); ++c)
    zeta[spec.true_components[c] - 1] = root_n * spec.beta[c];
  return zeta;
}

CheckResult check_trig_orthogonality(std::span<const std::size_t> sizes, double tolerance) {
  CheckResult out{"trig_orthogonality", true, nlohmann::json::array()};
  for (std::size_t n : sizes) {
    const double err = trig_design_matrix(n).orthogonality_error();
    const bool ok = err <= tolerance;
    out.passed = out.passed && ok;
    out.details.push_back({{"n", n}, {"max_abs_error", err}, {"tolerance", tolerance}, {"passed", ok}});
  }
  return out;
}

CheckResult check_dwt_exactness(std::uint64_t seed, std::size_t n, std::size_t signals,
                                double roundtrip_tol, double parseval_tol) {
  const auto filter = wavelet::daubechies8();
  double worst_roundtrip = 0.0;
  double worst_parseval = 0.0;
  for (std::size_t s = 0; s < signals; ++s) {
    const std::vector<double> y = draw(std::vector<double>(n, 0.0), 1.0, seed + s);
    const auto w = wavelet::dwt_decompose(y, filter, 2);
    const auto back = wavelet::dwt_reconstruct(w, filter);
    double ey = 0.0, ew = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst_roundtrip = std::max(worst_roundtrip, std::abs(back[i] - y[i]));
      ey += y[i] * y[i];
    }
    for (double v : w.flatten()) ew += v * v;
    worst_parseval = std::max(worst_parseval, std::abs(ew - ey) / ey);
  }
  CheckResult out;
  out.name = "dwt_exactness";
  out.passed = worst_roundtrip <= roundtrip_tol && worst_parseval <= parseval_tol;
  out.details = {{"n", n},
                 {"signals", signals},
                 {"max_roundtrip_error", worst_roundtrip},
                 {"roundtrip_tolerance", roundtrip_tol},
                 {"max_parseval_relative_error", worst_parseval},
                 {"parseval_tolerance", parseval_tol}};
  return out;
}

CheckResult check_dwt_matrix_equivalence(double tolerance) {
  const auto filter = wavelet::daubechies8();
  CheckResult out{"dwt_matrix_equivalence", true, nlohmann::json::array()};
  for (std::size_t n : {std::size_t{8}, std::size_t{16}}) {
    const int levels = wavelet::log2_exact(n);
    for (int j0 = 0; j0 <= levels; ++j0) {
      const std::vector<double> h = wavelet::analysis_matrix(n, filter, j0);
      double worst = 0.0;
      // Column c of H is the transform of the c-th unit vector.
      for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        const std::vector<double> w = wavelet::dwt_decompose(e, filter, j0).flatten();
        for (std::size_t r = 0; r < n; ++r) worst = std::max(worst, std::abs(w[r] - h[r * n + c]));
      }
      const bool ok = worst <= tolerance;
      out.passed = out.passed && ok;
      out.details.push_back({{"n", n}, {"j0", j0}, {"max_abs_error", worst}, {"passed", ok}});
    }
  }
  return out;
}

CheckResult check_shrinkage_algebra(std::uint64_t seed, std::size_t fits, double tolerance) {
  NormalSource normal(seed);
  double worst_closed_form = 0.0;
  double min_alpha = std::numeric_limits<double>::infinity();
  std::size_t active_checked = 0;
  for (std::size_t f = 0; f < fits; ++f) {
    const std::size_t n = 8 + static_cast<std::size_t>(normal.uniform() * 57.0);  // 8..64
    const double scale = 0.5 + 4.0 * normal.uniform();
    std::vector<double> zv(n);
    for (double& v : zv) v = scale * normal();
    const CoeffSet z(std::move(zv));
    const std::size_t k = static_cast<std::size_t>(normal.uniform() * static_cast<double>(n));
    const ScaledFit sf = adaptive_scale(lst_fit(z, k), z);
    const double t = sf.base.threshold;
    for (std::size_t j : sf.base.active) {
      worst_closed_form = std::max(worst_closed_form, std::abs(sf.scaled[j] - (z[j] - t * t / z[j])));
      min_alpha = std::min(min_alpha, sf.alphas[j]);
      ++active_checked;
    }
  }
  CheckResult out;
  out.name = "shrinkage_algebra";
  out.passed = worst_closed_form <= tolerance && min_alpha > 1.0;
  out.details = {{"fits", fits},
                 {"active_coefficients", active_checked},
                 {"max_closed_form_error", worst_closed_form},
                 {"tolerance", tolerance},
                 {"min_active_alpha", min_alpha}};
  return out;
}

CheckResult check_sure_unbiasedness(const SureCheckOptions& o) {
  if (o.ks.empty()) throw std::invalid_argument("check_sure_unbiasedness: no k values");
  const std::size_t kmax = *std::max_element(o.ks.begin(), o.ks.end());
  const std::vector<double> zeta = trig_coefficient_mean(o.n);
  const double sigma = std::sqrt(o.sigma2);

  // diffs[i * reps + r]: criterion - loss for ks[i] in replication r.
  std::vector<double> crit(o.ks.size() * o.reps), loss(o.ks.size() * o.reps);
  parallel_for(o.reps, o.workers, [&](std::size_t r) {
    const CoeffSet z(draw(zeta, sigma, o.seed + r));
    const std::vector<LstFit> path = lst_path(z, kmax);
    for (std::size_t i = 0; i < o.ks.size(); ++i) {
      const LstFit& fit = path[o.ks[i]];
      RiskRecord rec;
      switch (o.method) {
        case Method::lst:
          rec = sure_lst(fit, z, o.sigma2, o.df_convention, zeta);
          break;
        case Method::ssp: {
          const ScaledFit sf = o.fixed_alpha ? fixed_scale(fit, *o.fixed_alpha)
                                             : ssp_scale(fit, z, o.sigma2);
          rec = sure_ssp(sf, z, o.sigma2, o.df_convention, zeta);
          break;
        }
        case Method::adaptive:
          rec = sure_as(adaptive_scale(fit, z), z, o.sigma2, zeta);
          break;
        case Method::universal:
          throw std::invalid_argument("check_sure_unbiasedness: universal has no path");
      }
      crit[i * o.reps + r] = rec.criterion;
      loss[i * o.reps + r] = *rec.empirical_loss;
    }
  });

  CheckResult out;
  out.name = "sure_unbiasedness_" + std::string(to_string(o.method));
  out.passed = true;
  nlohmann::json per_k = nlohmann::json::array();
  std::vector<double> diff(o.reps);
  for (std::size_t i = 0; i < o.ks.size(); ++i) {
    const std::span<const double> c(crit.data() + i * o.reps, o.reps);
    const std::span<const double> l(loss.data() + i * o.reps, o.reps);
    for (std::size_t r = 0; r < o.reps; ++r) diff[r] = c[r] - l[r];
    const MeanSe mc = mean_se(c), ml = mean_se(l), md = mean_se(diff);
    const bool ok = std::abs(md.mean) <= 3.0 * md.se;
    out.passed = out.passed && ok;
    per_k.push_back({{"k", o.ks[i]},
                     {"mean_criterion", mc.mean},
                     {"mean_loss", ml.mean},
                     {"bias", md.mean},
                     {"se", md.se},
                     {"passed", ok}});
  }
  out.details = {{"n", o.n},
                 {"reps", o.reps},
                 {"sigma2", o.sigma2},
                 {"df_convention", std::string(to_string(o.df_convention))},
                 {"per_k", per_k}};
  if (o.fixed_alpha) out.details["fixed_alpha"] = *o.fixed_alpha;
  return out;
}

CheckResult check_stein_identity(std::size_t n, std::size_t k, std::size_t reps, Scaling variant,
                                 std::uint64_t seed, unsigned workers) {
  const std::vector<double> zeta = trig_coefficient_mean(n);
  const SteinReport rep = stein_identity_check(n, k, zeta, 1.0, reps, seed, variant, workers);
  CheckResult out;
  out.name = "stein_identity_" + std::string(to_string(variant));
  out.passed = rep.passed;
  out.details = {{"n", n},           {"k", k},
                 {"reps", reps},     {"lhs_mean", rep.lhs_mean},
                 {"lhs_se", rep.lhs_se}, {"rhs_mean", rep.rhs_mean},
                 {"rhs_se", rep.rhs_se}, {"diff_mean", rep.diff_mean},
                 {"diff_se", rep.diff_se}};
  return out;
}

CheckResult check_scaling_gain(std::size_t n, std::size_t reps, std::uint64_t seed, unsigned workers) {
  const std::vector<double> zeta = trig_coefficient_mean(n);
  std::vector<double> lst(reps), as(reps), diff(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    const CoeffSet z(draw(zeta, 1.0, seed + r));
    const LstFit fit = lst_fit(z, kTrueCount);
    lst[r] = empirical_loss(fit.coeffs, zeta);
    as[r] = empirical_loss(adaptive_scale(fit, z).scaled, zeta);
    diff[r] = lst[r] - as[r];
  });
  const MeanSe ml = mean_se(lst), ma = mean_se(as), md = mean_se(diff);
  const double bound = 2.0 * static_cast<double>(kTrueCount) * std::log(static_cast<double>(n)) /
                       static_cast<double>(n);
  CheckResult out;
  out.name = "scaling_gain_at_true_size";
  out.passed = md.mean > 3.0 * md.se;
  out.details = {{"n", n},
                 {"k", kTrueCount},
                 {"reps", reps},
                 {"mean_loss_lst", ml.mean},
                 {"mean_loss_adaptive", ma.mean},
                 {"difference", md.mean},
                 {"difference_se", md.se},
                 {"asymptotic_bound", bound},
                 {"difference_exceeds_bound", md.mean >= bound},
                 {"note", "bound holds for sufficiently large n; reported, not asserted"}};
  return out;
}

CheckResult check_alpha_trend(std::span<const std::size_t> sizes, std::size_t reps,
                              std::uint64_t seed, unsigned workers) {
  const std::size_t k = kTrueCount + 4;
  CheckResult out;
  out.name = "adaptive_scaling_trend";
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> noise_share, true_dev;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::size_t n = sizes[si];
    const std::vector<double> zeta = trig_coefficient_mean(n);
    struct Tally {
      std::size_t noise_active = 0, noise_below = 0, true_active = 0;
      double true_dev_sum = 0.0;
    };
    std::vector<Tally> tallies(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
      const CoeffSet z(draw(zeta, 1.0, seed + (si << 32) + r));
      const ScaledFit sf = adaptive_scale(lst_fit(z, k), z);
      Tally& t = tallies[r];
      for (std::size_t j : sf.base.active) {
        if (zeta[j] != 0.0) {
          ++t.true_active;
          t.true_dev_sum += std::abs(sf.alphas[j] - 1.0);
        } else {
          ++t.noise_active;
          if (sf.alphas[j] < 1.9) ++t.noise_below;
        }
      }
    });
    Tally total;
    for (const Tally& t : tallies) {
      total.noise_active += t.noise_active;
      total.noise_below += t.noise_below;
      total.true_active += t.true_active;
      total.true_dev_sum += t.true_dev_sum;
    }
    const double share = total.noise_active
                             ? static_cast<double>(total.noise_below) / static_cast<double>(total.noise_active)
                             : 0.0;
    const double dev = total.true_active ? total.true_dev_sum / static_cast<double>(total.true_active) : 0.0;
    noise_share.push_back(share);
    true_dev.push_back(dev);
    rows.push_back({{"n", n},
                    {"noise_active", total.noise_active},
                    {"noise_alpha_below_1_9", share},
                    {"true_active", total.true_active},
                    {"true_mean_abs_alpha_minus_1", dev}});
  }
  out.passed = true;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    out.passed = out.passed && noise_share[i] < noise_share[i - 1] && true_dev[i] < true_dev[i - 1];
  out.details = {{"k", k}, {"reps", reps}, {"per_n", rows}};
  return out;
}

CheckResult check_true_component_recovery(std::size_t n, std::size_t reps, std::uint64_t seed,
                                          double min_rate, unsigned workers) {
  const std::vector<double> zeta = trig_coefficient_mean(n);
  std::vector<char> hit(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    const CoeffSet z(draw(zeta, 1.0, seed + r));
    const LstFit fit = lst_fit(z, kTrueCount);
    hit[r] = std::all_of(fit.active.begin(), fit.active.end(),
                         [&](std::size_t j) { return zeta[j] != 0.0; });
  });
  const double rate = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) /
                      static_cast<double>(reps);
  CheckResult out;
  out.name = "true_component_recovery";
  out.passed = rate > min_rate;
  out.details = {{"n", n}, {"k", kTrueCount}, {"reps", reps}, {"rate", rate}, {"min_rate", min_rate}};
  return out;
}

nlohmann::json verify_all(const VerifyOptions& o) {
  // Each check draws from its own seed block.
  auto block = [&](std::uint64_t id) { return o.seed + (id << 40); };
  std::vector<CheckResult> checks;

  const std::size_t trig_sizes[] = {4, 100, 500};
  checks.push_back(check_trig_orthogonality(trig_sizes));
  checks.push_back(check_dwt_exactness(block(1)));
  checks.push_back(check_dwt_matrix_equivalence());
  checks.push_back(check_shrinkage_algebra(block(2)));

  SureCheckOptions sure;
  sure.workers = o.workers;
  sure.method = Method::lst;
  sure.df_convention = o.df_convention;
  sure.seed = block(3);
  checks.push_back(check_sure_unbiasedness(sure));
  sure.method = Method::adaptive;
  sure.seed = block(4);
  checks.push_back(check_sure_unbiasedness(sure));
  sure.n = 128;
  sure.seed = block(5);
  CheckResult as128 = check_sure_unbiasedness(sure);
  as128.name += "_n128";
  checks.push_back(std::move(as128));
  sure.n = 64;
  sure.method = Method::ssp;
  sure.fixed_alpha = 1.5;
  sure.seed = block(6);
  CheckResult ssp = check_sure_unbiasedness(sure);
  ssp.name += "_fixed_alpha";
  checks.push_back(std::move(ssp));

  checks.push_back(check_stein_identity(32, 5, 100000, Scaling::adaptive, block(7), o.workers));
  checks.push_back(check_stein_identity(32, 5, 100000, Scaling::none, block(8), o.workers));
  checks.push_back(check_scaling_gain(500, 1000, block(9), o.workers));
  const std::size_t trend_sizes[] = {std::size_t{1} << 8, std::size_t{1} << 12, std::size_t{1} << 16};
  checks.push_back(check_alpha_trend(trend_sizes, 1000, block(10), o.workers));
  checks.push_back(check_true_component_recovery(500, 1000, block(11), 0.99, o.workers));

  nlohmann::json report;
  report["seed"] = o.seed;
  report["df_convention"] = std::string(to_string(o.df_convention));
  report["checks"] = nlohmann::json::array();
  bool all = true;
  for (const CheckResult& c : checks) {
    all = all && c.passed;
    report["checks"].push_back(c.to_json());
  }
  report["all_passed"] = all;
  return report;
}

}  // namespace softscale
