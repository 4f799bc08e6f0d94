#include "softscale/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "softscale/parallel.hpp"
#include "softscale/wavelet.hpp"

namespace softscale {

std::string_view to_string(TransformKind t) { return t == TransformKind::trig ? "trig" : "dwt"; }

TransformKind transform_from_string(std::string_view name) {
  if (name == "trig") return TransformKind::trig;
  if (name == "dwt") return TransformKind::dwt;
  throw std::invalid_argument("unknown transform '" + std::string(name) + "'");
}

std::unique_ptr<OrthonormalTransform> make_transform(TransformKind kind, std::size_t n,
                                                     int coarsest_level) {
  if (kind == TransformKind::trig) return std::make_unique<TrigTransform>(n);
  return std::make_unique<wavelet::WaveletTransform>(n, wavelet::daubechies8(), coarsest_level);
}

namespace {

// The block that is actually thresholded, plus what is needed to express
// its criterion and loss on the full coefficient vector.
struct SubProblem {
  CoeffSet z;
  std::vector<double> truth;
  std::size_t n = 0;
  std::size_t prefix = 0;
  double prefix_error = 0.0;  // sum over the exempt block of (z - truth)^2
};

SubProblem make_subproblem(const CoeffSet& z, std::span<const double> truth, std::size_t prefix) {
  SubProblem p;
  p.n = z.size();
  p.prefix = prefix;
  if (prefix == 0) {
    p.z = z;
    p.truth.assign(truth.begin(), truth.end());
    return p;
  }
  if (prefix >= z.size()) throw std::invalid_argument("exempt block covers every coefficient");
  const auto values = z.values();
  p.z = CoeffSet(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(prefix), values.end()));
  if (!truth.empty()) {
    p.truth.assign(truth.begin() + static_cast<std::ptrdiff_t>(prefix), truth.end());
    for (std::size_t j = 0; j < prefix; ++j) p.prefix_error += (values[j] - truth[j]) * (values[j] - truth[j]);
  }
  return p;
}

// Exempt coefficients are kept as observed: each contributes no residual and
// one degree of freedom to the full-vector criterion.
RiskRecord lift(RiskRecord rec, const SubProblem& p, double sigma2) {
  if (p.prefix == 0) return rec;
  const double n = static_cast<double>(p.n);
  const double n_sub = static_cast<double>(p.n - p.prefix);
  const double a = static_cast<double>(p.prefix);
  rec.criterion = (n_sub / n) * (rec.criterion + sigma2) + 2.0 * sigma2 * a / n - sigma2;
  if (rec.empirical_loss) rec.empirical_loss = (n_sub * *rec.empirical_loss + p.prefix_error) / n;
  return rec;
}

RiskRecord record_for(Method m, const LstFit& fit, const SubProblem& p, double sigma2,
                      const ShrinkOptions& o) {
  switch (m) {
    case Method::lst:
      return sure_lst(fit, p.z, sigma2, o.df_convention, p.truth);
    case Method::ssp:
      return sure_ssp(ssp_scale(fit, p.z, sigma2, o.ssp_formula), p.z, sigma2, o.df_convention,
                      p.truth);
    case Method::adaptive:
      return sure_as(adaptive_scale(fit, p.z), p.z, sigma2, p.truth);
    case Method::universal: {
      RiskRecord rec = sure_lst(fit, p.z, sigma2, o.df_convention, p.truth);
      rec.variant = Method::universal;
      return rec;
    }
  }
  throw std::logic_error("unhandled method");
}

}  // namespace

std::vector<MethodPath> evaluate_methods(const CoeffSet& z, double sigma2,
                                         const ShrinkOptions& options,
                                         std::span<const double> truth) {
  if (!truth.empty() && truth.size() != z.size())
    throw std::invalid_argument("evaluate_methods: truth length mismatch");
  const SubProblem p = make_subproblem(z, truth, options.exempt_prefix);

  std::vector<LstFit> path;
  for (Method m : options.methods) {
    if (m != Method::universal) {
      path = lst_path(p.z, options.kmax);
      break;
    }
  }

  std::vector<MethodPath> out;
  out.reserve(options.methods.size());
  for (Method m : options.methods) {
    MethodPath mp;
    mp.method = m;
    if (m == Method::universal) {
      mp.records.push_back(lift(record_for(m, universal_fit(p.z, sigma2), p, sigma2, options), p, sigma2));
    } else {
      mp.records.reserve(path.size());
      for (const LstFit& fit : path) mp.records.push_back(lift(record_for(m, fit, p, sigma2, options), p, sigma2));
    }
    const std::size_t k = select_k(mp.records);
    for (std::size_t i = 0; i < mp.records.size(); ++i) {
      if (mp.records[i].k == k) {
        mp.selected = i;
        break;
      }
    }
    out.push_back(std::move(mp));
  }
  return out;
}

MethodFit fit_method(const CoeffSet& z, Method method, std::size_t k, double sigma2,
                     const ShrinkOptions& options) {
  const SubProblem p = make_subproblem(z, {}, options.exempt_prefix);
  const LstFit fit = method == Method::universal ? universal_fit(p.z, sigma2) : lst_fit(p.z, k);
  std::vector<double> sub;
  switch (method) {
    case Method::lst:
    case Method::universal: sub = fit.coeffs; break;
    case Method::ssp: sub = ssp_scale(fit, p.z, sigma2, options.ssp_formula).scaled; break;
    case Method::adaptive: sub = adaptive_scale(fit, p.z).scaled; break;
  }
  MethodFit out;
  out.k = fit.k;
  out.threshold = fit.threshold;
  out.coeffs.assign(z.values().begin(), z.values().begin() + static_cast<std::ptrdiff_t>(p.prefix));
  out.coeffs.insert(out.coeffs.end(), sub.begin(), sub.end());
  return out;
}

NoiseEstimate estimate_noise(std::span<const double> coeffs, NoiseMethod method,
                             double known_sigma2, std::size_t span_size) {
  switch (method) {
    case NoiseMethod::known:
      return {known_sigma2, NoiseMethod::known, !(known_sigma2 > 0.0)};
    case NoiseMethod::mad:
      if (coeffs.size() < 2) throw std::invalid_argument("mad noise estimate needs n >= 2");
      return mad_sigma(coeffs.subspan(coeffs.size() / 2));
    case NoiseMethod::residual_regression: {
      std::vector<std::size_t> span(span_size);
      for (std::size_t j = 0; j < span_size; ++j) span[j] = j;
      return residual_sigma(CoeffSet(std::vector<double>(coeffs.begin(), coeffs.end())), span);
    }
  }
  throw std::logic_error("unhandled noise method");
}

void ExperimentConfig::validate() const {
  target.validate();
  if (reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
  if (shrink.methods.empty()) throw std::invalid_argument("experiment: no methods selected");
  const std::size_t n = target.n;
  if (transform == TransformKind::dwt) {
    const int levels = wavelet::log2_exact(n);
    if (coarsest_level < 0 || coarsest_level > levels)
      throw std::invalid_argument("experiment: coarsest level out of range");
  } else if (exempt_approx) {
    throw std::invalid_argument("experiment: exempt-approx applies to the dwt transform only");
  }
  const std::size_t prefix =
      exempt_approx ? (std::size_t{1} << coarsest_level) : std::size_t{0};
  if (shrink.kmax + prefix >= n) throw std::invalid_argument("experiment: kmax must be below n");
  if (noise_method == NoiseMethod::residual_regression && residual_span_size >= n)
    throw std::invalid_argument("experiment: residual span must be smaller than n");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : shrink.methods) methods.push_back(std::string(to_string(m)));
  nlohmann::json t = {
      {"kind", std::string(to_string(target.kind))},
      {"n", target.n},
      {"sigma2", target.sigma2},
  };
  if (target.kind == SignalKind::trig) {
    t["true_components"] = target.true_components;
    t["beta"] = target.beta;
  }
  t["snr"] = target.snr ? nlohmann::json(*target.snr) : nlohmann::json(nullptr);
  return {
      {"name", name},
      {"target", t},
      {"transform", std::string(to_string(transform))},
      {"coarsest_level", coarsest_level},
      {"methods", methods},
      {"kmax", shrink.kmax},
      {"reps", reps},
      {"seed", base_seed},
      {"noise_method", std::string(to_string(noise_method))},
      {"known_sigma2", known_sigma2 ? nlohmann::json(*known_sigma2) : nlohmann::json(nullptr)},
      {"residual_span_size", residual_span_size},
      {"df_convention", std::string(to_string(shrink.df_convention))},
      {"ssp_formula", std::string(to_string(shrink.ssp_formula))},
      {"exempt_approx", exempt_approx},
      {"workers", workers},
  };
}

ExperimentConfig experiment_preset(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "trig-table1") {
    c.target = TargetSpec{};
    c.transform = TransformKind::trig;
    c.shrink.methods = {Method::lst, Method::ssp, Method::adaptive};
    c.shrink.kmax = 50;
    c.reps = 1000;
    c.noise_method = NoiseMethod::residual_regression;
    c.residual_span_size = 250;
    return c;
  }
  if (name == "wavelet-heavisine" || name == "wavelet-blocks") {
    c.target.kind = name == "wavelet-heavisine" ? SignalKind::heavisine : SignalKind::blocks;
    c.target.n = 1024;
    c.target.sigma2 = 1.0;
    c.target.snr = 7.0;
    c.target.true_components.clear();
    c.target.beta.clear();
    c.transform = TransformKind::dwt;
    c.coarsest_level = 2;
    c.shrink.methods = {Method::lst, Method::ssp, Method::adaptive, Method::universal};
    c.shrink.kmax = 300;
    c.reps = 500;
    c.noise_method = NoiseMethod::mad;
    return c;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

const MethodSummary& McSummary::at(Method m) const {
  for (const auto& s : methods)
    if (s.method == m) return s;
  throw std::out_of_range("method '" + std::string(to_string(m)) + "' not in summary");
}

nlohmann::json McSummary::metadata() const {
  return {
      {"config", config.to_json()},
      {"reps_completed", reps_completed},
      {"reps_skipped", reps_skipped},
      {"elapsed_seconds", elapsed_seconds},
  };
}

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// Two-pass mean and sample standard deviation, summed in index order.
template <class Get>
MeanSd reduce(std::size_t count, Get&& get) {
  MeanSd out;
  if (count == 0) return out;
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += get(i);
  out.mean = s / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double d = get(i) - out.mean;
      ss += d * d;
    }
    out.sd = std::sqrt(ss / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace

McSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const std::size_t n = config.target.n;
  const auto transform = make_transform(config.transform, n, config.coarsest_level);
  const std::vector<double> truth = synthesize_truth(config.target);
  const std::vector<double> zeta = transform->forward(truth);

  ShrinkOptions shrink = config.shrink;
  shrink.exempt_prefix = config.exempt_approx ? (std::size_t{1} << config.coarsest_level) : 0;

  struct Replication {
    bool skipped = false;
    std::vector<MethodPath> paths;
  };
  std::vector<Replication> reps(config.reps);
  parallel_for(config.reps, config.workers, [&](std::size_t r) {
    const std::vector<double> y = add_noise(truth, config.target.sigma2, config.base_seed + r);
    std::vector<double> coeffs = transform->forward(y);
    NoiseEstimate est;
    try {
      est = estimate_noise(coeffs, config.noise_method,
                           config.known_sigma2.value_or(config.target.sigma2),
                           config.residual_span_size);
    } catch (const DegenerateVariance&) {
      reps[r].skipped = true;
      return;
    }
    if (est.degenerate || !(est.sigma2 > 0.0)) {
      reps[r].skipped = true;
      return;
    }
    reps[r].paths = evaluate_methods(CoeffSet(std::move(coeffs)), est.sigma2, shrink, zeta);
  });

  std::vector<const Replication*> done;
  for (const auto& r : reps)
    if (!r.skipped) done.push_back(&r);

  McSummary summary;
  summary.config = config;
  summary.reps_completed = done.size();
  summary.reps_skipped = reps.size() - done.size();

  for (std::size_t mi = 0; mi < shrink.methods.size(); ++mi) {
    MethodSummary ms;
    ms.method = shrink.methods[mi];
    const std::size_t count = done.size();
    if (ms.method != Method::universal) {
      const std::size_t points = shrink.kmax + 1;
      ms.mean_criterion.resize(points);
      ms.sd_criterion.resize(points);
      ms.mean_loss.resize(points);
      ms.sd_loss.resize(points);
      for (std::size_t k = 0; k < points; ++k) {
        const MeanSd c = reduce(count, [&](std::size_t i) { return done[i]->paths[mi].records[k].criterion; });
        const MeanSd l = reduce(count, [&](std::size_t i) {
          return done[i]->paths[mi].records[k].empirical_loss.value_or(0.0);
        });
        ms.mean_criterion[k] = c.mean;
        ms.sd_criterion[k] = c.sd;
        ms.mean_loss[k] = l.mean;
        ms.sd_loss[k] = l.sd;
      }
    }
    for (const Replication* r : done) ++ms.selected_k_counts[r->paths[mi].selected_record().k];
    const MeanSd sk = reduce(count, [&](std::size_t i) {
      return static_cast<double>(done[i]->paths[mi].selected_record().k);
    });
    const MeanSd sl = reduce(count, [&](std::size_t i) {
      return done[i]->paths[mi].selected_record().empirical_loss.value_or(0.0);
    });
    ms.mean_selected_k = sk.mean;
    ms.sd_selected_k = sk.sd;
    ms.mean_loss_at_selected = sl.mean;
    ms.sd_loss_at_selected = sl.sd;
    summary.methods.push_back(std::move(ms));
  }

  summary.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

std::vector<CurvePoint> curve_of(const MethodSummary& summary) {
  std::vector<CurvePoint> out(summary.mean_criterion.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {k, summary.mean_criterion[k], summary.mean_loss[k]};
  return out;
}

std::vector<CurvePoint> risk_curve(const ExperimentConfig& config, Method method) {
  if (method == Method::universal)
    throw std::invalid_argument("risk_curve: universal thresholding has no path");
  ExperimentConfig c = config;
  c.shrink.methods = {method};
  return curve_of(run_experiment(c).at(method));
}

void write_curves_csv(const McSummary& summary, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "method,k,mean_criterion,sd_criterion,mean_loss,sd_loss\n";
  for (const auto& m : summary.methods) {
    for (std::size_t k = 0; k < m.mean_criterion.size(); ++k) {
      out << to_string(m.method) << ',' << k << ',' << m.mean_criterion[k] << ','
          << m.sd_criterion[k] << ',' << m.mean_loss[k] << ',' << m.sd_loss[k] << '\n';
    }
  }
}

void write_summary_csv(const McSummary& summary, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "method,mean_selected_k,sd_selected_k,mean_loss_at_selected,sd_loss_at_selected,reps,seed\n";
  for (const auto& m : summary.methods) {
    out << to_string(m.method) << ',' << m.mean_selected_k << ',' << m.sd_selected_k << ','
        << m.mean_loss_at_selected << ',' << m.sd_loss_at_selected << ','
        << summary.reps_completed << ',' << summary.config.base_seed << '\n';
  }
}

nlohmann::json DenoiseOptions::to_json() const {
  return {
      {"transform", std::string(to_string(transform))},
      {"coarsest_level", coarsest_level},
      {"method", std::string(to_string(method))},
      {"kmax", shrink.kmax},
      {"noise", std::string(to_string(noise))},
      {"known_sigma2", known_sigma2},
      {"residual_span_size", residual_span_size},
      {"df_convention", std::string(to_string(shrink.df_convention))},
      {"ssp_formula", std::string(to_string(shrink.ssp_formula))},
      {"exempt_approx", exempt_approx},
  };
}

nlohmann::json DenoiseResult::report() const {
  return {
      {"selected_k", selected_k},
      {"threshold", threshold},
      {"sigma2_hat", noise.sigma2},
      {"noise_method", std::string(to_string(noise.method))},
      {"criterion", criterion},
  };
}

DenoiseResult denoise(std::span<const double> y, const DenoiseOptions& options) {
  const auto transform = make_transform(options.transform, y.size(), options.coarsest_level);
  if (options.exempt_approx && options.transform != TransformKind::dwt)
    throw std::invalid_argument("exempt-approx applies to the dwt transform only");
  std::vector<double> coeffs = transform->forward(y);

  DenoiseResult result;
  result.noise = estimate_noise(coeffs, options.noise, options.known_sigma2,
                                options.residual_span_size);
  if (result.noise.degenerate || !(result.noise.sigma2 > 0.0))
    throw DegenerateVariance("noise variance estimate is not positive");

  ShrinkOptions shrink = options.shrink;
  shrink.methods = {options.method};
  shrink.exempt_prefix =
      options.exempt_approx ? (std::size_t{1} << options.coarsest_level) : std::size_t{0};
  if (shrink.kmax + shrink.exempt_prefix >= y.size())
    throw std::invalid_argument("kmax must be below the number of thresholded coefficients");

  const CoeffSet z(std::move(coeffs));
  const MethodPath path = evaluate_methods(z, result.noise.sigma2, shrink).front();
  const RiskRecord& best = path.selected_record();
  const MethodFit fit = fit_method(z, options.method, best.k, result.noise.sigma2, shrink);

  result.output = transform->inverse(fit.coeffs);
  result.selected_k = best.k;
  result.threshold = fit.threshold;
  result.criterion = best.criterion;
  result.records = path.records;
  return result;
}

}  // namespace softscale
