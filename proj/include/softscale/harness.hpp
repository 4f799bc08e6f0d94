#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "softscale/orthobasis.hpp"
#include "softscale/risk.hpp"
#include "softscale/shrinkage.hpp"
#include "softscale/signals.hpp"

namespace softscale {

enum class TransformKind { trig, dwt };

std::string_view to_string(TransformKind t);
TransformKind transform_from_string(std::string_view name);

/// Builds the orthonormal transform for a signal length. dwt uses the 8-tap
/// Daubechies filter with periodic boundaries down to `coarsest_level`.
std::unique_ptr<OrthonormalTransform> make_transform(TransformKind kind, std::size_t n,
                                                     int coarsest_level);

/// Options shared by every path-based estimate of one coefficient vector.
struct ShrinkOptions {
  std::vector<Method> methods{Method::lst, Method::ssp, Method::adaptive};
  std::size_t kmax = 50;
  DfConvention df_convention = DfConvention::k_factor;
  SspFormula ssp_formula = SspFormula::orthonormal;
  // Leading coefficients passed through untouched (the DWT approximation
  // block when approximation coefficients are exempted).
  std::size_t exempt_prefix = 0;
};

/// Criteria (and losses, when a truth is supplied) along the path for one
/// method. Universal thresholding yields a single record.
struct MethodPath {
  Method method = Method::lst;
  std::vector<RiskRecord> records;
  std::size_t selected = 0;  // index into records

  const RiskRecord& selected_record() const { return records[selected]; }
};

std::vector<MethodPath> evaluate_methods(const CoeffSet& z, double sigma2,
                                         const ShrinkOptions& options,
                                         std::span<const double> truth = {});

/// Coefficient-domain output of `method` at step k (ignored for universal).
struct MethodFit {
  std::vector<double> coeffs;
  std::size_t k = 0;
  double threshold = 0.0;
};

MethodFit fit_method(const CoeffSet& z, Method method, std::size_t k, double sigma2,
                     const ShrinkOptions& options);

/// Estimates the noise variance of transformed coefficients. mad uses the
/// last n/2 coefficients (the finest DWT detail block, or the upper half of
/// the trig basis); residual regression uses the first `span_size`.
NoiseEstimate estimate_noise(std::span<const double> coeffs, NoiseMethod method,
                             double known_sigma2, std::size_t span_size);

struct ExperimentConfig {
  std::string name = "custom";
  TargetSpec target;
  TransformKind transform = TransformKind::trig;
  int coarsest_level = 2;
  ShrinkOptions shrink;
  std::size_t reps = 1000;
  std::uint64_t base_seed = 0;
  NoiseMethod noise_method = NoiseMethod::residual_regression;
  // Variance handed to the criteria under NoiseMethod::known; the target's
  // sigma2 when unset. Noiseless runs need a small positive value here.
  std::optional<double> known_sigma2;
  std::size_t residual_span_size = 250;
  bool exempt_approx = false;
  unsigned workers = 0;  // 0: one per hardware thread; never changes results

  void validate() const;
  nlohmann::json to_json() const;
};

/// Preloaded configurations: trig-table1, wavelet-heavisine, wavelet-blocks.
ExperimentConfig experiment_preset(std::string_view name);

struct MethodSummary {
  Method method = Method::lst;
  // Per k = 0..kmax; empty for universal thresholding.
  std::vector<double> mean_criterion, sd_criterion, mean_loss, sd_loss;
  std::map<std::size_t, std::size_t> selected_k_counts;
  double mean_selected_k = 0.0, sd_selected_k = 0.0;
  double mean_loss_at_selected = 0.0, sd_loss_at_selected = 0.0;
};

struct McSummary {
  ExperimentConfig config;
  std::vector<MethodSummary> methods;
  std::size_t reps_completed = 0;
  std::size_t reps_skipped = 0;  // non-positive variance estimate
  double elapsed_seconds = 0.0;

  const MethodSummary& at(Method m) const;
  nlohmann::json metadata() const;
};

/// Runs every replication (seed = base_seed + rep) and reduces in rep order,
/// so the result does not depend on the worker count.
McSummary run_experiment(const ExperimentConfig& config);

struct CurvePoint {
  std::size_t k = 0;
  double mean_criterion = 0.0;
  double mean_loss = 0.0;
};

std::vector<CurvePoint> risk_curve(const ExperimentConfig& config, Method method);
std::vector<CurvePoint> curve_of(const MethodSummary& summary);

/// method,k,mean_criterion,sd_criterion,mean_loss,sd_loss
void write_curves_csv(const McSummary& summary, std::ostream& out);
/// method,mean_selected_k,sd_selected_k,mean_loss_at_selected,sd_loss_at_selected,reps,seed
void write_summary_csv(const McSummary& summary, std::ostream& out);

struct DenoiseOptions {
  TransformKind transform = TransformKind::dwt;
  int coarsest_level = 2;
  Method method = Method::adaptive;
  ShrinkOptions shrink;  // `methods` is overridden by `method`
  NoiseMethod noise = NoiseMethod::mad;
  double known_sigma2 = 1.0;
  std::size_t residual_span_size = 0;
  bool exempt_approx = false;

  nlohmann::json to_json() const;
};

struct DenoiseResult {
  std::vector<double> output;
  std::size_t selected_k = 0;
  double threshold = 0.0;
  NoiseEstimate noise;
  double criterion = 0.0;
  std::vector<RiskRecord> records;

  nlohmann::json report() const;
};

/// Transform, estimate the noise, pick k by the method's criterion and
/// transform back.
DenoiseResult denoise(std::span<const double> y, const DenoiseOptions& options);

}  // namespace softscale
