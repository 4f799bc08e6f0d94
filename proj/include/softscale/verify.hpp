#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "softscale/risk.hpp"
#include "softscale/shrinkage.hpp"

namespace softscale {

/// Outcome of one verification check. `details` carries the estimates and
/// standard errors behind the verdict.
struct CheckResult {
  std::string name;
  bool passed = false;
  nlohmann::json details;

  nlohmann::json to_json() const;
};

/// Coefficient-domain mean of the default trig target at size n:
/// sqrt(n) * beta on 0-based indices {1, 3, 5, 7}.
std::vector<double> trig_coefficient_mean(std::size_t n);

CheckResult check_trig_orthogonality(std::span<const std::size_t> sizes, double tolerance = 1e-9);

/// Round-trip error and Parseval defect of the DWT (J0 = 2) over random
/// signals of length n.
CheckResult check_dwt_exactness(std::uint64_t seed, std::size_t n = 1024, std::size_t signals = 100,
                                double roundtrip_tol = 1e-10, double parseval_tol = 1e-9);

/// Cascade DWT against the explicit analysis matrix for n in {8, 16} and
/// every J0.
CheckResult check_dwt_matrix_equivalence(double tolerance = 1e-10);

/// Adaptive closed form z - t^2/z on active sets and alpha > 1 there, over
/// random fits.
CheckResult check_shrinkage_algebra(std::uint64_t seed, std::size_t fits = 10000,
                                    double tolerance = 1e-12);

struct SureCheckOptions {
  Method method = Method::adaptive;
  std::size_t n = 64;
  std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::size_t reps = 10000;
  double sigma2 = 1.0;
  DfConvention df_convention = DfConvention::k_factor;
  std::optional<double> fixed_alpha;  // ssp only: data-independent scaling
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Per k: paired mean of (criterion - loss) against 3 standard errors, with
/// known sigma2 and the default trig target at size n.
CheckResult check_sure_unbiasedness(const SureCheckOptions& options);

CheckResult check_stein_identity(std::size_t n, std::size_t k, std::size_t reps, Scaling variant,
                                 std::uint64_t seed, unsigned workers = 0);

/// Mean loss of LST minus LST-AS at k = k* (paired), required > 3 SE. The
/// asymptotic lower bound 2 s2 k* log(n) / n is reported only.
CheckResult check_scaling_gain(std::size_t n, std::size_t reps, std::uint64_t seed,
                               unsigned workers = 0);

/// Over growing n at k = k* + 4: the share of active noise coordinates
/// with alpha < 1.9 and the mean |alpha - 1| on true coordinates must both
/// fall strictly.
CheckResult check_alpha_trend(std::span<const std::size_t> sizes, std::size_t reps,
                              std::uint64_t seed, unsigned workers = 0);

/// Share of replications where all true components are active at k = k*.
CheckResult check_true_component_recovery(std::size_t n, std::size_t reps, std::uint64_t seed,
                                          double min_rate = 0.99, unsigned workers = 0);

struct VerifyOptions {
  std::uint64_t seed = 0;
  DfConvention df_convention = DfConvention::k_factor;
  unsigned workers = 0;
};

/// Runs every check; the report is a pure function of the options.
nlohmann::json verify_all(const VerifyOptions& options);

}  // namespace softscale
