#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "softscale/orthobasis.hpp"
#include "softscale/shrinkage.hpp"

namespace softscale {

enum class Method { lst, ssp, adaptive, universal };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

/// Degrees-of-freedom term used by the LST and LST-SSP criteria.
///   k_factor:      +2 s2 k / n and +2 s2 alpha k / n
///   constant:      +2 s2 / n and +2 s2 alpha / n, whatever k is
enum class DfConvention { k_factor, constant };

std::string_view to_string(DfConvention c);

struct RiskRecord {
  std::size_t k = 0;
  double criterion = 0.0;
  std::optional<double> empirical_loss;  // (1/n) ||fit - truth||^2
  Method variant = Method::lst;
};

enum class NoiseMethod { known, mad, residual_regression };

std::string_view to_string(NoiseMethod m);

struct NoiseEstimate {
  double sigma2 = 0.0;
  NoiseMethod method = NoiseMethod::known;
  // Set when the estimate came out non-positive (e.g. noiseless input);
  // such an estimate must not be plugged into a criterion.
  bool degenerate = false;
};

/// Raised when a variance estimate or input is non-positive where a
/// positive value is required.
class DegenerateVariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (1/n) ||fit - truth||^2
double empirical_loss(std::span<const double> fit, std::span<const double> truth);

/// LST criterion: (1/n)||b - z||^2 - s2 + 2 s2 df / n with df = k.
/// A non-empty `truth` fills in the empirical loss.
RiskRecord sure_lst(const LstFit& fit, const CoeffSet& z, double sigma2,
                    DfConvention df = DfConvention::k_factor,
                    std::span<const double> truth = {});

/// LST-SSP criterion: (1/n)||alpha b - z||^2 - s2 + 2 s2 alpha k / n.
RiskRecord sure_ssp(const ScaledFit& sf, const CoeffSet& z, double sigma2,
                    DfConvention df = DfConvention::k_factor,
                    std::span<const double> truth = {});

/// Unbiased risk estimate under adaptive scaling:
/// (1/n)||scaled - z||^2 - s2 + 2 s2 k / n + (2 s2 / n) sum_active (alpha_j - 1)^2.
RiskRecord sure_as(const ScaledFit& sf, const CoeffSet& z, double sigma2,
                   std::span<const double> truth = {});

/// Monte Carlo comparison of the two sides of the divergence identity
///   (1/s2) E[(fit - z)'(z - zeta)] = E[sum_active (alpha_j - 1)^2] - (n - k)
/// for the adaptive fit, or of the left side against k - n when
/// `variant` is Scaling::none.
struct SteinReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t reps = 0;
  Scaling variant = Scaling::adaptive;
  double lhs_mean = 0.0, lhs_se = 0.0;
  double rhs_mean = 0.0, rhs_se = 0.0;
  double diff_mean = 0.0, diff_se = 0.0;  // paired, per replication
  bool passed = false;                    // |diff_mean| <= 3 diff_se
};

SteinReport stein_identity_check(std::size_t n, std::size_t k, std::span<const double> zeta,
                                 double sigma2, std::size_t reps, std::uint64_t seed,
                                 Scaling variant = Scaling::adaptive, unsigned workers = 0);

/// Robust noise estimate from the finest-scale detail block:
/// sigma = median |d| / 0.6745. Even lengths use the midpoint of the two
/// central order statistics. Throws DegenerateVariance when the median is 0
/// and std::invalid_argument on empty input.
NoiseEstimate mad_sigma(std::span<const double> details_finest);

/// Residual mean square after regressing on the coefficients in `span`
/// (0-based indices): (||z||^2 - sum_span z_j^2) / (n - |span|).
NoiseEstimate residual_sigma(const CoeffSet& z, std::span<const std::size_t> span);

/// k with the smallest criterion; ties go to the smaller k.
std::size_t select_k(std::span<const RiskRecord> records);

}  // namespace softscale
