#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace softscale {

enum class SignalKind { trig, heavisine, blocks };

std::string_view to_string(SignalKind k);
SignalKind signal_kind_from_string(std::string_view name);

/// Description of a synthetic target. `true_components` are 1-based basis
/// indices (trig only); `beta` holds their coefficients.
struct TargetSpec {
  SignalKind kind = SignalKind::trig;
  std::size_t n = 500;
  std::vector<std::size_t> true_components{2, 4, 6, 8};
  std::vector<double> beta{2.0, -1.5, 1.0, -0.5};
  double sigma2 = 1.0;
  std::optional<double> snr;

  void validate() const;
};

/// h(x_i) = sum_k beta_k g_k(x_i) on the trig grid, using the same basis as
/// trig_design_matrix. Needs an even n >= 10 and components in [1, n].
std::vector<double> trig_target(std::size_t n, std::span<const std::size_t> components,
                                std::span<const double> beta);

/// Default trig target: components {2,4,6,8}, beta (2, -1.5, 1, -0.5).
std::vector<double> trig_target(std::size_t n);

/// Heavisine or blocks sampled on t_i = i / (n - 1), i = 0..n-1, n = 2^J.
///   heavisine(t) = 4 sin(4 pi t) - sign(t - 0.3) - sign(0.72 - t)
///   blocks(t)    = sum_j h_j (1 + sign(t - t_j)) / 2
std::vector<double> test_signal(SignalKind kind, std::size_t n);

double heavisine(double t);
double blocks(double t);

/// Population standard deviation over samples.
double population_sd(std::span<const double> h);

/// h * (snr * sigma / sd(h)). Throws for constant h or non-positive snr.
std::vector<double> rescale_to_snr(std::span<const double> h, double sigma2, double snr);

/// h + sigma e with e from NormalSource(seed); sigma2 = 0 returns h.
std::vector<double> add_noise(std::span<const double> h, double sigma2, std::uint64_t seed);

/// Noise-free samples for a spec, SNR rescaling applied when requested.
std::vector<double> synthesize_truth(const TargetSpec& spec);

/// Plain-text signal files: one decimal float per line, '#' starts a comment
/// line, blank lines are ignored. Values are written with 17 significant
/// digits so that a write/read cycle is lossless.
std::vector<double> read_signal_file(const std::filesystem::path& path);
void write_signal_file(const std::filesystem::path& path, std::span<const double> values);

}  // namespace softscale
