#include "softscale/signals.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "softscale/random.hpp"

namespace softscale {

namespace {

double signum(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Knot positions and jump heights of the standard blocks test signal.
constexpr std::array<double, 11> kBlockKnots{0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                                             0.44, 0.65, 0.76, 0.78, 0.81};
constexpr std::array<double, 11> kBlockHeights{4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                               2.1, 4.3,  -3.1, 2.1, -4.2};

// Basis column k (1-based) at x; mirrors trig_design_matrix.
double trig_basis(std::size_t k, std::size_t n, double x) {
  const double kd = static_cast<double>(k);
  if (k == 1) return 1.0;
  if (k == n) return std::cos(kd * x / 2.0);
  if (k % 2 == 0) return std::numbers::sqrt2 * std::cos(kd * x / 2.0);
  return std::numbers::sqrt2 * std::sin((kd - 1.0) * x / 2.0);
}

}  // namespace

std::string_view to_string(SignalKind k) {
  switch (k) {
    case SignalKind::trig: return "trig";
    case SignalKind::heavisine: return "heavisine";
    case SignalKind::blocks: return "blocks";
  }
  return "?";
}

SignalKind signal_kind_from_string(std::string_view name) {
  if (name == "trig") return SignalKind::trig;
  if (name == "heavisine") return SignalKind::heavisine;
  if (name == "blocks") return SignalKind::blocks;
  throw std::invalid_argument("unknown signal kind '" + std::string(name) + "'");
}

void TargetSpec::validate() const {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("target: negative noise variance");
  if (snr && !(*snr > 0.0)) throw std::invalid_argument("target: snr must be positive");
  if (kind == SignalKind::trig) {
    if (n < 10 || n % 2 != 0) throw std::invalid_argument("trig target needs an even n >= 10");
    if (true_components.size() != beta.size())
      throw std::invalid_argument("trig target: component and beta counts differ");
    for (std::size_t k : true_components)
      if (k < 1 || k > n) throw std::invalid_argument("trig target: component index out of range");
    for (double b : beta)
      if (!std::isfinite(b)) throw std::invalid_argument("trig target: non-finite beta");
  } else if (!is_power_of_two(n)) {
    throw std::invalid_argument("test signal length must be a power of two");
  }
}

std::vector<double> trig_target(std::size_t n, std::span<const std::size_t> components,
                                std::span<const double> beta) {
  TargetSpec spec;
  spec.n = n;
  spec.true_components.assign(components.begin(), components.end());
  spec.beta.assign(beta.begin(), beta.end());
  spec.validate();
  std::vector<double> h(n, 0.0);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = step * static_cast<double>(i);
    for (std::size_t c = 0; c < components.size(); ++c)
      h[i] += beta[c] * trig_basis(components[c], n, x);
  }
  return h;
}

std::vector<double> trig_target(std::size_t n) {
  const TargetSpec spec;
  return trig_target(n, spec.true_components, spec.beta);
}

double heavisine(double t) {
  return 4.0 * std::sin(4.0 * std::numbers::pi * t) - signum(t - 0.3) - signum(0.72 - t);
}

double blocks(double t) {
  double v = 0.0;
  for (std::size_t j = 0; j < kBlockKnots.size(); ++j)
    v += kBlockHeights[j] * (1.0 + signum(t - kBlockKnots[j])) / 2.0;
  return v;
}

std::vector<double> test_signal(SignalKind kind, std::size_t n) {
  if (kind == SignalKind::trig) throw std::invalid_argument("test_signal: use trig_target");
  if (!is_power_of_two(n) || n < 2)
    throw std::invalid_argument("test signal length must be a power of two, got " +
                                std::to_string(n));
  std::vector<double> h(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / denom;
    h[i] = kind == SignalKind::heavisine ? heavisine(t) : blocks(t);
  }
  return h;
}

double population_sd(std::span<const double> h) {
  if (h.empty()) return 0.0;
  double mean = 0.0;
  for (double v : h) mean += v;
  mean /= static_cast<double>(h.size());
  double ss = 0.0;
  for (double v : h) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(h.size()));
}

std::vector<double> rescale_to_snr(std::span<const double> h, double sigma2, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("snr rescaling needs a positive noise variance");
  const double sd = population_sd(h);
  if (!(sd > 0.0)) throw std::invalid_argument("cannot rescale a constant signal");
  const double factor = snr * std::sqrt(sigma2) / sd;
  std::vector<double> out(h.begin(), h.end());
  for (double& v : out) v *= factor;
  return out;
}

std::vector<double> add_noise(std::span<const double> h, double sigma2, std::uint64_t seed) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
  std::vector<double> y(h.begin(), h.end());
  if (sigma2 == 0.0) return y;
  const double sigma = std::sqrt(sigma2);
  NormalSource normal(seed);
  for (double& v : y) v += sigma * normal();
  return y;
}

std::vector<double> synthesize_truth(const TargetSpec& spec) {
  spec.validate();
  std::vector<double> h = spec.kind == SignalKind::trig
                              ? trig_target(spec.n, spec.true_components, spec.beta)
                              : test_signal(spec.kind, spec.n);
  if (spec.snr) {
    // With sigma2 = 0 the SNR is undefined; scale against unit variance so
    // that noiseless runs share the amplitude of sigma2 = 1 runs.
    h = rescale_to_snr(h, spec.sigma2 > 0.0 ? spec.sigma2 : 1.0, *spec.snr);
  }
  return h;
}

std::vector<double> read_signal_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal file " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line.substr(first));
    double v;
    std::string rest;
    if (!(fields >> v) || (fields >> rest))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected one number per line");
    values.push_back(v);
  }
  return values;
}

void write_signal_file(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write signal file " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double v : values) out << v << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace softscale
