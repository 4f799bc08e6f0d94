#include "softscale/wavelet.hpp"

#include <stdexcept>
#include <string>

namespace softscale::wavelet {

WaveletFilter WaveletFilter::from_lowpass(std::vector<double> taps) {
  if (taps.size() < 2 || taps.size() % 2 != 0)
    throw std::invalid_argument("wavelet filter needs an even number of taps");
  WaveletFilter f;
  const std::size_t len = taps.size();
  f.highpass.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    f.highpass[i] = sign * taps[len - 1 - i];
  }
  f.lowpass = std::move(taps);
  return f;
}

WaveletFilter daubechies8() {
  // Daubechies (1992), Table 6.1, N = 4, normalised to sum sqrt(2).
  return WaveletFilter::from_lowpass({
      0.23037781330889650,
      0.71484657055291540,
      0.63088076792985890,
      -0.02798376941685985,
      -0.18703481171909308,
      0.030841381835560764,
      0.032883011666885,
      -0.010597401785069032,
  });
}

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("length must be a power of two, got " + std::to_string(n));
  int j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

std::vector<double> WaveletCoeffs::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), approx.begin(), approx.end());
  for (const auto& d : details) out.insert(out.end(), d.begin(), d.end());
  return out;
}

WaveletCoeffs WaveletCoeffs::unflatten(std::span<const double> w, int levels, int coarsest_level) {
  if (levels < 0 || coarsest_level < 0 || coarsest_level > levels)
    throw std::invalid_argument("unflatten: invalid level structure");
  if (w.size() != (std::size_t{1} << levels))
    throw std::invalid_argument("unflatten: expected 2^J coefficients");
  WaveletCoeffs c;
  c.levels = levels;
  c.coarsest_level = coarsest_level;
  std::size_t pos = std::size_t{1} << coarsest_level;
  c.approx.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
  for (int j = coarsest_level; j < levels; ++j) {
    const std::size_t len = std::size_t{1} << j;
    c.details.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(pos),
                           w.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return c;
}

std::span<const double> WaveletCoeffs::finest_details() const {
  if (details.empty()) return {};
  return details.back();
}

namespace {

// One analysis step on a periodic signal of even length m.
void analysis_step(std::span<const double> in, const WaveletFilter& f, std::vector<double>& lo,
                   std::vector<double>& hi) {
  const std::size_t m = in.size();
  const std::size_t half = m / 2;
  lo.assign(half, 0.0);
  hi.assign(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < f.length(); ++i) {
      const double x = in[(2 * k + i) % m];
      a += f.lowpass[i] * x;
      d += f.highpass[i] * x;
    }
    lo[k] = a;
    hi[k] = d;
  }
}

// Adjoint of analysis_step.
std::vector<double> synthesis_step(std::span<const double> lo, std::span<const double> hi,
                                   const WaveletFilter& f) {
  const std::size_t half = lo.size();
  const std::size_t m = 2 * half;
  std::vector<double> out(m, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t i = 0; i < f.length(); ++i)
      out[(2 * k + i) % m] += f.lowpass[i] * lo[k] + f.highpass[i] * hi[k];
  }
  return out;
}

}  // namespace

WaveletCoeffs dwt_decompose(std::span<const double> y, const WaveletFilter& filter,
                            int coarsest_level) {
  const int levels = log2_exact(y.size());
  if (coarsest_level < 0 || coarsest_level > levels)
    throw std::invalid_argument("coarsest level J0=" + std::to_string(coarsest_level) +
                                " outside [0, " + std::to_string(levels) + "]");
  WaveletCoeffs out;
  out.levels = levels;
  out.coarsest_level = coarsest_level;
  out.details.resize(static_cast<std::size_t>(levels - coarsest_level));

  std::vector<double> current(y.begin(), y.end());
  std::vector<double> lo;
  for (int j = levels - 1; j >= coarsest_level; --j) {
    analysis_step(current, filter, lo, out.details[static_cast<std::size_t>(j - coarsest_level)]);
    current.swap(lo);
  }
  out.approx = std::move(current);
  return out;
}

std::vector<double> dwt_reconstruct(const WaveletCoeffs& w, const WaveletFilter& filter) {
  if (w.coarsest_level < 0 || w.coarsest_level > w.levels ||
      w.details.size() != static_cast<std::size_t>(w.levels - w.coarsest_level) ||
      w.approx.size() != (std::size_t{1} << w.coarsest_level))
    throw std::invalid_argument("dwt_reconstruct: malformed level structure");
  for (std::size_t i = 0; i < w.details.size(); ++i) {
    if (w.details[i].size() != (std::size_t{1} << (w.coarsest_level + static_cast<int>(i))))
      throw std::invalid_argument("dwt_reconstruct: detail block " + std::to_string(i) +
                                  " has wrong length");
  }
  std::vector<double> current = w.approx;
  for (const auto& d : w.details) current = synthesis_step(current, d, filter);
  return current;
}

std::vector<double> analysis_matrix(std::size_t n, const WaveletFilter& filter,
                                    int coarsest_level) {
  const int levels = log2_exact(n);
  if (coarsest_level < 0 || coarsest_level > levels)
    throw std::invalid_argument("analysis_matrix: J0 out of range");

  // H starts as the identity; each level left-multiplies by
  // diag(W_m, I_{n-m}), where W_m stacks the periodised low-pass rows over
  // the high-pass rows for the leading m entries.
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;

  for (int j = levels; j > coarsest_level; --j) {
    const std::size_t m = std::size_t{1} << j;
    const std::size_t half = m / 2;
    std::vector<double> step(m * m, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      for (std::size_t i = 0; i < filter.length(); ++i) {
        const std::size_t col = (2 * k + i) % m;
        step[k * m + col] += filter.lowpass[i];
        step[(half + k) * m + col] += filter.highpass[i];
      }
    }
    std::vector<double> next(h);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) s += step[r * m + t] * h[t * n + c];
        next[r * n + c] = s;
      }
    }
    h.swap(next);
  }
  // Rows end up as (approx, d_J0, ..., d_J-1): each level's detail rows land
  // directly above the finer ones.
  return h;
}

WaveletTransform::WaveletTransform(std::size_t n, WaveletFilter filter, int coarsest_level)
    : n_(n), levels_(log2_exact(n)), coarsest_level_(coarsest_level), filter_(std::move(filter)) {
  if (coarsest_level_ < 0 || coarsest_level_ > levels_)
    throw std::invalid_argument("coarsest level J0=" + std::to_string(coarsest_level) +
                                " outside [0, " + std::to_string(levels_) + "]");
}

std::vector<double> WaveletTransform::forward(std::span<const double> y) const {
  if (y.size() != n_) throw std::invalid_argument("wavelet forward: dimension mismatch");
  return dwt_decompose(y, filter_, coarsest_level_).flatten();
}

std::vector<double> WaveletTransform::inverse(std::span<const double> z) const {
  if (z.size() != n_) throw std::invalid_argument("wavelet inverse: dimension mismatch");
  return dwt_reconstruct(WaveletCoeffs::unflatten(z, levels_, coarsest_level_), filter_);
}

}  // namespace softscale::wavelet
