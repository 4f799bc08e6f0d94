#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "softscale/shrinkage.hpp"

using namespace softscale;

TEST_CASE("soft and hard thresholding by hand") {
  const std::vector<double> z{3.0, -1.0, 0.5};
  CHECK(soft_threshold(z, 1.0) == std::vector<double>{2.0, 0.0, 0.0});
  CHECK(hard_threshold(z, 1.0) == std::vector<double>{3.0, 0.0, 0.0});
  CHECK(soft_threshold(z, 0.0) == z);
  CHECK(hard_threshold(z, 0.0) == z);
  CHECK_THROWS(soft_threshold(z, -0.1));
  CHECK_THROWS(hard_threshold(z, -0.1));
}

TEST_CASE("soft threshold matches the grid-search lasso") {
  softscale::NormalSource normal(11);
  for (int i = 0; i < 40; ++i) {
    // Inside the grid so the minimiser is representable.
    const double z = -5.0 + 10.0 * normal.uniform();
    const double theta = 2.0 * normal.uniform();
    const double b = soft_threshold(std::vector<double>{z}, theta)[0];
    CHECK(std::abs(b - oracle::lasso_grid(z, theta)) <= 1e-6);
  }
}

TEST_CASE("soft threshold composes additively") {
  const auto z = oracle::gaussian(200, 5, 3.0);
  const auto twice = soft_threshold(soft_threshold(z, 0.7), 1.1);
  CHECK(oracle::max_abs_diff(twice, soft_threshold(z, 1.8)) <= 1e-12);
}

TEST_CASE("lst_fit by hand") {
  const CoeffSet z({5.0, 3.0, 1.0});
  const LstFit fit = lst_fit(z, 1);
  CHECK(fit.threshold == 3.0);
  CHECK(fit.active == std::vector<std::size_t>{0});
  CHECK(fit.coeffs == std::vector<double>{2.0, 0.0, 0.0});
  const LstFit zero = lst_fit(z, 0);
  CHECK(zero.threshold == 5.0);
  CHECK(zero.active.empty());
  for (double v : zero.coeffs) CHECK(v == 0.0);
  CHECK_THROWS_AS(lst_fit(z, 3), std::out_of_range);
}

TEST_CASE("k = n-1 leaves only the smallest coordinate at zero") {
  const auto v = oracle::gaussian(16, 21);
  const CoeffSet z(v);
  const LstFit fit = lst_fit(z, 15);
  std::size_t smallest = 0;
  for (std::size_t j = 1; j < 16; ++j)
    if (std::abs(v[j]) < std::abs(v[smallest])) smallest = j;
  for (std::size_t j = 0; j < 16; ++j) CHECK((fit.coeffs[j] == 0.0) == (j == smallest));
}

TEST_CASE("path agrees with brute force and with lst_fit") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto v = oracle::gaussian(32, 300 + s, 2.0);
    const CoeffSet z(v);
    const auto path = lst_path(z, 31);
    REQUIRE(path.size() == 32);
    for (std::size_t k = 0; k < 32; ++k) {
      CHECK(path[k].k == k);
      CHECK(path[k].active.size() == k);
      CHECK(oracle::max_abs_diff(path[k].coeffs, oracle::lst_bruteforce(v, k)) <= 1e-14);
      CHECK(path[k].coeffs == lst_fit(z, k).coeffs);
      if (k > 0) CHECK(path[k].threshold <= path[k - 1].threshold);
      for (std::size_t j = 0; j < 32; ++j) {
        const bool active =
            std::find(path[k].active.begin(), path[k].active.end(), j) != path[k].active.end();
        CHECK(active == (path[k].coeffs[j] != 0.0));
        if (active) CHECK(std::abs(v[j]) > path[k].threshold);
        else CHECK(std::abs(v[j]) <= path[k].threshold);
        // Survivors only grow as the threshold falls.
        if (k > 0 && path[k - 1].coeffs[j] != 0.0)
          CHECK(std::abs(path[k - 1].coeffs[j]) <= std::abs(path[k].coeffs[j]));
      }
    }
  }
  CHECK_THROWS(lst_path(CoeffSet({1.0, 2.0}), 2));
}

TEST_CASE("adaptive scaling by hand") {
  const CoeffSet z({5.0, 3.0, 1.0});
  const ScaledFit sf = adaptive_scale(lst_fit(z, 1), z);
  CHECK(sf.variant == Scaling::adaptive);
  CHECK(sf.alphas[0] == doctest::Approx(1.6));
  CHECK(sf.scaled[0] == doctest::Approx(3.2));
  CHECK(sf.scaled[0] == doctest::Approx(5.0 - 9.0 / 5.0));
  CHECK(sf.alphas[1] == 1.0);
  CHECK(sf.scaled[1] == 0.0);
  const ScaledFit none = adaptive_scale(lst_fit(z, 0), z);
  for (double v : none.scaled) CHECK(v == 0.0);
}

TEST_CASE("adaptive closed form on random fits") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto v = oracle::gaussian(40, 500 + s, 3.0);
    const CoeffSet z(v);
    const std::size_t k = s % 40;
    const ScaledFit sf = adaptive_scale(lst_fit(z, k), z);
    const double t = sf.base.threshold;
    for (std::size_t j : sf.base.active) {
      CHECK(sf.alphas[j] > 1.0);
      CHECK(std::abs(sf.scaled[j] * v[j] - (v[j] * v[j] - t * t)) <= 1e-12 * v[j] * v[j]);
    }
  }
}

TEST_CASE("adaptive scaling approaches hard thresholding") {
  // With t = 1, |scaled - z| = 1/|z| for z = 2, 10, 100.
  const CoeffSet z({100.0, -10.0, 2.0, 1.0, 0.5});
  const ScaledFit sf = adaptive_scale(lst_fit(z, 3), z);
  const auto hard = hard_threshold(z.values(), 1.0);
  double prev = 1e9;
  for (std::size_t j : {2u, 1u, 0u}) {
    const double gap = std::abs(sf.scaled[j] - hard[j]);
    CHECK(gap == doctest::Approx(1.0 / std::abs(z[j])));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("single scaling parameter") {
  const CoeffSet z({5.0, 3.0, 1.0});
  const ScaledFit sf = ssp_scale(lst_fit(z, 1), z, 1.0);
  CHECK(sf.variant == Scaling::ssp);
  CHECK(sf.alphas[0] == doctest::Approx(2.75));
  CHECK(sf.scaled[0] == doctest::Approx(5.5));
  CHECK(sf.alphas[1] == 1.0);

  // k = 0: the unscaled zero fit.
  const ScaledFit zero = ssp_scale(lst_fit(z, 0), z, 1.0);
  CHECK(zero.variant == Scaling::none);
  for (double v : zero.scaled) CHECK(v == 0.0);

  // Noiseless spike: the threshold at k = 1 is zero, so the fit is unshrunk
  // and alpha = 1.
  const CoeffSet spike({4.0, 0.0, 0.0});
  const ScaledFit s2 = ssp_scale(lst_fit(spike, 1), spike, 0.0);
  CHECK(s2.alphas[0] == doctest::Approx(1.0));
  CHECK(s2.scaled[0] == doctest::Approx(4.0));

  // The mixed-scale form on the same fit, evaluated by hand:
  // (10 / (sqrt(3) * 1) + 1/3) / (4/3).
  const ScaledFit lit = ssp_scale(lst_fit(z, 1), z, 1.0, SspFormula::mixed_scale);
  CHECK(lit.alphas[0] == doctest::Approx((10.0 / std::sqrt(3.0) + 1.0 / 3.0) / (4.0 / 3.0)));
}

TEST_CASE("scaling never changes the active set") {
  const auto v = oracle::gaussian(30, 77, 2.0);
  const CoeffSet z(v);
  for (std::size_t k = 0; k < 30; ++k) {
    const LstFit fit = lst_fit(z, k);
    for (const ScaledFit& sf : {unscaled(fit), adaptive_scale(fit, z), ssp_scale(fit, z, 1.0),
                                fixed_scale(fit, 1.5)}) {
      CHECK(sf.base.active == fit.active);
      for (std::size_t j = 0; j < 30; ++j) {
        CHECK((sf.scaled[j] != 0.0) == (fit.coeffs[j] != 0.0));
        if (fit.coeffs[j] == 0.0) CHECK(sf.alphas[j] == 1.0);
      }
    }
    for (double a : unscaled(fit).alphas) CHECK(a == 1.0);
  }
}

TEST_CASE("inconsistent fit and coefficients are rejected") {
  const CoeffSet z({5.0, 3.0, 1.0});
  const CoeffSet other({1.0, 3.0, 5.0});
  CHECK_THROWS(adaptive_scale(lst_fit(z, 1), other));
  CHECK_THROWS(ssp_scale(lst_fit(z, 1), CoeffSet({5.0, 3.0}), 1.0));
}

TEST_CASE("universal threshold") {
  CHECK(universal_threshold(1024, 1.0) == doctest::Approx(3.72333).epsilon(1e-5));
  CHECK_THROWS(universal_threshold(1024, 0.0));
  // sqrt(2 log 4) = 1.665
  const CoeffSet small({0.5, -1.0, 1.5, 0.1});
  const LstFit fit = universal_fit(small, 1.0);
  CHECK(fit.k == 0);
  for (double v : fit.coeffs) CHECK(v == 0.0);
  const CoeffSet big({10.0, -1.0, 0.0, 0.2});
  const LstFit f2 = universal_fit(big, 1.0);
  CHECK(f2.k == 1);
  CHECK(f2.coeffs[0] == doctest::Approx(10.0 - std::sqrt(2.0 * std::log(4.0))));
}

TEST_CASE("universal threshold keeps nothing on pure noise") {
  std::size_t zero = 0;
  const std::size_t reps = 1000;
  for (std::size_t r = 0; r < reps; ++r)
    if (universal_fit(CoeffSet(oracle::gaussian(1024, 9000 + r)), 1.0).k == 0) ++zero;
  CHECK(static_cast<double>(zero) / static_cast<double>(reps) >= 0.8);
}
