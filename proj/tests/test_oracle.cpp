#include <doctest.h>

#include <cmath>
#include <random>

#include "psa/errors.hpp"
#include "psa/oracle.hpp"
#include "psa/predictor.hpp"
#include "test_util.hpp"

using namespace psa;
using psa::testing::random_system;
using psa::testing::scalar_system;
using psa::testing::unit_weights;

TEST_CASE("validate_region") {
  CHECK_NOTHROW(validate_region({-1, 1, -1, 1, 3, 3}));
  CHECK_THROWS_AS(validate_region({1, -1, -1, 1, 3, 3}), Error);
  CHECK_THROWS_AS(validate_region({-1, 1, -1, 1, 1, 3}), Error);
}

TEST_CASE("grid_f layout") {
  const auto sys = scalar_system({0.0}, {0.0});
  const auto p = unit_weights(sys, 0.25);
  const GridRegion r{1.0, 2.0, 0.0, 1.0, 3, 2};
  const RMatrix f = grid_f(sys, p, r);
  REQUIRE(f.rows() == 2);
  REQUIRE(f.cols() == 3);
  CHECK(f(0, 0) == doctest::Approx(1.0));
  CHECK(f(1, 2) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("grid_psa on the disk case") {
  const auto sys = scalar_system({0.0}, {0.0});
  const auto p = unit_weights(sys, 0.25);
  const auto g = grid_psa(sys, p, {-0.5, 0.5, -0.5, 0.5, 51, 51});
  CHECK(g.value == doctest::Approx(0.25).epsilon(2e-5));
  CHECK(g.resolution < 1e-4);
  CHECK(g.value <= 0.25 + 1e-12);
}

TEST_CASE("grid_psa region errors") {
  const auto sys = scalar_system({0.0}, {0.0});
  const auto p = unit_weights(sys, 0.25);
  try {
    grid_psa(sys, p, {-0.5, 0.1, -0.5, 0.5, 21, 21});
    FAIL("expected RegionTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegionTooSmall);
  }
  try {
    grid_psa(sys, p, {1.0, 2.0, -0.5, 0.5, 5, 5});
    FAIL("expected EmptyPseudospectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyPseudospectrum);
  }
}

TEST_CASE("bounding_region contains the pseudospectrum") {
  std::mt19937_64 rng(6);
  const auto sys = random_system(rng, 2, 2);
  const auto p = unit_weights(sys, 0.1);
  const auto r = bounding_region(sys, p, -1.0, 0.05);
  CHECK(r.re_min == doctest::Approx(-1.0));
  const RMatrix f = grid_f(sys, p, r);
  CHECK(f.col(f.cols() - 1).maxCoeff() < 10.0);
  CHECK(f.row(f.rows() - 1).maxCoeff() < 10.0);
}

TEST_CASE("contours of the disk lie on the circle") {
  const auto sys = scalar_system({0.0}, {0.0});
  const auto p = unit_weights(sys, 0.25);
  const auto set = contours(sys, p, {-0.5, 0.5, -0.5, 0.5, 81, 81});
  CHECK(set.level == doctest::Approx(4.0));
  REQUIRE(set.polylines.size() == 1);
  const auto& line = set.polylines.front();
  CHECK(line.size() > 20);
  CHECK(std::abs(line.front() - line.back()) < 1e-12);
  for (cplx z : line) CHECK(std::abs(std::abs(z) - 0.25) < 5e-3);
}

TEST_CASE("contours_from_grid with two separate blobs") {
  RMatrix v = RMatrix::Zero(5, 9);
  v(2, 2) = 1.0;
  v(2, 6) = 1.0;
  const auto set = contours_from_grid(v, {0, 8, 0, 4, 9, 5}, 0.5);
  CHECK(set.polylines.size() == 2);
  CHECK(contours_from_grid(RMatrix::Zero(4, 4), {0, 1, 0, 1, 4, 4}, 0.5).polylines.empty());
}

TEST_CASE("alpha_fN_profile is decreasing to the right of alpha(F_N)") {
  std::mt19937_64 rng(15);
  const auto sys = random_system(rng, 2, 1);
  const auto d = assemble(sys, 10);
  const double a = spectral_abscissa_FN(d);
  std::vector<double> sig;
  for (int k = 1; k <= 8; ++k) sig.push_back(a + 0.1 * k);
  const auto prof = alpha_fN_profile(d, unit_weights(sys, 0.1), sig, 20.0, 400);
  for (std::size_t k = 1; k < prof.size(); ++k) CHECK(prof[k] < prof[k - 1]);
}
