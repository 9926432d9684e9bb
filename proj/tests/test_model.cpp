#include <doctest.h>

#include <cmath>
#include <random>

#include "psa/errors.hpp"
#include "psa/model.hpp"
#include "test_util.hpp"

using namespace psa;
using psa::testing::scalar_system;
using psa::testing::unit_weights;

TEST_CASE("validate_system") {
  CHECK_NOTHROW(validate_system(scalar_system({0.0}, {0.0})));

  auto code_of = [](TimeDelaySystem s) {
    try {
      validate_system(std::move(s));
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ParseError;
  };
  CHECK(code_of(scalar_system({0.0, 1.0}, {0.0, -1.0})) == ErrorCode::NonpositiveDelay);
  CHECK(code_of(scalar_system({0.0, 1.0}, {0.5, 1.0})) == ErrorCode::MissingZeroDelay);

  TimeDelaySystem mixed;
  mixed.delays = {0.0, 1.0};
  mixed.matrices = {RMatrix::Zero(2, 2), RMatrix::Zero(3, 3)};
  CHECK(code_of(mixed) == ErrorCode::DimensionMismatch);
}

TEST_CASE("validate_perturbation") {
  const auto sys = scalar_system({0.0, 1.0}, {0.0, 1.0});
  PerturbationSpec p{{1.0, kInfiniteWeight}, 0.1};
  CHECK_NOTHROW(validate_perturbation(p, sys));
  p.weights = {kInfiniteWeight, kInfiniteWeight};
  CHECK_THROWS_AS(validate_perturbation(p, sys), Error);
  p.weights = {1.0, -1.0};
  CHECK_THROWS_AS(validate_perturbation(p, sys), Error);
  p.weights = {1.0, 1.0};
  p.epsilon = 0.0;
  CHECK_THROWS_AS(validate_perturbation(p, sys), Error);
}

TEST_CASE("eval_F") {
  CHECK(std::abs(eval_F(scalar_system({0.0}, {0.0}), 1.0)(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(eval_F(scalar_system({2.0}, {0.0}), 2.0)(0, 0)) < 1e-15);
  CHECK(std::abs(eval_F(scalar_system({0.0, 1.0}, {0.0, 1.0}), 0.0)(0, 0) + 1.0) < 1e-15);
}

TEST_CASE("eval_weight") {
  TimeDelaySystem sys;
  sys.delays = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8};
  sys.matrices.assign(8, RMatrix::Zero(1, 1));
  CHECK(eval_weight(unit_weights(sys, 0.1), sys, 0.0) == doctest::Approx(8.0));

  const auto one = scalar_system({0.0, 1.0}, {0.0, 1.0});
  PerturbationSpec p{{1.0, kInfiniteWeight}, 0.1};
  CHECK(eval_weight(p, one, 5.0) == doctest::Approx(1.0));
  CHECK(eval_weight(unit_weights(one, 0.1), one, std::log(2.0)) == doctest::Approx(1.5));
}

TEST_CASE("eval_weight is decreasing in sigma") {
  const auto sys = scalar_system({0.0, 1.0, 1.0}, {0.0, 0.3, 1.1});
  const auto p = unit_weights(sys, 0.1);
  double prev = eval_weight(p, sys, -3.0);
  for (double s = -2.9; s < 3.0; s += 0.1) {
    const double w = eval_weight(p, sys, s);
    CHECK(w < prev);
    prev = w;
  }
  // Only tau_0 carries a finite weight: constant.
  PerturbationSpec only0{{2.0, kInfiniteWeight, kInfiniteWeight}, 0.1};
  CHECK(eval_weight(only0, sys, -1.0) == eval_weight(only0, sys, 4.0));
}

TEST_CASE("eval_f") {
  const auto zero = scalar_system({0.0}, {0.0});
  const auto p = unit_weights(zero, 0.25);
  CHECK(eval_f(zero, p, 2.0) == doctest::Approx(0.5));
  CHECK(eval_f(zero, p, 0.25) == doctest::Approx(1.0 / 0.25));
  CHECK(std::isinf(eval_f(zero, p, 0.0)));

  const auto one = scalar_system({0.0, 1.0}, {0.0, 1.0});
  // mpmath: (1 + e^-1) / |1 - e^-1|
  CHECK(eval_f(one, unit_weights(one, 0.1), 1.0) ==
        doctest::Approx(2.1639534137386528488).epsilon(1e-14));
}

TEST_CASE("eval_f decays far to the right") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = psa::testing::random_system(rng, 3, 2);
    const auto p = unit_weights(sys, 0.1);
    const double re = 1e3 * (1.0 + matrix_scale(sys));
    CHECK(eval_f(sys, p, cplx(re, 0.0)) < 1e-2);
    CHECK(eval_f(sys, p, cplx(re, re)) < eval_f(sys, p, cplx(re / 100, re / 100)));
  }
}

TEST_CASE("shift_system examples") {
  const auto one = scalar_system({0.0, 1.0}, {0.0, 1.0});
  const auto p = unit_weights(one, 0.1);

  auto [same, same_p] = shift_system(one, p, 0.0);
  CHECK(same.matrices[1](0, 0) == 1.0);
  CHECK(same_p.weights == p.weights);

  const auto three = scalar_system({3.0}, {0.0});
  auto [s3, p3] = shift_system(three, unit_weights(three, 0.1), 3.0);
  CHECK(s3.matrices[0](0, 0) == 0.0);
  CHECK(p3.weights[0] == 1.0);

  auto [s, sp] = shift_system(one, p, std::log(2.0));
  CHECK(s.matrices[1](0, 0) == doctest::Approx(0.5));
  CHECK(sp.weights[1] == doctest::Approx(2.0));
  for (cplx l : {cplx(0.3, 0.2), cplx(-0.4, 2.0), cplx(1.0, -0.7)}) {
    CHECK(eval_f(s, sp, l) == doctest::Approx(eval_f(one, p, l + std::log(2.0))).epsilon(1e-12));
  }
}

TEST_CASE("shift consistency on random systems") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sys = psa::testing::random_system(rng, 3, 2);
    auto p = unit_weights(sys, 0.1);
    p.weights[1] = kInfiniteWeight;
    const double alpha = u(rng);
    auto [s, sp] = shift_system(sys, p, alpha);
    for (int k = 0; k < 10; ++k) {
      const cplx l(u(rng), u(rng));
      CHECK(eval_f(s, sp, l) == doctest::Approx(eval_f(sys, p, l + alpha)).epsilon(1e-12));
    }
  }
}
