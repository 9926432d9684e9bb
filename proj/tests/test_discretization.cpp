#include <doctest.h>

#include <cmath>
#include <random>

#include "psa/discretization.hpp"
#include "psa/errors.hpp"
#include "psa/numerics.hpp"
#include "test_util.hpp"

using namespace psa;
using psa::testing::random_system;
using psa::testing::scalar_system;

namespace {

CMatrix resolvent_transfer(const Discretization& d, cplx lambda) {
  const auto dim = d.A_N.rows();
  const CMatrix M = lambda * CMatrix::Identity(dim, dim) - d.A_N.cast<cplx>();
  return d.B_N.transpose().cast<cplx>() * numerics::solve_complex(M, d.B_N.cast<cplx>());
}

}  // namespace

TEST_CASE("chebyshev_mesh") {
  const Mesh m1 = chebyshev_mesh(1, 1.0);
  CHECK(m1.points == std::vector<double>{-1.0, 0.0});

  const Mesh m2 = chebyshev_mesh(2, 2.0);
  REQUIRE(m2.points.size() == 3);
  CHECK(m2.points[0] == -2.0);
  CHECK(m2.points[1] == doctest::Approx(-1.0));
  CHECK(m2.points[2] == 0.0);

  const Mesh m = chebyshev_mesh(15, 0.8);
  for (std::size_t k = 1; k < m.points.size(); ++k) CHECK(m.points[k] > m.points[k - 1]);
  CHECK(m.points.front() == -0.8);
  CHECK(m.points.back() == 0.0);
  CHECK(std::abs(m.barycentric_weights.front()) == 0.5);
  CHECK(std::abs(m.barycentric_weights[3]) == 1.0);

  CHECK_THROWS_AS(chebyshev_mesh(0, 1.0), Error);
}

TEST_CASE("differentiation matrix on N = 1 and N = 2") {
  RMatrix D1 = differentiation_matrix(chebyshev_mesh(1, 1.0));
  RMatrix expect(2, 2);
  expect << -1, 1, -1, 1;
  CHECK((D1 - expect).norm() < 1e-14);

  RMatrix D2 = differentiation_matrix(chebyshev_mesh(2, 2.0));
  RMatrix expect2(3, 3);
  expect2 << -1.5, 2, -0.5, -0.5, 0, 0.5, 0.5, -2, 1.5;
  CHECK((D2 - expect2).norm() < 1e-13);
}

TEST_CASE("differentiation matrix is exact on polynomials and annihilates constants") {
  for (int N : {3, 8, 15}) {
    const Mesh mesh = chebyshev_mesh(N, 1.3);
    const RMatrix D = differentiation_matrix(mesh);
    const RVector ones = RVector::Ones(N + 1);
    CHECK((D * ones).cwiseAbs().maxCoeff() < 1e-11);
    for (int deg = 1; deg <= N; ++deg) {
      RVector p(N + 1), dp(N + 1);
      for (int k = 0; k <= N; ++k) {
        p(k) = std::pow(mesh.points[k], deg);
        dp(k) = deg * std::pow(mesh.points[k], deg - 1);
      }
      CHECK((D * p - dp).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + dp.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("lagrange_values") {
  const Mesh mesh = chebyshev_mesh(6, 1.0);
  for (int k = 0; k <= 6; ++k) {
    const RVector l = lagrange_values(mesh, mesh.points[k]);
    CHECK(l(k) == 1.0);
    CHECK(l.cwiseAbs().sum() == 1.0);
  }
  for (double t : {-0.95, -0.5, -0.123, -0.001}) {
    const RVector l = lagrange_values(mesh, t);
    CHECK(l.sum() == doctest::Approx(1.0).epsilon(1e-13));
    RVector cube(7);
    for (int k = 0; k <= 6; ++k) cube(k) = std::pow(mesh.points[k], 3);
    CHECK(l.dot(cube) == doctest::Approx(t * t * t).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lagrange_values(mesh, -1.1), Error);
  CHECK_THROWS_AS(lagrange_values(mesh, 0.1), Error);
}

TEST_CASE("assemble dimensions and delay-free system") {
  const auto sys = scalar_system({0.0, -1.0}, {0.0, 1.0});
  const auto d = assemble(sys, 4);
  CHECK(d.A_N.rows() == 5);
  CHECK(d.B_N.rows() == 5);
  CHECK(d.B_N(4, 0) == 1.0);
  CHECK(d.B_N.topRows(4).norm() == 0.0);

  TimeDelaySystem free;
  free.delays = {0.0};
  RMatrix A0(2, 2);
  A0 << -1, 3, 0, -2;
  free.matrices = {A0};
  const auto d0 = assemble(free, 0);
  CHECK((d0.A_N - A0).norm() == 0.0);
  CHECK(spectral_abscissa_FN(d0) == doctest::Approx(-1.0));
  CHECK(spectral_abscissa_FN(assemble(free, 5)) == doctest::Approx(-1.0));
}

TEST_CASE("p_N approximates exp(-lambda tau) with spectral accuracy") {
  const auto sys = scalar_system({0.0, 1.0, 1.0}, {0.0, 0.4, 1.0});
  double prev = 1.0;
  for (int N : {4, 8, 12, 16}) {
    const auto d = assemble(sys, N);
    double err = 0.0;
    for (cplx l : {cplx(0.1, 0.5), cplx(-0.2, 1.5), cplx(0.5, -2.0)}) {
      const auto p = eval_pN_delays(d, l);
      err = std::max(err, std::abs(p[0] - std::exp(-l * 0.4)));
      err = std::max(err, std::abs(p[1] - std::exp(-l * 1.0)));
      CHECK(std::abs(eval_pN(d, 0.4, l) - p[0]) < 1e-14);
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("p_N interpolates exactly at lambda = 0 and is conjugate symmetric") {
  const auto d = assemble(scalar_system({0.0, 1.0}, {0.0, 0.7}), 7);
  CHECK(std::abs(eval_pN(d, 0.7, 0.0) - 1.0) < 1e-12);
  const cplx l(0.3, 1.1);
  CHECK(std::abs(eval_pN(d, 0.7, std::conj(l)) - std::conj(eval_pN(d, 0.7, l))) < 1e-14);
}

TEST_CASE("transfer identity B^T (lambda I - A_N)^-1 B = F_N(lambda)^-1") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = random_system(rng, 1 + trial % 3, 1 + trial % 2);
    const auto d = assemble(sys, 3 + trial % 10);
    const cplx l(u(rng) + 3.0, u(rng));
    const CMatrix lhs = resolvent_transfer(d, l);
    const CMatrix rhs = eval_FN(d, l).inverse();
    CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
  }
}

TEST_CASE("eigenvalues of A_N approximate the characteristic roots") {
  // Rightmost pair of lambda + e^{-lambda} = 0.
  const cplx root(-0.31813150520476413531, 1.3372357014306894089);
  const auto d = assemble(scalar_system({0.0, -1.0}, {0.0, 1.0}), 15);
  const auto ev = numerics::eig_real(d.A_N).values;
  double best = 1e9;
  for (Eigen::Index k = 0; k < ev.size(); ++k) best = std::min(best, std::abs(ev(k) - root));
  CHECK(best < 1e-10);
  CHECK(spectral_abscissa_FN(d) == doctest::Approx(root.real()).epsilon(1e-9));
  CHECK(std::abs(eval_FN(d, root)(0, 0)) < 1e-9);
}
