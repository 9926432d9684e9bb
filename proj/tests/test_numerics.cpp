#include <doctest.h>

#include <algorithm>
#include <random>

#include "psa/errors.hpp"
#include "psa/numerics.hpp"

using namespace psa;
using namespace psa::numerics;

namespace {

std::vector<cplx> sorted(const CVector& v) {
  std::vector<cplx> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

TEST_CASE("eig_real on diagonal, rotation and companion matrices") {
  RMatrix D = RVector::LinSpaced(3, 1.0, 3.0).asDiagonal();
  auto e = sorted(eig_real(D).values);
  CHECK(std::abs(e[0] - 1.0) < 1e-14);
  CHECK(std::abs(e[2] - 3.0) < 1e-14);

  RMatrix R(2, 2);
  R << 0, 1, -1, 0;
  e = sorted(eig_real(R).values);
  CHECK(std::abs(e[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(e[1] - cplx(0, 1)) < 1e-14);

  // lambda^2 - 3 lambda + 2 = (lambda - 1)(lambda - 2)
  RMatrix C(2, 2);
  C << 3, -2, 1, 0;
  e = sorted(eig_real(C).values);
  CHECK(std::abs(e[0] - 1.0) < 1e-13);
  CHECK(std::abs(e[1] - 2.0) < 1e-13);
}

TEST_CASE("eig_real eigenvectors have small backward error") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  RMatrix A(6, 6);
  for (auto& x : A.reshaped()) x = g(rng);
  const auto e = eig_real(A, true);
  REQUIRE(e.vectors);
  for (Eigen::Index k = 0; k < 6; ++k) {
    const CVector v = e.vectors->col(k);
    const double err = (A.cast<cplx>() * v - e.values(k) * v).norm() / v.norm();
    CHECK(err <= 1e3 * 2.2e-16 * A.norm());
  }
}

TEST_CASE("svd_complex singular values") {
  auto s = svd_complex(CMatrix::Identity(3, 3)).values;
  CHECK((s.array() - 1.0).abs().maxCoeff() < 1e-15);

  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = cplx(0, 4);
  s = svd_complex(D).values;
  CHECK(s(0) == doctest::Approx(4.0));
  CHECK(s(1) == doctest::Approx(3.0));

  CVector u = CVector::Random(4).normalized();
  CVector v = CVector::Random(4).normalized();
  s = svd_complex(u * v.adjoint()).values;
  CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s.tail(3).maxCoeff() < 1e-14);

  CHECK(sigma_min(D) == doctest::Approx(3.0));
}

TEST_CASE("svd_complex reconstruction") {
  CMatrix A = CMatrix::Random(5, 5);
  const auto s = svd_complex(A, true);
  const CMatrix back = *s.U * s.values.cast<cplx>().asDiagonal() * s.V->adjoint();
  CHECK((back - A).norm() <= 1e-13 * A.norm());
}

TEST_CASE("solve_complex") {
  CMatrix B = CMatrix::Random(3, 2);
  CHECK((solve_complex(CMatrix::Identity(3, 3), B) - B).norm() < 1e-15);

  CMatrix D = CMatrix::Zero(3, 3);
  D.diagonal() << 2.0, cplx(0, 1), -4.0;
  const CMatrix X = solve_complex(D, B);
  CHECK(std::abs(X(1, 0) - B(1, 0) / cplx(0, 1)) < 1e-15);

  CMatrix A = CMatrix::Random(5, 5);
  CMatrix rhs = CMatrix::Random(5, 1);
  const CMatrix sol = solve_complex(A, rhs);
  CHECK((A * sol - rhs).norm() <= 1e-12 * A.norm() * sol.norm());

  CHECK_THROWS_AS(solve_complex(CMatrix::Zero(2, 2), CMatrix::Ones(2, 1)), Error);
}

TEST_CASE("least_squares_real") {
  RMatrix J = RMatrix::Random(4, 4);
  RVector r = RVector::Random(4);
  const RVector d = least_squares_real(J, r).step;
  CHECK((J * d + r).norm() < 1e-12);

  // Consistent overdetermined system.
  RMatrix T = RMatrix::Random(7, 3);
  RVector x = RVector::Random(3);
  CHECK((least_squares_real(T, -T * x).step - x).norm() < 1e-12);

  // Residual orthogonal to the range.
  RVector rr = RVector::Random(7);
  const RVector dd = least_squares_real(T, rr).step;
  CHECK((T.transpose() * (T * dd + rr)).norm() <= 1e-13 * T.norm() * T.norm() * rr.norm() * 10);

  RMatrix deficient = RMatrix::Zero(5, 2);
  deficient.col(0).setOnes();
  deficient.col(1).setOnes();
  try {
    least_squares_real(deficient, RVector::Ones(5));
    FAIL("expected rank deficiency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
    CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
  }
}
