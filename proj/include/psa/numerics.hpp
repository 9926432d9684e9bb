#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace psa {

using cplx = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace numerics {

struct EigenResult {
  CVector values;
  std::optional<CMatrix> vectors;  // columns, present when requested
};

struct SvdResult {
  RVector values;  // descending
  std::optional<CMatrix> U;
  std::optional<CMatrix> V;
};

/// Full spectrum of a real square matrix.  Throws EigensolverFailure.
EigenResult eig_real(const RMatrix& A, bool want_vectors = false);

/// Singular values (descending) and, optionally, the singular vectors.
SvdResult svd_complex(const CMatrix& A, bool want_vectors = false);

/// Smallest singular value of a square complex matrix.
double sigma_min(const CMatrix& A);

/// Solves A X = B; throws SingularMatrix when A is numerically singular.
CMatrix solve_complex(const CMatrix& A, const CMatrix& B);

struct LeastSquaresResult {
  RVector step;
  Eigen::Index rank = 0;
};

/// Minimizes ||J d + r||_2.  Throws RankDeficient (message carries the
/// numerical rank) when J does not have full column rank.
LeastSquaresResult least_squares_real(const RMatrix& J, const RVector& r,
                                      double rank_threshold = 1e-13);

/// Max absolute row sum.
double inf_norm(const RMatrix& A);
double inf_norm(const CMatrix& A);

}  // namespace numerics
}  // namespace psa
