#include "psa/numerics.hpp"

#include <string>

#include "psa/errors.hpp"

namespace psa {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NonpositiveDelay: return "nonpositive-delay";
    case ErrorCode::MissingZeroDelay: return "missing-zero-delay";
    case ErrorCode::InvalidWeights: return "invalid-weights";
    case ErrorCode::InvalidN: return "invalid-N";
    case ErrorCode::OutOfInterval: return "out-of-interval";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::SingularResolvent: return "singular-resolvent";
    case ErrorCode::EigensolverFailure: return "eigensolver-failure";
    case ErrorCode::RankDeficient: return "rank-deficient-jacobian";
    case ErrorCode::MaxIterations: return "max-iterations-exceeded";
    case ErrorCode::Diverged: return "diverged";
    case ErrorCode::EmptyFrequencyAnomaly: return "empty-frequency-anomaly";
    case ErrorCode::AllStartsFailed: return "all-starts-failed";
    case ErrorCode::RegionTooSmall: return "region-too-small";
    case ErrorCode::EmptyPseudospectrum: return "empty-pseudospectrum-in-region";
    case ErrorCode::InvalidRegion: return "invalid-region";
    case ErrorCode::ParseError: return "parse-error";
  }
  return "unknown";
}

namespace numerics {

EigenResult eig_real(const RMatrix& A, bool want_vectors) {
  EigenResult out;
  if (A.rows() == 0) {
    out.values.resize(0);
    return out;
  }
  Eigen::EigenSolver<RMatrix> solver(A, want_vectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure,
                "real eigenvalue iteration did not converge (size " +
                    std::to_string(A.rows()) + ")");
  }
  out.values = solver.eigenvalues();
  if (want_vectors) out.vectors = solver.eigenvectors();
  return out;
}

SvdResult svd_complex(const CMatrix& A, bool want_vectors) {
  SvdResult out;
  if (want_vectors) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.values = svd.singularValues();
    out.U = svd.matrixU();
    out.V = svd.matrixV();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(A);
    out.values = svd.singularValues();
  }
  return out;
}

double sigma_min(const CMatrix& A) {
  if (A.rows() == 1 && A.cols() == 1) return std::abs(A(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

CMatrix solve_complex(const CMatrix& A, const CMatrix& B) {
  Eigen::PartialPivLU<CMatrix> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    throw Error(ErrorCode::SingularMatrix,
                "matrix is numerically singular (rcond " + std::to_string(rc) + ")");
  }
  return lu.solve(B);
}

LeastSquaresResult least_squares_real(const RMatrix& J, const RVector& r,
                                      double rank_threshold) {
  Eigen::ColPivHouseholderQR<RMatrix> qr(J);
  qr.setThreshold(rank_threshold);
  LeastSquaresResult out;
  out.rank = qr.rank();
  if (out.rank < J.cols()) {
    throw Error(ErrorCode::RankDeficient,
                "jacobian rank " + std::to_string(out.rank) + " < " +
                    std::to_string(J.cols()));
  }
  out.step = qr.solve(-r);
  return out;
}

double inf_norm(const RMatrix& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace numerics
}  // namespace psa
