#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psa/errors.hpp"
#include "psa/predictor.hpp"

namespace psa {

struct XiOfSigma {
  double xi = 0.0;       // 1 / (eps w(sigma))
  double dxi_dsigma = 0.0;
};

XiOfSigma xi_of_sigma(const PerturbationSpec& pert, const TimeDelaySystem& sys, double sigma);

/// H(lambda, sigma, xi) for a system already shifted by sigma, i.e. with
/// matrices A_{sigma,i}:
///   [[ F_s(lambda),  -xi^-2 I              ],
///    [ I,            lambda I + A_{s,0}^T + sum A_{s,i}^T e^{lambda tau_i} ]]
struct NleigMatrix {
  CMatrix entries;  // 2n x 2n
};

NleigMatrix build_nleig(const TimeDelaySystem& shifted, cplx lambda, double xi);

/// dH/dlambda for the same shifted system.
CMatrix nleig_lambda_derivative(const TimeDelaySystem& shifted, cplx lambda);

/// Right singular vector of the smallest singular value, unit norm, with its
/// largest-magnitude entry made real and positive.
CVector start_vector(const NleigMatrix& H);

/// Unknowns of the extremality system; `anchor` fixes scale and phase through
/// anchor^H [u; v] = 1.
struct CorrectorState {
  CVector u;
  CVector v;
  double omega = 0.0;
  double sigma = 0.0;
  CVector anchor;
};

/// 4n+3 residuals: Re/Im of H(j omega, sigma, xi(sigma)) [u; v], Re/Im of the
/// normalization, and Im{v^H F'(sigma + j omega) u}.
RVector residual(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const CorrectorState& state);

/// Analytic (4n+3) x (4n+2) Jacobian with respect to
/// (Re u, Im u, Re v, Im v, omega, sigma).
RMatrix jacobian(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const CorrectorState& state);

/// Packing used by residual/jacobian: [Re u; Im u; Re v; Im v; omega; sigma].
RVector pack_state(const CorrectorState& state);
CorrectorState unpack_state(const RVector& x, const CVector& anchor);

struct GaussNewtonOptions {
  double tol = 1e-10;  // relative to 1 + matrix_scale(sys)
  int max_iter = 50;
  bool damped = false;
};

struct GaussNewtonResult {
  CorrectorState state;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;
  std::optional<ErrorCode> failure;
  std::string message;
};

/// Undamped Gauss-Newton unless options.damped.  Failures are reported in the
/// result rather than thrown so that callers can keep the other starts.
GaussNewtonResult gauss_newton(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                               const CorrectorState& start,
                               const GaussNewtonOptions& options = {});

struct StartOutcome {
  double start_omega = 0.0;
  bool converged = false;
  double sigma = 0.0;
  double omega = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  bool on_level_set = false;  // eps f(sigma + j omega) == 1
  std::vector<double> residual_history;
  std::string message;
};

struct CorrectionResult {
  double alpha_eps = 0.0;
  double omega_eps = 0.0;
  std::vector<StartOutcome> per_start;
  std::vector<cplx> solutions;  // distinct converged sigma + j omega
  std::vector<std::string> warnings;
};

/// Runs Gauss-Newton from every predicted frequency and keeps the rightmost
/// converged point.  Throws AllStartsFailed when nothing converges.
CorrectionResult correct(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                         const PredictionResult& prediction,
                         const GaussNewtonOptions& options = {});

}  // namespace psa
