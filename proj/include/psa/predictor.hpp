#pragma once

#include <optional>
#include <vector>

#include "psa/discretization.hpp"

namespace psa {

struct SpectralAbscissa {
  double value = 0.0;
  std::vector<cplx> roots;  // Newton-converged characteristic roots, rightmost first
  bool fallback = false;    // true when no start converged and alpha(F_N) was used
};

/// Rightmost characteristic root of F, refined by Newton from the rightmost
/// eigenvalues of A_N.
SpectralAbscissa spectral_abscissa_exact(const TimeDelaySystem& sys, const Discretization& disc,
                                         double newton_tol = 1e-12);

struct HamiltonianMatrix {
  RMatrix entries;  // 2n(N+1) square
};

/// [[A_N - sigma I, g B B^T], [-g B B^T, -(A_N - sigma I)^T]] with g = w(sigma) eps.
HamiltonianMatrix build_hamiltonian(const Discretization& disc, const PerturbationSpec& pert,
                                    double sigma);

/// Nonnegative imaginary parts of the eigenvalues with
/// |Re l| <= imag_tol * max(1, |l|), ascending and deduplicated.
std::vector<double> imaginary_axis_frequencies(const HamiltonianMatrix& H,
                                               double imag_tol = 1e-8);

/// sigma_R = infinity is represented by an empty `upper`.
struct Bracket {
  double lower = 0.0;
  std::optional<double> upper;

  bool bounded() const { return upper.has_value(); }
  double width() const;
};

struct BisectionOptions {
  double tol = 1e-3;
  int max_iter = 100;
  double imag_tol = 1e-8;
  std::optional<double> delta_init;  // defaults to tol
};

struct PredictionResult {
  double alpha_pred = 0.0;
  std::vector<double> frequencies;
  int iterations = 0;
  Bracket bracket;
  double shift_used = 0.0;
  double tol = 0.0;
  double alpha_FN = 0.0;        // alpha(F_N) of the discretization that was bisected
  std::vector<Bracket> history;  // bracket after every step, in unshifted coordinates
  SpectralAbscissa spectral_abscissa;
};

/// Bisection on sigma over (alpha(F_N), inf) using the Hamiltonian test.
/// Works in the coordinates of `disc`; shift_used stays 0.
PredictionResult bisect(const Discretization& disc, const PerturbationSpec& pert,
                        const BisectionOptions& options = {});

struct PredictorOptions {
  int N = 15;
  BisectionOptions bisection;
  double newton_tol = 1e-12;
};

/// Shifts the problem by the spectral abscissa, bisects, and maps the result
/// back to the original coordinates.
PredictionResult predict(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                         const PredictorOptions& options = {});

}  // namespace psa
