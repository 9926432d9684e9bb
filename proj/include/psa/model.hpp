#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "psa/numerics.hpp"

namespace psa {

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

/// x'(t) = sum_i A_i x(t - tau_i), with tau_0 = 0.
struct TimeDelaySystem {
  std::vector<double> delays;    // tau_0 .. tau_m
  std::vector<RMatrix> matrices;  // A_0 .. A_m

  int n() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
  int m() const { return static_cast<int>(matrices.size()) - 1; }
  double tau_max() const;
};

/// Per-matrix perturbation weights (kInfiniteWeight means "not perturbed")
/// and the perturbation size epsilon.
struct PerturbationSpec {
  std::vector<double> weights;  // w_0 .. w_m
  double epsilon = 0.0;
};

/// Checks the structural invariants and returns the system unchanged.
TimeDelaySystem validate_system(TimeDelaySystem raw);

/// Checks weights against the system; at least one finite weight is required.
void validate_perturbation(const PerturbationSpec& pert, const TimeDelaySystem& sys);

/// F(lambda) = lambda I - sum_i A_i exp(-lambda tau_i).
CMatrix eval_F(const TimeDelaySystem& sys, cplx lambda);

/// dF/dlambda = I + sum_i tau_i A_i exp(-lambda tau_i).
CMatrix eval_dF(const TimeDelaySystem& sys, cplx lambda);

/// d^2F/dlambda^2 = -sum_i tau_i^2 A_i exp(-lambda tau_i).
CMatrix eval_d2F(const TimeDelaySystem& sys, cplx lambda);

/// w(sigma) = sum over finite weights of exp(-sigma tau_i) / w_i.
double eval_weight(const PerturbationSpec& pert, const TimeDelaySystem& sys, double sigma);

/// w'(sigma) = -sum over finite weights of tau_i exp(-sigma tau_i) / w_i.
double eval_weight_derivative(const PerturbationSpec& pert, const TimeDelaySystem& sys,
                              double sigma);

/// Level-set function f(lambda) = w(Re lambda) / sigma_min(F(lambda)).
/// Returns +infinity at characteristic roots.
double eval_f(const TimeDelaySystem& sys, const PerturbationSpec& pert, cplx lambda);

/// Substitutes lambda <- lambda + alpha.  The returned pair satisfies
/// f_shifted(l) == f(l + alpha); weights become w_i exp(alpha tau_i).
std::pair<TimeDelaySystem, PerturbationSpec> shift_system(const TimeDelaySystem& sys,
                                                          const PerturbationSpec& pert,
                                                          double alpha);

/// Sum of the infinity norms of the system matrices.
double matrix_scale(const TimeDelaySystem& sys);

}  // namespace psa
