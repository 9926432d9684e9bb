#include "psa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psa/errors.hpp"

namespace psa {

double TimeDelaySystem::tau_max() const {
  double t = 0.0;
  for (double d : delays) t = std::max(t, d);
  return t;
}

TimeDelaySystem validate_system(TimeDelaySystem raw) {
  if (raw.matrices.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "system has no matrices");
  }
  if (raw.delays.size() != raw.matrices.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "got " + std::to_string(raw.delays.size()) + " delays for " +
                    std::to_string(raw.matrices.size()) + " matrices");
  }
  const auto n = raw.matrices.front().rows();
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "state dimension must be positive");
  for (std::size_t i = 0; i < raw.matrices.size(); ++i) {
    const auto& A = raw.matrices[i];
    if (A.rows() != n || A.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "A_" + std::to_string(i) + " is " + std::to_string(A.rows()) + "x" +
                      std::to_string(A.cols()) + ", expected " + std::to_string(n) + "x" +
                      std::to_string(n));
    }
    if (!A.allFinite()) {
      throw Error(ErrorCode::DimensionMismatch, "A_" + std::to_string(i) + " has non-finite entries");
    }
  }
  if (raw.delays.front() != 0.0) {
    throw Error(ErrorCode::MissingZeroDelay, "tau_0 must be exactly 0");
  }
  for (std::size_t i = 1; i < raw.delays.size(); ++i) {
    if (!(raw.delays[i] > 0.0) || !std::isfinite(raw.delays[i])) {
      throw Error(ErrorCode::NonpositiveDelay,
                  "tau_" + std::to_string(i) + " = " + std::to_string(raw.delays[i]) +
                      " is not a positive finite delay");
    }
  }
  return raw;
}

void validate_perturbation(const PerturbationSpec& pert, const TimeDelaySystem& sys) {
  if (pert.weights.size() != sys.matrices.size()) {
    throw Error(ErrorCode::InvalidWeights,
                "expected " + std::to_string(sys.matrices.size()) + " weights, got " +
                    std::to_string(pert.weights.size()));
  }
  bool any_finite = false;
  for (double w : pert.weights) {
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidWeights, "weights must be positive or inf");
    any_finite = any_finite || std::isfinite(w);
  }
  if (!any_finite) {
    throw Error(ErrorCode::InvalidWeights, "at least one weight must be finite");
  }
  if (!(pert.epsilon > 0.0) || !std::isfinite(pert.epsilon)) {
    throw Error(ErrorCode::InvalidWeights, "epsilon must be positive and finite");
  }
}

CMatrix eval_F(const TimeDelaySystem& sys, cplx lambda) {
  const int n = sys.n();
  CMatrix F = lambda * CMatrix::Identity(n, n);
  for (std::size_t i = 0; i < sys.matrices.size(); ++i) {
    F -= std::exp(-lambda * sys.delays[i]) * sys.matrices[i].cast<cplx>();
  }
  return F;
}

CMatrix eval_dF(const TimeDelaySystem& sys, cplx lambda) {
  const int n = sys.n();
  CMatrix dF = CMatrix::Identity(n, n);
  for (std::size_t i = 1; i < sys.matrices.size(); ++i) {
    const double tau = sys.delays[i];
    dF += (tau * std::exp(-lambda * tau)) * sys.matrices[i].cast<cplx>();
  }
  return dF;
}

CMatrix eval_d2F(const TimeDelaySystem& sys, cplx lambda) {
  const int n = sys.n();
  CMatrix d2F = CMatrix::Zero(n, n);
  for (std::size_t i = 1; i < sys.matrices.size(); ++i) {
    const double tau = sys.delays[i];
    d2F -= (tau * tau * std::exp(-lambda * tau)) * sys.matrices[i].cast<cplx>();
  }
  return d2F;
}

double eval_weight(const PerturbationSpec& pert, const TimeDelaySystem& sys, double sigma) {
  double w = 0.0;
  for (std::size_t i = 0; i < pert.weights.size(); ++i) {
    if (std::isinf(pert.weights[i])) continue;
    w += std::exp(-sigma * sys.delays[i]) / pert.weights[i];
  }
  return w;
}

double eval_weight_derivative(const PerturbationSpec& pert, const TimeDelaySystem& sys,
                              double sigma) {
  double dw = 0.0;
  for (std::size_t i = 0; i < pert.weights.size(); ++i) {
    if (std::isinf(pert.weights[i])) continue;
    const double tau = sys.delays[i];
    dw -= tau * std::exp(-sigma * tau) / pert.weights[i];
  }
  return dw;
}

double eval_f(const TimeDelaySystem& sys, const PerturbationSpec& pert, cplx lambda) {
  const double smin = numerics::sigma_min(eval_F(sys, lambda));
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return eval_weight(pert, sys, lambda.real()) / smin;
}

std::pair<TimeDelaySystem, PerturbationSpec> shift_system(const TimeDelaySystem& sys,
                                                          const PerturbationSpec& pert,
                                                          double alpha) {
  TimeDelaySystem shifted = sys;
  PerturbationSpec spec = pert;
  const int n = sys.n();
  shifted.matrices[0] = sys.matrices[0] - alpha * RMatrix::Identity(n, n);
  for (std::size_t i = 1; i < sys.matrices.size(); ++i) {
    shifted.matrices[i] = sys.matrices[i] * std::exp(-alpha * sys.delays[i]);
  }
  for (std::size_t i = 0; i < spec.weights.size() && i < sys.delays.size(); ++i) {
    if (std::isfinite(spec.weights[i])) spec.weights[i] *= std::exp(alpha * sys.delays[i]);
  }
  return {std::move(shifted), std::move(spec)};
}

double matrix_scale(const TimeDelaySystem& sys) {
  double s = 0.0;
  for (const auto& A : sys.matrices) s += numerics::inf_norm(A);
  return s;
}

}  // namespace psa
