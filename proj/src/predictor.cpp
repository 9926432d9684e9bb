#include "psa/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psa/errors.hpp"

namespace psa {

namespace {

struct NewtonRoot {
  bool converged = false;
  cplx lambda;
};

// Newton on F(lambda) v = 0, c^H v = 1 in the unknowns (v, lambda).
NewtonRoot newton_root(const TimeDelaySystem& sys, cplx lambda, double tol, double scale) {
  const int n = sys.n();
  const auto svd = numerics::svd_complex(eval_F(sys, lambda), true);
  CVector v = svd.V->col(n - 1);
  const CVector c = v;

  NewtonRoot out;
  for (int it = 0; it < 50; ++it) {
    const CMatrix F = eval_F(sys, lambda);
    CMatrix J(n + 1, n + 1);
    J.topLeftCorner(n, n) = F;
    J.topRightCorner(n, 1) = eval_dF(sys, lambda) * v;
    J.bottomLeftCorner(1, n) = c.adjoint();
    J(n, n) = 0.0;
    CVector r(n + 1);
    r.head(n) = F * v;
    r(n) = c.dot(v) - 1.0;

    Eigen::PartialPivLU<CMatrix> lu(J);
    const CVector step = lu.solve(-r);
    if (!step.allFinite()) return out;
    v += step.head(n);
    lambda += step(n);
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) return out;
    if (std::abs(step(n)) <= 1e-14 * (1.0 + std::abs(lambda))) break;
  }
  const double res = (eval_F(sys, lambda) * v).norm() / v.norm();
  out.converged = res <= tol * (1.0 + scale + std::abs(lambda));
  out.lambda = lambda;
  return out;
}

}  // namespace

SpectralAbscissa spectral_abscissa_exact(const TimeDelaySystem& sys, const Discretization& disc,
                                         double newton_tol) {
  const auto eig = numerics::eig_real(disc.A_N);
  std::vector<cplx> starts(eig.values.data(), eig.values.data() + eig.values.size());
  std::sort(starts.begin(), starts.end(),
            [](cplx a, cplx b) { return a.real() > b.real(); });
  const std::size_t k = std::min<std::size_t>(10, starts.size());

  const double scale = matrix_scale(sys);
  SpectralAbscissa out;
  for (std::size_t s = 0; s < k; ++s) {
    const auto root = newton_root(sys, starts[s], newton_tol, scale);
    if (!root.converged) continue;
    const bool seen = std::any_of(out.roots.begin(), out.roots.end(), [&](cplx r) {
      return std::abs(r - root.lambda) <= 1e-8 * (1.0 + std::abs(r));
    });
    if (!seen) out.roots.push_back(root.lambda);
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](cplx a, cplx b) { return a.real() > b.real(); });
  if (out.roots.empty()) {
    out.fallback = true;
    out.value = starts.front().real();
  } else {
    out.value = out.roots.front().real();
  }
  return out;
}

HamiltonianMatrix build_hamiltonian(const Discretization& disc, const PerturbationSpec& pert,
                                    double sigma) {
  const auto dim = disc.A_N.rows();
  const int n = disc.n();
  const double g = eval_weight(pert, disc.system, sigma) * pert.epsilon;

  RMatrix shifted = disc.A_N;
  shifted.diagonal().array() -= sigma;

  HamiltonianMatrix H;
  H.entries = RMatrix::Zero(2 * dim, 2 * dim);
  H.entries.topLeftCorner(dim, dim) = shifted;
  H.entries.bottomRightCorner(dim, dim) = -shifted.transpose();
  // B_N B_N^T is the identity on the last block of n coordinates.
  for (int k = 0; k < n; ++k) {
    const auto idx = dim - n + k;
    H.entries(idx, dim + idx) = g;
    H.entries(dim + idx, idx) = -g;
  }
  return H;
}

std::vector<double> imaginary_axis_frequencies(const HamiltonianMatrix& H, double imag_tol) {
  const auto eig = numerics::eig_real(H.entries);
  std::vector<double> omegas;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const cplx l = eig.values(i);
    if (std::abs(l.real()) <= imag_tol * std::max(1.0, std::abs(l))) {
      omegas.push_back(std::abs(l.imag()));
    }
  }
  std::sort(omegas.begin(), omegas.end());
  std::vector<double> unique;
  for (double w : omegas) {
    if (unique.empty() || w - unique.back() > 1e-8 * (1.0 + w)) unique.push_back(w);
  }
  return unique;
}

double Bracket::width() const {
  return upper ? *upper - lower : std::numeric_limits<double>::infinity();
}

PredictionResult bisect(const Discretization& disc, const PerturbationSpec& pert,
                        const BisectionOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidN, "bisection tolerance must be > 0");
  PredictionResult out;
  out.tol = options.tol;
  out.alpha_FN = spectral_abscissa_FN(disc);

  Bracket& b = out.bracket;
  b.lower = out.alpha_FN;
  double delta = options.delta_init.value_or(options.tol);

  while (!b.bounded() || *b.upper - b.lower > options.tol) {
    if (out.iterations >= options.max_iter) {
      throw Error(ErrorCode::MaxIterations,
                  "bisection did not reach width " + std::to_string(options.tol) + " in " +
                      std::to_string(options.max_iter) + " steps");
    }
    double mid;
    if (!b.bounded()) {
      delta *= 2.0;
      mid = b.lower + delta;
    } else {
      mid = 0.5 * (b.lower + *b.upper);
    }
    const auto H = build_hamiltonian(disc, pert, mid);
    if (!imaginary_axis_frequencies(H, options.imag_tol).empty()) {
      b.lower = mid;
    } else {
      b.upper = mid;
    }
    ++out.iterations;
    out.history.push_back(b);
  }

  out.alpha_pred = b.lower;
  const auto H = build_hamiltonian(disc, pert, b.lower);
  double imag_tol = options.imag_tol;
  for (int attempt = 0; attempt < 3 && out.frequencies.empty(); ++attempt) {
    out.frequencies = imaginary_axis_frequencies(H, imag_tol);
    imag_tol *= 100.0;
  }
  if (out.frequencies.empty()) {
    throw Error(ErrorCode::EmptyFrequencyAnomaly,
                "no imaginary-axis eigenvalues at sigma_L = " + std::to_string(b.lower) +
                    "; the imaginary-axis tolerance is too tight");
  }
  return out;
}

PredictionResult predict(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                         const PredictorOptions& options) {
  const int N = sys.m() == 0 ? 0 : options.N;
  const auto disc0 = assemble(sys, N);
  const auto sa = spectral_abscissa_exact(sys, disc0, options.newton_tol);

  const auto [shifted, shifted_pert] = shift_system(sys, pert, sa.value);
  const auto disc = assemble(shifted, N);
  auto out = bisect(disc, shifted_pert, options.bisection);

  const double s = sa.value;
  out.shift_used = s;
  out.alpha_pred += s;
  out.alpha_FN += s;
  out.bracket.lower += s;
  if (out.bracket.upper) *out.bracket.upper += s;
  for (auto& h : out.history) {
    h.lower += s;
    if (h.upper) *h.upper += s;
  }
  out.spectral_abscissa = sa;
  return out;
}

}  // namespace psa
