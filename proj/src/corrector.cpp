#include "psa/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psa {

XiOfSigma xi_of_sigma(const PerturbationSpec& pert, const TimeDelaySystem& sys, double sigma) {
  const double w = eval_weight(pert, sys, sigma);
  const double dw = eval_weight_derivative(pert, sys, sigma);
  XiOfSigma out;
  out.xi = 1.0 / (pert.epsilon * w);
  out.dxi_dsigma = -out.xi * dw / w;
  return out;
}

NleigMatrix build_nleig(const TimeDelaySystem& shifted, cplx lambda, double xi) {
  const int n = shifted.n();
  NleigMatrix H;
  H.entries = CMatrix::Zero(2 * n, 2 * n);
  H.entries.topLeftCorner(n, n) = eval_F(shifted, lambda);
  H.entries.topRightCorner(n, n).diagonal().setConstant(-1.0 / (xi * xi));
  H.entries.bottomLeftCorner(n, n).setIdentity();

  CMatrix br = lambda * CMatrix::Identity(n, n) + shifted.matrices[0].transpose().cast<cplx>();
  for (int i = 1; i <= shifted.m(); ++i) {
    br += std::exp(lambda * shifted.delays[i]) * shifted.matrices[i].transpose().cast<cplx>();
  }
  H.entries.bottomRightCorner(n, n) = br;
  return H;
}

CMatrix nleig_lambda_derivative(const TimeDelaySystem& shifted, cplx lambda) {
  const int n = shifted.n();
  CMatrix dH = CMatrix::Zero(2 * n, 2 * n);
  dH.topLeftCorner(n, n) = eval_dF(shifted, lambda);
  CMatrix br = CMatrix::Identity(n, n);
  for (int i = 1; i <= shifted.m(); ++i) {
    const double tau = shifted.delays[i];
    br += (tau * std::exp(lambda * tau)) * shifted.matrices[i].transpose().cast<cplx>();
  }
  dH.bottomRightCorner(n, n) = br;
  return dH;
}

CVector start_vector(const NleigMatrix& H) {
  const auto svd = numerics::svd_complex(H.entries, true);
  CVector x = svd.V->col(H.entries.cols() - 1);
  x.normalize();
  Eigen::Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  x *= std::conj(x(k)) / std::abs(x(k));
  x(k) = std::abs(x(k));
  return x;
}

RVector pack_state(const CorrectorState& s) {
  const auto n = s.u.size();
  RVector x(4 * n + 2);
  x.segment(0, n) = s.u.real();
  x.segment(n, n) = s.u.imag();
  x.segment(2 * n, n) = s.v.real();
  x.segment(3 * n, n) = s.v.imag();
  x(4 * n) = s.omega;
  x(4 * n + 1) = s.sigma;
  return x;
}

CorrectorState unpack_state(const RVector& x, const CVector& anchor) {
  const auto n = (x.size() - 2) / 4;
  CorrectorState s;
  s.u.resize(n);
  s.v.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.u(k) = cplx(x(k), x(n + k));
    s.v(k) = cplx(x(2 * n + k), x(3 * n + k));
  }
  s.omega = x(4 * n);
  s.sigma = x(4 * n + 1);
  s.anchor = anchor;
  return s;
}

namespace {

struct Pieces {
  CMatrix F, dF, d2F;
  double q = 0.0;   // xi^-2 = (eps w)^2
  double dq = 0.0;  // d q / d sigma
};

Pieces evaluate(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                const CorrectorState& s) {
  const cplx lambda(s.sigma, s.omega);
  Pieces p;
  p.F = eval_F(sys, lambda);
  p.dF = eval_dF(sys, lambda);
  p.d2F = eval_d2F(sys, lambda);
  const double w = eval_weight(pert, sys, s.sigma);
  const double dw = eval_weight_derivative(pert, sys, s.sigma);
  const double e2 = pert.epsilon * pert.epsilon;
  p.q = e2 * w * w;
  p.dq = 2.0 * e2 * w * dw;
  return p;
}

void put_complex_rows(RMatrix& J, Eigen::Index col, const CVector& top, const CVector& bottom) {
  const auto n = top.size();
  J.block(0, col, n, 1) = top.real();
  J.block(n, col, n, 1) = bottom.real();
  J.block(2 * n, col, n, 1) = top.imag();
  J.block(3 * n, col, n, 1) = bottom.imag();
}

}  // namespace

RVector residual(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const CorrectorState& s) {
  const auto n = s.u.size();
  const Pieces p = evaluate(sys, pert, s);
  const CVector top = p.F * s.u - p.q * s.v;
  const CVector bottom = s.u - p.F.adjoint() * s.v;

  CVector z(2 * n);
  z << s.u, s.v;
  const cplx norm = s.anchor.dot(z) - 1.0;

  RVector r(4 * n + 3);
  r.segment(0, n) = top.real();
  r.segment(n, n) = bottom.real();
  r.segment(2 * n, n) = top.imag();
  r.segment(3 * n, n) = bottom.imag();
  r(4 * n) = norm.real();
  r(4 * n + 1) = norm.imag();
  r(4 * n + 2) = s.v.dot(p.dF * s.u).imag();
  return r;
}

RMatrix jacobian(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const CorrectorState& s) {
  const auto n = s.u.size();
  const Pieces p = evaluate(sys, pert, s);
  const cplx j(0.0, 1.0);
  RMatrix J = RMatrix::Zero(4 * n + 3, 4 * n + 2);

  // Columns of H(j omega, sigma, xi) [u; v] in u and v.
  const CMatrix FH = p.F.adjoint();
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector top_u = p.F.col(k);
    const CVector bottom_u = CVector::Unit(n, k);
    put_complex_rows(J, k, top_u, bottom_u);
    put_complex_rows(J, n + k, j * top_u, j * bottom_u);

    const CVector top_v = -p.q * CVector::Unit(n, k);
    const CVector bottom_v = -FH.col(k);
    put_complex_rows(J, 2 * n + k, top_v, bottom_v);
    put_complex_rows(J, 3 * n + k, j * top_v, j * bottom_v);
  }
  const CMatrix dFH = p.dF.adjoint();
  put_complex_rows(J, 4 * n, j * (p.dF * s.u), j * (dFH * s.v));
  put_complex_rows(J, 4 * n + 1, p.dF * s.u - p.dq * s.v, -(dFH * s.v));

  // Normalization anchor^H z - 1.
  const Eigen::Index rn = 4 * n;
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const cplx ck = std::conj(s.anchor(k));
    const Eigen::Index re_col = k < n ? k : 2 * n + (k - n);
    const Eigen::Index im_col = re_col + n;
    J(rn, re_col) = ck.real();
    J(rn + 1, re_col) = ck.imag();
    J(rn, im_col) = (j * ck).real();
    J(rn + 1, im_col) = (j * ck).imag();
  }

  // g = Im{v^H F' u}.
  const Eigen::Index rg = 4 * n + 2;
  const CVector b = p.dF.transpose() * s.v.conjugate();  // v^H F' = b^T
  const CVector d = p.dF * s.u;
  for (Eigen::Index k = 0; k < n; ++k) {
    J(rg, k) = b(k).imag();
    J(rg, n + k) = b(k).real();
    J(rg, 2 * n + k) = d(k).imag();
    J(rg, 3 * n + k) = -d(k).real();
  }
  const cplx vd2u = s.v.dot(p.d2F * s.u);
  J(rg, 4 * n) = vd2u.real();
  J(rg, 4 * n + 1) = vd2u.imag();
  return J;
}

GaussNewtonResult gauss_newton(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                               const CorrectorState& start, const GaussNewtonOptions& options) {
  GaussNewtonResult out;
  out.state = start;
  const double threshold = options.tol * (1.0 + matrix_scale(sys));

  RVector x = pack_state(start);
  RVector r = residual(sys, pert, start);
  double rnorm = r.norm();
  out.residual_history.push_back(rnorm);
  int growth = 0;

  auto fail = [&](ErrorCode code, std::string msg) {
    out.failure = code;
    out.message = std::move(msg);
    out.state = unpack_state(x, start.anchor);
    return out;
  };

  while (rnorm > threshold) {
    if (out.iterations >= options.max_iter) {
      return fail(ErrorCode::MaxIterations, "no convergence in " +
                                                std::to_string(options.max_iter) + " iterations");
    }
    const CorrectorState s = unpack_state(x, start.anchor);
    RVector step;
    try {
      step = numerics::least_squares_real(jacobian(sys, pert, s), r).step;
    } catch (const Error& e) {
      return fail(e.code(), e.what());
    }

    RVector x_new = x + step;
    RVector r_new = residual(sys, pert, unpack_state(x_new, start.anchor));
    if (options.damped) {
      double t = 1.0;
      while (!(r_new.norm() < rnorm) && t > 1e-4) {
        t *= 0.5;
        x_new = x + t * step;
        r_new = residual(sys, pert, unpack_state(x_new, start.anchor));
      }
    }
    if (!r_new.allFinite()) return fail(ErrorCode::Diverged, "residual became non-finite");

    ++out.iterations;
    const double applied = (x_new - x).norm();
    const double rnew_norm = r_new.norm();
    growth = rnew_norm > rnorm ? growth + 1 : 0;
    x = x_new;
    r = r_new;
    rnorm = rnew_norm;
    out.residual_history.push_back(rnorm);

    if (growth >= 3) return fail(ErrorCode::Diverged, "residual grew three consecutive steps");
    if (applied < 1e-14 * (1.0 + x.norm())) break;
  }

  CorrectorState s = unpack_state(x, start.anchor);
  if (rnorm > 1e3 * threshold) {
    out.state = s;
    out.failure = ErrorCode::MaxIterations;
    out.message = "stagnated at residual " + std::to_string(rnorm);
    return out;
  }
  if (s.omega < 0.0) {
    s.u = s.u.conjugate().eval();
    s.v = s.v.conjugate().eval();
    s.anchor = s.anchor.conjugate().eval();
    s.omega = -s.omega;
  }
  out.state = s;
  out.converged = true;
  return out;
}

CorrectionResult correct(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                         const PredictionResult& prediction, const GaussNewtonOptions& options) {
  const double sigma0 = prediction.alpha_pred;
  const auto [shifted, unused] = shift_system(sys, pert, sigma0);
  const double xi0 = xi_of_sigma(pert, sys, sigma0).xi;
  const int n = sys.n();

  CorrectionResult out;
  bool any = false;
  for (double omega0 : prediction.frequencies) {
    const auto H = build_nleig(shifted, cplx(0.0, omega0), xi0);
    const CVector x = start_vector(H);
    CorrectorState start;
    start.u = x.head(n);
    start.v = x.tail(n);
    start.omega = omega0;
    start.sigma = sigma0;
    start.anchor = x;

    const auto gn = gauss_newton(sys, pert, start, options);
    StartOutcome o;
    o.start_omega = omega0;
    o.converged = gn.converged;
    o.sigma = gn.state.sigma;
    o.omega = gn.state.omega;
    o.iterations = gn.iterations;
    o.final_residual = gn.residual_history.back();
    o.residual_history = gn.residual_history;
    o.message = gn.message;
    if (gn.converged) {
      const double f = eval_f(sys, pert, cplx(o.sigma, o.omega));
      o.on_level_set = std::abs(f * pert.epsilon - 1.0) <= 1e-6;
      if (!any || o.sigma > out.alpha_eps) {
        out.alpha_eps = o.sigma;
        out.omega_eps = o.omega;
      }
      any = true;
      const cplx point(o.sigma, o.omega);
      const bool seen = std::any_of(out.solutions.begin(), out.solutions.end(), [&](cplx p) {
        return std::abs(p - point) <= 1e-8 * (1.0 + std::abs(point));
      });
      if (!seen) out.solutions.push_back(point);
    }
    out.per_start.push_back(std::move(o));
  }

  if (!any) {
    std::ostringstream msg;
    msg << "all " << prediction.frequencies.size()
        << " corrector starts failed; try a smaller tol or a larger N";
    for (const auto& o : out.per_start) msg << "\n  omega0=" << o.start_omega << ": " << o.message;
    throw Error(ErrorCode::AllStartsFailed, msg.str());
  }

  const auto failed = std::count_if(out.per_start.begin(), out.per_start.end(),
                                    [](const StartOutcome& o) { return !o.converged; });
  if (failed > 0) {
    out.warnings.push_back(std::to_string(failed) + " of " +
                           std::to_string(out.per_start.size()) +
                           " corrector starts did not converge");
  }
  const double gap = std::abs(out.alpha_eps - prediction.alpha_pred);
  if (gap > 10.0 * prediction.tol) {
    std::ostringstream msg;
    msg << "prediction and correction differ by " << gap << " (more than 10*tol = "
        << 10.0 * prediction.tol << "); the result may not be the rightmost point, "
        << "retry with a smaller tol or a larger N";
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace psa
