#include "psa/discretization.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "psa/errors.hpp"

namespace psa {

Mesh chebyshev_mesh(int N, double tau_max) {
  if (N < 1) throw Error(ErrorCode::InvalidN, "mesh needs N >= 1, got " + std::to_string(N));
  if (!(tau_max > 0.0)) throw Error(ErrorCode::InvalidN, "mesh needs tau_max > 0");
  Mesh mesh;
  mesh.N = N;
  mesh.tau_max = tau_max;
  mesh.points.resize(N + 1);
  mesh.barycentric_weights.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    const int i = k - N;
    mesh.points[k] = 0.5 * tau_max * (std::cos(i * std::numbers::pi / N) - 1.0);
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == N) w *= 0.5;
    mesh.barycentric_weights[k] = w;
  }
  // cos(-pi) and cos(0) are exact; keep the end points exact as well.
  mesh.points.front() = -tau_max;
  mesh.points.back() = 0.0;
  return mesh;
}

RMatrix differentiation_matrix(const Mesh& mesh) {
  const int size = static_cast<int>(mesh.points.size());
  RMatrix D = RMatrix::Zero(size, size);
  const auto& x = mesh.points;
  const auto& w = mesh.barycentric_weights;
  for (int i = 0; i < size; ++i) {
    double row = 0.0;
    for (int k = 0; k < size; ++k) {
      if (k == i) continue;
      D(i, k) = (w[k] / w[i]) / (x[i] - x[k]);
      row += D(i, k);
    }
    D(i, i) = -row;
  }
  return D;
}

RVector lagrange_values(const Mesh& mesh, double t) {
  const int size = static_cast<int>(mesh.points.size());
  const double slack = 1e-14 * mesh.tau_max;
  if (t < -mesh.tau_max - slack || t > slack) {
    throw Error(ErrorCode::OutOfInterval,
                "t = " + std::to_string(t) + " outside [-tau_max, 0]");
  }
  RVector l = RVector::Zero(size);
  for (int k = 0; k < size; ++k) {
    if (t == mesh.points[k]) {
      l(k) = 1.0;
      return l;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < size; ++k) {
    l(k) = mesh.barycentric_weights[k] / (t - mesh.points[k]);
    denom += l(k);
  }
  return l / denom;
}

Discretization assemble(const TimeDelaySystem& sys, int N) {
  const int n = sys.n();
  const int m = sys.m();
  if (N < 0 || (N == 0 && m > 0)) {
    throw Error(ErrorCode::InvalidN, "N = " + std::to_string(N) + " is not valid for m = " +
                                         std::to_string(m));
  }
  Discretization disc;
  disc.system = sys;
  if (N == 0) {
    disc.mesh.N = 0;
    disc.mesh.tau_max = 0.0;
    disc.mesh.points = {0.0};
    disc.mesh.barycentric_weights = {1.0};
    disc.D = RMatrix::Zero(1, 1);
    disc.A_N = sys.matrices[0];
    disc.B_N = RMatrix::Identity(n, n);
    disc.delay_lagrange = RMatrix::Zero(0, 1);
    return disc;
  }

  disc.mesh = chebyshev_mesh(N, m > 0 ? sys.tau_max() : 1.0);
  disc.D = differentiation_matrix(disc.mesh);
  disc.delay_lagrange.resize(m, N + 1);
  for (int l = 1; l <= m; ++l) {
    disc.delay_lagrange.row(l - 1) = lagrange_values(disc.mesh, -sys.delays[l]).transpose();
  }

  const int dim = (N + 1) * n;
  disc.A_N = RMatrix::Zero(dim, dim);
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k <= N; ++k) {
      disc.A_N.block(i * n, k * n, n, n).diagonal().setConstant(disc.D(i, k));
    }
  }
  for (int k = 0; k <= N; ++k) {
    RMatrix gamma = RMatrix::Zero(n, n);
    for (int l = 1; l <= m; ++l) gamma += disc.delay_lagrange(l - 1, k) * sys.matrices[l];
    if (k == N) gamma += sys.matrices[0];
    disc.A_N.block(N * n, k * n, n, n) = gamma;
  }
  disc.B_N = RMatrix::Zero(dim, n);
  disc.B_N.bottomRows(n).setIdentity();
  return disc;
}

namespace {

// Coefficients [p_N(theta_{-N}), ..., p_N(theta_{-1}), 1] of p_N in the Lagrange basis.
CVector pN_nodal(const Discretization& disc, cplx lambda) {
  const int N = disc.N();
  CVector c(N + 1);
  c(N) = 1.0;
  if (N == 0) return c;
  CMatrix shifted = -disc.D.topLeftCorner(N, N).cast<cplx>();
  shifted.diagonal().array() += lambda;
  const CMatrix rhs = disc.D.topRightCorner(N, 1).cast<cplx>();
  try {
    c.head(N) = numerics::solve_complex(shifted, rhs);
  } catch (const Error&) {
    throw Error(ErrorCode::SingularResolvent,
                "lambda is an eigenvalue of D_11; p_N has a pole there");
  }
  return c;
}

}  // namespace

cplx eval_pN(const Discretization& disc, double tau, cplx lambda) {
  const CVector c = pN_nodal(disc, lambda);
  if (disc.N() == 0) return 1.0;
  const RVector l = lagrange_values(disc.mesh, -tau);
  return l.cast<cplx>().dot(c);
}

std::vector<cplx> eval_pN_delays(const Discretization& disc, cplx lambda) {
  const int m = disc.system.m();
  std::vector<cplx> out(m);
  if (m == 0) return out;
  const CVector c = pN_nodal(disc, lambda);
  for (int l = 0; l < m; ++l) {
    out[l] = disc.delay_lagrange.row(l).cast<cplx>().dot(c);
  }
  return out;
}

CMatrix eval_FN(const Discretization& disc, cplx lambda) {
  const auto& sys = disc.system;
  const int n = sys.n();
  CMatrix F = lambda * CMatrix::Identity(n, n) - sys.matrices[0].cast<cplx>();
  const auto p = eval_pN_delays(disc, lambda);
  for (int l = 1; l <= sys.m(); ++l) F -= p[l - 1] * sys.matrices[l].cast<cplx>();
  return F;
}

double spectral_abscissa_FN(const Discretization& disc) {
  const auto eig = numerics::eig_real(disc.A_N);
  return eig.values.real().maxCoeff();
}

}  // namespace psa
