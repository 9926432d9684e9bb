#pragma once

#include <vector>

#include "psa/model.hpp"

namespace psa {

/// Scaled and shifted Chebyshev extremal points on [-tau_max, 0].
/// points[k] corresponds to theta_{N,k-N}; points.back() == 0.
struct Mesh {
  int N = 0;
  double tau_max = 0.0;
  std::vector<double> points;
  std::vector<double> barycentric_weights;
};

Mesh chebyshev_mesh(int N, double tau_max);

/// d_{ik} = l_k'(theta_i), off-diagonal by the barycentric formula and the
/// diagonal by negative row sum.
RMatrix differentiation_matrix(const Mesh& mesh);

/// [l_{N,-N}(t), ..., l_{N,0}(t)] by barycentric interpolation.
RVector lagrange_values(const Mesh& mesh, double t);

/// Spectral discretization of the delay system on the Chebyshev mesh.
struct Discretization {
  Mesh mesh;
  RMatrix D;    // (N+1) x (N+1)
  RMatrix A_N;  // (N+1)n x (N+1)n
  RMatrix B_N;  // (N+1)n x n
  TimeDelaySystem system;
  /// Row l-1 holds lagrange_values(mesh, -tau_l) for l = 1..m.
  RMatrix delay_lagrange;

  int N() const { return mesh.N; }
  int n() const { return system.n(); }
};

/// Builds D, A_N and B_N.  For delay-free systems N = 0 is allowed
/// (A_N = A_0); with N >= 1 a nominal unit interval is used.
Discretization assemble(const TimeDelaySystem& sys, int N);

/// p_N(-tau; lambda) via (lambda I - D_11)^{-1} D_12.
cplx eval_pN(const Discretization& disc, double tau, cplx lambda);

/// p_N(-tau_l; lambda) for every delay l = 1..m of the discretized system.
std::vector<cplx> eval_pN_delays(const Discretization& disc, cplx lambda);

/// F_N(lambda) = lambda I - A_0 - sum_i A_i p_N(-tau_i; lambda).
CMatrix eval_FN(const Discretization& disc, cplx lambda);

/// max Re over the eigenvalues of A_N.
double spectral_abscissa_FN(const Discretization& disc);

}  // namespace psa
