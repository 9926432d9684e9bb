#pragma once

#include <vector>

#include "psa/discretization.hpp"

namespace psa {

/// Rectangle [re_min, re_max] x [im_min, im_max] sampled with n_re x n_im nodes.
struct GridRegion {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int n_re = 0, n_im = 0;

  double re_step() const { return (re_max - re_min) / (n_re - 1); }
  double im_step() const { return (im_max - im_min) / (n_im - 1); }
  double re_at(int j) const { return re_min + j * re_step(); }
  double im_at(int i) const { return im_min + i * im_step(); }
};

void validate_region(const GridRegion& region);

/// Region with Re >= sigma_lo that contains every point of the pseudospectrum
/// to the right of sigma_lo.  Uses |lambda| <= sum (|A_i| + eps/w_i) e^{-sigma_lo tau_i}.
/// `cell` is the target node spacing; im covers [0, R] unless `full_imag`.
GridRegion bounding_region(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                           double sigma_lo, double cell, bool full_imag = false);

/// f on every node; row i is Im = im_at(i), column j is Re = re_at(j).
RMatrix grid_f(const TimeDelaySystem& sys, const PerturbationSpec& pert,
               const GridRegion& region);

struct GridPsa {
  double value = 0.0;
  double resolution = 0.0;  // final node spacing along Re
  cplx maximizer;
};

/// Brute-force pseudospectral abscissa: rightmost node with f >= 1/eps,
/// followed by `refine_iters` rounds of 10x local refinement.
GridPsa grid_psa(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const GridRegion& region, int refine_iters = 3);

/// sup over omega in [0, omega_max] of f_N(sigma + j omega) for each sigma:
/// grid search followed by golden-section refinement of the best node.
std::vector<double> alpha_fN_profile(const Discretization& disc, const PerturbationSpec& pert,
                                     const std::vector<double>& sigmas, double omega_max,
                                     int n_omega);

struct ContourSet {
  double level = 0.0;
  std::vector<std::vector<cplx>> polylines;
};

/// Marching squares on f = level over an already sampled grid.
ContourSet contours_from_grid(const RMatrix& values, const GridRegion& region, double level);

/// Level set f = 1/eps over the region.
ContourSet contours(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                    const GridRegion& region);

}  // namespace psa
