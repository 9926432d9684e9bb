#include "psa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "psa/errors.hpp"
#include "psa/numerics.hpp"

namespace psa {

void validate_region(const GridRegion& r) {
  if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max) || r.n_re < 2 || r.n_im < 2) {
    throw Error(ErrorCode::InvalidRegion,
                "region needs re_min < re_max, im_min < im_max and at least 2 nodes per axis");
  }
}

GridRegion bounding_region(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                           double sigma_lo, double cell, bool full_imag) {
  double radius = 0.0;
  for (std::size_t i = 0; i < sys.matrices.size(); ++i) {
    const double a = numerics::svd_complex(sys.matrices[i].cast<cplx>()).values(0);
    const double d = std::isinf(pert.weights[i]) ? 0.0 : pert.epsilon / pert.weights[i];
    radius += (a + d) * std::exp(-sigma_lo * sys.delays[i]);
  }
  radius += cell;
  GridRegion r;
  r.re_min = sigma_lo;
  r.re_max = std::max(radius, sigma_lo + 2.0 * cell);
  r.im_min = full_imag ? -radius : 0.0;
  r.im_max = radius;
  r.n_re = std::max(2, static_cast<int>(std::ceil((r.re_max - r.re_min) / cell)) + 1);
  r.n_im = std::max(2, static_cast<int>(std::ceil((r.im_max - r.im_min) / cell)) + 1);
  return r;
}

RMatrix grid_f(const TimeDelaySystem& sys, const PerturbationSpec& pert,
               const GridRegion& region) {
  validate_region(region);
  RMatrix values(region.n_im, region.n_re);
  for (int j = 0; j < region.n_re; ++j) {
    const double re = region.re_at(j);
    for (int i = 0; i < region.n_im; ++i) {
      values(i, j) = eval_f(sys, pert, cplx(re, region.im_at(i)));
    }
  }
  return values;
}

namespace {

struct Rightmost {
  bool found = false;
  int col = 0;
  double re = 0.0;
  double im = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;
};

Rightmost rightmost_inside(const RMatrix& values, const GridRegion& region, double level) {
  Rightmost out;
  for (int j = region.n_re - 1; j >= 0 && !out.found; --j) {
    for (int i = 0; i < region.n_im; ++i) {
      if (values(i, j) >= level) {
        out.found = true;
        out.col = j;
        out.re = region.re_at(j);
        out.im = region.im_at(i);
        break;
      }
    }
  }
  if (!out.found) return out;
  out.im_lo = out.im_hi = out.im;
  for (int j = std::max(0, out.col - 1); j < region.n_re; ++j) {
    for (int i = 0; i < region.n_im; ++i) {
      if (values(i, j) >= level) {
        out.im_lo = std::min(out.im_lo, region.im_at(i));
        out.im_hi = std::max(out.im_hi, region.im_at(i));
      }
    }
  }
  return out;
}

}  // namespace

GridPsa grid_psa(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                 const GridRegion& region, int refine_iters) {
  const double level = 1.0 / pert.epsilon;
  GridRegion cur = region;
  RMatrix values = grid_f(sys, pert, cur);
  for (int i = 0; i < cur.n_im; ++i) {
    if (values(i, cur.n_re - 1) >= level) {
      throw Error(ErrorCode::RegionTooSmall,
                  "f >= 1/eps on the right edge at Im = " + std::to_string(cur.im_at(i)) +
                      "; enlarge re_max");
    }
  }
  Rightmost best = rightmost_inside(values, cur, level);
  if (!best.found) {
    throw Error(ErrorCode::EmptyPseudospectrum, "no node with f >= 1/eps in the region");
  }

  for (int round = 0; round < refine_iters; ++round) {
    const double h_re = cur.re_step();
    const double h_im = cur.im_step();
    GridRegion next;
    next.n_re = 21;
    next.re_min = best.re - h_re;
    next.re_max = best.re + h_re;
    next.im_min = std::max(region.im_min, best.im_lo - h_im);
    next.im_max = std::min(region.im_max, best.im_hi + h_im);
    next.n_im = std::max(2, static_cast<int>(std::lround((next.im_max - next.im_min) /
                                                         (0.1 * h_im))) + 1);
    Rightmost fine;
    for (int slide = 0; slide < 10; ++slide) {
      values = grid_f(sys, pert, next);
      fine = rightmost_inside(values, next, level);
      if (!fine.found || fine.col < next.n_re - 1) break;
      next.re_min += h_re;
      next.re_max += h_re;
    }
    cur = next;
    if (fine.found && fine.re >= best.re) best = fine;
  }

  GridPsa out;
  out.value = best.re;
  out.resolution = cur.re_step();
  out.maximizer = cplx(best.re, best.im);
  return out;
}

namespace {

double eval_fN(const Discretization& disc, const PerturbationSpec& pert, cplx lambda) {
  try {
    const double smin = numerics::sigma_min(eval_FN(disc, lambda));
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return eval_weight(pert, disc.system, lambda.real()) / smin;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<double> alpha_fN_profile(const Discretization& disc, const PerturbationSpec& pert,
                                     const std::vector<double>& sigmas, double omega_max,
                                     int n_omega) {
  std::vector<double> out;
  out.reserve(sigmas.size());
  const double h = omega_max / std::max(1, n_omega - 1);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);

  // Resolvent peaks sit near the eigenvalue frequencies; seed those too.
  std::vector<double> seeds;
  const CVector ev = numerics::eig_real(disc.A_N).values;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double w = std::abs(ev(k).imag());
    if (w <= omega_max) seeds.push_back(w);
  }

  for (double sigma : sigmas) {
    auto f = [&](double w) { return eval_fN(disc, pert, cplx(sigma, w)); };
    auto maximize = [&](double lo, double hi) {
      double a = hi - golden * (hi - lo);
      double b = lo + golden * (hi - lo);
      double fa = f(a);
      double fb = f(b);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        if (fa > fb) {
          hi = b;
          b = a;
          fb = fa;
          a = hi - golden * (hi - lo);
          fa = f(a);
        } else {
          lo = a;
          a = b;
          fa = fb;
          b = lo + golden * (hi - lo);
          fb = f(b);
        }
      }
      return std::max(fa, fb);
    };

    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < n_omega; ++k) {
      const double v = f(k * h);
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    double value = std::max(best_val, maximize(std::max(0.0, (best - 1) * h),
                                               std::min(omega_max, (best + 1) * h)));
    for (double w : seeds) {
      value = std::max(value, f(w));
      value = std::max(value, maximize(std::max(0.0, w - h), std::min(omega_max, w + h)));
    }
    out.push_back(value);
  }
  return out;
}

ContourSet contours_from_grid(const RMatrix& values, const GridRegion& region, double level) {
  validate_region(region);
  const int nr = region.n_re;
  const int ni = region.n_im;
  const double cap = 1e12 * std::max(1.0, std::abs(level));
  auto g = [&](int i, int j) {
    const double v = values(i, j);
    return (std::isfinite(v) ? std::min(v, cap) : cap) - level;
  };

  // Edge ids: horizontal (i,j)-(i,j+1) first, then vertical (i,j)-(i+1,j).
  const long horizontal = static_cast<long>(ni) * (nr - 1);
  auto h_edge = [&](int i, int j) { return static_cast<long>(i) * (nr - 1) + j; };
  auto v_edge = [&](int i, int j) { return horizontal + static_cast<long>(i) * nr + j; };

  std::map<long, cplx> points;
  auto crossing = [&](long id, int i0, int j0, int i1, int j1) {
    if (points.count(id)) return;
    const double a = g(i0, j0);
    const double b = g(i1, j1);
    const double t = a / (a - b);
    const double re = region.re_at(j0) + t * (region.re_at(j1) - region.re_at(j0));
    const double im = region.im_at(i0) + t * (region.im_at(i1) - region.im_at(i0));
    points[id] = cplx(re, im);
  };

  std::vector<std::pair<long, long>> segments;
  for (int i = 0; i + 1 < ni; ++i) {
    for (int j = 0; j + 1 < nr; ++j) {
      const bool in00 = g(i, j) >= 0, in01 = g(i, j + 1) >= 0;
      const bool in10 = g(i + 1, j) >= 0, in11 = g(i + 1, j + 1) >= 0;
      const long bottom = h_edge(i, j), top = h_edge(i + 1, j);
      const long left = v_edge(i, j), right = v_edge(i, j + 1);
      std::vector<long> cut;
      if (in00 != in01) { crossing(bottom, i, j, i, j + 1); cut.push_back(bottom); }
      if (in01 != in11) { crossing(right, i, j + 1, i + 1, j + 1); cut.push_back(right); }
      if (in11 != in10) { crossing(top, i + 1, j, i + 1, j + 1); cut.push_back(top); }
      if (in10 != in00) { crossing(left, i, j, i + 1, j); cut.push_back(left); }
      if (cut.size() == 2) {
        segments.emplace_back(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const double centre = 0.25 * (g(i, j) + g(i, j + 1) + g(i + 1, j) + g(i + 1, j + 1));
        // Pair the edges around the corners whose side differs from the centre.
        const bool corner00_split = (centre >= 0) != in00;
        if (corner00_split) {
          segments.emplace_back(bottom, left);
          segments.emplace_back(right, top);
        } else {
          segments.emplace_back(bottom, right);
          segments.emplace_back(top, left);
        }
      }
    }
  }

  std::map<long, std::vector<std::size_t>> by_point;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_point[segments[s].first].push_back(s);
    by_point[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_segment = [&](long point, std::size_t from) -> std::ptrdiff_t {
    for (std::size_t s : by_point[point]) {
      if (s != from && !used[s]) return static_cast<std::ptrdiff_t>(s);
    }
    return -1;
  };

  ContourSet out;
  out.level = level;
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<long> chain{segments[s0].first, segments[s0].second};
    // forward
    for (std::size_t cur = s0;;) {
      const auto nx = next_segment(chain.back(), cur);
      if (nx < 0) break;
      used[nx] = true;
      const auto& seg = segments[nx];
      chain.push_back(seg.first == chain.back() ? seg.second : seg.first);
      cur = static_cast<std::size_t>(nx);
    }
    // backward
    std::vector<long> head;
    for (std::size_t cur = s0;;) {
      const long end = head.empty() ? chain.front() : head.back();
      const auto nx = next_segment(end, cur);
      if (nx < 0) break;
      used[nx] = true;
      const auto& seg = segments[nx];
      head.push_back(seg.first == end ? seg.second : seg.first);
      cur = static_cast<std::size_t>(nx);
    }
    std::vector<cplx> poly;
    poly.reserve(head.size() + chain.size());
    for (auto it = head.rbegin(); it != head.rend(); ++it) poly.push_back(points[*it]);
    for (long id : chain) poly.push_back(points[id]);
    out.polylines.push_back(std::move(poly));
  }
  return out;
}

ContourSet contours(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                    const GridRegion& region) {
  return contours_from_grid(grid_f(sys, pert, region), region, 1.0 / pert.epsilon);
}

}  // namespace psa
