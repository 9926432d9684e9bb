// Command-line front end for the pseudospectral abscissa library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "psa/system_file.hpp"

namespace {

using nlohmann::json;

struct RegionFlags {
  std::optional<double> re_min, re_max, im_min, im_max;
  std::optional<int> n_re, n_im;
  double cell = 0.02;

  void add(CLI::App* app) {
    app->add_option("--re-min", re_min, "left edge of the region");
    app->add_option("--re-max", re_max, "right edge of the region");
    app->add_option("--im-min", im_min, "bottom edge of the region");
    app->add_option("--im-max", im_max, "top edge of the region");
    app->add_option("--n-re", n_re, "nodes along Re");
    app->add_option("--n-im", n_im, "nodes along Im");
    app->add_option("--cell", cell, "node spacing of the automatic region")->check(CLI::PositiveNumber);
  }

  // Explicit flags override the automatic bounding region.
  psa::GridRegion resolve(const psa::GridRegion& automatic) const {
    psa::GridRegion r = automatic;
    if (re_min) r.re_min = *re_min;
    if (re_max) r.re_max = *re_max;
    if (im_min) r.im_min = *im_min;
    if (im_max) r.im_max = *im_max;
    const bool moved = re_min || re_max || im_min || im_max;
    r.n_re = n_re ? *n_re
                  : (moved ? static_cast<int>(std::ceil((r.re_max - r.re_min) / cell)) + 1
                           : r.n_re);
    r.n_im = n_im ? *n_im
                  : (moved ? static_cast<int>(std::ceil((r.im_max - r.im_min) / cell)) + 1
                           : r.n_im);
    psa::validate_region(r);
    return r;
  }
};

struct ComputeFlags {
  int N = 15;
  double tol = 1e-3;
  std::optional<double> epsilon;
  double gn_tol = 1e-10;
  int max_iter = 100;
  int gn_max_iter = 50;
  std::optional<double> delta_init;
  double imag_tol = 1e-8;
  bool damped = false;

  void add(CLI::App* app) {
    app->add_option("--N", N, "number of discretization intervals")->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "bisection tolerance of the prediction step")
        ->check(CLI::PositiveNumber);
    app->add_option("--epsilon", epsilon, "perturbation size (overrides the file)")
        ->check(CLI::PositiveNumber);
    app->add_option("--gn-tol", gn_tol, "Gauss-Newton residual tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "maximum bisection steps")->check(CLI::PositiveNumber);
    app->add_option("--gn-max-iter", gn_max_iter, "maximum Gauss-Newton iterations per start")
        ->check(CLI::PositiveNumber);
    app->add_option("--delta-init", delta_init, "initial bisection step (default: tol)")
        ->check(CLI::PositiveNumber);
    app->add_option("--imag-tol", imag_tol, "relative imaginary-axis test tolerance")
        ->check(CLI::PositiveNumber);
    app->add_flag("--damped", damped, "backtracking line search in Gauss-Newton");
  }

  psa::ComputeOptions options() const {
    psa::ComputeOptions o;
    o.predictor.N = N;
    o.predictor.bisection.tol = tol;
    o.predictor.bisection.max_iter = max_iter;
    o.predictor.bisection.imag_tol = imag_tol;
    o.predictor.bisection.delta_init = delta_init;
    o.corrector.tol = gn_tol;
    o.corrector.max_iter = gn_max_iter;
    o.corrector.damped = damped;
    return o;
  }
};

psa::SystemFile load(const std::string& path, const std::optional<double>& epsilon) {
  auto file = psa::read_system_file(path);
  if (epsilon) file.perturbation.epsilon = *epsilon;
  return file;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(output);
  if (!out) throw psa::Error(psa::ErrorCode::ParseError, "cannot write '" + output + "'");
  out << text << "\n";
}

psa::SpectralAbscissa rightmost_roots(const psa::SystemFile& file, int N) {
  const int n_eff = file.system.m() == 0 ? 0 : N;
  return psa::spectral_abscissa_exact(file.system, psa::assemble(file.system, n_eff));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral abscissa of retarded time-delay systems"};
  app.require_subcommand(1);

  std::string input, output;
  ComputeFlags cflags;
  RegionFlags rflags;

  auto* compute = app.add_subcommand("compute", "predict and correct the pseudospectral abscissa");
  compute->add_option("input", input, "system file (JSON)")->required();
  compute->add_option("--output", output, "write the record here instead of stdout");
  cflags.add(compute);

  auto* contour = app.add_subcommand("contour", "export pseudospectrum contours for plotting");
  contour->add_option("input", input, "system file (JSON)")->required();
  contour->add_option("--output", output, "contour file (default stdout)");
  bool no_markers = false;
  contour->add_flag("--no-markers", no_markers, "skip the abscissa computation for markers");
  cflags.add(contour);
  rflags.add(contour);

  auto* oracle = app.add_subcommand("oracle", "brute-force grid pseudospectral abscissa");
  oracle->add_option("input", input, "system file (JSON)")->required();
  oracle->add_option("--output", output, "write the record here instead of stdout");
  int refine = 3;
  bool compare = false;
  oracle->add_option("--refine", refine, "10x refinement rounds")->check(CLI::NonNegativeNumber);
  oracle->add_flag("--compare", compare, "also run compute and report the gap");
  cflags.add(oracle);
  rflags.add(oracle);

  auto* random = app.add_subcommand("random", "write a random system file");
  int rn = 3, rm = 1;
  unsigned long seed = 1;
  double scale = 1.0, tau_max = 1.0, reps = 0.1;
  random->add_option("--n", rn, "state dimension")->check(CLI::PositiveNumber);
  random->add_option("--m", rm, "number of delays")->check(CLI::NonNegativeNumber);
  random->add_option("--seed", seed, "random seed");
  random->add_option("--scale", scale, "entries are uniform in [-scale, scale]");
  random->add_option("--tau-max", tau_max, "delays are uniform in (0, tau-max]");
  random->add_option("--epsilon", reps, "perturbation size")->check(CLI::PositiveNumber);
  random->add_option("--output", output, "system file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) {
      const auto file = load(input, cflags.epsilon);
      const auto result = psa::compute(file.system, file.perturbation, cflags.options());
      const int N = file.system.m() == 0 ? 0 : cflags.N;
      auto record = psa::result_record(result, N, cflags.tol);
      record["name"] = file.name;
      record["epsilon"] = file.perturbation.epsilon;
      emit(output, record.dump(2));
      return result.ok() ? 0 : 2;
    }

    if (*contour) {
      const auto file = load(input, cflags.epsilon);
      const auto sa = rightmost_roots(file, cflags.N);
      const auto automatic =
          psa::bounding_region(file.system, file.perturbation, sa.value - 1.0, rflags.cell, true);
      psa::ContourMetadata meta;
      meta.epsilon = file.perturbation.epsilon;
      meta.region = rflags.resolve(automatic);
      meta.roots = sa.roots;
      int status = 0;
      if (!no_markers) {
        const auto result = psa::compute(file.system, file.perturbation, cflags.options());
        meta.alpha_pred = result.prediction.alpha_pred;
        if (result.ok()) meta.alpha_eps = result.correction->alpha_eps;
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        status = result.ok() ? 0 : 2;
      }
      const auto set = psa::contours(file.system, file.perturbation, meta.region);
      if (output.empty()) {
        psa::write_contours(std::cout, set, meta);
      } else {
        std::ofstream out(output);
        if (!out) throw psa::Error(psa::ErrorCode::ParseError, "cannot write '" + output + "'");
        psa::write_contours(out, set, meta);
      }
      return status;
    }

    if (*oracle) {
      const auto file = load(input, cflags.epsilon);
      const auto sa = rightmost_roots(file, cflags.N);
      const auto automatic =
          psa::bounding_region(file.system, file.perturbation, sa.value - 0.25, rflags.cell);
      const auto region = rflags.resolve(automatic);
      const auto g = psa::grid_psa(file.system, file.perturbation, region, refine);
      json record;
      record["name"] = file.name;
      record["grid_psa"] = g.value;
      record["resolution"] = g.resolution;
      record["maximizer"] = {g.maximizer.real(), g.maximizer.imag()};
      record["region"] = {region.re_min, region.re_max, region.im_min, region.im_max};
      int status = 0;
      if (compare) {
        const auto result = psa::compute(file.system, file.perturbation, cflags.options());
        if (result.ok()) {
          record["alpha_eps"] = result.correction->alpha_eps;
          record["gap"] = result.correction->alpha_eps - g.value;
        } else {
          record["alpha_eps"] = nullptr;
          status = 2;
        }
      }
      emit(output, record.dump(2));
      return status;
    }

    if (*random) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> entry(-scale, scale);
      std::uniform_real_distribution<double> delay(0.0, tau_max);
      psa::SystemFile file;
      file.name = "random-n" + std::to_string(rn) + "-m" + std::to_string(rm) + "-seed" +
                  std::to_string(seed);
      file.system.delays.push_back(0.0);
      for (int i = 0; i <= rm; ++i) {
        psa::RMatrix A(rn, rn);
        for (int r = 0; r < rn; ++r)
          for (int c = 0; c < rn; ++c) A(r, c) = entry(rng);
        file.system.matrices.push_back(A);
        if (i > 0) {
          double tau = 0.0;
          while (!(tau > 0.0)) tau = tau_max - delay(rng);
          file.system.delays.push_back(tau);
        }
        file.perturbation.weights.push_back(1.0);
      }
      file.perturbation.epsilon = reps;
      emit(output, psa::to_json(file).dump(2));
      return 0;
    }
  } catch (const psa::Error& e) {
    std::cerr << "error (" << psa::to_string(e.code()) << "): " << e.what() << "\n";
    if (e.code() == psa::ErrorCode::RegionTooSmall) {
      std::cerr << "hint: pass a larger --re-max or a coarser --cell\n";
    }
    return e.code() == psa::ErrorCode::AllStartsFailed ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
