#include "psa/system_file.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace psa {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + why);
}

double finite_number(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(field, "must be finite");
  return x;
}

RMatrix parse_matrix(const json& j, int n, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array");
  RMatrix A(n, n);
  const bool flat = !j.empty() && !j.front().is_array();
  if (flat) {
    if (j.size() != static_cast<std::size_t>(n) * n) {
      bad(field, "expected " + std::to_string(n * n) + " row-major entries, got " +
                     std::to_string(j.size()));
    }
    for (int k = 0; k < n * n; ++k) {
      A(k / n, k % n) = finite_number(j[k], field + "[" + std::to_string(k) + "]");
    }
    return A;
  }
  if (j.size() != static_cast<std::size_t>(n)) {
    bad(field, "expected " + std::to_string(n) + " rows or " + std::to_string(n * n) +
                   " row-major entries, got " + std::to_string(j.size()));
  }
  for (int r = 0; r < n; ++r) {
    const auto& row = j[r];
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      bad(rf, "expected a row of " + std::to_string(n) + " numbers");
    }
    for (int c = 0; c < n; ++c) A(r, c) = finite_number(row[c], rf + "[" + std::to_string(c) + "]");
  }
  return A;
}

json matrix_json(const RMatrix& A) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SystemFile parse_system(const json& j) {
  if (!j.is_object()) bad("<root>", "expected an object");
  SystemFile out;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("name", "expected a string");
    out.name = j["name"].get<std::string>();
  }
  if (!j.contains("n")) bad("n", "missing");
  if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) bad("n", "expected a positive integer");
  const int n = j["n"].get<int>();

  std::vector<double> delays{0.0};
  if (j.contains("delays")) {
    if (!j["delays"].is_array()) bad("delays", "expected an array");
    for (std::size_t i = 0; i < j["delays"].size(); ++i) {
      const std::string f = "delays[" + std::to_string(i) + "]";
      const auto& d = j["delays"][i];
      if (!d.is_number()) bad(f, "expected a number");
      const double tau = d.get<double>();
      if (std::isnan(tau)) bad(f, "NaN delay");
      if (!(tau > 0.0) || !std::isfinite(tau)) bad(f, "delays must be positive and finite");
      delays.push_back(tau);
    }
  }
  const std::size_t m = delays.size() - 1;

  if (!j.contains("A0")) bad("A0", "missing");
  std::vector<RMatrix> mats{parse_matrix(j["A0"], n, "A0")};
  if (m > 0 || j.contains("A")) {
    if (!j.contains("A") || !j["A"].is_array()) bad("A", "expected an array of matrices");
    if (j["A"].size() != m) {
      bad("A", "expected " + std::to_string(m) + " matrices (one per delay), got " +
                   std::to_string(j["A"].size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
      mats.push_back(parse_matrix(j["A"][i], n, "A[" + std::to_string(i) + "]"));
    }
  }

  if (!j.contains("weights")) bad("weights", "missing");
  const auto& w = j["weights"];
  if (!w.is_array() || w.size() != m + 1) {
    bad("weights", "expected " + std::to_string(m + 1) + " entries");
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string f = "weights[" + std::to_string(i) + "]";
    if (w[i].is_string()) {
      if (w[i].get<std::string>() != "inf") bad(f, "the only accepted string is \"inf\"");
      weights.push_back(kInfiniteWeight);
    } else {
      const double x = finite_number(w[i], f);
      if (!(x > 0.0)) bad(f, "weights must be positive");
      weights.push_back(x);
    }
  }

  if (!j.contains("epsilon")) bad("epsilon", "missing");
  const double eps = finite_number(j["epsilon"], "epsilon");
  if (!(eps > 0.0)) bad("epsilon", "must be positive");

  out.system.delays = std::move(delays);
  out.system.matrices = std::move(mats);
  out.system = validate_system(std::move(out.system));
  out.perturbation.weights = std::move(weights);
  out.perturbation.epsilon = eps;
  validate_perturbation(out.perturbation, out.system);
  return out;
}

SystemFile read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_system(j);
}

json to_json(const SystemFile& file) {
  json j;
  j["name"] = file.name;
  j["n"] = file.system.n();
  j["delays"] = json::array();
  for (std::size_t i = 1; i < file.system.delays.size(); ++i) j["delays"].push_back(file.system.delays[i]);
  j["A0"] = matrix_json(file.system.matrices[0]);
  j["A"] = json::array();
  for (std::size_t i = 1; i < file.system.matrices.size(); ++i) {
    j["A"].push_back(matrix_json(file.system.matrices[i]));
  }
  j["weights"] = json::array();
  for (double w : file.perturbation.weights) {
    if (std::isinf(w)) {
      j["weights"].push_back("inf");
    } else {
      j["weights"].push_back(w);
    }
  }
  j["epsilon"] = file.perturbation.epsilon;
  return j;
}

json result_record(const PsaResult& result, int N, double tol) {
  const auto& p = result.prediction;
  json j;
  j["status"] = result.ok() ? "ok" : "all-starts-failed";
  if (result.ok()) {
    j["alpha_eps"] = result.correction->alpha_eps;
    j["omega_eps"] = result.correction->omega_eps;
  } else {
    j["alpha_eps"] = nullptr;
    j["omega_eps"] = nullptr;
  }
  j["alpha_pred"] = p.alpha_pred;
  j["frequencies"] = p.frequencies;
  j["spectral_abscissa"] = p.spectral_abscissa.value;
  j["N"] = N;
  j["tol"] = tol;
  j["bracket"] = {p.bracket.lower, p.bracket.upper ? json(*p.bracket.upper) : json(nullptr)};

  json gn = json::array();
  json starts = json::array();
  if (result.correction) {
    for (const auto& s : result.correction->per_start) {
      gn.push_back(s.iterations);
      starts.push_back({{"start_omega", s.start_omega},
                        {"converged", s.converged},
                        {"sigma", s.sigma},
                        {"omega", s.omega},
                        {"iterations", s.iterations},
                        {"residual", s.final_residual}});
    }
  }
  j["iterations"] = {{"bisection", p.iterations}, {"gauss_newton", gn}};
  j["starts"] = starts;
  j["warnings"] = result.warnings;
  if (!result.failure.empty()) j["error"] = result.failure;
  j["wall_time_seconds"] = result.wall_time_seconds;
  return j;
}

void write_contours(std::ostream& os, const ContourSet& set, const ContourMetadata& meta) {
  const auto& r = meta.region;
  os << std::setprecision(17);
  os << "# level=" << set.level << "\n";
  os << "# epsilon=" << meta.epsilon << "\n";
  os << "# region=" << r.re_min << "," << r.re_max << "," << r.im_min << "," << r.im_max << "\n";
  os << "# resolution=" << r.n_re << "x" << r.n_im << "\n";
  if (meta.alpha_pred) os << "# alpha_pred=" << *meta.alpha_pred << "\n";
  if (meta.alpha_eps) os << "# alpha_eps=" << *meta.alpha_eps << "\n";
  for (const auto& z : meta.roots) os << "# root=" << z.real() << "," << z.imag() << "\n";
  os << "polyline_id,re,im\n";
  for (std::size_t k = 0; k < set.polylines.size(); ++k) {
    for (const auto& z : set.polylines[k]) os << k << "," << z.real() << "," << z.imag() << "\n";
  }
}

}  // namespace psa
