#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psa/oracle.hpp"
#include "psa/pipeline.hpp"

namespace psa {

/// Benchmark problem as stored on disk.  Delays in the file exclude tau_0;
/// infinite weights are written as the string "inf".
struct SystemFile {
  std::string name;
  TimeDelaySystem system;
  PerturbationSpec perturbation;
};

SystemFile parse_system(const nlohmann::json& j);
SystemFile read_system_file(const std::string& path);
nlohmann::json to_json(const SystemFile& file);

/// Machine-readable record of a compute run.
nlohmann::json result_record(const PsaResult& result, int N, double tol);

struct ContourMetadata {
  double epsilon = 0.0;
  GridRegion region;
  std::vector<cplx> roots;
  std::optional<double> alpha_pred;
  std::optional<double> alpha_eps;
};

/// '#'-prefixed key=value header followed by "polyline_id,re,im" rows.
void write_contours(std::ostream& os, const ContourSet& set, const ContourMetadata& meta);

}  // namespace psa
