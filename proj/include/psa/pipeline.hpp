#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psa/corrector.hpp"

namespace psa {

struct ComputeOptions {
  PredictorOptions predictor;
  GaussNewtonOptions corrector;
};

/// Prediction, correction and diagnostics of one pseudospectral abscissa run.
struct PsaResult {
  PredictionResult prediction;
  std::optional<CorrectionResult> correction;  // empty when every start failed
  std::vector<std::string> warnings;
  std::string failure;  // message of the corrector failure, if any
  double wall_time_seconds = 0.0;

  bool ok() const { return correction.has_value(); }
  double alpha_eps() const { return correction ? correction->alpha_eps : prediction.alpha_pred; }
};

/// shift -> discretize -> bisect -> correct.  Input errors propagate as
/// psa::Error; a corrector failure is reported in the result.
PsaResult compute(const TimeDelaySystem& sys, const PerturbationSpec& pert,
                  const ComputeOptions& options = {});

}  // namespace psa
