#include "psa/pipeline.hpp"

#include <chrono>
#include <sstream>

namespace psa {

PsaResult compute(const TimeDelaySystem& raw, const PerturbationSpec& pert,
                  const ComputeOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const TimeDelaySystem sys = validate_system(raw);
  validate_perturbation(pert, sys);

  PsaResult out;
  out.prediction = predict(sys, pert, options.predictor);
  if (out.prediction.spectral_abscissa.fallback) {
    out.warnings.push_back(
        "Newton refinement of the rightmost eigenvalues failed; the spectral abscissa of "
        "the discretization was used as shift");
  }
  try {
    out.correction = correct(sys, pert, out.prediction, options.corrector);
    for (const auto& w : out.correction->warnings) out.warnings.push_back(w);
    if (out.correction->alpha_eps < out.prediction.spectral_abscissa.value) {
      std::ostringstream msg;
      msg << "corrected abscissa " << out.correction->alpha_eps
          << " is below the spectral abscissa " << out.prediction.spectral_abscissa.value;
      out.warnings.push_back(msg.str());
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllStartsFailed) throw;
    out.failure = e.what();
    out.warnings.push_back("no corrector start converged; retry with a smaller tol or a larger N");
  }
  out.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace psa
