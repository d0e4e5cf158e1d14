#pragma once

#include <vector>

#include "ltidetect/errors.hpp"

namespace ltidetect::detectors {

/// CUSUM parameters. `strictBias` records whether the bias exceeds the
/// output dimension, the condition under which the statistic stays bounded
/// in mean square; the detector runs either way. With `disableReset` the
/// threshold branch is skipped entirely (no alarms, no resets), which is
/// how the unbounded-growth experiment is run.
struct CusumConfig {
  CusumConfig(double bias, double threshold, int outputDim,
              bool disableReset = false);

  double bias = 0.0;
  double threshold = 0.0;
  bool disableReset = false;
  bool strictBias = false;
};

/// Running CUSUM state. `alarms` stores alarm times in the detector's
/// native indexing (alarm attributed to step k-1, recorded on the reset
/// transition at step k); `crossings` stores the same events at the update
/// that pushed S above the threshold. Both lists count one event per
/// threshold crossing; `crossings` may briefly lead by the one event whose
/// reset transition has not arrived yet.
struct CusumState {
  double S = 0.0;
  long long k = 0;
  std::vector<long long> alarms;
  std::vector<long long> crossings;
};

/// One CUSUM transition with the incoming distance measure z. If the
/// stored statistic exceeds the threshold, the alarm fires, S resets to
/// zero and z is discarded; otherwise S <- max(0, S + z - bias). Returns
/// whether an alarm fired on this transition.
bool cusum_update(const CusumConfig& cfg, CusumState& state, double z);

struct Chi2Config {
  explicit Chi2Config(double alpha);
  double alpha = 0.0;
};

/// Stateless chi-squared test: alarm iff z is strictly above the threshold.
bool chi2_update(const Chi2Config& cfg, double z);

}  // namespace ltidetect::detectors
