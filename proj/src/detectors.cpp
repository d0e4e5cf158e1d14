#include "ltidetect/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace ltidetect::detectors {

CusumConfig::CusumConfig(double biasIn, double thresholdIn, int outputDim,
                         bool disableResetIn)
    : bias(biasIn), threshold(thresholdIn), disableReset(disableResetIn) {
  require(std::isfinite(bias) && bias > 0.0, ErrorCode::InvalidArgument,
          "CusumConfig: bias must be positive");
  require(std::isfinite(threshold) && threshold > 0.0, ErrorCode::InvalidArgument,
          "CusumConfig: threshold must be positive");
  require(outputDim >= 1, ErrorCode::InvalidArgument,
          "CusumConfig: output dimension must be >= 1");
  strictBias = bias > static_cast<double>(outputDim);
}

Chi2Config::Chi2Config(double alphaIn) : alpha(alphaIn) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::InvalidArgument,
          "Chi2Config: alpha must be positive");
}

bool cusum_update(const CusumConfig& cfg, CusumState& state, double z) {
  require(std::isfinite(z) && z >= 0.0, ErrorCode::InvalidArgument,
          "cusum_update: distance measure must be nonnegative");
  state.k += 1;
  if (!cfg.disableReset && state.S > cfg.threshold) {
    state.alarms.push_back(state.k - 1);  // z is discarded on the reset step
    state.S = 0.0;
    return true;
  }
  state.S = std::max(0.0, state.S + z - cfg.bias);
  if (!cfg.disableReset && state.S > cfg.threshold)
    state.crossings.push_back(state.k);
  return false;
}

bool chi2_update(const Chi2Config& cfg, double z) {
  require(std::isfinite(z) && z >= 0.0, ErrorCode::InvalidArgument,
          "chi2_update: distance measure must be nonnegative");
  return z > cfg.alpha;
}

}  // namespace ltidetect::detectors
