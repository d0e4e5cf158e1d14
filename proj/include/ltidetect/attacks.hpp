#pragma once

#include <cstdint>
#include <vector>

#include "ltidetect/detectors.hpp"
#include "ltidetect/plant.hpp"

namespace ltidetect::attacks {

enum class DetectorKind { Cusum, Chi2 };
enum class DirectionKind { Uniform, WorstCase, Custom };

/// Zero-alarm attack plan: an attack direction of unit norm, a start step,
/// and the detector tuning the attack is built against. Magnitudes sit at
/// the top of the feasible set, shaved by a relative `margin` so the
/// detector's strict comparison never trips on rounding.
struct AttackPlan {
  DetectorKind detector = DetectorKind::Chi2;
  DirectionKind directionKind = DirectionKind::Uniform;
  Vector direction;
  long long startStep = 2000;
  double alpha = 0.0;      // chi-squared threshold
  double bias = 0.0;       // CUSUM bias
  double threshold = 0.0;  // CUSUM threshold
  double margin = 1e-13;
};

/// Resolves the direction for the given kind: uniform is 1/sqrt(m) * ones;
/// the worst case is the top right singular vector of (I - F)^-1 L Sigma^(1/2),
/// which maximizes the steady-state attack-driven error norm. For Custom,
/// `custom` is normalized to unit length.
AttackPlan make_attack_plan(DetectorKind detector, DirectionKind directionKind,
                            const plant::KalmanDesign& design, const Matrix& F,
                            long long startStep, double alpha, double bias,
                            double threshold, const Vector* custom = nullptr);

/// Magnitude of the free residual vector at step k: sqrt(alpha) for
/// chi-squared plans; for CUSUM plans sqrt(threshold + bias - S) at the
/// start step and sqrt(bias) afterwards, all shaved by the plan margin.
/// Throws if a CUSUM attack would start while the stored statistic is
/// above the threshold.
double attack_magnitude(const AttackPlan& plan, double cusumStatistic,
                        long long k);

/// The injection for step k: cancels C e + eta and plants the residual at
/// Sigma^(1/2) times the scaled direction. Needs the true estimation error
/// and measurement noise of the step (white-box attacker), plus the running
/// CUSUM statistic for the first-step magnitude.
Vector attack_delta(const AttackPlan& plan, const plant::KalmanDesign& design,
                    const Matrix& C, const Vector& e, const Vector& eta,
                    double cusumStatistic, long long k);

/// Closed-form upper bounds on the attack-driven estimation error.
/// gamma[i] bounds the error norm at step startStep + i; gammaBar is the
/// geometric-series limit.
struct BoundEnvelope {
  std::vector<double> gamma;
  double gammaBar = 0.0;
  numerics::ContractionNorm norm;
  long long startStep = 0;
};

BoundEnvelope chi2_bound_envelope(const plant::KalmanDesign& design,
                                  const Matrix& F, double alpha, long long kStar,
                                  long long horizon);

/// CUSUM envelope: the chi-squared form with sqrt(bias) in place of
/// sqrt(alpha), plus a transient term proportional to the realized
/// first-step magnitude `tauBarNorm` that decays geometrically.
BoundEnvelope cusum_bound_envelope(const plant::KalmanDesign& design,
                                   const Matrix& F, double bias,
                                   double tauBarNorm, long long kStar,
                                   long long horizon);

/// One attacked trajectory with the estimation error co-integrated as the
/// noise-driven part plus the attack-driven part. Index i holds step
/// k = i + 1 (post warm-up): `full`, `noise` and `attack` are the errors
/// entering step k, so attack[kStar - 1] is exactly zero, while `z`,
/// `statistic` and `delta` belong to step k itself. Superposition of the
/// parts is checked against the simulated error at every step.
struct SplitTrajectories {
  std::vector<Vector> full, noise, attack;
  std::vector<Vector> delta;      // injected attack per step
  std::vector<double> z;          // distance measure per step
  std::vector<double> statistic;  // CUSUM S (z itself for chi-squared runs)
  std::vector<long long> alarms;  // alarm steps, detector indexing
  double tauBarNorm = 0.0;        // realized first-step magnitude (CUSUM)
  bool truncated = false;         // stopped early on error-norm blowup
};

SplitTrajectories split_error_trajectories(const plant::LtiModel& model,
                                           const plant::KalmanDesign& design,
                                           const AttackPlan& plan,
                                           long long horizon, std::uint64_t seed,
                                           long long warmUpSteps = 1000);

}  // namespace ltidetect::attacks
