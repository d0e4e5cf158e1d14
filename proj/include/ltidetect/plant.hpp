#pragma once

#include <cstdint>
#include <random>

#include "ltidetect/numerics.hpp"

namespace ltidetect::plant {

/// Discrete-time plant x+ = F x + G u + v, y = C x + eta, with sensor
/// attacks entering additively on the transmitted output. R0 is the
/// initial-state covariance, R1 and R2 the process and measurement noise
/// covariances; all three must be symmetric positive semidefinite.
struct LtiModel {
  Matrix F, G, C, R0, R1, R2;

  int n() const { return static_cast<int>(F.rows()); }
  int m() const { return static_cast<int>(C.rows()); }
  int l() const { return static_cast<int>(G.cols()); }

  void validate() const;
};

/// Steady-state Kalman filter artifacts. Sigma is the residual covariance
/// C P C' + R2; SigmaSqrt its symmetric square root; SigmaInv its inverse.
struct KalmanDesign {
  Matrix P, L, Sigma, SigmaSqrt, SigmaInv;
};

KalmanDesign design_filter(const LtiModel& model, double tol = 1e-12,
                           long maxIter = 1000000);

/// Standard-normal stream: mt19937_64 plus the Box-Muller transform.
/// Per pair of engine outputs x, y: u1 = ((x >> 11) + 1) * 2^-53 in (0, 1],
/// u2 = (y >> 11) * 2^-53 in [0, 1); the cosine branch is returned first
/// and the sine branch cached. Fully deterministic for a given seed.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double next();
  Vector next_vector(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

/// One simulated trajectory. Holds the plant state, the estimate, the
/// error e = x - xhat, the step counter, and the noise stream (plus the
/// covariance factors so per-step sampling is cheap). Confine each state
/// to one logical thread; copies are independent replays.
struct SimState {
  Vector x, xhat, e;
  long long k = 0;
  std::uint64_t rngSeed = 0;
  GaussianSampler rng{0};
  Matrix r1Factor, r2Factor;
};

struct StepNoise {
  Vector v, eta;
};

/// Everything observable from one step: true output y, received output
/// ybar = y + delta, residual r = ybar - C xhat, distance z = r' SigmaInv r,
/// and the injected noises for replay checks.
struct StepRecord {
  Vector y, ybar, r, delta, v, eta;
  double z = 0.0;
};

/// x ~ N(0, R0), xhat = 0, k = 0, noise stream seeded with `seed`.
/// Draw order is documented: the initial state consumes n normals; each
/// subsequent step consumes n for v, then m for eta.
SimState initial_state(const LtiModel& model, std::uint64_t seed);

/// Draws (v, eta) for the next step from the state's stream.
StepNoise sample_step_noise(const LtiModel& model, SimState& state);

/// Advances the simulation with externally supplied noise. Deterministic.
StepRecord apply_step(const LtiModel& model, const KalmanDesign& design,
                      SimState& state, const Vector& u, const Vector& delta,
                      const StepNoise& noise);

/// Samples noise and advances. `delta` is the additive sensor attack
/// (pass a zero vector when unattacked).
StepRecord step(const LtiModel& model, const KalmanDesign& design,
                SimState& state, const Vector& u, const Vector& delta);

/// Runs `steps` unattacked, zero-input steps from a fresh initial state and
/// returns the terminal state. Brings the estimator to steady state before
/// an experiment starts.
SimState warm_up(const LtiModel& model, const KalmanDesign& design,
                 long long steps, std::uint64_t seed);

}  // namespace ltidetect::plant
