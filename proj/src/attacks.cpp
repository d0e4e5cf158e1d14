#include "ltidetect/attacks.hpp"

#include <cmath>

namespace ltidetect::attacks {

AttackPlan make_attack_plan(DetectorKind detector, DirectionKind directionKind,
                            const plant::KalmanDesign& design, const Matrix& F,
                            long long startStep, double alpha, double bias,
                            double threshold, const Vector* custom) {
  require(startStep >= 1, ErrorCode::InvalidArgument,
          "make_attack_plan: start step must be >= 1");
  AttackPlan plan;
  plan.detector = detector;
  plan.directionKind = directionKind;
  plan.startStep = startStep;
  plan.alpha = alpha;
  plan.bias = bias;
  plan.threshold = threshold;
  if (detector == DetectorKind::Chi2) {
    require(alpha > 0.0, ErrorCode::InvalidArgument,
            "make_attack_plan: chi-squared plan needs alpha > 0");
  } else {
    require(bias > 0.0 && threshold > 0.0, ErrorCode::InvalidArgument,
            "make_attack_plan: CUSUM plan needs bias > 0 and threshold > 0");
  }

  const auto m = design.Sigma.rows();
  switch (directionKind) {
    case DirectionKind::Uniform:
      plan.direction = Vector::Ones(m) / std::sqrt(static_cast<double>(m));
      break;
    case DirectionKind::WorstCase: {
      const auto n = F.rows();
      require(numerics::spectral_radius(F) < 1.0,
              ErrorCode::SpectralRadiusNotContractive,
              "make_attack_plan: worst-case direction needs a stable F");
      const Matrix A = (Matrix::Identity(n, n) - F)
                           .partialPivLu()
                           .solve(design.L * design.SigmaSqrt);
      plan.direction = numerics::top_right_singular_vector(A);
      break;
    }
    case DirectionKind::Custom: {
      require(custom != nullptr && custom->size() == m && custom->norm() > 0.0,
              ErrorCode::InvalidArgument,
              "make_attack_plan: custom direction must be a nonzero m-vector");
      plan.direction = custom->normalized();
      break;
    }
  }
  return plan;
}

double attack_magnitude(const AttackPlan& plan, double cusumStatistic,
                        long long k) {
  require(k >= plan.startStep, ErrorCode::InvalidArgument,
          "attack_magnitude: attack has not started yet");
  double magnitudeSq = 0.0;
  if (plan.detector == DetectorKind::Chi2) {
    magnitudeSq = plan.alpha;
  } else if (k == plan.startStep) {
    if (cusumStatistic > plan.threshold) {
      raise(ErrorCode::DetectorStateAboveThreshold,
            "attack_magnitude: CUSUM statistic is above the threshold at the "
            "attack start; it must begin after the reset");
    }
    magnitudeSq = plan.threshold + plan.bias - cusumStatistic;
  } else {
    magnitudeSq = plan.bias;
  }
  return std::sqrt(magnitudeSq * (1.0 - plan.margin));
}

Vector attack_delta(const AttackPlan& plan, const plant::KalmanDesign& design,
                    const Matrix& C, const Vector& e, const Vector& eta,
                    double cusumStatistic, long long k) {
  require(e.size() == C.cols() && eta.size() == C.rows(),
          ErrorCode::InvalidArgument, "attack_delta: dimension mismatch");
  const double magnitude = attack_magnitude(plan, cusumStatistic, k);
  return -C * e - eta + design.SigmaSqrt * (magnitude * plan.direction);
}

BoundEnvelope chi2_bound_envelope(const plant::KalmanDesign& design,
                                  const Matrix& F, double alpha, long long kStar,
                                  long long horizon) {
  require(alpha > 0.0, ErrorCode::InvalidArgument,
          "chi2_bound_envelope: alpha must be positive");
  return cusum_bound_envelope(design, F, alpha, 0.0, kStar, horizon);
}

BoundEnvelope cusum_bound_envelope(const plant::KalmanDesign& design,
                                   const Matrix& F, double bias,
                                   double tauBarNorm, long long kStar,
                                   long long horizon) {
  require(bias > 0.0, ErrorCode::InvalidArgument,
          "cusum_bound_envelope: bias must be positive");
  require(tauBarNorm >= 0.0, ErrorCode::InvalidArgument,
          "cusum_bound_envelope: tauBarNorm must be nonnegative");
  require(horizon >= 0, ErrorCode::InvalidArgument,
          "cusum_bound_envelope: horizon must be nonnegative");

  BoundEnvelope env;
  env.norm = numerics::contraction_norm(F);
  env.startStep = kStar;
  const double gain = numerics::operator_norm(design.L * design.SigmaSqrt);
  const double c = env.norm.conditionNumber;
  const double s = env.norm.starNorm;
  const double scale = std::sqrt(bias) * c * gain;
  env.gammaBar = scale / (1.0 - s);

  env.gamma.resize(static_cast<std::size_t>(horizon) + 1);
  double sPowPrev = 0.0;  // s^(i - 1), once i >= 1
  double sPow = 1.0;      // s^i
  for (long long i = 0; i <= horizon; ++i) {
    double g = scale * (1.0 - sPow) / (1.0 - s);
    if (tauBarNorm > 0.0 && i >= 1) g += c * gain * tauBarNorm * sPowPrev;
    env.gamma[static_cast<std::size_t>(i)] = g;
    sPowPrev = sPow;
    sPow *= s;
  }
  return env;
}

SplitTrajectories split_error_trajectories(const plant::LtiModel& model,
                                           const plant::KalmanDesign& design,
                                           const AttackPlan& plan,
                                           long long horizon, std::uint64_t seed,
                                           long long warmUpSteps) {
  require(horizon >= plan.startStep, ErrorCode::InvalidArgument,
          "split_error_trajectories: horizon must reach the attack start");
  require(plan.direction.size() == model.m(), ErrorCode::InvalidArgument,
          "split_error_trajectories: direction dimension mismatch");

  plant::SimState state = plant::warm_up(model, design, warmUpSteps, seed);
  const bool isCusum = plan.detector == DetectorKind::Cusum;
  detectors::CusumConfig cusumCfg(isCusum ? plan.bias : 1.0,
                                  isCusum ? plan.threshold : 1.0, model.m());
  detectors::CusumState cusumState;
  const detectors::Chi2Config chi2Cfg(isCusum ? 1.0 : plan.alpha);

  SplitTrajectories out;
  const auto reserve = static_cast<std::size_t>(horizon);
  out.full.reserve(reserve);
  out.noise.reserve(reserve);
  out.attack.reserve(reserve);
  out.z.reserve(reserve);
  out.statistic.reserve(reserve);

  const Vector u = Vector::Zero(model.l());
  const Vector zeroDelta = Vector::Zero(model.m());
  Vector errNoise;   // e^v, tracked from the attack start
  Vector errAttack;  // e^delta
  bool splitActive = false;

  for (long long k = 1; k <= horizon; ++k) {
    const plant::StepNoise noise = plant::sample_step_noise(model, state);

    Vector delta = zeroDelta;
    Vector scaledDirection = Vector::Zero(model.m());
    if (k >= plan.startStep) {
      const double magnitude = attack_magnitude(plan, cusumState.S, k);
      if (isCusum && k == plan.startStep) out.tauBarNorm = magnitude;
      scaledDirection = magnitude * plan.direction;
      delta = -model.C * state.e - noise.eta + design.SigmaSqrt * scaledDirection;
    }

    if (k == plan.startStep) {
      // e^v starts from the full error at the attack start, e^delta at zero.
      errNoise = state.e;
      errAttack = Vector::Zero(model.n());
      splitActive = true;
    }

    const plant::StepRecord rec =
        plant::apply_step(model, design, state, u, delta, noise);

    bool alarm = false;
    double statistic = rec.z;
    if (isCusum) {
      alarm = detectors::cusum_update(cusumCfg, cusumState, rec.z);
      statistic = cusumState.S;
    } else {
      alarm = detectors::chi2_update(chi2Cfg, rec.z);
    }
    if (alarm) out.alarms.push_back(isCusum ? k - 1 : k);

    if (splitActive) {
      errNoise = model.F * errNoise + noise.v;
      errAttack =
          model.F * errAttack - design.L * (design.SigmaSqrt * scaledDirection);
      const double gap = (state.e - errNoise - errAttack).cwiseAbs().maxCoeff();
      require(gap <= 1e-9, ErrorCode::NoConvergence,
              "split_error_trajectories: superposition check failed");
    }

    out.full.push_back(state.e);
    out.noise.push_back(splitActive ? errNoise : state.e);
    out.attack.push_back(splitActive ? errAttack : Vector::Zero(model.n()));
    out.z.push_back(rec.z);
    out.statistic.push_back(statistic);
    if (state.e.norm() > 1e12) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

}  // namespace ltidetect::attacks
