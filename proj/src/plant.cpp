#include "ltidetect/plant.hpp"

#include <cmath>
#include <numbers>

namespace ltidetect::plant {

namespace {

void check_psd_input(const Matrix& R, Eigen::Index dim, const char* name) {
  require(R.rows() == dim && R.cols() == dim, ErrorCode::InvalidArgument,
          std::string(name) + ": wrong dimensions");
  require(R.allFinite(), ErrorCode::InvalidArgument,
          std::string(name) + ": non-finite entries");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  require((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
          ErrorCode::InvalidArgument, std::string(name) + ": not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(R, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-8 * scale,
          ErrorCode::NotPositiveDefinite,
          std::string(name) + ": not positive semidefinite");
}

}  // namespace

void LtiModel::validate() const {
  require(F.rows() > 0 && F.rows() == F.cols(), ErrorCode::InvalidArgument,
          "LtiModel: F must be square and nonempty");
  require(F.allFinite() && G.allFinite() && C.allFinite(),
          ErrorCode::InvalidArgument, "LtiModel: non-finite entries");
  require(G.rows() == F.rows() && G.cols() >= 1, ErrorCode::InvalidArgument,
          "LtiModel: G must be n x l with l >= 1");
  require(C.cols() == F.rows() && C.rows() >= 1, ErrorCode::InvalidArgument,
          "LtiModel: C must be m x n with m >= 1");
  check_psd_input(R0, F.rows(), "LtiModel R0");
  check_psd_input(R1, F.rows(), "LtiModel R1");
  check_psd_input(R2, C.rows(), "LtiModel R2");
}

KalmanDesign design_filter(const LtiModel& model, double tol, long maxIter) {
  model.validate();
  KalmanDesign design;
  design.P = numerics::dare_solve(model.F, model.C, model.R1, model.R2, tol, maxIter);

  const Matrix Sigma =
      0.5 * ((model.C * design.P * model.C.transpose() + model.R2) +
             (model.C * design.P * model.C.transpose() + model.R2).transpose());
  Eigen::LDLT<Matrix> ldlt(Sigma);
  const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
      ldlt.vectorD().minCoeff() <= dmax * 1e-14) {
    raise(ErrorCode::SingularMatrix,
          "design_filter: residual covariance Sigma is numerically singular");
  }
  design.Sigma = Sigma;
  // L = (F P C') Sigma^-1, via symmetric solve on the right.
  design.L = ldlt.solve(model.C * design.P * model.F.transpose()).transpose();
  Matrix inv = ldlt.solve(Matrix::Identity(Sigma.rows(), Sigma.cols()));
  design.SigmaInv = 0.5 * (inv + inv.transpose());
  design.SigmaSqrt = numerics::symmetric_sqrt(Sigma);
  return design;
}

double GaussianSampler::next() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  hasSpare_ = true;
  return radius * std::cos(angle);
}

Vector GaussianSampler::next_vector(Eigen::Index dim) {
  Vector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z(i) = next();
  return z;
}

SimState initial_state(const LtiModel& model, std::uint64_t seed) {
  model.validate();
  SimState state;
  state.rngSeed = seed;
  state.rng = GaussianSampler(seed);
  state.r1Factor = numerics::covariance_factor(model.R1);
  state.r2Factor = numerics::covariance_factor(model.R2);
  state.x = numerics::covariance_factor(model.R0) * state.rng.next_vector(model.n());
  state.xhat = Vector::Zero(model.n());
  state.e = state.x;
  state.k = 0;
  return state;
}

StepNoise sample_step_noise(const LtiModel& model, SimState& state) {
  StepNoise noise;
  noise.v = state.r1Factor * state.rng.next_vector(model.n());
  noise.eta = state.r2Factor * state.rng.next_vector(model.m());
  return noise;
}

StepRecord apply_step(const LtiModel& model, const KalmanDesign& design,
                      SimState& state, const Vector& u, const Vector& delta,
                      const StepNoise& noise) {
  require(u.size() == model.l() && delta.size() == model.m(),
          ErrorCode::InvalidArgument, "apply_step: u or delta has wrong dimension");
  StepRecord rec;
  rec.v = noise.v;
  rec.eta = noise.eta;
  rec.delta = delta;
  rec.y = model.C * state.x + noise.eta;
  rec.ybar = rec.y + delta;
  rec.r = rec.ybar - model.C * state.xhat;
  rec.z = rec.r.dot(design.SigmaInv * rec.r);

  const Vector drive = model.G * u;
  state.xhat = model.F * state.xhat + drive + design.L * rec.r;
  state.x = model.F * state.x + drive + noise.v;
  state.e = state.x - state.xhat;
  state.k += 1;
  return rec;
}

StepRecord step(const LtiModel& model, const KalmanDesign& design,
                SimState& state, const Vector& u, const Vector& delta) {
  const StepNoise noise = sample_step_noise(model, state);
  return apply_step(model, design, state, u, delta, noise);
}

SimState warm_up(const LtiModel& model, const KalmanDesign& design,
                 long long steps, std::uint64_t seed) {
  require(steps >= 1, ErrorCode::InvalidArgument, "warm_up: steps must be >= 1");
  SimState state = initial_state(model, seed);
  const Vector u = Vector::Zero(model.l());
  const Vector delta = Vector::Zero(model.m());
  for (long long i = 0; i < steps; ++i) step(model, design, state, u, delta);
  return state;
}

}  // namespace ltidetect::plant
