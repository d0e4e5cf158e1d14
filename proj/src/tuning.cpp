#include "ltidetect/tuning.hpp"

#include <cmath>
#include <vector>

namespace ltidetect::tuning {

double bias_lower_bound(int m) {
  require(m >= 1, ErrorCode::InvalidArgument, "bias_lower_bound: m must be >= 1");
  return static_cast<double>(m);
}

double drift_boundary(double b, int m) {
  require(m >= 1, ErrorCode::InvalidArgument, "drift_boundary: m must be >= 1");
  require(std::isfinite(b) && b > static_cast<double>(m), ErrorCode::DomainError,
          "drift_boundary: requires bias > m");
  const double gap = b - static_cast<double>(m);
  return (gap * gap + 2.0 * m) / (2.0 * gap);
}

double shifted_chi2_cdf(int m, double b, double x) {
  require(m >= 1, ErrorCode::InvalidArgument, "shifted_chi2_cdf: m must be >= 1");
  if (x < -b) return 0.0;
  return numerics::regularized_lower_gamma(0.5 * m, 0.5 * (x + b));
}

namespace {

void check_chain_args(int m, double b, double tau, int N) {
  require(m >= 1, ErrorCode::InvalidArgument, "markov chain: m must be >= 1");
  require(std::isfinite(b) && b > 0.0, ErrorCode::InvalidArgument,
          "markov chain: bias must be positive");
  require(std::isfinite(tau) && tau > 0.0, ErrorCode::InvalidArgument,
          "markov chain: threshold must be positive");
  require(N >= 2, ErrorCode::InvalidArgument, "markov chain: N must be >= 2");
}

// Entries depend only on the column-minus-row offset, so the chain needs
// just the CDF at the 2N grid midpoints: cdfAt[i] = F(chi dS + dS/2) for
// chi = i - N, with p_chi = cdfAt[chi] - cdfAt[chi - 1].
std::vector<double> chain_cdf_grid(int m, double b, double tau, int N) {
  const double dS = 2.0 * tau / (2.0 * N - 1.0);
  std::vector<double> cdf(2 * N);
  for (int i = 0; i < 2 * N; ++i) {
    const int chi = i - N;
    cdf[i] = shifted_chi2_cdf(m, b, chi * dS + 0.5 * dS);
  }
  return cdf;
}

// Leading N x N block of the transition matrix (transient-to-transient).
Matrix chain_fundamental(const std::vector<double>& cdf, int N) {
  Matrix R(N, N);
  for (int j = 0; j < N; ++j) {
    R(j, 0) = cdf[static_cast<std::size_t>(-j + N)];
    for (int nu = 1; nu < N; ++nu) {
      const int idx = nu - j + N;
      R(j, nu) = cdf[static_cast<std::size_t>(idx)] -
                 cdf[static_cast<std::size_t>(idx - 1)];
    }
  }
  return R;
}

Vector absorption_times(const Matrix& fundamental) {
  const auto N = fundamental.rows();
  const Matrix A = Matrix::Identity(N, N) - fundamental;
  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector mu = lu.solve(Vector::Ones(N));
  require((A * mu - Vector::Ones(N)).cwiseAbs().maxCoeff() <= 1e-6,
          ErrorCode::SingularMatrix,
          "markov chain: (I - R) solve failed; construction is inconsistent");
  return mu;
}

}  // namespace

ArlApproximation build_markov_chain(int m, double b, double tau, int N) {
  check_chain_args(m, b, tau, N);
  const std::vector<double> cdf = chain_cdf_grid(m, b, tau, N);

  ArlApproximation approx;
  approx.partitions = N;
  approx.groupWidth = 2.0 * tau / (2.0 * N - 1.0);
  approx.fundamental = chain_fundamental(cdf, N);
  approx.transition = Matrix::Zero(N + 1, N + 1);
  approx.transition.topLeftCorner(N, N) = approx.fundamental;
  for (int j = 0; j < N; ++j) {
    // Absorbing column: 1 - F((N-1-j) dS + dS/2); the row then sums to one
    // exactly by telescoping.
    approx.transition(j, N) = 1.0 - cdf[static_cast<std::size_t>(N - 1 - j + N)];
  }
  approx.transition(N, N) = 1.0;
  approx.mu = absorption_times(approx.fundamental);
  approx.falseAlarmRate = 1.0 / approx.mu(0);
  return approx;
}

double arl_false_alarm_rate(int m, double b, double tau, int N) {
  check_chain_args(m, b, tau, N);
  const std::vector<double> cdf = chain_cdf_grid(m, b, tau, N);
  const Vector mu = absorption_times(chain_fundamental(cdf, N));
  return 1.0 / mu(0);
}

TuningResult solve_cusum_threshold(int m, double b, double targetRate, int N,
                                   double tol) {
  require(std::isfinite(targetRate) && targetRate > 0.0 && targetRate < 1.0,
          ErrorCode::InvalidArgument,
          "solve_cusum_threshold: target rate must be in (0, 1)");
  require(tol > 0.0, ErrorCode::InvalidArgument,
          "solve_cusum_threshold: tol must be positive");

  TuningResult result;
  result.bias = b;
  result.targetRate = targetRate;
  result.partitions = N;
  result.biasAboveLowerBound = b > bias_lower_bound(m);

  double lo = 1e-3;
  double rateLo = arl_false_alarm_rate(m, b, lo, N);
  // The rate is decreasing in tau with supremum pr(z > b) as tau -> 0+.
  while (rateLo <= targetRate && lo > 1.5e-6) {
    lo *= 0.1;
    rateLo = arl_false_alarm_rate(m, b, lo, N);
  }
  if (rateLo <= targetRate) {
    raise(ErrorCode::BracketFailure,
          "solve_cusum_threshold: target rate " + std::to_string(targetRate) +
              " is not achievable for this bias; the rate approaches " +
              std::to_string(rateLo) + " as tau -> 0");
  }
  double hi = 1.0;
  double rateHi = arl_false_alarm_rate(m, b, hi, N);
  while (rateHi >= targetRate) {
    hi *= 2.0;
    require(hi <= 1e6, ErrorCode::BracketFailure,
            "solve_cusum_threshold: no bracket found for tau within (0, 1e6]");
    rateHi = arl_false_alarm_rate(m, b, hi, N);
  }

  double mid = 0.5 * (lo + hi);
  double rateMid = 0.0;
  int iterations = 0;
  while (true) {
    mid = 0.5 * (lo + hi);
    rateMid = arl_false_alarm_rate(m, b, mid, N);
    ++iterations;
    if (std::abs(rateMid - targetRate) <= tol || (hi - lo) <= 1e-6) break;
    if (rateMid > targetRate)
      lo = mid;
    else
      hi = mid;
  }
  result.tau = mid;
  result.approxRate = rateMid;
  result.iterations = iterations;
  return result;
}

double chi2_threshold(int m, double targetRate) {
  require(m >= 1, ErrorCode::InvalidArgument, "chi2_threshold: m must be >= 1");
  require(std::isfinite(targetRate) && targetRate > 0.0 && targetRate < 1.0,
          ErrorCode::InvalidArgument, "chi2_threshold: rate must be in (0, 1)");
  return 2.0 * numerics::inverse_regularized_lower_gamma(0.5 * m, 1.0 - targetRate);
}

}  // namespace ltidetect::tuning
