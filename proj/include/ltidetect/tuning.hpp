#pragma once

#include "ltidetect/numerics.hpp"

namespace ltidetect::tuning {

/// Bias level the CUSUM must exceed for mean-square boundedness of the
/// statistic: the output dimension m.
double bias_lower_bound(int m);

/// Level above which the conditional second-moment drift of the CUSUM is
/// negative: ((b - m)^2 + 2m) / (2 (b - m)), defined for b > m.
double drift_boundary(double b, int m);

/// CDF of z - b where z is chi-squared with m degrees of freedom:
/// P(m/2, (x + b)/2) for x >= -b, zero below the support.
double shifted_chi2_cdf(int m, double b, double x);

/// Discretized Markov chain of the CUSUM recursion over N transient states
/// plus one absorbing state. `falseAlarmRate` is the reciprocal of the
/// expected absorption time from the empty state.
struct ArlApproximation {
  int partitions = 0;      // N
  double groupWidth = 0.0; // 2 tau / (2N - 1)
  Matrix transition;       // (N+1) x (N+1), rows sum to one, last row absorbing
  Matrix fundamental;      // leading N x N block
  Vector mu;               // (I - fundamental)^-1 * ones
  double falseAlarmRate = 0.0;
};

ArlApproximation build_markov_chain(int m, double b, double tau, int N);

/// Same approximation without retaining the matrices; used inside the
/// threshold search where only the rate is needed.
double arl_false_alarm_rate(int m, double b, double tau, int N);

struct TuningResult {
  double bias = 0.0;
  double tau = 0.0;
  double targetRate = 0.0;
  double approxRate = 0.0;
  int partitions = 0;
  int iterations = 0;
  bool biasAboveLowerBound = true;
};

/// Bisection on tau -> approximate false alarm rate, over a bracket grown
/// from [1e-3, 1] by doubling the upper end. Terminates when the rate is
/// within `tol` of the target or the bracket width drops below 1e-6.
/// A bias at or below the boundedness bound is flagged, not rejected.
TuningResult solve_cusum_threshold(int m, double b, double targetRate,
                                   int N = 1000, double tol = 1e-4);

/// Closed-form chi-squared threshold for a desired false alarm rate:
/// 2 Pinv(m/2, 1 - rate).
double chi2_threshold(int m, double targetRate);

}  // namespace ltidetect::tuning
