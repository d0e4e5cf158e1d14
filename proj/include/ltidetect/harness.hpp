#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ltidetect/attacks.hpp"
#include "ltidetect/tuning.hpp"

namespace ltidetect::harness {

/// The benchmark plant: a well-stirred chemical reactor with heat
/// exchanger, discretized at 0.05 s. Four states (product concentration,
/// product temperature, jacket water temperature, coolant temperature),
/// three inputs, three measured outputs, R2 = 0.01 I, R0 = R1 = I.
plant::LtiModel reactor_fixture();

struct DetectorSettings {
  attacks::DetectorKind kind = attacks::DetectorKind::Cusum;
  double bias = 6.0;
  double threshold = 4.1002;
  double alpha = 9.8374093112;
  bool disableReset = false;
};

struct AttackSettings {
  bool enabled = false;
  attacks::DirectionKind direction = attacks::DirectionKind::WorstCase;
  Vector customDirection;
  long long startStep = 2000;
};

/// One experiment: model, detector tuning, optional attack, and the run
/// budget. Trials are split across streams seeded from (seed + trial
/// index), so serial and parallel execution aggregate identically.
struct ExperimentConfig {
  plant::LtiModel model;
  DetectorSettings detector;
  AttackSettings attack;
  long long horizon = 10000;
  int trials = 1;
  std::uint64_t seed = 1;
  long long warmUpSteps = 1000;
  std::string outputPath;
  /// Optional state feedback; u = 0 when absent. Programmatic only.
  std::function<Vector(const plant::SimState&)> controlLaw;
};

struct FalseAlarmEstimate {
  double rateByCount = 0.0;
  double rateByRunLength = 0.0;
  double standardError = 0.0;
  long long totalSteps = 0;
  long long alarmCount = 0;
};

/// Streams unattacked residuals through the configured detector across all
/// trials and reports the alarm fraction plus the reciprocal mean run
/// length (steps between threshold crossings).
FalseAlarmEstimate estimate_false_alarm_rate(const ExperimentConfig& cfg);

struct StreamRow {
  long long k = 0;
  double z = 0.0;
  double statistic = 0.0;  // CUSUM statistic, or z itself for chi-squared
  bool alarm = false;
};

/// Per-step detector records for a single trial (the first stream of the
/// configured seed).
std::vector<StreamRow> simulate_stream(const ExperimentConfig& cfg);

struct BoundednessResult {
  std::vector<double> factors;  // bias = factor * m
  std::vector<std::vector<double>> trajectories;  // S per step, resets disabled
};

/// Feeds one shared distance-measure stream through reset-free CUSUMs with
/// bias factor * m for each factor.
BoundednessResult boundedness_experiment(const plant::LtiModel& model,
                                         const std::vector<double>& biasFactors,
                                         long long horizon, std::uint64_t seed);

struct AttackRunResult {
  attacks::AttackPlan plan;
  attacks::SplitTrajectories trajectory;
  attacks::BoundEnvelope envelope;
  long long alarmsFromStart = 0;       // alarms at steps >= the attack start
  double maxBoundRatio = 0.0;          // max ||e^delta|| / gamma past the start
  double steadyStateAttackNorm = 0.0;  // ||e^delta|| at the final step
};

/// Runs one zero-alarm attack trajectory with its deterministic error
/// envelope. The detector settings select which detector is attacked.
AttackRunResult attack_experiment(const ExperimentConfig& cfg);

struct RatioSweepRow {
  double biasFactor = 0.0;
  double bias = 0.0;
  double targetRate = 0.0;
  double alpha = 0.0;
  double ratio = 0.0;  // asymptotic chi-squared / CUSUM envelope ratio
};

/// Asymptotic envelope ratio sqrt(alpha / b) over a (bias factor, rate)
/// grid; alpha from the closed-form chi-squared threshold.
std::vector<RatioSweepRow> ratio_sweep(int m, const std::vector<double>& biasFactors,
                                       const std::vector<double>& rates);

struct Table1Cell {
  double biasFactor = 0.0;
  double bias = 0.0;
  double targetRate = 0.0;
  bool feasible = true;
  double tau = 0.0;
  double approxRate = 0.0;
  double achievableRate = 0.0;  // sup of the rate over tau, when infeasible
  int iterations = 0;
  FalseAlarmEstimate simulated;
};

/// Threshold tuning plus Monte Carlo validation over the bias-factor x
/// target-rate grid {1.05, 1.15, 2.00} x {0.25, 0.10, 0.02}. Cells whose
/// target rate is not achievable for the bias are reported infeasible.
std::vector<Table1Cell> table1_experiment(const plant::LtiModel& model,
                                          std::uint64_t seed,
                                          long long stepsPerCell = 1000000,
                                          int partitions = 1000);

// --- serialization -------------------------------------------------------
// CSV schemas carry a version comment line; floats print with 10
// significant digits, so identical configs and seeds give byte-identical
// output.

std::string to_csv(const std::vector<StreamRow>& rows);
std::string to_csv(const BoundednessResult& result);
std::string to_csv(const AttackRunResult& result);
std::string to_csv(const std::vector<RatioSweepRow>& rows);
std::string to_csv(const std::vector<Table1Cell>& cells);

std::string to_json(const FalseAlarmEstimate& estimate);
std::string to_json(const tuning::TuningResult& result, int m);
std::string to_json(const AttackRunResult& result);
std::string to_json(const BoundednessResult& result);
std::string to_json(const std::vector<RatioSweepRow>& rows);
std::string to_json(const std::vector<Table1Cell>& cells);

/// Model plus Kalman design summary for the benchmark reactor.
std::string reactor_info_json();

/// Loads [model], [detector], [attack], [run] sections; the model fields
/// F, G, C, R0, R1, R2 are all required.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace ltidetect::harness
