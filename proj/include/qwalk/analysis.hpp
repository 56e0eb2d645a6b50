#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/adversary.hpp"
#include "qwalk/space.hpp"

namespace qwalk {

class Rng;

/// Dense joint probability table, row-major over `shape`.
struct JointTable {
  std::vector<std::string> axes;
  std::vector<int> shape;
  std::vector<double> data;

  std::size_t offset(std::span<const int> index) const;
  double at(std::span<const int> index) const { return data[offset(index)]; }
  double total() const;
  int axis(std::string_view name) const;
};

/// p(t_A, x_A, c_A, t_E, x_E, c_E) = |<x_E c_E| U^{-t_E} U^{t_A} |x_A c_A>|^2 / (2N nT^2)
JointTable joint_dist_ir2(const ParameterSpace& space);

/// p(t_A, x_A, c_A, x_E, c_E) = |<x_E c_E| U^{t_A} |x_A c_A>|^2 / (2N nT)
JointTable joint_dist_ir1(const ParameterSpace& space);

/// The 4x4 LM05 table p(a, e), a and e over {0, 1, +, -}.
JointTable lm05_joint_table();

std::vector<double> marginal(const JointTable& table, int axis);
/// Joint marginal over several axes, flattened row-major in the given order.
std::vector<double> marginal(const JointTable& table, std::span<const int> axes);

enum class Denominator {
  /// Product of every single-variable marginal, as in the intercept-resend
  /// formulas; equals total correlation.
  AllSingles,
  /// p(group A) p(group B): ordinary two-party mutual information.
  TwoGroups,
};

enum class MiStrategy { IR1, IR2, LM05 };

std::string to_string(MiStrategy s);
MiStrategy mi_strategy_from_string(const std::string& text);

/// Σ p log2(p / denominator); zero cells contribute nothing. Throws
/// std::invalid_argument unless the groups partition the axes.
double mutual_information(const JointTable& table, std::span<const int> group_a, std::span<const int> group_b,
                          Denominator denominator = Denominator::AllSingles);

struct MiResult {
  MiStrategy strategy = MiStrategy::IR2;
  /// Bits, clamped at 0 for round-off negatives.
  double value = 0.0;
  /// value / log2(number of Eve outcomes): 2N for the walk, 4 for LM05.
  double normalized = 0.0;
  Denominator denominator = Denominator::AllSingles;
  std::optional<ParameterSpace> space;
};

MiResult intercept_resend_mi(MiStrategy strategy, const ParameterSpace& space,
                             Denominator denominator = Denominator::AllSingles);

MiResult lm05_mutual_information();

enum class SweepVariable { Theta, N, nT };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& text);

struct SweepRecord {
  double variable = 0.0;
  std::optional<MiResult> result;
  std::string error;
};

/// `points` values of θ evenly spaced over [0, 2π), endpoint excluded.
std::vector<double> theta_grid(int points);
std::vector<double> integer_grid(int first, int last);

/// One record per grid value, in grid order. Invalid points (N < 2,
/// nT < 1, non-finite θ) produce a record with `error` set.
std::vector<SweepRecord> sweep(SweepVariable variable, std::span<const double> grid, MiStrategy strategy,
                               const ParameterSpace& base, Denominator denominator = Denominator::AllSingles);

struct DetectionQuery {
  AttackKind kind = AttackKind::IR1;
  ParameterSpace space;
  ThetaMode theta_mode = ThetaMode::Fixed;
  bool lm05 = false;
};

struct DetectionEstimate {
  double rate = 0.0;
  long long trials = 0;
  long long detected = 0;
  /// Binomial standard error sqrt(p(1-p)/trials) at the estimated rate.
  double sigma = 0.0;
};

struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Enumeration; fixed-θ only (throws UnsupportedError in random mode).
double detection_rate_exact(const DetectionQuery& query);

/// Simulates `trials` checked states through the attack functions and the
/// receiver's check.
DetectionEstimate detection_rate_monte_carlo(const DetectionQuery& query, long long trials, Rng& rng);

struct ProtocolAttackStats {
  long long runs = 0;
  DetectionEstimate detection;
  /// Present when the attack guesses message symbols.
  std::optional<DetectionEstimate> accuracy;
};

/// Full protocol runs under attack with uniformly random messages. The error
/// tolerance is raised to 1 so no run aborts; detections are counted on the
/// attacked checked states of `stage` (empty: every stage).
ProtocolAttackStats protocol_attack_stats(Protocol protocol, const AttackStrategy& strategy, ProtocolConfig config,
                                          const std::string& stage, long long runs, Rng& rng);

}  // namespace qwalk
