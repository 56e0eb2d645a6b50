#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/message.hpp"
#include "qwalk/space.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

using Json = nlohmann::ordered_json;
using Qubit = Eigen::Vector2cd;

class Rng;

enum class Protocol { Qsdc, Cqd, Lm05 };
enum class Party { Alice, Bob, Charlie };
/// Quantum channel legs. CQD uses CharlieToAlice and AliceToBob; QSDC and
/// LM05 use AliceToBob and BobToAlice.
enum class Leg { AliceToBob, BobToAlice, CharlieToAlice };

std::string to_string(Protocol p);
std::string to_string(Party p);
std::string to_string(Leg leg);
Leg leg_from_string(const std::string& text);
std::vector<Leg> legs_of(Protocol p);

struct ProtocolConfig {
  int N = 5;
  int n = 16;
  int nT = 7;
  ThetaMode theta_mode = ThetaMode::Random;
  /// In fixed mode every θ_i equals coin.theta. ξ, ζ are always taken from here.
  CoinParams coin{std::numbers::pi / 4, std::numbers::pi / 4, std::numbers::pi / 4};
  double error_tolerance = 0.0;
  /// CQD masking walk: k ~ U{1..cqd_k_max}, θ_r ~ U[0, 2π) unless overridden.
  int cqd_k_max = 16;
  std::optional<int> cqd_k;
  std::optional<double> cqd_theta_r;

  void validate() const;
  ParameterSpace public_space() const { return {N, nT, coin}; }
};

/// Secret record of one prepared walk state U(θ_i)^{t_i} |x_i, c_i>.
struct StatePrep {
  int index = 0;
  int t = 0;
  int x = 0;
  int c = 0;
  CoinParams coin;

  WalkState prepare(int cycle_length) const;
};

/// LM05 preparation: basis 0 = Z {|0>,|1>}, 1 = X {|+>,|->}.
struct QubitPrep {
  int index = 0;
  int basis = 0;
  int value = 0;
};

struct InFlight {
  int index;
  WalkState state;
};

struct InFlightQubit {
  int index;
  Qubit state;
};

struct ClassicalMessage {
  Party from;
  std::optional<Party> to;  // empty: public broadcast
  std::string kind;
  Json payload;
};

struct ChannelEvent {
  int seq = 0;
  std::string medium;  // "quantum" | "classical"
  std::string from;
  std::string to;
  std::string kind;
  Json payload;
  std::string interceptor_action = "none";
};

/// Outcome codes are 2x + c for walk states and the measured bit value for
/// LM05 qubits.
struct CheckReport {
  std::string stage;
  Party checker = Party::Bob;
  std::vector<int> indices;
  std::vector<int> expected;
  std::vector<int> observed;
  int mismatches = 0;
  double error_rate = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct EveRecord {
  int index = 0;
  Leg leg = Leg::AliceToBob;
  std::optional<int> t;
  std::optional<double> theta;
  int x = 0;
  int c = 0;
};

struct SymbolGuess {
  int index = 0;
  int guessed = 0;
  int actual = 0;
};

struct DetectionRecord {
  int index = 0;
  std::string stage;
  bool detected = false;
};

struct AttackReport {
  std::string attack;
  std::vector<Leg> legs;
  std::vector<EveRecord> records;
  std::vector<SymbolGuess> guesses;
  std::vector<DetectionRecord> detections;
  double detection_rate = 0.0;
  std::optional<double> symbol_accuracy;
};

struct CqdMask {
  int k = 0;
  double theta_r = 0.0;
};

struct Transcript {
  Protocol protocol = Protocol::Qsdc;
  ProtocolConfig config;
  std::vector<StatePrep> preps;
  std::vector<QubitPrep> qubit_preps;
  std::vector<int> check_indices;
  std::vector<int> message_indices;
  std::vector<int> decoy_indices;
  /// Symbols placed on message_indices, in order, including zero filler.
  std::vector<int> alice_symbols;
  std::vector<int> bob_symbols;
  std::vector<ChannelEvent> events;
  std::vector<CheckReport> checks;
  std::optional<CqdMask> mask;
  std::vector<int> announcements;
  bool aborted = false;
  std::string abort_step;
  std::optional<Message> received_by_alice;
  std::optional<Message> received_by_bob;
  std::optional<AttackReport> attack;
};

enum class InterceptorRole { Outsider, Insider };

/// Channel adversary. Hooks are called in protocol order; quantum hooks may
/// rewrite the batch in place and return a non-empty action label when they
/// touched it.
class Interceptor {
 public:
  virtual ~Interceptor() = default;

  virtual std::string name() const = 0;
  virtual std::vector<Leg> legs() const = 0;
  virtual InterceptorRole role() const { return InterceptorRole::Outsider; }

  virtual std::string on_quantum(Leg leg, std::vector<InFlight>& batch, const ProtocolConfig& config);
  virtual std::string on_qubits(Leg leg, std::vector<InFlightQubit>& batch);
  virtual void on_classical(const ClassicalMessage& message);
  /// Per-state secrets, delivered only to InterceptorRole::Insider (an
  /// untrusted preparer, or a counterfactual all-knowing adversary).
  virtual void on_secrets(std::span<const StatePrep> preps);

  /// Builds the report against the finished transcript (ground truth is
  /// available to the simulator, not to the adversary).
  virtual AttackReport finalize(const Transcript& transcript) const;

 protected:
  bool targets(Leg leg) const;
  void touch(int index) { touched_.push_back(index); }
  void record(EveRecord r) { records_.push_back(std::move(r)); }
  void guess(int index, int symbol) { guesses_[index] = symbol; }

  std::vector<int> touched_;
  std::vector<EveRecord> records_;
  std::map<int, int> guesses_;
};

/// Measures each received state after undoing its revealed preparation and
/// compares with (x_i, c_i).
CheckReport eavesdrop_check(std::span<const InFlight> received, std::span<const StatePrep> reveals,
                            double tolerance, Rng& rng);

}  // namespace qwalk
