#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qwalk/channel.hpp"
#include "qwalk/space.hpp"

namespace qwalk {

class Rng;

enum class AttackKind { IR1, IR2, DoS, MITM, UntrustedCharlie };

std::string to_string(AttackKind kind);
AttackKind attack_from_string(const std::string& text);

struct AttackStrategy {
  AttackKind kind = AttackKind::IR1;
  /// Empty: the attack's natural legs for the protocol (forward leg for the
  /// per-state attacks, both legs for MITM, Alice->Bob for Charlie).
  std::vector<Leg> legs;
  /// Counterfactual MITM that knows every secret preparation.
  bool omniscient = false;
};

/// What Eve hands on, plus what she learned.
struct Intercepted {
  WalkState resent;
  EveRecord record;
};

/// Measure in the (x, c) basis and resend the collapsed state.
Intercepted attack_ir1(const WalkState& incoming, Rng& rng);

/// Guess t_E in T (and θ_E in random mode), undo U^{t_E}, measure, and
/// re-prepare U^{t_E} |x_E, c_E>.
Intercepted attack_ir2(const WalkState& incoming, const ParameterSpace& eve_space, ThetaMode mode, Rng& rng);

/// Discard the incoming state and send a fresh U(θ')^{t'} |x', c'> drawn
/// from the public spaces.
Intercepted attack_dos(const ParameterSpace& eve_space, ThetaMode mode, Rng& rng);

/// LM05: measure in a uniformly random basis (Z or X) and resend.
struct QubitIntercepted {
  Qubit resent;
  int basis;
  int value;
};
QubitIntercepted attack_qubit_ir(const Qubit& incoming, Rng& rng);

/// Builds a channel interceptor for `protocol`. Throws std::invalid_argument
/// for combinations that do not exist (untrusted Charlie outside CQD, MITM
/// on LM05, legs the protocol does not have).
std::unique_ptr<Interceptor> make_interceptor(const AttackStrategy& strategy, Protocol protocol,
                                              std::uint64_t seed);

/// Exact per-checked-state detection probability in fixed-θ mode, by
/// enumerating Alice's preparation ensemble, Eve's choices and outcomes.
/// MITM equals DoS: Bob's check sees Eve's fresh states.
double exact_detection_probability(AttackKind kind, const ParameterSpace& space);

/// 4 states x 2 Eve bases x outcomes.
double lm05_exact_detection_probability();

}  // namespace qwalk
