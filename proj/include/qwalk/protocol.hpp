#pragma once

#include "qwalk/channel.hpp"
#include "qwalk/message.hpp"

namespace qwalk {

class Rng;

/// One-way walk-based direct communication: Bob's message reaches Alice.
/// `interceptor` may be null. Aborts are recorded in the transcript.
Transcript run_qsdc(const ProtocolConfig& config, const Message& message, Interceptor* interceptor, Rng& rng);

/// Controlled dialogue: Charlie prepares, Alice sends msg_alice, Bob sends
/// msg_bob; both recover each other's message from Bob's announcement.
Transcript run_cqd(const ProtocolConfig& config, const Message& msg_alice, const Message& msg_bob,
                   Interceptor* interceptor, Rng& rng);

/// Qubit baseline (LM05/DL04); `message` must use one-bit symbols.
Transcript run_lm05(const ProtocolConfig& config, const Message& message, Interceptor* interceptor, Rng& rng);

namespace qubit {

Qubit prepare(int basis, int value);
/// iY = ZX
Qubit flip(const Qubit& q);

struct Result {
  int value;
  Qubit collapsed;
};
Result measure(const Qubit& q, int basis, Rng& rng);

}  // namespace qubit

}  // namespace qwalk
