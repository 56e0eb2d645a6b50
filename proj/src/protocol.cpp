#include "qwalk/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qwalk/rng.hpp"
#include "qwalk/serialize.hpp"

namespace qwalk {

namespace qubit {

Qubit prepare(int basis, int value) {
  const double h = 1.0 / std::sqrt(2.0);
  if (basis == 0) return value == 0 ? Qubit(1.0, 0.0) : Qubit(0.0, 1.0);
  return value == 0 ? Qubit(h, h) : Qubit(h, -h);
}

Qubit flip(const Qubit& q) { return Qubit(q[1], -q[0]); }

Result measure(const Qubit& q, int basis, Rng& rng) {
  const double p0 = std::norm(prepare(basis, 0).dot(q));
  const int value = rng.uniform_unit() < p0 ? 0 : 1;
  return {value, prepare(basis, value)};
}

}  // namespace qubit

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int value, int modulus) {
  const int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

Json to_json_list(const std::vector<int>& v) { return Json(v); }

// Records every transmission and routes it through the interceptor.
class Channel {
 public:
  Channel(Transcript& transcript, Interceptor* eve) : transcript_(transcript), eve_(eve) {}

  std::map<int, WalkState> send(Leg leg, std::vector<InFlight> batch) {
    std::string action;
    if (eve_ != nullptr) action = eve_->on_quantum(leg, batch, transcript_.config);
    Json payload = Json::array();
    std::map<int, WalkState> delivered;
    for (auto& item : batch) {
      payload.push_back(Json{{"index", item.index}, {"state", to_json(item.state)}});
      delivered.emplace(item.index, std::move(item.state));
    }
    push("quantum", leg, "states", std::move(payload), action);
    return delivered;
  }

  std::map<int, Qubit> send_qubits(Leg leg, std::vector<InFlightQubit> batch) {
    std::string action;
    if (eve_ != nullptr) action = eve_->on_qubits(leg, batch);
    Json payload = Json::array();
    std::map<int, Qubit> delivered;
    for (auto& item : batch) {
      payload.push_back(Json{{"index", item.index}, {"state", to_json(item.state)}});
      delivered.emplace(item.index, item.state);
    }
    push("quantum", leg, "qubits", std::move(payload), action);
    return delivered;
  }

  void announce(Party from, std::optional<Party> to, std::string kind, Json payload) {
    ClassicalMessage msg{from, to, std::move(kind), std::move(payload)};
    if (eve_ != nullptr) eve_->on_classical(msg);
    ChannelEvent ev;
    ev.seq = static_cast<int>(transcript_.events.size());
    ev.medium = "classical";
    ev.from = to_string(from);
    ev.to = to ? to_string(*to) : "public";
    ev.kind = msg.kind;
    ev.payload = std::move(msg.payload);
    transcript_.events.push_back(std::move(ev));
  }

 private:
  void push(const char* medium, Leg leg, const char* kind, Json payload, const std::string& action) {
    ChannelEvent ev;
    ev.seq = static_cast<int>(transcript_.events.size());
    ev.medium = medium;
    const auto label = to_string(leg);
    const auto arrow = label.find("->");
    ev.from = label.substr(0, arrow);
    ev.to = label.substr(arrow + 2);
    ev.kind = kind;
    ev.payload = std::move(payload);
    ev.interceptor_action = action.empty() ? "none" : action;
    transcript_.events.push_back(std::move(ev));
  }

  Transcript& transcript_;
  Interceptor* eve_;
};

void check_interceptor(Protocol protocol, const Interceptor* eve) {
  if (eve == nullptr) return;
  const auto allowed = legs_of(protocol);
  for (Leg leg : eve->legs())
    if (std::find(allowed.begin(), allowed.end(), leg) == allowed.end())
      throw std::invalid_argument("attack " + eve->name() + " targets leg " + to_string(leg) +
                                  " which " + to_string(protocol) + " does not use");
}

void check_message(const Message& message, const ProtocolConfig& config) {
  if (message.bits_per_symbol != bits_per_symbol(config.N))
    throw std::invalid_argument("message symbol width does not match the cycle length");
  if (static_cast<int>(message.symbols.size()) > config.n / 4)
    throw std::invalid_argument("message has " + std::to_string(message.symbols.size()) +
                                " symbols but only n/4 = " + std::to_string(config.n / 4) + " message states exist");
  for (int s : message.symbols)
    if (s < 0 || s >= config.N) throw std::invalid_argument("message symbol out of range");
}

std::vector<int> padded_symbols(const Message& message, int slots) {
  std::vector<int> out = message.symbols;
  out.resize(slots, 0);
  return out;
}

std::vector<StatePrep> prepare_batch(const ProtocolConfig& config, Rng& rng) {
  std::vector<StatePrep> preps;
  preps.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    StatePrep p;
    p.index = i;
    p.t = static_cast<int>(rng.uniform_int(0, config.nT - 1));
    p.x = static_cast<int>(rng.uniform_int(0, config.N - 1));
    p.c = static_cast<int>(rng.uniform_int(0, 1));
    p.coin = config.coin;
    if (config.theta_mode == ThetaMode::Random) p.coin.theta = rng.uniform_real(0.0, kTwoPi);
    preps.push_back(p);
  }
  return preps;
}

std::vector<int> sorted_sample(int n, int k, Rng& rng) {
  auto picks = rng.sample_without_replacement(n, k);
  std::sort(picks.begin(), picks.end());
  return picks;
}

std::vector<int> complement(int n, const std::vector<int>& taken) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(taken.begin(), taken.end(), i)) out.push_back(i);
  return out;
}

// Splits `pool` into n/4 message positions and the remaining decoys.
void split_message_decoys(const std::vector<int>& pool, int message_count, Rng& rng, Transcript& tr) {
  auto picks = rng.sample_without_replacement(static_cast<int>(pool.size()), message_count);
  for (int p : picks) tr.message_indices.push_back(pool[p]);
  std::sort(tr.message_indices.begin(), tr.message_indices.end());
  for (int idx : pool)
    if (!std::binary_search(tr.message_indices.begin(), tr.message_indices.end(), idx))
      tr.decoy_indices.push_back(idx);
}

std::vector<StatePrep> select(const std::vector<StatePrep>& preps, const std::vector<int>& indices) {
  std::vector<StatePrep> out;
  for (int i : indices) out.push_back(preps[i]);
  return out;
}

std::vector<InFlight> select(const std::map<int, WalkState>& states, const std::vector<int>& indices) {
  std::vector<InFlight> out;
  for (int i : indices) {
    const auto it = states.find(i);
    if (it == states.end()) throw std::logic_error("state " + std::to_string(i) + " lost in transit");
    out.push_back({i, it->second});
  }
  return out;
}

Json reveal_payload(const std::vector<StatePrep>& preps) {
  Json out = Json::array();
  for (const auto& p : preps) out.push_back(to_json(p));
  return out;
}

Transcript finish(Transcript tr, Interceptor* eve) {
  if (eve != nullptr) tr.attack = eve->finalize(tr);
  return tr;
}

Transcript abort_run(Transcript tr, const std::string& step, Interceptor* eve) {
  tr.aborted = true;
  tr.abort_step = step;
  tr.received_by_alice.reset();
  tr.received_by_bob.reset();
  return finish(std::move(tr), eve);
}

Json length_payload(const Message& m) {
  return Json{{"symbols", m.symbols.size()}, {"bits", m.bits.size()}};
}

}  // namespace

Transcript run_qsdc(const ProtocolConfig& config, const Message& message, Interceptor* eve, Rng& rng) {
  config.validate();
  check_message(message, config);
  check_interceptor(Protocol::Qsdc, eve);
  const int n = config.n;
  const int N = config.N;

  Transcript tr;
  tr.protocol = Protocol::Qsdc;
  tr.config = config;
  Channel channel(tr, eve);

  // 1. Alice prepares and sends n walk states.
  tr.preps = prepare_batch(config, rng);
  if (eve != nullptr && eve->role() == InterceptorRole::Insider) eve->on_secrets(tr.preps);
  std::vector<InFlight> outgoing;
  for (const auto& p : tr.preps) outgoing.push_back({p.index, p.prepare(N)});
  auto at_bob = channel.send(Leg::AliceToBob, std::move(outgoing));

  // 2. Bob picks n/2 check states; Alice reveals them.
  tr.check_indices = sorted_sample(n, n / 2, rng);
  channel.announce(Party::Bob, Party::Alice, "check-indices", to_json_list(tr.check_indices));
  const auto check_reveals = select(tr.preps, tr.check_indices);
  channel.announce(Party::Alice, Party::Bob, "reveal", reveal_payload(check_reveals));
  auto step2 = eavesdrop_check(select(at_bob, tr.check_indices), check_reveals, config.error_tolerance, rng);
  step2.stage = "step2";
  step2.checker = Party::Bob;
  tr.checks.push_back(step2);
  if (!step2.passed) return abort_run(std::move(tr), "step2", eve);

  // 3. Bob encodes on n/4 of the rest and returns all n/2.
  const auto remaining = complement(n, tr.check_indices);
  split_message_decoys(remaining, n / 4, rng, tr);
  tr.bob_symbols = padded_symbols(message, n / 4);
  std::vector<InFlight> back;
  for (int idx : remaining) {
    const auto pos = std::lower_bound(tr.message_indices.begin(), tr.message_indices.end(), idx);
    const WalkState& s = at_bob.at(idx);
    if (pos != tr.message_indices.end() && *pos == idx) {
      back.push_back({idx, encode_symbol(s, tr.bob_symbols[pos - tr.message_indices.begin()])});
    } else {
      back.push_back({idx, s});
    }
  }
  auto at_alice = channel.send(Leg::BobToAlice, std::move(back));

  // 4. Bob names the decoys; Alice checks them.
  channel.announce(Party::Bob, Party::Alice, "decoy-indices", to_json_list(tr.decoy_indices));
  channel.announce(Party::Bob, Party::Alice, "message-length", length_payload(message));
  auto step4 = eavesdrop_check(select(at_alice, tr.decoy_indices), select(tr.preps, tr.decoy_indices),
                               config.error_tolerance, rng);
  step4.stage = "step4";
  step4.checker = Party::Alice;
  tr.checks.push_back(step4);
  if (!step4.passed) return abort_run(std::move(tr), "step4", eve);

  // 5. Alice undoes her preparation on the message states and reads m_i.
  std::vector<int> decoded;
  for (int idx : tr.message_indices) {
    const auto& p = tr.preps[idx];
    const auto got = measure(evolve(at_alice.at(idx), p.coin, -static_cast<long long>(p.t)), rng).outcome;
    decoded.push_back(wrap(got.position - p.x, N));
  }
  decoded.resize(message.symbols.size());
  tr.received_by_alice = message_from_symbols(decoded, N, message.bits.size());
  return finish(std::move(tr), eve);
}

Transcript run_cqd(const ProtocolConfig& config, const Message& msg_alice, const Message& msg_bob,
                   Interceptor* eve, Rng& rng) {
  config.validate();
  check_message(msg_alice, config);
  check_message(msg_bob, config);
  check_interceptor(Protocol::Cqd, eve);
  const int n = config.n;
  const int N = config.N;

  Transcript tr;
  tr.protocol = Protocol::Cqd;
  tr.config = config;
  Channel channel(tr, eve);

  // 1. Charlie prepares and sends to Alice.
  tr.preps = prepare_batch(config, rng);
  if (eve != nullptr && eve->role() == InterceptorRole::Insider) eve->on_secrets(tr.preps);
  std::vector<InFlight> outgoing;
  for (const auto& p : tr.preps) outgoing.push_back({p.index, p.prepare(N)});
  auto at_alice = channel.send(Leg::CharlieToAlice, std::move(outgoing));

  // 2. Alice checks n/2 states against Charlie's reveals.
  tr.check_indices = sorted_sample(n, n / 2, rng);
  channel.announce(Party::Alice, Party::Charlie, "check-indices", to_json_list(tr.check_indices));
  const auto check_reveals = select(tr.preps, tr.check_indices);
  channel.announce(Party::Charlie, Party::Alice, "reveal", reveal_payload(check_reveals));
  auto step2 = eavesdrop_check(select(at_alice, tr.check_indices), check_reveals, config.error_tolerance, rng);
  step2.stage = "step2";
  step2.checker = Party::Alice;
  tr.checks.push_back(step2);
  if (!step2.passed) return abort_run(std::move(tr), "step2", eve);

  // 3. Alice encodes a_i, masks all n/2 states with U(θ_r)^k and sends to Bob.
  const auto remaining = complement(n, tr.check_indices);
  split_message_decoys(remaining, n / 4, rng, tr);
  tr.alice_symbols = padded_symbols(msg_alice, n / 4);
  tr.bob_symbols = padded_symbols(msg_bob, n / 4);
  CqdMask mask;
  mask.k = config.cqd_k ? *config.cqd_k : static_cast<int>(rng.uniform_int(1, config.cqd_k_max));
  mask.theta_r = config.cqd_theta_r ? *config.cqd_theta_r : rng.uniform_real(0.0, kTwoPi);
  tr.mask = mask;
  const CoinParams mask_coin{mask.theta_r, config.coin.xi, config.coin.zeta};
  std::vector<InFlight> to_bob;
  for (int idx : remaining) {
    WalkState s = at_alice.at(idx);
    const auto pos = std::lower_bound(tr.message_indices.begin(), tr.message_indices.end(), idx);
    if (pos != tr.message_indices.end() && *pos == idx)
      s = encode_symbol(s, tr.alice_symbols[pos - tr.message_indices.begin()]);
    to_bob.push_back({idx, evolve(s, mask_coin, mask.k)});
  }
  auto at_bob = channel.send(Leg::AliceToBob, std::move(to_bob));

  // 4. Public announcement of θ_r, k and decoys; Charlie reveals decoys to Bob.
  channel.announce(Party::Bob, Party::Alice, "received", Json{{"count", at_bob.size()}});
  channel.announce(Party::Alice, std::nullopt, "mask-and-decoys",
                   Json{{"theta_r", mask.theta_r}, {"k", mask.k}, {"decoy_indices", tr.decoy_indices}});
  const auto decoy_reveals = select(tr.preps, tr.decoy_indices);
  channel.announce(Party::Charlie, Party::Bob, "reveal", reveal_payload(decoy_reveals));
  // Last in, first out: the mask layer is removed before the preparation.
  auto unmask = [&](const std::vector<int>& indices) {
    std::vector<InFlight> out;
    for (int idx : indices) out.push_back({idx, evolve(at_bob.at(idx), mask_coin, -mask.k)});
    return out;
  };
  auto step4 = eavesdrop_check(unmask(tr.decoy_indices), decoy_reveals, config.error_tolerance, rng);
  step4.stage = "step4";
  step4.checker = Party::Bob;
  tr.checks.push_back(step4);
  if (!step4.passed) return abort_run(std::move(tr), "step4", eve);

  // 5. Bob encodes b_i, undoes both layers, measures and announces a_i + b_i.
  for (std::size_t j = 0; j < tr.message_indices.size(); ++j) {
    const int idx = tr.message_indices[j];
    at_bob.insert_or_assign(idx, encode_symbol(at_bob.at(idx), tr.bob_symbols[j]));
  }
  const auto message_reveals = select(tr.preps, tr.message_indices);
  channel.announce(Party::Charlie, Party::Bob, "reveal", reveal_payload(message_reveals));
  for (auto& item : unmask(tr.message_indices)) {
    const auto& p = tr.preps[item.index];
    const auto got = measure(evolve(item.state, p.coin, -static_cast<long long>(p.t)), rng).outcome;
    tr.announcements.push_back(wrap(got.position - p.x, N));
  }
  channel.announce(Party::Bob, std::nullopt, "announcement", to_json_list(tr.announcements));

  std::vector<int> alice_reads;
  std::vector<int> bob_reads;
  for (std::size_t j = 0; j < tr.announcements.size(); ++j) {
    alice_reads.push_back(wrap(tr.announcements[j] - tr.alice_symbols[j], N));
    bob_reads.push_back(wrap(tr.announcements[j] - tr.bob_symbols[j], N));
  }
  alice_reads.resize(msg_bob.symbols.size());
  bob_reads.resize(msg_alice.symbols.size());
  tr.received_by_alice = message_from_symbols(alice_reads, N, msg_bob.bits.size());
  tr.received_by_bob = message_from_symbols(bob_reads, N, msg_alice.bits.size());
  return finish(std::move(tr), eve);
}

namespace {

CheckReport qubit_check(const std::map<int, Qubit>& states, const std::vector<QubitPrep>& preps,
                        const std::vector<int>& indices, double tolerance, Rng& rng) {
  CheckReport report;
  report.tolerance = tolerance;
  for (int idx : indices) {
    const auto& p = preps[idx];
    const int got = qubit::measure(states.at(idx), p.basis, rng).value;
    report.indices.push_back(idx);
    report.expected.push_back(p.value);
    report.observed.push_back(got);
    report.mismatches += got != p.value ? 1 : 0;
  }
  if (!indices.empty()) report.error_rate = static_cast<double>(report.mismatches) / indices.size();
  report.passed = report.error_rate <= tolerance;
  return report;
}

Json qubit_reveal(const std::vector<QubitPrep>& preps, const std::vector<int>& indices) {
  Json out = Json::array();
  for (int i : indices) out.push_back(to_json(preps[i]));
  return out;
}

}  // namespace

Transcript run_lm05(const ProtocolConfig& config, const Message& message, Interceptor* eve, Rng& rng) {
  config.validate();
  if (message.bits_per_symbol != 1) throw std::invalid_argument("LM05 carries one bit per qubit");
  if (static_cast<int>(message.symbols.size()) > config.n / 4)
    throw std::invalid_argument("message does not fit in n/4 qubits");
  for (int s : message.symbols)
    if (s != 0 && s != 1) throw std::invalid_argument("LM05 symbols must be bits");
  check_interceptor(Protocol::Lm05, eve);
  const int n = config.n;

  Transcript tr;
  tr.protocol = Protocol::Lm05;
  tr.config = config;
  Channel channel(tr, eve);

  // 1. Alice sends n qubits from {|0>,|1>,|+>,|->}.
  std::vector<InFlightQubit> outgoing;
  for (int i = 0; i < n; ++i) {
    QubitPrep p{i, static_cast<int>(rng.uniform_int(0, 1)), static_cast<int>(rng.uniform_int(0, 1))};
    tr.qubit_preps.push_back(p);
    outgoing.push_back({i, qubit::prepare(p.basis, p.value)});
  }
  auto at_bob = channel.send_qubits(Leg::AliceToBob, std::move(outgoing));

  // 2-3. Bob picks n/2, Alice announces their states, Bob checks.
  tr.check_indices = sorted_sample(n, n / 2, rng);
  channel.announce(Party::Bob, Party::Alice, "check-indices", to_json_list(tr.check_indices));
  channel.announce(Party::Alice, std::nullopt, "reveal", qubit_reveal(tr.qubit_preps, tr.check_indices));
  auto step3 = qubit_check(at_bob, tr.qubit_preps, tr.check_indices, config.error_tolerance, rng);
  step3.stage = "step3";
  step3.checker = Party::Bob;
  tr.checks.push_back(step3);
  if (!step3.passed) return abort_run(std::move(tr), "step3", eve);

  // 4. Bob encodes with iY on n/4 qubits and returns n/2.
  const auto remaining = complement(n, tr.check_indices);
  split_message_decoys(remaining, n / 4, rng, tr);
  tr.bob_symbols = padded_symbols(message, n / 4);
  std::vector<InFlightQubit> back;
  for (int idx : remaining) {
    const auto pos = std::lower_bound(tr.message_indices.begin(), tr.message_indices.end(), idx);
    Qubit q = at_bob.at(idx);
    if (pos != tr.message_indices.end() && *pos == idx && tr.bob_symbols[pos - tr.message_indices.begin()] == 1)
      q = qubit::flip(q);
    back.push_back({idx, q});
  }
  auto at_alice = channel.send_qubits(Leg::BobToAlice, std::move(back));

  // 5. Decoy check by Alice.
  channel.announce(Party::Bob, Party::Alice, "decoy-indices", to_json_list(tr.decoy_indices));
  channel.announce(Party::Bob, Party::Alice, "message-length", length_payload(message));
  auto step5 = qubit_check(at_alice, tr.qubit_preps, tr.decoy_indices, config.error_tolerance, rng);
  step5.stage = "step5";
  step5.checker = Party::Alice;
  tr.checks.push_back(step5);
  if (!step5.passed) return abort_run(std::move(tr), "step5", eve);

  // 6. Alice reads each message qubit in its preparation basis.
  std::vector<int> decoded;
  for (int idx : tr.message_indices) {
    const auto& p = tr.qubit_preps[idx];
    decoded.push_back(qubit::measure(at_alice.at(idx), p.basis, rng).value != p.value ? 1 : 0);
  }
  decoded.resize(message.symbols.size());
  tr.received_by_alice = message_from_symbols(decoded, 2, message.bits.size());
  return finish(std::move(tr), eve);
}

}  // namespace qwalk
