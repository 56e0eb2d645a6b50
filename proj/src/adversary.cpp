#include "qwalk/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qwalk/protocol.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::IR1: return "ir1";
    case AttackKind::IR2: return "ir2";
    case AttackKind::DoS: return "dos";
    case AttackKind::MITM: return "mitm";
    case AttackKind::UntrustedCharlie: return "untrusted-charlie";
  }
  return "?";
}

AttackKind attack_from_string(const std::string& text) {
  if (text == "ir1") return AttackKind::IR1;
  if (text == "ir2") return AttackKind::IR2;
  if (text == "dos") return AttackKind::DoS;
  if (text == "mitm") return AttackKind::MITM;
  if (text == "untrusted-charlie" || text == "charlie") return AttackKind::UntrustedCharlie;
  throw std::invalid_argument("unknown attack '" + text + "'");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int value, int modulus) {
  const int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

CoinParams draw_coin(const ParameterSpace& space, ThetaMode mode, Rng& rng) {
  CoinParams coin = space.coin;
  if (mode == ThetaMode::Random) coin.theta = rng.uniform_real(0.0, kTwoPi);
  return coin;
}

// A random walk state from the public spaces, with its secret record.
StatePrep draw_prep(int index, const ParameterSpace& space, ThetaMode mode, Rng& rng) {
  StatePrep p;
  p.index = index;
  p.t = static_cast<int>(rng.uniform_int(0, space.nT - 1));
  p.x = static_cast<int>(rng.uniform_int(0, space.N - 1));
  p.c = static_cast<int>(rng.uniform_int(0, 1));
  p.coin = draw_coin(space, mode, rng);
  return p;
}

EveRecord record_of(const StatePrep& p, Leg leg) {
  return EveRecord{p.index, leg, p.t, p.coin.theta, p.x, p.c};
}

class StateAttackInterceptor final : public Interceptor {
 public:
  StateAttackInterceptor(AttackKind kind, std::vector<Leg> legs, std::uint64_t seed)
      : kind_(kind), legs_(std::move(legs)), rng_(seed) {}

  std::string name() const override { return to_string(kind_); }
  std::vector<Leg> legs() const override { return legs_; }

  std::string on_quantum(Leg leg, std::vector<InFlight>& batch, const ProtocolConfig& config) override {
    if (!targets(leg)) return {};
    const auto space = config.public_space();
    for (auto& item : batch) {
      Intercepted hit = kind_ == AttackKind::IR1   ? attack_ir1(item.state, rng_)
                        : kind_ == AttackKind::IR2 ? attack_ir2(item.state, space, config.theta_mode, rng_)
                                                   : attack_dos(space, config.theta_mode, rng_);
      hit.record.index = item.index;
      hit.record.leg = leg;
      record(hit.record);
      touch(item.index);
      item.state = std::move(hit.resent);
    }
    return name();
  }

  std::string on_qubits(Leg leg, std::vector<InFlightQubit>& batch) override {
    if (!targets(leg)) return {};
    for (auto& item : batch) {
      EveRecord r;
      r.index = item.index;
      r.leg = leg;
      if (kind_ == AttackKind::DoS) {
        r.c = static_cast<int>(rng_.uniform_int(0, 1));
        r.x = static_cast<int>(rng_.uniform_int(0, 1));
        item.state = qubit::prepare(r.c, r.x);
      } else {
        const auto hit = attack_qubit_ir(item.state, rng_);
        r.c = hit.basis;
        r.x = hit.value;
        item.state = hit.resent;
      }
      record(r);
      touch(item.index);
    }
    return name();
  }

 private:
  AttackKind kind_;
  std::vector<Leg> legs_;
  Rng rng_;
};

// Eve keeps the genuine states in memory and lets the receiver work on her
// own states, whose preparation she knows.
class MitmInterceptor final : public Interceptor {
 public:
  MitmInterceptor(Protocol protocol, bool omniscient, std::uint64_t seed)
      : protocol_(protocol), omniscient_(omniscient), rng_(seed) {}

  std::string name() const override { return omniscient_ ? "mitm-omniscient" : "mitm"; }
  std::vector<Leg> legs() const override { return legs_of(protocol_); }
  InterceptorRole role() const override {
    return omniscient_ ? InterceptorRole::Insider : InterceptorRole::Outsider;
  }

  void on_secrets(std::span<const StatePrep> preps) override { secrets_.assign(preps.begin(), preps.end()); }

  std::string on_quantum(Leg leg, std::vector<InFlight>& batch, const ProtocolConfig& config) override {
    config_ = config;
    const Leg first = legs_of(protocol_).front();
    if (leg == first) {
      for (auto& item : batch) substitute(item, leg, config);
      return name() + ":substitute";
    }
    if (protocol_ == Protocol::Qsdc) {
      // Read Bob's translation off our own state and copy it onto Alice's.
      for (auto& item : batch) {
        const int m = read_shift(item.index, item.state);
        guess(item.index, m);
        item.state = translate(stored_.at(item.index), m);
      }
      return name() + ":re-encode";
    }
    // CQD: hold Alice's masked states until θ_r and k are public; forward
    // Charlie's originals instead.
    for (auto& item : batch) {
      held_.insert_or_assign(item.index, item.state);
      item.state = stored_.at(item.index);
    }
    return name() + ":swap";
  }

  void on_classical(const ClassicalMessage& msg) override {
    if (protocol_ != Protocol::Cqd || msg.kind != "mask-and-decoys") return;
    const CoinParams mask{msg.payload.at("theta_r").get<double>(), config_.coin.xi, config_.coin.zeta};
    const int k = msg.payload.at("k").get<int>();
    for (const auto& [index, state] : held_) guess(index, read_shift(index, evolve(state, mask, -k)));
  }

 private:
  void substitute(InFlight& item, Leg leg, const ProtocolConfig& config) {
    StatePrep own = omniscient_ && item.index < static_cast<int>(secrets_.size())
                        ? secrets_[item.index]
                        : draw_prep(item.index, config.public_space(), config.theta_mode, rng_);
    own.index = item.index;
    own_.insert_or_assign(item.index, own);
    stored_.insert_or_assign(item.index, item.state);
    record(record_of(own, leg));
    touch(item.index);
    item.state = own.prepare(config.N);
  }

  int read_shift(int index, const WalkState& state) {
    const auto& own = own_.at(index);
    const auto got = measure(evolve(state, own.coin, -static_cast<long long>(own.t)), rng_).outcome;
    return wrap(got.position - own.x, state.cycle_length());
  }

  Protocol protocol_;
  bool omniscient_;
  Rng rng_;
  ProtocolConfig config_;
  std::vector<StatePrep> secrets_;
  std::map<int, StatePrep> own_;
  std::map<int, WalkState> stored_;
  std::map<int, WalkState> held_;
};

// Charlie knows every preparation but not Alice's masking walk.
class UntrustedCharlieInterceptor final : public Interceptor {
 public:
  explicit UntrustedCharlieInterceptor(std::uint64_t seed) : rng_(seed) {}

  std::string name() const override { return "untrusted-charlie"; }
  std::vector<Leg> legs() const override { return {Leg::AliceToBob}; }
  InterceptorRole role() const override { return InterceptorRole::Insider; }

  void on_secrets(std::span<const StatePrep> preps) override { secrets_.assign(preps.begin(), preps.end()); }

  std::string on_quantum(Leg leg, std::vector<InFlight>& batch, const ProtocolConfig&) override {
    if (!targets(leg)) return {};
    for (auto& item : batch) {
      const auto& p = secrets_.at(item.index);
      const auto got = measure(evolve(item.state, p.coin, -static_cast<long long>(p.t)), rng_).outcome;
      guess(item.index, wrap(got.position - p.x, item.state.cycle_length()));
      record(EveRecord{item.index, leg, p.t, p.coin.theta, got.position, got.coin});
      touch(item.index);
      item.state = evolve(WalkState::basis(item.state.cycle_length(), got.position, got.coin), p.coin, p.t);
    }
    return name();
  }

 private:
  Rng rng_;
  std::vector<StatePrep> secrets_;
};

}  // namespace

Intercepted attack_ir1(const WalkState& incoming, Rng& rng) {
  auto m = measure(incoming, rng);
  EveRecord r;
  r.x = m.outcome.position;
  r.c = m.outcome.coin;
  return {std::move(m.collapsed), r};
}

Intercepted attack_ir2(const WalkState& incoming, const ParameterSpace& eve_space, ThetaMode mode, Rng& rng) {
  const int t_eve = static_cast<int>(rng.uniform_int(0, eve_space.nT - 1));
  const CoinParams coin = draw_coin(eve_space, mode, rng);
  const auto m = measure(evolve(incoming, coin, -static_cast<long long>(t_eve)), rng);
  EveRecord r;
  r.t = t_eve;
  r.theta = coin.theta;
  r.x = m.outcome.position;
  r.c = m.outcome.coin;
  return {evolve(m.collapsed, coin, t_eve), r};
}

Intercepted attack_dos(const ParameterSpace& eve_space, ThetaMode mode, Rng& rng) {
  const auto p = draw_prep(0, eve_space, mode, rng);
  return {p.prepare(eve_space.N), record_of(p, Leg::AliceToBob)};
}

QubitIntercepted attack_qubit_ir(const Qubit& incoming, Rng& rng) {
  const int basis = static_cast<int>(rng.uniform_int(0, 1));
  const auto m = qubit::measure(incoming, basis, rng);
  return {m.collapsed, basis, m.value};
}

std::unique_ptr<Interceptor> make_interceptor(const AttackStrategy& strategy, Protocol protocol,
                                              std::uint64_t seed) {
  const auto allowed = legs_of(protocol);
  for (Leg leg : strategy.legs)
    if (std::find(allowed.begin(), allowed.end(), leg) == allowed.end())
      throw std::invalid_argument(to_string(protocol) + " has no leg " + to_string(leg));

  switch (strategy.kind) {
    case AttackKind::IR1:
    case AttackKind::IR2:
    case AttackKind::DoS: {
      auto legs = strategy.legs.empty() ? std::vector<Leg>{allowed.front()} : strategy.legs;
      return std::make_unique<StateAttackInterceptor>(strategy.kind, std::move(legs), seed);
    }
    case AttackKind::MITM:
      if (protocol == Protocol::Lm05) throw std::invalid_argument("mitm is modelled for the walk protocols only");
      if (!strategy.legs.empty() && strategy.legs.size() != allowed.size())
        throw std::invalid_argument("mitm spans both quantum legs");
      return std::make_unique<MitmInterceptor>(protocol, strategy.omniscient, seed);
    case AttackKind::UntrustedCharlie:
      if (protocol != Protocol::Cqd) throw std::invalid_argument("untrusted-charlie applies to cqd only");
      if (!strategy.legs.empty() && (strategy.legs.size() != 1 || strategy.legs[0] != Leg::AliceToBob))
        throw std::invalid_argument("untrusted-charlie intercepts the alice->bob leg");
      return std::make_unique<UntrustedCharlieInterceptor>(seed);
  }
  throw std::invalid_argument("unknown attack kind");
}

double exact_detection_probability(AttackKind kind, const ParameterSpace& space) {
  space.validate();
  const int n_t = space.nT;
  const int dim = 2 * space.N;
  // U^d for d in [-(nT-1), nT-1].
  std::vector<Operator> power;
  for (int d = -(n_t - 1); d <= n_t - 1; ++d) power.push_back(walk_power(space.N, space.coin, d));
  auto at = [&](int d) -> const Operator& { return power[d + n_t - 1]; };

  double pass = 0.0;
  switch (kind) {
    case AttackKind::IR1:
      // Σ_e |<e|U^t|a>|^2 (Eve's outcome) * |<a|U^-t|e>|^2 (Bob's check)
      for (int t = 0; t < n_t; ++t)
        for (int a = 0; a < dim; ++a)
          for (int e = 0; e < dim; ++e) pass += std::pow(std::norm(at(t)(e, a)), 2);
      pass /= static_cast<double>(n_t) * dim;
      break;
    case AttackKind::IR2:
      for (int ta = 0; ta < n_t; ++ta)
        for (int te = 0; te < n_t; ++te)
          for (int a = 0; a < dim; ++a)
            for (int e = 0; e < dim; ++e) {
              const double p_eve = std::norm(at(ta - te)(e, a));
              const double p_bob = std::norm(at(te - ta)(a, e));
              pass += p_eve * p_bob;
            }
      pass /= static_cast<double>(n_t) * n_t * dim;
      break;
    case AttackKind::DoS:
    case AttackKind::MITM:
      for (int ta = 0; ta < n_t; ++ta)
        for (int te = 0; te < n_t; ++te)
          for (int a = 0; a < dim; ++a)
            for (int e = 0; e < dim; ++e) pass += std::norm(at(te - ta)(a, e));
      pass /= static_cast<double>(n_t) * n_t * dim * dim;
      break;
    case AttackKind::UntrustedCharlie:
      throw std::invalid_argument("untrusted-charlie has no per-state closed form here; use Monte Carlo");
  }
  return 1.0 - pass;
}

double lm05_exact_detection_probability() {
  double pass = 0.0;
  for (int basis = 0; basis < 2; ++basis)
    for (int value = 0; value < 2; ++value) {
      const Qubit sent = qubit::prepare(basis, value);
      for (int eve_basis = 0; eve_basis < 2; ++eve_basis)
        for (int eve_value = 0; eve_value < 2; ++eve_value) {
          const Qubit resent = qubit::prepare(eve_basis, eve_value);
          const double p_eve = std::norm(resent.dot(sent));
          const double p_ok = std::norm(sent.dot(resent));
          pass += 0.25 * 0.5 * p_eve * p_ok;
        }
    }
  return 1.0 - pass;
}

}  // namespace qwalk
