#include "qwalk/channel.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qwalk/rng.hpp"

namespace qwalk {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Qsdc: return "qsdc";
    case Protocol::Cqd: return "cqd";
    case Protocol::Lm05: return "lm05";
  }
  return "?";
}

std::string to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Charlie: return "charlie";
  }
  return "?";
}

std::string to_string(Leg leg) {
  switch (leg) {
    case Leg::AliceToBob: return "alice->bob";
    case Leg::BobToAlice: return "bob->alice";
    case Leg::CharlieToAlice: return "charlie->alice";
  }
  return "?";
}

Leg leg_from_string(const std::string& text) {
  if (text == "alice->bob" || text == "forward") return Leg::AliceToBob;
  if (text == "bob->alice" || text == "return") return Leg::BobToAlice;
  if (text == "charlie->alice") return Leg::CharlieToAlice;
  throw std::invalid_argument("unknown channel leg '" + text + "'");
}

std::vector<Leg> legs_of(Protocol p) {
  if (p == Protocol::Cqd) return {Leg::CharlieToAlice, Leg::AliceToBob};
  return {Leg::AliceToBob, Leg::BobToAlice};
}

void ProtocolConfig::validate() const {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (n <= 0 || n % 4 != 0) throw std::invalid_argument("batch size n must be a positive multiple of 4");
  if (nT < 1) throw std::invalid_argument("nT must be >= 1");
  if (!(error_tolerance >= 0.0 && error_tolerance <= 1.0))
    throw std::invalid_argument("error tolerance must lie in [0, 1]");
  if (cqd_k_max < 1) throw std::invalid_argument("cqd_k_max must be >= 1");
  if (cqd_k && *cqd_k < 0) throw std::invalid_argument("cqd_k must be >= 0");
  make_coin(coin);  // finiteness
}

WalkState StatePrep::prepare(int cycle_length) const {
  return evolve(WalkState::basis(cycle_length, x, c), coin, t);
}

std::string Interceptor::on_quantum(Leg, std::vector<InFlight>&, const ProtocolConfig&) { return {}; }
std::string Interceptor::on_qubits(Leg, std::vector<InFlightQubit>&) { return {}; }
void Interceptor::on_classical(const ClassicalMessage&) {}
void Interceptor::on_secrets(std::span<const StatePrep>) {}

bool Interceptor::targets(Leg leg) const {
  const auto l = legs();
  return std::find(l.begin(), l.end(), leg) != l.end();
}

AttackReport Interceptor::finalize(const Transcript& transcript) const {
  AttackReport report;
  report.attack = name();
  report.legs = legs();
  report.records = records_;

  const std::set<int> touched(touched_.begin(), touched_.end());
  int detected = 0;
  for (const auto& check : transcript.checks) {
    for (std::size_t j = 0; j < check.indices.size(); ++j) {
      if (!touched.contains(check.indices[j])) continue;
      const bool hit = check.expected[j] != check.observed[j];
      report.detections.push_back({check.indices[j], check.stage, hit});
      detected += hit ? 1 : 0;
    }
  }
  if (!report.detections.empty())
    report.detection_rate = static_cast<double>(detected) / static_cast<double>(report.detections.size());

  const auto& truth = transcript.protocol == Protocol::Cqd ? transcript.alice_symbols : transcript.bob_symbols;
  int correct = 0;
  for (std::size_t j = 0; j < transcript.message_indices.size() && j < truth.size(); ++j) {
    const auto it = guesses_.find(transcript.message_indices[j]);
    if (it == guesses_.end()) continue;
    report.guesses.push_back({it->first, it->second, truth[j]});
    correct += it->second == truth[j] ? 1 : 0;
  }
  if (!report.guesses.empty())
    report.symbol_accuracy = static_cast<double>(correct) / static_cast<double>(report.guesses.size());
  return report;
}

CheckReport eavesdrop_check(std::span<const InFlight> received, std::span<const StatePrep> reveals,
                            double tolerance, Rng& rng) {
  if (received.size() != reveals.size())
    throw std::invalid_argument("eavesdrop_check: reveal count does not match received states");
  CheckReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < received.size(); ++i) {
    const auto& prep = reveals[i];
    if (received[i].index != prep.index)
      throw std::invalid_argument("eavesdrop_check: reveal index " + std::to_string(prep.index) +
                                  " does not match state index " + std::to_string(received[i].index));
    const WalkState undone = evolve(received[i].state, prep.coin, -static_cast<long long>(prep.t));
    const Outcome got = measure(undone, rng).outcome;
    const int expected = WalkState::index(prep.x, prep.c);
    const int observed = WalkState::index(got.position, got.coin);
    report.indices.push_back(prep.index);
    report.expected.push_back(expected);
    report.observed.push_back(observed);
    report.mismatches += expected != observed ? 1 : 0;
  }
  if (!received.empty())
    report.error_rate = static_cast<double>(report.mismatches) / static_cast<double>(received.size());
  report.passed = report.error_rate <= tolerance;
  return report;
}

}  // namespace qwalk
