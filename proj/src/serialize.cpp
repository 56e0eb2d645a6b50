#include "qwalk/serialize.hpp"

#include <cmath>
#include <stdexcept>

#include "qwalk/analysis.hpp"

namespace qwalk {

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string mode_name(ThetaMode m) { return m == ThetaMode::Fixed ? "fixed" : "random"; }

ThetaMode mode_from_string(const std::string& text) {
  if (text == "fixed") return ThetaMode::Fixed;
  if (text == "random") return ThetaMode::Random;
  throw std::invalid_argument("theta_mode must be 'fixed' or 'random'");
}

std::string denominator_name(Denominator d) { return d == Denominator::AllSingles ? "all-singles" : "two-groups"; }

template <typename T>
T field(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("bad or missing field '") + key + "'");
  }
}

}  // namespace

Json to_json(const WalkState& state) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) amps.push_back(complex_pair(state.amplitudes()[i]));
  return Json{{"N", state.cycle_length()}, {"amplitudes", amps}};
}

WalkState walk_state_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("walk state must be an object");
  const int n = field<int>(j, "N");
  const Json& amps = j.at("amplitudes");
  if (!amps.is_array()) throw std::invalid_argument("amplitudes must be an array");
  Amplitudes v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Json& a = amps[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw std::invalid_argument("amplitude must be [re, im]");
    v[static_cast<Eigen::Index>(i)] = Complex(a[0].get<double>(), a[1].get<double>());
  }
  return WalkState(n, v);
}

Json to_json(const CoinParams& coin) { return Json{{"theta", coin.theta}, {"xi", coin.xi}, {"zeta", coin.zeta}}; }

CoinParams coin_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("coin must be an object");
  CoinParams c;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw std::invalid_argument("coin field '" + key + "' must be a number");
    if (key == "theta") c.theta = value.get<double>();
    else if (key == "xi") c.xi = value.get<double>();
    else if (key == "zeta") c.zeta = value.get<double>();
    else throw std::invalid_argument("unknown coin field '" + key + "'");
  }
  return c;
}

Json to_json(const ProtocolConfig& config) {
  Json j{{"N", config.N},
         {"n", config.n},
         {"nT", config.nT},
         {"theta_mode", mode_name(config.theta_mode)},
         {"coin", to_json(config.coin)},
         {"error_tolerance", config.error_tolerance},
         {"cqd_k_max", config.cqd_k_max}};
  j["cqd_k"] = config.cqd_k ? Json(*config.cqd_k) : Json(nullptr);
  j["cqd_theta_r"] = config.cqd_theta_r ? Json(*config.cqd_theta_r) : Json(nullptr);
  return j;
}

ProtocolConfig config_from_json(const Json& j, ProtocolConfig base) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "N") base.N = field<int>(j, "N");
    else if (key == "n") base.n = field<int>(j, "n");
    else if (key == "nT") base.nT = field<int>(j, "nT");
    else if (key == "theta_mode") base.theta_mode = mode_from_string(field<std::string>(j, "theta_mode"));
    else if (key == "coin") {
      CoinParams merged = base.coin;
      const CoinParams given = coin_from_json(value);
      if (value.contains("theta")) merged.theta = given.theta;
      if (value.contains("xi")) merged.xi = given.xi;
      if (value.contains("zeta")) merged.zeta = given.zeta;
      base.coin = merged;
    } else if (key == "error_tolerance") base.error_tolerance = field<double>(j, "error_tolerance");
    else if (key == "cqd_k_max") base.cqd_k_max = field<int>(j, "cqd_k_max");
    else if (key == "cqd_k") base.cqd_k = value.is_null() ? std::nullopt : std::optional<int>(field<int>(j, "cqd_k"));
    else if (key == "cqd_theta_r")
      base.cqd_theta_r = value.is_null() ? std::nullopt : std::optional<double>(field<double>(j, "cqd_theta_r"));
    else throw std::invalid_argument("unknown config field '" + key + "'");
  }
  return base;
}

Json to_json(const ParameterSpace& space) {
  return Json{{"N", space.N}, {"nT", space.nT}, {"coin", to_json(space.coin)}};
}

Json to_json(const StatePrep& prep) {
  return Json{{"index", prep.index}, {"t", prep.t}, {"x", prep.x}, {"c", prep.c}, {"coin", to_json(prep.coin)}};
}

Json to_json(const QubitPrep& prep) {
  return Json{{"index", prep.index}, {"basis", prep.basis == 0 ? "Z" : "X"}, {"value", prep.value}};
}

Json to_json(const Message& message) {
  return Json{{"bits", bits_to_string(message.bits)},
              {"symbols", message.symbols},
              {"padding", message.padding},
              {"bits_per_symbol", message.bits_per_symbol}};
}

Json to_json(const CheckReport& report) {
  return Json{{"stage", report.stage},
              {"checker", to_string(report.checker)},
              {"indices", report.indices},
              {"expected", report.expected},
              {"observed", report.observed},
              {"mismatches", report.mismatches},
              {"error_rate", report.error_rate},
              {"tolerance", report.tolerance},
              {"passed", report.passed}};
}

Json to_json(const AttackReport& report) {
  Json legs = Json::array();
  for (Leg l : report.legs) legs.push_back(to_string(l));
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json rec{{"index", r.index}, {"leg", to_string(r.leg)}};
    rec["t"] = r.t ? Json(*r.t) : Json(nullptr);
    rec["theta"] = r.theta ? Json(*r.theta) : Json(nullptr);
    rec["x"] = r.x;
    rec["c"] = r.c;
    records.push_back(std::move(rec));
  }
  Json guesses = Json::array();
  for (const auto& g : report.guesses)
    guesses.push_back(Json{{"index", g.index}, {"guessed", g.guessed}, {"actual", g.actual}});
  Json detections = Json::array();
  for (const auto& d : report.detections)
    detections.push_back(Json{{"index", d.index}, {"stage", d.stage}, {"detected", d.detected}});
  Json j{{"attack", report.attack},
         {"legs", legs},
         {"records", records},
         {"guesses", guesses},
         {"detections", detections},
         {"detection_rate", report.detection_rate}};
  j["symbol_accuracy"] = report.symbol_accuracy ? Json(*report.symbol_accuracy) : Json(nullptr);
  return j;
}

Json to_json(const Transcript& tr) {
  Json j{{"protocol", to_string(tr.protocol)}, {"config", to_json(tr.config)}};
  Json preps = Json::array();
  for (const auto& p : tr.preps) preps.push_back(to_json(p));
  for (const auto& p : tr.qubit_preps) preps.push_back(to_json(p));
  j["preparations"] = preps;
  j["check_indices"] = tr.check_indices;
  j["message_indices"] = tr.message_indices;
  j["decoy_indices"] = tr.decoy_indices;
  j["alice_symbols"] = tr.alice_symbols;
  j["bob_symbols"] = tr.bob_symbols;
  Json events = Json::array();
  for (const auto& e : tr.events)
    events.push_back(Json{{"seq", e.seq},
                          {"medium", e.medium},
                          {"from", e.from},
                          {"to", e.to},
                          {"kind", e.kind},
                          {"payload", e.payload},
                          {"interceptor_action", e.interceptor_action}});
  j["events"] = events;
  Json checks = Json::array();
  for (const auto& c : tr.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["mask"] = tr.mask ? Json{{"k", tr.mask->k}, {"theta_r", tr.mask->theta_r}} : Json(nullptr);
  j["announcements"] = tr.announcements;
  j["aborted"] = tr.aborted;
  j["abort_step"] = tr.aborted ? Json(tr.abort_step) : Json(nullptr);
  j["received_by_alice"] = tr.received_by_alice ? to_json(*tr.received_by_alice) : Json(nullptr);
  j["received_by_bob"] = tr.received_by_bob ? to_json(*tr.received_by_bob) : Json(nullptr);
  j["attack"] = tr.attack ? to_json(*tr.attack) : Json(nullptr);
  return j;
}

Json to_json(const MiResult& result) {
  Json j{{"strategy", to_string(result.strategy)},
         {"value", result.value},
         {"normalized", result.normalized},
         {"denominator", denominator_name(result.denominator)}};
  j["space"] = result.space ? to_json(*result.space) : Json(nullptr);
  return j;
}

Json to_json(const Qubit& q) { return Json::array({complex_pair(q[0]), complex_pair(q[1])}); }

}  // namespace qwalk
