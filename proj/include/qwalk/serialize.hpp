#pragma once

#include <string>

#include "qwalk/channel.hpp"

namespace qwalk {

struct MiResult;
struct JointTable;

Json to_json(const WalkState& state);
WalkState walk_state_from_json(const Json& j);

Json to_json(const CoinParams& coin);
CoinParams coin_from_json(const Json& j);

Json to_json(const ProtocolConfig& config);
/// Missing keys keep the values already in `base`.
ProtocolConfig config_from_json(const Json& j, ProtocolConfig base = {});

Json to_json(const ParameterSpace& space);
Json to_json(const StatePrep& prep);
Json to_json(const QubitPrep& prep);
Json to_json(const Message& message);
Json to_json(const CheckReport& report);
Json to_json(const AttackReport& report);
Json to_json(const Transcript& transcript);
Json to_json(const MiResult& result);

Json to_json(const Qubit& q);

}  // namespace qwalk
