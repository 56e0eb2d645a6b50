#pragma once

#include <numbers>

#include "qwalk/walk.hpp"

namespace qwalk {

/// Fixed: every state uses the public coin. Random: θ is drawn uniformly
/// from [0, 2π) per state; ξ and ζ stay at the configured values.
enum class ThetaMode { Fixed, Random };

/// Public parameter sets: T = {0..nT-1}, X = {0..N-1}, C = {0,1} and the
/// coin shared by everyone in fixed-θ analysis.
struct ParameterSpace {
  int N = 3;
  int nT = 7;
  CoinParams coin{std::numbers::pi / 4, std::numbers::pi / 4, std::numbers::pi / 4};

  void validate() const;
  bool operator==(const ParameterSpace&) const = default;
};

}  // namespace qwalk
