#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

class Rng;

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Amplitudes = Eigen::VectorXcd;

inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kComposedTol = 1e-9;

/// Coin parameters (θ, ξ, ζ) in radians. Values are stored as given; no
/// canonicalization to [0, 2π) is applied.
struct CoinParams {
  double theta = 0.0;
  double xi = 0.0;
  double zeta = 0.0;

  bool operator==(const CoinParams&) const = default;
};

/// Pure state of a walker on an N-cycle. Amplitude index is 2x + c.
class WalkState {
 public:
  /// Throws std::invalid_argument if N < 2, the length is not 2N, or the
  /// state is not normalized within kAlgebraTol.
  WalkState(int cycle_length, Amplitudes amplitudes);

  static WalkState basis(int cycle_length, int position, int coin);

  int cycle_length() const { return cycle_length_; }
  int dim() const { return 2 * cycle_length_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  Complex amplitude(int position, int coin) const { return amplitudes_[index(position, coin)]; }
  double norm() const { return amplitudes_.norm(); }

  static constexpr int index(int position, int coin) { return 2 * position + coin; }

 private:
  int cycle_length_;
  Amplitudes amplitudes_;
};

struct Outcome {
  int position = 0;
  int coin = 0;
  bool operator==(const Outcome&) const = default;
};

struct Measurement {
  Outcome outcome;
  WalkState collapsed;
};

Operator make_coin(const CoinParams& params);
Operator make_shift(int cycle_length);
Operator make_step(int cycle_length, const CoinParams& params);
/// T(y) ⊗ I_c on the full 2N-dimensional space; y is reduced mod N.
Operator make_translation(int cycle_length, long long shift);

/// U^t |state>; negative t applies (U†)^|t|.
WalkState evolve(const WalkState& state, const CoinParams& params, long long steps);

/// U^t as a dense matrix, built column by column with evolve().
Operator walk_power(int cycle_length, const CoinParams& params, long long steps);

std::vector<double> position_distribution(const WalkState& state);
std::vector<double> outcome_distribution(const WalkState& state);

Measurement measure(const WalkState& state, Rng& rng);

/// (T(m) ⊗ I_c) |state>, 0 <= m < N.
WalkState encode_symbol(const WalkState& state, int symbol);

/// Translation without the symbol range restriction.
WalkState translate(const WalkState& state, long long shift);

/// |<a|b>|^2
double overlap_probability(const WalkState& a, const WalkState& b);

/// max_ij |(O O† - I)_ij|
double unitarity_defect(const Operator& op);

}  // namespace qwalk
