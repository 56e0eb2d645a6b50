#include "qwalk/walk.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

void require_cycle(int cycle_length) {
  if (cycle_length < 2)
    throw std::invalid_argument("cycle length must be >= 2, got " + std::to_string(cycle_length));
}

int wrap(long long value, int modulus) {
  const long long r = value % modulus;
  return static_cast<int>(r < 0 ? r + modulus : r);
}

struct CoinEntries {
  Complex a, b, c, d;  // [[a, b], [c, d]]
};

CoinEntries coin_entries(const CoinParams& p) {
  if (!std::isfinite(p.theta) || !std::isfinite(p.xi) || !std::isfinite(p.zeta))
    throw std::invalid_argument("coin parameters must be finite");
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);
  const Complex exi = std::polar(1.0, p.xi);
  const Complex ezeta = std::polar(1.0, p.zeta);
  // SU(2)-type coin: the lower-right entry carries a minus sign so that the
  // matrix is unitary for every θ.
  return {exi * ct, ezeta * st, std::conj(ezeta) * st, -std::conj(exi) * ct};
}

// One forward step S (I ⊗ R) applied in place of a dense multiply.
Amplitudes step_forward(const Amplitudes& in, int n, const CoinEntries& r) {
  Amplitudes out = Amplitudes::Zero(2 * n);
  for (int x = 0; x < n; ++x) {
    const Complex up = in[2 * x];
    const Complex down = in[2 * x + 1];
    out[2 * wrap(x - 1, n)] += r.a * up + r.b * down;
    out[2 * wrap(x + 1, n) + 1] += r.c * up + r.d * down;
  }
  return out;
}

// U† = (I ⊗ R†) S†
Amplitudes step_backward(const Amplitudes& in, int n, const CoinEntries& r) {
  Amplitudes out(2 * n);
  for (int x = 0; x < n; ++x) {
    const Complex up = in[2 * wrap(x - 1, n)];
    const Complex down = in[2 * wrap(x + 1, n) + 1];
    out[2 * x] = std::conj(r.a) * up + std::conj(r.c) * down;
    out[2 * x + 1] = std::conj(r.b) * up + std::conj(r.d) * down;
  }
  return out;
}

}  // namespace

WalkState::WalkState(int cycle_length, Amplitudes amplitudes)
    : cycle_length_(cycle_length), amplitudes_(std::move(amplitudes)) {
  require_cycle(cycle_length_);
  if (amplitudes_.size() != 2 * cycle_length_)
    throw std::invalid_argument("amplitude vector length must be 2N");
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kAlgebraTol)
    throw std::invalid_argument("walk state is not normalized");
}

WalkState WalkState::basis(int cycle_length, int position, int coin) {
  require_cycle(cycle_length);
  if (position < 0 || position >= cycle_length)
    throw std::invalid_argument("position out of range: " + std::to_string(position));
  if (coin != 0 && coin != 1) throw std::invalid_argument("coin must be 0 or 1");
  Amplitudes amps = Amplitudes::Zero(2 * cycle_length);
  amps[index(position, coin)] = 1.0;
  return WalkState(cycle_length, std::move(amps));
}

Operator make_coin(const CoinParams& params) {
  const auto r = coin_entries(params);
  Operator coin(2, 2);
  coin << r.a, r.b, r.c, r.d;
  return coin;
}

Operator make_shift(int cycle_length) {
  require_cycle(cycle_length);
  const int n = cycle_length;
  Operator shift = Operator::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x) {
    shift(2 * wrap(x - 1, n), 2 * x) = 1.0;
    shift(2 * wrap(x + 1, n) + 1, 2 * x + 1) = 1.0;
  }
  return shift;
}

Operator make_step(int cycle_length, const CoinParams& params) {
  const Operator shift = make_shift(cycle_length);
  const Operator coin = make_coin(params);
  Operator local = Operator::Zero(2 * cycle_length, 2 * cycle_length);
  for (int x = 0; x < cycle_length; ++x) local.block<2, 2>(2 * x, 2 * x) = coin;
  return shift * local;
}

Operator make_translation(int cycle_length, long long shift) {
  require_cycle(cycle_length);
  const int n = cycle_length;
  Operator t = Operator::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < 2; ++c) t(2 * wrap(x + shift, n) + c, 2 * x + c) = 1.0;
  return t;
}

WalkState evolve(const WalkState& state, const CoinParams& params, long long steps) {
  const auto r = coin_entries(params);
  if (steps == 0) return state;
  const int n = state.cycle_length();
  Amplitudes amps = state.amplitudes();
  if (steps >= 0) {
    for (long long i = 0; i < steps; ++i) amps = step_forward(amps, n, r);
  } else {
    for (long long i = 0; i < -steps; ++i) amps = step_backward(amps, n, r);
  }
  // Renormalize away accumulated rounding so long walks stay valid states.
  amps /= amps.norm();
  return WalkState(n, std::move(amps));
}

Operator walk_power(int cycle_length, const CoinParams& params, long long steps) {
  require_cycle(cycle_length);
  Operator out(2 * cycle_length, 2 * cycle_length);
  for (int x = 0; x < cycle_length; ++x)
    for (int c = 0; c < 2; ++c)
      out.col(WalkState::index(x, c)) = evolve(WalkState::basis(cycle_length, x, c), params, steps).amplitudes();
  return out;
}

std::vector<double> position_distribution(const WalkState& state) {
  std::vector<double> p(state.cycle_length());
  for (int x = 0; x < state.cycle_length(); ++x)
    p[x] = std::norm(state.amplitude(x, 0)) + std::norm(state.amplitude(x, 1));
  return p;
}

std::vector<double> outcome_distribution(const WalkState& state) {
  std::vector<double> p(state.dim());
  for (int i = 0; i < state.dim(); ++i) p[i] = std::norm(state.amplitudes()[i]);
  return p;
}

Measurement measure(const WalkState& state, Rng& rng) {
  const auto p = outcome_distribution(state);
  const double u = rng.uniform_unit();
  double cumulative = 0.0;
  int chosen = -1;
  int last_nonzero = 0;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (p[i] > 0.0) last_nonzero = i;
    cumulative += p[i];
    if (chosen < 0 && u < cumulative && p[i] > 0.0) chosen = i;
  }
  // u can exceed the rounded cumulative sum by a few ulps.
  if (chosen < 0) chosen = last_nonzero;
  const Outcome outcome{chosen / 2, chosen % 2};
  return {outcome, WalkState::basis(state.cycle_length(), outcome.position, outcome.coin)};
}

WalkState translate(const WalkState& state, long long shift) {
  const int n = state.cycle_length();
  Amplitudes out(state.dim());
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < 2; ++c) out[2 * wrap(x + shift, n) + c] = state.amplitude(x, c);
  return WalkState(n, std::move(out));
}

WalkState encode_symbol(const WalkState& state, int symbol) {
  if (symbol < 0 || symbol >= state.cycle_length())
    throw std::invalid_argument("symbol out of range: " + std::to_string(symbol));
  return translate(state, symbol);
}

double overlap_probability(const WalkState& a, const WalkState& b) {
  if (a.cycle_length() != b.cycle_length()) throw std::invalid_argument("cycle length mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double unitarity_defect(const Operator& op) {
  const Operator residual = op * op.adjoint() - Operator::Identity(op.rows(), op.cols());
  return residual.cwiseAbs().maxCoeff();
}

}  // namespace qwalk
