#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qwalk/protocol.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

void ParameterSpace::validate() const {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (nT < 1) throw std::invalid_argument("nT must be >= 1");
  make_coin(coin);
}

std::size_t JointTable::offset(std::span<const int> index) const {
  if (index.size() != shape.size()) throw std::invalid_argument("index arity does not match table");
  std::size_t off = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] < 0 || index[k] >= shape[k]) throw std::out_of_range("table index out of range");
    off = off * shape[k] + index[k];
  }
  return off;
}

double JointTable::total() const { return std::accumulate(data.begin(), data.end(), 0.0); }

int JointTable::axis(std::string_view name) const {
  for (std::size_t k = 0; k < axes.size(); ++k)
    if (axes[k] == name) return static_cast<int>(k);
  throw std::invalid_argument("no axis named " + std::string(name));
}

JointTable joint_dist_ir2(const ParameterSpace& space) {
  space.validate();
  const int n_t = space.nT;
  const int dim = 2 * space.N;
  std::vector<Operator> power;
  for (int d = -(n_t - 1); d <= n_t - 1; ++d) power.push_back(walk_power(space.N, space.coin, d));

  JointTable table;
  table.axes = {"t_A", "x_A", "c_A", "t_E", "x_E", "c_E"};
  table.shape = {n_t, space.N, 2, n_t, space.N, 2};
  table.data.resize(static_cast<std::size_t>(n_t) * dim * n_t * dim);
  const double weight = 1.0 / (static_cast<double>(dim) * n_t * n_t);
  std::size_t off = 0;
  for (int ta = 0; ta < n_t; ++ta)
    for (int a = 0; a < dim; ++a)
      for (int te = 0; te < n_t; ++te) {
        // U^{-t_E} U^{t_A} = U^{t_A - t_E}
        const Operator& u = power[ta - te + n_t - 1];
        for (int e = 0; e < dim; ++e) table.data[off++] = weight * std::norm(u(e, a));
      }
  return table;
}

JointTable joint_dist_ir1(const ParameterSpace& space) {
  space.validate();
  const int n_t = space.nT;
  const int dim = 2 * space.N;
  JointTable table;
  table.axes = {"t_A", "x_A", "c_A", "x_E", "c_E"};
  table.shape = {n_t, space.N, 2, space.N, 2};
  table.data.resize(static_cast<std::size_t>(n_t) * dim * dim);
  const double weight = 1.0 / (static_cast<double>(dim) * n_t);
  std::size_t off = 0;
  for (int ta = 0; ta < n_t; ++ta) {
    const Operator u = walk_power(space.N, space.coin, ta);
    for (int a = 0; a < dim; ++a)
      for (int e = 0; e < dim; ++e) table.data[off++] = weight * std::norm(u(e, a));
  }
  return table;
}

JointTable lm05_joint_table() {
  // a, e ∈ {0, 1, +, -}; Eve picks her basis with probability 1/2.
  JointTable table;
  table.axes = {"a", "e"};
  table.shape = {4, 4};
  table.data.resize(16);
  for (int a = 0; a < 4; ++a)
    for (int e = 0; e < 4; ++e) {
      const Qubit sent = qubit::prepare(a / 2, a % 2);
      const Qubit seen = qubit::prepare(e / 2, e % 2);
      table.data[a * 4 + e] = 0.25 * 0.5 * std::norm(seen.dot(sent));
    }
  return table;
}

std::vector<double> marginal(const JointTable& table, int axis) {
  const int ax[] = {axis};
  return marginal(table, ax);
}

std::vector<double> marginal(const JointTable& table, std::span<const int> axes) {
  const int rank = static_cast<int>(table.shape.size());
  std::size_t out_size = 1;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= rank) throw std::invalid_argument("marginal: axis out of range");
    for (std::size_t i = 0; i < j; ++i)
      if (axes[i] == axes[j]) throw std::invalid_argument("marginal: repeated axis");
    out_size *= table.shape[axes[j]];
  }
  std::vector<double> out(out_size, 0.0);
  std::vector<int> index(rank, 0);
  for (double p : table.data) {
    std::size_t o = 0;
    for (int ax : axes) o = o * table.shape[ax] + index[ax];
    out[o] += p;
    for (int k = rank - 1; k >= 0; --k) {
      if (++index[k] < table.shape[k]) break;
      index[k] = 0;
    }
  }
  return out;
}

std::string to_string(MiStrategy s) {
  switch (s) {
    case MiStrategy::IR1: return "ir1";
    case MiStrategy::IR2: return "ir2";
    case MiStrategy::LM05: return "lm05";
  }
  return "?";
}

MiStrategy mi_strategy_from_string(const std::string& text) {
  if (text == "ir1") return MiStrategy::IR1;
  if (text == "ir2") return MiStrategy::IR2;
  if (text == "lm05") return MiStrategy::LM05;
  throw std::invalid_argument("unknown strategy '" + text + "'");
}

double mutual_information(const JointTable& table, std::span<const int> group_a, std::span<const int> group_b,
                          Denominator denominator) {
  const int rank = static_cast<int>(table.shape.size());
  std::vector<int> seen(rank, 0);
  for (int ax : group_a) {
    if (ax < 0 || ax >= rank) throw std::invalid_argument("axis out of range");
    ++seen[ax];
  }
  for (int ax : group_b) {
    if (ax < 0 || ax >= rank) throw std::invalid_argument("axis out of range");
    ++seen[ax];
  }
  if (group_a.empty() || group_b.empty() || std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; }))
    throw std::invalid_argument("groups must partition the table axes");

  std::vector<std::vector<double>> singles;
  std::vector<double> joint_a;
  std::vector<double> joint_b;
  if (denominator == Denominator::AllSingles) {
    for (int k = 0; k < rank; ++k) singles.push_back(marginal(table, k));
  } else {
    joint_a = marginal(table, group_a);
    joint_b = marginal(table, group_b);
  }

  std::vector<int> index(rank, 0);
  double sum = 0.0;
  for (double p : table.data) {
    if (p > 0.0) {
      double den = 1.0;
      if (denominator == Denominator::AllSingles) {
        for (int k = 0; k < rank; ++k) den *= singles[k][index[k]];
      } else {
        std::size_t oa = 0;
        std::size_t ob = 0;
        for (int ax : group_a) oa = oa * table.shape[ax] + index[ax];
        for (int ax : group_b) ob = ob * table.shape[ax] + index[ax];
        den = joint_a[oa] * joint_b[ob];
      }
      sum += p * std::log2(p / den);
    }
    for (int k = rank - 1; k >= 0; --k) {
      if (++index[k] < table.shape[k]) break;
      index[k] = 0;
    }
  }
  return sum;
}

namespace {

double clamp_mi(double value) { return value < 0.0 && value >= -1e-12 ? 0.0 : value; }

}  // namespace

MiResult intercept_resend_mi(MiStrategy strategy, const ParameterSpace& space, Denominator denominator) {
  if (strategy == MiStrategy::LM05) return lm05_mutual_information();
  const JointTable table = strategy == MiStrategy::IR2 ? joint_dist_ir2(space) : joint_dist_ir1(space);
  const int alice[] = {0, 1, 2};
  std::vector<int> eve(table.shape.size() - 3);
  std::iota(eve.begin(), eve.end(), 3);
  MiResult r;
  r.strategy = strategy;
  r.denominator = denominator;
  r.space = space;
  r.value = clamp_mi(mutual_information(table, alice, eve, denominator));
  r.normalized = r.value / std::log2(2.0 * space.N);
  return r;
}

MiResult lm05_mutual_information() {
  const JointTable table = lm05_joint_table();
  const int a[] = {0};
  const int e[] = {1};
  MiResult r;
  r.strategy = MiStrategy::LM05;
  r.value = clamp_mi(mutual_information(table, a, e));
  r.normalized = r.value / 2.0;
  return r;
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Theta: return "theta";
    case SweepVariable::N: return "N";
    case SweepVariable::nT: return "nT";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(const std::string& text) {
  if (text == "theta") return SweepVariable::Theta;
  if (text == "N") return SweepVariable::N;
  if (text == "nT") return SweepVariable::nT;
  throw std::invalid_argument("unknown sweep variable '" + text + "'");
}

std::vector<double> theta_grid(int points) {
  if (points < 1) throw std::invalid_argument("theta grid needs at least one point");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = 2.0 * std::numbers::pi * k / points;
  return grid;
}

std::vector<double> integer_grid(int first, int last) {
  std::vector<double> grid;
  for (int v = first; v <= last; ++v) grid.push_back(v);
  return grid;
}

std::vector<SweepRecord> sweep(SweepVariable variable, std::span<const double> grid, MiStrategy strategy,
                               const ParameterSpace& base, Denominator denominator) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepRecord> out;
  out.reserve(grid.size());
  for (double v : grid) {
    SweepRecord rec;
    rec.variable = v;
    ParameterSpace space = base;
    try {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite grid value");
      switch (variable) {
        case SweepVariable::Theta: space.coin.theta = v; break;
        case SweepVariable::N:
          if (v != std::floor(v)) throw std::invalid_argument("N must be an integer");
          space.N = static_cast<int>(v);
          break;
        case SweepVariable::nT:
          if (v != std::floor(v)) throw std::invalid_argument("nT must be an integer");
          space.nT = static_cast<int>(v);
          break;
      }
      rec.result = intercept_resend_mi(strategy, space, denominator);
    } catch (const std::invalid_argument& e) {
      rec.error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

double detection_rate_exact(const DetectionQuery& query) {
  if (query.lm05) return lm05_exact_detection_probability();
  if (query.theta_mode == ThetaMode::Random)
    throw UnsupportedError("exact detection rates need a fixed public θ");
  return exact_detection_probability(query.kind, query.space);
}

DetectionEstimate detection_rate_monte_carlo(const DetectionQuery& query, long long trials, Rng& rng) {
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  if (query.kind == AttackKind::UntrustedCharlie)
    throw std::invalid_argument("untrusted-charlie is measured through cqd runs");
  DetectionEstimate est;
  est.trials = trials;
  for (long long i = 0; i < trials; ++i) {
    bool mismatch = false;
    if (query.lm05) {
      const int basis = static_cast<int>(rng.uniform_int(0, 1));
      const int value = static_cast<int>(rng.uniform_int(0, 1));
      Qubit q = qubit::prepare(basis, value);
      if (query.kind == AttackKind::DoS) {
        const int b = static_cast<int>(rng.uniform_int(0, 1));
        q = qubit::prepare(b, static_cast<int>(rng.uniform_int(0, 1)));
      } else {
        q = attack_qubit_ir(q, rng).resent;
      }
      mismatch = qubit::measure(q, basis, rng).value != value;
    } else {
      const auto& space = query.space;
      StatePrep prep;
      prep.t = static_cast<int>(rng.uniform_int(0, space.nT - 1));
      prep.x = static_cast<int>(rng.uniform_int(0, space.N - 1));
      prep.c = static_cast<int>(rng.uniform_int(0, 1));
      prep.coin = space.coin;
      if (query.theta_mode == ThetaMode::Random) prep.coin.theta = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
      const WalkState sent = prep.prepare(space.N);
      WalkState received = sent;
      switch (query.kind) {
        case AttackKind::IR1: received = attack_ir1(sent, rng).resent; break;
        case AttackKind::IR2: received = attack_ir2(sent, space, query.theta_mode, rng).resent; break;
        case AttackKind::DoS:
        case AttackKind::MITM: received = attack_dos(space, query.theta_mode, rng).resent; break;
        case AttackKind::UntrustedCharlie: break;
      }
      const auto got = measure(evolve(received, prep.coin, -static_cast<long long>(prep.t)), rng).outcome;
      mismatch = got.position != prep.x || got.coin != prep.c;
    }
    est.detected += mismatch ? 1 : 0;
  }
  est.rate = static_cast<double>(est.detected) / static_cast<double>(trials);
  est.sigma = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(trials));
  return est;
}

namespace {

DetectionEstimate estimate(long long hits, long long total) {
  DetectionEstimate e;
  e.trials = total;
  e.detected = hits;
  if (total > 0) {
    e.rate = static_cast<double>(hits) / static_cast<double>(total);
    e.sigma = std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(total));
  }
  return e;
}

}  // namespace

ProtocolAttackStats protocol_attack_stats(Protocol protocol, const AttackStrategy& strategy, ProtocolConfig config,
                                          const std::string& stage, long long runs, Rng& rng) {
  if (runs <= 0) throw std::invalid_argument("runs must be positive");
  config.error_tolerance = 1.0;
  config.validate();
  const int slots = config.n / 4;
  const int width = protocol == Protocol::Lm05 ? 2 : config.N;
  auto random_message = [&](Rng& r) {
    std::vector<int> symbols(slots);
    for (int& s : symbols) s = static_cast<int>(r.uniform_int(0, width - 1));
    return message_from_symbols(symbols, width, static_cast<std::size_t>(slots) * bits_per_symbol(width));
  };

  long long hits = 0;
  long long checked = 0;
  long long correct = 0;
  long long guessed = 0;
  for (long long run = 0; run < runs; ++run) {
    auto eve = make_interceptor(strategy, protocol, rng.next_u64());
    Transcript tr;
    switch (protocol) {
      case Protocol::Qsdc: tr = run_qsdc(config, random_message(rng), eve.get(), rng); break;
      case Protocol::Cqd: {
        const Message a = random_message(rng);
        tr = run_cqd(config, a, random_message(rng), eve.get(), rng);
        break;
      }
      case Protocol::Lm05: tr = run_lm05(config, random_message(rng), eve.get(), rng); break;
    }
    if (!tr.attack) throw std::logic_error("attacked run produced no attack report");
    for (const auto& d : tr.attack->detections) {
      if (!stage.empty() && d.stage != stage) continue;
      ++checked;
      hits += d.detected ? 1 : 0;
    }
    for (const auto& g : tr.attack->guesses) {
      ++guessed;
      correct += g.guessed == g.actual ? 1 : 0;
    }
  }
  ProtocolAttackStats stats;
  stats.runs = runs;
  stats.detection = estimate(hits, checked);
  if (guessed > 0) stats.accuracy = estimate(correct, guessed);
  return stats;
}

}  // namespace qwalk
