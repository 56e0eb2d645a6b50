#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qwalk/adversary.hpp"
#include "qwalk/analysis.hpp"
#include "qwalk/format.hpp"
#include "qwalk/protocol.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/serialize.hpp"

namespace qwalk::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 1;

// Flags shared by the commands that take walk parameters. Unset flags leave
// the config file (or built-in default) value alone.
struct WalkFlags {
  std::optional<int> N;
  std::optional<int> nT;
  std::optional<double> theta;
  std::optional<double> xi;
  std::optional<double> zeta;
  std::optional<std::string> mode;

  void add(CLI::App* app) {
    app->add_option("--N", N, "cycle length");
    app->add_option("--nT", nT, "number of walk lengths, T = {0..nT-1}");
    app->add_option("--theta", theta, "coin θ (radians)");
    app->add_option("--xi", xi, "coin ξ (radians)");
    app->add_option("--zeta", zeta, "coin ζ (radians)");
    app->add_option("--mode", mode, "θ mode")->check(CLI::IsMember({"fixed", "random"}));
  }

  void apply(ProtocolConfig& c) const {
    if (N) c.N = *N;
    if (nT) c.nT = *nT;
    if (theta) c.coin.theta = *theta;
    if (xi) c.coin.xi = *xi;
    if (zeta) c.coin.zeta = *zeta;
    if (mode) c.theta_mode = *mode == "fixed" ? ThetaMode::Fixed : ThetaMode::Random;
  }

  void apply(ParameterSpace& s) const {
    if (N) s.N = *N;
    if (nT) s.nT = *nT;
    if (theta) s.coin.theta = *theta;
    if (xi) s.coin.xi = *xi;
    if (zeta) s.coin.zeta = *zeta;
  }
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

fs::path output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& explicit_path, const std::string& default_name) {
  return explicit_path.empty() ? output_dir() / default_name : fs::path(explicit_path);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

std::string csv_header(const Json& run) { return "# run: " + run.dump() + "\n"; }

Protocol protocol_from_string(const std::string& text) {
  if (text == "qsdc") return Protocol::Qsdc;
  if (text == "cqd") return Protocol::Cqd;
  if (text == "lm05") return Protocol::Lm05;
  throw UsageError("unknown protocol '" + text + "'");
}

Denominator denominator_from_string(const std::string& text) {
  return text == "two-groups" ? Denominator::TwoGroups : Denominator::AllSingles;
}

std::string denominator_name(Denominator d) { return d == Denominator::AllSingles ? "all-singles" : "two-groups"; }

Message random_message(Rng& rng, int width, int slots) {
  Bits bits(static_cast<std::size_t>(slots) * bits_per_symbol(width));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.uniform_int(0, 1));
  return chunk_message(bits, width);
}

std::string hash_of(const std::optional<Message>& m) {
  if (!m) return "none";
  std::ostringstream os;
  os << std::hex << fnv1a(bits_to_string(m->bits));
  return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string protocol;
  std::string config_path;
  WalkFlags walk;
  std::optional<int> n;
  std::optional<double> tolerance;
  std::optional<int> k_max;
  std::optional<int> mask_k;
  std::optional<double> mask_theta;
  std::uint64_t seed = kDefaultSeed;
  std::string attack;
  std::vector<std::string> legs;
  bool omniscient = false;
  std::string message;
  std::string message_bob;
  std::string out;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const Protocol protocol = protocol_from_string(o.protocol);
  ProtocolConfig config;
  if (!o.config_path.empty()) config = config_from_json(read_json_file(o.config_path), config);
  o.walk.apply(config);
  if (o.n) config.n = *o.n;
  if (o.tolerance) config.error_tolerance = *o.tolerance;
  if (o.k_max) config.cqd_k_max = *o.k_max;
  if (o.mask_k) config.cqd_k = *o.mask_k;
  if (o.mask_theta) config.cqd_theta_r = *o.mask_theta;
  config.validate();

  const int width = protocol == Protocol::Lm05 ? 2 : config.N;
  const int slots = config.n / 4;
  Rng message_rng(o.seed ^ 0x6d657373616765ULL);
  const Message msg = o.message.empty() ? random_message(message_rng, width, slots)
                                        : chunk_message(parse_bits(o.message), width);
  const Message msg_bob = o.message_bob.empty() ? random_message(message_rng, width, slots)
                                                : chunk_message(parse_bits(o.message_bob), width);

  std::unique_ptr<Interceptor> eve;
  Json attack_info = nullptr;
  if (!o.attack.empty()) {
    AttackStrategy strategy;
    strategy.kind = attack_from_string(o.attack);
    for (const auto& l : o.legs) strategy.legs.push_back(leg_from_string(l));
    strategy.omniscient = o.omniscient;
    eve = make_interceptor(strategy, protocol, o.seed ^ 0x657665ULL);
    Json legs = Json::array();
    for (Leg l : strategy.legs) legs.push_back(to_string(l));
    attack_info = Json{{"kind", to_string(strategy.kind)}, {"legs", legs}, {"omniscient", strategy.omniscient}};
  }

  Rng rng(o.seed);
  Transcript tr;
  switch (protocol) {
    case Protocol::Qsdc: tr = run_qsdc(config, msg, eve.get(), rng); break;
    case Protocol::Cqd: tr = run_cqd(config, msg, msg_bob, eve.get(), rng); break;
    case Protocol::Lm05: tr = run_lm05(config, msg, eve.get(), rng); break;
  }

  Json run{{"command", "simulate"},
           {"protocol", o.protocol},
           {"seed", o.seed},
           {"config", to_json(config)},
           {"attack", attack_info},
           {"message", bits_to_string(msg.bits)}};
  if (protocol == Protocol::Cqd) run["message_bob"] = bits_to_string(msg_bob.bits);
  const Json doc{{"run", run}, {"transcript", to_json(tr)}};
  const fs::path path = resolve_output(o.out, o.protocol + "-" + std::to_string(o.seed) + ".json");
  write_file(path, doc.dump(2) + "\n");

  out << "seed: " << o.seed << "\n";
  out << "protocol: " << o.protocol << " N=" << config.N << " n=" << config.n << " nT=" << config.nT
      << " mode=" << (config.theta_mode == ThetaMode::Fixed ? "fixed" : "random") << "\n";
  out << "aborted: " << (tr.aborted ? "yes (" + tr.abort_step + ")" : std::string("no")) << "\n";
  for (const auto& c : tr.checks)
    out << "error rate " << c.stage << ": " << format_number(c.error_rate) << " (" << c.mismatches << "/"
        << c.indices.size() << ")\n";
  if (protocol == Protocol::Cqd) {
    out << "decoded hash (alice -> bob): " << hash_of(tr.received_by_bob) << "\n";
    out << "decoded hash (bob -> alice): " << hash_of(tr.received_by_alice) << "\n";
  } else {
    out << "decoded hash: " << hash_of(tr.received_by_alice) << "\n";
  }
  if (tr.attack) {
    out << "attack " << tr.attack->attack << ": detection rate " << format_number(tr.attack->detection_rate);
    if (tr.attack->symbol_accuracy) out << ", symbol accuracy " << format_number(*tr.attack->symbol_accuracy);
    out << "\n";
  }
  out << "wrote: " << path.string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct Preset {
  std::string name;
  SweepVariable variable;
  std::vector<double> grid;
  ParameterSpace base;
};

Preset make_preset(const std::string& name, int theta_points) {
  ParameterSpace base;  // N=3, nT=7, θ=ξ=ζ=π/4
  if (name == "fig3a") return {name, SweepVariable::Theta, theta_grid(theta_points), base};
  if (name == "fig3b") return {name, SweepVariable::N, integer_grid(2, 25), base};
  if (name == "fig5a") {
    base.N = 4;
    return {name, SweepVariable::nT, integer_grid(1, 30), base};
  }
  if (name == "fig5b") return {name, SweepVariable::nT, integer_grid(1, 30), base};
  throw UsageError("unknown preset '" + name + "'");
}

Json space_json(const ParameterSpace& s) { return to_json(s); }

std::string figure_csv(const Preset& p, Denominator denom) {
  const auto ir2 = sweep(p.variable, p.grid, MiStrategy::IR2, p.base, denom);
  const auto ir1 = sweep(p.variable, p.grid, MiStrategy::IR1, p.base, denom);
  const Json run{{"command", "reproduce-figures"},
                 {"preset", p.name},
                 {"variable", to_string(p.variable)},
                 {"points", p.grid.size()},
                 {"base", space_json(p.base)},
                 {"denominator", denominator_name(denom)}};
  std::ostringstream os;
  os << csv_header(run);
  write_figure_csv(os, p.variable, ir2, ir1);
  return os.str();
}

struct SweepOptions {
  std::string var = "theta";
  int points = 64;
  std::optional<int> from;
  std::optional<int> to;
  std::string strategy = "ir2";
  std::string preset;
  std::string format = "csv";
  std::string denominator = "all-singles";
  std::string config_path;
  WalkFlags walk;
  std::string out;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  const Denominator denom = denominator_from_string(o.denominator);
  if (!o.preset.empty()) {
    const Preset p = make_preset(o.preset, o.points);
    const fs::path path = resolve_output(o.out, o.preset + ".csv");
    write_file(path, figure_csv(p, denom));
    out << "wrote: " << path.string() << "\n";
    return kExitOk;
  }

  ParameterSpace base;
  if (!o.config_path.empty()) {
    ProtocolConfig seeded;
    seeded.N = base.N;
    base = config_from_json(read_json_file(o.config_path), seeded).public_space();
  }
  o.walk.apply(base);
  const SweepVariable var = sweep_variable_from_string(o.var);
  const MiStrategy strategy = mi_strategy_from_string(o.strategy);
  std::vector<double> grid;
  Json grid_info;
  if (var == SweepVariable::Theta) {
    grid = theta_grid(o.points);
    grid_info = Json{{"points", o.points}};
  } else {
    if (!o.from || !o.to) throw UsageError("--from and --to are required for integer sweeps");
    if (*o.from > *o.to) throw UsageError("--from must not exceed --to");
    grid = integer_grid(*o.from, *o.to);
    grid_info = Json{{"from", *o.from}, {"to", *o.to}};
  }
  const auto records = sweep(var, grid, strategy, base, denom);
  const Json run{{"command", "sweep"},
                 {"variable", o.var},
                 {"grid", grid_info},
                 {"strategy", o.strategy},
                 {"base", space_json(base)},
                 {"denominator", denominator_name(denom)}};

  std::string body;
  if (o.format == "json") {
    Json doc = sweep_to_json(var, strategy, records);
    doc["run"] = run;
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << csv_header(run);
    write_sweep_csv(os, var, strategy, records);
    body = os.str();
  }
  const fs::path path = resolve_output(o.out, "sweep-" + o.var + "-" + o.strategy + "." + o.format);
  write_file(path, body);
  int failed = 0;
  for (const auto& r : records) failed += r.result ? 0 : 1;
  out << "points: " << records.size() << " (" << failed << " invalid)\n";
  out << "wrote: " << path.string() << "\n";
  return kExitOk;
}

int cmd_reproduce(int points, const std::string& out_dir, const std::string& denominator, std::ostream& out) {
  const fs::path dir = out_dir.empty() ? output_dir() : fs::path(out_dir);
  for (const char* name : {"fig3a", "fig3b", "fig5a", "fig5b"}) {
    const Preset p = make_preset(name, points);
    const fs::path path = dir / (std::string(name) + ".csv");
    write_file(path, figure_csv(p, denominator_from_string(denominator)));
    out << "wrote: " << path.string() << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------ attack-stats

struct AttackStatsOptions {
  std::string attack = "ir1";
  bool lm05 = false;
  WalkFlags walk;
  std::optional<int> n;
  long long trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

Json estimate_json(const DetectionEstimate& e) {
  return Json{{"rate", e.rate}, {"trials", e.trials}, {"detected", e.detected}, {"sigma", e.sigma}};
}

int cmd_attack_stats(const AttackStatsOptions& o, std::ostream& out) {
  if (o.trials <= 0) throw UsageError("--trials must be positive");
  const AttackKind kind = attack_from_string(o.attack);
  ProtocolConfig config;
  config.N = 3;
  config.theta_mode = ThetaMode::Fixed;
  o.walk.apply(config);
  if (o.n) config.n = *o.n;
  config.validate();
  if (o.lm05 && (kind == AttackKind::MITM || kind == AttackKind::UntrustedCharlie))
    throw UsageError("the qubit baseline supports ir1, ir2 and dos only");

  Rng rng(o.seed);
  Json run{{"command", "attack-stats"},
           {"attack", o.attack},
           {"lm05", o.lm05},
           {"seed", o.seed},
           {"trials", o.trials},
           {"config", to_json(config)}};
  Json report{{"run", run}};
  std::optional<double> reference;
  DetectionEstimate mc;
  std::string quantity = "detection";

  if (kind == AttackKind::UntrustedCharlie || kind == AttackKind::MITM) {
    const bool charlie = kind == AttackKind::UntrustedCharlie;
    const Protocol protocol = charlie ? Protocol::Cqd : Protocol::Qsdc;
    const long long per_run = charlie ? config.n / 4 : config.n / 2;
    const long long runs = (o.trials + per_run - 1) / per_run;
    AttackStrategy strategy;
    strategy.kind = kind;
    const auto stats = protocol_attack_stats(protocol, strategy, config, charlie ? "" : "step2", runs, rng);
    report["protocol_runs"] = runs;
    if (charlie) {
      quantity = "symbol accuracy";
      mc = stats.accuracy.value_or(DetectionEstimate{});
      reference = 1.0 / config.N;
    } else {
      mc = stats.detection;
      if (config.theta_mode == ThetaMode::Fixed)
        reference = detection_rate_exact({kind, config.public_space(), ThetaMode::Fixed, false});
    }
  } else {
    const DetectionQuery query{kind, config.public_space(), config.theta_mode, o.lm05};
    try {
      reference = detection_rate_exact(query);
    } catch (const UnsupportedError&) {
    }
    mc = detection_rate_monte_carlo(query, o.trials, rng);
  }

  report["quantity"] = quantity;
  report["exact"] = reference ? Json(*reference) : Json(nullptr);
  report["monte_carlo"] = estimate_json(mc);
  out << "seed: " << o.seed << "\n";
  out << o.attack << (o.lm05 ? " (qubit baseline)" : "") << " " << quantity << "\n";
  out << "monte carlo: " << format_number(mc.rate) << " over " << mc.trials << " (sigma "
      << format_number(mc.sigma) << ")\n";
  if (reference) {
    const double sigma = std::sqrt(*reference * (1.0 - *reference) / static_cast<double>(mc.trials));
    const double dev = std::abs(mc.rate - *reference);
    const bool within = dev <= 3.0 * sigma + 1e-12;
    report["sigma_at_exact"] = sigma;
    report["within_3_sigma"] = within;
    out << "exact: " << format_number(*reference) << "  |diff| " << format_number(dev) << "  within 3 sigma: "
        << (within ? "yes" : "no") << "\n";
  } else {
    out << "exact: unavailable for random theta\n";
  }
  const fs::path path = resolve_output(o.out, "attack-" + o.attack + "-" + std::to_string(o.seed) + ".json");
  write_file(path, report.dump(2) + "\n");
  out << "wrote: " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-walk direct communication simulator", "qwalk"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run one protocol instance and write its transcript");
  simulate->add_option("protocol", sim.protocol, "qsdc, cqd or lm05")
      ->required()
      ->check(CLI::IsMember({"qsdc", "cqd", "lm05"}));
  simulate->add_option("--config", sim.config_path, "JSON config; flags override it");
  sim.walk.add(simulate);
  simulate->add_option("--n", sim.n, "batch size (multiple of 4)");
  simulate->add_option("--tolerance", sim.tolerance, "abort threshold on the check error rate");
  simulate->add_option("--k-max", sim.k_max, "CQD masking walk length bound");
  simulate->add_option("--mask-k", sim.mask_k, "fix the CQD masking walk length");
  simulate->add_option("--mask-theta", sim.mask_theta, "fix the CQD masking θ");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--attack", sim.attack, "ir1, ir2, dos, mitm or untrusted-charlie");
  simulate->add_option("--leg", sim.legs, "attacked leg(s)");
  simulate->add_flag("--omniscient", sim.omniscient, "MITM that knows every preparation");
  simulate->add_option("--message", sim.message, "bit string sent (Alice's in CQD, Bob's otherwise)");
  simulate->add_option("--message-bob", sim.message_bob, "Bob's bit string in CQD");
  simulate->add_option("--out", sim.out, "output JSON path");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "mutual information over a parameter grid");
  sweep_cmd->add_option("--var", sw.var, "theta, N or nT")->check(CLI::IsMember({"theta", "N", "nT"}));
  sweep_cmd->add_option("--points", sw.points, "θ grid size over [0, 2π)")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--from", sw.from, "first integer grid value");
  sweep_cmd->add_option("--to", sw.to, "last integer grid value");
  sweep_cmd->add_option("--strategy", sw.strategy, "ir1, ir2 or lm05")
      ->check(CLI::IsMember({"ir1", "ir2", "lm05"}));
  sweep_cmd->add_option("--preset", sw.preset, "fig3a, fig3b, fig5a or fig5b")
      ->check(CLI::IsMember({"fig3a", "fig3b", "fig5a", "fig5b"}));
  sweep_cmd->add_option("--format", sw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--denominator", sw.denominator, "all-singles or two-groups")
      ->check(CLI::IsMember({"all-singles", "two-groups"}));
  sweep_cmd->add_option("--config", sw.config_path, "JSON config; flags override it");
  sw.walk.add(sweep_cmd);
  sweep_cmd->add_option("--out", sw.out, "output path");

  AttackStatsOptions as;
  auto* stats = app.add_subcommand("attack-stats", "exact versus Monte Carlo attack statistics");
  stats->add_option("--attack", as.attack, "ir1, ir2, dos, mitm or untrusted-charlie")
      ->check(CLI::IsMember({"ir1", "ir2", "dos", "mitm", "untrusted-charlie"}));
  stats->add_flag("--lm05", as.lm05, "qubit baseline instead of walk states");
  as.walk.add(stats);
  stats->add_option("--n", as.n, "batch size for protocol-level attacks");
  stats->add_option("--trials", as.trials, "number of checked states");
  stats->add_option("--seed", as.seed, "RNG seed");
  stats->add_option("--out", as.out, "output JSON path");

  int fig_points = 64;
  std::string fig_dir;
  std::string fig_denominator = "all-singles";
  auto* figures = app.add_subcommand("reproduce-figures", "write fig3a, fig3b, fig5a and fig5b CSV tables");
  figures->add_option("--points", fig_points, "θ grid size")->check(CLI::PositiveNumber);
  figures->add_option("--out-dir", fig_dir, "output directory");
  figures->add_option("--denominator", fig_denominator, "all-singles or two-groups")
      ->check(CLI::IsMember({"all-singles", "two-groups"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out);
    if (stats->parsed()) return cmd_attack_stats(as, out);
    if (figures->parsed()) return cmd_reproduce(fig_points, fig_dir, fig_denominator, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace qwalk::cli
