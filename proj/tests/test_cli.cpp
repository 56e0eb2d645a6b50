#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qwalk/channel.hpp"

namespace fs = std::filesystem;
using qwalk::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = qwalk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qwalk-cli-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Rows of a CSV with '#' comment lines dropped; cells as strings.
std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("simulate is reproducible") {
  const auto dir = scratch("simulate");
  const std::vector<std::string> base{"simulate", "qsdc", "--N", "5", "--n", "16", "--nT", "7", "--seed", "42"};
  auto a = base;
  a.insert(a.end(), {"--out", (dir / "a.json").string()});
  auto b = base;
  b.insert(b.end(), {"--out", (dir / "b.json").string()});
  const auto ra = run(a);
  REQUIRE(ra.code == 0);
  REQUIRE(run(b).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(ra.out.find("seed: 42") != std::string::npos);
  CHECK(ra.out.find("aborted: no") != std::string::npos);
  CHECK(ra.out.find("decoded hash: ") != std::string::npos);

  const auto doc = Json::parse(slurp(dir / "a.json"));
  CHECK(doc["run"]["config"]["N"] == 5);
  CHECK(doc["transcript"]["received_by_alice"]["bits"] == doc["run"]["message"]);
}

TEST_CASE("simulate variants") {
  const auto dir = scratch("variants");
  const auto charlie = run({"simulate", "cqd", "--attack", "untrusted-charlie", "--N", "3", "--seed", "5", "--out",
                            (dir / "cqd.json").string()});
  REQUIRE(charlie.code == 0);
  const auto cqd = Json::parse(slurp(dir / "cqd.json"));
  CHECK(cqd["transcript"]["attack"]["attack"] == "untrusted-charlie");
  CHECK(cqd["run"]["attack"]["kind"] == "untrusted-charlie");

  REQUIRE(run({"simulate", "lm05", "--n", "16", "--seed", "1", "--out", (dir / "lm.json").string()}).code == 0);
  const auto lm = Json::parse(slurp(dir / "lm.json"));
  CHECK(lm["transcript"]["received_by_alice"]["bits"] == lm["run"]["message"]);

  REQUIRE(run({"simulate", "qsdc", "--message", "0110", "--N", "4", "--out", (dir / "m.json").string()}).code == 0);
  CHECK(Json::parse(slurp(dir / "m.json"))["transcript"]["received_by_alice"]["bits"] == "0110");

  const auto dos = run({"simulate", "qsdc", "--attack", "dos", "--mode", "fixed", "--seed", "2", "--out",
                        (dir / "dos.json").string()});
  CHECK(dos.code == 0);
  CHECK(dos.out.find("aborted: yes (step2)") != std::string::npos);
  CHECK(Json::parse(slurp(dir / "dos.json"))["transcript"]["aborted"] == true);
}

TEST_CASE("config file and flag precedence") {
  const auto dir = scratch("config");
  std::ofstream(dir / "c.json") << R"({"N": 3, "nT": 4, "theta_mode": "fixed", "coin": {"theta": 0.5}})";
  const auto r = run({"simulate", "qsdc", "--config", (dir / "c.json").string(), "--N", "4", "--out",
                      (dir / "o.json").string()});
  REQUIRE(r.code == 0);
  const auto cfg = Json::parse(slurp(dir / "o.json"))["run"]["config"];
  CHECK(cfg["N"] == 4);
  CHECK(cfg["nT"] == 4);
  CHECK(cfg["theta_mode"] == "fixed");
  CHECK(cfg["coin"]["theta"] == 0.5);

  std::ofstream(dir / "bad.json") << R"({"N": 3, "colour": 1})";
  CHECK(run({"simulate", "qsdc", "--config", (dir / "bad.json").string()}).code == qwalk::cli::kExitUsage);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(run({"simulate", "qsdc", "--config", (dir / "broken.json").string()}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "qsdc", "--config", (dir / "none.json").string()}).code == qwalk::cli::kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "bb84"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "qsdc", "--N", "1"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "qsdc", "--n", "10"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "qsdc", "--attack", "untrusted-charlie"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"simulate", "qsdc", "--message", "01x"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"sweep", "--var", "N"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"sweep", "--var", "volume"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"attack-stats", "--attack", "mitm", "--lm05"}).code == qwalk::cli::kExitUsage);
  CHECK(run({"--help"}).code == qwalk::cli::kExitOk);
}

TEST_CASE("default output directory comes from the environment") {
  const auto dir = scratch("env");
  ::setenv(qwalk::cli::kOutputDirEnv, dir.string().c_str(), 1);
  const auto r = run({"simulate", "lm05", "--seed", "9"});
  ::unsetenv(qwalk::cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "lm05-9.json"));
}

TEST_CASE("sweep output") {
  const auto dir = scratch("sweep");
  const std::vector<std::string> base{"sweep", "--var", "theta", "--points", "64", "--N", "3", "--nT", "7"};
  auto a = base;
  a.insert(a.end(), {"--out", (dir / "a.csv").string()});
  auto b = base;
  b.insert(b.end(), {"--out", (dir / "b.csv").string()});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto rows = read_csv(dir / "a.csv");
  REQUIRE(rows.size() == 65u);
  CHECK(rows[0] == std::vector<std::string>{"theta", "ir2", "bits", "error"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(std::log2(6.0)).epsilon(1e-9));
  CHECK(slurp(dir / "a.csv").rfind("# run: ", 0) == 0);

  REQUIRE(run({"sweep", "--var", "N", "--from", "1", "--to", "4", "--strategy", "ir1", "--format", "json", "--out",
               (dir / "n.json").string()})
              .code == 0);
  const auto doc = Json::parse(slurp(dir / "n.json"));
  CHECK(doc["records"].size() == 4);
  CHECK(doc["records"][0]["result"].is_null());
  CHECK(doc["records"][0]["error"].is_string());
  CHECK(doc["run"]["grid"]["from"] == 1);
}

TEST_CASE("figure presets") {
  const auto dir = scratch("presets");
  REQUIRE(run({"sweep", "--preset", "fig3a", "--out", (dir / "fig3a.csv").string()}).code == 0);
  const auto rows = read_csv(dir / "fig3a.csv");
  REQUIRE(rows.size() == 65u);
  CHECK(rows[0] == std::vector<std::string>{"theta", "ir2", "ir1", "lm05"});
  double best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    best = std::max(best, std::stod(rows[i][1]));
    CHECK(rows[i][3] == "0.5");
  }
  CHECK(std::abs(best - 1.0) <= 1e-6);
}

TEST_CASE("fig5b preset threshold") {
  const auto dir = scratch("fig5b");
  REQUIRE(run({"sweep", "--preset", "fig5b", "--out", (dir / "fig5b.csv").string()}).code == 0);
  const auto nt = read_csv(dir / "fig5b.csv");
  REQUIRE(nt.size() == 31u);
  for (std::size_t i = 1; i < nt.size(); ++i)
    if (std::stoi(nt[i][0]) > 25) CHECK(std::stod(nt[i][1]) < 0.25);
}

TEST_CASE("reproduce-figures writes all tables") {
  const auto dir = scratch("figures");
  const auto r = run({"reproduce-figures", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const std::pair<const char*, std::size_t> expected[] = {{"fig3a", 65}, {"fig3b", 25}, {"fig5a", 31}, {"fig5b", 31}};
  for (const auto& [name, rows] : expected) {
    const auto csv = read_csv(dir / (std::string(name) + ".csv"));
    CHECK(csv.size() == rows);
    CHECK(csv[0].size() == 4u);
  }
}

TEST_CASE("attack statistics") {
  const auto dir = scratch("attack");
  REQUIRE(run({"attack-stats", "--attack", "ir2", "--nT", "1", "--trials", "2000", "--out",
               (dir / "ir2.json").string()})
              .code == 0);
  const auto ir2 = Json::parse(slurp(dir / "ir2.json"));
  CHECK(ir2["exact"] == 0.0);
  CHECK(ir2["monte_carlo"]["detected"] == 0);

  REQUIRE(run({"attack-stats", "--attack", "dos", "--N", "3", "--out", (dir / "dos.json").string()}).code == 0);
  const auto dos = Json::parse(slurp(dir / "dos.json"));
  CHECK(dos["exact"].get<double>() == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(dos["within_3_sigma"] == true);

  REQUIRE(run({"attack-stats", "--attack", "ir1", "--lm05", "--out", (dir / "lm.json").string()}).code == 0);
  const auto lm = Json::parse(slurp(dir / "lm.json"));
  CHECK(std::abs(lm["exact"].get<double>() - 0.25) <= 1e-15);
  CHECK(lm["within_3_sigma"] == true);

  REQUIRE(run({"attack-stats", "--attack", "ir1", "--mode", "random", "--trials", "1000", "--out",
               (dir / "rnd.json").string()})
              .code == 0);
  CHECK(Json::parse(slurp(dir / "rnd.json"))["exact"].is_null());
}
