#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/csv.hpp"
#include "magreg/errors.hpp"
#include "magreg/mathieu.hpp"

namespace fs = std::filesystem;
using namespace magreg::app;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + MAGREG_CLI_PATH + "\" " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(MAGREG_CONFIG_DIR) + "/" + name; }

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("magreg_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits rendered CSV into note lines ("# key: value") and data rows.
struct Parsed {
  std::vector<std::string> comments;
  std::vector<std::vector<std::string>> rows;  // rows[0] is the header

  std::string note(const std::string& key) const {
    const std::string prefix = "# " + key + ": ";
    for (const auto& c : comments)
      if (c.rfind(prefix, 0) == 0) return c.substr(prefix.size());
    return {};
  }
  int column(const std::string& name) const {
    for (std::size_t i = 0; i < rows.front().size(); ++i)
      if (rows.front()[i] == name) return static_cast<int>(i);
    return -1;
  }
  double at(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row + 1).at(static_cast<std::size_t>(column(name))));
  }
};

Parsed parse_csv(const std::string& text) {
  Parsed p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      p.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    p.rows.push_back(cells);
  }
  return p;
}

}  // namespace

TEST_CASE("parse_config reads nested sections") {
  const auto cfg = parse_config(R"(
command: decay
seed: 7
truncation: 24
potential:
  kind: tilt
  beta: 0.8
annulus:
  R: 2.0
  eps: [0.5, 0.1]
  boundary:
    eigen: [1.0, 0.0, 0.1]
solenoid:
  points:
    - [1, 2, 3]
)",
                                "inline");
  CHECK(cfg.command == "decay");
  CHECK(cfg.seed == 7);
  CHECK(cfg.truncation == 24);
  CHECK(cfg.potential.kind == "tilt");
  CHECK(cfg.potential.beta == 0.8);
  CHECK(cfg.annulus.R == 2.0);
  CHECK(cfg.annulus.eps == std::vector<double>{0.5, 0.1});
  CHECK(cfg.annulus.eigen.size() == 3);
  CHECK(cfg.solenoid.points.size() == 1);
  CHECK(cfg.tilt.steps == RunConfig{}.tilt.steps);
}

TEST_CASE("config errors carry a location") {
  try {
    parse_config("command: mu1\npotential:\n  kind: ab_flux\n  flx: 0.5\n", "bad.yaml");
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.yaml") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("potential.flx") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("truncation: many\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("potential:\n  kind: other\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("solenoid:\n  points: [[1, 2]]\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("tilt:\n  beta_max: 1.6\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config("a: [1, 2\n", "x"), ConfigError);
}

TEST_CASE("to_yaml round-trips") {
  const auto a = load_config(config("decay_ab.yaml"));
  const auto b = parse_config(a.to_yaml(), "roundtrip");
  CHECK(a.to_yaml() == b.to_yaml());
}

TEST_CASE("every shipped config parses and runs") {
  for (const auto& entry : fs::directory_iterator(MAGREG_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().string());
    const auto cfg = load_config(entry.path().string());
    const auto table = run_command(cfg);
    CHECK(!table.rows.empty());
    for (const auto& row : table.rows) CHECK(row.size() == table.columns.size());
  }
}

TEST_CASE("mu1 for flux 1/2") {
  const auto r = run_cli("--config \"" + config("mu1_ab.yaml") + "\" mu1");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  CHECK(p.rows.front() == std::vector<std::string>{"k", "mu", "gamma_plus", "gamma_minus"});
  CHECK(p.at(0, "mu") == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(p.at(0, "gamma_plus") == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.at(0, "gamma_minus") == doctest::Approx(-0.5).epsilon(1e-10));
  // (1/2 - j)²: 1/4, 1/4, 9/4, 9/4, 25/4
  const double expected[] = {0.25, 0.25, 2.25, 2.25, 6.25};
  for (std::size_t k = 0; k < 5; ++k) CHECK(p.at(k, "mu") == doctest::Approx(expected[k]).epsilon(1e-10));
}

TEST_CASE("mu1 for the tilted loop matches the Mathieu route") {
  const auto r = run_cli("--config \"" + config("mu1_tilt.yaml") + "\" mu1");
  REQUIRE(r.code == 0);
  CHECK(std::abs(parse_csv(r.out).at(0, "mu") - magreg::mu1_from_tilt(1.2)) < 1e-7);

  // the override is a starting point; the reported K is where it converged
  const auto small = run_cli("--config \"" + config("mu1_tilt.yaml") + "\" --truncation 4 mu1");
  REQUIRE(small.code == 0);
  const auto ps = parse_csv(small.out);
  CHECK(std::stoi(ps.note("truncation")) >= 4);
  CHECK(std::abs(ps.at(0, "mu") - magreg::mu1_from_tilt(1.2)) < 1e-7);
}

TEST_CASE("tilt-table") {
  const auto r = run_cli("--config \"" + config("tilt_table.yaml") + "\" tilt-table");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  CHECK(p.rows.size() == 32);
  CHECK(p.at(0, "beta") == 0.0);
  CHECK(p.at(0, "mu1_galerkin") == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(p.at(0, "gamma1") == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.note("gamma1_increasing") == "true");
  for (std::size_t i = 0; i + 1 < p.rows.size(); ++i) CHECK(std::abs(p.at(i, "difference")) < 1e-7);
}

TEST_CASE("solenoid for a slightly tilted loop") {
  const auto r = run_cli("--config \"" + config("solenoid_tilted.yaml") + "\" solenoid");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  CHECK(p.note("ab_regime") == "false");
  CHECK(std::stod(p.note("c23")) == doctest::Approx(std::numbers::pi * std::cos(0.3)));
  CHECK(p.rows.size() == 10);
}

TEST_CASE("decay exponents approach gamma1") {
  const auto r = run_cli("--config \"" + config("decay_ab.yaml") + "\" decay");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  CHECK(p.note("gamma1") == "0.5");
  CHECK(p.note("l2_monotone") == "true");
  double prev_gap = 1e9;
  for (std::size_t i = 0; i + 1 < p.rows.size(); ++i) {
    const auto& cell = p.rows[i + 1][static_cast<std::size_t>(p.column("decay_exponent"))];
    if (cell.empty()) continue;
    const double gap = std::abs(std::stod(cell) - 0.5);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.1);
}

TEST_CASE("hardy finds no violations") {
  const auto r = run_cli("--config \"" + config("hardy.yaml") + "\" hardy");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  CHECK(p.note("violations") == "0");
  CHECK(p.rows.size() == 101);
}

TEST_CASE("exit codes") {
  CHECK(run_cli("mu1").code == 0);
  CHECK(run_cli("--version").code == 0);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("no-such-command").code == 2);
  CHECK(run_cli("--config /does/not/exist.yaml mu1").code == 2);

  const auto unknown = write_file("unknown.yaml", "command: mu1\nbogus: 1\n");
  CHECK(run_cli("--config \"" + unknown.string() + "\" mu1").code == 2);
  const auto range = write_file("range.yaml", "potential:\n  kind: tilt\n  beta: 2.0\n");
  CHECK(run_cli("--config \"" + range.string() + "\" mu1").code == 2);
  CHECK(run_cli("--tol -1 mu1").code == 2);

  // integer flux has a double angular mode
  const auto degenerate = write_file("degenerate.yaml", "potential:\n  kind: ab_flux\n  flux: 1.0\n");
  CHECK(run_cli("--config \"" + degenerate.string() + "\" decay").code == 3);
}

TEST_CASE("output file is byte-identical across runs") {
  const auto dir = scratch_dir();
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  REQUIRE(run_cli("--config \"" + config("hardy.yaml") + "\" --out \"" + a.string() + "\" hardy").code == 0);
  REQUIRE(run_cli("--config \"" + config("hardy.yaml") + "\" --out \"" + b.string() + "\" hardy").code == 0);
  const auto ta = slurp(a);
  CHECK(!ta.empty());
  CHECK(ta == slurp(b));

  const auto c = dir / "c.csv";
  REQUIRE(run_cli("--config \"" + config("hardy.yaml") + "\" --seed 5 --out \"" + c.string() + "\" hardy").code == 0);
  CHECK(slurp(c) != ta);
  fs::remove_all(dir);
}

TEST_CASE("provenance header") {
  const auto r = run_cli("--seed 11 mathieu");
  REQUIRE(r.code == 0);
  const auto p = parse_csv(r.out);
  REQUIRE(p.comments.size() >= 5);
  CHECK(p.comments[0].rfind("# magreg ", 0) == 0);
  CHECK(p.comments[1] == "# command: mathieu");
  CHECK(p.comments[2] == "# seed: 11");
  CHECK(p.comments[3] == "# source: <defaults>");
  CHECK(p.comments[4] == "# config:");
  CHECK(r.out.find("#   seed: 11") != std::string::npos);

  // the embedded config parses back to the same run
  std::string yaml;
  for (const auto& c : p.comments)
    if (c.rfind("#   ", 0) == 0) yaml += c.substr(4) + "\n";
  CHECK(parse_config(yaml, "header").to_yaml() == parse_config(yaml, "again").to_yaml());
  CHECK(parse_config(yaml, "header").seed == 11);
}

TEST_CASE("verify runs a single criterion") {
  const auto r = run_cli("verify --only 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("AC1") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}
