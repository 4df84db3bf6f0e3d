#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "acceptance/criteria.hpp"
#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/csv.hpp"
#include "magreg/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitAcceptance = 4;

int run_verify(int only) {
  bool ok = true;
  for (const auto& r : magreg::acceptance::run_acceptance(only)) {
    std::cout << magreg::acceptance::format(r) << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magreg: spectral exponents for anisotropic magnetic Schrodinger equations"};
  app.set_version_flag("--version", std::string(MAGREG_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> truncation;
  int only = 0;
  app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output CSV path (stdout when omitted)");
  app.add_option("--seed", seed, "random seed (default 42)");
  app.add_option("--tol", tol, "convergence tolerance override");
  app.add_option("--truncation", truncation, "Fourier truncation K override");

  for (const auto& name : magreg::app::table_commands()) app.add_subcommand(name)->fallthrough();
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(0, 11));
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "verify") return run_verify(only);

  try {
    magreg::app::RunConfig cfg = config_path.empty() ? magreg::app::RunConfig{} : magreg::app::load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command) {
      std::cerr << "warning: config names command '" << cfg.command << "', running '" << command << "'\n";
    }
    cfg.command = command;
    if (seed) cfg.seed = *seed;
    if (tol) cfg.tol = *tol;
    if (truncation) cfg.truncation = *truncation;
    magreg::app::validate(cfg);

    const auto table = magreg::app::run_command(cfg);
    const auto text = magreg::app::render(magreg::app::provenance_header(cfg, MAGREG_VERSION), table);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      magreg::app::write_atomic(out_path, text);
    }
    return 0;
  } catch (const magreg::app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const magreg::Error& e) {
    std::cerr << "compute error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
}
