#pragma once

#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/csv.hpp"
#include "magreg/circle_spectrum.hpp"
#include "magreg/solenoid.hpp"
#include "magreg/tubular.hpp"

namespace magreg::app {

/// Subcommands producing a table; `verify` is handled by the front-end.
const std::vector<std::string>& table_commands();

/// Runs cfg.command. Config problems surface as ConfigError, numerical ones
/// as magreg::Error.
Table run_command(const RunConfig& cfg);

AngularPotential1D build_potential(const PotentialSpec& spec);
LoopCurve build_loop(const SolenoidSpec& spec);
SpaceCurve build_curve(const CurveSpec& spec);

}  // namespace magreg::app
