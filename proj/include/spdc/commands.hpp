#pragma once

#include <string>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

/// map, focus-scan, spectrum, brightness, optimize, modes, purity, oracle-check.
const std::vector<std::string>& subcommand_names();

/// Runs one subcommand and returns the complete CSV text. The comment header
/// carries the library version and the echoed configuration between the
/// "# --- config ---" and "# --- end config ---" lines.
/// Missing or inappropriate scan axes throw ConfigError.
std::string run_subcommand(const std::string& name, const RunConfig& config,
                           const ExecutionPolicy& policy = {});

/// Lines of `csv` between the config markers with the "# " prefix removed.
std::string extract_config(const std::string& csv);

}  // namespace spdc
