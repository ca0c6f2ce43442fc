// spdc-focal: CSV artifacts for shifted-focus SPDC coupling studies.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "spdc/commands.hpp"
#include "spdc/csv.hpp"
#include "spdc/error.hpp"
#include "spdc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Shifted-focus SPDC coupling amplitudes"};
  app.set_version_flag("--version", spdc::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  unsigned threads = 0;
  std::string normalize;

  for (const auto& name : spdc::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, "write the " + name + " CSV");
    sub->add_option("--config", config_path, "YAML configuration file")->required();
    sub->add_option("--out", out_path, "output CSV (stdout when omitted)");
    sub->add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
    sub->add_option("--normalize", normalize, "override the normalization mode")
        ->check(CLI::IsMember({"max", "none"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    spdc::RunConfig config = spdc::load_config(config_path);
    if (normalize == "max") config.normalize = spdc::Normalize::max;
    if (normalize == "none") config.normalize = spdc::Normalize::none;
    const std::string csv = spdc::run_subcommand(command, config, spdc::ExecutionPolicy{threads});
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      spdc::write_file_atomic(out_path, csv);
    }
  } catch (const spdc::ConfigError& e) {
    std::fprintf(stderr, "spdc-focal: configuration error: %s\n", e.what());
    return 2;
  } catch (const spdc::Error& e) {
    std::fprintf(stderr, "spdc-focal: numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spdc-focal: %s\n", e.what());
    return 1;
  }
  return 0;
}
