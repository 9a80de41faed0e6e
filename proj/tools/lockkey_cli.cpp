// lockkey: build and verify lock/key quartets of electro-neutral charge
// distributions from a config file.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lockkey/app.hpp"
#include "lockkey/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Electro-neutral lock/key charge distributions"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::string dump_operator;
  std::string dump_fields;
  std::uint64_t seed = 1;

  const std::vector<std::string> names(std::begin(lockkey::kSubcommands),
                                       std::end(lockkey::kSubcommands));
  app.add_option("subcommand", subcommand, "spectrum | construct | verify | scan-size | "
                                           "scan-alpha | oracle-check")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "Config file (section.key = value)")->required();
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--dump-operator", dump_operator, "Write the operator matrix as CSV");
  app.add_option("--dump-fields", dump_fields, "Write the quartet fields as CSV into DIR");
  app.add_option("--seed", seed, "Seed for oracle-check random fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lockkey::kExitUsage;
  }

  lockkey::RunConfig config;
  try {
    config = lockkey::load_config(config_path);
  } catch (const lockkey::ConfigError& e) {
    std::cerr << "lockkey: " << e.what() << "\n";
    return lockkey::kExitUsage;
  }

  lockkey::CliOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (!dump_operator.empty()) options.dump_operator = dump_operator;
  if (!dump_fields.empty()) options.dump_fields = dump_fields;
  options.seed = seed;

  const lockkey::RunReport report = lockkey::run_subcommand(subcommand, config, options);
  std::cout << report.to_json(config).dump(2) << "\n";
  if (!report.message.empty()) {
    std::cerr << "lockkey " << subcommand << ": " << report.message << "\n";
  }
  return report.exit_code;
}
