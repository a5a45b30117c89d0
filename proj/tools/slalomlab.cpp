#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "slalomlab/cli.hpp"

int main(int argc, char** argv) {
  using namespace slalomlab;
  CLI::App app{"Finite verification tools for slaloms, the Omega algebra and its forcing maps"};
  std::string command, config_path, out_path;
  std::optional<unsigned> depth, horizon;
  std::optional<std::uint64_t> seed;

  std::string names;
  for (const auto& s : subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", command, "One of: " + names)->required();
  app.add_option("--config", config_path, "Config file with [family.<name>] and [run] sections")->required();
  app.add_option("--depth", depth, "Overrides [run] depth");
  app.add_option("--horizon", horizon, "Overrides [run] horizon");
  app.add_option("--seed", seed, "Overrides [run] seed");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  Config config;
  try {
    config = load_config(config_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const RunResult r = run_command(command, config, RunOptions{depth, horizon, seed});
  if (r.exit_code == kExitInputError) {
    std::cerr << "error: " << r.error << "\n";
    return r.exit_code;
  }
  const std::string text = report_text(r.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!(out << text)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInputError;
    }
  }
  if (r.exit_code == kExitFinding) std::cerr << r.report["findings"].size() << " finding(s)\n";
  return r.exit_code;
}
