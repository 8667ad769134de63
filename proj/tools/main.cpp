#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cli.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = betacoal::cli;
  CLI::App app{"Beta-coalescent functionals: simulation, exact moments and limit checks"};
  std::string command;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  cli::Options options;
  app.add_option("command", command, "simulate | exact-moments | limit-check | branch-identity | "
                                     "expansion-check | coefficients")
      ->required()
      ->check(CLI::IsMember(cli::command_names()));
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config");
  app.add_option("--workers", options.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_path, "output CSV path (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }
  if (*seed_opt) options.seed = seed;

  cli::Json config = cli::Json::object();
  try {
    if (!config_path.empty()) config = cli::parse_config(read_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfig;
  }

  if (out_path.empty()) return cli::run(command, config, options, std::cout, std::cerr);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "config error: cannot open output '" << out_path << "'\n";
    return cli::kExitConfig;
  }
  return cli::run(command, config, options, out, std::cerr);
}
