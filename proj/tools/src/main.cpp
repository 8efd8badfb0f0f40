#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"simplexdyn: replicator dynamics and Brownian motion on the Aitchison simplex"};
  app.set_version_flag("--version", simplexdyn::cli::version_string());
  std::string command, config, out = ".";
  app.add_option("command", command, "matrix-analyze | simulate | verify | ternary")
      ->required()
      ->check(CLI::IsMember({"matrix-analyze", "simulate", "verify", "ternary"}));
  app.add_option("--config", config, "JSON config file")->required();
  app.add_option("--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : simplexdyn::cli::kParse;
  }
  return simplexdyn::cli::run_command(command, config, out, std::cout, std::cerr);
}
