#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "simplexdyn/simplexdyn.hpp"

namespace simplexdyn::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kDimension = 3, kSimulation = 4, kVerify = 5 };

// Thrown for malformed configs or matrix files (exit 2) and bad dimensions (exit 3).
struct ConfigError : std::runtime_error {
  ConfigError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

struct RunContext {
  nlohmann::json config;
  std::filesystem::path config_dir;
  std::filesystem::path out_dir;
  std::string config_hash;
  std::uint64_t seed = 0;
};

const char* version_string();
std::string fnv1a_hex(const std::string& bytes);

RunContext load_context(const std::filesystem::path& config_file, const std::filesystem::path& out_dir,
                        bool seed_required);
PayoffMatrix parse_matrix_json(const nlohmann::json& j);
PayoffMatrix load_matrix(const RunContext& ctx, const std::string& key);

nlohmann::json to_json(const TestReport& r);

int cmd_matrix_analyze(const RunContext& ctx, std::ostream& log);
int cmd_simulate(const RunContext& ctx, std::ostream& log);
int cmd_verify(const RunContext& ctx, std::ostream& log);
int cmd_ternary(const RunContext& ctx, std::ostream& log);

// Full dispatch used by main: parses nothing but runs `command` with error handling.
int run_command(const std::string& command, const std::filesystem::path& config_file,
                const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

}  // namespace simplexdyn::cli
