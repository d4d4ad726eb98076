#pragma once

#include <filesystem>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

// Command-line frontend: JSON run configs, presets, output files and manifests.

namespace rydgate::cli {

using nlohmann::json;

enum class Format { Csv, Json };

struct RunContext {
    std::filesystem::path out_dir = ".";
    Format format = Format::Csv;
    int threads = 0;
    std::ostream* log = nullptr;  // progress and check reports; may be null
};

// Thrown for malformed configs; `what()` names the offending key path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& preset_names();
json preset(const std::string& name);  // throws ConfigError for unknown names

// Full default config for a command; every accepted key appears here.
json default_config(const std::string& command);

// defaults <- preset <- config file <- seed override, then checked for
// unknown keys and type mismatches.
json resolve_config(const std::string& command, const std::optional<std::string>& preset_name,
                    const std::optional<json>& file_config, const std::optional<std::uint64_t>& seed);

struct CommandResult {
    int exit_code = 0;
    json manifest;
};

// Runs a resolved config, writes outputs and manifest.json into ctx.out_dir.
CommandResult run_command(const std::string& command, const json& config, const RunContext& ctx);

std::string build_describe();

// Full CLI entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace rydgate::cli
