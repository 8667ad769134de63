#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace betacoal::cli {

using Json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitResource = 4;

struct Options {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned workers = 1;
};

/// Command names accepted by run().
const std::vector<std::string>& command_names();

// Each command validates `config` (unknown keys are config errors), writes CSV
// with a header to `out` and progress notes to `log`.
void cmd_simulate(const Json& config, const Options& options, std::ostream& out, std::ostream& log);
void cmd_exact_moments(const Json& config, const Options& options, std::ostream& out,
                       std::ostream& log);
void cmd_limit_check(const Json& config, const Options& options, std::ostream& out,
                     std::ostream& log);
void cmd_branch_identity(const Json& config, const Options& options, std::ostream& out,
                         std::ostream& log);
void cmd_expansion_check(const Json& config, const Options& options, std::ostream& out,
                         std::ostream& log);
void cmd_coefficients(const Json& config, const Options& options, std::ostream& out,
                      std::ostream& log);

/// Dispatches `command`, mapping failures to exit codes: 2 config, 3 regime,
/// 4 resource, 1 anything else. Diagnostics go to `log`.
int run(const std::string& command, const Json& config, const Options& options, std::ostream& out,
        std::ostream& log);

/// Parses JSON text; malformed input is a config error.
Json parse_config(const std::string& text);

}  // namespace betacoal::cli
