#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ptcop::cli {

// Exit codes of the batch front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;

struct RunOptions {
    std::string subcommand;  // simulate | pt | empirical-pt | functional | verify | quantile
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> output_override;
    bool quiet = false;
};

// Execute one subcommand. Returns an exit code; never throws. Diagnostics and
// progress lines go to `log` (suppressed by quiet except for errors).
int run(const RunOptions& options, std::ostream& log);

}  // namespace ptcop::cli
