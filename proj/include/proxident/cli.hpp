#pragma once

#include "proxident/inertia.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxident::cli {

enum class Command { Run, Compare, Experiment, List, Plot };

/// Malformed, unknown, or conflicting arguments.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    Command command = Command::List;
    std::optional<std::string> scenario;
    std::vector<std::string> algorithms; // empty: command default
    std::uint64_t seed = 42;
    std::optional<std::size_t> budget;
    std::optional<double> gamma; // unset: 1/L
    InertiaSchedule schedule = InertiaSchedule::nesterov();
    std::optional<double> zeta;  // unset: ||T(x_0) - x_0||^2
    std::filesystem::path out;
    bool svg = false;
};

/// `nesterov`, `cd:<a>`, `liang:<p>,<q>`. Throws UsageError.
InertiaSchedule parse_schedule(const std::string& text);

/// Parses argv (argv[0] is the program name). `env_out` is the value of
/// PROXIDENT_OUT, used when --out is absent. Throws UsageError.
CliConfig parse_args(const std::vector<std::string>& argv, const std::optional<std::string>& env_out = std::nullopt);

std::string usage();

/// Executes a parsed configuration. Returns the process exit status.
int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + execute with usage errors mapped to exit status 2.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace proxident::cli
