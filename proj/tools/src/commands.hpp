#pragma once

#include "artifacts.hpp"
#include "config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hwm::cli {

struct RunContext {
    const Config& config;
    OutputDir& out;
    std::optional<std::uint64_t> seed;
};

/// Exit codes shared by the commands and the front-end.
enum ExitCode : int { ok = 0, usage = 1, domain = 2, guard = 3, numerical = 4 };

struct Command {
    std::string name;
    std::string summary;
    Schema schema;
    /// Writes artifacts and returns the exit code; errors propagate as exceptions.
    int (*run)(RunContext&);
};

const std::vector<Command>& commands();
const Command* find_command(const std::string& name);

} // namespace hwm::cli
