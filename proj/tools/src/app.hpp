#pragma once

namespace hwm::cli {

/// Full front-end: argument parsing, config validation, output locking,
/// command dispatch, manifest and exit-code mapping.
int run(int argc, char** argv);

} // namespace hwm::cli
