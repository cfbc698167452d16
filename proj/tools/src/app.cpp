#include "app.hpp"

#include "artifacts.hpp"
#include "commands.hpp"
#include "config.hpp"

#include "hwm/error.hpp"

#include <CLI11.hpp>

#include <iostream>

#ifndef HWM_VERSION
#define HWM_VERSION "unknown"
#endif

namespace hwm::cli {

namespace {

int dispatch(const Command& cmd, const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
             std::optional<std::uint64_t> seed) {
    const Config config = Config::load(config_path);
    config.validate(cmd.schema);

    OutputDir out(out_dir);
    const std::string started = utc_timestamp();
    int code = ExitCode::ok;
    std::string error;
    try {
        RunContext ctx{config, out, seed};
        code = cmd.run(ctx);
    } catch (const DomainError& e) {
        code = ExitCode::domain;
        error = e.what();
    } catch (const GuardError& e) {
        code = ExitCode::guard;
        error = e.what();
    } catch (const NumericalError& e) {
        code = ExitCode::numerical;
        error = e.what();
    }

    nlohmann::ordered_json manifest{{"command", cmd.name},
                                    {"version", HWM_VERSION},
                                    {"config_path", config_path.string()},
                                    {"config", config.echo()},
                                    {"seed", seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr)},
                                    {"started", started},
                                    {"finished", utc_timestamp()},
                                    {"exit_code", code}};
    if (!error.empty()) manifest["error"] = error;
    manifest["files"] = out.file_listing();
    out.write_json(OutputDir::manifest_name, manifest);
    if (!error.empty()) std::cerr << "hwm " << cmd.name << ": " << error << "\n";
    return code;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Half-wave maps experiments"};
    app.set_version_flag("--version", HWM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    for (const auto& cmd : commands()) {
        auto* sub = app.add_subcommand(cmd.name, cmd.summary);
        sub->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (default: hwm-out/<command>)");
        sub->add_option("--seed", seed, "seed for perturbed initial data (overrides [initial] seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ExitCode::ok : ExitCode::usage;
    }

    const Command* cmd = nullptr;
    for (const auto* sub : app.get_subcommands()) cmd = find_command(sub->get_name());
    if (out_dir.empty()) out_dir = "hwm-out/" + cmd->name;

    try {
        return dispatch(*cmd, config_path, out_dir, seed);
    } catch (const GuardError& e) {
        std::cerr << "hwm " << cmd->name << ": " << e.what() << "\n";
        return ExitCode::guard;
    } catch (const std::invalid_argument& e) {
        // Config parse and validation failures, before any output exists.
        std::cerr << "hwm " << cmd->name << ": " << e.what() << "\n";
        return ExitCode::domain;
    } catch (const std::exception& e) {
        std::cerr << "hwm " << cmd->name << ": " << e.what() << "\n";
        return ExitCode::usage;
    }
}

} // namespace hwm::cli
