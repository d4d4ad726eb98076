#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rydgate/cli.hpp"
#include "rydgate/errors.hpp"

namespace rydgate::cli {

namespace {

json read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config file " + path);
    }
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg phase-gate simulator: dynamics, sweeps, design optimisation, noise and self-checks"};
    app.require_subcommand(1, 1);

    std::optional<std::string> config_path;
    std::optional<std::string> preset_name;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 0;

    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--preset", preset_name, "built-in configuration")->check(CLI::IsMember(preset_names()));
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--format", format, "grid/curve/trace format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--seed", seed, "RNG seed override");
        sub->add_option("--threads", threads, "worker threads (default: $RYD_THREADS, else all cores)")
            ->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        std::optional<json> file_config;
        if (config_path) {
            file_config = read_config_file(*config_path);
        }
        const json config = resolve_config(command, preset_name, file_config, seed);
        RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.format = format == "json" ? Format::Json : Format::Csv;
        ctx.threads = threads;
        ctx.log = &std::cout;
        const CommandResult r = run_command(command, config, ctx);
        return r.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace rydgate::cli
