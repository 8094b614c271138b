#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "psalink/commands.hpp"

namespace {

int default_threads() {
    if (const char* env = std::getenv("PSALINK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psalink: capacity limits of multispan PSA-amplified optical links"};
    app.require_subcommand(1);

    std::string config_path, format = "table", output_path;
    bool no_metadata = false;
    int threads = default_threads();

    app.add_option("--config", config_path, "path to the INI-style config file");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--output", output_path, "write output to this file instead of stdout");
    app.add_flag("--no-metadata", no_metadata, "suppress the metadata comment block");
    app.add_option("--threads", threads, "worker threads (default: PSALINK_THREADS or all cores)");

    CLI::App* c_cap = app.add_subcommand("capacity", "evaluate one link configuration");
    CLI::App* c_sweep = app.add_subcommand("sweep", "evaluate a length sweep, CSV-friendly");
    CLI::App* c_opt = app.add_subcommand("optimize", "optimize amplifier gains/positions");
    CLI::App* c_val = app.add_subcommand("validate", "run the cross-oracle check suite");
    for (CLI::App* sub : {c_cap, c_sweep, c_opt, c_val})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : psalink::exit_usage;
    }

    psalink::Config cfg;
    const bool needs_config = !c_val->parsed();
    if (config_path.empty() && needs_config) {
        std::cerr << "usage error: --config is required for this subcommand\n";
        return psalink::exit_usage;
    }
    if (!config_path.empty()) {
        try {
            cfg = psalink::Config::parse_file(config_path);
        } catch (const psalink::config_error& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return psalink::exit_usage;
        }
    }

    psalink::OutputOptions opts;
    opts.format = format;
    opts.metadata = !no_metadata;
    opts.threads = threads;

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!output_path.empty()) {
        file.open(output_path);
        if (!file) {
            std::cerr << "cannot open output file: " << output_path << "\n";
            return psalink::exit_usage;
        }
        os = &file;
    }

    if (c_cap->parsed())
        return psalink::cmd_capacity(cfg, opts, *os, std::cerr);
    if (c_sweep->parsed())
        return psalink::cmd_sweep(cfg, opts, *os, std::cerr);
    if (c_opt->parsed())
        return psalink::cmd_optimize(cfg, opts, *os, std::cerr);
    return psalink::cmd_validate(cfg, opts, *os, std::cerr);
}
