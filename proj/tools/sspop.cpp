#include "sspop/config.hpp"
#include "sspop/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sspop::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Size-structured population solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string cfl;
    for (const char* name : {"solve", "convergence", "discontinuity", "weakstar", "bifurcate", "charroots"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--cfl", cfl, "CFL policy (overrides flags.cfl_policy)")
            ->check(CLI::IsMember({"strict", "warn"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigFailure;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        sspop::RunConfig cfg = sspop::parse_config(read_file(config_path));
        if (sspop::to_string(cfg.command) != command)
            throw sspop::ConfigError("config is for '" + std::string(sspop::to_string(cfg.command)) +
                                     "', command line asks for '" + command + "'");
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!cfl.empty()) cfg.flags.cfl_policy = sspop::parse_cfl_policy(cfl);

        const auto files = sspop::execute(cfg, [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; });
        for (const auto& f : files) std::cout << (cfg.output_dir / f).string() << '\n';
        return kOk;
    } catch (const sspop::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const sspop::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigFailure;
    }
}
