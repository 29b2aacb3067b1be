#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "khlab/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Kelvin-Helmholtz vortex-sheet verification toolkit"};
    std::string config_path;
    app.add_option("-c,--config", config_path, "key = value configuration file");
    app.allow_extras();
    app.usage("khlab [COMMAND] [-c FILE] [--key value ...]");
    app.footer("COMMAND is one of dispersion, map, modes, pressure, evolve, functionals, illposedness, verify.\n"
               "Any configuration key can be given as --key value and overrides the file.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : khlab::exit_code::usage;
    }

    std::string text;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "khlab: cannot read config file " << config_path << "\n";
            return khlab::exit_code::usage;
        }
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
    }
    // A leading bare word is the command; everything else is key overrides.
    std::vector<std::string> extras = app.remaining();
    std::vector<std::string> overrides;
    if (!extras.empty() && !extras.front().starts_with("-")) {
        overrides = {"--command", extras.front()};
        extras.erase(extras.begin());
    }
    overrides.insert(overrides.end(), extras.begin(), extras.end());

    try {
        const khlab::RunConfig config = khlab::parse_config(text, overrides);
        return khlab::run(config, std::cout, std::cerr);
    } catch (const khlab::ConfigError& e) {
        std::cerr << "khlab: " << e.what() << "\n";
        return e.exit_code;
    }
}
