#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "irclab/errors.hpp"
#include "irclab/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"irclab: capacity analysis for the strong-interference relay channel"};
    std::string config_path;
    std::string out_path = "-";
    std::uint64_t seed = 1;
    bool trace = false;
    app.add_option("--config", config_path, "experiment configuration file")->required();
    app.add_option("--out", out_path, "output CSV path, '-' for stdout");
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--trace", trace, "print per-slot level diagrams to stdout");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 2;
        }
        std::stringstream text;
        text << in.rdbuf();
        const irclab::cli::RunConfig cfg = irclab::cli::parse_config(text.str());

        std::ostringstream csv;
        irclab::cli::run(cfg, csv, seed, trace ? &std::cout : nullptr);

        if (out_path == "-") {
            std::cout << csv.str();
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return 2;
            }
            out << csv.str();
        }
        return 0;
    } catch (const irclab::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const irclab::unsupported_regime_error& e) {
        std::cerr << "unsupported regime: " << e.what()
                  << " (capacity target " << e.target_bits << " bits, layout reaches "
                  << e.best_bits << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
