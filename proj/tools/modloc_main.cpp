#include <iostream>

#include <CLI11.hpp>

#include "cli/cli.hpp"
#include "modloc/errors.hpp"

int main(int argc, char** argv) {
    namespace mc = modloc::cli;
    if (argc >= 2 && std::string(argv[1]) == "describe") {
        if (argc != 3) {
            std::cerr << "usage: modloc describe <mode>\n";
            return 1;
        }
        try {
            std::cout << mc::describe(argv[2]);
            return 0;
        } catch (const modloc::Error& e) {
            std::cerr << e.what() << '\n';
            return 1;
        }
    }

    CLI::App app{"modloc: modular localization and Fourier-Laplace bound checks"};
    std::string mode, config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    app.add_option("mode", mode, "tomita | localize | boundary | pws | hormander | epstein | support-estimate | cauchy")
        ->required();
    app.add_option("--config", config, "JSON run configuration")->required();
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "seed for randomized probes");
    app.add_option("--tol", tol, "override the primary tolerance");
    app.footer("modloc describe <mode> prints the checks and conventions of a mode.");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return mc::run_main(mode, config, out, seed, tol);
}
