#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qkdv/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact quantum KdV hierarchy: tables, spectra, verifiers"};
    app.require_subcommand(1);

    qkdv::RunConfig cfg;
    std::string configFile;
    app.add_option("--config", configFile, "load a run configuration (JSON)")
        ->check(CLI::ExistingFile);
    app.add_option("--kmax", cfg.kMax, "highest hierarchy level");
    app.add_option("--jmax", cfg.jMax, "highest dispersive order kept in the tables");
    app.add_option("--nmax", cfg.nMax, "highest partition degree");
    app.add_option("--mmax", cfg.mMax, "highest perturbative order");
    app.add_option("--kset", cfg.kSet, "levels used to resolve degeneracies");
    app.add_option("--cache", cfg.cacheDir, "cache directory")->envname("QKDV_CACHE");
    app.add_option("--format", cfg.format, "output format: json or csv");
    app.add_option("--jobs", cfg.jobs, "parallelism degree");
    app.add_option("--qtrunc", cfg.qtrunc, "q-series truncation order");

    auto* tables = app.add_subcommand("tables", "compute and cache the hierarchy tables");
    auto* spectrum = app.add_subcommand("spectrum", "diagonalize the degree blocks");
    auto* verify = app.add_subcommand("verify", "run a verifier");
    std::string which;
    verify->add_option("which", which, "thm1|thm2|commute|oracle|quasimod|appendix")->required();
    auto* hodge = app.add_subcommand("hodge", "tabulate double Hodge values");
    int gMax = 4;
    hodge->add_option("--gmax", gMax, "highest genus");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!configFile.empty()) {
            std::ifstream in(configFile);
            qkdv::RunConfig loaded = qkdv::RunConfig::fromJson(nlohmann::json::parse(in));
            // explicit flags win over the file
            if (app.count("--kmax") == 0) cfg.kMax = loaded.kMax;
            if (app.count("--jmax") == 0) cfg.jMax = loaded.jMax;
            if (app.count("--nmax") == 0) cfg.nMax = loaded.nMax;
            if (app.count("--mmax") == 0) cfg.mMax = loaded.mMax;
            if (app.count("--kset") == 0) cfg.kSet = loaded.kSet;
            if (app.count("--cache") == 0) cfg.cacheDir = loaded.cacheDir;
            if (app.count("--format") == 0) cfg.format = loaded.format;
            if (app.count("--jobs") == 0) cfg.jobs = loaded.jobs;
            if (app.count("--qtrunc") == 0) cfg.qtrunc = loaded.qtrunc;
        }
        if (tables->parsed()) return qkdv::cmdTables(cfg, std::cout);
        if (spectrum->parsed()) return qkdv::cmdSpectrum(cfg, std::cout);
        if (verify->parsed()) return qkdv::cmdVerify(cfg, which, std::cout);
        if (hodge->parsed()) return qkdv::cmdHodge(cfg, gMax, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
