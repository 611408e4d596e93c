// magicsim: experiment front end.
// Subcommands: mana-scan, sre-scan, hamiltonian-scan, verify.
// Exit codes: 0 success, 1 usage or runtime error, 2 verification failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "msim/experiments.hpp"
#include "msim/io.hpp"

namespace {

// --config JSON supplies defaults; explicit flags override it.
msim::ExperimentConfig load_config_defaults(int argc, char** argv) {
    msim::ExperimentConfig cfg;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot open config file ") + argv[i + 1]);
            nlohmann::json j;
            in >> j;
            cfg = msim::config_from_json(j, cfg);
        }
    }
    return cfg;
}

void add_common_options(CLI::App* cmd, msim::ExperimentConfig& cfg,
                        std::string& config_path, unsigned& nt_max_flag) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--q", cfg.q, "local dimension");
    cmd->add_option("--sites", cfg.sites, "qudit count (0 = command default)");
    cmd->add_option("--nt-min", cfg.nt_min, "smallest T-gate count");
    cmd->add_option("--nt-max", nt_max_flag, "largest T-gate count");
    cmd->add_option("--samples", cfg.samples, "OTOC samples per repetition");
    cmd->add_option("--repeats", cfg.repeats, "repetitions for error bars");
    cmd->add_option("--exact-instances", cfg.exact_instances,
                    "circuit instances for the exact monotone");
    cmd->add_option("--cycles", cfg.cycles, "Clifford cycles per block");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--mode", cfg.mode, "sampler mode: clifford-circuit | pauli-twirl")
        ->check(CLI::IsMember({"", "clifford-circuit", "pauli-twirl"}));
    cmd->add_option("--a-site", [&cfg](const std::vector<std::string>& v) {
            cfg.a_site = static_cast<unsigned>(std::stoul(v[0]));
            return true;
        }, "butterfly (X) site override");
    cmd->add_option("--b-site", [&cfg](const std::vector<std::string>& v) {
            cfg.b_site = static_cast<unsigned>(std::stoul(v[0]));
            return true;
        }, "probe (Z) site override");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_flag("--svg", cfg.svg, "also emit SVG plots");
    cmd->add_flag("--large", cfg.large, "allow large system sizes (slow)");
    cmd->add_option("--workers", cfg.workers, "worker threads");
}

} // namespace

int main(int argc, char** argv) {
    msim::ExperimentConfig cfg;
    std::string config_path;
    unsigned nt_max_flag = 0;

    CLI::App app{"magic monotones and OTOC-fluctuation sampling"};
    app.require_subcommand(1);

    CLI::App* mana = app.add_subcommand("mana-scan", "qutrit mana vs OTOC fluctuation");
    CLI::App* sre = app.add_subcommand("sre-scan", "qubit M2 vs OTOC fluctuation");
    CLI::App* ham =
        app.add_subcommand("hamiltonian-scan", "Ising-evolution magic protocol");
    CLI::App* verify = app.add_subcommand("verify", "formula and sampler verification");

    try {
        cfg = load_config_defaults(argc, argv);

        for (CLI::App* cmd : {mana, sre, ham, verify})
            add_common_options(cmd, cfg, config_path, nt_max_flag);
        ham->add_option("--j-coupling", cfg.j_coupling, "Ising ZZ coupling J");
        ham->add_option("--h-field", cfg.h_field, "transverse field h");
        ham->add_option("--total-time", cfg.total_time, "scan end time");
        ham->add_option("--time-points", cfg.time_points, "number of time points");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? 0 : 1;
        }
        if (mana->count("--nt-max") || sre->count("--nt-max") ||
            ham->count("--nt-max") || verify->count("--nt-max")) {
            cfg.nt_max = nt_max_flag;
            cfg.nt_max_set = true;
        }
        // mana-scan operates on qutrits unless told otherwise
        if (mana->parsed() && !mana->count("--q") && cfg.q == 2) cfg.q = 3;

        const auto t0 = std::chrono::steady_clock::now();
        std::string command;
        int exit_code = 0;
        if (mana->parsed()) {
            command = "mana-scan";
            const msim::ScanResult r = msim::cmd_mana_scan(cfg);
            std::printf("mana-scan: %zu grid points, fit slope %.4f +- %.4f, "
                        "intercept %.4f +- %.4f, spearman %.4f\n",
                        r.rows.size(), r.fit.slope, r.fit.slope_err, r.fit.intercept,
                        r.fit.intercept_err, r.spearman);
            for (const auto& f : r.files) std::printf("  wrote %s\n", f.c_str());
        } else if (sre->parsed()) {
            command = "sre-scan";
            const msim::ScanResult r = msim::cmd_sre_scan(cfg);
            std::printf("sre-scan: %zu grid points, fit slope %.4f +- %.4f, "
                        "intercept %.4f +- %.4f, spearman %.4f\n",
                        r.rows.size(), r.fit.slope, r.fit.slope_err, r.fit.intercept,
                        r.fit.intercept_err, r.spearman);
            for (const auto& f : r.files) std::printf("  wrote %s\n", f.c_str());
        } else if (ham->parsed()) {
            command = "hamiltonian-scan";
            const msim::HamiltonianScanOutput r = msim::cmd_hamiltonian_scan(cfg);
            std::printf("hamiltonian-scan: %zu time points, pearson(estimate, exact) = %.4f\n",
                        r.times.size(), r.pearson);
            for (const auto& f : r.files) std::printf("  wrote %s\n", f.c_str());
        } else if (verify->parsed()) {
            command = "verify";
            const msim::VerifyReport r = msim::cmd_verify(cfg);
            for (const auto& c : r.checks)
                std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            c.details.c_str());
            if (!r.all_pass()) exit_code = 2;
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        char line[128];
        std::snprintf(line, sizeof line, "%s finished in %.2f s", command.c_str(), secs);
        msim::append_run_log(cfg.out_dir, line);
        return exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
