// experiments.hpp
// Experiment drivers behind the CLI subcommands.  Each driver owns its master
// seed, derives every stream from it, writes deterministic CSV/JSON (and
// optionally SVG) into the output directory, and returns its numbers so the
// test suites can assert on them directly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msim/otoc.hpp"
#include "msim/stats.hpp"

namespace msim {

struct ExperimentConfig {
    unsigned q = 2;
    unsigned sites = 0;  // 0 = per-command default
    unsigned nt_min = 0;
    unsigned nt_max = 0;  // 0 = per-command default
    bool nt_max_set = false;
    unsigned samples = 50;
    unsigned repeats = 10;
    unsigned exact_instances = 10;
    unsigned cycles = 10;
    std::uint64_t seed = 12345;
    std::string mode;  // "" = per-command default
    std::optional<unsigned> a_site;
    std::optional<unsigned> b_site;
    std::string out_dir = "out";
    bool svg = false;
    bool large = false;
    unsigned workers = 1;
    // hamiltonian scan
    double j_coupling = 1.0;
    double h_field = 0.5;
    double total_time = 3.0;
    unsigned time_points = 30;

    nlohmann::json echo(const std::string& command) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct ScanRow {
    unsigned n_t = 0;
    double magic_mean = 0.0;  // mana (q=3) or M2 (q=2)
    double magic_std = 0.0;
    double delta_mean = 0.0;
    double delta_std = 0.0;
    double m2_from_delta_value = 0.0;
    double m2_err = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    LinearFit fit;
    double spearman = 0.0;
    std::vector<std::string> files;
};

// Qutrit scan: mana vs 1 - mean fluctuation across the doping grid
// (grid default 0..20), linear fit with the reference constants recorded as
// metadata.  Writes mana_scan.csv / mana_scan_summary.json [/ mana_scan.svg].
ScanResult cmd_mana_scan(const ExperimentConfig& config);

// Qubit scan: exact M2 vs -log2(mean fluctuation) (grid default 0..26), with
// the direct fluctuation->M2 estimate per point.  Writes sre_scan.* files.
ScanResult cmd_sre_scan(const ExperimentConfig& config);

struct HamiltonianScanOutput {
    std::vector<double> times;
    std::vector<double> m2_exact;
    std::vector<double> m2_estimate;
    double pearson = 0.0;
    std::vector<std::string> files;
};

// Transverse-field Ising protocol: 30 points on [0, total_time], exact Choi
// M2 vs the sandwich-sampled estimate.  Writes hamiltonian_scan.* files.
HamiltonianScanOutput cmd_hamiltonian_scan(const ExperimentConfig& config);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string details;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

// Machine-checkable verification bundle: exhaustive twirl mean, exact and
// sampled fluctuation<->M2 relation, reference-curve consistency, asymptote,
// bounds containment, inversion round trip, and error-propagation check.
// Writes verify.json.
VerifyReport cmd_verify(const ExperimentConfig& config);

} // namespace msim
