// hamiltonian.hpp
// Transverse-field Ising chain, exact time-evolution unitaries, and the
// Clifford-sandwich scan that compares sampled OTOC fluctuations against the
// exact M2 of the evolution's Choi state.

#pragma once

#include <cstdint>
#include <vector>

#include "msim/dense.hpp"
#include "msim/otoc.hpp"

namespace msim {

struct TfimParams {
    unsigned n_sites = 5;
    double j_coupling = 1.0;
    double h_field = 0.5;
    // open boundary: n_sites - 1 ZZ bonds
};

struct EvolutionScanResult {
    std::vector<double> times;
    std::vector<double> delta_series;
    std::vector<double> delta_err_series;
    std::vector<double> m2_exact_series;
    std::vector<double> m2_per_site_exact_series;
    std::vector<double> m2_estimated_series;
    std::vector<double> m2_err_series;
};

struct EvolutionScanOptions {
    std::size_t n_samples = 50;
    unsigned clifford_depth = 10;
    SamplerMode mode = SamplerMode::kCliffordCircuit;
    unsigned workers = 1;
    unsigned bootstrap_resamples = 200;
};

// H = -J sum_i Z_i Z_{i+1} - h sum_i X_i on an open chain (q = 2).
DenseOperator build_tfim(const TfimParams& params);

// U = exp(-i H t) by Hermitian eigendecomposition; exact at desk scale, no
// Trotter error.
DenseOperator evolution_unitary(const DenseOperator& hamiltonian, double time);

// Uniform time grid of n_points on [0, t_max].
std::vector<double> uniform_times(double t_max, unsigned n_points);

// For each time t: the exact reference M2(choi(U_H(t))) (Clifford dressing
// blocks cannot change it), and the sampled route: OTOC fluctuation over
// fresh Clifford sandwiches around the fixed U_H(t), inverted to an M2
// estimate with propagated error.  Streams are keyed (master_seed, time index).
EvolutionScanResult magic_evolution_scan(const TfimParams& params,
                                         const std::vector<double>& times,
                                         std::uint64_t master_seed,
                                         const EvolutionScanOptions& opts = {});

} // namespace msim
