// otoc.hpp
// Exact out-of-time-order correlators, randomized sampling of their
// fluctuation over Clifford dressings, inversion of the fluctuation to an
// M2 estimate with propagated errors, and the analytic reference curves for
// t-doped ensembles.
//
// Conventions: the butterfly operator A is the shift X on a_site, the probe B
// is the clock Z on b_site (defaults: a = n_sites-1, b = 1, or b = 0 when
// only two sites exist).  OTOC(U) = Re[(1/d) tr(U^dag A U B U^dag A U B)].

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msim/circuit.hpp"
#include "msim/dense.hpp"
#include "msim/rng.hpp"

namespace msim {

enum class SamplerMode { kCliffordCircuit, kPauliTwirl };

std::string to_string(SamplerMode mode);
SamplerMode sampler_mode_from_string(const std::string& name);

struct OtocSampleSet {
    std::vector<double> values;
    SamplerMode mode = SamplerMode::kCliffordCircuit;
    std::uint64_t master_seed = 0;
    unsigned q = 2;
    unsigned n_sites = 2;
    unsigned a_site = 0;
    unsigned b_site = 0;

    std::size_t n_samples() const { return values.size(); }
};

struct DeltaEstimate {
    double mean_otoc = 0.0;
    double delta = 0.0;          // plug-in (population) variance of the samples
    double delta_std_err = 0.0;  // bootstrap standard error of delta
    double m2_estimate = 0.0;    // Lemma-style inversion; NaN if delta below floor
    double m2_err = 0.0;
    std::size_t n_samples = 0;
};

struct OtocOptions {
    unsigned clifford_depth = 10;          // cycles per dressing block
    unsigned workers = 1;
    unsigned bootstrap_resamples = 200;
    std::optional<unsigned> a_site;
    std::optional<unsigned> b_site;
    // Above this dimension the exact basis sweep is replaced by an unbiased
    // random-phase trace estimator with the given target standard error.
    std::size_t exact_trace_max_dim = 1024;
    double trace_target_std_err = 1e-3;
    std::size_t trace_max_probes = 4096;
};

std::pair<unsigned, unsigned> default_butterfly_sites(unsigned n_sites);

// Exact OTOC of a circuit: the eight-stage operator chain applied to every
// basis state, cost d x circuit cost, no dense matrix.  Throws above the
// exact-trace budget.  For Clifford-only qubit circuits the trace is checked
// to be real within 1e-8.
double otoc_exact(const Circuit& u, unsigned a_site, unsigned b_site,
                  unsigned workers = 1);

// Draws n_samples OTOC instances around the fixed unitary v.
//   kCliffordCircuit: sample k conjugates A and B by fresh depth-M Clifford
//     blocks C1, C2 drawn from stream (master_seed, "otoc-sample", k); the
//     value equals OTOC(C1 v C2).
//   kPauliTwirl: sample k draws uniform non-identity Weyl strings P, P' from
//     the same stream and evaluates Re[(1/d) tr(v^dag P v P' v^dag P v P')],
//     realizing the exact Clifford average without building Cliffords.
OtocSampleSet sample_otoc(const Circuit& v, std::size_t n_samples,
                          SamplerMode mode, std::uint64_t master_seed,
                          const OtocOptions& opts = {});

// Same sampler around an explicitly given unitary (used for Hamiltonian
// evolution blocks); dense path only, so dim must be within the trace budget.
OtocSampleSet sample_otoc_dense(unsigned q, unsigned n_sites,
                                const DenseOperator& v, std::size_t n_samples,
                                SamplerMode mode, std::uint64_t master_seed,
                                const OtocOptions& opts = {});

// Statistics of a sample set: plug-in variance, seeded bootstrap error, and
// the M2 inversion at dimension q^n_sites.
DeltaEstimate delta_otoc(const OtocSampleSet& samples,
                         unsigned bootstrap_resamples = 200);

// Exact first two moments over every non-identity Weyl pair (no sampling).
struct TwirlMoments {
    double mean = 0.0;
    double delta = 0.0;
};
TwirlMoments exhaustive_pauli_twirl(const Circuit& v, unsigned workers = 1);

// --- fluctuation <-> M2 relation -----------------------------------------
//
// E_C delta_OTOC = (d^2/(d^2-1))^2 2^{-M2} - 2d^2/(d^2-1)^2

double eq_fluctuation_forward(double m2, std::size_t d);

// Exact algebraic inverse: M2 = -log2[(delta + 2d^2/(d^2-1)^2) ((d^2-1)/d^2)^2].
// Returns NaN when the argument is non-positive (delta below the theoretical
// floor, i.e. sampling noise outside the model).
double m2_from_delta(double delta, std::size_t d);

// Propagated error |dM2| = delta_err / ((delta_mean + beta) ln 2),
// beta = 2d^2/(d^2-1)^2.
double m2_error(double delta_err, double delta_mean, std::size_t d);

// --- analytic t-doped reference curves ------------------------------------

// Printed coefficient pair (3d^2 -+ 3d - 4) / (5 (d^2 - 1)).  Kept as a
// reference value; the ensemble curves below use tdoped_contraction_factors.
std::pair<double, double> f_pm(std::size_t d);

// Per-T-gate contraction pair (3d^2 -+ 3d - 4) / (4 (d^2 - 1)).  This
// denominator is fixed by two exact endpoints: the ensemble average of
// 2^{-M2} of the doped Choi state equals 3/4 exactly at t = 1 (one T gate on
// half a maximally entangled register), and the large-d decay is (3/4)^t.
std::pair<double, double> tdoped_contraction_factors(std::size_t d);

// Ensemble-average OTOC fluctuation of a t-doped circuit at dimension d:
//   delta(t) = d^4/(d^2-1)^2 * B(t) - 2d^2/(d^2-1)^2
// where B(t) is the three-branch contraction bracket; B(0) = 1 exactly, so
// delta(0) = d^2(d^2-2)/(d^2-1)^2.  Requires d > 3 (pole at d = 3).
double expected_delta_tdoped(std::size_t d, unsigned t);

// Large-d limit (3/4)^t.
double asymptotic_delta(unsigned t);

// Interval for the ensemble-mean M2 of the doped output state:
//   [-log2((4 + (d-1) f+^t)/(3 + d)), min(t, n_sites - 1)].
std::pair<double, double> m2_bounds_tdoped(std::size_t d, unsigned n_sites,
                                           unsigned t);

} // namespace msim
