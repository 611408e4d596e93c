// magic.hpp
// Exact non-stabilizerness measures: discrete Wigner function and mana for
// odd prime q, stabilizer Renyi entropy M_n for qubits, and Choi-state
// construction on a doubled register.

#pragma once

#include <vector>

#include "msim/circuit.hpp"
#include "msim/dense.hpp"
#include "msim/state.hpp"
#include "msim/weyl.hpp"

namespace msim {

// Real Wigner coefficients over the q^{2N} phase-space points, indexed by the
// same per-site (z, x) digit order as WeylLabel::to_index.
struct WignerSpectrum {
    unsigned q = 3;
    unsigned n_sites = 1;
    std::vector<double> values;
    double max_imag_residue = 0.0;  // largest |imag| discarded when realizing

    double sum() const;
    double abs_sum() const;
    double min_value() const;
};

struct MagicOptions {
    // Phase-space enumeration cost is q^{3N}; 4 qutrits (6561 points) is the
    // default ceiling, 5-6 allowed behind the override.
    bool allow_large_systems = false;
    unsigned workers = 1;
};

// Dense T_label for odd q (the w^{-inv2 a a'} Z^a X^{a'} convention).  Qubit
// strings live in the tensor-core path; this dense form exists for oracles.
DenseOperator weyl_operator_dense(unsigned q, unsigned n_sites, const WeylLabel& label);

// A_b = q^{-N} T_b [sum_a T_a] T_b^dag; Hermitian, trace 1.
DenseOperator phase_point_operator(unsigned q, unsigned n_sites, const WeylLabel& b);

// W(u) = q^{-N} <psi|A_u|psi>, computed matrix-free: all Weyl expectation
// values are taken by strided string application, then the phase-space
// transform W(u) = q^{-2N} sum_a w^{sigma(u,a)} <T_a> is applied one site at
// a time.  No dense A_u is ever built.
WignerSpectrum wigner_function(const QuditState& state, const MagicOptions& opts = {});

// Mana = log2 sum_u |W(u)|; zero on stabilizer states; odd prime q only.
double mana(const QuditState& state, const MagicOptions& opts = {});
double mana(const WignerSpectrum& spectrum);

struct SreOptions {
    unsigned workers = 1;
    // Enumeration is over all 4^N Pauli strings; the hard cap keeps a typo'd
    // site count from requesting a week of CPU.
    unsigned max_sites = 12;
};

// Stabilizer Renyi entropy M_n (q = 2 only):
//   M_n = (1-n)^{-1} log2[ sum_P <psi|P|psi>^{2n} / 2^N ].
// The sum runs over shift masks a'; for each mask, every clock mask a is
// obtained at once by a Walsh-Hadamard transform of the overlap vector
// conj(psi)[k] psi[k ^ a'].  Accumulation is compensated and chunk-ordered,
// so results are identical at any worker count.
double stabilizer_renyi_entropy(const QuditState& state, unsigned n_order = 2,
                                const SreOptions& opts = {});

// |V> = (I (x) V)|I>, |I> = d^{-1/2} sum_i |i>|i>; the first register is the
// leading N sites, V acts on the trailing N.
QuditState choi_state(const Circuit& v);
QuditState choi_state(unsigned q, unsigned n_sites, const DenseOperator& v);

// M2 of the Choi state of a circuit; the quantity inverted by the OTOC
// fluctuation relation.
double choi_m2(const Circuit& v, const SreOptions& opts = {});

// All q^{2N} Weyl expectation values <T_a>, indexed by WeylLabel::to_index.
// Debug/export helper; O(q^{3N}).
std::vector<cplx> all_weyl_expectations(const QuditState& state);

} // namespace msim
