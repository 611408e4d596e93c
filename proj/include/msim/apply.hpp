// apply.hpp
// Strided gate application kernels.  No q^N x q^N matrix is ever materialized;
// a k-site gate touches q^k amplitudes per stride group.

#pragma once

#include <functional>

#include "msim/dense.hpp"
#include "msim/state.hpp"

namespace msim {

// One-site gate (dim q) on `site`.  Throws on dimension mismatch, site out of
// range, or (when check_unitary is set) a non-unitary gate.
void apply_single_qudit_gate(QuditState& state, const DenseOperator& gate,
                             unsigned site, bool check_unitary = false);

// Unchecked raw-buffer kernels for loops that sweep the same gate over many
// state buffers (matrix columns); amps must hold q^n_sites entries.
void apply_single_qudit_gate_raw(cplx* amps, unsigned q, unsigned n_sites,
                                 const DenseOperator& gate, unsigned site);
void apply_two_qudit_gate_raw(cplx* amps, unsigned q, unsigned n_sites,
                              const DenseOperator& gate, unsigned control,
                              unsigned target);

// Two-site gate (dim q^2) on the ordered pair (control, target); the gate
// matrix is indexed by digit_control * q + digit_target.
void apply_two_qudit_gate(QuditState& state, const DenseOperator& gate,
                          unsigned control, unsigned target,
                          bool check_unitary = false);

// Full-register dense operator (dim q^N) as a matrix-vector product.
void apply_dense_full(QuditState& state, const DenseOperator& op);

// Dense operator of dim q^k acting on the trailing (least significant) k
// sites of the state.  Used for Choi-state construction.
void apply_dense_to_low_register(QuditState& state, const DenseOperator& op,
                                 unsigned k_sites);

// Builds the dense matrix of a linear action by applying it to every basis
// state: column j = apply_fn(|j>).  Capped at kDenseCap.
DenseOperator operator_from_circuit_action(
    const std::function<QuditState(const QuditState&)>& apply_fn,
    unsigned q, unsigned n_sites);

} // namespace msim
