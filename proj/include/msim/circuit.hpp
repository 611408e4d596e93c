// circuit.hpp
// Circuit representation, seeded random construction of Clifford blocks and
// t-doped circuits, sandwich assembly, application, and JSON serialization.
//
// The op list is time-ordered: ops[0] acts first.  sandwich(c1, v, c2) stores
// c2's ops first, so the assembled circuit is the operator product C1 V C2
// (rightmost factor acts first).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msim/dense.hpp"
#include "msim/rng.hpp"
#include "msim/state.hpp"

namespace msim {

struct GateOp {
    std::string gate;
    std::vector<unsigned> targets;

    bool operator==(const GateOp&) const = default;
};

struct CircuitMeta {
    std::uint64_t seed = 0;
    unsigned n_t = 0;
    unsigned cycles_per_block = 0;

    bool operator==(const CircuitMeta&) const = default;
};

struct Circuit {
    unsigned q = 2;
    unsigned n_sites = 1;
    CircuitMeta meta;
    std::vector<GateOp> ops;

    bool operator==(const Circuit&) const = default;

    unsigned count_gates(const std::string& name) const;
};

// One block of M random Clifford cycles: per cycle, a uniform draw from
// {H,S,X,Y,Z,I} on every site followed by two entangling gates (CNOT/CSUM) on
// independently drawn ordered pairs of distinct sites.
Circuit build_clifford_block(unsigned q, unsigned n_sites, unsigned cycles,
                             RngStream& rng);

// n_t repetitions of [Clifford block, T on a random site]; n_t = 0 yields a
// single Clifford block so the undoped data point is still a scrambled
// circuit.  meta.seed is the caller-supplied stream seed recorded for
// provenance, meta.n_t the doping count.
Circuit build_tdoped_circuit(unsigned q, unsigned n_sites, unsigned n_t,
                             unsigned cycles, RngStream& rng,
                             std::uint64_t recorded_seed = 0);

// Operator product C1 V C2: c2 applied first.
Circuit sandwich(const Circuit& c1, const Circuit& v, const Circuit& c2);

void apply_circuit(QuditState& state, const Circuit& circuit);
void apply_circuit_adjoint(QuditState& state, const Circuit& circuit);
QuditState run_circuit(const Circuit& circuit);  // circuit applied to |0...0>

// Circuit with gate matrices resolved up front; use in loops that apply the
// same circuit to many states.
class CompiledCircuit {
public:
    CompiledCircuit() = default;
    explicit CompiledCircuit(const Circuit& circuit);

    void apply(QuditState& state) const;
    void apply_adjoint(QuditState& state) const;

    // Unchecked variants for buffers that are not QuditState objects
    // (matrix columns); buf must hold q^n_sites amplitudes.
    void apply_raw(cplx* buf) const;
    void apply_adjoint_raw(cplx* buf) const;

    unsigned q() const { return q_; }
    unsigned n_sites() const { return n_sites_; }

private:
    struct Op {
        DenseOperator matrix;
        DenseOperator matrix_adj;
        std::vector<unsigned> targets;
    };
    unsigned q_ = 2;
    unsigned n_sites_ = 1;
    std::vector<Op> ops_;
};

// Dense matrix of the circuit (subject to the dense cap).
DenseOperator circuit_unitary(const Circuit& circuit);

// JSON schema:
// {"q": int, "n_sites": int,
//  "meta": {"seed": int, "n_t": int, "cycles_per_block": int},
//  "ops": [{"gate": str, "targets": [int,...]}, ...]}
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

} // namespace msim
