#include "msim/circuit.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "msim/apply.hpp"
#include "msim/gates.hpp"

namespace msim {

unsigned Circuit::count_gates(const std::string& name) const {
    unsigned c = 0;
    for (const GateOp& op : ops)
        if (op.gate == name) ++c;
    return c;
}

Circuit build_clifford_block(unsigned q, unsigned n_sites, unsigned cycles,
                             RngStream& rng) {
    if (n_sites < 2)
        throw std::invalid_argument("build_clifford_block: need at least 2 sites");
    if (cycles < 1)
        throw std::invalid_argument("build_clifford_block: need at least 1 cycle");
    const auto& singles = clifford_single_site_set();
    Circuit c;
    c.q = q;
    c.n_sites = n_sites;
    c.meta.cycles_per_block = cycles;
    c.ops.reserve(static_cast<std::size_t>(cycles) * (n_sites + 2));
    const std::string ent = entangler_name(q);
    for (unsigned m = 0; m < cycles; ++m) {
        for (unsigned s = 0; s < n_sites; ++s)
            c.ops.push_back({singles[rng.bounded(singles.size())], {s}});
        for (int e = 0; e < 2; ++e) {
            const auto ctrl = static_cast<unsigned>(rng.bounded(n_sites));
            auto tgt = static_cast<unsigned>(rng.bounded(n_sites - 1));
            if (tgt >= ctrl) ++tgt;
            c.ops.push_back({ent, {ctrl, tgt}});
        }
    }
    return c;
}

Circuit build_tdoped_circuit(unsigned q, unsigned n_sites, unsigned n_t,
                             unsigned cycles, RngStream& rng,
                             std::uint64_t recorded_seed) {
    Circuit c;
    c.q = q;
    c.n_sites = n_sites;
    c.meta.seed = recorded_seed;
    c.meta.n_t = n_t;
    c.meta.cycles_per_block = cycles;
    if (n_t == 0) {
        Circuit block = build_clifford_block(q, n_sites, cycles, rng);
        c.ops = std::move(block.ops);
        return c;
    }
    for (unsigned b = 0; b < n_t; ++b) {
        Circuit block = build_clifford_block(q, n_sites, cycles, rng);
        c.ops.insert(c.ops.end(), block.ops.begin(), block.ops.end());
        c.ops.push_back({"T", {static_cast<unsigned>(rng.bounded(n_sites))}});
    }
    return c;
}

Circuit sandwich(const Circuit& c1, const Circuit& v, const Circuit& c2) {
    if (c1.q != v.q || c2.q != v.q || c1.n_sites != v.n_sites ||
        c2.n_sites != v.n_sites)
        throw std::invalid_argument("sandwich: q or n_sites mismatch");
    Circuit u;
    u.q = v.q;
    u.n_sites = v.n_sites;
    u.meta = v.meta;
    u.ops.reserve(c1.ops.size() + v.ops.size() + c2.ops.size());
    u.ops.insert(u.ops.end(), c2.ops.begin(), c2.ops.end());
    u.ops.insert(u.ops.end(), v.ops.begin(), v.ops.end());
    u.ops.insert(u.ops.end(), c1.ops.begin(), c1.ops.end());
    return u;
}

namespace {

void apply_op(QuditState& state, unsigned q, const GateOp& op, bool adjoint) {
    const GateDef def = lookup_gate(q, op.gate);
    if (def.arity != op.targets.size())
        throw std::invalid_argument("apply_circuit: target count does not match arity for " + op.gate);
    const DenseOperator& m = def.matrix;
    if (def.arity == 1) {
        apply_single_qudit_gate(state, adjoint ? m.adjoint() : m, op.targets[0]);
    } else {
        apply_two_qudit_gate(state, adjoint ? m.adjoint() : m, op.targets[0],
                             op.targets[1]);
    }
}

} // namespace

void apply_circuit(QuditState& state, const Circuit& circuit) {
    if (state.q() != circuit.q || state.n_sites() != circuit.n_sites)
        throw std::invalid_argument("apply_circuit: state does not match circuit shape");
    for (const GateOp& op : circuit.ops) apply_op(state, circuit.q, op, false);
}

void apply_circuit_adjoint(QuditState& state, const Circuit& circuit) {
    if (state.q() != circuit.q || state.n_sites() != circuit.n_sites)
        throw std::invalid_argument("apply_circuit_adjoint: state does not match circuit shape");
    for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it)
        apply_op(state, circuit.q, *it, true);
}

QuditState run_circuit(const Circuit& circuit) {
    QuditState state(circuit.q, circuit.n_sites);
    apply_circuit(state, circuit);
    return state;
}

CompiledCircuit::CompiledCircuit(const Circuit& circuit)
    : q_(circuit.q), n_sites_(circuit.n_sites) {
    ops_.reserve(circuit.ops.size());
    for (const GateOp& op : circuit.ops) {
        const GateDef def = lookup_gate(circuit.q, op.gate);
        if (def.arity != op.targets.size())
            throw std::invalid_argument("CompiledCircuit: bad target count for " + op.gate);
        ops_.push_back({def.matrix, def.matrix.adjoint(), op.targets});
    }
}

void CompiledCircuit::apply(QuditState& state) const {
    if (state.q() != q_ || state.n_sites() != n_sites_)
        throw std::invalid_argument("CompiledCircuit::apply: state shape mismatch");
    apply_raw(state.amplitudes().data());
}

void CompiledCircuit::apply_adjoint(QuditState& state) const {
    if (state.q() != q_ || state.n_sites() != n_sites_)
        throw std::invalid_argument("CompiledCircuit::apply_adjoint: state shape mismatch");
    apply_adjoint_raw(state.amplitudes().data());
}

void CompiledCircuit::apply_raw(cplx* buf) const {
    for (const Op& op : ops_) {
        if (op.targets.size() == 1)
            apply_single_qudit_gate_raw(buf, q_, n_sites_, op.matrix, op.targets[0]);
        else
            apply_two_qudit_gate_raw(buf, q_, n_sites_, op.matrix, op.targets[0],
                                     op.targets[1]);
    }
}

void CompiledCircuit::apply_adjoint_raw(cplx* buf) const {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        if (it->targets.size() == 1)
            apply_single_qudit_gate_raw(buf, q_, n_sites_, it->matrix_adj, it->targets[0]);
        else
            apply_two_qudit_gate_raw(buf, q_, n_sites_, it->matrix_adj,
                                     it->targets[0], it->targets[1]);
    }
}

DenseOperator circuit_unitary(const Circuit& circuit) {
    const CompiledCircuit compiled(circuit);
    return operator_from_circuit_action(
        [&](const QuditState& in) {
            QuditState s = in;
            compiled.apply(s);
            return s;
        },
        circuit.q, circuit.n_sites);
}

std::string circuit_to_json(const Circuit& circuit) {
    nlohmann::json ops = nlohmann::json::array();
    for (const GateOp& op : circuit.ops)
        ops.push_back({{"gate", op.gate}, {"targets", op.targets}});
    const nlohmann::json j = {
        {"q", circuit.q},
        {"n_sites", circuit.n_sites},
        {"meta",
         {{"seed", circuit.meta.seed},
          {"n_t", circuit.meta.n_t},
          {"cycles_per_block", circuit.meta.cycles_per_block}}},
        {"ops", ops},
    };
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Circuit c;
    c.q = j.at("q").get<unsigned>();
    c.n_sites = j.at("n_sites").get<unsigned>();
    const auto& meta = j.at("meta");
    c.meta.seed = meta.at("seed").get<std::uint64_t>();
    c.meta.n_t = meta.at("n_t").get<unsigned>();
    c.meta.cycles_per_block = meta.at("cycles_per_block").get<unsigned>();
    for (const auto& jop : j.at("ops")) {
        GateOp op;
        op.gate = jop.at("gate").get<std::string>();
        op.targets = jop.at("targets").get<std::vector<unsigned>>();
        const GateDef def = lookup_gate(c.q, op.gate);  // validates the name
        if (def.arity != op.targets.size())
            throw std::invalid_argument("circuit_from_json: bad target count for " + op.gate);
        for (unsigned t : op.targets)
            if (t >= c.n_sites)
                throw std::invalid_argument("circuit_from_json: target out of range");
        c.ops.push_back(std::move(op));
    }
    if (c.meta.n_t != c.count_gates("T"))
        throw std::invalid_argument("circuit_from_json: meta.n_t does not match T count");
    return c;
}

} // namespace msim
