#include "msim/apply.hpp"

#include <stdexcept>

namespace msim {

namespace {

void check_gate(const DenseOperator& gate, std::size_t expected_dim,
                bool check_unitary) {
    if (gate.dim() != expected_dim)
        throw std::invalid_argument("gate dimension does not match q^arity");
    if (check_unitary && !gate.is_unitary(1e-10))
        throw std::invalid_argument("gate is not unitary");
}

} // namespace

void apply_single_qudit_gate_raw(cplx* amps, unsigned q, unsigned n_sites,
                                 const DenseOperator& gate, unsigned site) {
    const std::size_t stride = ipow(q, n_sites - 1 - site);
    const std::size_t block = stride * q;
    const std::size_t dim = ipow(q, n_sites);
    cplx in[16];
    cplx out[16];
    for (std::size_t base = 0; base < dim; base += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t off = base + inner;
            for (unsigned k = 0; k < q; ++k) in[k] = amps[off + k * stride];
            for (unsigned r = 0; r < q; ++r) {
                cplx acc = 0.0;
                for (unsigned k = 0; k < q; ++k) acc += gate.at(r, k) * in[k];
                out[r] = acc;
            }
            for (unsigned k = 0; k < q; ++k) amps[off + k * stride] = out[k];
        }
    }
}

void apply_two_qudit_gate_raw(cplx* amps, unsigned q, unsigned n_sites,
                              const DenseOperator& gate, unsigned control,
                              unsigned target) {
    const std::size_t sc = ipow(q, n_sites - 1 - control);
    const std::size_t st = ipow(q, n_sites - 1 - target);
    std::size_t rest[32];
    unsigned n_rest = 0;
    for (unsigned s = 0; s < n_sites; ++s)
        if (s != control && s != target) rest[n_rest++] = ipow(q, n_sites - 1 - s);

    const std::size_t q2 = static_cast<std::size_t>(q) * q;
    const std::size_t n_bases = ipow(q, n_sites) / q2;
    cplx in[256];
    cplx out[256];
    for (std::size_t m = 0; m < n_bases; ++m) {
        std::size_t base = 0;
        std::size_t rem = m;
        for (unsigned r = n_rest; r-- > 0;) {
            base += (rem % q) * rest[r];
            rem /= q;
        }
        for (unsigned i = 0; i < q; ++i)
            for (unsigned j = 0; j < q; ++j)
                in[i * q + j] = amps[base + i * sc + j * st];
        for (std::size_t r = 0; r < q2; ++r) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < q2; ++k) acc += gate.at(r, k) * in[k];
            out[r] = acc;
        }
        for (unsigned i = 0; i < q; ++i)
            for (unsigned j = 0; j < q; ++j)
                amps[base + i * sc + j * st] = out[i * q + j];
    }
}

void apply_single_qudit_gate(QuditState& state, const DenseOperator& gate,
                             unsigned site, bool check_unitary) {
    const unsigned q = state.q();
    check_gate(gate, q, check_unitary);
    if (site >= state.n_sites())
        throw std::out_of_range("apply_single_qudit_gate: site out of range");
    if (q > 16)
        throw std::invalid_argument("apply_single_qudit_gate: q above kernel cap (16)");
    apply_single_qudit_gate_raw(state.amplitudes().data(), q, state.n_sites(),
                                gate, site);
}

void apply_two_qudit_gate(QuditState& state, const DenseOperator& gate,
                          unsigned control, unsigned target,
                          bool check_unitary) {
    const unsigned q = state.q();
    const unsigned n = state.n_sites();
    check_gate(gate, static_cast<std::size_t>(q) * q, check_unitary);
    if (control >= n || target >= n)
        throw std::out_of_range("apply_two_qudit_gate: site out of range");
    if (control == target)
        throw std::invalid_argument("apply_two_qudit_gate: control == target");
    if (q > 16 || n > 32)
        throw std::invalid_argument("apply_two_qudit_gate: size above kernel cap");
    apply_two_qudit_gate_raw(state.amplitudes().data(), q, n, gate, control,
                             target);
}

void apply_dense_full(QuditState& state, const DenseOperator& op) {
    const std::size_t dim = state.dim();
    if (op.dim() != dim)
        throw std::invalid_argument("apply_dense_full: dimension mismatch");
    std::vector<cplx> out(dim, 0.0);
    const auto& amps = state.amplitudes();
    for (std::size_t r = 0; r < dim; ++r) {
        cplx acc = 0.0;
        const cplx* row = op.entries().data() + r * dim;
        for (std::size_t k = 0; k < dim; ++k) acc += row[k] * amps[k];
        out[r] = acc;
    }
    state.amplitudes() = std::move(out);
}

void apply_dense_to_low_register(QuditState& state, const DenseOperator& op,
                                 unsigned k_sites) {
    const std::size_t reg_dim = ipow(state.q(), k_sites);
    if (op.dim() != reg_dim)
        throw std::invalid_argument("apply_dense_to_low_register: dimension mismatch");
    if (k_sites > state.n_sites())
        throw std::invalid_argument("apply_dense_to_low_register: register too large");
    const std::size_t n_rows = state.dim() / reg_dim;
    auto& amps = state.amplitudes();
    std::vector<cplx> in(reg_dim);
    for (std::size_t r = 0; r < n_rows; ++r) {
        cplx* seg = amps.data() + r * reg_dim;
        std::copy(seg, seg + reg_dim, in.begin());
        for (std::size_t i = 0; i < reg_dim; ++i) {
            cplx acc = 0.0;
            const cplx* row = op.entries().data() + i * reg_dim;
            for (std::size_t j = 0; j < reg_dim; ++j) acc += row[j] * in[j];
            seg[i] = acc;
        }
    }
}

DenseOperator operator_from_circuit_action(
    const std::function<QuditState(const QuditState&)>& apply_fn,
    unsigned q, unsigned n_sites) {
    const std::size_t dim = ipow(q, n_sites);
    if (dim > kDenseCap)
        throw std::invalid_argument("operator_from_circuit_action: dim exceeds dense cap");
    DenseOperator U(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const QuditState col = apply_fn(QuditState(q, n_sites, j));
        if (col.dim() != dim)
            throw std::invalid_argument("operator_from_circuit_action: apply_fn changed dimension");
        for (std::size_t i = 0; i < dim; ++i) U.at(i, j) = col[i];
    }
    return U;
}

} // namespace msim
