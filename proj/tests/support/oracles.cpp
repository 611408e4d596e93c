#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace msim::oracle {

namespace {

cplx unit_phase(double two_pi_fraction) {
    return {std::cos(2.0 * std::numbers::pi * two_pi_fraction),
            std::sin(2.0 * std::numbers::pi * two_pi_fraction)};
}

DenseOperator matrix_power(const DenseOperator& m, unsigned e) {
    DenseOperator r = DenseOperator::identity(m.dim());
    for (unsigned k = 0; k < e; ++k) r = r.multiply(m);
    return r;
}

} // namespace

DenseOperator dense_clock(unsigned q) {
    DenseOperator z(q);
    for (unsigned n = 0; n < q; ++n)
        z.at(n, n) = unit_phase(static_cast<double>(n) / q);
    return z;
}

DenseOperator dense_shift(unsigned q) {
    DenseOperator x(q);
    for (unsigned n = 0; n < q; ++n) x.at((n + 1) % q, n) = 1.0;
    return x;
}

DenseOperator dense_weyl(unsigned q, unsigned n_sites, const WeylLabel& label) {
    DenseOperator out = DenseOperator::identity(1);
    for (unsigned s = 0; s < n_sites; ++s) {
        DenseOperator site = matrix_power(dense_clock(q), label.z[s])
                                 .multiply(matrix_power(dense_shift(q), label.x[s]));
        cplx phase;
        if (q == 2) {
            // (-i)^{a a'}: the (1,1) string is the standard Y
            phase = (label.z[s] * label.x[s]) % 2 ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
        } else {
            const unsigned inv2 = (q + 1) / 2;
            const unsigned e = (inv2 * label.z[s] % q) * label.x[s] % q;
            phase = unit_phase(-static_cast<double>(e) / q);
        }
        for (auto& v : site.entries()) v *= phase;
        out = out.kron(site);
    }
    return out;
}

DenseOperator dense_phase_point(unsigned q, unsigned n_sites, const WeylLabel& b) {
    const std::size_t dim = ipow(q, n_sites);
    const std::size_t n_labels = ipow(q, 2 * n_sites);
    DenseOperator sum(dim);
    for (std::size_t li = 0; li < n_labels; ++li) {
        const DenseOperator t =
            dense_weyl(q, n_sites, WeylLabel::from_index(q, n_sites, li));
        for (std::size_t k = 0; k < dim * dim; ++k)
            sum.entries()[k] += t.entries()[k];
    }
    const DenseOperator tb = dense_weyl(q, n_sites, b);
    DenseOperator a = tb.multiply(sum).multiply(tb.adjoint());
    for (auto& v : a.entries()) v /= static_cast<double>(dim);
    return a;
}

QuditState apply_dense_oracle(const QuditState& state, const DenseOperator& op) {
    const std::size_t dim = state.dim();
    if (op.dim() != dim) throw std::invalid_argument("apply_dense_oracle: dim mismatch");
    std::vector<cplx> out(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i] += op.at(i, j) * state[j];
    return QuditState(state.q(), state.n_sites(), std::move(out));
}

std::vector<double> wigner_dense(const QuditState& state) {
    const unsigned q = state.q();
    const unsigned n = state.n_sites();
    const std::size_t n_labels = ipow(q, 2 * n);
    const double dn = static_cast<double>(ipow(q, n));
    std::vector<double> w(n_labels);
    for (std::size_t u = 0; u < n_labels; ++u) {
        const DenseOperator a = dense_phase_point(q, n, WeylLabel::from_index(q, n, u));
        const QuditState as = apply_dense_oracle(state, a);
        w[u] = state.inner(as).real() / dn;
    }
    return w;
}

double mana_dense(const QuditState& state) {
    double total = 0.0;
    for (double v : wigner_dense(state)) total += std::abs(v);
    return std::log2(total);
}

double sre_direct(const QuditState& state, unsigned n_order) {
    if (state.q() != 2) throw std::invalid_argument("sre_direct: q = 2 only");
    const unsigned n = state.n_sites();
    const std::size_t n_labels = ipow(2, 2 * n);
    double total = 0.0;
    for (std::size_t li = 0; li < n_labels; ++li) {
        const DenseOperator p = dense_weyl(2, n, WeylLabel::from_index(2, n, li));
        const double exp_val = state.inner(apply_dense_oracle(state, p)).real();
        double term = 1.0;
        for (unsigned k = 0; k < 2 * n_order; ++k) term *= exp_val;
        total += term;
    }
    return std::log2(total / static_cast<double>(ipow(2, n))) /
           (1.0 - static_cast<double>(n_order));
}

DenseOperator embed_single(unsigned q, unsigned n_sites, const DenseOperator& gate,
                           unsigned site) {
    DenseOperator out = DenseOperator::identity(1);
    for (unsigned s = 0; s < n_sites; ++s)
        out = out.kron(s == site ? gate : DenseOperator::identity(q));
    return out;
}

DenseOperator embed_two(unsigned q, unsigned n_sites, const DenseOperator& gate,
                        unsigned control, unsigned target) {
    const std::size_t dim = ipow(q, n_sites);
    DenseOperator out(dim);
    const auto digit = [&](std::size_t idx, unsigned s) {
        return static_cast<unsigned>((idx / ipow(q, n_sites - 1 - s)) % q);
    };
    for (std::size_t row = 0; row < dim; ++row) {
        for (std::size_t col = 0; col < dim; ++col) {
            bool same_elsewhere = true;
            for (unsigned s = 0; s < n_sites && same_elsewhere; ++s)
                if (s != control && s != target && digit(row, s) != digit(col, s))
                    same_elsewhere = false;
            if (!same_elsewhere) continue;
            const unsigned r2 = digit(row, control) * q + digit(row, target);
            const unsigned c2 = digit(col, control) * q + digit(col, target);
            out.at(row, col) = gate.at(r2, c2);
        }
    }
    return out;
}

double m2_choi_via_q(const Circuit& v) {
    if (v.q != 2 || v.n_sites > 2)
        throw std::invalid_argument("m2_choi_via_q: feasible up to two qubits");
    const std::size_t d = ipow(2, v.n_sites);
    const DenseOperator vd = circuit_unitary(v);
    DenseOperator v4 = vd.kron(vd).kron(vd).kron(vd);
    const std::size_t n_paulis = d * d;
    DenseOperator q_op(v4.dim());
    for (std::size_t li = 0; li < n_paulis; ++li) {
        const DenseOperator p = dense_weyl(2, v.n_sites, WeylLabel::from_index(2, v.n_sites, li));
        const DenseOperator p4 = p.kron(p).kron(p).kron(p);
        for (std::size_t k = 0; k < q_op.entries().size(); ++k)
            q_op.entries()[k] += p4.entries()[k];
    }
    for (auto& e : q_op.entries()) e /= static_cast<double>(d * d);
    const DenseOperator prod =
        q_op.multiply(v4).multiply(q_op).multiply(v4.adjoint());
    const double val = prod.trace().real() / static_cast<double>(d * d);
    return -std::log2(val);
}

} // namespace msim::oracle
