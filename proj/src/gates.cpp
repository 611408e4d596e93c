#include "msim/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msim/weyl.hpp"

namespace msim {

namespace {

cplx root_of_unity(unsigned d, long long power) {
    long long p = power % static_cast<long long>(d);
    if (p < 0) p += d;
    if (p == 0) return {1.0, 0.0};
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(p) / d;
    return {std::cos(ang), std::sin(ang)};
}

void require_odd_prime_small(unsigned d, const char* what) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument(std::string(what) + ": requires odd prime dimension");
    for (unsigned k = 3; k * k <= d; k += 2)
        if (d % k == 0)
            throw std::invalid_argument(std::string(what) + ": requires odd prime dimension");
}

GateDef make(const std::string& name, unsigned q, unsigned arity, DenseOperator m) {
    return GateDef{name, q, arity, std::move(m)};
}

} // namespace

DenseOperator clock_d(unsigned d) {
    DenseOperator m(d);
    for (unsigned n = 0; n < d; ++n) m.at(n, n) = root_of_unity(d, n);
    return m;
}

DenseOperator shift_d(unsigned d) {
    DenseOperator m(d);
    for (unsigned n = 0; n < d; ++n) m.at((n + 1) % d, n) = 1.0;
    return m;
}

DenseOperator hadamard_d(unsigned d) {
    DenseOperator m(d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
            m.at(i, j) = s * root_of_unity(d, static_cast<long long>(i) * j);
    return m;
}

DenseOperator phase_d(unsigned d) {
    require_odd_prime_small(d, "phase_d");
    DenseOperator m(d);
    for (unsigned j = 0; j < d; ++j) {
        const long long jj = static_cast<long long>(j);
        m.at(j, j) = root_of_unity(d, jj * (jj - 1) / 2);
    }
    return m;
}

DenseOperator csum_d(unsigned d) {
    DenseOperator m(static_cast<std::size_t>(d) * d);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
            m.at(i * d + (i + j) % d, i * d + j) = 1.0;
    return m;
}

GateDef qubit_gate(const std::string& name) {
    const double s = 1.0 / std::sqrt(2.0);
    if (name == "H")
        return make(name, 2, 1, DenseOperator(2, {s, s, s, -s}));
    if (name == "S")
        return make(name, 2, 1, DenseOperator(2, {1.0, 0.0, 0.0, cplx(0.0, 1.0)}));
    if (name == "X")
        return make(name, 2, 1, DenseOperator(2, {0.0, 1.0, 1.0, 0.0}));
    if (name == "Y")
        return make(name, 2, 1, DenseOperator(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}));
    if (name == "Z")
        return make(name, 2, 1, DenseOperator(2, {1.0, 0.0, 0.0, -1.0}));
    if (name == "I")
        return make(name, 2, 1, DenseOperator::identity(2));
    if (name == "T") {
        const cplx t = std::polar(1.0, std::numbers::pi / 4.0);
        return make(name, 2, 1, DenseOperator(2, {1.0, 0.0, 0.0, t}));
    }
    if (name == "CNOT") {
        DenseOperator m(4);
        m.at(0, 0) = m.at(1, 1) = m.at(2, 3) = m.at(3, 2) = 1.0;
        return make(name, 2, 2, std::move(m));
    }
    throw std::invalid_argument("qubit_gate: unknown gate name '" + name + "'");
}

GateDef qutrit_gate(const std::string& name) {
    if (name == "H") return make(name, 3, 1, hadamard_d(3));
    if (name == "S") return make(name, 3, 1, phase_d(3));
    if (name == "X") return make(name, 3, 1, shift_d(3));
    if (name == "Z") return make(name, 3, 1, clock_d(3));
    if (name == "Y") return make(name, 3, 1, clock_d(3).multiply(shift_d(3)));
    if (name == "I") return make(name, 3, 1, DenseOperator::identity(3));
    if (name == "T") {
        DenseOperator m(3);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi / 9.0);
        m.at(2, 2) = std::polar(1.0, -2.0 * std::numbers::pi / 9.0);
        return make(name, 3, 1, std::move(m));
    }
    if (name == "CSUM") return make(name, 3, 2, csum_d(3));
    throw std::invalid_argument("qutrit_gate: unknown gate name '" + name + "'");
}

GateDef lookup_gate(unsigned q, const std::string& name) {
    if (q == 2) return qubit_gate(name);
    if (q == 3) return qutrit_gate(name);
    throw std::invalid_argument("lookup_gate: no gate registry for this q");
}

bool is_clifford(const GateDef& gate) {
    if (gate.arity > 2)
        throw std::invalid_argument("is_clifford: arity above 2 not supported");
    const unsigned q = gate.q;
    const unsigned n = gate.arity;
    const std::size_t dim = gate.matrix.dim();
    const DenseOperator gdag = gate.matrix.adjoint();

    // Generators: Z and X on each site of the gate's support.
    std::vector<WeylLabel> gens;
    for (unsigned s = 0; s < n; ++s) {
        WeylLabel lz, lx;
        lz.z.assign(n, 0); lz.x.assign(n, 0); lz.z[s] = 1;
        lx.z.assign(n, 0); lx.x.assign(n, 0); lx.x[s] = 1;
        gens.push_back(lz);
        gens.push_back(lx);
    }

    const std::size_t n_labels = ipow(q, 2 * n);
    for (const WeylLabel& gen : gens) {
        // M = G T G^dag, applied to columns without forming T densely.
        const WeylAction act = weyl_action(q, n, gen);
        DenseOperator m(dim);
        for (std::size_t col = 0; col < dim; ++col) {
            std::vector<cplx> v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = gdag.at(i, col);
            std::vector<cplx> w(dim);
            for (std::size_t i = 0; i < dim; ++i) w[act.dest[i]] = act.phase[i] * v[i];
            for (std::size_t r = 0; r < dim; ++r) {
                cplx acc = 0.0;
                for (std::size_t k = 0; k < dim; ++k) acc += gate.matrix.at(r, k) * w[k];
                m.at(r, col) = acc;
            }
        }
        // Project onto the Weyl basis: c_b = tr(T_b^dag M)/dim.
        double best = 0.0;
        double second = 0.0;
        for (std::size_t bi = 0; bi < n_labels; ++bi) {
            const WeylLabel b = WeylLabel::from_index(q, n, bi);
            const WeylAction bact = weyl_action(q, n, b);
            cplx c = 0.0;  // tr(T_b^dag M) = sum_m conj(phase[m]) M[dest[m], m]
            for (std::size_t mm = 0; mm < dim; ++mm)
                c += std::conj(bact.phase[mm]) * m.at(bact.dest[mm], mm);
            const double mag = std::abs(c) / static_cast<double>(dim);
            if (mag > best) {
                second = best;
                best = mag;
            } else if (mag > second) {
                second = mag;
            }
        }
        if (second > 1e-10 || std::abs(best - 1.0) > 1e-10) return false;
    }
    return true;
}

} // namespace msim
