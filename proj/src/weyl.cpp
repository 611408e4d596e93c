#include "msim/weyl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace msim {

namespace {

void check_label(unsigned q, unsigned n_sites, const WeylLabel& label) {
    if (label.z.size() != n_sites || label.x.size() != n_sites)
        throw std::invalid_argument("WeylLabel: length does not match site count");
    for (unsigned v : label.z)
        if (v >= q) throw std::invalid_argument("WeylLabel: z exponent out of [0, q)");
    for (unsigned v : label.x)
        if (v >= q) throw std::invalid_argument("WeylLabel: x exponent out of [0, q)");
}

// e^{2 pi i k / order} for k = 0..order-1
std::vector<cplx> root_table(unsigned order) {
    std::vector<cplx> t(order);
    for (unsigned k = 0; k < order; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / order;
        t[k] = cplx(std::cos(ang), std::sin(ang));
    }
    // exact values where representable
    t[0] = cplx(1.0, 0.0);
    if (order % 2 == 0) t[order / 2] = cplx(-1.0, 0.0);
    if (order % 4 == 0) {
        t[order / 4] = cplx(0.0, 1.0);
        t[3 * order / 4] = cplx(0.0, -1.0);
    }
    return t;
}

} // namespace

WeylLabel WeylLabel::negated(unsigned q) const {
    WeylLabel r;
    r.z.reserve(z.size());
    r.x.reserve(x.size());
    for (unsigned v : z) r.z.push_back((q - v) % q);
    for (unsigned v : x) r.x.push_back((q - v) % q);
    return r;
}

WeylLabel WeylLabel::from_index(unsigned q, unsigned n_sites, std::size_t index) {
    WeylLabel label;
    label.z.assign(n_sites, 0);
    label.x.assign(n_sites, 0);
    for (unsigned s = n_sites; s-- > 0;) {
        label.x[s] = static_cast<unsigned>(index % q);
        index /= q;
        label.z[s] = static_cast<unsigned>(index % q);
        index /= q;
    }
    return label;
}

std::size_t WeylLabel::to_index(unsigned q) const {
    std::size_t index = 0;
    for (unsigned s = 0; s < n_sites(); ++s)
        index = index * q * q + static_cast<std::size_t>(z[s]) * q + x[s];
    return index;
}

WeylAction weyl_action(unsigned q, unsigned n_sites, const WeylLabel& label) {
    check_label(q, n_sites, label);
    const std::size_t dim = ipow(q, n_sites);
    const unsigned order = (q == 2) ? 4u : q;
    const auto roots = root_table(order);

    // Constant part of the phase exponent (in units of 2 pi / order).
    //   odd q : -inv2 * sum a a'
    //   q = 2 : (-i)^{sum a a'} so that (a,a') = (1,1) is the standard Y
    //           (note (-i) Z X = Y; the strings are then Hermitian)
    unsigned c0 = 0;
    if (q == 2) {
        for (unsigned s = 0; s < n_sites; ++s)
            c0 = (c0 + 3 * (label.z[s] * label.x[s])) % 4;
    } else {
        const unsigned inv2 = (q + 1) / 2;
        for (unsigned s = 0; s < n_sites; ++s)
            c0 = (c0 + (q - 1) * inv2 % q * (label.z[s] * label.x[s] % q)) % q;
    }

    WeylAction act;
    act.dest.resize(dim);
    act.phase.resize(dim);
    const unsigned digit_weight = (q == 2) ? 2u : 1u;  // Z contributes (-1)^.. = i^2.. for q=2
    for (std::size_t m = 0; m < dim; ++m) {
        std::size_t dest = 0;
        unsigned e = c0;
        std::size_t rest = m;
        std::size_t place = dim;
        for (unsigned s = 0; s < n_sites; ++s) {
            place /= q;
            const unsigned digit = static_cast<unsigned>(rest / place);
            rest %= place;
            const unsigned nd = (digit + label.x[s]) % q;
            dest += static_cast<std::size_t>(nd) * place;
            e = (e + digit_weight * label.z[s] * nd) % order;
        }
        act.dest[m] = static_cast<std::uint32_t>(dest);
        act.phase[m] = roots[e];
    }
    return act;
}

void apply_weyl_string(QuditState& state, const WeylLabel& label) {
    const WeylAction act = weyl_action(state.q(), state.n_sites(), label);
    std::vector<cplx> out(state.dim());
    for (std::size_t m = 0; m < state.dim(); ++m)
        out[act.dest[m]] = act.phase[m] * state[m];
    state.amplitudes() = std::move(out);
}

cplx weyl_expectation(const QuditState& state, const WeylLabel& label) {
    const WeylAction act = weyl_action(state.q(), state.n_sites(), label);
    cplx r = 0.0;
    for (std::size_t m = 0; m < state.dim(); ++m)
        r += std::conj(state[act.dest[m]]) * act.phase[m] * state[m];
    return r;
}

unsigned weyl_commutation_exponent(unsigned q, const WeylLabel& a, const WeylLabel& b) {
    if (a.n_sites() != b.n_sites())
        throw std::invalid_argument("weyl_commutation_exponent: site count mismatch");
    unsigned k = 0;
    for (unsigned s = 0; s < a.n_sites(); ++s)
        k = (k + a.x[s] * b.z[s] % q + (q - 1) * (a.z[s] * b.x[s] % q)) % q;
    return k;
}

} // namespace msim
