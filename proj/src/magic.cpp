#include "msim/magic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msim/apply.hpp"
#include "msim/numeric.hpp"

namespace msim {

namespace {

void require_odd_prime(unsigned q, const char* what) {
    if (q % 2 == 0)
        throw std::invalid_argument(std::string(what) +
                                    ": only defined for odd prime local dimension");
    for (unsigned k = 3; k * k <= q; k += 2)
        if (q % k == 0)
            throw std::invalid_argument(std::string(what) +
                                        ": only defined for odd prime local dimension");
}

void enforce_mana_cap(unsigned q, unsigned n_sites, const MagicOptions& opts) {
    const unsigned cap = opts.allow_large_systems ? 6u : 4u;
    if (q == 3 && n_sites > cap)
        throw std::invalid_argument(
            "wigner/mana: phase-space enumeration above the site cap "
            "(pass allow_large_systems for 5-6 qutrits)");
    if (ipow(q, 2 * n_sites) > ipow(3, 12))
        throw std::invalid_argument("wigner/mana: phase space too large");
}

} // namespace

double WignerSpectrum::sum() const { return compensated_total(values); }

double WignerSpectrum::abs_sum() const {
    CompensatedSum s;
    for (double v : values) s.add(std::abs(v));
    return s.value();
}

double WignerSpectrum::min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

DenseOperator weyl_operator_dense(unsigned q, unsigned n_sites,
                                  const WeylLabel& label) {
    require_odd_prime(q, "weyl_operator_dense");
    const WeylAction act = weyl_action(q, n_sites, label);
    const std::size_t dim = ipow(q, n_sites);
    DenseOperator m(dim);
    for (std::size_t col = 0; col < dim; ++col) m.at(act.dest[col], col) = act.phase[col];
    return m;
}

DenseOperator phase_point_operator(unsigned q, unsigned n_sites,
                                   const WeylLabel& b) {
    require_odd_prime(q, "phase_point_operator");
    const std::size_t dim = ipow(q, n_sites);
    if (dim > kDenseCap)
        throw std::invalid_argument("phase_point_operator: dim exceeds dense cap");
    const std::size_t n_labels = ipow(q, 2 * n_sites);
    DenseOperator sum_all(dim);
    for (std::size_t li = 0; li < n_labels; ++li) {
        const WeylAction act = weyl_action(q, n_sites, WeylLabel::from_index(q, n_sites, li));
        for (std::size_t col = 0; col < dim; ++col)
            sum_all.at(act.dest[col], col) += act.phase[col];
    }
    const DenseOperator tb = weyl_operator_dense(q, n_sites, b);
    DenseOperator a = tb.multiply(sum_all).multiply(tb.adjoint());
    const double scale = 1.0 / static_cast<double>(dim);
    for (cplx& e : a.entries()) e *= scale;
    return a;
}

std::vector<cplx> all_weyl_expectations(const QuditState& state) {
    const unsigned q = state.q();
    const unsigned n = state.n_sites();
    const std::size_t n_labels = ipow(q, 2 * n);
    std::vector<cplx> out(n_labels);
    for (std::size_t li = 0; li < n_labels; ++li)
        out[li] = weyl_expectation(state, WeylLabel::from_index(q, n, li));
    return out;
}

WignerSpectrum wigner_function(const QuditState& state, const MagicOptions& opts) {
    const unsigned q = state.q();
    const unsigned n = state.n_sites();
    require_odd_prime(q, "wigner_function");
    enforce_mana_cap(q, n, opts);

    const std::size_t n_labels = ipow(q, 2 * n);
    // Step 1: every <T_a>, strided, chunked for determinism at any worker count.
    std::vector<cplx> coeff(n_labels);
    const std::size_t nchunks = std::min<std::size_t>(kReductionChunks, n_labels);
    parallel_for(nchunks, opts.workers, [&](std::size_t c) {
        const std::size_t begin = n_labels * c / nchunks;
        const std::size_t end = n_labels * (c + 1) / nchunks;
        for (std::size_t li = begin; li < end; ++li)
            coeff[li] = weyl_expectation(state, WeylLabel::from_index(q, n, li));
    });

    // Step 2: per-site phase-space kernel K[(zu,xu),(za,xa)] = w^{xa zu - za xu}.
    const std::size_t q2 = static_cast<std::size_t>(q) * q;
    DenseOperator kernel(q2);
    for (unsigned zu = 0; zu < q; ++zu)
        for (unsigned xu = 0; xu < q; ++xu)
            for (unsigned za = 0; za < q; ++za)
                for (unsigned xa = 0; xa < q; ++xa) {
                    const unsigned e = (xa * zu % q + (q - 1) * (za * xu % q)) % q;
                    const double ang = 2.0 * std::numbers::pi * e / q;
                    kernel.at(zu * q + xu, za * q + xa) = cplx(std::cos(ang), std::sin(ang));
                }
    // The label array is a rank-n tensor with local dimension q^2; the
    // transform is the same strided contraction a gate application does.
    QuditState work(static_cast<unsigned>(q2), n, std::move(coeff));
    for (unsigned s = 0; s < n; ++s) apply_single_qudit_gate(work, kernel, s);

    WignerSpectrum spec;
    spec.q = q;
    spec.n_sites = n;
    spec.values.resize(n_labels);
    const double scale = 1.0 / static_cast<double>(n_labels);
    double worst_imag = 0.0;
    for (std::size_t u = 0; u < n_labels; ++u) {
        const cplx v = work[u] * scale;
        worst_imag = std::max(worst_imag, std::abs(v.imag()));
        spec.values[u] = v.real();
    }
    spec.max_imag_residue = worst_imag;
    if (worst_imag > 1e-10)
        throw std::runtime_error("wigner_function: imaginary residue above 1e-10");
    return spec;
}

double mana(const WignerSpectrum& spectrum) {
    return std::log2(spectrum.abs_sum());
}

double mana(const QuditState& state, const MagicOptions& opts) {
    return mana(wigner_function(state, opts));
}

namespace {

// In-place Walsh-Hadamard transform (unnormalized).
void fwht(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t base = 0; base < n; base += h << 1) {
            for (std::size_t i = base; i < base + h; ++i) {
                const cplx x = a[i];
                const cplx y = a[i + h];
                a[i] = x + y;
                a[i + h] = x - y;
            }
        }
    }
}

} // namespace

double stabilizer_renyi_entropy(const QuditState& state, unsigned n_order,
                                const SreOptions& opts) {
    if (state.q() != 2)
        throw std::invalid_argument("stabilizer_renyi_entropy: defined for q = 2 only");
    if (n_order < 2)
        throw std::invalid_argument("stabilizer_renyi_entropy: order must be >= 2");
    const unsigned n = state.n_sites();
    if (n > opts.max_sites)
        throw std::invalid_argument("stabilizer_renyi_entropy: site count above enumeration cap");

    const std::size_t d = state.dim();
    const auto& psi = state.amplitudes();
    // sum over shift masks; per mask, a Walsh transform yields <Z^a X^mask>
    // for every clock mask a at once.
    const double total = parallel_reduce(d, opts.workers,
        [&](std::size_t begin, std::size_t end) {
            CompensatedSum part;
            std::vector<cplx> v(d);
            for (std::size_t mask = begin; mask < end; ++mask) {
                for (std::size_t k = 0; k < d; ++k)
                    v[k] = std::conj(psi[k]) * psi[k ^ mask];
                fwht(v);
                CompensatedSum row;
                for (std::size_t a = 0; a < d; ++a) {
                    // |<P>|^{2n}; the Hermitian phase i^{a.mask} has unit
                    // modulus so it never enters.
                    const double p2 = std::norm(v[a]);
                    double term = p2;
                    for (unsigned m = 1; m < n_order; ++m) term *= p2;
                    row.add(term);
                }
                part.add(row.value());
            }
            return part.value();
        });
    const double arg = total / static_cast<double>(d);
    return std::log2(arg) / (1.0 - static_cast<double>(n_order));
}

QuditState choi_state(unsigned q, unsigned n_sites, const DenseOperator& v) {
    const std::size_t d = ipow(q, n_sites);
    if (v.dim() != d) throw std::invalid_argument("choi_state: operator dim mismatch");
    std::vector<cplx> amps(d * d, 0.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = s;
    QuditState state(q, 2 * n_sites, std::move(amps));
    apply_dense_to_low_register(state, v, n_sites);
    return state;
}

QuditState choi_state(const Circuit& v) {
    if (v.q != 2)
        throw std::invalid_argument("choi_state: circuit form expects q = 2");
    const std::size_t d = ipow(v.q, v.n_sites);
    std::vector<cplx> amps(d * d, 0.0);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = s;
    QuditState state(v.q, 2 * v.n_sites, std::move(amps));
    // act on the trailing register: same ops, sites shifted by N
    Circuit shifted = v;
    shifted.n_sites = 2 * v.n_sites;
    for (GateOp& op : shifted.ops)
        for (unsigned& t : op.targets) t += v.n_sites;
    apply_circuit(state, shifted);
    return state;
}

double choi_m2(const Circuit& v, const SreOptions& opts) {
    return stabilizer_renyi_entropy(choi_state(v), 2, opts);
}

} // namespace msim
