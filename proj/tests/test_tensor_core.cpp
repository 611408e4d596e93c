#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "msim/apply.hpp"
#include "msim/gates.hpp"
#include "msim/rng.hpp"
#include "msim/weyl.hpp"
#include "support/oracles.hpp"

using namespace msim;

namespace {

QuditState random_state(unsigned q, unsigned n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<cplx> amps(ipow(q, n));
    for (auto& a : amps) a = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    QuditState s(q, n, std::move(amps));
    const double nrm = s.norm();
    for (auto& a : s.amplitudes()) a /= nrm;
    return s;
}

double state_diff(const QuditState& a, const QuditState& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

WeylLabel random_label(unsigned q, unsigned n, RngStream& rng) {
    return WeylLabel::from_index(q, n, rng.bounded(ipow(q, 2 * n)));
}

} // namespace

TEST_CASE("basis states and strides") {
    QuditState s(3, 2, 5);  // |12> in base 3
    CHECK(s.dim() == 9);
    CHECK(s[5] == cplx(1.0, 0.0));
    CHECK(s.digit(5, 0) == 1);
    CHECK(s.digit(5, 1) == 2);
    CHECK(s.stride(0) == 3);
    CHECK(s.stride(1) == 1);
    CHECK_THROWS(QuditState(2, 2, 4));
    CHECK_THROWS(QuditState(1, 2));
}

TEST_CASE("hadamard on |0> gives the uniform pair") {
    QuditState s(2, 1);
    apply_single_qudit_gate(s, qubit_gate("H").matrix, 0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s[0] - cplx(r, 0)) < 1e-15);
    CHECK(std::abs(s[1] - cplx(r, 0)) < 1e-15);
}

TEST_CASE("identity leaves amplitudes untouched") {
    QuditState s = random_state(3, 2, 11);
    QuditState t = s;
    apply_single_qudit_gate(t, qutrit_gate("I").matrix, 1);
    CHECK(state_diff(s, t) == 0.0);
}

TEST_CASE("qutrit shift maps |0> to |1>") {
    QuditState s(3, 1);
    apply_single_qudit_gate(s, qutrit_gate("X").matrix, 0);
    CHECK(std::abs(s[1] - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("gate application errors") {
    QuditState s(2, 2);
    CHECK_THROWS(apply_single_qudit_gate(s, qutrit_gate("X").matrix, 0));
    CHECK_THROWS(apply_single_qudit_gate(s, qubit_gate("X").matrix, 5));
    DenseOperator bad(2, {1.0, 0.0, 0.0, 2.0});
    CHECK_THROWS(apply_single_qudit_gate(s, bad, 0, /*check_unitary=*/true));
    CHECK_THROWS(apply_two_qudit_gate(s, qubit_gate("CNOT").matrix, 1, 1));
}

TEST_CASE("CSUM on |1,1> gives |1,2>") {
    QuditState s(3, 2, 4);  // |11>
    apply_two_qudit_gate(s, qutrit_gate("CSUM").matrix, 0, 1);
    CHECK(std::abs(s[5] - cplx(1.0, 0.0)) < 1e-15);  // |12>
}

TEST_CASE("CNOT basis action") {
    QuditState s(2, 2, 2);  // |10>
    apply_two_qudit_gate(s, qubit_gate("CNOT").matrix, 0, 1);
    CHECK(std::abs(s[3] - cplx(1.0, 0.0)) < 1e-15);  // |11>

    QuditState t = random_state(2, 1, 3);
    QuditState zero(2, 1);
    QuditState both = tensor_product(zero, t);  // control |0>
    QuditState before = both;
    apply_two_qudit_gate(both, qubit_gate("CNOT").matrix, 0, 1);
    CHECK(state_diff(both, before) < 1e-15);
}

TEST_CASE("strided kernels match dense embeddings on random circuits") {
    for (unsigned q : {2u, 3u}) {
        for (unsigned n : {2u, 3u}) {
            RngStream rng(1000 + q * 10 + n);
            QuditState s = random_state(q, n, 77 + q + n);
            QuditState dense_state = s;
            const auto& singles = clifford_single_site_set();
            for (int step = 0; step < 20; ++step) {
                if (rng.bounded(2) == 0) {
                    const GateDef g =
                        lookup_gate(q, singles[rng.bounded(singles.size())]);
                    const auto site = static_cast<unsigned>(rng.bounded(n));
                    apply_single_qudit_gate(s, g.matrix, site);
                    dense_state = oracle::apply_dense_oracle(
                        dense_state, oracle::embed_single(q, n, g.matrix, site));
                } else {
                    const GateDef g = lookup_gate(q, entangler_name(q));
                    const auto c = static_cast<unsigned>(rng.bounded(n));
                    auto t = static_cast<unsigned>(rng.bounded(n - 1));
                    if (t >= c) ++t;
                    apply_two_qudit_gate(s, g.matrix, c, t);
                    dense_state = oracle::apply_dense_oracle(
                        dense_state, oracle::embed_two(q, n, g.matrix, c, t));
                }
            }
            CHECK(state_diff(s, dense_state) < 1e-12);
            CHECK(std::abs(s.norm() - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("weyl action matches dense weyl matrices") {
    for (unsigned q : {2u, 3u}) {
        RngStream rng(40 + q);
        for (int rep = 0; rep < 25; ++rep) {
            const unsigned n = 1 + static_cast<unsigned>(rng.bounded(3));
            const WeylLabel label = random_label(q, n, rng);
            QuditState s = random_state(q, n, 900 + rep + q);
            QuditState via_dense =
                oracle::apply_dense_oracle(s, oracle::dense_weyl(q, n, label));
            apply_weyl_string(s, label);
            CHECK(state_diff(s, via_dense) < 1e-13);
        }
    }
}

TEST_CASE("weyl identity and clock examples") {
    QuditState s = random_state(3, 2, 5);
    QuditState t = s;
    apply_weyl_string(t, WeylLabel{{0, 0}, {0, 0}});
    CHECK(state_diff(s, t) == 0.0);

    // q=2: Z|0> = |0>
    QuditState z(2, 1);
    apply_weyl_string(z, WeylLabel{{1}, {0}});
    CHECK(std::abs(z[0] - cplx(1.0, 0.0)) < 1e-15);

    // q=3 clock on |1> picks up w
    QuditState c(3, 1, 1);
    apply_weyl_string(c, WeylLabel{{1}, {0}});
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    CHECK(std::abs(c[1] - w) < 1e-15);
}

TEST_CASE("weyl expectation anchors") {
    QuditState s = random_state(2, 2, 8);
    WeylLabel id{{0, 0}, {0, 0}};
    CHECK(std::abs(weyl_expectation(s, id) - cplx(1.0, 0.0)) < 1e-12);

    // <+|X|+> = 1
    QuditState plus(2, 1);
    apply_single_qudit_gate(plus, qubit_gate("H").matrix, 0);
    CHECK(std::abs(weyl_expectation(plus, WeylLabel{{0}, {1}}) - cplx(1.0, 0.0)) <
          1e-12);

    // <T|Y|T> = 1/sqrt(2) for |T> = T H |0>
    QuditState tstate(2, 1);
    apply_single_qudit_gate(tstate, qubit_gate("H").matrix, 0);
    apply_single_qudit_gate(tstate, qubit_gate("T").matrix, 0);
    const cplx y_exp = weyl_expectation(tstate, WeylLabel{{1}, {1}});
    CHECK(std::abs(y_exp.real() - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(y_exp.imag()) < 1e-10);
}

TEST_CASE("qubit weyl expectations are real (Hermitian convention)") {
    RngStream rng(4242);
    for (int rep = 0; rep < 30; ++rep) {
        const unsigned n = 1 + static_cast<unsigned>(rng.bounded(3));
        QuditState s = random_state(2, n, 300 + rep);
        const WeylLabel label = random_label(2, n, rng);
        CHECK(std::abs(weyl_expectation(s, label).imag()) < 1e-10);
    }
}

TEST_CASE("weyl commutation phase") {
    // Z-string then X-string differs from the reverse order by w^{sum a a'}.
    for (unsigned q : {2u, 3u}) {
        RngStream rng(17 * q);
        for (int rep = 0; rep < 10; ++rep) {
            const unsigned n = 1 + static_cast<unsigned>(rng.bounded(2));
            WeylLabel zpart{std::vector<unsigned>(n), std::vector<unsigned>(n)};
            WeylLabel xpart{std::vector<unsigned>(n), std::vector<unsigned>(n)};
            unsigned dot = 0;
            for (unsigned s = 0; s < n; ++s) {
                zpart.z[s] = static_cast<unsigned>(rng.bounded(q));
                xpart.x[s] = static_cast<unsigned>(rng.bounded(q));
                dot = (dot + zpart.z[s] * xpart.x[s]) % q;
            }
            QuditState s1 = random_state(q, n, 555 + rep + q);
            QuditState s2 = s1;
            // X then Z   vs   Z then X: (Z X) = w^{dot} (X Z) as operators
            apply_weyl_string(s1, xpart);
            apply_weyl_string(s1, zpart);
            apply_weyl_string(s2, zpart);
            apply_weyl_string(s2, xpart);
            const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * dot / q);
            double worst = 0.0;
            for (std::size_t i = 0; i < s1.dim(); ++i)
                worst = std::max(worst, std::abs(s1[i] - w * s2[i]));
            CHECK(worst < 1e-13);
        }
    }
}

TEST_CASE("weyl adjoint relation: <T(l)> = conj(<T(-l)>)") {
    for (unsigned q : {2u, 3u}) {
        RngStream rng(88 + q);
        for (int rep = 0; rep < 20; ++rep) {
            const unsigned n = 1 + static_cast<unsigned>(rng.bounded(3));
            QuditState s = random_state(q, n, 77 * q + rep);
            const WeylLabel label = random_label(q, n, rng);
            const cplx a = weyl_expectation(s, label);
            const cplx b = weyl_expectation(s, label.negated(q));
            CHECK(std::abs(a - std::conj(b)) < 1e-12);
        }
    }
}

TEST_CASE("operator_from_circuit_action reproduces known matrices") {
    const DenseOperator id4 = operator_from_circuit_action(
        [](const QuditState& s) { return s; }, 2, 2);
    CHECK(id4.max_abs_diff(DenseOperator::identity(4)) == 0.0);

    const DenseOperator h = operator_from_circuit_action(
        [](const QuditState& s) {
            QuditState t = s;
            apply_single_qudit_gate(t, qubit_gate("H").matrix, 0);
            return t;
        },
        2, 1);
    CHECK(h.max_abs_diff(qubit_gate("H").matrix) < 1e-15);

    // CSUM as a 9x9 permutation: |i,j> -> |i, i+j mod 3>
    const DenseOperator cs = operator_from_circuit_action(
        [](const QuditState& s) {
            QuditState t = s;
            apply_two_qudit_gate(t, qutrit_gate("CSUM").matrix, 0, 1);
            return t;
        },
        3, 2);
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j) {
            const std::size_t col = i * 3 + j;
            const std::size_t row = i * 3 + (i + j) % 3;
            CHECK(std::abs(cs.at(row, col) - cplx(1.0, 0.0)) < 1e-15);
        }
}

TEST_CASE("norm preserved across long unitary sequences") {
    RngStream rng(2024);
    QuditState s = random_state(2, 4, 1);
    const auto& singles = clifford_single_site_set();
    for (int step = 0; step < 400; ++step) {
        const GateDef g = lookup_gate(2, singles[rng.bounded(singles.size())]);
        apply_single_qudit_gate(s, g.matrix, static_cast<unsigned>(rng.bounded(4)));
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-9);
}

TEST_CASE("tensor product ordering") {
    QuditState a(2, 1, 1);  // |1>
    QuditState b(2, 1, 0);  // |0>
    QuditState ab = tensor_product(a, b);
    CHECK(std::abs(ab[2] - cplx(1.0, 0.0)) < 1e-15);  // |10>
}

TEST_CASE("dense operator cap enforced") {
    CHECK_THROWS(operator_from_circuit_action(
        [](const QuditState& s) { return s; }, 2, 14));
}
