#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "msim/apply.hpp"
#include "msim/circuit.hpp"
#include "msim/hamiltonian.hpp"
#include "msim/magic.hpp"

using namespace msim;

namespace {

QuditState random_state(unsigned n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<cplx> amps(ipow(2, n));
    for (auto& a : amps) a = cplx(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    QuditState s(2, n, std::move(amps));
    const double nrm = s.norm();
    for (auto& a : s.amplitudes()) a /= nrm;
    return s;
}

} // namespace

TEST_CASE("two-site pure ZZ spectrum") {
    TfimParams p;
    p.n_sites = 2;
    p.j_coupling = 1.0;
    p.h_field = 0.0;
    const DenseOperator h = build_tfim(p);
    Eigen::MatrixXcd m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = h.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    const auto ev = solver.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev(3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("term structure: n-1 bonds and n fields") {
    TfimParams p;
    p.n_sites = 5;
    p.j_coupling = 0.0;  // isolate the field part
    p.h_field = 1.0;
    const DenseOperator hx = build_tfim(p);
    // row 0 couples |00000> to the 5 single-flip states with -h
    double offdiag = 0.0;
    for (std::size_t j = 1; j < hx.dim(); ++j) offdiag += std::abs(hx.at(0, j));
    CHECK(offdiag == doctest::Approx(5.0).epsilon(1e-12));

    TfimParams pz;
    pz.n_sites = 5;
    pz.j_coupling = 1.0;
    pz.h_field = 0.0;
    const DenseOperator hz = build_tfim(pz);
    // all-up state: each of the 4 bonds contributes -J
    CHECK(hz.at(0, 0).real() == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(hz.hermiticity_defect() == 0.0);
}

TEST_CASE("hamiltonian is hermitian exactly") {
    TfimParams p;
    p.n_sites = 4;
    p.j_coupling = 1.3;
    p.h_field = 0.7;
    CHECK(build_tfim(p).hermiticity_defect() == 0.0);
}

TEST_CASE("evolution unitary basics") {
    TfimParams p;
    p.n_sites = 3;
    const DenseOperator h = build_tfim(p);

    const DenseOperator u0 = evolution_unitary(h, 0.0);
    CHECK(u0.max_abs_diff(DenseOperator::identity(8)) < 1e-12);

    const DenseOperator u1 = evolution_unitary(h, 0.7);
    CHECK(u1.unitarity_defect() < 1e-9);

    // group property U(t1) U(t2) = U(t1 + t2)
    const DenseOperator u2 = evolution_unitary(h, 0.4);
    const DenseOperator u12 = evolution_unitary(h, 1.1);
    CHECK(u1.multiply(u2).max_abs_diff(u12) < 1e-9);

    DenseOperator not_herm(2, {0.0, 1.0, 0.0, 0.0});
    CHECK_THROWS(evolution_unitary(not_herm, 1.0));
}

TEST_CASE("energy is conserved along the evolution") {
    TfimParams p;
    p.n_sites = 3;
    p.h_field = 0.5;
    const DenseOperator h = build_tfim(p);
    const QuditState psi0 = random_state(3, 99);

    auto energy = [&](const QuditState& s) {
        QuditState hs = s;
        apply_dense_full(hs, h);
        return s.inner(hs).real();
    };
    const double e0 = energy(psi0);
    for (int k = 1; k <= 10; ++k) {
        QuditState s = psi0;
        apply_dense_full(s, evolution_unitary(h, 0.3 * k));
        CHECK(std::abs(energy(s) - e0) < 1e-9);
        CHECK(std::abs(s.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("clifford sandwich leaves the exact choi M2 unchanged") {
    for (unsigned n : {2u, 3u}) {
        TfimParams p;
        p.n_sites = n;
        p.h_field = 0.5;
        const DenseOperator h = build_tfim(p);
        const DenseOperator ut = evolution_unitary(h, 1.1);
        const double base = stabilizer_renyi_entropy(choi_state(2, n, ut), 2);

        RngStream rng(500 + n);
        const DenseOperator c1 = circuit_unitary(build_clifford_block(2, n, 10, rng));
        const DenseOperator c2 = circuit_unitary(build_clifford_block(2, n, 10, rng));
        const DenseOperator dressed = c1.multiply(ut).multiply(c2);
        const double wrapped = stabilizer_renyi_entropy(choi_state(2, n, dressed), 2);
        CHECK(std::abs(wrapped - base) < 1e-9);
    }
}

TEST_CASE("uniform time grid") {
    const std::vector<double> ts = uniform_times(3.0, 4);
    REQUIRE(ts.size() == 4);
    CHECK(ts.front() == 0.0);
    CHECK(ts.back() == doctest::Approx(3.0));
    CHECK(ts[1] == doctest::Approx(1.0));
    CHECK_THROWS(uniform_times(3.0, 1));
}

TEST_CASE("pure-Z evolution magic is periodic in time") {
    // h = 0: U(t) = exp(i J t ZZ) is diagonal.  The ZZ rotation is Clifford at
    // every multiple of pi/4 (CZ-like phases) and maximally magic halfway
    // between, so the Choi M2 is pi/4-periodic with zeros on the grid.
    TfimParams p;
    p.n_sites = 2;
    p.j_coupling = 1.0;
    p.h_field = 0.0;
    const DenseOperator h = build_tfim(p);
    const double eighth = std::numbers::pi / 8.0;

    const double m_magic =
        stabilizer_renyi_entropy(choi_state(2, 2, evolution_unitary(h, eighth)), 2);
    CHECK(m_magic > 0.1);
    for (int k = 1; k <= 4; ++k) {
        const double m_grid = stabilizer_renyi_entropy(
            choi_state(2, 2, evolution_unitary(h, 2.0 * k * eighth)), 2);
        CHECK(std::abs(m_grid) < 1e-9);
    }
}

TEST_CASE("small evolution scan produces consistent series") {
    TfimParams p;
    p.n_sites = 2;
    p.h_field = 0.5;
    EvolutionScanOptions opts;
    opts.n_samples = 30;
    opts.workers = 2;
    const std::vector<double> times = uniform_times(1.5, 5);
    const EvolutionScanResult r = magic_evolution_scan(p, times, 777, opts);

    REQUIRE(r.times.size() == 5);
    REQUIRE(r.delta_series.size() == 5);
    REQUIRE(r.m2_exact_series.size() == 5);

    // t = 0: no magic, fluctuation at the stabilizer ceiling
    CHECK(std::abs(r.m2_exact_series[0]) < 1e-9);
    const double d2 = 16.0;
    const double ceiling = d2 * (d2 - 2.0) / ((d2 - 1.0) * (d2 - 1.0));
    CHECK(std::abs(r.delta_series[0] - ceiling) < 0.1);
    for (double m : r.m2_per_site_exact_series)
        CHECK(m <= r.m2_exact_series[0] + 10.0);  // defined everywhere
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(r.m2_per_site_exact_series[i] ==
              doctest::Approx(r.m2_exact_series[i] / 2.0));
}
