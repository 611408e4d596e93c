#include "msim/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "msim/magic.hpp"

namespace msim {

DenseOperator build_tfim(const TfimParams& params) {
    const unsigned n = params.n_sites;
    if (n < 2) throw std::invalid_argument("build_tfim: need at least 2 sites");
    const std::size_t d = ipow(2, n);
    if (d > kDenseCap) throw std::invalid_argument("build_tfim: dim exceeds dense cap");

    DenseOperator h(d);
    // site s occupies bit (n-1-s); big-endian, matching QuditState
    auto bit_of = [&](std::size_t idx, unsigned s) -> int {
        return static_cast<int>((idx >> (n - 1 - s)) & 1u);
    };
    for (std::size_t idx = 0; idx < d; ++idx) {
        double zz = 0.0;
        for (unsigned s = 0; s + 1 < n; ++s) {
            const int za = 1 - 2 * bit_of(idx, s);
            const int zb = 1 - 2 * bit_of(idx, s + 1);
            zz += za * zb;
        }
        h.at(idx, idx) = -params.j_coupling * zz;
        for (unsigned s = 0; s < n; ++s) {
            const std::size_t flipped = idx ^ (std::size_t{1} << (n - 1 - s));
            h.at(flipped, idx) += -params.h_field;
        }
    }
    return h;
}

DenseOperator evolution_unitary(const DenseOperator& hamiltonian, double time) {
    const std::size_t d = hamiltonian.dim();
    if (hamiltonian.hermiticity_defect() > 1e-10)
        throw std::invalid_argument("evolution_unitary: Hamiltonian not Hermitian");

    Eigen::MatrixXcd hm(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) hm(i, j) = hamiltonian.at(i, j);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hm);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("evolution_unitary: eigendecomposition failed");

    Eigen::VectorXcd phases(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double lam = solver.eigenvalues()(static_cast<Eigen::Index>(k));
        phases(static_cast<Eigen::Index>(k)) = std::polar(1.0, -lam * time);
    }
    const Eigen::MatrixXcd u = solver.eigenvectors() * phases.asDiagonal() *
                               solver.eigenvectors().adjoint();
    DenseOperator out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out.at(i, j) = u(i, j);
    return out;
}

std::vector<double> uniform_times(double t_max, unsigned n_points) {
    if (n_points < 2) throw std::invalid_argument("uniform_times: need at least 2 points");
    std::vector<double> ts(n_points);
    for (unsigned k = 0; k < n_points; ++k)
        ts[k] = t_max * static_cast<double>(k) / (n_points - 1);
    return ts;
}

EvolutionScanResult magic_evolution_scan(const TfimParams& params,
                                         const std::vector<double>& times,
                                         std::uint64_t master_seed,
                                         const EvolutionScanOptions& opts) {
    const unsigned n = params.n_sites;
    const DenseOperator h = build_tfim(params);

    EvolutionScanResult res;
    res.times = times;
    const std::size_t np = times.size();
    res.delta_series.resize(np);
    res.delta_err_series.resize(np);
    res.m2_exact_series.resize(np);
    res.m2_per_site_exact_series.resize(np);
    res.m2_estimated_series.resize(np);
    res.m2_err_series.resize(np);

    SreOptions sre_opts;
    sre_opts.workers = opts.workers;
    sre_opts.max_sites = std::max(12u, 2 * n);

    for (std::size_t ti = 0; ti < np; ++ti) {
        const DenseOperator u_t = evolution_unitary(h, times[ti]);
        const double m2_exact =
            stabilizer_renyi_entropy(choi_state(2, n, u_t), 2, sre_opts);

        OtocOptions oo;
        oo.clifford_depth = opts.clifford_depth;
        oo.workers = opts.workers;
        oo.bootstrap_resamples = opts.bootstrap_resamples;
        const OtocSampleSet samples = sample_otoc_dense(
            2, n, u_t, opts.n_samples, opts.mode,
            derive_seed(master_seed, "time-point", ti), oo);
        const DeltaEstimate est = delta_otoc(samples, opts.bootstrap_resamples);

        res.delta_series[ti] = est.delta;
        res.delta_err_series[ti] = est.delta_std_err;
        res.m2_exact_series[ti] = m2_exact;
        res.m2_per_site_exact_series[ti] = m2_exact / n;
        res.m2_estimated_series[ti] = est.m2_estimate;
        res.m2_err_series[ti] = est.m2_err;
    }
    return res;
}

} // namespace msim
