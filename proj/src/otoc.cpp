#include "msim/otoc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "msim/apply.hpp"
#include "msim/numeric.hpp"
#include "msim/weyl.hpp"

namespace msim {

namespace {

using MatrixXcd = Eigen::MatrixXcd;  // column-major
using MapMat = Eigen::Map<MatrixXcd>;
using ConstMapMat = Eigen::Map<const MatrixXcd>;

// Column-major copy of a row-major DenseOperator.
std::vector<cplx> to_col_major(const DenseOperator& op) {
    const std::size_t d = op.dim();
    std::vector<cplx> out(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out[i + j * d] = op.at(i, j);
    return out;
}

// out = T . in for a column-major d x d matrix.
void weyl_times_matrix(const WeylAction& act, const cplx* in, cplx* out,
                       std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        const cplx* src = in + j * d;
        cplx* dst = out + j * d;
        for (std::size_t m = 0; m < d; ++m) dst[act.dest[m]] = act.phase[m] * src[m];
    }
}

void weyl_times_vector(const WeylAction& act, const cplx* in, cplx* out,
                       std::size_t d) {
    for (std::size_t m = 0; m < d; ++m) out[act.dest[m]] = act.phase[m] * in[m];
}

// Re[(1/d) tr(G^2)] for column-major G.
double real_trace_g_squared(const cplx* g, std::size_t d) {
    CompensatedSum re;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const cplx prod = g[j + k * d] * g[k + j * d];
            re.add(prod.real());
        }
    return re.value() / static_cast<double>(d);
}

WeylLabel single_site_shift(unsigned q, unsigned n, unsigned site) {
    WeylLabel l;
    l.z.assign(n, 0);
    l.x.assign(n, 0);
    l.x[site] = 1;
    (void)q;
    return l;
}

WeylLabel single_site_clock(unsigned q, unsigned n, unsigned site) {
    WeylLabel l;
    l.z.assign(n, 0);
    l.x.assign(n, 0);
    l.z[site] = 1;
    (void)q;
    return l;
}

void check_sites(unsigned n, unsigned a_site, unsigned b_site) {
    if (a_site >= n || b_site >= n)
        throw std::out_of_range("otoc: butterfly/probe site out of range");
    if (a_site == b_site)
        throw std::invalid_argument("otoc: butterfly and probe sites must differ");
}

// Shared scratch for one dense OTOC evaluation.
struct DenseScratch {
    std::vector<cplx> m1, m2, m3;
    explicit DenseScratch(std::size_t d) : m1(d * d), m2(d * d), m3(d * d) {}
};

// G = A'(V(B'(V^dag))) for arbitrary column actions A', B'.
template <typename ApplyA, typename ApplyB>
void build_g(const std::vector<cplx>& v_col, const std::vector<cplx>& vdag_col,
             std::size_t d, std::vector<cplx>& m1, std::vector<cplx>& out,
             ApplyA&& apply_a_cols, ApplyB&& apply_b_cols) {
    m1 = vdag_col;
    apply_b_cols(m1.data());  // B' V^dag
    ConstMapMat mv(v_col.data(), static_cast<Eigen::Index>(d),
                   static_cast<Eigen::Index>(d));
    ConstMapMat mm1(m1.data(), static_cast<Eigen::Index>(d),
                    static_cast<Eigen::Index>(d));
    MapMat mout(out.data(), static_cast<Eigen::Index>(d),
                static_cast<Eigen::Index>(d));
    mout.noalias() = mv * mm1;  // V B' V^dag
    apply_a_cols(out.data());   // A' V B' V^dag
}

// Re[(1/d) tr(Gd G)] with G = A' V B' V^dag and Gd = A'^dag V B'^dag V^dag,
// the cyclic rewrite of tr(U^dag A^dag U B^dag U^dag A U B).  When the primed
// operators are Hermitian (q = 2), Gd = G and one build suffices.
template <typename ApplyA, typename ApplyB, typename ApplyAdag, typename ApplyBdag>
double otoc_dense_eval(const std::vector<cplx>& v_col,
                       const std::vector<cplx>& vdag_col, std::size_t d,
                       bool hermitian_probes, DenseScratch& scratch,
                       ApplyA&& apply_a_cols, ApplyB&& apply_b_cols,
                       ApplyAdag&& apply_adag_cols, ApplyBdag&& apply_bdag_cols) {
    build_g(v_col, vdag_col, d, scratch.m1, scratch.m2, apply_a_cols, apply_b_cols);
    if (hermitian_probes) return real_trace_g_squared(scratch.m2.data(), d);
    build_g(v_col, vdag_col, d, scratch.m1, scratch.m3, apply_adag_cols,
            apply_bdag_cols);
    CompensatedSum re;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
            re.add((scratch.m3[j + k * d] * scratch.m2[k + j * d]).real());
    return re.value() / static_cast<double>(d);
}

// In-place Weyl action on all columns, via one column of scratch.
void weyl_cols_inplace(const WeylAction& act, cplx* buf, std::size_t d,
                       std::vector<cplx>& col_scratch) {
    for (std::size_t j = 0; j < d; ++j) {
        cplx* col = buf + j * d;
        weyl_times_vector(act, col, col_scratch.data(), d);
        std::copy(col_scratch.begin(), col_scratch.end(), col);
    }
}

WeylLabel draw_nonidentity_label(unsigned q, unsigned n, RngStream& rng) {
    const std::size_t n_labels = ipow(q, 2 * n);
    const std::size_t idx = 1 + rng.bounded(n_labels - 1);
    return WeylLabel::from_index(q, n, idx);
}

double beta_floor(std::size_t d) {
    const double d2 = static_cast<double>(d) * static_cast<double>(d);
    return 2.0 * d2 / ((d2 - 1.0) * (d2 - 1.0));
}

} // namespace

std::string to_string(SamplerMode mode) {
    return mode == SamplerMode::kCliffordCircuit ? "clifford-circuit" : "pauli-twirl";
}

SamplerMode sampler_mode_from_string(const std::string& name) {
    if (name == "clifford-circuit") return SamplerMode::kCliffordCircuit;
    if (name == "pauli-twirl") return SamplerMode::kPauliTwirl;
    throw std::invalid_argument("unknown sampler mode '" + name + "'");
}

std::pair<unsigned, unsigned> default_butterfly_sites(unsigned n_sites) {
    if (n_sites < 2)
        throw std::invalid_argument("otoc: need at least two sites");
    return {n_sites - 1, n_sites >= 3 ? 1u : 0u};
}

double otoc_exact(const Circuit& u, unsigned a_site, unsigned b_site,
                  unsigned workers) {
    const unsigned q = u.q;
    const unsigned n = u.n_sites;
    check_sites(n, a_site, b_site);
    const std::size_t d = ipow(q, n);
    if (d > 1024)
        throw std::invalid_argument("otoc_exact: dimension above the exact-trace budget (2^10)");

    const CompiledCircuit cu(u);
    const WeylLabel label_a = single_site_shift(q, n, a_site);
    const WeylLabel label_b = single_site_clock(q, n, b_site);
    // stages, rightmost first: B, U, A, U^dag, B^dag, U, A^dag, U^dag
    const WeylAction acts_b[2] = {weyl_action(q, n, label_b),
                                  weyl_action(q, n, label_b.negated(q))};
    const WeylAction acts_a[2] = {weyl_action(q, n, label_a),
                                  weyl_action(q, n, label_a.negated(q))};

    const std::size_t nchunks = std::min<std::size_t>(kReductionChunks, d);
    std::vector<double> part_re(nchunks, 0.0), part_im(nchunks, 0.0);
    parallel_for(nchunks, workers, [&](std::size_t c) {
        const std::size_t begin = d * c / nchunks;
        const std::size_t end = d * (c + 1) / nchunks;
        CompensatedSum re, im;
        std::vector<cplx> buf(d), scratch(d);
        for (std::size_t j = begin; j < end; ++j) {
            std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
            buf[j] = 1.0;
            for (int rep = 0; rep < 2; ++rep) {
                weyl_times_vector(acts_b[rep], buf.data(), scratch.data(), d);
                buf.swap(scratch);
                cu.apply_raw(buf.data());
                weyl_times_vector(acts_a[rep], buf.data(), scratch.data(), d);
                buf.swap(scratch);
                cu.apply_adjoint_raw(buf.data());
            }
            re.add(buf[j].real());
            im.add(buf[j].imag());
        }
        part_re[c] = re.value();
        part_im[c] = im.value();
    });
    CompensatedSum re, im;
    for (std::size_t c = 0; c < nchunks; ++c) {
        re.add(part_re[c]);
        im.add(part_im[c]);
    }
    // Qubit Clifford circuits conjugate A to a signed Hermitian string, so the
    // trace must be real; a residue signals a broken kernel.
    if (q == 2 && u.count_gates("T") == 0 &&
        std::abs(im.value() / static_cast<double>(d)) > 1e-8)
        throw std::runtime_error("otoc_exact: non-real trace for a Clifford-only circuit");
    return re.value() / static_cast<double>(d);
}

namespace {

OtocSampleSet sample_otoc_dense_impl(unsigned q, unsigned n,
                                     const std::vector<cplx>& v_col,
                                     const std::vector<cplx>& vdag_col,
                                     std::size_t n_samples, SamplerMode mode,
                                     std::uint64_t master_seed,
                                     const OtocOptions& opts) {
    const std::size_t d = ipow(q, n);
    const auto [def_a, def_b] = default_butterfly_sites(n);
    const unsigned a_site = opts.a_site.value_or(def_a);
    const unsigned b_site = opts.b_site.value_or(def_b);
    check_sites(n, a_site, b_site);

    OtocSampleSet set;
    set.mode = mode;
    set.master_seed = master_seed;
    set.q = q;
    set.n_sites = n;
    set.a_site = a_site;
    set.b_site = b_site;
    set.values.assign(n_samples, 0.0);

    const WeylLabel label_a = single_site_shift(q, n, a_site);
    const WeylLabel label_b = single_site_clock(q, n, b_site);
    const WeylAction act_a = weyl_action(q, n, label_a);
    const WeylAction act_b = weyl_action(q, n, label_b);
    const WeylAction act_a_dag = weyl_action(q, n, label_a.negated(q));
    const WeylAction act_b_dag = weyl_action(q, n, label_b.negated(q));
    const bool hermitian = q == 2;

    parallel_for(n_samples, opts.workers, [&](std::size_t k) {
        RngStream rng(master_seed, "otoc-sample", k);
        DenseScratch scratch(d);
        double value = 0.0;
        if (mode == SamplerMode::kPauliTwirl) {
            const WeylLabel la = draw_nonidentity_label(q, n, rng);
            const WeylLabel lb = draw_nonidentity_label(q, n, rng);
            const WeylAction pa = weyl_action(q, n, la);
            const WeylAction pb = weyl_action(q, n, lb);
            const WeylAction pa_dag = weyl_action(q, n, la.negated(q));
            const WeylAction pb_dag = weyl_action(q, n, lb.negated(q));
            std::vector<cplx> col(d);
            value = otoc_dense_eval(
                v_col, vdag_col, d, hermitian, scratch,
                [&](cplx* buf) { weyl_cols_inplace(pa, buf, d, col); },
                [&](cplx* buf) { weyl_cols_inplace(pb, buf, d, col); },
                [&](cplx* buf) { weyl_cols_inplace(pa_dag, buf, d, col); },
                [&](cplx* buf) { weyl_cols_inplace(pb_dag, buf, d, col); });
        } else {
            Circuit c1 = build_clifford_block(q, n, opts.clifford_depth, rng);
            Circuit c2 = build_clifford_block(q, n, opts.clifford_depth, rng);
            const CompiledCircuit cc1(c1), cc2(c2);
            std::vector<cplx> col(d);
            // A' = C1^dag A C1 and B' = C2 B C2^dag applied to every column
            auto conj_a = [&](const WeylAction& act) {
                return [&, act](cplx* buf) {
                    for (std::size_t j = 0; j < d; ++j) {
                        cplx* colp = buf + j * d;
                        cc1.apply_raw(colp);
                        weyl_times_vector(act, colp, col.data(), d);
                        std::copy(col.begin(), col.end(), colp);
                        cc1.apply_adjoint_raw(colp);
                    }
                };
            };
            auto conj_b = [&](const WeylAction& act) {
                return [&, act](cplx* buf) {
                    for (std::size_t j = 0; j < d; ++j) {
                        cplx* colp = buf + j * d;
                        cc2.apply_adjoint_raw(colp);
                        weyl_times_vector(act, colp, col.data(), d);
                        std::copy(col.begin(), col.end(), colp);
                        cc2.apply_raw(colp);
                    }
                };
            };
            value = otoc_dense_eval(v_col, vdag_col, d, hermitian, scratch,
                                    conj_a(act_a), conj_b(act_b),
                                    conj_a(act_a_dag), conj_b(act_b_dag));
        }
        if (std::abs(value) > 1.0 + 1e-9)
            throw std::runtime_error("sample_otoc: |OTOC| above the unitarity bound");
        set.values[k] = value;
    });
    return set;
}

// Unbiased trace estimator for dimensions above the dense budget: probe
// states with i.i.d. random phases, batched until the batch standard error
// reaches the target.  Estimates are clamped to [-1, 1] (the exact value is
// bounded; clamping only removes estimator noise).
double stochastic_chain_trace(
    const std::function<void(QuditState&)>& chain, unsigned q, unsigned n,
    RngStream& probe_rng, double target_se, std::size_t max_probes) {
    const std::size_t d = ipow(q, n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    CompensatedSum sum, sum_sq;
    std::size_t count = 0;
    constexpr std::size_t kBatch = 16;
    while (count < max_probes) {
        for (std::size_t b = 0; b < kBatch; ++b) {
            QuditState phi(q, n);
            for (std::size_t i = 0; i < d; ++i) {
                const double theta = 2.0 * std::numbers::pi * probe_rng.uniform01();
                phi[i] = cplx(amp * std::cos(theta), amp * std::sin(theta));
            }
            QuditState work = phi;
            chain(work);
            const double est = phi.inner(work).real();
            sum.add(est);
            sum_sq.add(est * est);
            ++count;
        }
        const double mean = sum.value() / static_cast<double>(count);
        const double var =
            std::max(0.0, sum_sq.value() / static_cast<double>(count) - mean * mean);
        const double se = std::sqrt(var / static_cast<double>(count));
        if (se <= target_se) break;
    }
    const double mean = sum.value() / static_cast<double>(count);
    return std::clamp(mean, -1.0, 1.0);
}

OtocSampleSet sample_otoc_stochastic(const Circuit& v, std::size_t n_samples,
                                     SamplerMode mode, std::uint64_t master_seed,
                                     const OtocOptions& opts) {
    const unsigned q = v.q;
    const unsigned n = v.n_sites;
    const auto [def_a, def_b] = default_butterfly_sites(n);
    const unsigned a_site = opts.a_site.value_or(def_a);
    const unsigned b_site = opts.b_site.value_or(def_b);
    check_sites(n, a_site, b_site);

    OtocSampleSet set;
    set.mode = mode;
    set.master_seed = master_seed;
    set.q = q;
    set.n_sites = n;
    set.a_site = a_site;
    set.b_site = b_site;
    set.values.assign(n_samples, 0.0);

    const CompiledCircuit cv(v);
    const WeylLabel label_a = single_site_shift(q, n, a_site);
    const WeylLabel label_b = single_site_clock(q, n, b_site);

    parallel_for(n_samples, opts.workers, [&](std::size_t k) {
        RngStream rng(master_seed, "otoc-sample", k);
        // per-sample objects kept alive for the probe loop
        std::shared_ptr<CompiledCircuit> cc1, cc2;
        std::shared_ptr<std::vector<WeylAction>> pa, pb;
        if (mode == SamplerMode::kPauliTwirl) {
            const WeylLabel la = draw_nonidentity_label(q, n, rng);
            const WeylLabel lb = draw_nonidentity_label(q, n, rng);
            pa = std::make_shared<std::vector<WeylAction>>(std::vector<WeylAction>{
                weyl_action(q, n, la), weyl_action(q, n, la.negated(q))});
            pb = std::make_shared<std::vector<WeylAction>>(std::vector<WeylAction>{
                weyl_action(q, n, lb), weyl_action(q, n, lb.negated(q))});
        } else {
            cc1 = std::make_shared<CompiledCircuit>(
                build_clifford_block(q, n, opts.clifford_depth, rng));
            cc2 = std::make_shared<CompiledCircuit>(
                build_clifford_block(q, n, opts.clifford_depth, rng));
            pa = std::make_shared<std::vector<WeylAction>>(std::vector<WeylAction>{
                weyl_action(q, n, label_a), weyl_action(q, n, label_a.negated(q))});
            pb = std::make_shared<std::vector<WeylAction>>(std::vector<WeylAction>{
                weyl_action(q, n, label_b), weyl_action(q, n, label_b.negated(q))});
        }
        const std::size_t d = ipow(q, n);
        // stages, rightmost first: B, U, A, U^dag, then the daggered pass
        auto chain = [&, cc1, cc2, pa, pb](QuditState& s) {
            std::vector<cplx> scratch(d);
            auto weyl_step = [&](const WeylAction& act) {
                weyl_times_vector(act, s.amplitudes().data(), scratch.data(), d);
                s.amplitudes().swap(scratch);
            };
            for (int rep = 0; rep < 2; ++rep) {
                if (mode == SamplerMode::kPauliTwirl) {
                    weyl_step((*pb)[rep]);
                    cv.apply(s);
                    weyl_step((*pa)[rep]);
                    cv.apply_adjoint(s);
                } else {
                    // B' = C2 B C2^dag, then V, then A' = C1^dag A C1, then V^dag
                    cc2->apply_adjoint(s);
                    weyl_step((*pb)[rep]);
                    cc2->apply(s);
                    cv.apply(s);
                    cc1->apply(s);
                    weyl_step((*pa)[rep]);
                    cc1->apply_adjoint(s);
                    cv.apply_adjoint(s);
                }
            }
        };
        RngStream probe_rng(master_seed, "trace-probe", k);
        set.values[k] = stochastic_chain_trace(chain, q, n, probe_rng,
                                               opts.trace_target_std_err,
                                               opts.trace_max_probes);
    });
    return set;
}

} // namespace

OtocSampleSet sample_otoc(const Circuit& v, std::size_t n_samples,
                          SamplerMode mode, std::uint64_t master_seed,
                          const OtocOptions& opts) {
    if (n_samples < 2)
        throw std::invalid_argument("sample_otoc: need at least 2 samples");
    const std::size_t d = ipow(v.q, v.n_sites);
    if (d <= opts.exact_trace_max_dim) {
        const DenseOperator dense = circuit_unitary(v);
        return sample_otoc_dense_impl(v.q, v.n_sites, to_col_major(dense),
                                      to_col_major(dense.adjoint()), n_samples,
                                      mode, master_seed, opts);
    }
    return sample_otoc_stochastic(v, n_samples, mode, master_seed, opts);
}

OtocSampleSet sample_otoc_dense(unsigned q, unsigned n_sites,
                                const DenseOperator& v, std::size_t n_samples,
                                SamplerMode mode, std::uint64_t master_seed,
                                const OtocOptions& opts) {
    if (n_samples < 2)
        throw std::invalid_argument("sample_otoc_dense: need at least 2 samples");
    const std::size_t d = ipow(q, n_sites);
    if (v.dim() != d)
        throw std::invalid_argument("sample_otoc_dense: operator dim mismatch");
    if (d > opts.exact_trace_max_dim)
        throw std::invalid_argument("sample_otoc_dense: dimension above the dense budget");
    return sample_otoc_dense_impl(q, n_sites, to_col_major(v),
                                  to_col_major(v.adjoint()), n_samples, mode,
                                  master_seed, opts);
}

DeltaEstimate delta_otoc(const OtocSampleSet& samples,
                         unsigned bootstrap_resamples) {
    const std::size_t n = samples.n_samples();
    if (n < 2) throw std::invalid_argument("delta_otoc: need at least 2 samples");
    const std::size_t d = ipow(samples.q, samples.n_sites);

    auto plugin_delta = [](const std::vector<double>& vals) {
        CompensatedSum s, s2;
        for (double v : vals) {
            s.add(v);
            s2.add(v * v);
        }
        const double mean = s.value() / static_cast<double>(vals.size());
        return std::max(0.0, s2.value() / static_cast<double>(vals.size()) - mean * mean);
    };

    DeltaEstimate est;
    est.n_samples = n;
    {
        CompensatedSum s;
        for (double v : samples.values) s.add(v);
        est.mean_otoc = s.value() / static_cast<double>(n);
    }
    est.delta = plugin_delta(samples.values);

    RngStream rng(samples.master_seed, "bootstrap");
    std::vector<double> resample(n);
    std::vector<double> deltas(bootstrap_resamples);
    for (unsigned b = 0; b < bootstrap_resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i)
            resample[i] = samples.values[rng.bounded(n)];
        deltas[b] = plugin_delta(resample);
    }
    CompensatedSum bs, bs2;
    for (double x : deltas) {
        bs.add(x);
        bs2.add(x * x);
    }
    const double bmean = bs.value() / bootstrap_resamples;
    est.delta_std_err = std::sqrt(
        std::max(0.0, bs2.value() / bootstrap_resamples - bmean * bmean));

    est.m2_estimate = m2_from_delta(est.delta, d);
    est.m2_err = m2_error(est.delta_std_err, est.delta, d);
    return est;
}

TwirlMoments exhaustive_pauli_twirl(const Circuit& v, unsigned workers) {
    const unsigned q = v.q;
    const unsigned n = v.n_sites;
    const std::size_t d = ipow(q, n);
    if (d > 64)
        throw std::invalid_argument("exhaustive_pauli_twirl: enumeration feasible only up to d = 64");
    const std::size_t n_labels = ipow(q, 2 * n);

    const DenseOperator dense = circuit_unitary(v);
    const std::vector<cplx> v_col = to_col_major(dense);
    const std::vector<cplx> vdag_col = to_col_major(dense.adjoint());

    const std::size_t n_nonid = n_labels - 1;
    const std::size_t nchunks = std::min<std::size_t>(kReductionChunks, n_nonid);
    std::vector<double> part_sum(nchunks, 0.0), part_sq(nchunks, 0.0);
    parallel_for(nchunks, workers, [&](std::size_t c) {
        const std::size_t begin = 1 + n_nonid * c / nchunks;
        const std::size_t end = 1 + n_nonid * (c + 1) / nchunks;
        CompensatedSum s, s2;
        std::vector<cplx> m1(d * d), m2(d * d), m2d(d * d), g(d * d), gd(d * d);
        ConstMapMat mv(v_col.data(), static_cast<Eigen::Index>(d),
                       static_cast<Eigen::Index>(d));
        ConstMapMat mm1(m1.data(), static_cast<Eigen::Index>(d),
                        static_cast<Eigen::Index>(d));
        for (std::size_t bi = begin; bi < end; ++bi) {
            const WeylLabel lb = WeylLabel::from_index(q, n, bi);
            // V B' V^dag and V B'^dag V^dag
            weyl_times_matrix(weyl_action(q, n, lb), vdag_col.data(), m1.data(), d);
            MapMat(m2.data(), static_cast<Eigen::Index>(d),
                   static_cast<Eigen::Index>(d)).noalias() = mv * mm1;
            weyl_times_matrix(weyl_action(q, n, lb.negated(q)), vdag_col.data(),
                              m1.data(), d);
            MapMat(m2d.data(), static_cast<Eigen::Index>(d),
                   static_cast<Eigen::Index>(d)).noalias() = mv * mm1;
            for (std::size_t ai = 1; ai < n_labels; ++ai) {
                const WeylLabel la = WeylLabel::from_index(q, n, ai);
                weyl_times_matrix(weyl_action(q, n, la), m2.data(), g.data(), d);
                weyl_times_matrix(weyl_action(q, n, la.negated(q)), m2d.data(),
                                  gd.data(), d);
                // Re tr(Gd G)/d with G = A'V B'V^dag, Gd = A'^dag V B'^dag V^dag
                CompensatedSum re;
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t k = 0; k < d; ++k)
                        re.add((gd[j + k * d] * g[k + j * d]).real());
                const double val = re.value() / static_cast<double>(d);
                s.add(val);
                s2.add(val * val);
            }
        }
        part_sum[c] = s.value();
        part_sq[c] = s2.value();
    });
    CompensatedSum s, s2;
    for (std::size_t c = 0; c < nchunks; ++c) {
        s.add(part_sum[c]);
        s2.add(part_sq[c]);
    }
    const double pairs = static_cast<double>(n_nonid) * static_cast<double>(n_nonid);
    TwirlMoments m;
    m.mean = s.value() / pairs;
    m.delta = std::max(0.0, s2.value() / pairs - m.mean * m.mean);
    return m;
}

double eq_fluctuation_forward(double m2, std::size_t d) {
    const double d2 = static_cast<double>(d) * static_cast<double>(d);
    const double g = d2 / (d2 - 1.0);
    return g * g * std::exp2(-m2) - 2.0 * d2 / ((d2 - 1.0) * (d2 - 1.0));
}

double m2_from_delta(double delta, std::size_t d) {
    const double d2 = static_cast<double>(d) * static_cast<double>(d);
    const double arg = (delta + beta_floor(d)) * ((d2 - 1.0) / d2) * ((d2 - 1.0) / d2);
    if (arg <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -std::log2(arg);
}

double m2_error(double delta_err, double delta_mean, std::size_t d) {
    const double denom = (delta_mean + beta_floor(d)) * std::numbers::ln2;
    if (denom <= 0.0)
        throw std::invalid_argument("m2_error: delta mean at or below the theoretical floor");
    return std::abs(delta_err) / denom;
}

std::pair<double, double> f_pm(std::size_t d) {
    const double dd = static_cast<double>(d);
    const double den = 5.0 * (dd * dd - 1.0);
    return {(3.0 * dd * dd - 3.0 * dd - 4.0) / den,
            (3.0 * dd * dd + 3.0 * dd - 4.0) / den};
}

std::pair<double, double> tdoped_contraction_factors(std::size_t d) {
    const double dd = static_cast<double>(d);
    const double den = 4.0 * (dd * dd - 1.0);
    return {(3.0 * dd * dd - 3.0 * dd - 4.0) / den,
            (3.0 * dd * dd + 3.0 * dd - 4.0) / den};
}

double expected_delta_tdoped(std::size_t d, unsigned t) {
    if (d <= 3)
        throw std::invalid_argument(
            "expected_delta_tdoped: valid only for d > 3 (pole at d = 3)");
    const double dd = static_cast<double>(d);
    const double d2 = dd * dd;
    const auto [fp, fm] = tdoped_contraction_factors(d);
    const double fbar = 0.5 * (fp + fm);
    const double bracket =
        4.0 * (6.0 - 9.0 * d2 + d2 * d2) / (d2 * d2 * (d2 - 9.0)) +
        (d2 - 1.0) / d2 *
            ((dd + 2.0) * (dd + 4.0) * std::pow(fp, t) / (6.0 * dd * (dd + 3.0)) +
             (dd - 2.0) * (dd - 4.0) * std::pow(fm, t) / (6.0 * dd * (dd - 3.0)) +
             2.0 * (d2 - 4.0) * std::pow(fbar, t) / (3.0 * d2));
    return d2 * d2 / ((d2 - 1.0) * (d2 - 1.0)) * bracket -
           2.0 * d2 / ((d2 - 1.0) * (d2 - 1.0));
}

double asymptotic_delta(unsigned t) { return std::pow(0.75, t); }

std::pair<double, double> m2_bounds_tdoped(std::size_t d, unsigned n_sites,
                                           unsigned t) {
    if (d <= 3)
        throw std::invalid_argument("m2_bounds_tdoped: valid only for d > 3");
    const double fp = tdoped_contraction_factors(d).first;
    const double dd = static_cast<double>(d);
    const double lower = -std::log2((4.0 + (dd - 1.0) * std::pow(fp, t)) / (3.0 + dd));
    const double upper = std::min<double>(t, n_sites - 1);
    return {lower, upper};
}

} // namespace msim
