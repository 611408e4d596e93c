#include "msim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "msim/numeric.hpp"

namespace msim {

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& y_errs) {
    const std::size_t n = xs.size();
    if (n < 3) throw std::invalid_argument("fit_linear: need at least 3 points");
    if (ys.size() != n || y_errs.size() != n)
        throw std::invalid_argument("fit_linear: length mismatch");

    CompensatedSum S, Sx, Sy, Sxx, Sxy;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y_errs[i] > 0.0))
            throw std::invalid_argument("fit_linear: errors must be positive");
        const double w = 1.0 / (y_errs[i] * y_errs[i]);
        S.add(w);
        Sx.add(w * xs[i]);
        Sy.add(w * ys[i]);
        Sxx.add(w * xs[i] * xs[i]);
        Sxy.add(w * xs[i] * ys[i]);
    }
    const double s = S.value(), sx = Sx.value(), sy = Sy.value();
    const double sxx = Sxx.value(), sxy = Sxy.value();
    const double det = s * sxx - sx * sx;
    if (!(std::abs(det) > 1e-14 * std::max(1.0, s * sxx)))
        throw std::invalid_argument("fit_linear: degenerate design (all x equal?)");

    LinearFit fit;
    fit.slope = (s * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    fit.slope_err = std::sqrt(s / det);
    fit.intercept_err = std::sqrt(sxx / det);
    return fit;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return compensated_total(xs) / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean_of(xs);
    CompensatedSum acc;
    for (double x : xs) acc.add((x - m) * (x - m));
    return std::sqrt(acc.value() / static_cast<double>(n - 1));
}

double pearson_correlation(const std::vector<double>& xs,
                           const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (ys.size() != n || n < 2)
        throw std::invalid_argument("pearson_correlation: need two equal-length series");
    const double mx = mean_of(xs), my = mean_of(ys);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < n; ++i) {
        sxy.add((xs[i] - mx) * (ys[i] - my));
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        syy.add((ys[i] - my) * (ys[i] - my));
    }
    const double denom = std::sqrt(sxx.value() * syy.value());
    if (denom == 0.0)
        throw std::invalid_argument("pearson_correlation: zero-variance series");
    return sxy.value() / denom;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    return pearson_correlation(average_ranks(xs), average_ranks(ys));
}

} // namespace msim
