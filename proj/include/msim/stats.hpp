// stats.hpp
// Weighted least squares and the small statistics helpers the experiment
// drivers share.

#pragma once

#include <cstddef>
#include <vector>

namespace msim {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_err = 0.0;
    double intercept_err = 0.0;
};

// Weighted least squares, weights 1/err^2.  Requires >= 3 points, strictly
// positive errors, and a non-degenerate design (not all x equal).
LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& y_errs);

double mean_of(const std::vector<double>& xs);

// Sample standard deviation (n-1 denominator); 0 for fewer than 2 values.
double sample_std(const std::vector<double>& xs);

double pearson_correlation(const std::vector<double>& xs,
                           const std::vector<double>& ys);

// Spearman rank correlation with average ranks on ties.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace msim
