// dense.hpp
// Small dense complex operators (row-major).  Only ever materialized at desk
// scale; the cap guards the 12-qubit scans from accidental d x d allocations.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "msim/numeric.hpp"

namespace msim {

// Largest dimension for which dense matrices may be built (2^13).
inline constexpr std::size_t kDenseCap = 8192;

class DenseOperator {
public:
    DenseOperator() : dim_(0) {}

    explicit DenseOperator(std::size_t dim)
        : dim_(check_dim(dim)), entries_(dim * dim) {}

    DenseOperator(std::size_t dim, std::vector<cplx> entries)
        : dim_(check_dim(dim)), entries_(std::move(entries)) {
        if (entries_.size() != dim * dim)
            throw std::invalid_argument("DenseOperator: entry count != dim^2");
    }

    static DenseOperator identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const cplx& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    cplx& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const std::vector<cplx>& entries() const { return entries_; }
    std::vector<cplx>& entries() { return entries_; }

    DenseOperator adjoint() const;
    DenseOperator multiply(const DenseOperator& rhs) const;
    DenseOperator kron(const DenseOperator& rhs) const;
    cplx trace() const;

    // max_ij |(U^dag U - I)_ij|
    double unitarity_defect() const;
    bool is_unitary(double tol = 1e-10) const { return unitarity_defect() <= tol; }

    // max_ij |(A - A^dag)_ij|
    double hermiticity_defect() const;

    double max_abs_diff(const DenseOperator& rhs) const;

private:
    static std::size_t check_dim(std::size_t dim) {
        if (dim == 0) throw std::invalid_argument("DenseOperator: dim must be positive");
        if (dim > kDenseCap)
            throw std::invalid_argument("DenseOperator: dim exceeds dense cap (8192)");
        return dim;
    }

    std::size_t dim_;
    std::vector<cplx> entries_;
};

} // namespace msim
