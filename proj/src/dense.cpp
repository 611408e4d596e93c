#include "msim/dense.hpp"

#include <algorithm>
#include <cmath>

namespace msim {

DenseOperator DenseOperator::identity(std::size_t dim) {
    DenseOperator op(dim);
    for (std::size_t i = 0; i < dim; ++i) op.at(i, i) = 1.0;
    return op;
}

DenseOperator DenseOperator::adjoint() const {
    DenseOperator r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            r.at(j, i) = std::conj(at(i, j));
    return r;
}

DenseOperator DenseOperator::multiply(const DenseOperator& rhs) const {
    if (rhs.dim_ != dim_)
        throw std::invalid_argument("DenseOperator::multiply: dimension mismatch");
    DenseOperator r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const cplx aik = at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* rhs_row = rhs.entries_.data() + k * dim_;
            cplx* out_row = r.entries_.data() + i * dim_;
            for (std::size_t j = 0; j < dim_; ++j) out_row[j] += aik * rhs_row[j];
        }
    }
    return r;
}

DenseOperator DenseOperator::kron(const DenseOperator& rhs) const {
    const std::size_t rd = rhs.dim_;
    DenseOperator r(dim_ * rd);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            const cplx a = at(i, j);
            if (a == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < rd; ++k)
                for (std::size_t l = 0; l < rd; ++l)
                    r.at(i * rd + k, j * rd + l) = a * rhs.at(k, l);
        }
    return r;
}

cplx DenseOperator::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double DenseOperator::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            cplx acc = 0.0;  // (U^dag U)_ij = sum_k conj(U_ki) U_kj
            for (std::size_t k = 0; k < dim_; ++k)
                acc += std::conj(at(k, i)) * at(k, j);
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

double DenseOperator::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

double DenseOperator::max_abs_diff(const DenseOperator& rhs) const {
    if (rhs.dim_ != dim_)
        throw std::invalid_argument("DenseOperator::max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        worst = std::max(worst, std::abs(entries_[i] - rhs.entries_[i]));
    return worst;
}

} // namespace msim
