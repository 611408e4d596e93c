// state.hpp
// Dense statevector over N qudits of prime local dimension q.
//
// Amplitude ordering is big-endian in the site index: site 0 is the most
// significant digit of the basis index, i.e. index = sum_s digit_s * q^(N-1-s).
// This convention is shared by the circuit JSON format and every module.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "msim/numeric.hpp"

namespace msim {

inline std::size_t ipow(std::size_t base, unsigned exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

class QuditState {
public:
    // |0...0> on n_sites qudits.
    QuditState(unsigned q, unsigned n_sites)
        : q_(check_q(q)), n_sites_(n_sites), amps_(ipow(q, n_sites)) {
        amps_[0] = 1.0;
    }

    // Computational basis state |index>.
    QuditState(unsigned q, unsigned n_sites, std::size_t basis_index)
        : q_(check_q(q)), n_sites_(n_sites), amps_(ipow(q, n_sites)) {
        if (basis_index >= amps_.size())
            throw std::out_of_range("QuditState: basis index out of range");
        amps_[basis_index] = 1.0;
    }

    QuditState(unsigned q, unsigned n_sites, std::vector<cplx> amplitudes)
        : q_(check_q(q)), n_sites_(n_sites), amps_(std::move(amplitudes)) {
        if (amps_.size() != ipow(q, n_sites))
            throw std::invalid_argument("QuditState: amplitude count != q^n_sites");
    }

    unsigned q() const { return q_; }
    unsigned n_sites() const { return n_sites_; }
    std::size_t dim() const { return amps_.size(); }

    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    // Stride of one step in the given site's digit.
    std::size_t stride(unsigned site) const { return ipow(q_, n_sites_ - 1 - site); }

    unsigned digit(std::size_t index, unsigned site) const {
        return static_cast<unsigned>((index / stride(site)) % q_);
    }

    double norm() const {
        CompensatedSum s;
        for (const cplx& a : amps_) s.add(std::norm(a));
        return std::sqrt(s.value());
    }

    cplx inner(const QuditState& other) const {
        if (other.dim() != dim())
            throw std::invalid_argument("QuditState::inner: dimension mismatch");
        cplx r = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            r += std::conj(amps_[i]) * other.amps_[i];
        return r;
    }

private:
    static unsigned check_q(unsigned q) {
        if (q < 2) throw std::invalid_argument("QuditState: q must be >= 2");
        return q;
    }

    unsigned q_;
    unsigned n_sites_;
    std::vector<cplx> amps_;
};

// |a> (x) |b>; a occupies the leading (most significant) sites.
QuditState tensor_product(const QuditState& a, const QuditState& b);

} // namespace msim
