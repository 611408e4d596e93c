#include "msim/state.hpp"

namespace msim {

QuditState tensor_product(const QuditState& a, const QuditState& b) {
    if (a.q() != b.q())
        throw std::invalid_argument("tensor_product: local dimensions differ");
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] == cplx(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a[i] * b[j];
    }
    return QuditState(a.q(), a.n_sites() + b.n_sites(), std::move(amps));
}

} // namespace msim
