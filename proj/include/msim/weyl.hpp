// weyl.hpp
// Heisenberg-Weyl (generalized Pauli) strings and their matrix-free action.
//
// Per site, with clock Z|n> = w^n|n> and shift X|n> = |n+1 mod q>, w = e^{2pi i/q}:
//   odd q : T_{aa'} = w^{-inv2 * a a'} Z^a X^{a'},  inv2 = (q+1)/2
//   q = 2 : T_{aa'} = (-i)^{a a'} Z^a X^{a'}  (the Hermitian Pauli convention:
//           a=a'=1 is the standard Y, every string has a real expectation)
// A string is the tensor product over sites; every string is a generalized
// permutation, which is what WeylAction tabulates.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "msim/state.hpp"

namespace msim {

struct WeylLabel {
    std::vector<unsigned> z;  // clock exponents a, one per site, in [0, q)
    std::vector<unsigned> x;  // shift exponents a', one per site, in [0, q)

    unsigned n_sites() const { return static_cast<unsigned>(z.size()); }

    // Label of the adjoint operator: T(label)^dag = T(-label).
    WeylLabel negated(unsigned q) const;

    bool is_identity() const {
        for (unsigned v : z) if (v) return false;
        for (unsigned v : x) if (v) return false;
        return true;
    }

    // Enumeration order used everywhere a label is mapped to an integer:
    // index = sum_s (z_s * q + x_s) * q^{2(N-1-s)},
    // i.e. lexicographic in the per-site (z, x) digit pairs.
    static WeylLabel from_index(unsigned q, unsigned n_sites, std::size_t index);
    std::size_t to_index(unsigned q) const;
};

// Tabulated action T|m> = phase[m] |dest[m]>.
struct WeylAction {
    std::vector<std::uint32_t> dest;
    std::vector<cplx> phase;
};

WeylAction weyl_action(unsigned q, unsigned n_sites, const WeylLabel& label);

// Applies the Weyl string in place; O(q^N), no matrix materialized.
void apply_weyl_string(QuditState& state, const WeylLabel& label);

// <state| T_label |state>, O(q^N).
cplx weyl_expectation(const QuditState& state, const WeylLabel& label);

// Symplectic commutation exponent k in T_b T_a = w^k T_a T_b:
// k = sum_s (x_a[s] * z_b[s] - z_a[s] * x_b[s]) mod q.
unsigned weyl_commutation_exponent(unsigned q, const WeylLabel& a, const WeylLabel& b);

} // namespace msim
