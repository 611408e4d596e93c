// gates.hpp
// Gate matrices for q = 2 and q = 3, plus a machine check that a gate is
// Clifford (conjugates every Weyl generator to a single Weyl string up to a
// unit-modulus scalar).
//
// Single-qudit set: H, S, X, Y, Z, I and the non-Clifford T.
//   q=2: the usual qubit matrices, S = diag(1, i), T = diag(1, e^{i pi/4}).
//   q=3: H[i][j] = w^{ij}/sqrt(3); S|j> = w^{j(j-1)/2}|j>; X, Z clock/shift;
//        Y := Z X (a Weyl string, certified Clifford);
//        T = diag(1, e^{2 pi i/9}, e^{-2 pi i/9}).
// Entangler: CNOT (q=2) / CSUM (q=3), |i,j> -> |i, i+j mod q>.
//
// General-d constructors for the Clifford family (hadamard_d, phase_d, csum_d,
// clock/shift) accept any odd prime d; only d = 3 is exercised in production.

#pragma once

#include <string>

#include "msim/dense.hpp"

namespace msim {

struct GateDef {
    std::string name;
    unsigned q = 0;
    unsigned arity = 0;
    DenseOperator matrix;
};

// Named gate lookup; throws std::invalid_argument for an unknown name.
// Known names for both q=2 and q=3: H, S, X, Y, Z, I, T and the two-qudit
// entangler (CNOT for q=2, CSUM for q=3).
GateDef qubit_gate(const std::string& name);
GateDef qutrit_gate(const std::string& name);
GateDef lookup_gate(unsigned q, const std::string& name);

// General odd-prime-d Clifford constructors.
DenseOperator clock_d(unsigned d);     // Z
DenseOperator shift_d(unsigned d);     // X
DenseOperator hadamard_d(unsigned d);  // H[i][j] = w^{ij}/sqrt(d)
DenseOperator phase_d(unsigned d);     // P|j> = w^{j(j-1)/2}|j>
DenseOperator csum_d(unsigned d);      // |i,j> -> |i, i+j mod d>

// True iff conjugation by the gate maps every generator Weyl operator on its
// support to a single Weyl string times a unit-modulus scalar.  Coefficients
// are obtained by projecting onto the (orthogonal) Weyl basis; anything off
// the dominant string must stay below 1e-10.
bool is_clifford(const GateDef& gate);

// Gate names drawn for the random single-qudit layer.
inline const std::vector<std::string>& clifford_single_site_set() {
    static const std::vector<std::string> set = {"H", "S", "X", "Y", "Z", "I"};
    return set;
}

inline std::string entangler_name(unsigned q) { return q == 2 ? "CNOT" : "CSUM"; }

} // namespace msim
