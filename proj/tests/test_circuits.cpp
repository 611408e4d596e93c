#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msim/apply.hpp"
#include "msim/circuit.hpp"
#include "msim/gates.hpp"
#include "support/oracles.hpp"

using namespace msim;

TEST_CASE("clifford block op counts") {
    RngStream rng(1);
    const Circuit c3 = build_clifford_block(3, 4, 10, rng);
    CHECK(c3.ops.size() == 10 * (4 + 2));
    CHECK(c3.count_gates("T") == 0);

    RngStream rng2(2);
    const Circuit c2 = build_clifford_block(2, 2, 1, rng2);
    CHECK(c2.ops.size() == 4);
    CHECK(c2.count_gates("CNOT") == 2);

    RngStream rng3(3);
    CHECK_THROWS(build_clifford_block(2, 1, 10, rng3));
}

TEST_CASE("clifford block contains only certified cliffords") {
    RngStream rng(7);
    const Circuit c = build_clifford_block(3, 3, 10, rng);
    for (const GateOp& op : c.ops) CHECK(is_clifford(lookup_gate(3, op.gate)));
}

TEST_CASE("entangler pairs are distinct sites") {
    RngStream rng(9);
    const Circuit c = build_clifford_block(2, 5, 50, rng);
    for (const GateOp& op : c.ops)
        if (op.targets.size() == 2) CHECK(op.targets[0] != op.targets[1]);
}

TEST_CASE("t-doped circuit structure and bookkeeping") {
    RngStream rng(11);
    const Circuit c = build_tdoped_circuit(3, 4, 3, 10, rng, 11);
    CHECK(c.ops.size() == 3 * (60 + 1));
    CHECK(c.meta.n_t == 3);
    CHECK(c.count_gates("T") == 3);

    RngStream rng0(12);
    const Circuit c0 = build_tdoped_circuit(3, 4, 0, 10, rng0, 12);
    CHECK(c0.ops.size() == 60);  // one clifford block, not empty
    CHECK(c0.count_gates("T") == 0);
}

TEST_CASE("same stream seed gives identical circuits") {
    RngStream a(99), b(99);
    const Circuit ca = build_tdoped_circuit(2, 4, 2, 10, a, 99);
    const Circuit cb = build_tdoped_circuit(2, 4, 2, 10, b, 99);
    CHECK(ca == cb);
    CHECK(circuit_to_json(ca) == circuit_to_json(cb));
}

TEST_CASE("json round trip") {
    RngStream rng(5);
    const Circuit c = build_tdoped_circuit(3, 3, 2, 4, rng, 5);
    const Circuit back = circuit_from_json(circuit_to_json(c));
    CHECK(back == c);
}

TEST_CASE("json validation rejects malformed circuits") {
    RngStream rng(6);
    Circuit c = build_tdoped_circuit(2, 2, 1, 2, rng, 6);
    CHECK_THROWS(circuit_from_json("{\"q\": 2}"));

    c.ops[0].targets[0] = 7;  // out-of-range target
    CHECK_THROWS(circuit_from_json(circuit_to_json(c)));
}

TEST_CASE("sandwich ordering: C2 acts first") {
    RngStream r1(21), r2(22), r3(23);
    const Circuit c1 = build_clifford_block(2, 2, 2, r1);
    const Circuit v = build_tdoped_circuit(2, 2, 1, 2, r2, 22);
    const Circuit c2 = build_clifford_block(2, 2, 2, r3);
    const Circuit u = sandwich(c1, v, c2);
    CHECK(u.ops.size() == c1.ops.size() + v.ops.size() + c2.ops.size());
    CHECK(u.ops.front() == c2.ops.front());
    CHECK(u.ops.back() == c1.ops.back());

    // dense product oracle: U = C1 * V * C2
    const DenseOperator prod =
        circuit_unitary(c1).multiply(circuit_unitary(v)).multiply(circuit_unitary(c2));
    CHECK(circuit_unitary(u).max_abs_diff(prod) < 1e-12);

    Circuit empty;
    empty.q = 2;
    empty.n_sites = 2;
    const Circuit just_v = sandwich(empty, v, empty);
    CHECK(just_v.ops == v.ops);

    Circuit mismatched = c1;
    mismatched.n_sites = 3;
    CHECK_THROWS(sandwich(mismatched, v, c2));
}

TEST_CASE("apply_circuit equals dense unitary action") {
    RngStream rng(31);
    const Circuit c = build_tdoped_circuit(3, 2, 2, 5, rng, 31);
    QuditState s(3, 2, 4);
    QuditState via_ops = s;
    apply_circuit(via_ops, c);
    const QuditState via_dense = oracle::apply_dense_oracle(s, circuit_unitary(c));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        worst = std::max(worst, std::abs(via_ops[i] - via_dense[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("empty circuit acts as identity") {
    Circuit empty;
    empty.q = 2;
    empty.n_sites = 3;
    QuditState s(2, 3, 5);
    apply_circuit(s, empty);
    CHECK(std::abs(s[5] - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("adjoint application inverts the circuit") {
    RngStream rng(41);
    const Circuit c = build_tdoped_circuit(2, 3, 2, 5, rng, 41);
    QuditState s(2, 3, 6);
    QuditState t = s;
    apply_circuit(t, c);
    apply_circuit_adjoint(t, c);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
        worst = std::max(worst, std::abs(t[i] - s[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("compiled circuit matches op-by-op application") {
    RngStream rng(51);
    const Circuit c = build_tdoped_circuit(3, 3, 1, 6, rng, 51);
    const CompiledCircuit cc(c);
    QuditState a(3, 3, 13), b(3, 3, 13);
    apply_circuit(a, c);
    cc.apply(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst == 0.0);
}
