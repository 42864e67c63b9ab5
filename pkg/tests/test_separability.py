import itertools
import random

import pytest

from djsim.oracle import TruthTable, constant_table, enumerate_balanced, parse_truth_table, phase_oracle
from djsim.separability import (
    Separability,
    Tally,
    census,
    factor_cut,
    find_witness,
    full_factorization,
    n2_closed_form,
    sign_identity_holds,
    tally,
)
from djsim.tensor import QubitCut, apply_diagonal, basis_state, diagonal, hadamard_each, kron, schmidt_rank, split_by_cut

import brute

WITNESS_N3 = TruthTable.from_ones(3, [0, 1, 2, 4])


def all_cuts(n):
    for size in range(1, n):
        for side in itertools.combinations(range(n), size):
            yield QubitCut.of(n, side)


class TestFactorCut:
    def test_balanced_n2(self):
        for tt in enumerate_balanced(2):
            assert factor_cut(phase_oracle(tt), QubitCut.single(2, 0)).separable

    def test_witness_example(self):
        r = factor_cut(phase_oracle(WITNESS_N3), QubitCut.single(3, 0))
        assert r.status is Separability.ENTANGLED
        assert r.witness == (0, 1, 0, 1)
        d = phase_oracle(WITNESS_N3).signs
        assert d[0] * d[3] == -1 and d[1] * d[2] == 1
        assert not brute.separable_by_search(d, [0], 3)

    @pytest.mark.parametrize("n", [2, 3])
    def test_constant_every_cut(self, n):
        for v in (0, 1):
            for cut in all_cuts(n):
                assert factor_cut(phase_oracle(constant_table(n, v)), cut).separable

    @pytest.mark.parametrize("n", [2, 3])
    def test_agrees_with_search_every_cut(self, n):
        for values in brute.balanced_tables(n):
            d = phase_oracle(TruthTable(values))
            for cut in all_cuts(n):
                expected = brute.separable_by_search(d.signs, sorted(cut.side_a), n)
                assert factor_cut(d, cut).separable is expected

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_reconstruction_and_witness_validity(self, n):
        rng = random.Random(n)
        for _ in range(40):
            signs = tuple(rng.choice((1, -1)) for _ in range(1 << n))
            d = phase_oracle(TruthTable(tuple((1 - s) // 2 for s in signs)))
            for cut in all_cuts(n):
                r = factor_cut(d, cut)
                if r.separable:
                    assert r.reconstruct() == d
                else:
                    a, a2, b, b2 = r.witness
                    m = split_by_cut(d.array(), cut)
                    assert m[a, b] * m[a2, b2] != m[a, b2] * m[a2, b]

    def test_global_sign_on_qubit_zero_side(self):
        d = phase_oracle(parse_truth_table("1100"))
        r = factor_cut(d, QubitCut.of(2, [1]))
        assert r.factor_a == (1, -1)
        assert r.factor_b == (-1, -1)
        r = factor_cut(d, QubitCut.of(2, [0]))
        assert r.factor_a == (-1, -1)
        assert r.factor_b == (1, -1)


class TestClosedForm:
    @pytest.mark.parametrize(
        "text,u1,u0",
        [("0101", (1, 1), (1, -1)), ("0011", (1, -1), (1, 1)), ("1100", (1, -1), (-1, -1))],
    )
    def test_examples(self, text, u1, u0):
        got1, got0 = n2_closed_form(parse_truth_table(text))
        assert got1.signs == u1 and got0.signs == u0

    def test_kron_reproduces_oracle(self):
        for tt in enumerate_balanced(2):
            u1, u0 = n2_closed_form(tt)
            assert kron(u1.operator(), u0.operator()).allclose(phase_oracle(tt).operator(), atol=0)

    def test_1100_product(self):
        u1, u0 = n2_closed_form(parse_truth_table("1100"))
        assert kron(u1.operator(), u0.operator()).allclose(diagonal([-1, -1, 1, 1]), atol=0)

    @pytest.mark.parametrize("text", ["0000", "1000", "11101000"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            n2_closed_form(parse_truth_table(text))


class TestFullFactorization:
    def test_balanced_n2_matches_closed_form(self):
        for tt in enumerate_balanced(2):
            full = full_factorization(phase_oracle(tt))
            u1, u0 = n2_closed_form(tt)
            assert full.separable
            assert full.factors == (u0.signs, u1.signs)

    def test_linear_n3(self):
        tt = TruthTable(tuple((x & 1) ^ ((x >> 2) & 1) for x in range(8)))
        assert brute.fully_product_by_search(phase_oracle(tt).signs, 3)
        full = full_factorization(phase_oracle(tt))
        assert full.separable
        assert full.reconstruct() == phase_oracle(tt)

    def test_witness_table_fails_at_qubit_zero(self):
        assert not brute.fully_product_by_search(phase_oracle(WITNESS_N3).signs, 3)
        full = full_factorization(phase_oracle(WITNESS_N3))
        assert not full.separable
        assert full.failure.cut == QubitCut.single(3, 0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_agrees_with_search(self, n):
        for values in brute.all_tables(n) if n < 3 else brute.balanced_tables(n):
            d = phase_oracle(TruthTable(values))
            full = full_factorization(d)
            assert full.separable is brute.fully_product_by_search(d.signs, n)
            if full.separable:
                assert full.reconstruct() == d
            else:
                assert not full.failure.separable

    def test_later_failure_reports_full_register_cut(self):
        # qubit 0 factors out, qubits 1 and 2 are entangled with each other
        tt = TruthTable(tuple(((x >> 1) & 1) & ((x >> 2) & 1) for x in range(8)))
        full = full_factorization(phase_oracle(tt))
        assert not full.separable
        assert full.failure.cut == QubitCut.single(3, 1)


class TestSignIdentity:
    def test_balanced(self):
        assert all(sign_identity_holds(tt) for tt in enumerate_balanced(2))

    def test_constant(self):
        assert sign_identity_holds(constant_table(2, 0)) and sign_identity_holds(constant_table(2, 1))

    def test_neither(self):
        assert not sign_identity_holds(parse_truth_table("1000"))

    def test_equivalent_to_product_form(self):
        for values in brute.all_tables(2):
            tt = TruthTable(values)
            assert sign_identity_holds(tt) is full_factorization(phase_oracle(tt)).separable


class TestCensus:
    def test_n1(self):
        rep = census(1)
        assert rep.total_balanced == 2 and rep.fully_product == 2 and rep.always_unentangled_qubits == {0}

    def test_n2(self):
        rep = census(2)
        assert rep.total_balanced == 6
        assert rep.per_qubit_separable == (6, 6)
        assert rep.fully_product == 6
        assert rep.always_unentangled_qubits == {0, 1}

    def test_n3(self):
        rep = census(3)
        assert rep.total_balanced == 70
        assert rep.always_unentangled_qubits == frozenset()
        assert rep.fully_product == 14 == 2 * (2**3 - 1)
        expected = [
            sum(brute.separable_by_search(brute.signs_of(v), [m], 3) for v in brute.balanced_tables(3))
            for m in range(3)
        ]
        assert list(rep.per_qubit_separable) == expected == [22, 22, 22]

    def test_rejects_n5(self):
        with pytest.raises(ValueError):
            census(5)

    def test_worker_count_does_not_matter(self):
        assert census(3, workers=1) == census(3, workers=3)

    def test_merge_order_independent(self):
        tables = list(enumerate_balanced(3))
        parts = [tally(tables[i::7], 3) for i in range(7)]
        a = sum(parts, Tally(3))
        random.Random(0).shuffle(parts)
        b = sum(parts, Tally(3))
        assert a == b == tally(tables, 3)

    def test_monotone(self):
        for n in (2, 3):
            rep = census(n)
            assert rep.fully_product <= min(rep.per_qubit_separable)
            assert max(rep.per_qubit_separable) <= rep.total_balanced


class TestWitness:
    def test_n3_qubit0(self):
        assert find_witness(3, 0) == WITNESS_N3

    @pytest.mark.parametrize("m", range(3))
    def test_n3_every_qubit(self, m):
        tt = find_witness(3, m)
        assert tt is not None
        assert not brute.separable_by_search(phase_oracle(tt).signs, [m], 3)

    @pytest.mark.parametrize("m", range(4))
    def test_n4_every_qubit(self, m):
        tt = find_witness(4, m)
        assert tt.ones() == (0, 1, 2, 3, 4, 5, 6, 8)

    @pytest.mark.parametrize("n,m", [(1, 0), (2, 0), (2, 1)])
    def test_none_for_small_n(self, n, m):
        assert find_witness(n, m) is None

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            find_witness(3, 5)


def test_operator_and_state_separability_coincide():
    for tt in enumerate_balanced(3):
        d = phase_oracle(tt)
        psi = apply_diagonal(d.array(), hadamard_each(basis_state(3)))
        for m in range(3):
            cut = QubitCut.single(3, m)
            assert factor_cut(d, cut).separable is (schmidt_rank(psi, cut) == 1)
