"""Tensor factorization of diagonal phase oracles.

A sign diagonal ``d`` reshaped across a cut into ``M[a, b]`` factors as
``u (x) v`` exactly when ``M`` is a rank-1 sign matrix. Since no entry is
zero, comparing every entry against row 0 and column 0 decides this:

    M[a, b] * M[0, 0] == M[a, 0] * M[0, b]   for all a, b.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from djsim.oracle import (
    MAX_EXHAUSTIVE_BITS,
    FunctionClass,
    SignDiagonal,
    TruthTable,
    classify,
    enumerate_balanced,
    iter_balanced,
    phase_oracle,
)
from djsim.tensor import QubitCut, join_by_cut, split_by_cut


class Separability(Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class FactorResult:
    """Outcome of a rank-1 test across one cut.

    ``factor_a``/``factor_b`` are sign vectors indexed like the rows and
    columns of :func:`djsim.tensor.split_by_cut`. The global sign sits on
    the side that holds qubit 0; the other factor starts with +1.
    ``witness`` is ``(a, a2, b, b2)`` with
    ``M[a,b] * M[a2,b2] != M[a,b2] * M[a2,b]``.
    """

    status: Separability
    cut: QubitCut
    factor_a: Optional[tuple[int, ...]] = None
    factor_b: Optional[tuple[int, ...]] = None
    witness: Optional[tuple[int, int, int, int]] = None

    @property
    def separable(self) -> bool:
        return self.status is Separability.SEPARABLE

    def reconstruct(self) -> SignDiagonal:
        if not self.separable:
            raise ValueError("entangled result has no factors")
        outer = np.outer(self.factor_a, self.factor_b)
        return SignDiagonal(tuple(int(s) for s in join_by_cut(outer, self.cut)))

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "cut": {"side_a": sorted(self.cut.side_a), "side_b": sorted(self.cut.side_b)},
            "factor_a": list(self.factor_a) if self.factor_a is not None else None,
            "factor_b": list(self.factor_b) if self.factor_b is not None else None,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def factor_cut(d: SignDiagonal, cut: QubitCut) -> FactorResult:
    if cut.n != d.n:
        raise ValueError(f"cut is over {cut.n} qubits, diagonal has {d.n}")
    m = split_by_cut(d.array().astype(np.int64), cut)
    ref = m[0, 0]
    col, row = m[:, 0], m[0, :]
    ok = m * ref == np.outer(col, row)
    if not ok.all():
        a, b = (int(i) for i in np.argwhere(~ok)[0])
        return FactorResult(Separability.ENTANGLED, cut, witness=(0, a, 0, b))
    if 0 in cut.side_a:
        fa, fb = col, row * ref
    else:
        fa, fb = col * ref, row
    return FactorResult(
        Separability.SEPARABLE,
        cut,
        factor_a=tuple(int(s) for s in fa),
        factor_b=tuple(int(s) for s in fb),
    )


@dataclass(frozen=True)
class FullFactorization:
    """Per-qubit sign factors, or the single-qubit cut where peeling failed.

    ``factors[m]`` is ``(s_m(0), s_m(1))`` for qubit ``m``; qubit 0 carries
    the global sign, every other factor starts with +1.
    """

    n: int
    factors: Optional[tuple[tuple[int, int], ...]] = None
    failure: Optional[FactorResult] = None

    @property
    def separable(self) -> bool:
        return self.factors is not None

    def reconstruct(self) -> SignDiagonal:
        if self.factors is None:
            raise ValueError("factorization failed")
        signs = []
        for x in range(1 << self.n):
            s = 1
            for q, fac in enumerate(self.factors):
                s *= fac[(x >> q) & 1]
            signs.append(s)
        return SignDiagonal(tuple(signs))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "fully_product": self.separable,
            "factors": [list(f) for f in self.factors] if self.factors is not None else None,
            "failing_cut": self.failure.as_dict() if self.failure is not None else None,
        }


def full_factorization(d: SignDiagonal) -> FullFactorization:
    """Peel qubits 0, 1, ... off with repeated single-qubit cuts.

    Succeeds iff ``d_x = c * prod_m s_m ** x_m``. On failure at qubit ``m``
    the reported cut is ``{m} | rest`` of the full register, which is
    entangled whenever the peeled remainder is.
    """
    n = d.n
    factors: list[tuple[int, int]] = []
    rest = d
    for m in range(n - 1):
        r = factor_cut(rest, QubitCut.single(rest.n, 0))
        if not r.separable:
            failure = factor_cut(d, QubitCut.single(n, m))
            assert not failure.separable
            return FullFactorization(n, failure=failure)
        factors.append((r.factor_a[0], r.factor_a[1]))
        rest = SignDiagonal(r.factor_b)
    factors.append((rest.signs[0], rest.signs[1]))
    return FullFactorization(n, factors=tuple(factors))


def n2_closed_form(tt: TruthTable) -> tuple[SignDiagonal, SignDiagonal]:
    """``(U_1, U_0)`` with ``U_f = U_1 (x) U_0`` for a balanced two-bit f.

    ``U_1 = diag(1, (-1)**(f(0)+f(2)))`` and
    ``U_0 = (-1)**f(0) * diag(1, (-1)**(f(0)+f(1)))``.
    """
    if tt.n != 2:
        raise ValueError("closed form applies to n = 2 only")
    if classify(tt) is not FunctionClass.BALANCED:
        raise ValueError("closed form requires a balanced function")
    f = tt.values
    u1 = SignDiagonal((1, (-1) ** (f[0] + f[2])))
    g = (-1) ** f[0]
    u0 = SignDiagonal((g, g * (-1) ** (f[0] + f[1])))
    return u1, u0


def sign_identity_holds(tt: TruthTable) -> bool:
    """Whether ``(-1)**f(3) == (-1)**(f(0)+f(1)+f(2))`` for a two-bit f."""
    if tt.n != 2:
        raise ValueError("identity is stated for n = 2")
    return sum(tt.values) % 2 == 0


@dataclass(frozen=True)
class Tally:
    """Additive census counters; ``+`` is commutative and associative."""

    n: int
    total: int = 0
    per_qubit: tuple[int, ...] = field(default=())
    fully_product: int = 0

    def __add__(self, other: Tally) -> Tally:
        if self.n != other.n:
            raise ValueError("cannot merge tallies for different n")
        per = tuple(a + b for a, b in zip(self._per(), other._per()))
        return Tally(self.n, self.total + other.total, per, self.fully_product + other.fully_product)

    def _per(self) -> tuple[int, ...]:
        return self.per_qubit or (0,) * self.n


def tally(tables: Iterable[TruthTable], n: int) -> Tally:
    per = [0] * n
    total = full = 0
    cuts = [QubitCut.single(n, m) for m in range(n)] if n > 1 else []
    for tt in tables:
        d = phase_oracle(tt)
        total += 1
        if n == 1:
            per[0] += 1
        for m, cut in enumerate(cuts):
            per[m] += factor_cut(d, cut).separable
        full += full_factorization(d).separable
    return Tally(n, total, tuple(per), full)


def _tally_chunk(args: tuple[int, Sequence[tuple[int, ...]]]) -> Tally:
    n, chunk = args
    return tally((TruthTable(v) for v in chunk), n)


@dataclass(frozen=True)
class CensusReport:
    n: int
    total_balanced: int
    per_qubit_separable: tuple[int, ...]
    fully_product: int
    always_unentangled_qubits: frozenset[int]

    @classmethod
    def from_tally(cls, t: Tally) -> CensusReport:
        per = t._per()
        always = frozenset(m for m, c in enumerate(per) if c == t.total)
        return cls(t.n, t.total, per, t.fully_product, always)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "total_balanced": self.total_balanced,
            "per_qubit_separable": list(self.per_qubit_separable),
            "fully_product": self.fully_product,
            "always_unentangled_qubits": sorted(self.always_unentangled_qubits),
        }


def census(n: int, workers: int = 1) -> CensusReport:
    """Count balanced n-bit oracles by separability.

    With ``workers > 1`` the enumeration is split into chunks tallied in
    separate processes; the merged counts do not depend on the split.
    """
    if n < 1 or n > MAX_EXHAUSTIVE_BITS:
        raise ValueError(f"census needs 1 <= n <= {MAX_EXHAUSTIVE_BITS}")
    if workers <= 1:
        return CensusReport.from_tally(tally(enumerate_balanced(n), n))
    tables = [tt.values for tt in enumerate_balanced(n)]
    n_chunks = workers * 4
    chunks = [(n, tables[i::n_chunks]) for i in range(n_chunks)]
    total = Tally(n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_tally_chunk, chunks):
            total = total + part
    return CensusReport.from_tally(total)


def find_witness(n: int, m: int) -> Optional[TruthTable]:
    """First balanced table, in enumeration order, entangling qubit ``m`` with the rest.

    Returns ``None`` when no such table exists (``n <= 2``). The answer
    depends on the lexicographic enumeration order, not on any notion of
    minimality.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= m < n:
        raise ValueError(f"qubit {m} out of range for n = {n}")
    if n == 1:
        return None
    cut = QubitCut.single(n, m)
    for tt in iter_balanced(n):
        if not factor_cut(phase_oracle(tt), cut).separable:
            return tt
    return None
