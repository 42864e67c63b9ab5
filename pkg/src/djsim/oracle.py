"""Boolean functions on N-bit arguments and the two oracle forms built from them."""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional

import numpy as np

from djsim.tensor import MAX_OPERATOR_QUBITS, DenseOperator, diagonal

MAX_TABLE_BITS = 20
MAX_EXHAUSTIVE_BITS = 4
MAX_FCN_BITS = MAX_OPERATOR_QUBITS - 1


class FunctionClass(Enum):
    CONSTANT0 = "constant0"
    CONSTANT1 = "constant1"
    BALANCED = "balanced"
    NEITHER = "neither"

    @property
    def satisfies_promise(self) -> bool:
        return self is not FunctionClass.NEITHER


@dataclass(frozen=True)
class TruthTable:
    """``values[x] = f(x)`` for every argument ``x`` in ``0 .. 2**n - 1``."""

    values: tuple[int, ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        size = len(vals)
        n = size.bit_length() - 1
        if size < 2 or (1 << n) != size:
            raise ValueError(f"truth table length {size} is not a power of two >= 2")
        if n > MAX_TABLE_BITS:
            raise ValueError(f"n = {n} exceeds {MAX_TABLE_BITS}")
        if any(v not in (0, 1) for v in vals):
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_ones(cls, n: int, ones: Iterable[int]) -> TruthTable:
        vals = [0] * (1 << n)
        for x in ones:
            vals[x] = 1
        return cls(tuple(vals))

    def ones(self) -> tuple[int, ...]:
        return tuple(x for x, v in enumerate(self.values) if v)

    def complement(self) -> TruthTable:
        return TruthTable(tuple(1 - v for v in self.values))

    def __call__(self, x: int) -> int:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return format_truth_table(self)


def constant_table(n: int, value: int) -> TruthTable:
    if value not in (0, 1):
        raise ValueError("constant value must be 0 or 1")
    return TruthTable((value,) * (1 << n))


def classify(tt: TruthTable) -> FunctionClass:
    ones = sum(tt.values)
    if ones == 0:
        return FunctionClass.CONSTANT0
    if ones == len(tt):
        return FunctionClass.CONSTANT1
    if 2 * ones == len(tt):
        return FunctionClass.BALANCED
    return FunctionClass.NEITHER


@dataclass(frozen=True)
class SignDiagonal:
    """Diagonal of a phase oracle, entries in {+1, -1}."""

    signs: tuple[int, ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        signs = tuple(int(s) for s in self.signs)
        size = len(signs)
        n = size.bit_length() - 1
        if size < 2 or (1 << n) != size:
            raise ValueError(f"sign diagonal length {size} is not a power of two >= 2")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("sign diagonal entries must be +1 or -1")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "n", n)

    def array(self) -> np.ndarray:
        return np.array(self.signs, dtype=np.int8)

    def operator(self) -> DenseOperator:
        return diagonal(self.signs, unitary=True)

    def __len__(self) -> int:
        return len(self.signs)


def phase_oracle(tt: TruthTable) -> SignDiagonal:
    """Signs ``(-1)**f(x)`` of the f-controlled gate ``|x> -> (-1)**f(x) |x>``."""
    return SignDiagonal(tuple(1 - 2 * v for v in tt.values))


def fcn_operator(tt: TruthTable) -> DenseOperator:
    """Permutation ``|x>_c |y>_f -> |x>_c |y XOR f(x)>_f`` on ``n + 1`` qubits.

    The function qubit is the least significant qubit, so basis index is
    ``2 * x + y``.
    """
    if tt.n > MAX_FCN_BITS:
        raise ValueError(f"f-controlled-NOT is dense; n = {tt.n} exceeds {MAX_FCN_BITS}")
    dim = 2 << tt.n
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for x, fx in enumerate(tt.values):
        for y in (0, 1):
            mat[(x << 1) | (y ^ fx), (x << 1) | y] = 1.0
    return DenseOperator(mat, unitary=True)


def iter_balanced(n: int) -> Iterator[TruthTable]:
    """Balanced tables in lexicographic order of their one-positions, uncapped."""
    if n < 1 or n > MAX_TABLE_BITS:
        raise ValueError(f"n must be in [1, {MAX_TABLE_BITS}]")
    size = 1 << n
    for ones in itertools.combinations(range(size), size // 2):
        yield TruthTable.from_ones(n, ones)


def enumerate_balanced(n: int) -> Iterator[TruthTable]:
    """Every balanced table for ``n <= 4``; ``C(2**n, 2**(n-1))`` of them."""
    if n > MAX_EXHAUSTIVE_BITS:
        raise ValueError(f"exhaustive enumeration is capped at n = {MAX_EXHAUSTIVE_BITS}")
    return iter_balanced(n)


def count_balanced(n: int) -> int:
    return math.comb(1 << n, 1 << (n - 1))


def sample_balanced(n: int, seed: int) -> TruthTable:
    """Uniform random balanced table.

    Shuffles the argument list ``0 .. 2**n - 1`` with ``random.Random(seed)``
    (Mersenne Twister, Fisher-Yates via ``shuffle``) and puts ones on the
    first half, so a given seed yields the same table on every platform.
    """
    if n < 1 or n > MAX_TABLE_BITS:
        raise ValueError(f"n must be in [1, {MAX_TABLE_BITS}]")
    positions = list(range(1 << n))
    random.Random(seed).shuffle(positions)
    return TruthTable.from_ones(n, positions[: 1 << (n - 1)])


def sample_table(n: int, seed: int) -> TruthTable:
    """Uniform random table over all ``2**(2**n)`` functions (promise not enforced)."""
    rng = random.Random(seed)
    return TruthTable(tuple(rng.getrandbits(1) for _ in range(1 << n)))


_BITS_RE = re.compile(r"[01]+")
_HEX_RE = re.compile(r"0[xX]([0-9a-fA-F]+)")


def parse_truth_table(text: str, n: Optional[int] = None) -> TruthTable:
    """Parse ``"0110"`` style bit strings or ``"0x6"`` style hex.

    The first bit (most significant hex bit) is ``f(0)``. A hex string is
    read as ``4 * digits`` bits unless ``n`` is given, in which case it is
    zero-padded or must fit into ``2**n`` bits.
    """
    text = text.strip()
    hex_match = _HEX_RE.fullmatch(text)
    if hex_match:
        digits = hex_match.group(1)
        width = 4 * len(digits) if n is None else 1 << n
        value = int(digits, 16)
        if value >> width:
            raise ValueError(f"hex value {text} does not fit into {width} bits")
        bits = format(value, f"0{width}b")
    elif _BITS_RE.fullmatch(text):
        bits = text
    else:
        raise ValueError(f"illegal characters in truth table {text!r}")
    tt = TruthTable(tuple(int(c) for c in bits))
    if n is not None and tt.n != n:
        raise ValueError(f"table has n = {tt.n}, expected {n}")
    return tt


def format_truth_table(tt: TruthTable, hex: bool = False) -> str:
    bits = "".join(str(v) for v in tt.values)
    if not hex:
        return bits
    digits = max(1, (len(bits) + 3) // 4)
    return "0x" + format(int(bits, 2), f"0{digits}x")
