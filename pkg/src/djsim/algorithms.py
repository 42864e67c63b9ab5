"""Decision procedures for the Deutsch problem.

Two quantum simulations (the N-qubit phase-oracle circuit and the
(N+1)-qubit circuit with a function register) and two classical
baselines, all returning a :class:`RunReport` with query counters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from djsim.oracle import MAX_FCN_BITS, MAX_TABLE_BITS, TruthTable, classify, fcn_operator, phase_oracle
from djsim.tensor import (
    QubitCut,
    apply,
    apply_diagonal,
    basis_state,
    hadamard_each,
    prob_qubits_zero,
    prob_zero,
    schmidt_rank,
)

PROMISE_TOL = 1e-10


class Method(Enum):
    REFINED = "refined"
    EXISTING = "existing"
    CLASSICAL_NAIVE = "naive"
    CLASSICAL_PARITY = "parity"


class Decision(Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    # Only produced in strict mode, for tables outside the promise.
    PROMISE_VIOLATED = "promise_violated"


@dataclass(frozen=True)
class RunReport:
    method: Method
    decision: Decision
    p_zero: Optional[float] = None
    value_queries: int = 0
    parity_queries: int = 0
    product_check: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "decision": self.decision.value,
            "p_zero": self.p_zero,
            "value_queries": self.value_queries,
            "parity_queries": self.parity_queries,
            "product_check": self.product_check,
        }


def _quantum_decision(p: float, strict: bool) -> Decision:
    if strict and min(abs(p), abs(p - 1.0)) > PROMISE_TOL:
        return Decision.PROMISE_VIOLATED
    return Decision.CONSTANT if p > 0.5 else Decision.BALANCED


def refined_dj(tt: TruthTable, strict: bool = False) -> RunReport:
    """``|0..0> -> H^n -> U_f -> H^n`` and read the ``|0..0>`` probability.

    Uses N qubits and a single application of the diagonal oracle.
    """
    if tt.n > MAX_TABLE_BITS:
        raise ValueError(f"n = {tt.n} exceeds the pipeline cap")
    psi = hadamard_each(basis_state(tt.n))
    psi = apply_diagonal(phase_oracle(tt).array(), psi)
    psi = hadamard_each(psi)
    p = prob_zero(psi)
    return RunReport(Method.REFINED, _quantum_decision(p, strict), p_zero=p, value_queries=1)


def existing_dj(tt: TruthTable, strict: bool = False) -> RunReport:
    """Circuit with control register plus one function qubit.

    Starts in ``|0..0>_c |1>_f``, applies H to all N+1 qubits, then the
    f-controlled-NOT, then H on the control register only. The function
    qubit is qubit 0; the Schmidt rank across control/function is taken
    right after the oracle.
    """
    if tt.n > MAX_FCN_BITS:
        raise ValueError(f"n = {tt.n} exceeds the dense operator cap of {MAX_FCN_BITS}")
    n = tt.n
    control = range(1, n + 1)
    psi = hadamard_each(basis_state(n + 1, 1))
    psi = apply(fcn_operator(tt), psi)
    rank = schmidt_rank(psi, QubitCut.of(n + 1, control))
    psi = hadamard_each(psi, control)
    p = prob_qubits_zero(psi, control)
    return RunReport(
        Method.EXISTING,
        _quantum_decision(p, strict),
        p_zero=p,
        value_queries=1,
        product_check=rank,
    )


def sign_sum(tt: TruthTable) -> int:
    """``S = sum_x (-1)**f(x)`` in integer arithmetic."""
    return len(tt) - 2 * sum(tt.values)


def refined_dj_exact(tt: TruthTable) -> Fraction:
    """Closed form of the refined circuit: ``p_zero = (S / 2**n)**2``."""
    return Fraction(sign_sum(tt), len(tt)) ** 2


def _promise_broken(tt: TruthTable, strict: bool) -> bool:
    # Audit step outside the query model; not counted.
    return strict and not classify(tt).satisfies_promise


def classical_naive(tt: TruthTable, strict: bool = False) -> RunReport:
    """Read f(0), f(1), ... until two values differ or ``2**(n-1) + 1`` agree."""
    budget = (1 << (tt.n - 1)) + 1
    first = tt(0)
    queries = 1
    decision = Decision.CONSTANT
    for x in range(1, budget):
        queries += 1
        if tt(x) != first:
            decision = Decision.BALANCED
            break
    if _promise_broken(tt, strict):
        decision = Decision.PROMISE_VIOLATED
    return RunReport(Method.CLASSICAL_NAIVE, decision, value_queries=queries)


def classical_parity(tt: TruthTable, strict: bool = False) -> RunReport:
    """Check the parity of ``f(0) + f(k)`` for ``k = 1 .. 2**(n-1)``.

    Any odd parity means balanced; all even means constant. Each parity
    check counts as one parity query and no value queries.
    """
    queries = 0
    decision = Decision.CONSTANT
    for k in range(1, (1 << (tt.n - 1)) + 1):
        queries += 1
        if (tt(0) + tt(k)) % 2:
            decision = Decision.BALANCED
            break
    if _promise_broken(tt, strict):
        decision = Decision.PROMISE_VIOLATED
    return RunReport(Method.CLASSICAL_PARITY, decision, parity_queries=queries)


RUNNERS = {
    Method.REFINED: refined_dj,
    Method.EXISTING: existing_dj,
    Method.CLASSICAL_NAIVE: classical_naive,
    Method.CLASSICAL_PARITY: classical_parity,
}


def run(tt: TruthTable, method: Method, strict: bool = False) -> RunReport:
    return RUNNERS[method](tt, strict=strict)
