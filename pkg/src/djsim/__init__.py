"""Deutsch problem simulation and phase-oracle separability analysis."""

from djsim.algorithms import (
    Decision,
    Method,
    RunReport,
    classical_naive,
    classical_parity,
    existing_dj,
    refined_dj,
    refined_dj_exact,
)
from djsim.oracle import (
    FunctionClass,
    SignDiagonal,
    TruthTable,
    classify,
    enumerate_balanced,
    fcn_operator,
    format_truth_table,
    parse_truth_table,
    phase_oracle,
    sample_balanced,
)
from djsim.separability import (
    CensusReport,
    FactorResult,
    census,
    factor_cut,
    find_witness,
    full_factorization,
    n2_closed_form,
    sign_identity_holds,
)
from djsim.tensor import DenseOperator, QubitCut, StateVector, apply, hadamard, kron, prob_zero, schmidt_rank

__version__ = "0.1.0"
