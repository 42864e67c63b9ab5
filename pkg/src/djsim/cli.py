"""``djsim`` command line: run, census, factor, witness.

Exit codes: 0 success, 2 invalid input, 3 promise violation under
``--strict``. Machine-readable output is JSON by default.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable, Optional, Sequence

from djsim.algorithms import Decision, Method, RunReport, refined_dj_exact, run
from djsim.oracle import (
    FunctionClass,
    TruthTable,
    classify,
    constant_table,
    format_truth_table,
    parse_truth_table,
    phase_oracle,
    sample_balanced,
)
from djsim.separability import (
    CensusReport,
    census,
    factor_cut,
    find_witness,
    full_factorization,
    n2_closed_form,
)
from djsim.tensor import QubitCut

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PROMISE = 3

_SIGNS = {"type": "array", "items": {"enum": [1, -1]}}
_NULLABLE_SIGNS = {"anyOf": [_SIGNS, {"type": "null"}]}
_FACTOR_RESULT = {
    "type": "object",
    "required": ["status", "cut", "factor_a", "factor_b", "witness"],
    "properties": {
        "status": {"enum": ["separable", "entangled"]},
        "cut": {
            "type": "object",
            "required": ["side_a", "side_b"],
            "properties": {
                "side_a": {"type": "array", "items": {"type": "integer"}},
                "side_b": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "factor_a": _NULLABLE_SIGNS,
        "factor_b": _NULLABLE_SIGNS,
        "witness": {
            "anyOf": [
                {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4},
                {"type": "null"},
            ]
        },
    },
}
_RUN_REPORT = {
    "type": "object",
    "required": ["method", "decision", "p_zero", "value_queries", "parity_queries", "product_check"],
    "properties": {
        "method": {"enum": [m.value for m in Method]},
        "decision": {"enum": [d.value for d in Decision]},
        "p_zero": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
        "value_queries": {"type": "integer", "minimum": 0},
        "parity_queries": {"type": "integer", "minimum": 0},
        "product_check": {"type": ["integer", "null"], "minimum": 1},
    },
}
_CENSUS = {
    "type": "object",
    "required": ["n", "total_balanced", "per_qubit_separable", "fully_product", "always_unentangled_qubits"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "total_balanced": {"type": "integer", "minimum": 0},
        "per_qubit_separable": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "fully_product": {"type": "integer", "minimum": 0},
        "always_unentangled_qubits": {"type": "array", "items": {"type": "integer"}},
    },
}

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "inputs", "results"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["run", "census", "factor", "witness"]},
        "inputs": {"type": "object"},
        "results": {"type": "object"},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"const": "run"}}},
            "then": {
                "properties": {
                    "results": {
                        "type": "object",
                        "required": ["table", "n", "class", "p_zero_exact", "reports"],
                        "properties": {"reports": {"type": "array", "items": _RUN_REPORT}},
                    }
                }
            },
        },
        {
            "if": {"properties": {"command": {"const": "census"}}},
            "then": {"properties": {"results": _CENSUS}},
        },
        {
            "if": {"properties": {"command": {"const": "factor"}}},
            "then": {
                "properties": {
                    "results": {
                        "type": "object",
                        "required": ["table", "n", "class"],
                        "properties": {"cut_result": _FACTOR_RESULT},
                    }
                }
            },
        },
        {
            "if": {"properties": {"command": {"const": "witness"}}},
            "then": {
                "properties": {
                    "results": {
                        "type": "object",
                        "required": ["exists", "table"],
                        "properties": {
                            "exists": {"type": "boolean"},
                            "table": {"type": ["string", "null"]},
                            "cut_result": {"anyOf": [_FACTOR_RESULT, {"type": "null"}]},
                        },
                    }
                }
            },
        },
    ],
}

RUN_CSV_COLUMNS = ["method", "decision", "p_zero", "value_queries", "parity_queries", "product_check"]
CENSUS_CSV_COLUMNS = ["row_type", "n", "qubit", "total_balanced", "separable", "always_unentangled"]


class InputError(Exception):
    """Bad flags or oracle text; maps to exit code 2."""


def parse_oracle(text: str, n: Optional[int] = None) -> TruthTable:
    """Accept a truth table, ``random:N:seed`` (balanced) or ``constant:N:v``."""
    parts = text.split(":")
    try:
        if parts[0] == "random" and len(parts) == 3:
            return sample_balanced(int(parts[1]), int(parts[2]))
        if parts[0] == "constant" and len(parts) == 3:
            return constant_table(int(parts[1]), int(parts[2]))
        return parse_truth_table(text, n)
    except ValueError as exc:
        raise InputError(f"bad oracle {text!r}: {exc}") from exc


def parse_cut(text: str, n: int) -> QubitCut:
    try:
        qubits = [int(q) for q in text.split(",") if q.strip() != ""]
        return QubitCut.of(n, qubits)
    except ValueError as exc:
        raise InputError(f"bad cut {text!r} for n = {n}: {exc}") from exc


def record(command: str, inputs: dict, results: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs, "results": results}


def _to_csv(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(["" if v is None else v for v in row] for row in rows)
    return buf.getvalue()


def _fmt_float(p: Optional[float]) -> str:
    return "-" if p is None else f"{p:.12g}"


def cmd_run(args: argparse.Namespace) -> tuple[dict, str, str, int]:
    tt = parse_oracle(args.oracle, args.n)
    methods = list(Method) if args.method == "all" else [Method(args.method)]
    reports: list[RunReport] = [run(tt, m, strict=args.strict) for m in methods]
    cls = classify(tt)
    doc = record(
        "run",
        {"oracle": args.oracle, "method": args.method, "strict": args.strict},
        {
            "table": format_truth_table(tt),
            "n": tt.n,
            "class": cls.value,
            "p_zero_exact": str(refined_dj_exact(tt)),
            "reports": [r.as_dict() for r in reports],
        },
    )
    csv_text = _to_csv(RUN_CSV_COLUMNS, [[r.as_dict()[c] for c in RUN_CSV_COLUMNS] for r in reports])
    lines = [f"table {format_truth_table(tt)} (n={tt.n}, {cls.value})"]
    for r in reports:
        extra = "" if r.product_check is None else f" schmidt_rank={r.product_check}"
        lines.append(
            f"  {r.method.value:<9} {r.decision.value:<16} p_zero={_fmt_float(r.p_zero)}"
            f" value_queries={r.value_queries} parity_queries={r.parity_queries}{extra}"
        )
    violated = any(r.decision is Decision.PROMISE_VIOLATED for r in reports)
    return doc, csv_text, "\n".join(lines) + "\n", EXIT_PROMISE if violated else EXIT_OK


def _census_csv(rep: CensusReport) -> str:
    rows = [
        ["qubit", rep.n, m, rep.total_balanced, c, int(m in rep.always_unentangled_qubits)]
        for m, c in enumerate(rep.per_qubit_separable)
    ]
    rows.append(["summary", rep.n, None, rep.total_balanced, rep.fully_product, len(rep.always_unentangled_qubits)])
    return _to_csv(CENSUS_CSV_COLUMNS, rows)


def cmd_census(args: argparse.Namespace) -> tuple[dict, str, str, int]:
    try:
        rep = census(args.n, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc = record("census", {"n": args.n}, rep.as_dict())
    lines = [f"n={rep.n}: {rep.total_balanced} balanced functions, {rep.fully_product} fully product"]
    for m, c in enumerate(rep.per_qubit_separable):
        lines.append(f"  qubit {m}: separable for {c} of {rep.total_balanced}")
    always = ", ".join(map(str, sorted(rep.always_unentangled_qubits))) or "none"
    lines.append(f"  always unentangled qubits: {always}")
    return doc, _census_csv(rep), "\n".join(lines) + "\n", EXIT_OK


def cmd_factor(args: argparse.Namespace) -> tuple[dict, str, str, int]:
    tt = parse_oracle(args.oracle, args.n)
    d = phase_oracle(tt)
    cls = classify(tt)
    results: dict = {"table": format_truth_table(tt), "n": tt.n, "class": cls.value}
    lines = [f"table {format_truth_table(tt)} (n={tt.n}, {cls.value})"]
    if args.cut is not None:
        if tt.n < 2:
            raise InputError("a cut needs at least two qubits")
        cut_result = factor_cut(d, parse_cut(args.cut, tt.n))
        results["cut_result"] = cut_result.as_dict()
        sides = f"{sorted(cut_result.cut.side_a)}|{sorted(cut_result.cut.side_b)}"
        if cut_result.separable:
            lines.append(f"  cut {sides}: separable, factor_a={cut_result.factor_a} factor_b={cut_result.factor_b}")
        else:
            lines.append(f"  cut {sides}: entangled, witness (a, a', b, b') = {cut_result.witness}")
    full = full_factorization(d)
    if args.cut is None:
        results["factorization"] = full.as_dict()
        if full.separable:
            for q, fac in enumerate(full.factors):
                lines.append(f"  qubit {q}: diag{fac}")
        else:
            fail = full.failure
            lines.append(f"  not fully product; fails at cut {sorted(fail.cut.side_a)}|rest, witness {fail.witness}")
    if tt.n == 2 and cls is FunctionClass.BALANCED:
        u1, u0 = n2_closed_form(tt)
        agrees = full.separable and full.factors[1] == u1.signs and full.factors[0] == u0.signs
        if not agrees:
            raise RuntimeError(f"closed-form factors disagree with generic factorization for {tt}")
        results["closed_form"] = {"U_1": list(u1.signs), "U_0": list(u0.signs), "agrees": agrees}
        lines.append(f"  closed form: U_1=diag{u1.signs} U_0=diag{u0.signs} (agrees)")
    inputs = {"oracle": args.oracle, "cut": args.cut}
    return record("factor", inputs, results), "", "\n".join(lines) + "\n", EXIT_OK


def cmd_witness(args: argparse.Namespace) -> tuple[dict, str, str, int]:
    try:
        tt = find_witness(args.n, args.qubit)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    results: dict = {"exists": tt is not None, "table": None, "ones": None, "cut_result": None}
    if tt is None:
        text = f"no balanced n={args.n} function entangles qubit {args.qubit} with the rest\n"
    else:
        res = factor_cut(phase_oracle(tt), QubitCut.single(args.n, args.qubit))
        results.update(table=format_truth_table(tt), ones=list(tt.ones()), cut_result=res.as_dict())
        text = (
            f"witness for qubit {args.qubit}: {format_truth_table(tt)} (ones at {list(tt.ones())}),"
            f" violating quadruple {res.witness}\n"
        )
    return record("witness", {"n": args.n, "qubit": args.qubit}, results), "", text, EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="djsim", description="Deutsch problem simulator and oracle separability tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="decide constant vs balanced")
    p.add_argument("--method", choices=[m.value for m in Method] + ["all"], default="all")
    p.add_argument("--oracle", required=True, help="bits like 0110, hex like 0x6, random:N:seed or constant:N:v")
    p.add_argument("--n", type=_positive_int, default=None, help="input bits, to size hex tables")
    p.add_argument("--strict", action="store_true", help="exit 3 on tables outside the promise")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("census", help="separability counts over all balanced functions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("factor", help="factor the phase oracle across a cut or fully")
    p.add_argument("--oracle", required=True)
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--cut", default=None, help="comma-separated qubits on side a, e.g. 0 or 0,2")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(handler=cmd_factor)

    p = sub.add_parser("witness", help="first balanced function entangling a qubit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--qubit", type=int, required=True)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(handler=cmd_witness)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[Callable[[str], object]] = None) -> int:
    out = out or sys.stdout.write
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        doc, csv_text, text, code = args.handler(args)
    except InputError as exc:
        print(f"djsim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        out(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        out(csv_text)
    else:
        out(text)
    if code == EXIT_PROMISE:
        print("djsim: promise violated: table is neither constant nor balanced", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
