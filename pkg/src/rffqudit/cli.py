"""Command-line frontend.

Subcommands:

    census     sector table (formula cross-checked against diagonalization)
    basis      dump the logical-sector kets plus orthonormality residuals
    encode     encode a logical state (and optionally a POVM) into payloads
    verify     run named invariant suites, exit 0 only if everything passes
    channel    collective-noise Monte Carlo with a seed-deterministic report
    reference  dump a closed-form operator family by case id

Global flags may appear before or after the subcommand; the value closest to
the subcommand wins. Exit codes: 0 success, 1 verification/claim failure,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .channel import ChannelConfig, run_channel
from .coupling import (
    build_coupled_basis,
    gram_residual,
    multiplicity,
    sector_census,
    sector_index_set,
    sector_membership_residual,
)
from .encoder import QuditPovm, QuditState, build_q_set, encode_povm, encode_state
from .errors import (
    ConsistencyError,
    ContractViolationError,
    RffError,
    SizeLimitError,
    ValidationError,
)
from .linalg import (
    get_max_constituents,
    matrix_from_json_dict,
    matrix_to_json_dict,
    set_max_constituents,
)
from .reference import REFERENCE_CASES
from .spinsys import SpinRegister
from .verify import DEFAULT_SEED, SUITES, run_suite

DEFAULT_TRIALS = 100


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a flag parsed before the subcommand from being clobbered
    # by the subparser's defaults.
    parser.add_argument(
        "--tol", type=float, default=argparse.SUPPRESS,
        help="uniform tolerance override for every check "
             "(default: each check's documented tolerance)",
    )
    parser.add_argument(
        "--max-n", type=int, default=argparse.SUPPRESS, dest="max_n",
        help="largest register size, 2..14 (default: RFF_MAX_N env var or 12)",
    )
    parser.add_argument(
        "--format", choices=("json", "csv"), default=argparse.SUPPRESS,
        help="output format (default json)",
    )
    parser.add_argument(
        "--output", default=argparse.SUPPRESS,
        help="output file path (default stdout)",
    )
    parser.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS,
        help=f"random seed for randomized checks and the channel "
             f"(default {DEFAULT_SEED})",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rffqudit",
        description="rotation-invariant logical qudits from spin-1/2 registers",
    )
    _add_global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="sector multiplicities for one register size")
    _add_global_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of constituents")

    p = sub.add_parser("basis", help="dump the logical-sector basis kets")
    _add_global_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of constituents")
    p.add_argument(
        "--coupling", default="fourier",
        help='"fourier" (default) or a path to a coupling matrix in JSON form',
    )

    p = sub.add_parser("encode", help="encode a logical state (and POVM) into payloads")
    _add_global_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of constituents")
    p.add_argument(
        "--state", required=True,
        help="path to the logical density matrix in JSON form",
    )
    p.add_argument(
        "--povm",
        help='path to a logical POVM: JSON array of matrices or {"elements": [...]}',
    )

    p = sub.add_parser("verify", help="run invariant suites")
    _add_global_flags(p)
    p.add_argument(
        "--n-range", default="3..6", dest="n_range",
        help='register sizes as "a..b" (default 3..6)',
    )
    p.add_argument("--suite", choices=SUITES, default="all")

    p = sub.add_parser("channel", help="collective-noise Monte Carlo")
    _add_global_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of constituents")
    p.add_argument(
        "--state",
        help="path to the logical density matrix in JSON form "
             "(default: the first logical basis state)",
    )
    p.add_argument("--noise", choices=("haar", "fixed", "dephasing"), default="haar")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--axis", help='unit vector "x,y,z" for --noise fixed')
    p.add_argument("--angle", type=float, help="rotation angle for --noise fixed")
    p.add_argument("--width", type=float, help="angle spread for --noise dephasing")

    p = sub.add_parser("reference", help="dump a closed-form operator family")
    _add_global_flags(p)
    p.add_argument("--case", required=True, help="case id (see --case help on error)")
    return parser


def _global_opts(ns: argparse.Namespace) -> tuple:
    tol = getattr(ns, "tol", None)
    if tol is not None and tol <= 0:
        raise ValidationError(f"--tol must be positive, got {tol}")
    max_n = getattr(ns, "max_n", None)
    if max_n is not None:
        set_max_constituents(max_n)  # flag wins over RFF_MAX_N and the default
    fmt = getattr(ns, "format", "json")
    output = getattr(ns, "output", None)
    seed = getattr(ns, "seed", DEFAULT_SEED)
    return tol, fmt, output, seed


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _dump_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _require_register_size(n: int, smallest: int) -> None:
    ceiling = get_max_constituents()
    if not smallest <= n <= ceiling:
        raise ValidationError(
            f"--n must be in {smallest}..{ceiling} (ceiling from --max-n), got {n}"
        )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_census(ns: argparse.Namespace) -> int:
    _, fmt, output, _ = _global_opts(ns)
    _require_register_size(ns.n, 2)
    agreement = True
    note = None
    try:
        specs = sector_census(SpinRegister(ns.n))
    except ConsistencyError as exc:
        # Mismatch against diagonalization: still print the formula-side
        # table, flag the disagreement, and exit 1.
        agreement = False
        note = str(exc)
        rows = [
            (str(j), multiplicity(ns.n, j), int(2 * j + 1))
            for j in sector_index_set(ns.n)
        ]
    else:
        rows = [(str(s.j), s.multiplicity, s.dimension) for s in specs]

    if fmt == "json":
        payload = {
            "n": ns.n,
            "agreement": agreement,
            "sectors": [
                {"j": j, "multiplicity": m, "dimension": dim} for j, m, dim in rows
            ],
        }
        if note:
            payload["note"] = note
        _emit(_dump_json(payload), output)
    else:
        _emit(_dump_csv(
            ["n", "j", "multiplicity", "dimension", "agreement"],
            [[ns.n, j, m, dim, agreement] for j, m, dim in rows],
        ), output)
    if not agreement:
        print(f"verification failure: {note}", file=sys.stderr)
        return 1
    return 0


def _load_coupling(ns: argparse.Namespace):
    if ns.coupling == "fourier":
        return None
    return matrix_from_json_dict(_read_json_file(ns.coupling))


def cmd_basis(ns: argparse.Namespace) -> int:
    _, fmt, output, _ = _global_opts(ns)
    _require_register_size(ns.n, 3)
    basis = build_coupled_basis(SpinRegister(ns.n), _load_coupling(ns))
    gram = gram_residual(basis)
    membership = sector_membership_residual(basis)

    if fmt == "json":
        kets = {}
        for m2 in basis.m2_values():
            for lam in range(1, basis.d + 1):
                kets[f"m2={m2},lambda={lam}"] = matrix_to_json_dict(basis.ket(m2, lam))
        _emit(_dump_json({
            "n": basis.n,
            "j2": str(basis.j2),
            "d": basis.d,
            "coupling_fingerprint": basis.fingerprint,
            "gram_residual": gram,
            "sector_membership_residual": membership,
            "kets": kets,
        }), output)
    else:
        rows = []
        for m2 in basis.m2_values():
            for lam in range(1, basis.d + 1):
                ket = basis.ket(m2, lam)
                rows.extend(
                    ["ket", str(m2), lam, idx, repr(float(z.real)), repr(float(z.imag))]
                    for idx, z in enumerate(ket)
                )
        rows.append(["residual", "", "", "gram", repr(gram), ""])
        rows.append(["residual", "", "", "sector_membership", repr(membership), ""])
        _emit(_dump_csv(["record", "m2", "lambda", "index", "re", "im"], rows), output)
    return 0


def _load_povm(path: str, d: int) -> QuditPovm:
    obj = _read_json_file(path)
    if isinstance(obj, dict) and "elements" in obj:
        obj = obj["elements"]
    if not isinstance(obj, list):
        raise ValidationError(
            f'{path} must hold a JSON array of matrices or {{"elements": [...]}}'
        )
    return QuditPovm(d=d, elements=tuple(matrix_from_json_dict(e) for e in obj))


def cmd_encode(ns: argparse.Namespace) -> int:
    _, fmt, output, _ = _global_opts(ns)
    _require_register_size(ns.n, 3)
    d = ns.n - 1
    rho = matrix_from_json_dict(_read_json_file(ns.state))
    state = QuditState(d=d, rho=rho)
    qs = build_q_set(build_coupled_basis(SpinRegister(ns.n)))
    enc = encode_state(qs, state)

    born_rows = []
    povm_payloads = None
    if ns.povm:
        povm = _load_povm(ns.povm, d)
        encoded_elements = encode_povm(qs, povm)
        povm_payloads = [matrix_to_json_dict(e.payload) for e in encoded_elements]
        for k, (element, enc_el) in enumerate(zip(povm.elements, encoded_elements)):
            logical_p = float(np.trace(state.rho @ element).real)
            encoded_p = float(np.trace(enc.payload @ enc_el.payload).real)
            born_rows.append({
                "element": k,
                "logical": logical_p,
                "encoded": encoded_p,
                "deviation": abs(encoded_p - logical_p),
            })

    if fmt == "json":
        payload = {
            "n": ns.n,
            "d": d,
            "coupling_fingerprint": qs.fingerprint,
            "state_payload": matrix_to_json_dict(enc.payload),
        }
        if povm_payloads is not None:
            payload["povm_payloads"] = povm_payloads
            payload["born_table"] = born_rows
            payload["max_deviation"] = max(r["deviation"] for r in born_rows)
        _emit(_dump_json(payload), output)
    elif born_rows:
        _emit(_dump_csv(
            ["element", "logical", "encoded", "deviation"],
            [[r["element"], repr(r["logical"]), repr(r["encoded"]),
              repr(r["deviation"])] for r in born_rows],
        ), output)
    else:
        flat = enc.payload.reshape(-1)
        dim = enc.payload.shape[0]
        _emit(_dump_csv(
            ["row", "col", "re", "im"],
            [[idx // dim, idx % dim, repr(float(z.real)), repr(float(z.imag))]
             for idx, z in enumerate(flat)],
        ), output)
    return 0


def _parse_n_range(text: str) -> range:
    parts = text.split("..")
    if len(parts) != 2:
        raise ValidationError(f'--n-range must look like "3..6", got {text!r}')
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ValidationError(f'--n-range must look like "3..6", got {text!r}') from exc
    ceiling = get_max_constituents()
    if not 2 <= lo <= hi <= ceiling:
        raise ValidationError(
            f"--n-range must satisfy 2 <= a <= b <= {ceiling}, got {text}"
        )
    return range(lo, hi + 1)


def cmd_verify(ns: argparse.Namespace) -> int:
    tol, fmt, output, seed = _global_opts(ns)
    n_values = _parse_n_range(ns.n_range)
    results = run_suite(ns.suite, tol=tol, seed=seed, n_values=n_values)
    all_passed = all(r.passed for r in results)

    if fmt == "json":
        _emit(_dump_json({
            "suite": ns.suite,
            "n_range": ns.n_range,
            "checks": [r.as_dict() for r in results],
            "passed": all_passed,
        }), output)
    else:
        _emit(_dump_csv(
            ["id", "description", "residual", "tolerance", "passed"],
            [[r.id, r.description, repr(r.residual), repr(r.tolerance), r.passed]
             for r in results],
        ), output)

    if not all_passed:
        for r in results:
            if not r.passed:
                print(
                    f"FAILED {r.id}: residual {r.residual:.6e} exceeds "
                    f"tolerance {r.tolerance:g}",
                    file=sys.stderr,
                )
        return 1
    return 0


def _parse_axis(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise ValidationError(f'--axis must look like "0,0,1", got {text!r}') from exc
    if len(parts) != 3:
        raise ValidationError(f"--axis needs exactly three components, got {text!r}")
    return parts


def cmd_channel(ns: argparse.Namespace) -> int:
    _, fmt, output, seed = _global_opts(ns)
    _require_register_size(ns.n, 3)
    d = ns.n - 1
    if ns.state:
        rho = matrix_from_json_dict(_read_json_file(ns.state))
    else:
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = 1.0
    state = QuditState(d=d, rho=rho)
    cfg = ChannelConfig(
        n=ns.n,
        trials=ns.trials,
        seed=seed,
        noise=ns.noise,
        axis=_parse_axis(ns.axis) if ns.axis else None,
        angle=ns.angle,
        width=ns.width,
    )
    report = run_channel(cfg, state)
    _emit(report.to_json() + "\n" if fmt == "json" else report.to_csv(), output)
    return 0


def cmd_reference(ns: argparse.Namespace) -> int:
    _, fmt, output, _ = _global_opts(ns)
    if ns.case not in REFERENCE_CASES:
        raise ValidationError(
            f"unknown reference case {ns.case!r}; valid ids: "
            + ", ".join(sorted(REFERENCE_CASES))
        )
    case = REFERENCE_CASES[ns.case]
    matrices = case.build()

    if fmt == "json":
        _emit(_dump_json({
            "case": case.id,
            "description": case.description,
            "formulas": case.formulas,
            "matrices": {
                name: matrix_to_json_dict(m) for name, m in matrices.items()
            },
        }), output)
    else:
        rows = []
        for name, m in matrices.items():
            m = np.asarray(m)
            for idx, z in enumerate(m.reshape(-1)):
                rows.append([
                    name, idx // m.shape[1], idx % m.shape[1],
                    repr(float(z.real)), repr(float(z.imag)),
                ])
        _emit(_dump_csv(["name", "row", "col", "re", "im"], rows), output)
    return 0


_DISPATCH = {
    "census": cmd_census,
    "basis": cmd_basis,
    "encode": cmd_encode,
    "verify": cmd_verify,
    "channel": cmd_channel,
    "reference": cmd_reference,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 2 if code is None else int(code)
    try:
        return _DISPATCH[ns.command](ns)
    except (ValidationError, ContractViolationError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RffError as exc:  # ConsistencyError, NumericalError: claim failures
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
