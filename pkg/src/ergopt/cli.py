"""Command-line front end: every computation behind file I/O.

Inputs and outputs are JSON (matrices as row lists, symbols 0-based on the
wire) or CSV for sweeps.  Exit codes: 0 ok, 2 malformed input, 3 numeric
failure, 4 unresolved limit classification.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import aubry, maxplus, shifts, thermo, zerotemp

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_UNRESOLVED = 4


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_potential(path: str) -> np.ndarray:
    data = _load_json(path)
    try:
        return thermo.potential_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad potential in {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def cmd_perron(args) -> int:
    A = _load_potential(args.input)
    data = _load_json(args.input)
    beta = args.beta if args.beta is not None else float(data.get("beta", 1.0))
    st = thermo.thermo_state(A, beta)
    _dump(thermo.state_to_json(st), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    A = _load_potential(args.input)
    sched = zerotemp.make_beta_schedule(args.beta_min, args.beta_max,
                                        args.steps, args.schedule)
    result = zerotemp.beta_sweep(A, sched)
    if any(p.error for p in result.points):
        _emit(zerotemp.sweep_to_csv(result), args.out)
        return EXIT_NUMERIC
    _emit(zerotemp.sweep_to_csv(result), args.out)
    return EXIT_OK


def cmd_aubry(args) -> int:
    A = _load_potential(args.input)
    data = aubry.aubry_set(A, tol=args.tol)
    _dump(aubry.aubry_to_json(data), args.out)
    if args.out:
        # human-readable summary alongside the file
        for row in data.T_aubry:
            print(" ".join(str(int(x)) for x in row))
        for comp in data.components:
            print(f"component {sorted(comp.symbols)}: entropy {comp.entropy:.6f}")
    return EXIT_OK


def cmd_subaction(args) -> int:
    A = _load_potential(args.input)
    m = aubry.max_ergodic_value(A)
    V = aubry.calibrated_subaction(A)
    _dump({"m_A": m, "V": [float(x) for x in V],
           "residual": aubry.calibration_residual(A, V, m)}, args.out)
    return EXIT_OK


def cmd_maxplus(args) -> int:
    data = _load_json(args.input)
    try:
        M = maxplus.matrix_from_json(data["M"] if isinstance(data, dict)
                                     else data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc
    if not np.isfinite(M).all():
        raise InputError("eigen solving needs real entries; -inf matrices "
                         "are verification-only")
    lam, v = maxplus.mp_eigen(M)
    _dump({"lambda": lam, "v": [float(x) for x in v]}, args.out)
    return EXIT_OK


def cmd_ch7(args) -> int:
    data = _load_json(args.input)
    try:
        params = zerotemp.Chapter7Params(np.asarray(data["eps"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad eps matrix: {exc}") from exc
    analysis = zerotemp.limit_selection_chapter7(params)
    _dump(zerotemp.analysis_to_json(analysis), args.out)
    return EXIT_OK if analysis.status == "resolved" else EXIT_UNRESOLVED


def cmd_ldp(args) -> int:
    data = _load_json(args.input)
    A = thermo.potential_from_json(data)
    try:
        w = shifts.word_from_json(data["word"])
        shifts.validate_word(w, A.shape[0])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad word: {exc}") from exc
    V = aubry.calibrated_subaction(A)
    rate = aubry.rate_function_cylinder(A, V, w)
    _dump({"value": rate.value, "interior": rate.interior,
           "tail": rate.tail, "unique_maximizer": rate.unique_maximizer},
          args.out)
    return EXIT_OK


def cmd_twist(args) -> int:
    A = _load_potential(args.input)
    from .involution import kernel_matrix, twist_check
    res = twist_check(kernel_matrix(A))
    _dump({"twist": res.ok,
           "violation": list(res.violation) if res.violation else None,
           "tie": res.tie}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ergopt",
        description="Equilibrium states, subactions, Aubry sets and "
                    "zero-temperature limits for two-coordinate potentials. "
                    "JSON symbols are 0-based on the wire.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, beta=False):
        p.add_argument("input", help="input JSON path")
        p.add_argument("--out", default=None, help="output path (stdout "
                       "if omitted)")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="tolerance where applicable (default 1e-9)")
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed for sampling utilities (default 0)")
        if beta:
            p.add_argument("--beta", type=float, default=None,
                           help="inverse temperature (default: from input, "
                                "else 1.0)")

    p = sub.add_parser("perron", help="Perron data of e^{beta A}")
    common(p, beta=True)
    p.set_defaults(func=cmd_perron)

    p = sub.add_parser("sweep", help="beta sweep to CSV")
    common(p)
    p.add_argument("--beta-min", type=float, default=1.0)
    p.add_argument("--beta-max", type=float, default=300.0)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--schedule", choices=("linear", "geometric"),
                   default="geometric")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("aubry", help="maximizing cycles and Aubry SFT")
    common(p)
    p.set_defaults(func=cmd_aubry)

    p = sub.add_parser("subaction", help="calibrated subaction")
    common(p)
    p.set_defaults(func=cmd_subaction)

    p = sub.add_parser("maxplus", help="max-plus eigenpair")
    common(p)
    p.set_defaults(func=cmd_maxplus)

    p = sub.add_parser("ch7", help="three-symbol zero-temperature analysis")
    common(p)
    p.set_defaults(func=cmd_ch7)

    p = sub.add_parser("ldp", help="large-deviation rate of a cylinder")
    common(p)
    p.set_defaults(func=cmd_ldp)

    p = sub.add_parser("twist", help="twist condition of the pairing kernel")
    common(p)
    p.set_defaults(func=cmd_twist)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, OverflowError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
