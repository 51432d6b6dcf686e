"""Command-line front end for batch runs and reproduction.

Subcommands: pair, coboundary, stokes-check, equations, solve, verify,
eval-loop, rot-test.  Results are printed as JSON by default or as
aligned text with --format text; identical invocations produce
byte-identical output.  Exit status: 0 on success, 1 on verification
failure, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures_io as fio
from .diagrams import ArrowDiagram, FormalSum, GaussDiagram, pair, parse_diagram
from .coboundary import coboundary, stokes_sides
from .germs import make_germ
from .moves import MOVE_KINDS, apply_move, enumerate_moves
from .cocycles import (Loop, alpha31, assemble_default_system, evaluate_loop,
                       rot_loop, v2, verify_cocycle)
from .rational_linalg import kernel_basis, rank


class InputError(Exception):
    pass


def _load_diagram(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        if path.endswith(".json"):
            return fio.diagram_from_json(json.loads(text))
        return parse_diagram(text.strip())
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed diagram file {path}: {exc}") from exc


def _frac(x: Fraction):
    return str(x) if x.denominator != 1 else int(x)


def _emit(obj, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=1, sort_keys=True, default=str))
    else:
        _emit_text(obj)


def _emit_text(obj, indent="") -> None:
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)):
                print(f"{indent}{k}:")
                _emit_text(v, indent + "  ")
            else:
                print(f"{indent}{str(k):<{width}}  {v}")
    elif isinstance(obj, list):
        for v in obj:
            _emit_text(v, indent)
    else:
        print(f"{indent}{obj}")


def cmd_pair(args) -> int:
    a = _load_diagram(args.arrow)
    g = _load_diagram(args.gauss)
    if isinstance(a, GaussDiagram) or not isinstance(g, GaussDiagram):
        raise InputError("pair expects an arrow diagram and a Gauss diagram")
    print(_frac(pair(a, g)))
    return 0


def cmd_coboundary(args) -> int:
    d = _load_diagram(args.diagram)
    if isinstance(d, GaussDiagram):
        raise InputError("the coboundary acts on arrow diagrams (no signs)")
    db = coboundary(d)
    out = {}
    for name, comp in db.components().items():
        out[name] = [{"coeff": _frac(c), "germ": fio.germ_to_json(g)}
                     for g, c in sorted(comp.items(), key=lambda kv: kv[0].key())]
    _emit(out, args.format)
    return 0


def _random_gauss(rng: random.Random, max_degree: int) -> GaussDiagram:
    g = GaussDiagram((), {})
    for _ in range(rng.randrange(0, 3 * max_degree + 2)):
        kind = rng.choice(MOVE_KINDS)
        moves = enumerate_moves(g, kind)
        if not moves:
            continue
        nxt = apply_move(g, rng.choice(moves))
        if nxt.degree <= max_degree:
            g = nxt
    return g


def _random_arrow(rng: random.Random, max_degree: int) -> ArrowDiagram:
    deg = rng.randrange(0, max_degree + 1)
    tokens = []
    for i in range(1, deg + 1):
        tokens.extend([(i, "T"), (i, "H")])
    rng.shuffle(tokens)
    return ArrowDiagram(tokens).canonical()


def _stokes_chunk(seed: int, trials: int, max_degree: int):
    rng = random.Random(seed)
    failures = []
    done = 0
    while done < trials:
        a = _random_arrow(rng, max_degree)
        g = _random_gauss(rng, max_degree)
        moves = []
        for kind in MOVE_KINDS:
            moves.extend(enumerate_moves(g, kind))
        if not moves:
            continue
        germ = make_germ(g, rng.choice(moves))
        lhs, rhs = stokes_sides(a, germ)
        if lhs != rhs:
            failures.append({"arrow": fio.diagram_to_json(a),
                             "gauss": fio.diagram_to_json(g),
                             "lhs": str(lhs), "rhs": str(rhs)})
        done += 1
    return done, failures


def cmd_stokes_check(args) -> int:
    per = [args.trials // args.jobs] * args.jobs
    per[0] += args.trials - sum(per)
    chunks = [(args.seed + i, n, args.max_degree) for i, n in enumerate(per) if n]
    if args.jobs > 1:
        import multiprocessing
        with multiprocessing.Pool(args.jobs) as pool:
            results = pool.starmap(_stokes_chunk, chunks)
    else:
        results = [_stokes_chunk(*c) for c in chunks]
    done = sum(r[0] for r in results)
    failures = [f for r in results for f in r[1]]
    _emit({"trials": done, "failures": failures, "max_degree": args.max_degree},
          args.format)
    return 1 if failures else 0


def cmd_equations(args) -> int:
    system = assemble_default_system(args.fixtures, bystanders=args.bystanders)
    mat = system.matrix()
    triplets = [[r, c, f"{v.numerator}/{v.denominator}"]
                for r, c, v in mat.triplets()]
    out = {
        "degree": system.degree,
        "variables": len(system.variables),
        "rows": len(system.rows),
        "rank": system.rank(),
        "triplets": triplets,
    }
    if args.matrix_out:
        Path(args.matrix_out).write_text(
            "\n".join(f"{r} {c} {v.numerator}/{v.denominator}"
                      for r, c, v in mat.triplets()) + "\n")
        out["matrix_out"] = args.matrix_out
    _emit(out, args.format)
    return 0


def cmd_solve(args) -> int:
    from .cocycles import system_dimensions
    from .strata import restrict_to_variables
    system = assemble_default_system(args.fixtures, bystanders=args.bystanders)
    kdim, tdim, qdim = system_dimensions(system)
    a = alpha31(args.fixtures)
    vec = restrict_to_variables(a, system.var_index)
    in_kernel = all(s == 0 for s in system.matrix().multiply_vector(vec))
    _emit({
        "variables": len(system.variables),
        "equations": len(system.rows),
        "rank": system.rank(),
        "kernel_dimension": kdim,
        "trivial_dimension": tdim,
        "quotient_dimension": qdim,
        "alpha31_in_kernel": in_kernel,
    }, args.format)
    return 0


def _load_formula(args) -> FormalSum:
    if args.formula == "alpha31":
        return alpha31(args.fixtures)
    try:
        return fio.formula_from_json(json.loads(Path(args.formula).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"malformed formula file {args.formula}: {exc}") from exc


def cmd_verify(args) -> int:
    a = _load_formula(args)
    report = verify_cocycle(a, fixtures=args.fixtures)
    _emit({
        "violated_equations": report.violated,
        "passed": report.passed,
        "trivial": report.trivial,
        "kernel_dimension": report.kernel_dim,
        "trivial_dimension": report.trivial_dim,
        "quotient_dimension": report.quotient_dim,
    }, args.format)
    return 0 if report.passed else 1


def _load_loop(path: str) -> Loop:
    try:
        obj = json.loads(Path(path).read_text())
        initial = fio.diagram_from_json(obj["initial"])
        moves = [fio.move_from_json(m) for m in obj["moves"]]
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"malformed loop file {path}: {exc}") from exc
    return Loop(initial, moves)


def cmd_eval_loop(args) -> int:
    a = _load_formula(args)
    loop = _load_loop(args.loop)
    value = evaluate_loop(a, loop)
    _emit({"value": _frac(value)}, args.format)
    return 0


def cmd_invariants(args) -> int:
    """Basis of Ker d over arrow diagrams up to the given degree."""
    if args.max_degree > 4:
        raise InputError("degree cap is 4; the basis enumeration blows up beyond")
    from .germs import enumerate_arrow_diagrams
    from .coboundary import coboundary
    from .rational_linalg import SparseMatrix, kernel_basis
    diagrams = []
    for deg in range(args.max_degree + 1):
        diagrams.extend(enumerate_arrow_diagrams(deg))
    keys: dict = {}
    rows = []
    for a in diagrams:
        row = {}
        for germ, c in coboundary(a).total().items():
            j = keys.setdefault(germ.key(), len(keys))
            row[j] = row.get(j, Fraction(0)) + c
        rows.append(row)
    # transpose: d maps the diagram space into the germ space
    cols = [dict() for _ in range(len(keys))]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    basis = kernel_basis(SparseMatrix(len(keys), len(diagrams), cols))
    from .diagrams import format_diagram
    out = {
        "max_degree": args.max_degree,
        "diagrams": len(diagrams),
        "kernel_dimension": len(basis),
        "formulas": [
            sorted(f"{_frac(c)} * [{format_diagram(diagrams[i])}]"
                   for i, c in vec.items())
            for vec in basis
        ],
    }
    _emit(out, args.format)
    return 0


def cmd_rot_test(args) -> int:
    name = args.knot
    if name.endswith(".json"):
        knot = _load_diagram(name)
    else:
        knot = name
    try:
        loop = rot_loop(knot, args.fixtures)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    k = loop.initial
    a = alpha31(args.fixtures)
    val = evaluate_loop(a, loop)
    casson = v2(k.canonical(), args.fixtures)
    holds = val == -casson
    print(f"alpha31(rot)={_frac(val)}, v2={_frac(casson)}, "
          f"identity {'holds' if holds else 'FAILS'}")
    return 0 if holds else 1


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fixtures", default=None,
                        help="fixture directory (default: $KNOT_COCYCLE_FIXTURES or ./fixtures)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property suites")
    common.add_argument("--jobs", type=int, default=1)
    ap = argparse.ArgumentParser(prog="knotcocycle", description=__doc__,
                                 parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", parents=[common], help="Polyak-Viro pairing of an arrow and a Gauss diagram")
    p.add_argument("--arrow", required=True)
    p.add_argument("--gauss", required=True)
    p.set_defaults(fn=cmd_pair)

    p = sub.add_parser("coboundary", parents=[common], help="the four components of dA")
    p.add_argument("--diagram", required=True)
    p.set_defaults(fn=cmd_coboundary)

    p = sub.add_parser("stokes-check", parents=[common], help="randomized Stokes formula suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(fn=cmd_stokes_check)

    p = sub.add_parser("equations", parents=[common], help="assemble and export the degree-3 system")
    p.add_argument("--degree", type=int, default=3, choices=(3,))
    p.add_argument("--bystanders", action="store_true")
    p.add_argument("--matrix-out", default=None,
                   help="write the plain-text 'row col num/den' matrix here")
    p.set_defaults(fn=cmd_equations)

    p = sub.add_parser("solve", parents=[common], help="kernel and quotient dimensions of the system")
    p.add_argument("--degree", type=int, default=3, choices=(3,))
    p.add_argument("--bystanders", action="store_true")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check a formula against all meridian equations")
    p.add_argument("--formula", default="alpha31")
    p.add_argument("--degree", type=int, default=3, choices=(3,))
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("eval-loop", parents=[common], help="evaluate a formula on a loop file")
    p.add_argument("--formula", default="alpha31")
    p.add_argument("--loop", required=True)
    p.set_defaults(fn=cmd_eval_loop)

    p = sub.add_parser("rot-test", parents=[common], help="the rotation identity on a fixture knot")
    p.add_argument("--knot", required=True)
    p.set_defaults(fn=cmd_rot_test)

    p = sub.add_parser("invariants", parents=[common],
                       help="basis of the arrow diagram formulas up to a degree")
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(fn=cmd_invariants)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
