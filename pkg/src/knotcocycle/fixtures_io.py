"""JSON (de)serialisation of diagrams, germs, moves and fixtures.

The fixture directory is resolved with explicit precedence: a path given
programmatically (or via the CLI flag), then the KNOT_COCYCLE_FIXTURES
environment variable, then ./fixtures relative to the working directory.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

from .diagrams import ArrowDiagram, FormalSum, GaussDiagram
from .germs import Germ
from .moves import Move

ENV_VAR = "KNOT_COCYCLE_FIXTURES"


def resolve_fixtures(explicit=None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path("fixtures")


def diagram_to_json(d: ArrowDiagram) -> dict:
    out = {
        "degree": d.degree,
        "word": [{"id": a, "kind": k} for a, k in d.word],
    }
    if isinstance(d, GaussDiagram):
        out["signs"] = {str(a): s for a, s in d.signs.items()}
    return out


def diagram_from_json(obj: dict):
    word = [(int(t["id"]), t["kind"]) for t in obj["word"]]
    if "signs" in obj:
        return GaussDiagram(word, {int(a): int(s) for a, s in obj["signs"].items()})
    return ArrowDiagram(word)


def germ_to_json(g: Germ) -> dict:
    if g.kind == "R1":
        dist = g.dist
    elif g.kind == "R2":
        dist = sorted(g.dist)
    elif g.kind == "R3":
        dist = list(g.dist)
    else:
        dist = g.dist
    return {"kind": g.kind, "g0": diagram_to_json(g.g0),
            "g1": diagram_to_json(g.g1), "dist": dist}


def germ_from_json(obj: dict) -> Germ:
    kind = obj["kind"]
    dist = obj["dist"]
    if kind == "R2":
        dist = frozenset(dist)
    elif kind == "R3":
        dist = tuple(dist)
    return Germ(kind, diagram_from_json(obj["g0"]), diagram_from_json(obj["g1"]), dist)


def move_to_json(m: Move) -> dict:
    return {"kind": m.kind, "data": list(m.data)}


def move_from_json(obj: dict) -> Move:
    return Move(obj["kind"], tuple(obj["data"]))


def formula_to_json(fs: FormalSum) -> list:
    items = sorted(((g.key(), g, c) for g, c in fs.items()), key=lambda t: t[0])
    return [{"germ": germ_to_json(g), "coeff": [c.numerator, c.denominator]}
            for _, g, c in items]


def formula_from_json(obj: list) -> FormalSum:
    out = FormalSum()
    for item in obj:
        g = germ_from_json(item["germ"])
        n, d = item["coeff"]
        out.add(g, Fraction(n, d))
    return out


def load_json(path: Path):
    with open(path) as fh:
        return json.load(fh)


def save_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_knot(fixtures: Path, name: str) -> GaussDiagram:
    return diagram_from_json(load_json(fixtures / "knots" / f"{name}.json"))


def load_morse(fixtures: Path, name: str) -> list:
    obj = load_json(fixtures / "loops" / "rot_template.json")
    events = obj["knots"][name]
    return [tuple(ev) for ev in events]
