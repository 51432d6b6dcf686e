"""Cocycle formulas, loop evaluation and the rotation identity.

A degree-3 arrow germ formula is a rational combination of allowed
arrow 3-germs and monotonic partial arrow germs.  Its value on a loop
in knot space is the sum, over the R3 moves of the loop, of the germ
pairing with the move's germ oriented by the traversal; R1 and R2
moves never contribute.  Trivial cocycles (coboundaries of arrow
diagram combinations) vanish on every closed loop, so loop values are
class invariants.

The distinguished formula alpha31 spans, modulo trivial cocycles, the
one-dimensional solution space of the degree-3 system, normalised so
that its value on the rotation loop of a long knot K is -v2(K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .diagrams import ArrowDiagram, FormalSum, GaussDiagram, pair
from .germs import Germ, make_germ, pair_germ, ti
from .coboundary import coboundary
from .moves import Move, apply_move
from . import fixtures_io as fio
from .morse import rot_moves, trace
from .rational_linalg import SparseMatrix, kernel_basis, rank, solve_in_span
from .strata import System, restrict_to_variables


class OpenLoopError(ValueError):
    pass


@dataclass
class Loop:
    """A closed move path: an initial diagram plus a move schedule."""

    initial: GaussDiagram
    moves: list[Move]
    tags: list[str] | None = None

    def diagrams(self) -> list[GaussDiagram]:
        out = [self.initial]
        for m in self.moves:
            out.append(apply_move(out[-1], m))
        return out

    def check_closed(self) -> None:
        if self.diagrams()[-1] != self.initial:
            raise OpenLoopError("loop does not return to its initial diagram")

    def germs(self):
        cur = self.initial
        for m in self.moves:
            g = make_germ(cur, m)
            yield g, m
            cur = g.g1

    def reversed(self) -> "Loop":
        """The loop traversed backwards.

        Undo moves are recomputed against the backward replay: rebirths
        take fresh ids there, so id-carrying move data is translated
        through the position-wise correspondence of the two words.
        """
        diagrams = self.diagrams()
        cur = diagrams[-1]
        moves = []
        steps = list(zip(diagrams, self.moves, diagrams[1:]))
        for before, m, after in reversed(steps):
            undo = _inverse_on(before, m)
            phi = {a: b for (a, _), (b, _) in zip(after.word, cur.word)}
            undo = _translate_ids(undo, phi)
            cur = apply_move(cur, undo)
            moves.append(undo)
        tags = list(reversed(self.tags)) if self.tags else None
        return Loop(diagrams[-1], moves, tags)

    def concatenate(self, other: "Loop") -> "Loop":
        if self.diagrams()[-1] != other.initial:
            raise OpenLoopError("loops are not composable")
        tags = None
        if self.tags is not None and other.tags is not None:
            tags = self.tags + other.tags
        return Loop(self.initial, self.moves + list(other.moves), tags)


def _inverse_on(d: GaussDiagram, m: Move) -> Move:
    from .moves import inverse
    return inverse(d, m)


def _translate_ids(m: Move, phi: dict) -> Move:
    if m.kind in ("R1_death",):
        return Move(m.kind, (phi[m.data[0]],))
    if m.kind == "R2_death":
        a, b = m.data
        return Move(m.kind, tuple(sorted((phi[a], phi[b]))))
    return m  # births and R3 moves are positional


def evaluate_loop(alpha: FormalSum, loop: Loop) -> Fraction:
    """Sum of the germ pairings over the R3 moves of a closed loop."""
    loop.check_closed()
    total = Fraction(0)
    for germ, move in loop.germs():
        if move.kind == "R3":
            total += alpha.dot(ti(germ))
    return total


def rot_loop(knot, fixtures=None) -> Loop:
    """The rotation loop of a long knot around its axis.

    ``knot`` is a Morse presentation (list of column events), the name
    of a fixture knot, or a Gauss diagram canonically equal to one of
    the fixture knots.  Loops for other diagrams need an explicit Morse
    presentation: the loop structure lives in the plane, not in the
    Gauss word alone.
    """
    events = _resolve_morse(knot, fixtures)
    initial, moves, tags = rot_moves(events)
    loop = Loop(initial, moves, tags)
    loop.check_closed()
    return loop


def _resolve_morse(knot, fixtures=None):
    if isinstance(knot, list):
        return knot
    fixdir = fio.resolve_fixtures(fixtures)
    names = ("unknot", "trefoil", "figure8")
    if isinstance(knot, str):
        if knot not in names:
            raise ValueError(f"no Morse presentation on file for {knot!r}")
        return fio.load_morse(fixdir, knot)
    if isinstance(knot, GaussDiagram):
        for name in names:
            events = fio.load_morse(fixdir, name)
            if trace(events).diagram == knot:
                return events
        raise ValueError("no Morse presentation on file for this diagram; "
                         "pass the column events explicitly")
    raise TypeError(f"cannot build a rotation loop from {knot!r}")


def v2_diagram(fixtures=None) -> ArrowDiagram:
    fixdir = fio.resolve_fixtures(fixtures)
    return fio.diagram_from_json(fio.load_json(fixdir / "formulas" / "v2_diagram.json"))


def v2(k: GaussDiagram, fixtures=None) -> Fraction:
    """The Casson invariant of a long knot via its two-arrow formula."""
    return pair(v2_diagram(fixtures), k)


def alpha31(fixtures=None) -> FormalSum:
    """The degree-3 formula normalised by alpha31(rot K) = -v2(K)."""
    fixdir = fio.resolve_fixtures(fixtures)
    return fio.formula_from_json(fio.load_json(fixdir / "formulas" / "alpha31.json"))


def load_tetra_rows(fixtures=None) -> list[FormalSum]:
    fixdir = fio.resolve_fixtures(fixtures)
    obj = fio.load_json(fixdir / "strata" / "fig9_tetra.json")
    rows = [fio.formula_from_json(item) for item in obj["equations"]]
    if len(rows) != 2:
        raise ValueError("expected exactly two tetrahedron equations")
    return rows


def trivial_cocycle_vectors(degree: int = 3):
    """Coboundaries dA of all arrow diagrams of the given degree.

    Returned as full formal sums; these span the trivial cocycles at
    this degree.
    """
    from .germs import enumerate_arrow_diagrams
    out = []
    for a in enumerate_arrow_diagrams(degree):
        db = coboundary(a)
        if not db.is_zero():
            out.append((a, db))
    return out


@dataclass
class CocycleReport:
    violated: list[int]
    trivial: bool
    kernel_dim: int
    trivial_dim: int
    quotient_dim: int
    in_kernel: bool = True

    @property
    def passed(self) -> bool:
        return not self.violated

    @property
    def nontrivial(self) -> bool:
        return self.passed and not self.trivial

    def summary(self) -> str:
        status = "pass" if self.passed else f"FAIL ({len(self.violated)} equations)"
        kind = "trivial" if self.trivial else "nontrivial"
        return (f"{status}, {kind}; kernel dim {self.kernel_dim}, "
                f"trivial dim {self.trivial_dim}, quotient dim {self.quotient_dim}")


def system_dimensions(system: System):
    """(kernel dim, trivial-subspace dim, quotient dim) of the system."""
    mat = system.matrix()
    kdim = len(system.variables) - rank(mat)
    trivs = []
    for _, db in trivial_cocycle_vectors(3):
        if db.r1 or db.r2:
            continue
        full = db.r3 + db.partial
        if any(k not in system.var_index for k in full.keys()):
            # support outside the allowed variables: not a vector of this
            # coordinate space
            continue
        vec = restrict_to_variables(full, system.var_index)
        if vec:
            trivs.append(vec)
    tmat = SparseMatrix(len(trivs), len(system.variables), [dict(v) for v in trivs])
    tdim = rank(tmat)
    return kdim, tdim, kdim - tdim


def verify_cocycle(alpha: FormalSum, degree: int = 3, system: System | None = None,
                   fixtures=None) -> CocycleReport:
    """Check a cochain against every stored meridian functional.

    Violations are computed with the full pairing (all germ kinds), so
    coboundaries dA pass by the Stokes formula even though they carry
    R1 and R2 components.  Triviality means membership in the span of
    the coboundaries of arrow diagrams of degree at most ``degree``.
    """
    if system is None:
        system = assemble_default_system(fixtures)
    violated = [i for i, fs in enumerate(system.full_rows) if alpha.dot(fs) != 0]

    trivial_sums = [db.total() for _, db in trivial_cocycle_vectors(degree)]
    rows = []
    for fs in trivial_sums:
        rows.append({g.key(): c for g, c in fs.items()})
    target = {g.key(): c for g, c in alpha.items()}
    trivial = solve_in_span(rows, target) is not None

    kdim, tdim, qdim = system_dimensions(system)
    in_kernel = not violated
    return CocycleReport(violated, trivial, kdim, tdim, qdim, in_kernel)


_DEFAULT_SYSTEM: dict = {}


def assemble_default_system(fixtures=None, bystanders: bool = False) -> System:
    from .strata import assemble_system
    key = (str(fio.resolve_fixtures(fixtures)), bystanders)
    if key not in _DEFAULT_SYSTEM:
        tetra = load_tetra_rows(fixtures)
        _DEFAULT_SYSTEM[key] = assemble_system(tetra_rows=tetra, bystanders=bystanders)
    return _DEFAULT_SYSTEM[key]
