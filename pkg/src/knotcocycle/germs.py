"""Germs of one-parameter families: the 1-chain and 1-cochain bases.

An i-germ is an ordered couple ``(g0, g1)`` of diagrams differing by an
R_i move, with the edges involved in the move distinguished.  A partial
germ is a 3-germ minus one distinguished arrow; what remains is a
transposition of two consecutive arrow ends across the single surviving
distinguished edge.  3-germs and partial germs satisfy the antisymmetry
relation (x, y) = -(y, x); we normalise them so that the distinguished
edges of ``g1`` carry co-orientation value +1, where the co-orientation
value of an edge is ``w * eps`` on Gauss diagrams and ``eps`` on arrow
diagrams (for a 3-germ, the product over the three edges).

Since exactly one end swap flips eps of its own edge and fixes the other
data, every unordered germ has exactly one normalised side, and a germ
presented the other way round carries a factor -1.

The triangle relations are derived rather than transcribed: every
non-monotonic partial arrow germ P (its edge bounds two tails or two
heads) has exactly two completions to an arrow triangle, obtained by
adding a third arrow next to the free ends of the distinguished pair,
one for each direction of the added arrow.  Deleting the right arrow of
each completion leaves a monotonic partial germ, and

    P  =  M_first + M_second   (mod triangle relations),

all three written in normalised orientation.  The two relator families
of the theory are the two cases up = 0 and up = 2, images of each other
under reversing every arrow.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .diagrams import (ArrowDiagram, FormalSum, GaussDiagram, HEAD, TAIL)
from .moves import (InvalidMove, Move, R1_BIRTH, R1_DEATH, R2_BIRTH, R2_DEATH,
                    R3, apply_move, arrow_positions, edge_data, edge_flanks,
                    r3_triangle, validate_r3)

KIND_R1 = "R1"
KIND_R2 = "R2"
KIND_R3 = "R3"
KIND_P = "P"


class Germ:
    """An ordered diagram couple with distinguished move data.

    ``dist`` is the move arrow id for R1, a frozenset of two ids for R2,
    a sorted tuple of three gap indices (synchronised between the two
    sides) for R3, and a single gap index for partial germs.  Validity of
    the underlying move is not enforced, so formal germs (arbitrary sign
    decorations of a skeleton) can be represented.
    """

    __slots__ = ("kind", "g0", "g1", "dist", "_canon")

    def __init__(self, kind, g0, g1, dist):
        self.kind = kind
        self.g0 = g0
        self.g1 = g1
        if kind == KIND_R2:
            dist = frozenset(dist)
        elif kind == KIND_R3:
            dist = tuple(sorted(dist))
        self.dist = dist
        self._canon = None

    @property
    def signed(self) -> bool:
        return isinstance(self.g1, GaussDiagram)

    @property
    def degree(self) -> int:
        return max(self.g0.degree, self.g1.degree)

    def bigger(self):
        return self.g1 if self.g1.degree >= self.g0.degree else self.g0

    def arrow_ids(self) -> list[int]:
        return self.bigger().arrow_ids()

    def distinguished_ids(self) -> frozenset[int]:
        if self.kind == KIND_R1:
            return frozenset((self.dist,))
        if self.kind == KIND_R2:
            return self.dist
        if self.kind == KIND_R3:
            ids = set()
            for g in self.dist:
                (a, _), (b, _) = edge_flanks(self.g1, g)
                ids.update((a, b))
            return frozenset(ids)
        (a, _), (b, _) = edge_flanks(self.g1, self.dist)
        return frozenset((a, b))

    def orientation_value(self, side) -> int:
        """Co-orientation value of the distinguished edge(s) on one side."""
        gaps = self.dist if self.kind == KIND_R3 else (self.dist,)
        val = 1
        for g in gaps:
            _, _, w, eps = edge_data(side, g)
            val *= eps * (w if w is not None else 1)
        return val

    def is_monotonic(self) -> bool:
        if self.kind != KIND_P:
            raise ValueError("monotonicity is a partial-germ notion")
        _, up, _, _ = edge_data(self.g1, self.dist)
        return up == 1

    def swapped(self) -> "Germ":
        return Germ(self.kind, self.g1, self.g0, self.dist)

    def canonical(self) -> tuple["Germ", int]:
        """Normalised representative and the sign carried by this one.

        R3 and partial germs normalise to the side with co-orientation
        value +1; R1 and R2 germs normalise to the birth orientation
        (larger side second).  A germ presented the other way round is
        minus its normal form, so that cochain evaluation along a
        traversal is antisymmetric under reversing a step for every
        move kind -- the Stokes formula fails on death-oriented germs
        otherwise.
        """
        if self._canon is not None:
            return self._canon
        sign = 1
        g = self
        if g.kind in (KIND_R3, KIND_P):
            if g.orientation_value(g.g1) != 1:
                g = g.swapped()
                sign = -1
        elif g.g1.degree < g.g0.degree:
            g = g.swapped()
            sign = -1
        ref = g.bigger()
        m = ref.relabelling()
        g0 = _relabel(g.g0, m)
        g1 = _relabel(g.g1, m)
        if g.kind == KIND_R1:
            dist = m[g.dist]
        elif g.kind == KIND_R2:
            dist = frozenset(m[a] for a in g.dist)
        else:
            dist = g.dist
        canon = Germ(g.kind, g0, g1, dist)
        canon._canon = (canon, 1)
        self._canon = (canon, sign)
        return self._canon

    def key(self):
        c, _ = self.canonical()
        return (c.kind, c.g0.canonical_key(), c.g1.canonical_key(), _dist_key(c))

    def __eq__(self, other) -> bool:
        return isinstance(other, Germ) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def reverse_arrows(self) -> "Germ":
        return Germ(self.kind, self.g0.reverse_arrows(), self.g1.reverse_arrows(), self.dist)

    def __repr__(self) -> str:
        return f"Germ({self.kind}, {self.g0!r} -> {self.g1!r}, dist={self.dist})"


def _dist_key(g: Germ):
    if g.kind == KIND_R2:
        return tuple(sorted(g.dist))
    return g.dist


def _relabel(d, m):
    if isinstance(d, GaussDiagram):
        return GaussDiagram(((m[a], k) for a, k in d.word),
                            {m[a]: s for a, s in d.signs.items()})
    return ArrowDiagram((m[a], k) for a, k in d.word)


def canonical_term(germ: Germ, coeff=1) -> tuple[Germ, Fraction]:
    c, s = germ.canonical()
    return c, Fraction(coeff) * s


def make_germ(g0, move: Move) -> Germ:
    """The germ of a move applied at g0, oriented g0 -> result."""
    g1 = apply_move(g0, move)
    if move.kind == R1_BIRTH:
        born = set(g1.arrow_ids()) - set(g0.arrow_ids())
        return Germ(KIND_R1, g0, g1, born.pop())
    if move.kind == R1_DEATH:
        return Germ(KIND_R1, g0, g1, move.data[0])
    if move.kind == R2_BIRTH:
        born = set(g1.arrow_ids()) - set(g0.arrow_ids())
        return Germ(KIND_R2, g0, g1, frozenset(born))
    if move.kind == R2_DEATH:
        return Germ(KIND_R2, g0, g1, frozenset(move.data))
    if move.kind == R3:
        return Germ(KIND_R3, g0, g1, move.data)
    raise InvalidMove(f"unknown move kind {move.kind}")


def boundary(germ: Germ) -> FormalSum:
    out = FormalSum()
    out.add(germ.g1.canonical(), 1)
    out.add(germ.g0.canonical(), -1)
    return out


def boundary_sum(chain: FormalSum) -> FormalSum:
    out = FormalSum()
    for g, c in chain.items():
        out.add(g.g1.canonical(), c)
        out.add(g.g0.canonical(), -c)
    return out


def _locate_edge(d, flank_left, flank_right) -> int:
    word = d.word
    for i in range(1, len(word)):
        if word[i - 1] == flank_left and word[i] == flank_right:
            return i
    raise ValueError(f"edge {flank_left},{flank_right} not found")


def _delete_from_germ(germ: Germ, ids: set[int]) -> Germ:
    """Remove matched arrows from both sides, keeping distinguished data."""
    g0 = germ.g0.delete(ids)
    g1 = germ.g1.delete(ids)
    if germ.kind in (KIND_R1, KIND_R2):
        return Germ(germ.kind, g0, g1, germ.dist)
    if germ.kind == KIND_P:
        left, right = edge_flanks(germ.g1, germ.dist)
        return Germ(KIND_P, g0, g1, _locate_edge(g1, left, right))
    # R3: removed ids may include one distinguished arrow.
    dist_ids = germ.distinguished_ids()
    gone = ids & dist_ids
    if not gone:
        gaps = []
        for g in germ.dist:
            left, right = edge_flanks(germ.g1, g)
            gaps.append(_locate_edge(g1, left, right))
        return Germ(KIND_R3, g0, g1, tuple(sorted(gaps)))
    (x,) = gone
    for g in germ.dist:
        (a, _), (b, _) = edge_flanks(germ.g1, g)
        if x not in (a, b):
            left, right = edge_flanks(germ.g1, g)
            return Germ(KIND_P, g0, g1, _locate_edge(g1, left, right))
    raise ValueError("no surviving distinguished edge")


def subgerms(germ: Germ) -> FormalSum:
    """The map I: formal sum of all subgerms, canonically normalised.

    For R1 and R2 germs no distinguished arrow may be removed; for a
    3-germ at most one may; partial germs keep their distinguished pair.
    """
    dist = germ.distinguished_ids()
    rest = [a for a in germ.arrow_ids() if a not in dist]
    out = FormalSum()
    removable_dist: tuple = ((),)
    if germ.kind == KIND_R3:
        removable_dist = ((),) + tuple((x,) for x in sorted(dist))
    for r in range(len(rest) + 1):
        for bys in itertools.combinations(rest, r):
            for dd in removable_dist:
                sub = _delete_from_germ(germ, set(bys) | set(dd))
                key, coeff = canonical_term(sub)
                out.add(key, coeff)
    return out


def forget_germ_signs(germ: Germ) -> tuple[Germ, Fraction]:
    """The map T on a single germ: skeleton weighted by its sign product."""
    if not germ.signed:
        raise ValueError("T applies to signed germs")
    prod = germ.bigger().sign_product()
    skel = Germ(germ.kind, germ.g0.skeleton(), germ.g1.skeleton(), germ.dist)
    key, coeff = canonical_term(skel, prod)
    return key, coeff


def t_map(chain: FormalSum) -> FormalSum:
    out = FormalSum()
    for g, c in chain.items():
        key, coeff = forget_germ_signs(g)
        out.add(key, c * coeff)
    return out


def ti(germ_or_chain) -> FormalSum:
    if isinstance(germ_or_chain, Germ):
        return t_map(subgerms(germ_or_chain))
    out = FormalSum()
    for g, c in germ_or_chain.items():
        for key, coeff in t_map(subgerms(g)).items():
            out.add(key, c * coeff)
    return out


def s_map(alpha: FormalSum) -> FormalSum:
    """Sign enhancement of unsigned germs, with the product as coefficient."""
    out = FormalSum()
    for germ, c in alpha.items():
        ids = germ.arrow_ids()
        for signs in itertools.product((1, -1), repeat=len(ids)):
            table = dict(zip(ids, signs))
            prod = 1
            for s in signs:
                prod *= s
            enhanced = Germ(germ.kind,
                            _sign_up(germ.g0, table), _sign_up(germ.g1, table),
                            germ.dist)
            key, coeff = canonical_term(enhanced, c * prod)
            out.add(key, coeff)
    return out


def _sign_up(d: ArrowDiagram, table) -> GaussDiagram:
    return GaussDiagram(d.word, {a: table[a] for a in d.arrow_ids()})


def pair_germ(alpha: FormalSum, gamma) -> Fraction:
    """<alpha, gamma> = <alpha, TI(gamma)> for a germ or chain gamma."""
    return alpha.dot(ti(gamma))


def pair_germ_via_s(alpha: FormalSum, gamma) -> Fraction:
    """Independent evaluation <S(alpha), I(gamma)>."""
    chain = subgerms(gamma) if isinstance(gamma, Germ) else _chain_subgerms(gamma)
    return s_map(alpha).dot(chain)


def _chain_subgerms(chain: FormalSum) -> FormalSum:
    out = FormalSum()
    for g, c in chain.items():
        for key, coeff in subgerms(g).items():
            out.add(key, c * coeff)
    return out


def transpose_at(d, gap: int):
    """Switch the two consecutive arrow ends bounding an interior gap."""
    (a, _), (b, _) = edge_flanks(d, gap)
    if a == b:
        raise InvalidMove("transposition needs two distinct arrows")
    word = list(d.word)
    word[gap - 1], word[gap] = word[gap], word[gap - 1]
    if isinstance(d, GaussDiagram):
        return GaussDiagram(word, d.signs)
    return ArrowDiagram(word)


def partial_germ_into(d, gap: int) -> Germ:
    """The partial germ oriented towards d, switching the pair at gap."""
    return Germ(KIND_P, transpose_at(d, gap), d, gap)


def triangle_completions(p: Germ) -> list[Germ]:
    """The completions of a partial germ to an arrow triangle.

    A monotonic germ has one completion, a non-monotonic one has two;
    intra-block orders do not matter for the resulting subgerm triple, so
    the returned 3-germs are one representative per completion.
    """
    if p.kind != KIND_P or p.signed:
        raise ValueError("completion is defined for partial arrow germs")
    d = p.g1
    (a, ka), (b, kb) = edge_flanks(d, p.dist)
    pos = arrow_positions(d)
    other = {TAIL: HEAD, HEAD: TAIL}
    free_a = (a, other[ka])
    free_b = (b, other[kb])
    up_edge = (ka == HEAD) + (kb == HEAD)
    need = sorted({0, 1, 2} - {up_edge})
    out = []
    for kind_at_a, kind_at_b in ((TAIL, HEAD), (HEAD, TAIL)):
        ups = sorted(((free_a[1] == HEAD) + (kind_at_a == HEAD),
                      (free_b[1] == HEAD) + (kind_at_b == HEAD)))
        if ups != need:
            continue
        rid = max(d.arrow_ids()) + 1
        word = []
        for tok in d.word:
            word.append(tok)
            if tok == free_a:
                word.append((rid, kind_at_a))
            elif tok == free_b:
                word.append((rid, kind_at_b))
        comp = ArrowDiagram(word)
        gap_a = word.index((rid, kind_at_a))
        gap_b = word.index((rid, kind_at_b))
        gap_ab = _locate_edge(comp, (a, ka), (b, kb))
        triple_gaps = tuple(sorted((gap_ab, gap_a, gap_b)))
        assert r3_triangle(comp, triple_gaps) is not None
        assert validate_r3(comp, triple_gaps)
        out.append(Germ(KIND_R3, transpose_triple(comp, triple_gaps), comp, triple_gaps))
    if p.is_monotonic():
        assert len(out) == 1
    else:
        assert len(out) == 2
    return out


def transpose_triple(d, gaps):
    word = list(d.word)
    for g in gaps:
        word[g - 1], word[g] = word[g], word[g - 1]
    if isinstance(d, GaussDiagram):
        return GaussDiagram(word, d.signs)
    return ArrowDiagram(word)


def _monotonic_partners(p: Germ) -> list[Germ]:
    """The two monotonic germs appearing with p in a triangle relation."""
    partners = []
    for tri in triangle_completions(p):
        rid = max(tri.g1.arrow_ids())
        for victim in sorted(tri.distinguished_ids() - {rid}):
            sub = _delete_from_germ(tri, {victim})
            if sub.kind == KIND_P:
                canon, _ = sub.canonical()
                if canon.is_monotonic():
                    partners.append(canon)
    return partners


def monotonic_reduce(alpha: FormalSum) -> FormalSum:
    """Rewrite partial arrow germ terms in the monotonic basis.

    Non partial-germ keys pass through untouched; the map is idempotent
    and preserves the germ degree of every term.
    """
    out = FormalSum()
    for germ, c in alpha.items():
        if not isinstance(germ, Germ) or germ.kind != KIND_P or germ.signed:
            out.add(germ, c)
            continue
        canon, s = germ.canonical()
        if canon.is_monotonic():
            out.add(canon, c * s)
            continue
        partners = _monotonic_partners(canon)
        assert len(partners) == 2
        for m in partners:
            out.add(m, c * s)
    return out


def triangle_relator(p: Germ) -> FormalSum:
    """The relator with the non-monotonic germ on top: p - m1 - m2."""
    canon, _ = p.canonical()
    if canon.is_monotonic():
        raise ValueError("relators are indexed by non-monotonic partial germs")
    out = FormalSum()
    out.add(canon, 1)
    for m in _monotonic_partners(canon):
        out.add(m, -1)
    return out


def enumerate_arrow_diagrams(degree: int):
    """All canonical arrow diagrams of the given degree, generated once."""
    tokens = []
    for i in range(1, degree + 1):
        tokens.extend([(i, TAIL), (i, HEAD)])
    seen = set()
    for perm in itertools.permutations(tokens):
        d = ArrowDiagram(perm)
        key = d.canonical_key()
        if key not in seen:
            seen.add(key)
            yield d.canonical()


def enumerate_partial_germs(degree: int):
    """All canonical partial arrow germs of the given degree."""
    seen = set()
    for d in enumerate_arrow_diagrams(degree):
        for gap in range(1, len(d.word)):
            (a, _), (b, _) = edge_flanks(d, gap)
            if a == b:
                continue
            germ, _ = partial_germ_into(d, gap).canonical()
            if germ not in seen:
                seen.add(germ)
                yield germ


def enumerate_arrow_3germs(degree: int):
    """All canonical arrow 3-germs of the given degree."""
    seen = set()
    for d in enumerate_arrow_diagrams(degree):
        n2 = len(d.word)
        candidates = [g for g in range(1, n2)
                      if d.word[g - 1][0] != d.word[g][0]]
        for gaps in itertools.combinations(candidates, 3):
            if r3_triangle(d, gaps) is None or not validate_r3(d, gaps):
                continue
            germ, _ = Germ(KIND_R3, transpose_triple(d, gaps), d, tuple(gaps)).canonical()
            if germ not in seen:
                seen.add(germ)
                yield germ
