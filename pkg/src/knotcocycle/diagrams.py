"""Based Gauss and arrow diagrams, and the subdiagram-counting pairing.

A based diagram is a word of endpoint tokens along an oriented line whose
start plays the role of the point at infinity.  Each arrow occupies two
tokens, a tail and a head; our global convention is that arrows point from
the over-strand to the under-strand and that a Gauss diagram decorates
every arrow with its writhe sign.  Diagrams are compared up to positive
homeomorphisms of the line, i.e. only the token order matters, and arrow
ids are normalised by first occurrence.

The pairing ``pair(A, G)`` counts order- and direction-preserving
embeddings of an arrow diagram A into a Gauss diagram G, each weighted by
the product of the signs of the arrows hit.  It factors as
``<completions(A), subdiagrams(G)>`` for the orthonormal product on the
basis of Gauss diagrams; both routes are implemented and must agree.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

TAIL = "T"
HEAD = "H"

Token = tuple[int, str]  # (arrow id, TAIL or HEAD)


def _check_word(word: tuple[Token, ...]) -> dict[int, dict[str, int]]:
    """Validate a token word and return {id: {kind: position}}."""
    ends: dict[int, dict[str, int]] = {}
    for pos, (aid, kind) in enumerate(word):
        if kind not in (TAIL, HEAD):
            raise ValueError(f"bad token kind {kind!r} at position {pos}")
        slot = ends.setdefault(aid, {})
        if kind in slot:
            raise ValueError(f"arrow {aid} has two {kind} ends")
        slot[kind] = pos
    for aid, slot in ends.items():
        if len(slot) != 2:
            raise ValueError(f"arrow {aid} is missing an end")
    return ends


class ArrowDiagram:
    """A based arrow diagram: directed chords on a line, no signs."""

    __slots__ = ("word", "_key")

    def __init__(self, word: Iterable[Token]):
        self.word: tuple[Token, ...] = tuple((int(a), k) for a, k in word)
        _check_word(self.word)
        self._key = None

    @property
    def degree(self) -> int:
        return len(self.word) // 2

    def arrow_ids(self) -> list[int]:
        seen: list[int] = []
        for aid, _ in self.word:
            if aid not in seen:
                seen.append(aid)
        return seen

    def relabelling(self) -> dict[int, int]:
        """Map of old ids to 1..n in order of first occurrence."""
        return {aid: i + 1 for i, aid in enumerate(self.arrow_ids())}

    def canonical(self) -> "ArrowDiagram":
        m = self.relabelling()
        return ArrowDiagram((m[a], k) for a, k in self.word)

    def canonical_key(self):
        if self._key is None:
            m = self.relabelling()
            self._key = tuple((m[a], k) for a, k in self.word)
        return self._key

    def delete(self, ids: Iterable[int]) -> "ArrowDiagram":
        drop = set(ids)
        return ArrowDiagram(t for t in self.word if t[0] not in drop)

    def reverse_arrows(self) -> "ArrowDiagram":
        flip = {TAIL: HEAD, HEAD: TAIL}
        return ArrowDiagram((a, flip[k]) for a, k in self.word)

    def with_signs(self, signs: Mapping[int, int]) -> "GaussDiagram":
        return GaussDiagram(self.word, signs)

    def __eq__(self, other) -> bool:
        return isinstance(other, ArrowDiagram) and not isinstance(other, GaussDiagram) \
            and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash((ArrowDiagram, self.canonical_key()))

    def __repr__(self) -> str:
        body = " ".join(f"{k}{a}" for a, k in self.word)
        return f"ArrowDiagram({body!r})"


class GaussDiagram(ArrowDiagram):
    """A based Gauss diagram: an arrow diagram with a sign on every arrow."""

    __slots__ = ("signs",)

    def __init__(self, word: Iterable[Token], signs: Mapping[int, int]):
        super().__init__(word)
        ids = set(a for a, _ in self.word)
        self.signs: dict[int, int] = {int(a): int(s) for a, s in signs.items() if int(a) in ids}
        if set(self.signs) != ids:
            raise ValueError("signs must be given for exactly the arrows present")
        if any(s not in (1, -1) for s in self.signs.values()):
            raise ValueError("signs must be +1 or -1")

    def canonical(self) -> "GaussDiagram":
        m = self.relabelling()
        return GaussDiagram(((m[a], k) for a, k in self.word),
                            {m[a]: s for a, s in self.signs.items()})

    def canonical_key(self):
        if self._key is None:
            m = self.relabelling()
            word = tuple((m[a], k) for a, k in self.word)
            signs = tuple(self.signs[a] for a in self.arrow_ids())
            self._key = (word, signs)
        return self._key

    def sign_product(self) -> int:
        p = 1
        for s in self.signs.values():
            p *= s
        return p

    def delete(self, ids: Iterable[int]) -> "GaussDiagram":
        drop = set(ids)
        return GaussDiagram((t for t in self.word if t[0] not in drop),
                            {a: s for a, s in self.signs.items() if a not in drop})

    def reverse_arrows(self) -> "GaussDiagram":
        flip = {TAIL: HEAD, HEAD: TAIL}
        return GaussDiagram(((a, flip[k]) for a, k in self.word), self.signs)

    def skeleton(self) -> ArrowDiagram:
        return ArrowDiagram(self.word)

    def __eq__(self, other) -> bool:
        return isinstance(other, GaussDiagram) and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash((GaussDiagram, self.canonical_key()))

    def __repr__(self) -> str:
        body = " ".join(f"{k}{a}" for a, k in self.word)
        sgs = "".join("+" if self.signs[a] > 0 else "-" for a in self.arrow_ids())
        return f"GaussDiagram({body!r}, {sgs!r})"


EMPTY_GAUSS = GaussDiagram((), {})
EMPTY_ARROW = ArrowDiagram(())


class FormalSum:
    """Finite rational linear combination of hashable basis keys.

    Zero coefficients are never stored, so equality of sums is equality of
    the underlying maps.  Keys are expected to be canonical (diagrams and
    germs hash through their canonical form).
    """

    __slots__ = ("_c",)

    def __init__(self, items: Iterable[tuple[object, Fraction]] = ()):
        self._c: dict = {}
        for k, v in items:
            self.add(k, v)

    def add(self, key, coeff) -> None:
        c = self._c.get(key, 0) + Fraction(coeff)
        if c == 0:
            self._c.pop(key, None)
        else:
            self._c[key] = c

    def __getitem__(self, key) -> Fraction:
        return self._c.get(key, Fraction(0))

    def __iter__(self) -> Iterator:
        return iter(self._c.items())

    def items(self):
        return self._c.items()

    def keys(self):
        return self._c.keys()

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(self.items())
        for k, v in other.items():
            out.add(k, v)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(self.items())
        for k, v in other.items():
            out.add(k, -v)
        return out

    def __neg__(self) -> "FormalSum":
        return self.scale(-1)

    def scale(self, c) -> "FormalSum":
        c = Fraction(c)
        if c == 0:
            return FormalSum()
        return FormalSum((k, v * c) for k, v in self.items())

    def map_keys(self, fn) -> "FormalSum":
        out = FormalSum()
        for k, v in self.items():
            out.add(fn(k), v)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSum) and self._c == other._c

    def __hash__(self):
        raise TypeError("FormalSum is unhashable")

    def dot(self, other: "FormalSum") -> Fraction:
        """Orthonormal product with respect to the shared basis."""
        a, b = (self, other) if len(self) <= len(other) else (other, self)
        total = Fraction(0)
        for k, v in a.items():
            w = b[k]
            if w:
                total += v * w
        return total

    def __repr__(self) -> str:
        if not self._c:
            return "FormalSum(0)"
        parts = [f"{v}*{k!r}" for k, v in self.items()]
        return "FormalSum(" + " + ".join(parts) + ")"


def subdiagrams(g: GaussDiagram) -> FormalSum:
    """Formal sum of the 2^deg subdiagrams of g, with multiplicity."""
    ids = g.arrow_ids()
    out = FormalSum()
    for r in range(len(ids) + 1):
        for subset in itertools.combinations(ids, r):
            out.add(g.delete(set(ids) - set(subset)).canonical(), 1)
    return out


def completions(a: ArrowDiagram) -> FormalSum:
    """Alternating sum of the 2^deg sign-completions of a."""
    ids = a.arrow_ids()
    out = FormalSum()
    for signs in itertools.product((1, -1), repeat=len(ids)):
        coeff = 1
        for s in signs:
            coeff *= s
        out.add(GaussDiagram(a.word, dict(zip(ids, signs))).canonical(), coeff)
    return out


def forget_signs(g: GaussDiagram) -> FormalSum:
    """Underlying arrow diagram weighted by the product of the signs."""
    out = FormalSum()
    out.add(g.skeleton().canonical(), g.sign_product())
    return out


def pair(a: ArrowDiagram, g: GaussDiagram) -> Fraction:
    """Polyak-Viro pairing <A, G> = <completions(A), subdiagrams(G)>.

    Computed by direct embedding count; ``pair_via_completions`` gives the
    independent evaluation through the S and I maps.
    """
    return pair_embedding_count(a, g)


def pair_embedding_count(a: ArrowDiagram, g: GaussDiagram) -> Fraction:
    ids_a = a.arrow_ids()
    ids_g = g.arrow_ids()
    if len(ids_a) > len(ids_g):
        return Fraction(0)
    pos_a = {t: i for i, t in enumerate(a.canonical().word)}
    total = Fraction(0)
    # Choose an ordered assignment of distinct arrows of g to the arrows of a.
    for chosen in itertools.permutations(ids_g, len(ids_a)):
        assign = dict(zip(ids_a, chosen))
        # Induced positions of a's tokens inside g must be order-isomorphic
        # to a's own word, with matching tail/head kinds.
        gpos = {}
        ok = True
        for (aid, kind), i in pos_a.items():
            gt = (assign[aid], kind)
            found = None
            for j, t in enumerate(g.word):
                if t == gt:
                    found = j
                    break
            if found is None:
                ok = False
                break
            gpos[i] = found
        if not ok:
            continue
        order = [gpos[i] for i in range(len(pos_a))]
        if all(order[i] < order[i + 1] for i in range(len(order) - 1)):
            w = 1
            for aid in chosen:
                w *= g.signs[aid]
            total += w
    return total


def pair_via_completions(a: ArrowDiagram, g: GaussDiagram) -> Fraction:
    return completions(a).dot(subdiagrams(g))


def pair_sum(alpha: FormalSum, g: GaussDiagram) -> Fraction:
    """Linear extension of the pairing in the first slot."""
    total = Fraction(0)
    for key, coeff in alpha.items():
        total += coeff * pair(key, g)
    return total


def parse_diagram(text: str) -> GaussDiagram | ArrowDiagram:
    """Parse the text format ``<n>; <tokens>; <sign string>``.

    The sign block is optional; without it an arrow diagram is returned.
    Tokens look like ``T1`` or ``H3``.
    """
    parts = [p.strip() for p in text.split(";")]
    if len(parts) not in (2, 3):
        raise ValueError("expected '<n>; <word>; [signs]'")
    n = int(parts[0])
    word = []
    for tok in parts[1].split():
        kind, aid = tok[0].upper(), int(tok[1:])
        word.append((aid, kind))
    if len(word) != 2 * n:
        raise ValueError(f"degree {n} needs {2 * n} tokens, got {len(word)}")
    if len(parts) == 2:
        return ArrowDiagram(word)
    ids = ArrowDiagram(word).arrow_ids()
    if len(parts[2]) != n:
        raise ValueError("sign string length must equal the degree")
    signs = {aid: (1 if ch == "+" else -1) for aid, ch in zip(ids, parts[2])}
    return GaussDiagram(word, signs)


def format_diagram(d: ArrowDiagram) -> str:
    body = " ".join(f"{k}{a}" for a, k in d.word)
    if isinstance(d, GaussDiagram):
        sgs = "".join("+" if d.signs[a] > 0 else "-" for a in d.arrow_ids())
        return f"{d.degree}; {body}; {sgs}"
    return f"{d.degree}; {body}"
