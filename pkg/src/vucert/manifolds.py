"""Gluing matrices, group presentations, certificate words and first homology.

Two families are handled: the single-edge graph (two product blocks glued
along one torus) and the single-loop graph (one block glued to itself).  A
gluing matrix ``B = [[a, b], [c, d]]`` together with the genera determines
the presentation completely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

from vucert.errors import HypothesisError, InputError
from vucert.linalg import IntMatrix, smith_normal_form, snf_diagonal


class Case(str, Enum):
    LOOP = "loop"
    EDGE = "edge"

    @classmethod
    def parse(cls, value) -> Case:
        if isinstance(value, Case):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise InputError(f"case must be 'loop' or 'edge', got {value!r}") from None


# ---------------------------------------------------------------- gluing data


@dataclass(frozen=True)
class GluingMatrix:
    """``[[a, b], [c, d]]`` with ``|ad - bc| = 1`` and ``b != 0``."""

    a: int
    b: int
    c: int
    d: int
    case: Case = Case.LOOP

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InputError(f"gluing entry {name} must be an integer, got {v!r}")
        object.__setattr__(self, "case", Case.parse(self.case))
        if abs(self.det) != 1:
            raise InputError(f"gluing matrix must have determinant +-1, got {self.det}")
        if self.b == 0:
            raise InputError("gluing matrix must have b != 0")

    @classmethod
    def parse(cls, text: str, case) -> GluingMatrix:
        parts = text.split(",")
        if len(parts) != 4:
            raise InputError(f"matrix must be 'a,b,c,d', got {text!r}")
        try:
            a, b, c, d = (int(p) for p in parts)
        except ValueError:
            raise InputError(f"matrix entries must be integers, got {text!r}") from None
        return cls(a, b, c, d, case)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def as_rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def inverse(self) -> GluingMatrix:
        s = self.det  # 1/det == det for det = +-1
        return GluingMatrix(s * self.d, -s * self.b, -s * self.c, s * self.a, self.case)

    def negate_row(self, i: int) -> GluingMatrix:
        a, b, c, d = self.entries
        if i == 1:
            return GluingMatrix(-a, -b, c, d, self.case)
        if i == 2:
            return GluingMatrix(a, b, -c, -d, self.case)
        raise InputError("row index must be 1 or 2")

    def negate_col(self, j: int) -> GluingMatrix:
        a, b, c, d = self.entries
        if j == 1:
            return GluingMatrix(-a, b, -c, d, self.case)
        if j == 2:
            return GluingMatrix(a, -b, c, -d, self.case)
        raise InputError("column index must be 1 or 2")

    def apply_move(self, move: str) -> GluingMatrix:
        if move == "invert":
            return self.inverse()
        kind, _, idx = move.rpartition("_")
        if kind == "negate_row":
            return self.negate_row(int(idx))
        if kind == "negate_col":
            return self.negate_col(int(idx))
        raise InputError(f"unknown move {move!r}")

    def is_edge_normalized(self) -> bool:
        return self.a >= 1 and self.b >= 1 and self.c >= 0 and self.d >= 0


def allowed_moves(case) -> tuple[str, ...]:
    """Moves that preserve the isomorphism type of the group for ``case``."""
    if Case.parse(case) is Case.LOOP:
        return ("invert",)
    return ("invert", "negate_row_1", "negate_row_2", "negate_col_1", "negate_col_2")


@dataclass(frozen=True)
class Normalization:
    matrix: GluingMatrix
    moves: tuple[str, ...]
    # loop case only: whether a - d >= 2 holds for the output
    loop_gap_ok: bool | None = None

    def replay(self, start: GluingMatrix) -> GluingMatrix:
        out = start
        for mv in self.moves:
            out = out.apply_move(mv)
        return out


_SIGN_MOVES = ("negate_row_1", "negate_row_2", "negate_col_1", "negate_col_2")


def normalize_gluing(b: GluingMatrix) -> Normalization:
    """Bring ``b`` to the normal form used by the certificate proofs.

    Edge case: invert when ``a = 0`` and then pick the shortest sequence of
    row/column negations making every entry nonnegative (ties broken by the
    order of ``_SIGN_MOVES``).  Loop case: inversion leaves ``a - d`` fixed, so
    the matrix is returned unchanged together with the ``a - d >= 2`` flag.
    """
    if b.case is Case.LOOP:
        return Normalization(b, (), b.a - b.d >= 2)
    if b.a == 0 and b.d == 0:
        raise HypothesisError("NPC: no certificate normal form (a = d = 0)")
    moves: list[str] = []
    cur = b
    if cur.a == 0:
        cur = cur.inverse()
        moves.append("invert")
    for size in range(len(_SIGN_MOVES) + 1):
        for combo in _subsets(size):
            cand = cur
            for mv in combo:
                cand = cand.apply_move(mv)
            if min(cand.entries) >= 0:
                return Normalization(cand, tuple(moves) + combo)
    # unreachable: with |det| = 1 and a != 0 some sign pattern is nonnegative
    raise AssertionError(f"no nonnegative sign form for {b}")


def _subsets(size):
    from itertools import combinations

    return combinations(_SIGN_MOVES, size)


def npc_check(b: GluingMatrix) -> bool:
    """NPC criterion: edge iff ``a = d = 0``; loop iff ``|a - d| >= 2``."""
    if b.case is Case.EDGE:
        return b.a == 0 and b.d == 0
    return abs(b.a - b.d) >= 2


def enumerate_gluings(bound: int, case) -> list[GluingMatrix]:
    """Every valid gluing matrix with entries in ``[-bound, bound]``, lexicographic."""
    case = Case.parse(case)
    rng = range(-bound, bound + 1)
    out = []
    for a, b, c, d in product(rng, repeat=4):
        if b != 0 and abs(a * d - b * c) == 1:
            out.append(GluingMatrix(a, b, c, d, case))
    return out


# ---------------------------------------------------------------- words

_SYMBOL = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    """Freely reduced word: a tuple of ``(symbol, nonzero exponent)`` pairs."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> Word:
        if text == "1" or text == "":
            return cls(())
        if any(ch.isspace() for ch in text):
            raise InputError("whitespace is not allowed in words")
        letters = []
        for part in text.split("*"):
            m = _FACTOR.match(part)
            if not m:
                raise InputError(f"malformed word factor {part!r} in {text!r}")
            letters.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
        return cls(tuple(letters))

    @classmethod
    def gen(cls, symbol: str, exp: int = 1) -> Word:
        return cls(((symbol, exp),))

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(s if e == 1 else f"{s}^{e}" for s, e in self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple((s, -e) for s, e in reversed(self.letters)))

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def symbols(self) -> set[str]:
        return {s for s, _ in self.letters}

    def abelianize(self, generators) -> list[int]:
        index = {g: i for i, g in enumerate(generators)}
        vec = [0] * len(generators)
        for s, e in self.letters:
            if s not in index:
                raise InputError(f"unknown generator {s!r}")
            vec[index[s]] += e
        return vec

    def __len__(self):
        return len(self.letters)


def _reduce(letters) -> tuple:
    stack: list[list] = []
    for s, e in letters:
        if not isinstance(s, str) or not _SYMBOL.match(s):
            raise InputError(f"invalid generator symbol {s!r}")
        if isinstance(e, bool) or not isinstance(e, int):
            raise InputError(f"exponent must be an integer, got {e!r}")
        if e == 0:
            continue
        if stack and stack[-1][0] == s:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([s, e])
    return tuple((s, e) for s, e in stack)


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return x * y * x.inverse() * y.inverse()


# ---------------------------------------------------------------- presentations


@dataclass(frozen=True)
class Presentation:
    case: Case
    genus: int
    genus2: int | None
    gluing: GluingMatrix
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    labels: tuple[str, ...] = field(default=())

    def relator(self, label: str) -> list[Word]:
        return [w for w, lab in zip(self.relators, self.labels) if lab == label]


def _surface_product(xs, ys) -> Word:
    out = Word()
    for x, y in zip(xs, ys):
        out = out * commutator(Word.gen(x), Word.gen(y))
    return out


def build_presentation(case, g: int, b: GluingMatrix, g2: int | None = None) -> Presentation:
    """Presentation of the loop or edge group with exponents taken from ``b``.

    Each relation ``L = R`` is stored as the relator ``L R^-1``:

    loop  (1) ``z*zp*(prod [x_i,y_i])^-1``; (2) ``[x_i,f]``, ``[y_i,f]``, ``[z,f]``;
          (3) ``t*f*t^-1*z^-b*f^-a``; (4) ``t*zp*t^-1*z^-d*f^-c``.
    edge  (I) ``z*(prod [x_i,y_i])^-1``; (II) ``[x_i,f]``, ``[y_i,f]``;
          (III), (IV) the same for the primed block; (V) ``fp*z^-b*f^-a``;
          (VI) ``zp*z^-d*f^-c``.
    """
    case = Case.parse(case)
    if b.case is not case:
        raise InputError(f"gluing matrix is tagged {b.case.value}, presentation is {case.value}")
    if not isinstance(g, int) or g < 0:
        raise InputError(f"genus must be a nonnegative integer, got {g!r}")
    gen = Word.gen
    xs = [f"x{i}" for i in range(1, g + 1)]
    ys = [f"y{i}" for i in range(1, g + 1)]
    rels: list[tuple[str, Word]] = []
    if case is Case.LOOP:
        if g2 is not None:
            raise InputError("loop presentations take a single genus")
        gens = [s for pair in zip(xs, ys) for s in pair] + ["z", "zp", "f", "t"]
        rels.append(("1", gen("z") * gen("zp") * _surface_product(xs, ys).inverse()))
        for x, y in zip(xs, ys):
            rels.append(("2", commutator(gen(x), gen("f"))))
            rels.append(("2", commutator(gen(y), gen("f"))))
        rels.append(("2", commutator(gen("z"), gen("f"))))
        rels.append(("3", gen("t") * gen("f") * gen("t", -1) * gen("z", -b.b) * gen("f", -b.a)))
        rels.append(("4", gen("t") * gen("zp") * gen("t", -1) * gen("z", -b.d) * gen("f", -b.c)))
    else:
        if g < 1 or not isinstance(g2, int) or g2 < 1:
            raise InputError(f"edge presentations need g >= 1 and g' >= 1, got g={g}, g'={g2}")
        xps = [f"xp{i}" for i in range(1, g2 + 1)]
        yps = [f"yp{i}" for i in range(1, g2 + 1)]
        gens = ([s for pair in zip(xs, ys) for s in pair] + ["z", "f"]
                + [s for pair in zip(xps, yps) for s in pair] + ["zp", "fp"])
        rels.append(("I", gen("z") * _surface_product(xs, ys).inverse()))
        for x, y in zip(xs, ys):
            rels.append(("II", commutator(gen(x), gen("f"))))
            rels.append(("II", commutator(gen(y), gen("f"))))
        rels.append(("III", gen("zp") * _surface_product(xps, yps).inverse()))
        for x, y in zip(xps, yps):
            rels.append(("IV", commutator(gen(x), gen("fp"))))
            rels.append(("IV", commutator(gen(y), gen("fp"))))
        rels.append(("V", gen("fp") * gen("z", -b.b) * gen("f", -b.a)))
        rels.append(("VI", gen("zp") * gen("z", -b.d) * gen("f", -b.c)))
    return Presentation(case, g, g2, b, tuple(gens), tuple(w for _, w in rels),
                        tuple(lab for lab, _ in rels))


# ---------------------------------------------------------------- certificates


def certificate_words(b: GluingMatrix) -> list[Word]:
    """Words proven virtually unipotent for gluing matrix ``b``.

    Loop: ``f^(a-1) z^b`` under det = -1, b != 0, a - d >= 2.
    Edge (normalized, a >= 1 and b, c, d >= 0): ``z`` if c = 0, ``f`` if
    c > 0 and d = 0, both ``f`` and ``z`` if c, d > 0.
    """
    if b.case is Case.LOOP:
        if b.det != -1:
            raise HypothesisError(f"loop certificate needs det B = -1, got {b.det}")
        if b.a - b.d < 2:
            raise HypothesisError(f"loop certificate needs a - d >= 2, got {b.a - b.d}")
        return [Word.gen("f", b.a - 1) * Word.gen("z", b.b)]
    if b.a < 1:
        raise HypothesisError("edge certificate needs a normalized matrix with a >= 1")
    for name in "bcd":
        lo = 1 if name == "b" else 0
        if getattr(b, name) < lo:
            raise HypothesisError(f"edge certificate needs a normalized matrix with {name} >= {lo}")
    if b.c == 0:
        return [Word.gen("z")]
    if b.d == 0:
        return [Word.gen("f")]
    return [Word.gen("f"), Word.gen("z")]


# ---------------------------------------------------------------- abelianization


@dataclass(frozen=True)
class AbelianizedGroup:
    """``H_1 = Z^free_rank + sum Z/t_i`` with the projection of each generator."""

    free_rank: int
    torsion_divisors: tuple[int, ...]
    projection: dict
    # internal: change of basis and SNF diagonal, for images of arbitrary words
    generators: tuple[str, ...] = ()
    _v: IntMatrix | None = None
    _diag: tuple[int, ...] = ()

    def image(self, vec) -> tuple[tuple[int, ...], bool]:
        """Image of an abelianized vector: ``(free coords + torsion residues, is_torsion)``."""
        n = len(self.generators)
        y = [sum(vec[i] * self._v.entries[i][j] for i in range(n)) for j in range(n)]
        free, tors = [], []
        for j in range(n):
            dj = self._diag[j] if j < len(self._diag) else 0
            if dj == 0:
                free.append(y[j])
            elif dj > 1:
                tors.append(y[j] % dj)
        return tuple(free + tors), not any(free)


def abelianize(p: Presentation) -> AbelianizedGroup:
    gens = p.generators
    rows = [w.abelianize(gens) for w in p.relators]
    m = IntMatrix.from_rows(rows, len(gens))
    _, s, v = smith_normal_form(m)
    diag = tuple(snf_diagonal(s)) + (0,) * max(0, len(gens) - min(s.rows, s.cols))
    diag = diag[: len(gens)]
    free_rank = sum(1 for x in diag if x == 0)
    torsion = tuple(x for x in diag if x > 1)
    group = AbelianizedGroup(free_rank, torsion, {}, gens, v, diag)
    proj = {}
    for i, gname in enumerate(gens):
        e = [0] * len(gens)
        e[i] = 1
        proj[gname] = group.image(e)[0]
    object.__setattr__(group, "projection", proj)
    return group


def abelianization_image(p: Presentation, w: Word):
    """``(H_1, image of w, whether the image is torsion)``."""
    unknown = w.symbols() - set(p.generators)
    if unknown:
        raise InputError(f"unknown generator(s) {', '.join(sorted(unknown))} in word {w}")
    group = abelianize(p)
    img, tors = group.image(w.abelianize(p.generators))
    return group, img, tors
