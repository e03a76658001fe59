"""Explicit representations over cyclotomic fields.

A representation file is a JSON document::

    {"field": {"conductor": m}, "dimension": n, "case": "loop" | "edge" | "heisenberg",
     "genus": g, "genus2": g2, "gluing": [a, b, c, d],
     "generators": {symbol: [[entry, ...], ...]}}

where every entry is a list of ``phi(m)`` rational strings (the coordinates
in the power basis ``1, zeta, ..., zeta^(phi(m)-1)``).  ``genus2`` appears
only for edge files; ``genus`` and ``gluing`` are absent for the Heisenberg
group ``<x, y, z | [x,y]z^-1, [x,z], [y,z]>``.

Scope of the verdicts: an element is virtually unipotent when *every*
finite-dimensional representation, over every field, sends it to a virtually
unipotent matrix.  This module only ever inspects the one characteristic-zero
representation it is handed, so a passing verdict is evidence, never a
certificate.  The theorem-level statement is carried by the ``ForcedVU``
verdicts of :mod:`vucert.proof_engine`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import lcm

from vucert.arith import (
    CycloField,
    Poly,
    cyclo_field,
    galois_norm,
    is_cyclotomic_product,
    kronecker_oracle,
)
from vucert.errors import InputError, OracleDisagreement, SingularMatrixError
from vucert.linalg import (
    FieldMatrix,
    char_poly,
    find_eigenvalues,
    simultaneous_block_triangularize,
)
from vucert.manifolds import (
    Case,
    GluingMatrix,
    Presentation,
    Word,
    build_presentation,
    commutator,
)
from vucert.proof_engine import BlockPattern

HEISENBERG = "heisenberg"


def heisenberg_presentation() -> Presentation:
    x, y, z = Word.gen("x"), Word.gen("y"), Word.gen("z")
    rels = (commutator(x, y) * z.inverse(), commutator(x, z), commutator(y, z))
    return Presentation(None, 0, None, None, ("x", "y", "z"), rels, ("center", "xz", "yz"))


@dataclass(frozen=True)
class Representation:
    field: CycloField
    dimension: int
    case: str
    images: dict
    genus: int | None = None
    genus2: int | None = None
    gluing: GluingMatrix | None = None

    def presentation(self) -> Presentation:
        if self.case == HEISENBERG:
            return heisenberg_presentation()
        return build_presentation(self.case, self.genus, self.gluing, self.genus2)

    def image(self, symbol: str) -> FieldMatrix:
        try:
            return self.images[symbol]
        except KeyError:
            raise InputError(f"unknown generator {symbol!r}") from None

    def conjugate(self, c: FieldMatrix) -> Representation:
        c_inv = c.inverse()
        imgs = {s: c * m * c_inv for s, m in self.images.items()}
        return Representation(self.field, self.dimension, self.case, imgs,
                              self.genus, self.genus2, self.gluing)


def _require(doc, key, kind):
    if key not in doc:
        raise InputError(f"representation file is missing {key!r}")
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise InputError(f"{key!r} must be an integer")
    if kind is not int and not isinstance(val, kind):
        raise InputError(f"{key!r} has the wrong type")
    return val


def parse_representation(document) -> Representation:
    """Validate a representation document (dict or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"representation file is not valid JSON: {exc.msg}") from None
    if not isinstance(document, dict):
        raise InputError("representation document must be a JSON object")
    allowed = {"field", "dimension", "case", "genus", "genus2", "gluing", "generators"}
    extra = set(document) - allowed
    if extra:
        raise InputError(f"unknown key(s) in representation file: {', '.join(sorted(extra))}")
    fld = _require(document, "field", dict)
    conductor = _require(fld, "conductor", int)
    if conductor < 1 or set(fld) != {"conductor"}:
        raise InputError("field must be {\"conductor\": m} with m >= 1")
    field_ = cyclo_field(conductor)
    n = _require(document, "dimension", int)
    if n < 1:
        raise InputError("dimension must be positive")
    case = _require(document, "case", str)
    genus = genus2 = gluing = None
    if case == HEISENBERG:
        for key in ("genus", "genus2", "gluing"):
            if key in document:
                raise InputError(f"heisenberg files take no {key!r}")
    elif case in ("loop", "edge"):
        genus = _require(document, "genus", int)
        if case == "edge":
            genus2 = _require(document, "genus2", int)
        elif "genus2" in document:
            raise InputError("loop files take no 'genus2'")
        entries = _require(document, "gluing", list)
        if len(entries) != 4 or any(isinstance(x, bool) or not isinstance(x, int) for x in entries):
            raise InputError("gluing must be a list of four integers")
        gluing = GluingMatrix(*entries, case)
    else:
        raise InputError(f"case must be loop, edge or heisenberg, got {case!r}")

    gens = _require(document, "generators", dict)
    images = {}
    for sym, mat in gens.items():
        images[sym] = _parse_matrix(field_, n, sym, mat)
    rep = Representation(field_, n, case, images, genus, genus2, gluing)
    expected = rep.presentation().generators
    unknown = set(images) - set(expected)
    if unknown:
        raise InputError(f"unknown generator symbol(s): {', '.join(sorted(unknown))}")
    missing = [g for g in expected if g not in images]
    if missing:
        raise InputError(f"missing generator image(s): {', '.join(missing)}")
    # canonical generator order
    return Representation(field_, n, case, {g: images[g] for g in expected}, genus, genus2, gluing)


def _parse_matrix(field_, n, sym, mat) -> FieldMatrix:
    if not isinstance(mat, list) or len(mat) != n or any(not isinstance(r, list) or len(r) != n
                                                         for r in mat):
        raise InputError(f"image of {sym!r} must be a {n}x{n} array")
    rows = []
    for row in mat:
        out = []
        for entry in row:
            if not isinstance(entry, list) or any(not isinstance(x, str) for x in entry):
                raise InputError(f"entries of {sym!r} must be arrays of rational strings")
            out.append(field_.from_strings(entry))
        rows.append(out)
    m = FieldMatrix(field_, rows)
    if not m.is_invertible():
        raise SingularMatrixError(f"image of {sym!r} is singular")
    return m


def serialize_representation(rep: Representation) -> dict:
    doc = {"field": {"conductor": rep.field.conductor}, "dimension": rep.dimension,
           "case": rep.case}
    if rep.case != HEISENBERG:
        doc["genus"] = rep.genus
        if rep.case == "edge":
            doc["genus2"] = rep.genus2
        doc["gluing"] = list(rep.gluing.entries)
    doc["generators"] = {s: m.to_strings() for s, m in rep.images.items()}
    return doc


def dumps_representation(rep: Representation) -> str:
    return json.dumps(serialize_representation(rep), indent=1)


# ---------------------------------------------------------------- evaluation


def evaluate_word(rep: Representation, w: Word) -> FieldMatrix:
    out = FieldMatrix.identity(rep.field, rep.dimension)
    for sym, e in w.letters:
        out = out * (rep.image(sym) ** e)
    return out


@dataclass(frozen=True)
class RelationFailure:
    label: str
    relator: Word
    residue: FieldMatrix


@dataclass(frozen=True)
class RelationReport:
    failures: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def failing_labels(self) -> list[str]:
        return [f.label for f in self.failures]


def verify_relations(rep: Representation, pres: Presentation | None = None) -> RelationReport:
    """Evaluate every relator; the report lists those not equal to the identity."""
    pres = pres or rep.presentation()
    if set(pres.generators) != set(rep.images):
        raise InputError("representation and presentation have different generators")
    ident = FieldMatrix.identity(rep.field, rep.dimension)
    fails = []
    for label, w in zip(pres.labels, pres.relators):
        val = evaluate_word(rep, w)
        if val != ident:
            fails.append(RelationFailure(label, w, val))
    return RelationReport(tuple(fails))


# ---------------------------------------------------------------- VU test


@dataclass(frozen=True)
class VUReport:
    word: Word | None
    char_poly: Poly
    norm_poly: Poly
    cyclotomic_multiset: tuple | None
    verdict: bool
    witness_order: int | None

    def to_json(self) -> dict:
        return {
            "word": None if self.word is None else str(self.word),
            "char_poly": str(self.char_poly),
            "norm_poly": str(self.norm_poly),
            "cyclotomic_multiset": (None if self.cyclotomic_multiset is None
                                    else list(self.cyclotomic_multiset)),
            "verdict": self.verdict,
            "witness_order": self.witness_order,
        }


def monic_integer_form(p: Poly) -> Poly:
    """``l^deg * p(x / l)`` with ``l`` the lcm of denominators; ``p`` itself when integral."""
    from fractions import Fraction

    coeffs = [Fraction(c) for c in p.coeffs]
    ell = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    if ell == 1:
        return Poly([int(c) for c in coeffs])
    n = p.degree
    return Poly([int(c * ell ** (n - i)) for i, c in enumerate(coeffs)])


def is_vu_matrix(m: FieldMatrix, word: Word | None = None) -> VUReport:
    """Whether every eigenvalue of ``m`` is a root of unity (two independent tests)."""
    if not m.is_square():
        raise InputError("is_vu_matrix needs a square matrix")
    if not m.is_invertible():
        raise SingularMatrixError("is_vu_matrix needs an invertible matrix")
    cp = char_poly(m)
    norm = galois_norm(cp, m.field)
    test = monic_integer_form(norm)
    multiset = is_cyclotomic_product(test)
    oracle = kronecker_oracle(test)
    if (multiset is not None) != oracle:
        raise OracleDisagreement(f"cyclotomic peeling and Kronecker test disagree on {test}")
    witness = lcm(*multiset) if multiset is not None else None
    return VUReport(word, cp, norm, multiset, multiset is not None, witness)


def analyze_word(rep: Representation, w: Word) -> VUReport:
    unknown = w.symbols() - set(rep.images)
    if unknown:
        raise InputError(f"unknown generator(s) {', '.join(sorted(unknown))} in word {w}")
    return is_vu_matrix(evaluate_word(rep, w), w)


# ---------------------------------------------------------------- block data


@dataclass(frozen=True)
class BlockData:
    pattern: BlockPattern
    row_eigenvalues: tuple
    col_eigenvalues: tuple
    mu: dict
    residues: dict
    residues_ok: bool


def extract_block_data(rep: Representation, pres: Presentation | None = None) -> BlockData:
    """Block pattern, eigenvalue tables and transfer residues of a loop or edge representation.

    ``f'`` is ``t f t^-1`` for loops and the generator ``fp`` for edges.  The
    residue of cell (r, s) is ``lam'_s / (lam_r^a mu_rs^b)`` and must be a root
    of unity.
    """
    if rep.case not in ("loop", "edge"):
        raise InputError("block data needs a loop or edge representation")
    pres = pres or rep.presentation()
    report = verify_relations(rep, pres)
    if not report.passed:
        raise InputError("relations fail: " + ", ".join(report.failing_labels()))
    f = rep.image("f")
    if rep.case == "loop":
        t = rep.image("t")
        fp = t * f * t.inverse()
    else:
        fp = rep.image("fp")
    z = rep.image("z")
    eigs_f = find_eigenvalues(f)
    if rep.case == "loop":
        eigs_fp = list(eigs_f)  # f' is conjugate to f
    else:
        eigs_fp = find_eigenvalues(fp)
    layout = simultaneous_block_triangularize(f, fp, z, eigs_f, eigs_fp)
    pattern = BlockPattern(rep.case, [list(r) for r in layout.dims])
    g = rep.gluing
    roots = set(rep.field.roots_of_unity())
    mus, residues = {}, {}
    for r, s in pattern.occupied():
        block = layout.block(2, r, s)
        mu = block[0, 0]
        mus[(r, s)] = mu
        residues[(r, s)] = eigs_fp[s] / (eigs_f[r] ** g.a * mu ** g.b)
    ok = all(x in roots for x in residues.values())
    return BlockData(pattern, tuple(eigs_f), tuple(eigs_fp), mus, residues, ok)


# ---------------------------------------------------------------- fixtures


def _rep(conductor, case, images, **kw) -> Representation:
    field_ = cyclo_field(conductor)
    mats = {s: FieldMatrix(field_, m) for s, m in images.items()}
    n = next(iter(mats.values())).rows
    return Representation(field_, n, case, mats, kw.get("genus"), kw.get("genus2"), kw.get("gluing"))


def heisenberg_standard() -> Representation:
    x = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    y = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    z = [[1, 0, 1], [0, 1, 0], [0, 0, 1]]
    return _rep(1, HEISENBERG, {"x": x, "y": y, "z": z})


def heisenberg_dual() -> Representation:
    """``g -> (g^-1)^T``, again a representation of the Heisenberg group."""
    std = heisenberg_standard()
    imgs = {s: m.inverse().transpose() for s, m in std.images.items()}
    return Representation(std.field, 3, HEISENBERG, imgs)


def heisenberg_with_character(x_value=2) -> Representation:
    """Standard representation plus the character ``x -> x_value, y -> 1, z -> 1``."""
    from vucert.linalg import direct_sum

    std = heisenberg_standard()
    f = std.field
    chars = {"x": x_value, "y": 1, "z": 1}
    imgs = {s: direct_sum(m, FieldMatrix(f, [[chars[s]]])) for s, m in std.images.items()}
    return Representation(f, 4, HEISENBERG, imgs)


def trivial_representation(pres_case, genus, gluing, genus2=None, dimension=1,
                           conductor=1) -> Representation:
    pres = build_presentation(pres_case, genus, gluing, genus2)
    field_ = cyclo_field(conductor)
    ident = FieldMatrix.identity(field_, dimension)
    return Representation(field_, dimension, Case.parse(pres_case).value,
                          {g: ident for g in pres.generators}, genus, genus2, gluing)


def loop_character(gluing: GluingMatrix, genus: int, f_value, t_value=2,
                   conductor: int = 1) -> Representation:
    """One-dimensional loop representation with ``f -> f_value``.

    Commutativity turns relations (3), (4) into ``z = f^(1-a)`` raised to
    ``1/b``; only ``b = +-1`` is supported so no roots need to be taken.
    """
    if abs(gluing.b) != 1:
        raise InputError("loop_character needs b = +-1")
    field_ = cyclo_field(conductor)
    fv = field_.coerce(f_value)
    zv = fv ** ((1 - gluing.a) * gluing.b)
    zpv = fv ** gluing.c * zv ** gluing.d
    imgs = {}
    for i in range(1, genus + 1):
        imgs[f"x{i}"] = 1
        imgs[f"y{i}"] = 1
    imgs.update({"z": zv, "zp": zpv, "f": fv, "t": t_value})
    mats = {s: FieldMatrix(field_, [[v]]) for s, v in imgs.items()}
    return Representation(field_, 1, "loop", mats, genus, None, gluing)
