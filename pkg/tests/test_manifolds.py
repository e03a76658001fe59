from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import sympy_smith_diagonal
from vucert.errors import HypothesisError, InputError
from vucert.manifolds import (
    Case,
    GluingMatrix,
    Word,
    abelianization_image,
    abelianize,
    allowed_moves,
    build_presentation,
    certificate_words,
    commutator,
    enumerate_gluings,
    normalize_gluing,
    npc_check,
)

LOOP_B = GluingMatrix(3, 1, 4, 1, Case.LOOP)


def edge(a, b, c, d):
    return GluingMatrix(a, b, c, d, Case.EDGE)


# ---------------------------------------------------------------- gluing matrices


def test_gluing_validation():
    with pytest.raises(InputError):
        GluingMatrix(1, 0, 0, 1)
    with pytest.raises(InputError):
        GluingMatrix(2, 1, 1, 1, "loop").inverse().negate_row(3)
    with pytest.raises(InputError):
        GluingMatrix(2, 2, 1, 1)
    with pytest.raises(InputError):
        GluingMatrix.parse("1,2,3", "edge")
    with pytest.raises(InputError):
        GluingMatrix.parse("1,x,0,1", "edge")
    with pytest.raises(InputError):
        GluingMatrix(1, 1, 0, 1, "torus")
    assert GluingMatrix.parse("3,1,4,1", "loop") == LOOP_B


def test_inverse_is_exact():
    for g in enumerate_gluings(2, Case.EDGE):
        inv = g.inverse()
        a, b, c, d = g.entries
        p, q, r, s = inv.entries
        assert [[a * p + b * r, a * q + b * s], [c * p + d * r, c * q + d * s]] == [[1, 0], [0, 1]]


def test_enumeration_counts():
    # counted independently below; each tag has the same matrices
    expected = sum(1 for a, b, c, d in product(range(-5, 6), repeat=4)
                   if b != 0 and abs(a * d - b * c) == 1)
    assert len(enumerate_gluings(5, "loop")) == expected == 572
    assert all(g.case is Case.EDGE for g in enumerate_gluings(1, "edge"))


# ---------------------------------------------------------------- NPC


@pytest.mark.parametrize("b, expected", [
    (edge(0, 1, 1, 0), True),
    (edge(1, 1, 1, 0), False),
    (LOOP_B, True),
    (GluingMatrix(2, 1, 1, 1), False),
])
def test_npc_examples(b, expected):
    assert npc_check(b) is expected


@pytest.mark.parametrize("case", ["loop", "edge"])
def test_npc_invariant_under_moves(case):
    for g in enumerate_gluings(3, case):
        for move in allowed_moves(case):
            assert npc_check(g.apply_move(move)) == npc_check(g)


def test_loop_inverse_preserves_gap():
    for g in enumerate_gluings(4, "loop"):
        inv = g.inverse()
        # (a, d) -> (-d, -a) when det = -1 and (d, a) when det = +1
        assert inv.a - inv.d == (g.a - g.d) * -g.det


# ---------------------------------------------------------------- normalization


def test_normalize_edge_examples():
    n = normalize_gluing(edge(-1, 2, 0, 1))
    assert n.matrix == edge(1, 2, 0, 1)
    assert n.moves == ("negate_col_1",)
    n = normalize_gluing(edge(0, 1, 1, 3))
    assert n.moves[0] == "invert"
    assert n.matrix.is_edge_normalized() and n.matrix == edge(3, 1, 1, 0)


def test_normalize_loop_unchanged():
    n = normalize_gluing(LOOP_B)
    assert n.matrix == LOOP_B and n.moves == () and n.loop_gap_ok
    assert normalize_gluing(GluingMatrix(0, 1, 1, 2)).loop_gap_ok is False


def test_normalize_refuses_npc_edge():
    with pytest.raises(HypothesisError, match="a = d = 0"):
        normalize_gluing(edge(0, 1, -1, 0))


def test_normalize_replays_over_enumeration():
    for g in enumerate_gluings(4, "edge"):
        if g.a == 0 and g.d == 0:
            continue
        n = normalize_gluing(g)
        assert n.replay(g) == n.matrix
        assert n.matrix.is_edge_normalized()
        assert abs(n.matrix.det) == 1 and n.matrix.b != 0
        sign_moves = [m for m in n.moves if m != "invert"]
        # minimality: no shorter sign sequence reaches a nonnegative matrix
        start = g.inverse() if n.moves[:1] == ("invert",) else g
        for size in range(len(sign_moves)):
            for combo in product(["negate_row_1", "negate_row_2", "negate_col_1", "negate_col_2"],
                                 repeat=size):
                cand = start
                for mv in combo:
                    cand = cand.apply_move(mv)
                assert min(cand.entries) < 0


# ---------------------------------------------------------------- words


def test_word_parse_and_print():
    w = Word.parse("t*f*t^-1*z^-1*f^-3")
    assert str(w) == "t*f*t^-1*z^-1*f^-3"
    assert str(Word.parse("f^2*f^-2")) == "1"
    assert str(Word.parse("1")) == "1" and len(Word.parse("")) == 0
    assert str(Word.parse("f*f*z")) == "f^2*z"
    for bad in ("f ^2", "f^", "2f", "f**z", "f^x", "f*"):
        with pytest.raises(InputError):
            Word.parse(bad)


symbols = st.sampled_from(["f", "z", "t", "x1"])
words = st.lists(st.tuples(symbols, st.integers(-3, 3)), max_size=8).map(
    lambda pairs: Word.parse("*".join(f"{s}^{e}" for s, e in pairs) or "1"))


@given(words, words, words)
def test_word_group_laws(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert str(u * u.inverse()) == "1"
    assert Word.parse(str(u)) == u
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert u ** 3 == u * u * u and u ** -2 == (u * u).inverse()


def test_commutator_form():
    assert str(commutator(Word.gen("x1"), Word.gen("f"))) == "x1*f*x1^-1*f^-1"


# ---------------------------------------------------------------- presentations


def test_loop_presentation_g1():
    p = build_presentation("loop", 1, LOOP_B)
    assert p.generators == ("x1", "y1", "z", "zp", "f", "t")
    assert [str(w) for w in p.relators] == [
        "z*zp*y1*x1*y1^-1*x1^-1",
        "x1*f*x1^-1*f^-1",
        "y1*f*y1^-1*f^-1",
        "z*f*z^-1*f^-1",
        "t*f*t^-1*z^-1*f^-3",
        "t*zp*t^-1*z^-1*f^-4",
    ]
    assert p.labels == ("1", "2", "2", "2", "3", "4")


def test_loop_presentation_g0():
    p = build_presentation("loop", 0, LOOP_B)
    assert p.generators == ("z", "zp", "f", "t")
    assert str(p.relator("1")[0]) == "z*zp"


def test_edge_presentation_g1():
    p = build_presentation("edge", 1, edge(1, 1, 1, 0), 1)
    assert p.generators == ("x1", "y1", "z", "f", "xp1", "yp1", "zp", "fp")
    assert len(p.relators) == 8
    assert p.labels == ("I", "II", "II", "III", "IV", "IV", "V", "VI")
    assert str(p.relator("V")[0]) == "fp*z^-1*f^-1"
    assert str(p.relator("VI")[0]) == "zp*f^-1"


@pytest.mark.parametrize("g, g2", [(1, 1), (2, 1), (1, 3), (3, 2)])
def test_relator_counts(g, g2):
    assert len(build_presentation("loop", g, LOOP_B).relators) == 2 * g + 4
    assert len(build_presentation("edge", g, edge(1, 1, 1, 0), g2).relators) == 2 * g + 2 * g2 + 4


def test_presentation_errors():
    with pytest.raises(InputError):
        build_presentation("edge", 0, edge(1, 1, 1, 0), 1)
    with pytest.raises(InputError):
        build_presentation("edge", 1, edge(1, 1, 1, 0), None)
    with pytest.raises(InputError):
        build_presentation("loop", -1, LOOP_B)
    with pytest.raises(InputError):
        build_presentation("loop", 1, edge(1, 1, 1, 0))


# ---------------------------------------------------------------- certificates and H1


def test_certificate_examples():
    assert [str(w) for w in certificate_words(LOOP_B)] == ["f^2*z"]
    assert [str(w) for w in certificate_words(edge(1, 3, 0, 1))] == ["z"]
    assert [str(w) for w in certificate_words(edge(2, 1, 1, 1))] == ["f", "z"]
    assert [str(w) for w in certificate_words(edge(1, 1, 1, 0))] == ["f"]


@pytest.mark.parametrize("b", [
    GluingMatrix(1, 1, 0, 1, "loop"),      # det = +1
    GluingMatrix(0, 1, 1, 2, "loop"),      # a - d = -2
    edge(-1, 2, 0, 1),                     # not normalized
])
def test_certificate_refusals(b):
    with pytest.raises(HypothesisError):
        certificate_words(b)


def test_h1_examples():
    p = build_presentation("loop", 1, LOOP_B)
    group, img, tors = abelianization_image(p, Word.parse("f^2*z"))
    assert (group.free_rank, group.torsion_divisors) == (4, ())
    assert tors and not any(img)
    p = build_presentation("edge", 1, edge(1, 1, 1, 0), 1)
    group, img, tors = abelianization_image(p, Word.parse("f"))
    assert group.free_rank == 4 and tors and not any(img)
    _, img, tors = abelianization_image(p, Word())
    assert tors and not any(img)
    with pytest.raises(InputError):
        abelianization_image(p, Word.parse("q"))


def test_h1_matches_sympy_smith_form():
    for g in enumerate_gluings(2, "loop")[:40]:
        p = build_presentation("loop", 1, g)
        rows = [w.abelianize(p.generators) for w in p.relators]
        diag = sympy_smith_diagonal(rows)
        group = abelianize(p)
        assert group.free_rank == len(p.generators) - sum(1 for x in diag if x)
        assert group.torsion_divisors == tuple(x for x in diag if x > 1)


def test_projection_is_consistent_with_relators():
    p = build_presentation("loop", 1, GluingMatrix(5, 2, 2, 1))
    group = abelianize(p)
    for w in p.relators:
        img, tors = group.image(w.abelianize(p.generators))
        assert tors and not any(img)
    for x, y in zip(group.torsion_divisors, group.torsion_divisors[1:]):
        assert y % x == 0
