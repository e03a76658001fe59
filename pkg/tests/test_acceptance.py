"""Acceptance suite: one pass/fail line per criterion, each checked against its time budget.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
under output capture) or directly with ``python3 tests/test_acceptance.py``.
"""

import io
import json
import random
import sys
import time
from contextlib import redirect_stderr, redirect_stdout
from itertools import product
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vucert.arith import Poly, cyclo_field, is_cyclotomic_product, kronecker_oracle  # noqa: E402
from vucert.cli import main as cli_main  # noqa: E402
from vucert.linalg import (  # noqa: E402
    FieldMatrix,
    IntMatrix,
    direct_sum,
    forces_zero,
    poly_at_matrix,
    simultaneous_block_triangularize,
    smith_normal_form,
)
from vucert.manifolds import (  # noqa: E402
    Case,
    GluingMatrix,
    abelianization_image,
    allowed_moves,
    build_presentation,
    certificate_words,
    enumerate_gluings,
    normalize_gluing,
    npc_check,
)
from vucert.errors import HypothesisError  # noqa: E402
from vucert.proof_engine import (  # noqa: E402
    Outcome,
    build_system,
    check_forcing,
    discriminant_audit,
    edge_pattern_orbits,
    enumerate_loop_patterns,
    lam,
    mu,
    support_components,
)
from vucert.rep_checker import is_vu_matrix, parse_representation  # noqa: E402

HERE = Path(__file__).parent
CRITERIA = {}


def criterion(number, title, budget):
    def register(fn):
        CRITERIA[number] = (fn, title, budget)
        return fn
    return register


def _loop_matrices():
    # det = -1, 1 <= b <= 3, |a|, |c|, |d| <= 6, a - d >= 2
    rng = range(-6, 7)
    return [GluingMatrix(a, b, c, d, Case.LOOP)
            for a, b, c, d in product(rng, range(1, 4), rng, rng)
            if a * d - b * c == -1 and a - d >= 2]


def _edge_pattern_count(max_k, max_l, max_entry):
    # k x l grids over 0..max_entry with no zero row and no zero column (inclusion-exclusion)
    total = 0
    for k in range(1, max_k + 1):
        for ell in range(1, max_l + 1):
            total += sum((-1) ** (i + j) * comb(k, i) * comb(ell, j)
                         * (max_entry + 1) ** ((k - i) * (ell - j))
                         for i in range(k + 1) for j in range(ell + 1))
    return total


def _normalized_edge_c_positive():
    rng = range(0, 6)
    return [GluingMatrix(a, b, c, d, Case.EDGE) for a, b, c, d in product(rng, repeat=4)
            if a >= 1 and b >= 1 and c >= 1 and abs(a * d - b * c) == 1]


# ---------------------------------------------------------------- 1


@criterion(1, "NPC truth table and move invariance", 1.0)
def npc_truth_table():
    checked = bad = 0
    for case in (Case.LOOP, Case.EDGE):
        for b in enumerate_gluings(5, case):
            literal = (b.a == 0 and b.d == 0) if case is Case.EDGE else abs(b.a - b.d) >= 2
            verdict = npc_check(b)
            bad += verdict != literal
            bad += any(npc_check(b.apply_move(m)) != verdict for m in allowed_moves(case))
            checked += 1
    return bad == 0, f"{checked} matrices ({checked // 2} per case), {bad} mismatches"


# ---------------------------------------------------------------- 2


@criterion(2, "loop forcing vs oracle", 60.0)
def loop_forcing():
    mats = _loop_matrices()
    pats = enumerate_loop_patterns(3, 5)
    forced = decomposable = bad = targets = 0
    for b in mats:
        for p in pats:
            v = check_forcing(b, p)
            connected = len(support_components(p)) == 1
            if connected:
                if v.outcome is not Outcome.FORCED_VU or not v.oracle_confirmed:
                    bad += 1
                    continue
                forced += 1
                # independent per-target confirmation: tau - ((a-1) lam_r + b mu_rs) = 0
                s = build_system(b, p)
                n = len(s.variables)
                for r, q in p.occupied():
                    row = [0] * (n + 1)
                    row[s.index(lam(r))] -= b.a - 1
                    row[s.index(mu(r, q))] -= b.b
                    row[n] = 1
                    aug = IntMatrix.from_rows([list(x) + [0] for x in s.matrix.entries] + [row])
                    targets += 1
                    bad += not forces_zero(aug, [n])
            else:
                decomposable += 1
                bad += v.outcome is not Outcome.DECOMPOSABLE
    return bad == 0, (f"{len(mats)} matrices x {len(pats)} patterns: {forced} ForcedVU "
                      f"({targets} targets confirmed), {decomposable} Decomposable, {bad} failures")


# ---------------------------------------------------------------- 3


@criterion(3, "edge c = 0 induction vs oracle", 30.0)
def edge_c_zero():
    orbits = edge_pattern_orbits(3, 3, 3)
    covered = sum(n for _, n in orbits)
    bad = covered != _edge_pattern_count(3, 3, 3)
    for bb in (1, 2, 3):
        b = GluingMatrix(1, bb, 0, 1, Case.EDGE)
        for p, _ in orbits:
            v = check_forcing(b, p)
            s = build_system(b, p)
            oracle = {mu(r, q) for r, q in p.occupied() if forces_zero(s.matrix, [s.index(mu(r, q))])}
            bad += set(v.forced_targets) != oracle or v.outcome is not Outcome.FORCED_VU
    return bad == 0, (f"3 matrices x {len(orbits)} orbit representatives "
                      f"({covered} patterns), {bad} mismatches")


# ---------------------------------------------------------------- 4


@criterion(4, "edge c > 0 forcing and discriminant", 60.0)
def edge_c_positive():
    mats = _normalized_edge_c_positive()
    orbits = edge_pattern_orbits(3, 3, 3)
    bad = 0
    for b in mats:
        audit = discriminant_audit(b)
        bad += not audit.nonpositive or audit.strictly_negative != (b.d > 0)
        for p, _ in orbits:
            v = check_forcing(b, p)
            want = {lam(r) for r in range(p.k)}
            if b.d > 0:
                want |= {mu(r, q) for r, q in p.occupied()}
            bad += not (v.outcome is Outcome.FORCED_VU and v.oracle_confirmed
                        and set(v.forced_targets) == want)
    return bad == 0, (f"{len(mats)} matrices x {len(orbits)} orbit representatives, "
                      f"{bad} failures")


# ---------------------------------------------------------------- 5


@criterion(5, "certificate words map to torsion in H1", None)
def certificate_h1():
    checked = bad = 0
    loop_pres = []
    for b in enumerate_gluings(5, Case.LOOP) + _loop_matrices():
        try:
            words = certificate_words(b)
        except HypothesisError:
            continue
        loop_pres.append((build_presentation("loop", 1, b), words))
    edge_pres = []
    for b in enumerate_gluings(5, Case.EDGE):
        try:
            nb = normalize_gluing(b).matrix
            words = certificate_words(nb)
        except HypothesisError:
            continue
        edge_pres.append((build_presentation("edge", 1, nb, 1), words))
    for pres, words in loop_pres:
        for w in words:
            _, img, tors = abelianization_image(pres, w)
            bad += not tors or any(img)
            checked += 1
    for pres, words in edge_pres:
        for w in words:
            _, _, tors = abelianization_image(pres, w)
            bad += not tors
            checked += 1
    return bad == 0, f"{checked} certificate words ({len(loop_pres)} loop, {len(edge_pres)} edge), {bad} exceptions"


# ---------------------------------------------------------------- 6


@criterion(6, "cyclotomic test vs Kronecker oracle", 10.0)
def vu_cross_validation():
    count = bad = 0
    for deg in range(1, 5):
        for low in product(range(-3, 4), repeat=deg):
            if low[0] == 0:
                continue
            p = Poly(list(low) + [1])
            count += 1
            bad += (is_cyclotomic_product(p) is not None) != kronecker_oracle(p)
    x = Poly([0, 1])
    for j in range(1, 5):
        bad += is_cyclotomic_product((x - 1) ** j) is None
    bad += is_cyclotomic_product(Poly([-1, -1, 1])) is not None
    bad += is_cyclotomic_product(Poly([-2, 1])) is not None
    return bad == 0, f"{count} polynomials plus named cases, {bad} disagreements"


# ---------------------------------------------------------------- 7


def _random_commuting_triple(rng, m):
    field = cyclo_field(m)
    units = field.roots_of_unity()
    small = [field.coerce(x) for x in (1, 2, -1, 3)]

    def triangular(n):
        rows = [[field.zero()] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = rng.choice(units + small)
            for j in range(i + 1, n):
                rows[i][j] = field.coerce(rng.randint(-2, 2))
        return FieldMatrix(field, rows)

    def poly():
        return Poly([field.coerce(rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))]
                    + [field.one()])

    n = rng.randint(1, 6)
    if rng.random() < 0.5:
        # polynomials in one random matrix
        t = triangular(n)
        mats = [poly_at_matrix(poly(), t) for _ in range(3)]
    else:
        # block-diagonal seed: independent polynomial triples on each block
        n1 = rng.randint(1, max(1, n - 1))
        blocks = [triangular(n1), triangular(max(1, n - n1))]
        mats = [direct_sum(*(poly_at_matrix(poly(), t) for t in blocks)) for _ in range(3)]
        n = mats[0].rows
    while True:
        s = FieldMatrix(field, [[field.coerce(rng.randint(-2, 2)) for _ in range(n)]
                                for _ in range(n)])
        if s.is_invertible():
            break
    s_inv = s.inverse()
    eig_lists = [sorted({m_[i, i] for i in range(n)}, key=str) for m_ in mats]
    mult = [{e: sum(1 for i in range(n) if m_[i, i] == e) for e in el}
            for m_, el in zip(mats, eig_lists)]
    conj = [s * m_ * s_inv for m_ in mats]
    return conj, eig_lists, mult


@criterion(7, "simultaneous block triangularization contract", 60.0)
def triangularization_contract():
    rng = random.Random(2024)
    bad = 0
    conductors = (1, 3, 4, 12)
    for i in range(200):
        (p, pp, q), eigs, mult = _random_commuting_triple(rng, conductors[i % 4])
        layout = simultaneous_block_triangularize(p, pp, q, eigs[0], eigs[1], eigs[2])
        c = layout.conjugator
        ok = c.is_invertible()
        c_inv = c.inverse()
        n = p.rows
        for got, orig in zip(layout.conjugated, (p, pp, q)):
            ok &= got == c * orig * c_inv and c_inv * got * c == orig
            ok &= all(not got[a, b] for a in range(n) for b in range(a))
        offs = layout.offsets()
        for (r, s), o in offs.items():
            for j in range(o, o + layout.dims[r][s]):
                ok &= layout.conjugated[0][j, j] == layout.row_eigenvalues[r]
                ok &= layout.conjugated[1][j, j] == layout.col_eigenvalues[s]
        for r, lam_r in enumerate(layout.row_eigenvalues):
            ok &= sum(layout.dims[r]) == mult[0][lam_r]
        for s, lam_s in enumerate(layout.col_eigenvalues):
            ok &= sum(row[s] for row in layout.dims) == mult[1][lam_s]
        bad += not ok
    return bad == 0, f"200 triples over Q(zeta_m), m in {conductors}, {bad} failures"


# ---------------------------------------------------------------- 8


@criterion(8, "Heisenberg suite", 5.0)
def heisenberg_suite():
    names = ("heisenberg_standard", "heisenberg_dual", "heisenberg_character")
    reps = {n: parse_representation((HERE / "fixtures" / f"{n}.json").read_text()) for n in names}
    bad = sum(not is_vu_matrix(r.image("z")).verdict for r in reps.values())
    four = reps["heisenberg_character"]
    bad += four.dimension != 4 or is_vu_matrix(four.image("x")).verdict
    return bad == 0, f"z is VU in {len(reps)} fixtures; x is not VU in the 4-dimensional one; {bad} failures"


# ---------------------------------------------------------------- 9


@criterion(9, "Smith normal form contract", 10.0)
def smith_contract():
    rng = random.Random(99)
    bad = 0
    for _ in range(500):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = IntMatrix.from_rows([[rng.randint(-10, 10) for _ in range(c)] for _ in range(r)], c)
        u, s, v = smith_normal_form(m)
        ok = u * m * v == s
        ok &= abs(u.det()) == 1 and abs(v.det()) == 1
        diag = [s.entries[i][i] for i in range(min(r, c))]
        ok &= all(s.entries[i][j] == 0 for i in range(r) for j in range(c) if i != j)
        ok &= all(x >= 0 for x in diag)
        ok &= all(y % x == 0 if x else y == 0 for x, y in zip(diag, diag[1:]))
        if r == c and m.det() != 0:
            prod = 1
            for x in diag:
                prod *= x
            ok &= abs(m.det()) == prod
        bad += not ok
    return bad == 0, f"500 matrices up to 5x5, {bad} failures"


# ---------------------------------------------------------------- 10


@criterion(10, "CLI golden corpus", None)
def cli_golden():
    corpus = json.loads((HERE / "golden" / "corpus.json").read_text())
    fixtures = str(HERE / "fixtures")
    bad = 0
    for case in corpus:
        argv = [a.replace("{fixtures}", fixtures) for a in case["argv"]]
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = cli_main(argv)
        got = (code, out.getvalue().replace(fixtures, "{fixtures}"),
               err.getvalue().replace(fixtures, "{fixtures}"))
        bad += got != (case["exit"], case["stdout"], case["stderr"])
    return bad == 0, f"{len(corpus)} invocations, {bad} differences"


# ---------------------------------------------------------------- driver


def evaluate(number):
    fn, title, budget = CRITERIA[number]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = budget is None or elapsed < budget
    limit = "no time budget" if budget is None else f"budget {budget:g}s"
    status = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {number:2d} {status}: {title}: {detail} [{elapsed:.2f}s, {limit}]"
    return ok, in_time, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, in_time, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert in_time, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, _, line in results:
        print(line)
    sys.exit(0 if all(ok and t for ok, t, _ in results) else 1)
