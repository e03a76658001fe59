"""Integer forcing systems for the loop and edge certificate arguments.

A block pattern ``n[r][s]`` and a gluing matrix determine a homogeneous
integer system in the additive eigenvalue symbols ``lam_r`` (eigenvalues of
the fiber), ``lamp_s`` (edge case: eigenvalues of the second fiber) and
``mu_r_s`` (one per occupied cell).  Each ``check_forcing_*`` function runs
the hand argument on that system and then confirms every conclusion with the
independent row-space oracle :func:`vucert.linalg.forces_zero`.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache

from vucert.errors import InputError, OracleDisagreement
from vucert.linalg import IntMatrix, forced_indices, rational_kernel
from vucert.manifolds import Case, GluingMatrix


class Outcome(str, Enum):
    FORCED_VU = "ForcedVU"
    DECOMPOSABLE = "Decomposable"
    NOT_FORCED = "NotForced"
    HYPOTHESIS_VIOLATED = "HypothesisViolated"


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class BlockPattern:
    case: Case
    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "case", Case.parse(self.case))
        dims = tuple(tuple(row) for row in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or not dims[0]:
            raise InputError("pattern must have at least one cell")
        width = len(dims[0])
        for row in dims:
            if len(row) != width:
                raise InputError("pattern rows have different lengths")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                    raise InputError(f"pattern entries must be nonnegative integers, got {x!r}")
        rows = [sum(r) for r in dims]
        cols = [sum(dims[r][s] for r in range(len(dims))) for s in range(width)]
        if self.case is Case.LOOP:
            if len(dims) != width:
                raise InputError("loop patterns must be square")
            for r, (rs, cs) in enumerate(zip(rows, cols), 1):
                if rs != cs:
                    raise InputError(f"loop pattern row {r} sums to {rs} but column {r} to {cs}")
                if rs == 0:
                    raise InputError(f"loop pattern row {r} is empty")
        else:
            for r, rs in enumerate(rows, 1):
                if rs == 0:
                    raise InputError(f"edge pattern row {r} is empty")
            for s, cs in enumerate(cols, 1):
                if cs == 0:
                    raise InputError(f"edge pattern column {s} is empty")

    @classmethod
    def parse(cls, text: str, case) -> BlockPattern:
        try:
            dims = [[int(x) for x in row.split(",")] for row in text.split(";")]
        except ValueError:
            raise InputError(f"malformed pattern {text!r}; expected e.g. '1,1;1,1'") from None
        return cls(case, dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def ell(self) -> int:
        return len(self.dims[0])

    @property
    def dimension(self) -> int:
        return sum(map(sum, self.dims))

    @cached_property
    def _cells(self) -> tuple[tuple[int, int], ...]:
        return tuple((r, s) for r in range(self.k) for s in range(self.ell) if self.dims[r][s])

    def occupied(self) -> list[tuple[int, int]]:
        return list(self._cells)

    def n(self, r: int, s: int) -> int:
        return self.dims[r][s]

    @cached_property
    def _text(self) -> str:
        return ";".join(",".join(map(str, row)) for row in self.dims)

    def __str__(self):
        return self._text


def support_components(pattern: BlockPattern) -> list[list[int]]:
    """Connected components of ``r ~ s iff n[r][s] + n[s][r] > 0`` (loop patterns)."""
    k = pattern.k
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in range(k):
        for s in range(k):
            if pattern.dims[r][s] + pattern.dims[s][r]:
                parent[find(r)] = find(s)
    groups = defaultdict(list)
    for r in range(k):
        groups[find(r)].append(r)
    return sorted(groups.values())


def enumerate_loop_patterns(max_k: int, max_dim: int) -> list[BlockPattern]:
    """Loop patterns with k <= max_k, total dimension <= max_dim, row sums = column sums."""
    out = []
    for k in range(1, max_k + 1):
        cells = k * k
        for vec in _compositions_upto(cells, max_dim):
            dims = [vec[r * k:(r + 1) * k] for r in range(k)]
            try:
                out.append(BlockPattern(Case.LOOP, dims))
            except InputError:
                continue
    return out


def enumerate_edge_patterns(max_k: int, max_l: int, max_entry: int) -> list[BlockPattern]:
    """Edge patterns with k <= max_k, l <= max_l and entries in ``[0, max_entry]``."""
    from itertools import product

    out = []
    for k in range(1, max_k + 1):
        for ell in range(1, max_l + 1):
            for vec in product(range(max_entry + 1), repeat=k * ell):
                dims = [vec[r * ell:(r + 1) * ell] for r in range(k)]
                try:
                    out.append(BlockPattern(Case.EDGE, dims))
                except InputError:
                    continue
    return out


def edge_pattern_orbits(max_k: int, max_l: int, max_entry: int) -> list[tuple[BlockPattern, int]]:
    """One representative per orbit of edge patterns under row and column permutations.

    Returns ``(representative, orbit size)`` pairs; the orbit sizes add up to
    ``len(enumerate_edge_patterns(max_k, max_l, max_entry))``.  Permuting the
    rows or columns of N only relabels the variables of the system, so every
    forcing question has the same answer on the whole orbit.
    """
    from itertools import combinations_with_replacement, permutations, product

    out = []
    for ell in range(1, max_l + 1):
        col_perms = list(permutations(range(ell)))
        nonzero = [row for row in product(range(max_entry + 1), repeat=ell) if any(row)]
        for k in range(1, max_k + 1):
            row_perms = list(permutations(range(k)))
            for rows in combinations_with_replacement(nonzero, k):
                if not all(any(row[s] for row in rows) for s in range(ell)):
                    continue
                images = {tuple(sorted(tuple(row[p] for p in perm) for row in rows))
                          for perm in col_perms}
                if min(images) != rows:
                    continue
                orbit = {tuple(grid[i] for i in rp) for grid in images for rp in row_perms}
                out.append((BlockPattern(Case.EDGE, [list(row) for row in rows]), len(orbit)))
    return out


def _compositions_upto(cells: int, total: int):
    # all nonnegative integer vectors of length `cells` with sum in [1, total]
    def rec(i, left):
        if i == cells:
            yield ()
            return
        for x in range(left + 1):
            for rest in rec(i + 1, left - x):
                yield (x,) + rest

    for vec in rec(0, total):
        if sum(vec):
            yield list(vec)


# ---------------------------------------------------------------- systems


@lru_cache(maxsize=None)
def lam(r: int) -> str:
    return f"lam{r + 1}"


@lru_cache(maxsize=None)
def lamp(s: int) -> str:
    return f"lamp{s + 1}"


@lru_cache(maxsize=None)
def mu(r: int, s: int) -> str:
    return f"mu{r + 1}_{s + 1}"


@dataclass(frozen=True)
class IntLinearSystem:
    variables: tuple[str, ...]
    matrix: IntMatrix
    provenance: tuple[str, ...]

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def row_form(self, i: int) -> dict:
        return {v: x for v, x in zip(self.variables, self.matrix.entries[i]) if x}

    def evaluate(self, values) -> list:
        return [sum(x * v for x, v in zip(row, values)) for row in self.matrix.entries]


def format_form(form: dict, order=None) -> str:
    """Render a linear form such as ``{'lam1': 2, 'mu1_1': 1}`` as ``2*lam1 + mu1_1``."""
    if len(form) == 1:
        ((v, x),) = form.items()
        if x == 1:
            return v
    keys = order if order is not None else sorted(form)
    parts = []
    for v in keys:
        x = form.get(v, 0)
        if not x:
            continue
        mag = abs(x)
        body = v if mag == 1 else f"{mag}*{v}"
        if not parts:
            parts.append(("-" if x < 0 else "") + body)
        else:
            parts.append((" - " if x < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


def _add(form, var, x):
    if x:
        form[var] = form.get(var, 0) + x
        if not form[var]:
            del form[var]


def _transfer_form(b: GluingMatrix, pattern: BlockPattern, r: int, s: int) -> dict:
    form: dict = {}
    if pattern.case is Case.LOOP:
        _add(form, lam(s), 1)
        _add(form, lam(r), -b.a)
        _add(form, mu(r, s), -b.b)
    else:
        _add(form, lam(r), b.a)
        _add(form, mu(r, s), b.b)
        _add(form, lamp(s), -1)
    return form


def _balance_form(b: GluingMatrix, pattern: BlockPattern, r: int) -> dict:
    # loop: sum_s n_rs mu_rs + n_sr (c lam_s + d mu_sr)
    form: dict = {}
    for s in range(pattern.k):
        n_rs, n_sr = pattern.n(r, s), pattern.n(s, r)
        if n_rs:
            _add(form, mu(r, s), n_rs)
        if n_sr:
            _add(form, lam(s), b.c * n_sr)
            _add(form, mu(s, r), b.d * n_sr)
    return form


def _row_sum_form(pattern: BlockPattern, r: int) -> dict:
    form: dict = {}
    for s in range(pattern.ell):
        if pattern.n(r, s):
            _add(form, mu(r, s), pattern.n(r, s))
    return form


def _col_sum_form(b: GluingMatrix, pattern: BlockPattern, s: int) -> dict:
    form: dict = {}
    for r in range(pattern.k):
        n_rs = pattern.n(r, s)
        if n_rs:
            _add(form, lam(r), b.c * n_rs)
            _add(form, mu(r, s), b.d * n_rs)
    return form


def system_rows(b: GluingMatrix, pattern: BlockPattern) -> list[tuple[str, dict]]:
    """``(provenance tag, linear form)`` for every row of the forcing system.

    Tags: ``transfer[r,s]`` is the eigenvalue transfer across the gluing for
    cell (r, s); ``balance[r]`` (loop) is the determinant condition on the
    r-th eigenspace; ``rowsum[r]`` and ``colsum[s]`` (edge) are the
    determinant conditions on the two sides.
    """
    system = build_system(b, pattern)
    return [(tag, system.row_form(i)) for i, tag in enumerate(system.provenance)]


@lru_cache(maxsize=4096)
def _layout(loop: bool, k: int, ell: int, cells: tuple) -> tuple:
    # variable names, provenance tags and the column of each occupied cell
    names = [lam(r) for r in range(k)]
    if not loop:
        names += [lamp(s) for s in range(ell)]
    base = len(names)
    names += [mu(r, s) for r, s in cells]
    tags = [f"transfer[{r + 1},{s + 1}]" for r, s in cells]
    if loop:
        tags += [f"balance[{r + 1}]" for r in range(k)]
    else:
        tags += [f"rowsum[{r + 1}]" for r in range(k)] + [f"colsum[{s + 1}]" for s in range(ell)]
    col = {cell: base + i for i, cell in enumerate(cells)}
    return tuple(names), tuple(tags), col


def build_system(b: GluingMatrix, pattern: BlockPattern) -> IntLinearSystem:
    """The homogeneous integer system for ``(B, N)``; variables ordered lam, [lamp,] mu.

    Rows are the transfer rows in cell order, then ``balance[r]`` (loop) or
    ``rowsum[r]`` and ``colsum[s]`` (edge).
    """
    if b.case is not pattern.case:
        raise InputError(f"gluing matrix is {b.case.value} but pattern is {pattern.case.value}")
    k, ell, dims = pattern.k, pattern.ell, pattern.dims
    loop = pattern.case is Case.LOOP
    names, tags, col = _layout(loop, k, ell, pattern._cells)
    nvar = len(names)
    a, bb, c, d = b.a, b.b, b.c, b.d
    rows = []
    for (r, s), j in col.items():
        vec = [0] * nvar
        if loop:
            vec[s] += 1
            vec[r] -= a
            vec[j] = -bb
        else:
            vec[r] = a
            vec[k + s] = -1
            vec[j] = bb
        rows.append(vec)
    if loop:
        for r in range(k):
            vec = [0] * nvar
            for s in range(k):
                n_rs, n_sr = dims[r][s], dims[s][r]
                if n_rs:
                    vec[col[(r, s)]] += n_rs
                if n_sr:
                    vec[s] += c * n_sr
                    vec[col[(s, r)]] += d * n_sr
            rows.append(vec)
    else:
        colsums = [[0] * nvar for _ in range(ell)]
        for r in range(k):
            vec = [0] * nvar
            for s, n_rs in enumerate(dims[r]):
                if n_rs:
                    j = col[(r, s)]
                    vec[j] = n_rs
                    colsums[s][r] += c * n_rs
                    colsums[s][j] = d * n_rs
            rows.append(vec)
        rows += colsums
    return IntLinearSystem(names, IntMatrix(len(rows), nvar, tuple(map(tuple, rows))), tags)


def system_variables(pattern: BlockPattern) -> list[str]:
    return list(_layout(pattern.case is Case.LOOP, pattern.k, pattern.ell, pattern._cells)[0])


def oracle_forced(system: IntLinearSystem, targets: list[dict]) -> list[bool]:
    """For each target form, whether the system forces it to vanish.

    Each target ``t`` gets an auxiliary column ``tau`` and the row
    ``tau - t = 0``; the target is forced iff ``tau`` is.
    """
    nvar = len(system.variables)
    ntar = len(targets)
    index = {v: i for i, v in enumerate(system.variables)}
    if all(len(t) == 1 and next(iter(t.values())) for t in targets):
        # single-variable targets: test the basis vectors directly
        return forced_indices(system.matrix, [index[next(iter(t))] for t in targets])
    rows = [list(r) + [0] * ntar for r in system.matrix.entries]
    for t, form in enumerate(targets):
        row = [0] * (nvar + ntar)
        for v, x in form.items():
            row[index[v]] -= x
        row[nvar + t] = 1
        rows.append(row)
    aug = IntMatrix.from_rows(rows, nvar + ntar)
    return forced_indices(aug, range(nvar, nvar + ntar))


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class ForcingVerdict:
    outcome: Outcome
    forced_targets: tuple[str, ...] = ()
    trace: tuple[str, ...] = ()
    oracle_confirmed: bool = False

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "oracle_confirmed": self.oracle_confirmed,
            "targets": list(self.forced_targets),
            "trace": list(self.trace),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _combine(forms_with_coeffs) -> dict:
    out: dict = {}
    for coef, form in forms_with_coeffs:
        for v, x in form.items():
            _add(out, v, coef * x)
    return out


def eigen_balance_audit(b: GluingMatrix, pattern: BlockPattern) -> list[tuple[dict, dict]]:
    """Eliminate every mu from the loop system, one equation per r.

    Returns ``(combination, expected)`` pairs: ``combination`` is
    ``b*balance[r] + sum_s n_rs*transfer[r,s] + d*sum_s n_sr*transfer[s,r]``
    (with transfer written as ``lam_s - a*lam_r - b*mu_rs``) and
    ``expected`` is ``sum_s (n_rs + n_sr) lam_s - (a - d) n_r lam_r``.  The
    two agree exactly when ``det B = -1`` and row sums equal column sums.
    """
    out = []
    for r in range(pattern.k):
        parts = [(b.b, _balance_form(b, pattern, r))]
        for s in range(pattern.k):
            if pattern.n(r, s):
                parts.append((pattern.n(r, s), _transfer_form(b, pattern, r, s)))
            if pattern.n(s, r):
                parts.append((b.d * pattern.n(s, r), _transfer_form(b, pattern, s, r)))
        combo = _combine(parts)
        n_r = sum(pattern.dims[r])
        expected: dict = {}
        for s in range(pattern.k):
            _add(expected, lam(s), pattern.n(r, s) + pattern.n(s, r))
        _add(expected, lam(r), -(b.a - b.d) * n_r)
        out.append((combo, expected))
    return out


def _loop_hypotheses(b: GluingMatrix) -> str | None:
    if b.det != -1:
        return f"det B = -1 (got {b.det})"
    if b.a - b.d >= 2:
        return None
    if b.a - b.d <= -2:
        return (f"a - d >= 2 (got a - d = {b.a - b.d}; the maximal-value argument "
                "does not cover a - d <= -2)")
    return f"|a - d| >= 2 (got a - d = {b.a - b.d})"


def _max_argument(b, pattern, values, trace, label):
    """Run the maximal-value argument on one integer solution of the balance equations.

    Returns True when all lam agree.  A strict inequality on a genuine
    solution would be a contradiction, so that branch raises.
    """
    vals = list(values)
    if not any(vals):
        trace.append(f"{label}: lam = 0")
        return True
    if max(vals) <= 0:
        vals = [-x for x in vals]
        trace.append(f"{label}: negated so the maximum is positive")
    top = max(vals)
    arg = [r for r, x in enumerate(vals) if x == top]
    if len(arg) == pattern.k:
        trace.append(f"{label}: all lam equal ({top})")
        return True
    for r in arg:
        n_r = sum(pattern.dims[r])
        lhs = sum((pattern.n(r, s) + pattern.n(s, r)) * vals[s] for s in range(pattern.k))
        rhs = (b.a - b.d) * n_r * vals[r]
        crossing = [s for s in range(pattern.k) if s not in arg and pattern.n(r, s) + pattern.n(s, r)]
        if crossing and 2 * n_r * top > lhs and rhs >= 2 * n_r * top and lhs == rhs:
            raise OracleDisagreement(
                f"{label}: maximal-value contradiction reached on a kernel vector "
                f"(r={r + 1}, 2n_r*max={2 * n_r * top} > {lhs} = {rhs})")
    trace.append(f"{label}: maximum attained on {[r + 1 for r in arg]} only; "
                 "no crossing support at the maximum")
    return False


def check_forcing_loop(b: GluingMatrix, pattern: BlockPattern) -> ForcingVerdict:
    """Loop argument: balance equations force equal lam, hence ``(a-1)lam_r + b mu_rs = 0``."""
    if b.case is not Case.LOOP or pattern.case is not Case.LOOP:
        raise InputError("check_forcing_loop needs a loop matrix and a loop pattern")
    trace = [f"B = {b}, N = {pattern}"]
    bad = _loop_hypotheses(b)
    if bad:
        trace.append(f"hypothesis violated: {bad}")
        return ForcingVerdict(Outcome.HYPOTHESIS_VIOLATED, (), tuple(trace), False)
    system = build_system(b, pattern)
    trace.append(f"system: {len(system.variables)} variables, {system.matrix.rows} rows")

    # mu elimination, checked as an explicit integer combination of rows
    balance_rows = []
    for r, (combo, expected) in enumerate(eigen_balance_audit(b, pattern)):
        if combo != expected:
            raise OracleDisagreement(f"mu elimination for r={r + 1} gave {format_form(combo)}, "
                                     f"expected {format_form(expected)}")
        balance_rows.append([expected.get(lam(s), 0) for s in range(pattern.k)])
        trace.append(f"eliminated mu for r={r + 1}: {format_form(expected)} = 0")

    comps = support_components(pattern)
    if len(comps) > 1:
        trace.append("support graph components: "
                     + " | ".join(",".join(str(r + 1) for r in c) for c in comps))
        lam_idx = [system.index(lam(r)) for r in range(pattern.k)]
        unequal = any(len({v[i] for i in lam_idx}) > 1 for v in rational_kernel(system.matrix))
        trace.append("kernel has unequal lam: " + ("yes" if unequal else "no"))
        return ForcingVerdict(Outcome.DECOMPOSABLE, (), tuple(trace), False)

    # the argument runs on the balance equations alone (lam variables only)
    lam_basis = rational_kernel(IntMatrix.from_rows(balance_rows, pattern.k))
    trace.append(f"balance kernel dimension {len(lam_basis)}")
    for i, vec in enumerate(lam_basis):
        if not _max_argument(b, pattern, vec, trace, f"balance kernel vector {i + 1}"):
            raise OracleDisagreement("connected support but the balance kernel has unequal lam")

    targets = []
    for r, s in pattern.occupied():
        form: dict = {}
        _add(form, lam(r), b.a - 1)
        _add(form, mu(r, s), b.b)
        targets.append(form)
    trace.append("lam all equal, so transfer[r,s] gives (a-1)lam_r + b mu_rs = 0 on every cell")
    return _confirm(system, targets, trace)


def _confirm(system, targets, trace) -> ForcingVerdict:
    order = list(system.variables)
    names = [format_form(t, order) for t in targets]
    verdicts = oracle_forced(system, targets)
    for name, ok in zip(names, verdicts):
        trace.append(f"oracle: {name} {'forced' if ok else 'NOT forced'}")
    if not all(verdicts):
        missing = [n for n, ok in zip(names, verdicts) if not ok]
        raise OracleDisagreement("argument forced targets the oracle refutes: " + ", ".join(missing))
    return ForcingVerdict(Outcome.FORCED_VU, tuple(names), tuple(trace), True)


def _confirm_vars(system, names, trace) -> ForcingVerdict:
    """:func:`_confirm` for targets that are single variables."""
    verdicts = forced_indices(system.matrix, [system.index(n) for n in names])
    trace.extend(f"oracle: {n} {'forced' if ok else 'NOT forced'}" for n, ok in zip(names, verdicts))
    if not all(verdicts):
        missing = [n for n, ok in zip(names, verdicts) if not ok]
        raise OracleDisagreement("argument forced targets the oracle refutes: " + ", ".join(missing))
    return ForcingVerdict(Outcome.FORCED_VU, tuple(names), tuple(trace), True)


def _edge_hypotheses(b: GluingMatrix) -> str | None:
    for name, lo in (("a", 1), ("b", 1), ("c", 0), ("d", 0)):
        if getattr(b, name) < lo:
            return f"normalized B needs {name} >= {lo} (got {getattr(b, name)})"
    return None


def peel_induction(b: GluingMatrix, pattern: BlockPattern, values: dict, trace, label) -> set:
    """Run the row/column peeling induction on one rational solution (c = 0).

    ``values`` maps variable names to rationals.  Empty cells receive the
    value ``(lamp_s - lam_r)/b`` so that every transfer equation holds; they
    take part in the ordering but never in the conclusions.  Returns the
    occupied cells shown to have ``mu = 0``.
    """
    k, ell = pattern.k, pattern.ell
    m = {}
    for r in range(k):
        for s in range(ell):
            if pattern.n(r, s):
                m[(r, s)] = Fraction(values[mu(r, s)])
            else:
                m[(r, s)] = Fraction(values[lamp(s)] - values[lam(r)], b.b)
    rows, cols = list(range(k)), list(range(ell))
    forced = set()
    while rows and cols:
        top = max(m[(r, s)] for r in rows for s in cols)
        rk, s1 = min((r, s) for r in rows for s in cols if m[(r, s)] == top)
        low = min(m[(rk, s)] for s in cols)
        sl = min(s for s in cols if m[(rk, s)] == low)
        if low >= 0:
            for s in cols:
                if pattern.n(rk, s) and m[(rk, s)] != 0:
                    raise OracleDisagreement(f"{label}: row {rk + 1} peel failed at cell {s + 1}")
                if pattern.n(rk, s):
                    forced.add((rk, s))
            trace.append(f"{label}: max at ({rk + 1},{s1 + 1}); row {rk + 1} nonnegative, peeled")
            rows.remove(rk)
        else:
            for r in rows:
                # transfer equations: mu[rk,sl] - mu[r,sl] = mu[rk,s1] - mu[r,s1] >= 0
                if m[(rk, sl)] - m[(r, sl)] != m[(rk, s1)] - m[(r, s1)]:
                    raise OracleDisagreement(f"{label}: transfer equations fail on column {sl + 1}")
                if pattern.n(r, sl) and m[(r, sl)] != 0:
                    raise OracleDisagreement(f"{label}: column {sl + 1} peel failed at row {r + 1}")
                if pattern.n(r, sl):
                    forced.add((r, sl))
            trace.append(f"{label}: max at ({rk + 1},{s1 + 1}); column {sl + 1} negative, peeled")
            cols.remove(sl)
    return forced


def _quad_add(q, i, j, x):
    key = (min(i, j), max(i, j))
    q[key] = q.get(key, 0) + x
    if not q[key]:
        del q[key]


def _quad_times(l1: dict, l2: dict, coef: int, q: dict):
    for v, x in l1.items():
        for w, y in l2.items():
            _quad_add(q, v, w, coef * x * y)


def quadratic_identity_holds(b: GluingMatrix, pattern: BlockPattern) -> bool:
    """Check the c > 0 identity as an equality of quadratic forms.

    ``sum n_rs (bd mu_rs^2 + ad lam_r mu_rs + ac lam_r^2)`` equals
    ``sum_s lamp_s colsum[s] - sum n_rs d mu_rs T_rs - sum_r c lam_r (b rowsum[r] + sum_s n_rs T_rs)``
    where ``T_rs = lamp_s - a lam_r - b mu_rs`` is the negated transfer row.
    """
    lhs: dict = {}
    rhs: dict = {}
    for r, s in pattern.occupied():
        n = pattern.n(r, s)
        _quad_add(lhs, mu(r, s), mu(r, s), n * b.b * b.d)
        _quad_add(lhs, lam(r), mu(r, s), n * b.a * b.d)
        _quad_add(lhs, lam(r), lam(r), n * b.a * b.c)

    def neg_transfer(r, s):
        return {v: -x for v, x in _transfer_form(b, pattern, r, s).items()}

    for s in range(pattern.ell):
        _quad_times({lamp(s): 1}, _col_sum_form(b, pattern, s), 1, rhs)
    for r, s in pattern.occupied():
        _quad_times({mu(r, s): 1}, neg_transfer(r, s), -pattern.n(r, s) * b.d, rhs)
    for r in range(pattern.k):
        inner = _combine([(b.b, _row_sum_form(pattern, r))]
                         + [(pattern.n(r, s), neg_transfer(r, s))
                            for s in range(pattern.ell) if pattern.n(r, s)])
        _quad_times({lam(r): 1}, inner, -b.c, rhs)
    return lhs == rhs


@lru_cache(maxsize=None)
def cell_identity_holds(b: GluingMatrix) -> bool:
    """The one-cell case of :func:`quadratic_identity_holds`.

    Every term of the full identity is ``n_rs`` times the identity for cell
    (r, s) in the three variables ``lam_r, lamp_s, mu_rs``, so checking this
    single cell settles every pattern at once.
    """
    return quadratic_identity_holds(b, BlockPattern(Case.EDGE, [[1]]))


@dataclass(frozen=True)
class DiscriminantReport:
    value: int
    nonpositive: bool
    strictly_negative: bool

    def claim(self) -> str:
        sign = "< 0" if self.strictly_negative else ("<= 0" if self.nonpositive else "> 0")
        return f"(det B - 3bc)ad = {self.value} {sign}"


@lru_cache(maxsize=1024)
def discriminant_audit(b: GluingMatrix) -> DiscriminantReport:
    """``(det B - 3bc) a d``, the discriminant factor of each quadratic summand."""
    bad = _edge_hypotheses(b)
    if bad is None and b.c < 1:
        bad = f"discriminant audit needs c >= 1 (got {b.c})"
    if bad:
        raise InputError(bad)
    value = (b.det - 3 * b.b * b.c) * b.a * b.d
    return DiscriminantReport(value, value <= 0, value < 0)


def check_forcing_edge(b: GluingMatrix, pattern: BlockPattern) -> ForcingVerdict:
    """Edge argument: peeling induction (c = 0) or the quadratic-form argument (c > 0)."""
    if b.case is not Case.EDGE or pattern.case is not Case.EDGE:
        raise InputError("check_forcing_edge needs an edge matrix and an edge pattern")
    trace = [f"B = {b}, N = {pattern}"]
    bad = _edge_hypotheses(b)
    if bad:
        trace.append(f"hypothesis violated: {bad}")
        return ForcingVerdict(Outcome.HYPOTHESIS_VIOLATED, (), tuple(trace), False)
    system = build_system(b, pattern)
    trace.append(f"system: {len(system.variables)} variables, {system.matrix.rows} rows")
    occ = pattern.occupied()
    if b.c == 0:
        if (b.a, b.d) != (1, 1):
            raise OracleDisagreement(f"c = 0 with |det B| = 1 should force a = d = 1, got {b}")
        forced_all = set(occ)
        for i, vec in enumerate(rational_kernel(system.matrix)):
            values = dict(zip(system.variables, vec))
            forced_all &= peel_induction(b, pattern, values, trace, f"kernel vector {i + 1}")
        if forced_all != set(occ):
            missing = sorted(set(occ) - forced_all)
            trace.append(f"induction left cells {missing} undecided")
            return ForcingVerdict(Outcome.NOT_FORCED, (), tuple(trace), False)
        trace.append("every occupied mu forced by peeling")
        return _confirm_vars(system, [mu(r, s) for r, s in occ], trace)

    if not cell_identity_holds(b):
        raise OracleDisagreement("quadratic-form identity failed")
    trace.append("quadratic identity: sum n_rs(bd mu^2 + ad lam mu + ac lam^2) "
                 "lies in the ideal of the system rows (checked cell by cell)")
    audit = discriminant_audit(b)
    trace.append("discriminant " + audit.claim())
    if not audit.nonpositive:
        raise OracleDisagreement(f"discriminant is positive for {b}")
    trace.append("each summand is >= 0 and the sum is 0, so every summand vanishes")
    targets = [lam(r) for r in range(pattern.k)]
    if b.d > 0:
        trace.append("d > 0: strict negativity gives lam_r = 0, then bd mu_rs^2 = 0")
        targets += [mu(r, s) for r, s in occ]
    else:
        trace.append("d = 0: ac lam_r^2 = 0 gives lam_r = 0")
    return _confirm_vars(system, targets, trace)


def check_forcing(b: GluingMatrix, pattern: BlockPattern) -> ForcingVerdict:
    if b.case is Case.LOOP:
        return check_forcing_loop(b, pattern)
    return check_forcing_edge(b, pattern)
