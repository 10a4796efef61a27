"""Exact integer machinery: gcd chains, binomial gcds, Smith normal form.

Integers are Python ints and rationals are :class:`fractions.Fraction`;
nothing in the package rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from ellfgl.errors import UsageError

__all__ = [
    "AbelianGroup",
    "Lattice",
    "SNFResult",
    "abelian_group",
    "binomial_gcd",
    "extended_gcd",
    "extended_gcd_list",
    "is_prime",
    "prime_power_base",
    "smith_normal_form",
]


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def extended_gcd_list(m: list[int]) -> tuple[int, list[int]]:
    """Bezout coefficients for a list of positive integers.

    Runs extended Euclid left to right, then shifts every ``lambda_i``
    (i >= 2) by a multiple of ``m_1 / g`` into ``[-h, q - h)`` with
    ``q = m_1 / g`` and ``h = q // 2``, compensating in ``lambda_1``.
    The result is deterministic and ``sum(l * x for l, x in zip(lam, m)) == g``.
    """
    if not m:
        raise UsageError("extended_gcd_list needs a nonempty list")
    if any((not isinstance(x, int)) or x < 1 for x in m):
        raise UsageError(f"extended_gcd_list needs positive integers, got {m!r}")
    g = m[0]
    lam = [1]
    for x in m[1:]:
        g_new, a, b = extended_gcd(g, x)
        lam = [a * l for l in lam] + [b]
        g = g_new
    q = m[0] // g
    h = q // 2
    for i in range(1, len(m)):
        t = (lam[i] + h) // q
        if t:
            lam[i] -= t * q
            lam[0] += t * (m[i] // g)
    return g, lam


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return False
        p += 2
    return True


def prime_power_base(n: int) -> int:
    """Return p if ``n == p**k`` for a prime p and k >= 1, else 1."""
    if n < 2:
        return 1
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        return n  # n itself is prime
    while n % p == 0:
        n //= p
    return p if n == 1 else 1


def binomial_gcd(n_plus_1: int) -> tuple[int, int]:
    """gcd of C(n+1, 1), ..., C(n+1, n) and its prime-power classification.

    Returns ``(d, kummer_class)``; raises AssertionError if they disagree.
    """
    if not isinstance(n_plus_1, int) or n_plus_1 < 2:
        raise UsageError(f"binomial_gcd needs n+1 >= 2, got {n_plus_1!r}")
    d = 0
    c = 1
    for i in range(1, n_plus_1 // 2 + 1):  # C(m, i) = C(m, m - i)
        c = c * (n_plus_1 - i + 1) // i
        d = gcd(d, c)
        if d == 1:
            break
    kummer = prime_power_base(n_plus_1)
    assert d == kummer, f"d({n_plus_1}) = {d} but the prime-power class is {kummer}"
    return d, kummer


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == D`` with ``D`` diagonal; ``diagonal`` has min(m, n) entries."""

    diagonal: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    V_inv: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    @property
    def D(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]


def smith_normal_form(M: list[list[int]], ncols: int | None = None) -> SNFResult:
    """Smith normal form of an integer matrix with unimodular transforms.

    Pivots on the entry of least nonzero absolute value. ``ncols`` is only
    needed when ``M`` has no rows.
    """
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    A = [list(map(int, row)) for row in M]
    if any(len(row) != n for row in A):
        raise UsageError("smith_normal_form needs a rectangular matrix")
    U = _identity(m)
    V = _identity(n)
    Vi = _identity(n)  # tracks V^{-1}: column op on V is the inverse row op on Vi

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        if q:
            rd, rs = A[dst], A[src]
            for k in range(n):
                if rs[k]:
                    rd[k] -= q * rs[k]
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col dst -= q * col src
        if q:
            for row in A:
                if row[src]:
                    row[dst] -= q * row[src]
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]
            vs, vd = Vi[src], Vi[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] += q * vd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    dirty = dirty or bool(A[i][t])
            if dirty:
                k = min((i for i in range(t + 1, m) if A[i][t]), key=lambda i: abs(A[i][t]))
                swap_rows(t, k)
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    dirty = dirty or bool(A[t][j])
            if dirty:
                k = min((j for j in range(t + 1, n) if A[t][j]), key=lambda j: abs(A[t][j]))
                swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    diag = tuple(A[i][i] for i in range(min(m, n)))
    return SNFResult(
        diagonal=diag,
        U=tuple(map(tuple, U)),
        V=tuple(map(tuple, V)),
        V_inv=tuple(map(tuple, Vi)),
        shape=(m, n),
    )


# ---------------------------------------------------------------------------
# Finitely generated abelian groups given by sparse relations


@dataclass(frozen=True)
class AbelianGroup:
    """Z^ncols modulo the row span of a relation list.

    ``torsion`` lists the invariant factors > 1. ``torsion_reps`` and
    ``free_reps`` give, for each cyclic summand, a representative vector as
    a sparse ``{column: coefficient}`` dict.
    """

    ncols: int
    free_rank: int
    torsion: tuple[int, ...]
    torsion_reps: tuple[dict, ...]
    free_reps: tuple[dict, ...]


def abelian_group(rows, ncols: int) -> AbelianGroup:
    """Structure of ``Z^ncols / span(rows)``; rows are sparse ``{col: int}`` dicts.

    Unit pivots are removed first by sparse row elimination (each one just
    expresses its column through the rest); the remaining core goes through
    dense :func:`smith_normal_form`.
    """
    work: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for rid, row in enumerate(rows):
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        work[rid] = row
        for c in row:
            cols.setdefault(c, set()).add(rid)

    alive = set(range(ncols))
    while True:
        best = None
        for rid, row in work.items():
            for c, v in row.items():
                if v == 1 or v == -1:
                    cost = (len(row) - 1) * (len(cols[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, rid, c)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, prid, c = best
        prow = work.pop(prid)
        for cc in prow:
            cols[cc].discard(prid)
        pv = prow[c]
        for rid in list(cols[c]):
            row = work[rid]
            q = row[c] * pv  # pv is +-1, so q = row[c] / pv
            for cc, v in prow.items():
                nv = row.get(cc, 0) - q * v
                if nv:
                    if cc not in row:
                        cols.setdefault(cc, set()).add(rid)
                    row[cc] = nv
                else:
                    if cc in row:
                        del row[cc]
                        cols[cc].discard(rid)
            if not row:
                del work[rid]
        del cols[c]
        alive.discard(c)

    core_cols = sorted(alive)
    index = {c: k for k, c in enumerate(core_cols)}
    core = [[0] * len(core_cols) for _ in work]
    for r, row in zip(core, work.values()):
        for c, v in row.items():
            r[index[c]] = v
    snf = smith_normal_form(core, ncols=len(core_cols))
    k = len(core_cols)
    diag = list(snf.diagonal) + [0] * (k - len(snf.diagonal))
    torsion, treps, freps = [], [], []
    for i, d in enumerate(diag):
        rep = {core_cols[j]: v for j, v in enumerate(snf.V_inv[i]) if v}
        if d == 0:
            freps.append(rep)
        elif d > 1:
            torsion.append(d)
            treps.append(rep)
    return AbelianGroup(
        ncols=ncols,
        free_rank=len(freps),
        torsion=tuple(torsion),
        torsion_reps=tuple(treps),
        free_reps=tuple(freps),
    )


class Lattice:
    """Integer row lattice kept as an echelon basis ``{leading column: row}``.

    Supports membership tests and the order of a class in ``Z^n / lattice``.
    """

    def __init__(self, rows=()):
        self.pivots: dict[int, dict[int, int]] = {}
        for row in rows:
            self.add(row)

    def __len__(self):
        return len(self.pivots)

    def add(self, row: dict[int, int]) -> None:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            p = self.pivots.get(c)
            if p is None:
                if r[c] < 0:
                    r = {k: -v for k, v in r.items()}
                self.pivots[c] = r
                return
            a, b = p[c], r[c]
            if b % a == 0:
                r = _axpy(r, p, -(b // a))
                continue
            g, x, y = extended_gcd(a, b)
            new = _lincomb(p, x, r, y)
            r = _lincomb(r, a // g, p, -(b // g))
            self.pivots[c] = new

    def contains(self, vec: dict[int, int]) -> bool:
        r = {c: v for c, v in vec.items() if v}
        while r:
            c = min(r)
            p = self.pivots.get(c)
            if p is None or r[c] % p[c]:
                return False
            r = _axpy(r, p, -(r[c] // p[c]))
        return True

    def order(self, vec: dict[int, int]) -> int | None:
        """Order of the class of ``vec``; ``None`` means infinite order."""
        r = {c: Fraction(v) for c, v in vec.items() if v}
        den = 1
        while r:
            c = min(r)
            p = self.pivots.get(c)
            if p is None:
                return None
            coef = r[c] / p[c]
            den = lcm(den, coef.denominator)
            r = _axpy(r, p, -coef)
        return den


def _axpy(r, p, q):
    out = dict(r)
    for c, v in p.items():
        nv = out.get(c, 0) + q * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def _lincomb(p, a, r, b):
    out = {}
    for c in p.keys() | r.keys():
        v = a * p.get(c, 0) + b * r.get(c, 0)
        if v:
            out[c] = v
    return out
