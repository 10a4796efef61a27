"""Formal group laws: Buchstaber and Tate forms, defects, logarithm/exponential.

Weights are positive: the coefficient ``a_{i,j}`` has weight ``i + j - 1``
(the topological grading is ``-2`` times this).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ellfgl.errors import UsageError, VerificationError
from ellfgl.polyring import Polynomial, PolyRing, VarRegistry
from ellfgl.series import LaurentSeries, Series

__all__ = [
    "FormalGroupLaw",
    "MU_NAMES",
    "ab_series",
    "assoc_defect",
    "buchstaber_fgl",
    "buchstaber_registry",
    "check_exponential",
    "fgl_exp",
    "fgl_log",
    "generic_buchstaber",
    "invariant_diff",
    "mu_registry",
    "tate_exp_via_wp",
    "tate_fgl",
    "tate_s",
    "weierstrass_from_mu",
    "wp_series",
]

UV = ("u", "v")
UVW = ("u", "v", "w")
MU_NAMES = ("mu1", "mu2", "mu3", "mu4", "mu6")
_MU_WEIGHTS = {"mu1": 1, "mu2": 2, "mu3": 3, "mu4": 4, "mu6": 6}


def buchstaber_registry(max_weight: int, a: bool = True, b: bool = True, extra=()) -> VarRegistry:
    """``A1, B2, A3, B3, ...`` through ``max_weight`` (A2 and B1 never occur)."""
    out = []
    for k in range(1, max_weight + 1):
        if a and k != 2:
            out.append((f"A{k}", k))
        if b and k != 1:
            out.append((f"B{k}", k))
    return VarRegistry(list(out) + list(extra))


def mu_registry(extra=()) -> VarRegistry:
    return VarRegistry([(n, _MU_WEIGHTS[n]) for n in MU_NAMES] + list(extra))


def ab_series(ring: PolyRing, order: int) -> tuple[Series, Series]:
    """``A(u) = 1 + sum A_k u^k`` and ``B(u) = 1 + sum B_k u^k`` from the ring's generators.

    Coefficients whose variable is not registered are zero.
    """
    reg = ring.registry
    A = {(0,): ring.one()}
    B = {(0,): ring.one()}
    for k in range(1, order + 1):
        if f"A{k}" in reg:
            A[(k,)] = ring.gen(f"A{k}")
        if f"B{k}" in reg:
            B[(k,)] = ring.gen(f"B{k}")
    return Series(ring, ("u",), order, A), Series(ring, ("u",), order, B)


@dataclass(frozen=True)
class FormalGroupLaw:
    """``F(u, v) = u + v + sum a_{i,j} u^i v^j`` through total degree ``order``."""

    order: int
    table: Mapping[tuple[int, int], Polynomial]
    ring: PolyRing
    provenance: str = "custom"

    @classmethod
    def from_series(cls, F: Series, provenance: str = "custom") -> "FormalGroupLaw":
        if F.nvars != 2:
            raise UsageError("a formal group law is a series in two variables")
        ring = F.ring
        if F.coefficient((1, 0)) != 1 or F.coefficient((0, 1)) != 1 or F.constant_term():
            raise VerificationError("F(u, v) must start with u + v")
        table = {}
        for (i, j), c in F.coeffs.items():
            if i == 0 or j == 0:
                if i + j != 1:
                    raise VerificationError(f"F(u, 0) != u: stray coefficient at {(i, j)}")
                continue
            table[(i, j)] = c
        return cls(F.order, table, ring, provenance)

    def coefficient(self, i: int, j: int) -> Polynomial:
        if i + j > self.order:
            raise UsageError(f"a_({i},{j}) is beyond order {self.order}")
        return self.table.get((i, j), self.ring.zero())

    def series(self, names=UV) -> Series:
        coeffs = dict(self.table)
        coeffs[(1, 0)] = self.ring.one()
        coeffs[(0, 1)] = self.ring.one()
        return Series(self.ring, names, self.order, coeffs)

    def is_symmetric(self) -> bool:
        return all(self.coefficient(j, i) == c for (i, j), c in self.table.items())

    def is_graded(self) -> bool:
        return all(c.weight == i + j - 1 for (i, j), c in self.table.items())

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.table.values())

    def substitute(self, bindings, ring: PolyRing | None = None, provenance: str | None = None) -> "FormalGroupLaw":
        ring = ring or self.ring
        table = {}
        for k, c in self.table.items():
            v = c.substitute(bindings, ring)
            if v.terms:
                table[k] = v
        return FormalGroupLaw(self.order, table, ring, provenance or self.provenance)

    def to_ring(self, ring: PolyRing) -> "FormalGroupLaw":
        return FormalGroupLaw(self.order, {k: c.to_ring(ring) for k, c in self.table.items()}, ring, self.provenance)

    def truncate(self, order: int) -> "FormalGroupLaw":
        return FormalGroupLaw(
            min(order, self.order),
            {k: c for k, c in self.table.items() if sum(k) <= order},
            self.ring,
            self.provenance,
        )

    def differences(self, other: "FormalGroupLaw", order: int | None = None) -> list[tuple[tuple[int, int], Polynomial]]:
        """Nonzero ``a_{i,j} - b_{i,j}`` through ``order``, sorted."""
        if order is None:
            order = min(self.order, other.order)
        out = []
        keys = {k for k in self.table.keys() | other.table.keys() if sum(k) <= order}
        for k in sorted(keys, key=lambda k: (sum(k), k)):
            d = self.coefficient(*k) - other.coefficient(*k).to_ring(self.ring)
            if d.terms:
                out.append((k, d))
        return out

    def to_json(self) -> dict:
        rows = []
        for n in range(2, self.order + 1):
            for i in range(1, n):
                j = n - i
                if i > j:
                    break
                rows.append({"i": i, "j": j, "polynomial": self.coefficient(i, j).to_json()})
        return {"order": self.order, "provenance": self.provenance, "table": rows}


# ---------------------------------------------------------------------------
# Buchstaber form


def _two_var(s: Series, slot: int, order: int) -> Series:
    """The univariate series ``s`` placed in variable ``UV[slot]``."""
    return s.embed(UV, [slot]).truncate(order)


def buchstaber_fgl(A: Series, B: Series, order: int, provenance: str = "buchstaber") -> FormalGroupLaw:
    """``(u^2 A(v) - v^2 A(u)) / (u B(v) - v B(u))`` expanded through ``order``.

    Both numerator and denominator are divided exactly by ``u - v`` first,
    then the numerator quotient is multiplied by the inverse of the
    denominator quotient. Both ``A`` and ``B`` are needed through
    ``u^(order-1)``: ``B_order`` only reaches the denominator quotient in
    degree ``order``, hence ``F`` in degree ``order + 1``.
    """
    if A.constant_term() != 1 or B.constant_term() != 1:
        raise UsageError("buchstaber_fgl needs A(0) = B(0) = 1")
    if A.order < order - 1 or B.order < order - 1:
        raise UsageError("A or B is not known to the requested order")
    if B.order < order:
        B = B.with_order(order)
    ring = A.ring
    top = order + 1
    u = Series.variable(ring, UV, "u", top)
    v = Series.variable(ring, UV, "v", top)
    Au, Av = _two_var(A, 0, top - 2), _two_var(A, 1, top - 2)
    Bu, Bv = _two_var(B, 0, top - 1), _two_var(B, 1, top - 1)
    num = Av.shift((2, 0)) - Au.shift((0, 2))
    den = Bv.shift((1, 0)) - Bu.shift((0, 1))
    diff = u - v
    try:
        nq = num.with_order(top).divide_exact(diff)
        dq = den.with_order(top).divide_exact(diff)
    except VerificationError as exc:  # cannot happen for series in this shape
        raise VerificationError(f"Buchstaber numerator/denominator not divisible by u - v: {exc}") from exc
    F = (nq * dq.invert()).truncate(order)
    return FormalGroupLaw.from_series(F, provenance)


def generic_buchstaber(order: int, domain: str = "ZZ", max_degree: int | None = None) -> FormalGroupLaw:
    """The Buchstaber law with independent ``A_k, B_k`` through weight ``order - 1``."""
    ring = PolyRing(buchstaber_registry(max(order - 1, 1)), domain, max_degree)
    A, B = ab_series(ring, order)
    return buchstaber_fgl(A, B, order)


# ---------------------------------------------------------------------------
# Tate form


def _mu(ring: PolyRing, mu: Mapping | None):
    """Resolve curve parameters: generic registry variables unless overridden."""
    out = {}
    for n in MU_NAMES:
        if mu is not None and n in mu:
            val = mu[n]
            out[n] = val if isinstance(val, Polynomial) else ring.scalar(val)
        elif n in ring.registry:
            out[n] = ring.gen(n)
        else:
            out[n] = ring.zero()
    return out


def tate_s(mu: Mapping | None = None, order: int = 10, ring: PolyRing | None = None, name: str = "u") -> Series:
    """The series ``s(u)`` solving ``s = u^3 + mu1 u s + mu2 u^2 s + mu3 s^2 + mu4 u s^2 + mu6 s^3``."""
    if order < 3:
        raise UsageError("tate_s needs order >= 3")
    ring = ring or PolyRing(mu_registry())
    m = _mu(ring, mu)
    u = Series.variable(ring, (name,), name, order)
    u2 = u * u
    u3 = u2 * u
    s = u3
    for _ in range(order - 2):
        s2 = s * s
        nxt = (
            u3
            + (u * s).scale(m["mu1"])
            + (u2 * s).scale(m["mu2"])
            + s2.scale(m["mu3"])
            + (u * s2).scale(m["mu4"])
            + (s2 * s).scale(m["mu6"])
        )
        if nxt == s:
            break
        s = nxt
    return s


def tate_fgl(mu: Mapping | None = None, order: int = 7, ring: PolyRing | None = None) -> FormalGroupLaw:
    """Expand the closed-form Tate addition law with auxiliaries m, k, n.

    Raises VerificationError if a coefficient leaves ``Z[mu]`` although
    every curve parameter is integral.
    """
    if order < 2:
        raise UsageError("tate_fgl needs order >= 2")
    ring = ring or PolyRing(mu_registry())
    m_ = _mu(ring, mu)
    mu1, mu2, mu3, mu4, mu6 = (m_[n] for n in MU_NAMES)
    top = order + 1
    su = tate_s(mu, top, ring).embed(UV, [0])
    sv = tate_s(mu, top, ring).embed(UV, [1])
    u = Series.variable(ring, UV, "u", top)
    v = Series.variable(ring, UV, "v", top)
    diff = u - v
    m = (su - sv).divide_exact(diff).truncate(order)
    k = (u * sv - v * su).divide_exact(diff).truncate(order)
    u = u.truncate(order)
    v = v.truncate(order)
    uv = u * v
    W = 1 - k.scale(mu3) - (k * k).scale(mu6)
    W_inv = W.invert()

    def P(x):
        x2 = x * x
        return 1 + x.scale(mu2) + x2.scale(mu4) + (x2 * x).scale(mu6)

    Pm = P(m)
    n = m + uv * Pm * W_inv
    inner = (mu1 + m.scale(mu3) + k * (m.scale(mu6).scale(2) + mu4)) * W_inv
    F = (u + v - uv * inner) * Pm * P(n).invert() * W_inv
    fgl = FormalGroupLaw.from_series(F.truncate(order), "tate")
    if all(v.is_integral() for v in m_.values()) and not fgl.is_integral():
        raise VerificationError("Tate coefficients left Z[mu]")
    return fgl


# ---------------------------------------------------------------------------
# defects, differentials, logarithms


def assoc_defect(F: FormalGroupLaw, order: int | None = None) -> list[tuple[tuple[int, int, int], Polynomial]]:
    """Nonzero coefficients of ``F(u, F(v, w)) - F(F(u, v), w)`` through ``order``.

    The right-hand composite is evaluated as ``F(w, F(u, v))``, which is
    the same series because the table is symmetric.
    """
    if order is None:
        order = F.order
    if order > F.order:
        raise UsageError("assoc_defect order exceeds the law's order")
    Ft = F.truncate(order)
    outer = Ft.series()
    ring = F.ring
    u = Series.variable(ring, UVW, "u", order)
    w = Series.variable(ring, UVW, "w", order)
    F_vw = outer.embed(UVW, [1, 2])
    F_uv = outer.embed(UVW, [0, 1])
    lhs = outer.compose_multi([u, F_vw])
    rhs = outer.compose_multi([w, F_uv])
    D = lhs - rhs
    return [(e, c) for e, c in sorted(D.coeffs.items(), key=lambda t: (sum(t[0]), t[0]))]


def invariant_diff(F: FormalGroupLaw) -> Series:
    """``dF/dv`` at ``v = 0``: ``1 + sum a_{n,1} u^n`` through ``u^(order-1)``."""
    coeffs = {(0,): F.ring.one()}
    for n in range(1, F.order):
        c = F.coefficient(n, 1)
        if c.terms:
            coeffs[(n,)] = c
    return Series(F.ring, ("u",), F.order - 1, coeffs)


def fgl_log(F: FormalGroupLaw, order: int | None = None) -> Series:
    """Logarithm ``g(u) = integral of du / omega(u)`` over QQ."""
    omega = invariant_diff(F).to_qq()
    g = omega.invert().integrate()
    if order is not None:
        if order > g.order:
            raise UsageError(f"logarithm only known through u^{g.order}")
        g = g.truncate(order)
    return g


def fgl_exp(F: FormalGroupLaw, order: int | None = None) -> Series:
    """Exponential: the functional inverse of the logarithm, in variable z."""
    return fgl_log(F, order).rename(("z",)).reverse()


def check_exponential(F: FormalGroupLaw, f: Series, order: int | None = None) -> list:
    """Nonzero coefficients of ``f(x + y) - F(f(x), f(y))`` through ``order``."""
    if order is None:
        order = min(F.order, f.order)
    ring = f.ring
    xy = ("x", "y")
    x = Series.variable(ring, xy, "x", order)
    y = Series.variable(ring, xy, "y", order)
    fo = f.truncate(order)
    lhs = fo.compose(x + y)
    Fq = F.to_ring(ring).truncate(order).series(xy)
    rhs = Fq.compose_multi([fo.embed(xy, [0]), fo.embed(xy, [1])])
    D = lhs - rhs
    return sorted(D.coeffs.items())


# ---------------------------------------------------------------------------
# Weierstrass side


def weierstrass_from_mu(mu: Mapping | None = None, ring: PolyRing | None = None) -> tuple[Polynomial, Polynomial]:
    """``(g2, g3)`` of the standard model for the general Weierstrass cubic."""
    ring = (ring or PolyRing(mu_registry())).qq
    m = {k: v.to_ring(ring) for k, v in _mu(ring, mu).items()}
    mu1, mu2, mu3, mu4, mu6 = (m[n] for n in MU_NAMES)
    nu2 = (mu1 * mu1 + mu2.scale(4)) / 6
    g2 = (nu2 * nu2).scale(3) - (mu1 * mu3).scale(2) - mu4.scale(4)
    g3 = -(nu2 ** 3) + nu2 * mu1 * mu3 - mu3 * mu3 + (nu2 * mu4).scale(2) - mu6.scale(4)
    return g2, g3


def wp_series(g2: Polynomial, g3: Polynomial, order: int) -> LaurentSeries:
    """Laurent expansion of wp through ``z^order``.

    Works on ``P(z) = z^2 wp(z) = 1 + sum c_k z^(2k)``: multiplying
    ``wp'^2 = 4 wp^3 - g2 wp - g3`` by ``z^6`` gives
    ``Q^2 = 4 P^3 - g2 z^4 P - g3 z^6`` with ``Q = z P' - 2 P``. The
    coefficient ``c_k`` enters the ``z^(2k)`` equation linearly with
    factor ``-(8k + 4)``, which fixes it from the lower ones.
    """
    ring = g2.ring.qq
    g2, g3 = g2.to_ring(ring), g3.to_ring(ring)
    N = order + 2  # P is needed through z^N
    c = {0: ring.one()}

    def body(cs, n):
        return Series(ring, ("z",), n, {(2 * k,): v for k, v in cs.items()})

    for k in range(1, N // 2 + 1):
        n = 2 * k
        P = body(c, n)
        Q = P.derivative().with_order(n - 1).shift(1) - P.scale(2)
        z4P = P.shift(4).truncate(n)
        R = Q * Q - (P * P * P).scale(4) + z4P.scale(g2)
        if n >= 6:
            R = R + Series(ring, ("z",), n, {(6,): g3})
        res = R.coefficient((n,))
        ck = res / (8 * k + 4)
        if ck.terms:
            c[k] = ck
    return LaurentSeries(-2, body(c, N))


def tate_exp_via_wp(mu: Mapping | None = None, order: int = 10, ring: PolyRing | None = None) -> Series:
    """Expansion of ``-2 (wp - e) / (wp' - mu1 wp + mu1 e - mu3)``, ``e = (4 mu2 + mu1^2)/12``.

    Numerator and denominator are multiplied by ``z^3`` so only power
    series occur; the denominator then starts with ``-2``.
    """
    ring = (ring or PolyRing(mu_registry())).qq
    m = {k: v.to_ring(ring) for k, v in _mu(ring, mu).items()}
    mu1, mu2, mu3 = m["mu1"], m["mu2"], m["mu3"]
    g2, g3 = weierstrass_from_mu(m, ring)
    wp = wp_series(g2, g3, order + 2)
    P = wp.body.truncate(order + 2)  # z^2 wp
    Q = P.derivative().with_order(order + 1).shift(1) - P.scale(2)  # z^3 wp'
    Q = Q.truncate(order + 2)
    e = (mu2.scale(4) + mu1 * mu1) / 12
    z3 = Series(ring, ("z",), order + 2, {(3,): ring.one()})
    num = (P.shift(1).truncate(order + 2) - z3.scale(e)).scale(-2)
    den = Q - P.shift(1).truncate(order + 2).scale(mu1) + z3.scale(mu1 * e - mu3)
    if den.constant_term() != -2:
        raise VerificationError("pole cancellation failed in the wp quotient")
    f = (num * den.invert()).truncate(order)
    if f.constant_term().terms or f.coefficient((1,)) != 1:
        raise VerificationError("wp quotient does not start with z")
    return f

