"""Genus-level checks on exponentials: Krichever ODE, Hirzebruch equation, CP^n values."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ellfgl.errors import UsageError
from ellfgl.fgl import FormalGroupLaw, fgl_log
from ellfgl.polyring import Polynomial, PolyRing, VarRegistry
from ellfgl.series import Series

__all__ = [
    "HirzebruchDefect",
    "KricheverFit",
    "cpn_coefficients",
    "hirzebruch_defect",
    "krichever_fit",
    "krichever_lhs",
]

Q_WEIGHTS = {"q1": 1, "q2": 2, "q3": 3}


@dataclass
class KricheverFit:
    q1: Polynomial
    q2: Polynomial
    q3: Polynomial
    residuals: list[tuple[int, Polynomial]]
    checked_through: int

    @property
    def ok(self) -> bool:
        return not self.residuals

    def to_json(self) -> dict:
        return {
            "q1": str(self.q1),
            "q2": str(self.q2),
            "q3": str(self.q3),
            "checked_through": self.checked_through,
            "residuals": [{"degree": k, "coefficient": str(c)} for k, c in self.residuals],
        }


def _check_exponential_shape(f: Series):
    if f.nvars != 1:
        raise UsageError("expected a univariate series")
    if f.constant_term().terms or f.coefficient((1,)) != 1:
        raise UsageError("expected f(0) = 0 and f'(0) = 1")


def krichever_lhs(f: Series) -> Series:
    """``f f''' - 3 f' f''``, exact through ``z^(order-2)``."""
    d1 = f.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    return f.sharp_mul(d3) - d1.sharp_mul(d2).scale(3)


def krichever_fit(f: Series, order: int | None = None) -> KricheverFit:
    """Fit ``f f''' - 3 f' f'' = 6 q1 f'^2 + 12 q2 f f' + 12 q3 f^2``.

    The equations at ``z^0, z^1, z^2`` are triangular in ``(q1, q2, q3)``
    with units 6, 12, 12 on the diagonal; the rest are reported as residuals.
    ``order`` caps the series; residuals are exact through ``z^(order-2)``.
    """
    _check_exponential_shape(f)
    f = f.to_qq()
    if order is not None:
        f = f.truncate(order)
    if f.order < 6:
        raise UsageError("krichever_fit needs f through z^6")
    top = f.order - 2
    L = krichever_lhs(f)
    d1 = f.derivative()
    P1 = (d1 * d1).truncate(top).scale(6)
    P2 = (f * d1).truncate(top).scale(12)
    P3 = (f * f).truncate(top).scale(12)
    c = lambda s, k: s.coefficient((k,))  # noqa: E731
    q1 = c(L, 0).scale(Fraction(1, 6))
    q2 = (c(L, 1) - c(P1, 1) * q1).scale(Fraction(1, 12))
    q3 = (c(L, 2) - c(P1, 2) * q1 - c(P2, 2) * q2).scale(Fraction(1, 12))
    R = L - P1.scale(q1) - P2.scale(q2) - P3.scale(q3)
    residuals = [(e[0], v) for e, v in sorted(R.coeffs.items())]
    return KricheverFit(q1, q2, q3, residuals, top)


# ---------------------------------------------------------------------------
# Hirzebruch functional equation


@dataclass
class HirzebruchDefect:
    n: int
    order: int
    c: Polynomial
    defect: list
    symmetric: bool = True
    names: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.defect

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "order": self.order,
            "c": str(self.c),
            "symmetric": self.symmetric,
            "defect": [{"exp": list(e), "coefficient": str(v)} for e, v in self.defect],
        }


def hirzebruch_defect(f: Series, n: int, order: int = 6) -> HirzebruchDefect:
    """``sum_i prod_{j != i} 1/f(z_j - z_i) - c`` through total degree ``order``.

    Writing ``1/f(x) = h(x)/x`` with ``h = x/f(x)`` a unit, the sum becomes
    ``N(z) / Delta(z)`` for the Vandermonde ``Delta = prod_{j<k} (z_k - z_j)``
    and a power series ``N``; the quotient is taken by exact division.
    """
    _check_exponential_shape(f)
    if not 2 <= n <= 4:
        raise UsageError("n must be in 2..4")
    if order < 0:
        raise UsageError("order must be >= 0")
    f = f.to_qq()
    d = n * (n - 1) // 2
    need = order + n
    if f.order < need:
        raise UsageError(f"f is needed through z^{need} for total degree {order}")
    ring = f.ring
    names = tuple(f"z{i}" for i in range(1, n + 1))
    body = Series(ring, ("z",), need - 1, {(e[0] - 1,): c for e, c in f.coeffs.items() if 1 <= e[0] <= need})
    h = body.invert()
    top = order + d
    z = [Series.variable(ring, names, nm, top) for nm in names]
    delta = Series.one(ring, names, top)
    for j in range(n):
        for k in range(j + 1, n):
            delta = delta * (z[k] - z[j])
    num = Series.zero(ring, names, top)
    for i in range(n):
        P = Series.one(ring, names, top)
        H = Series.one(ring, names, top)
        for j in range(n):
            if j != i:
                diff = z[j] - z[i]
                P = P * diff
                H = H * h.compose(diff.truncate(order + n - 1))
        # the cofactor is a polynomial of degree d - n + 1, so its order is unbounded
        cofactor = delta.divide_exact(P).with_order(top)
        num = num + cofactor.sharp_mul(H).truncate(top)
    total = num.divide_exact(delta).truncate(order)
    c = total.constant_term()
    D = total - Series.constant(ring, names, order, c)
    defect = sorted(D.coeffs.items())
    symmetric = all(D.coefficient(tuple(e[p] for p in perm)) == v for e, v in defect for perm in _swaps(n))
    return HirzebruchDefect(n, order, c, defect, symmetric, names)


def _swaps(n: int):
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            p = list(range(n))
            p[a], p[b] = p[b], p[a]
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# CP^n values


def cpn_coefficients(F: FormalGroupLaw, order: int | None = None) -> list[tuple[int, Polynomial, bool]]:
    """``(n, (n+1) g_{n+1}, integral)`` for ``n = 0 .. order-1`` with ``g`` the logarithm."""
    g = fgl_log(F)
    order = g.order if order is None else order
    if order > g.order:
        raise UsageError(f"logarithm only known through u^{g.order}")
    out = []
    for n in range(order):
        v = g.coefficient((n + 1,)).scale(n + 1)
        out.append((n, v, v.is_integral()))
    return out


def q_ring(extra=()) -> PolyRing:
    """``Q[q1, q2, q3]`` with weights 1, 2, 3."""
    return PolyRing(VarRegistry([(k, w) for k, w in Q_WEIGHTS.items()] + list(extra)), "QQ")
