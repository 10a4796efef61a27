"""Truncated power series in a few formal variables with Polynomial coefficients.

A :class:`Series` is exact for every monomial of total degree <= ``order``
and knows nothing beyond it. Binary operations keep the smaller order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ellfgl.errors import DomainError, UsageError, VerificationError
from ellfgl.polyring import Polynomial, PolyRing

__all__ = ["LaurentSeries", "Series"]


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Series:
    __slots__ = ("ring", "names", "order", "coeffs")

    def __init__(self, ring: PolyRing, names: Sequence[str], order: int, coeffs: Mapping[tuple, Polynomial]):
        self.ring = ring
        self.names = tuple(names)
        self.order = order
        n = len(self.names)
        clean = {}
        for e, c in coeffs.items():
            if len(e) != n:
                raise UsageError(f"exponent {e} does not match formal variables {self.names}")
            if sum(e) > order:
                continue
            if not isinstance(c, Polynomial):
                c = ring.scalar(c)
            if c.terms:
                clean[tuple(e)] = c
        self.coeffs = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring, names, order):
        return cls(ring, names, order, {})

    @classmethod
    def one(cls, ring, names, order):
        return cls.constant(ring, names, order, ring.one())

    @classmethod
    def constant(cls, ring, names, order, value):
        n = len(names)
        return cls(ring, names, order, {(0,) * n: value})

    @classmethod
    def variable(cls, ring, names, name, order):
        names = tuple(names)
        e = tuple(int(n == name) for n in names)
        if sum(e) != 1:
            raise UsageError(f"{name!r} is not one of {names}")
        return cls(ring, names, order, {e: ring.one()})

    @classmethod
    def univariate(cls, ring, coeffs: Sequence, order: int | None = None, name: str = "z"):
        """Series ``sum(coeffs[k] * name**k)``; ``order`` defaults to ``len(coeffs) - 1``."""
        if order is None:
            order = len(coeffs) - 1
        return cls(ring, (name,), order, {(k,): c for k, c in enumerate(coeffs) if k <= order})

    # -- inspection -------------------------------------------------------
    @property
    def nvars(self):
        return len(self.names)

    def coefficient(self, exps) -> Polynomial:
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(exps)
        if sum(exps) > self.order:
            raise UsageError(f"coefficient {exps} is beyond the truncation order {self.order}")
        return self.coeffs.get(exps, self.ring.zero())

    __getitem__ = coefficient

    def items(self):
        """Nonzero coefficients ordered by total degree, then exponents descending."""
        return sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def valuation(self) -> int | None:
        """Lowest total degree present, None for the zero series."""
        return min((sum(e) for e in self.coeffs), default=None)

    def homogeneous_part(self, degree: int) -> dict:
        return {e: c for e, c in self.coeffs.items() if sum(e) == degree}

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> Polynomial:
        return self.coeffs.get((0,) * self.nvars, self.ring.zero())

    def is_graded(self, shift: int) -> bool:
        """Every coefficient of ``x^e`` is homogeneous of weight ``|e| - shift``."""
        for e, c in self.coeffs.items():
            if c.weight != sum(e) - shift:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.names == other.names
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def agrees_with(self, other: "Series", order: int | None = None) -> bool:
        """Coefficientwise equality through ``order`` (default: both orders)."""
        if order is None:
            order = min(self.order, other.order)
        if order > min(self.order, other.order):
            raise UsageError("comparison order exceeds known precision")
        return not (self - other).truncate(order).coeffs

    # -- structural helpers ----------------------------------------------
    def _like(self, coeffs, order=None):
        return Series(self.ring, self.names, self.order if order is None else order, coeffs)

    def _check(self, other: "Series"):
        if self.names != other.names:
            raise UsageError(f"formal variable mismatch: {self.names} vs {other.names}")

    def truncate(self, order: int) -> "Series":
        return self._like({e: c for e, c in self.coeffs.items() if sum(e) <= order}, min(order, self.order))

    def with_order(self, order: int) -> "Series":
        """Drop terms above ``order`` and declare that order (caller vouches for it)."""
        return Series(self.ring, self.names, order, self.coeffs)

    def map_coefficients(self, func, ring: PolyRing | None = None) -> "Series":
        ring = ring or self.ring
        return Series(ring, self.names, self.order, {e: func(c) for e, c in self.coeffs.items()})

    def to_ring(self, ring: PolyRing) -> "Series":
        return self.map_coefficients(lambda c: c.to_ring(ring), ring)

    def to_qq(self) -> "Series":
        return self.to_ring(self.ring.qq)

    def substitute(self, bindings, ring: PolyRing | None = None) -> "Series":
        """Substitute into every coefficient polynomial."""
        ring = ring or self.ring
        return self.map_coefficients(lambda c: c.substitute(bindings, ring), ring)

    def rename(self, names: Sequence[str]) -> "Series":
        if len(names) != self.nvars:
            raise UsageError("rename needs as many names as formal variables")
        return Series(self.ring, names, self.order, self.coeffs)

    def embed(self, names: Sequence[str], mapping: Sequence[int] | None = None) -> "Series":
        """View as a series in ``names``; variable i goes to position ``mapping[i]``."""
        names = tuple(names)
        if mapping is None:
            mapping = [names.index(n) for n in self.names]
        out = {}
        for e, c in self.coeffs.items():
            ne = [0] * len(names)
            for i, x in enumerate(e):
                ne[mapping[i]] += x
            out[tuple(ne)] = c
        return Series(self.ring, names, self.order, out)

    def set_zero(self, name: str) -> "Series":
        """Restrict to ``name = 0`` (keeps the variable list)."""
        i = self.names.index(name)
        return self._like({e: c for e, c in self.coeffs.items() if e[i] == 0})

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, Polynomial):
            return Series.constant(self.ring, self.names, self.order, other)
        return Series.constant(self.ring, self.names, self.order, self.ring.scalar(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return self._like(out, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            if e in out:
                out[e] = out[e] - c
            else:
                out[e] = -c
        return self._like(out, min(self.order, other.order))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Series":
        """Multiply every coefficient by a Polynomial or scalar."""
        if isinstance(c, Polynomial):
            return self._like({e: c * v for e, v in self.coeffs.items()})
        return self._like({e: v.scale(c) for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Series):
            self._check(other)
            return _mul(self, other, min(self.order, other.order))
        if isinstance(other, (Polynomial, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def sharp_mul(self, other: "Series") -> "Series":
        """Product kept through ``min(order_a + val_b, order_b + val_a)``.

        Sharper than ``*`` when an operand has positive valuation.
        """
        self._check(other)
        va, vb = self.valuation(), other.valuation()
        if va is None or vb is None:
            return Series.zero(self.ring, self.names, min(self.order, other.order))
        return _mul(self, other, min(self.order + vb, other.order + va))

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        result = Series.one(self.ring, self.names, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exps) -> "Series":
        """Multiply by the monomial ``x^exps``; the order grows by ``|exps|``."""
        if isinstance(exps, int):
            exps = (exps,)
        d = sum(exps)
        return self._like({_add_exps(e, exps): c for e, c in self.coeffs.items()}, self.order + d)

    def invert(self) -> "Series":
        """Multiplicative inverse; the constant term must be a unit scalar."""
        c0 = self.constant_term()
        if not c0.is_constant() or not c0.terms:
            raise UsageError("series_invert needs a constant term that is a unit scalar")
        c = c0.terms[0]
        if self.ring.domain == "ZZ" and c not in (1, -1):
            raise DomainError(f"constant term {c} is not a unit over Z")
        inv_c = c if c in (1, -1) else Fraction(1) / c
        y = self.scale(inv_c) - 1  # valuation >= 1
        r = Series.one(self.ring, self.names, self.order)
        for _ in range(self.order):
            r = 1 - _mul(y, r, self.order)
        return r.scale(inv_c)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.invert()
        if isinstance(other, (int, Fraction)):
            return self._like({e: c / other for e, c in self.coeffs.items()})
        return NotImplemented

    def divide_exact(self, den: "Series") -> "Series":
        """Quotient ``q`` with ``q * den == self``, allowing ``den`` to vanish at 0.

        The lowest form of ``den`` (degree d) must have a unit leading
        coefficient in lex order. The quotient is exact through
        ``min(self.order, den.order) - d``; any nonzero remainder raises
        VerificationError.
        """
        self._check(den)
        d = den.valuation()
        if d is None:
            raise UsageError("division by the zero series")
        L = den.homogeneous_part(d)
        lead = max(L)
        lc = L[lead]
        if not lc.is_constant():
            raise UsageError("leading coefficient of the divisor's lowest form must be a scalar")
        lcv = lc.terms[0]
        if self.ring.domain == "ZZ" and lcv not in (1, -1):
            raise DomainError("divisor's leading coefficient is not a unit over Z")
        top = min(self.order, den.order)
        R = {e: c for e, c in self.coeffs.items() if sum(e) <= top}
        Q = {}
        for m in range(0, top + 1):
            part = {e: c for e, c in R.items() if sum(e) == m}
            if not part:
                continue
            if m < d:
                raise VerificationError(f"inexact division: remainder in degree {m}")
            qm = _hom_divide(part, L, lead, lcv, self.ring)
            Q.update(qm)
            qser = Series(self.ring, self.names, top, qm)
            prod = _mul(qser, den, top)
            for e, c in prod.coeffs.items():
                v = R.get(e)
                v = -c if v is None else v - c
                if v.terms:
                    R[e] = v
                else:
                    R.pop(e, None)
            if any(sum(e) == m for e in R):
                raise VerificationError(f"inexact division in degree {m}")
        return Series(self.ring, self.names, top - d, Q)

    # -- univariate calculus ---------------------------------------------
    def _var(self, name):
        if name is None:
            if self.nvars != 1:
                raise UsageError("name the variable for a multivariate series")
            return 0
        return self.names.index(name)

    def derivative(self, name: str | None = None) -> "Series":
        i = self._var(name)
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c.scale(e[i])
        return self._like(out, self.order - 1)

    def integrate(self, name: str | None = None) -> "Series":
        """Antiderivative with zero constant; needs QQ unless divisions are exact."""
        i = self._var(name)
        out = {}
        for e, c in self.coeffs.items():
            ne = list(e)
            ne[i] += 1
            k = ne[i]
            if self.ring.domain == "ZZ":
                out[tuple(ne)] = c.exact_div(k)
            else:
                out[tuple(ne)] = c / k
        return self._like(out, self.order + 1)

    def compose(self, inner: "Series") -> "Series":
        """Substitute ``inner`` (zero constant term) into this univariate series."""
        if self.nvars != 1:
            raise UsageError("compose needs a univariate outer series; use compose_multi")
        return self.compose_multi([inner])

    def compose_multi(self, inners: Sequence["Series"]) -> "Series":
        """Substitute ``inners[i]`` for the i-th formal variable.

        All inners share formal variables and have zero constant term. The
        first variable is handled by Horner's rule, the others through power
        tables.
        """
        if len(inners) != self.nvars:
            raise UsageError("compose_multi needs one inner series per formal variable")
        base = inners[0]
        for s in inners:
            base._check(s)
            if s.constant_term().terms:
                raise UsageError("inner series must have zero constant term")
        order = min([self.order] + [s.order for s in inners])
        powers = [_power_table(s, self.order, order) for s in inners[1:]]
        by_first: dict[int, list] = {}
        for e, c in self.coeffs.items():
            by_first.setdefault(e[0], []).append((e[1:], c))
        zero = Series.zero(self.ring, base.names, order)
        if not by_first:
            return zero
        top = max(by_first)
        result = zero
        for i in range(top, -1, -1):
            chunk = {}
            for rest, c in by_first.get(i, ()):
                term = None
                for j, x in enumerate(rest):
                    if x:
                        p = powers[j][x]
                        term = p if term is None else _mul(term, p, order)
                if term is None:
                    e0 = (0,) * base.nvars
                    chunk[e0] = chunk[e0] + c if e0 in chunk else c
                    continue
                for e, v in term.coeffs.items():
                    pv = c * v
                    chunk[e] = chunk[e] + pv if e in chunk else pv
            step = Series(self.ring, base.names, order, chunk)
            if i == top:
                result = step
            else:
                result = _mul(result, inners[0], order) + step
        return result.with_order(order)

    def reverse(self) -> "Series":
        """Functional inverse g with ``self(g(z)) = z`` by Newton iteration."""
        if self.nvars != 1:
            raise UsageError("series_reverse is univariate")
        if self.constant_term().terms or self.coefficient((1,)) != 1:
            raise UsageError("series_reverse needs f(0) = 0 and f'(0) = 1")
        N = self.order
        z = Series.variable(self.ring, self.names, self.names[0], N)
        g = z.truncate(1)
        fp = self.derivative().with_order(N)
        p = 1
        while p < N:
            p = min(2 * p, N)
            gp = g.with_order(p)
            err = self.with_order(p).compose(gp) - z.truncate(p)
            den = fp.with_order(p).compose(gp)
            g = (gp - _mul(err, den.invert(), p)).with_order(p)
        return g.with_order(N)

    def sqrt(self) -> "Series":
        """Square root with constant term +1 (Newton, QQ coefficients)."""
        if self.constant_term() != 1:
            raise UsageError("series_sqrt needs constant term 1")
        if self.ring.domain != "QQ":
            raise DomainError("series_sqrt works over QQ; promote with to_qq()")
        N = self.order
        y = Series.one(self.ring, self.names, N)
        p = 0
        while p < N:
            p = min(2 * p + 1, N)
            yp = y.with_order(p)
            y = ((yp + _mul(self.with_order(p), yp.invert(), p)) / 2).with_order(p)
        return y.with_order(N)

    # -- output -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.names),
            "order": self.order,
            "terms": [{"exp": list(e), "polynomial": c.to_json()} for e, c in self.items()],
        }

    def __str__(self):
        parts = []
        for e, c in self.items():
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(self.names, e) if x)
            cs = str(c)
            if not mono:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.order + 1})"

    def __repr__(self):
        return f"Series({self})"


def _mul(a: Series, b: Series, order: int) -> Series:
    """Product truncated at ``order`` regardless of the operands' declared orders."""
    if not a.coeffs or not b.coeffs:
        return Series(a.ring, a.names, order, {})
    if len(a.coeffs) > len(b.coeffs):
        a, b = b, a
    bl = [(e, sum(e), c) for e, c in b.coeffs.items()]
    out: dict[tuple, Polynomial] = {}
    if a.nvars == 1:
        for (ea,), ca in a.coeffs.items():
            for (eb,), db, cb in bl:
                k = ea + eb
                if k > order:
                    continue
                p = ca * cb
                key = (k,)
                q = out.get(key)
                out[key] = p if q is None else q + p
    else:
        for ea, ca in a.coeffs.items():
            da = sum(ea)
            for eb, db, cb in bl:
                if da + db > order:
                    continue
                p = ca * cb
                key = _add_exps(ea, eb)
                q = out.get(key)
                out[key] = p if q is None else q + p
    return Series(a.ring, a.names, order, out)


def _power_table(s: Series, top: int, order: int) -> list[Series]:
    table = [Series.one(s.ring, s.names, order), s.with_order(order)]
    v = s.valuation() or 1
    for k in range(2, top + 1):
        if k * v > order:
            table.append(Series.zero(s.ring, s.names, order))
        else:
            table.append(_mul(table[-1], s, order))
    return table


def _hom_divide(part: dict, L: dict, lead: tuple, lcv, ring: PolyRing) -> dict:
    """Exact division of a homogeneous form by the homogeneous form ``L``."""
    R = dict(part)
    Q = {}
    while R:
        top = max(R)
        if any(x < y for x, y in zip(top, lead)):
            raise VerificationError(f"inexact division at monomial {top}")
        qe = tuple(x - y for x, y in zip(top, lead))
        c = R[top]
        qc = c.scale(lcv) if lcv in (1, -1) else c / lcv
        Q[qe] = Q[qe] + qc if qe in Q else qc
        for e, v in L.items():
            k = _add_exps(qe, e)
            nv = (R[k] - qc * v) if k in R else -(qc * v)
            if nv.terms:
                R[k] = nv
            else:
                R.pop(k, None)
    return Q


class LaurentSeries:
    """``z^shift * body`` for a univariate body; only used for the wp function."""

    __slots__ = ("shift", "body")

    def __init__(self, shift: int, body: Series):
        if body.nvars != 1:
            raise UsageError("Laurent support is univariate only")
        self.shift = shift
        self.body = body

    @property
    def order(self):
        return self.body.order + self.shift

    def coefficient(self, k: int) -> Polynomial:
        if k - self.shift < 0:
            return self.body.ring.zero()
        return self.body.coefficient((k - self.shift,))

    def items(self) -> Iterable[tuple[int, Polynomial]]:
        return [(e[0] + self.shift, c) for e, c in self.body.items()]

    def __str__(self):
        return " + ".join(f"({c})*z^{k}" for k, c in self.items()) + f" + O(z^{self.order + 1})"
