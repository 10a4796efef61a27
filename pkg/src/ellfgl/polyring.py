"""Sparse multivariate polynomials over Z or Q with weighted variables.

Monomials are packed into a single Python int: field 0 holds the weighted
degree, field 1 the total degree and field ``2 + i`` the exponent of the
i-th registry variable, each field ``BITS`` wide. Multiplying monomials is
then one integer addition, and weight/degree come for free.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ellfgl.errors import DomainError, ResourceGuardError, UsageError

__all__ = [
    "BITS",
    "PolyRing",
    "Polynomial",
    "VarRegistry",
    "in_ideal",
    "span_rank",
    "monomial_basis",
    "reduce_mod",
]

BITS = 16
_MASK = (1 << BITS) - 1
_MAX_EXP = 1 << (BITS - 1)

FORBIDDEN = frozenset({"A2", "B1"})


class VarRegistry:
    """Ordered, immutable list of ``(name, weight)`` pairs."""

    __slots__ = ("names", "weights", "_index", "_unit", "_guard", "_hash")

    def __init__(self, variables: Iterable[tuple[str, int]]):
        variables = tuple((str(n), int(w)) for n, w in variables)
        names = tuple(n for n, _ in variables)
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate variable names in {names}")
        bad = FORBIDDEN.intersection(names)
        if bad:
            raise UsageError(f"{sorted(bad)} never enter the Buchstaber form and cannot be registered")
        if any(w < 1 for _, w in variables):
            raise UsageError("variable weights must be >= 1")
        self.names = names
        self.weights = tuple(w for _, w in variables)
        self._index = {n: i for i, n in enumerate(names)}
        # unit monomial of each variable: exponent 1, total degree 1, weight w
        self._unit = tuple(
            (1 << (BITS * (2 + i))) | (1 << BITS) | w for i, w in enumerate(self.weights)
        )
        nf = 2 + len(names)
        self._guard = sum(1 << (BITS * k + BITS - 1) for k in range(nf))
        self._hash = hash(variables)

    @classmethod
    def of(cls, *specs: str) -> "VarRegistry":
        """Build from ``"name:weight"`` strings, e.g. ``VarRegistry.of("A1:1", "B2:2")``."""
        out = []
        for s in specs:
            n, w = s.split(":")
            out.append((n, int(w)))
        return cls(out)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return (
            isinstance(other, VarRegistry)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"VarRegistry({inner})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r}") from None

    def weight_of(self, name: str) -> int:
        return self.weights[self.index(name)]

    def pack(self, exps) -> int:
        if len(exps) != len(self.names):
            raise UsageError(f"exponent vector {exps!r} does not match {len(self.names)} variables")
        key = 0
        for e, u in zip(exps, self._unit):
            if e < 0 or e >= _MAX_EXP:
                raise UsageError(f"exponent {e} out of range")
            key += e * u
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        key >>= 2 * BITS
        out = []
        for _ in self.names:
            out.append(key & _MASK)
            key >>= BITS
        return tuple(out)

    def extend(self, variables: Iterable[tuple[str, int]]) -> "VarRegistry":
        new = [(n, w) for n, w in variables if n not in self._index]
        return VarRegistry(list(zip(self.names, self.weights)) + new)

    def to_json(self) -> list[dict]:
        return [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)]


def key_weight(key: int) -> int:
    return key & _MASK


def key_degree(key: int) -> int:
    return (key >> BITS) & _MASK


class PolyRing:
    """Polynomial ring ``domain[registry]``, optionally truncated in total degree.

    ``domain`` is ``"ZZ"`` or ``"QQ"``. With ``max_degree=d`` the ring is the
    quotient by all monomials of total degree > d (``d = 1`` gives the
    indecomposables quotient used for rho computations).
    """

    __slots__ = ("registry", "domain", "max_degree", "_hash")

    def __init__(self, registry: VarRegistry, domain: str = "ZZ", max_degree: int | None = None):
        if domain not in ("ZZ", "QQ"):
            raise UsageError(f"domain must be ZZ or QQ, got {domain!r}")
        self.registry = registry
        self.domain = domain
        self.max_degree = max_degree
        self._hash = hash((registry, domain, max_degree))

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.domain == other.domain
            and self.max_degree == other.max_degree
            and self.registry == other.registry
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        cap = "" if self.max_degree is None else f", max_degree={self.max_degree}"
        return f"PolyRing({self.domain}, {list(self.registry.names)}{cap})"

    @property
    def qq(self) -> "PolyRing":
        return PolyRing(self.registry, "QQ", self.max_degree)

    @property
    def zz(self) -> "PolyRing":
        return PolyRing(self.registry, "ZZ", self.max_degree)

    def with_registry(self, registry: VarRegistry) -> "PolyRing":
        return PolyRing(registry, self.domain, self.max_degree)

    def truncated(self, max_degree: int | None) -> "PolyRing":
        return PolyRing(self.registry, self.domain, max_degree)

    def coerce_scalar(self, c):
        if isinstance(c, bool):
            c = int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return c.numerator
            if self.domain == "ZZ":
                raise DomainError(f"{c} is not an integer; promote to QQ explicitly")
            return c
        raise DomainError(f"unsupported scalar {c!r}")

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def scalar(self, c) -> "Polynomial":
        c = self.coerce_scalar(c)
        return Polynomial(self, {0: c} if c else {})

    def gen(self, name: str) -> "Polynomial":
        i = self.registry.index(name)
        return Polynomial(self, {self.registry._unit[i]: 1})

    def gens(self) -> dict[str, "Polynomial"]:
        return {n: self.gen(n) for n in self.registry.names}

    def monomial(self, exps, coef=1) -> "Polynomial":
        coef = self.coerce_scalar(coef)
        key = self.registry.pack(exps)
        if self.max_degree is not None and key_degree(key) > self.max_degree:
            return self.zero()
        return Polynomial(self, {key: coef} if coef else {})

    def from_terms(self, terms: Iterable[tuple[tuple[int, ...], object]]) -> "Polynomial":
        out: dict[int, object] = {}
        for exps, c in terms:
            c = self.coerce_scalar(c)
            key = self.registry.pack(exps)
            if self.max_degree is not None and key_degree(key) > self.max_degree:
                continue
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        """Evaluate an arithmetic expression in the ring's variables.

        Accepts ``+ - * / **`` and ``^`` for powers. Meant for trusted
        literals (tests, fixtures).
        """
        namespace = dict(self.gens())
        namespace["Fraction"] = Fraction
        value = eval(text.replace("^", "**"), {"__builtins__": {}}, namespace)  # noqa: S307
        if isinstance(value, Polynomial):
            return value
        return self.scalar(value)

    def from_json(self, obj: Mapping) -> "Polynomial":
        reg = VarRegistry((v["name"], v["weight"]) for v in obj["vars"])
        if reg != self.registry:
            raise UsageError("JSON polynomial registry does not match ring")
        return self.from_terms((tuple(t["exp"]), _parse_coef(t["coef"])) for t in obj["terms"])


def _parse_coef(s: str):
    if "/" in s:
        return Fraction(s)
    return int(s)


def _fmt_coef(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps packed monomial -> coefficient."""

    __slots__ = ("ring", "terms", "_weight")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._weight = False  # unknown

    # -- inspection -------------------------------------------------------
    @property
    def registry(self) -> VarRegistry:
        return self.ring.registry

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    @property
    def weight(self) -> int | None:
        """Common weight of all terms, or None if not homogeneous (0 for zero)."""
        if self._weight is False:
            ws = {k & _MASK for k in self.terms}
            if not ws:
                self._weight = 0
            elif len(ws) == 1:
                self._weight = ws.pop()
            else:
                self._weight = None
        return self._weight

    def is_homogeneous(self) -> bool:
        return self.weight is not None

    @property
    def degree(self) -> int:
        return max((key_degree(k) for k in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.registry.index(name)
        shift = BITS * (2 + i)
        return max(((k >> shift) & _MASK for k in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get(0, 0)

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def variables(self) -> list[str]:
        used = 0
        for k in self.terms:
            used |= k
        return [n for i, n in enumerate(self.registry.names) if (used >> (BITS * (2 + i))) & _MASK]

    def coefficient(self, exps) -> object:
        return self.terms.get(self.registry.pack(exps), 0)

    def items(self):
        """``(exponent tuple, coefficient)`` pairs in canonical graded-lex order."""
        reg = self.registry
        pairs = [(reg.unpack(k), k, c) for k, c in self.terms.items()]
        pairs.sort(key=lambda t: (key_degree(t[1]), t[0]), reverse=True)
        return [(e, c) for e, _, c in pairs]

    def __iter__(self):
        return iter(self.items())

    # -- ring plumbing ----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ring is not self.ring and other.ring != self.ring:
            if other.registry != self.registry:
                raise UsageError(f"registry mismatch: {self.registry} vs {other.registry}")
            raise DomainError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.scalar(other)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.registry == other.registry and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                del out[k]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) - c
            if v:
                out[k] = _norm(v)
            else:
                del out[k]
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.ring.coerce_scalar(c)
        if not c:
            return self.ring.zero()
        if c == 1:
            return self
        return Polynomial(self.ring, {k: _norm(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        cap = self.ring.max_degree
        out: dict[int, object] = {}
        get = out.get
        if cap is None:
            for kb, cb in b.items():
                for ka, ca in a.items():
                    k = ka + kb
                    out[k] = get(k, 0) + ca * cb
        else:
            lim = cap
            for kb, cb in b.items():
                db = (kb >> BITS) & _MASK
                for ka, ca in a.items():
                    if ((ka >> BITS) & _MASK) + db > lim:
                        continue
                    k = ka + kb
                    out[k] = get(k, 0) + ca * cb
        guard = self.registry._guard
        res = {}
        acc = 0
        for k, v in out.items():
            if v:
                res[k] = _norm(v) if type(v) is Fraction else v
                acc |= k
        if acc & guard:
            raise ResourceGuardError("exponent overflow in polynomial product")
        p = Polynomial(self.ring, res)
        wa, wb = self._weight, other._weight
        if wa is not False and wb is not False and wa is not None and wb is not None:
            p._weight = (wa + wb) if res else 0
        return p

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            if not c.is_constant() or not c.terms:
                return NotImplemented
            c = c.terms[0]
        if self.ring.domain == "ZZ":
            raise DomainError("division in a ZZ ring; use exact_div or promote with to_qq()")
        return self.scale(Fraction(1) / Fraction(c))

    def exact_div(self, c: int) -> "Polynomial":
        """Divide every coefficient by ``c``; raises if any division is inexact over Z."""
        if self.ring.domain == "QQ":
            return self.scale(Fraction(1) / Fraction(c))
        out = {}
        for k, v in self.terms.items():
            q, r = divmod(v, c)
            if r:
                raise DomainError(f"{v} is not divisible by {c}")
            out[k] = q
        return Polynomial(self.ring, out)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("polynomial powers need a nonnegative int")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- conversions ------------------------------------------------------
    def to_qq(self) -> "Polynomial":
        if self.ring.domain == "QQ":
            return self
        return Polynomial(self.ring.qq, dict(self.terms))

    def to_zz(self) -> "Polynomial":
        if self.ring.domain == "ZZ":
            return self
        if not self.is_integral():
            raise DomainError("polynomial has non-integral coefficients")
        return Polynomial(self.ring.zz, dict(self.terms))

    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-embed into ``ring`` by variable name (every used variable must exist there)."""
        if ring == self.ring:
            return self
        if ring.domain == "ZZ" and self.ring.domain == "QQ" and not self.is_integral():
            raise DomainError("cannot move rational coefficients into a ZZ ring")
        if ring.domain == "QQ" and self.ring.domain == "ZZ":
            pass  # Z into Q: explicit because the caller names the target ring
        src, dst = self.registry, ring.registry
        if src == dst:
            return ring.from_terms((src.unpack(k), c) for k, c in self.terms.items())
        idx = []
        for i, n in enumerate(src.names):
            idx.append(dst._index.get(n))
        terms = []
        for k, c in self.terms.items():
            e = src.unpack(k)
            out = [0] * len(dst)
            for i, x in enumerate(e):
                if x:
                    j = idx[i]
                    if j is None:
                        raise UsageError(f"variable {src.names[i]} missing from target ring")
                    out[j] = x
            terms.append((tuple(out), c))
        return ring.from_terms(terms)

    def truncate_degree(self, max_degree: int) -> "Polynomial":
        ring = self.ring.truncated(max_degree)
        return Polynomial(ring, {k: c for k, c in self.terms.items() if key_degree(k) <= max_degree})

    def homogeneous_part(self, weight: int) -> "Polynomial":
        return Polynomial(self.ring, {k: c for k, c in self.terms.items() if k & _MASK == weight})

    def linear_part(self, generators: Iterable[str] | None = None) -> "Polynomial":
        """Terms of total degree exactly one in ``generators`` (default: all).

        Terms that also involve variables outside ``generators`` are kept only
        if their degree in the generators is one.
        """
        reg = self.registry
        if generators is None:
            return Polynomial(self.ring, {k: c for k, c in self.terms.items() if key_degree(k) == 1})
        idx = [reg.index(g) for g in generators]
        out = {}
        for k, c in self.terms.items():
            e = reg.unpack(k)
            if sum(e[i] for i in idx) == 1:
                out[k] = c
        return Polynomial(self.ring, out)

    def substitute(self, bindings: Mapping[str, object], ring: PolyRing | None = None, strict: bool = False) -> "Polynomial":
        """Replace variables by polynomials (or scalars) of ``ring``.

        Unbound variables are carried over by name unless ``strict``.
        """
        ring = ring or self.ring
        src = self.registry
        images = []
        for n in src.names:
            if n in bindings:
                v = bindings[n]
                images.append(v.to_ring(ring) if isinstance(v, Polynomial) else ring.scalar(v))
            elif strict:
                images.append(None)
            elif n in ring.registry:
                images.append(ring.gen(n))
            else:
                images.append(None)
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, e):
            p = powers.get((i, e))
            if p is None:
                p = images[i] if e == 1 else power(i, e - 1) * images[i]
                powers[(i, e)] = p
            return p

        acc: dict[int, object] = {}
        for k, c in self.terms.items():
            e = src.unpack(k)
            term = None
            for i, x in enumerate(e):
                if not x:
                    continue
                if images[i] is None:
                    raise UsageError(f"unbound variable {src.names[i]} in substitution")
                term = power(i, x) if term is None else term * power(i, x)
                if not term.terms:
                    break
            if term is None:
                v = acc.get(0, 0) + ring.coerce_scalar(c)
                acc[0] = v
                continue
            if not term.terms:
                continue
            c = ring.coerce_scalar(c)
            for tk, tc in term.terms.items():
                acc[tk] = acc.get(tk, 0) + c * tc
        return Polynomial(ring, {k: _norm(v) for k, v in acc.items() if v})

    # -- output -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": self.registry.to_json(),
            "terms": [{"exp": list(e), "coef": _fmt_coef(c)} for e, c in self.items()],
        }

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.registry.names
        parts = []
        for e, c in self.items():
            mono = "*".join(
                (n if x == 1 else f"{n}^{x}") for n, x in zip(names, e) if x
            )
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if not mono:
                body = _fmt_coef(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coef(a)}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self})"


def monomial_basis(registry: VarRegistry, weight: int, max_degree: int | None = None) -> list[tuple[int, ...]]:
    """All exponent vectors of the given weight, in descending graded-lex order."""
    if weight < 0:
        raise UsageError("weight must be >= 0")
    ws = registry.weights
    n = len(ws)
    out = []

    def rec(i, remaining, acc, deg):
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        w = ws[i]
        top = remaining // w
        for e in range(top + 1):
            if max_degree is not None and deg + e > max_degree:
                break
            acc.append(e)
            rec(i + 1, remaining - e * w, acc, deg + e)
            acc.pop()

    rec(0, weight, [], 0)
    out.sort(key=lambda e: (sum(e), e), reverse=True)
    return out


def reduce_mod(p: Polynomial, rules, max_steps: int = 100_000) -> Polynomial:
    """Rewrite ``p`` with rules ``(leading monomial, replacement)``.

    A leading monomial is a Polynomial with one term (its coefficient is
    ignored) or an exponent tuple; each occurrence of it as a factor of a
    term is replaced by ``replacement``. Terminates when no term is
    divisible by a leading monomial.
    """
    reg = p.registry
    parsed = []
    for lead, rep in rules:
        if isinstance(lead, Polynomial):
            if len(lead.terms) != 1:
                raise UsageError("rule leading term must be a monomial")
            exps = reg.unpack(next(iter(lead.terms)))
        else:
            exps = tuple(lead)
        parsed.append((exps, rep.to_ring(p.ring) if rep.ring != p.ring else rep))
    steps = 0
    cur = dict(p.terms)
    while True:
        hit = None
        for k in cur:
            e = reg.unpack(k)
            for lead, rep in parsed:
                if all(a >= b for a, b in zip(e, lead)):
                    hit = (k, e, lead, rep)
                    break
            if hit:
                break
        if hit is None:
            return Polynomial(p.ring, cur)
        steps += 1
        if steps > max_steps:
            raise ResourceGuardError(f"reduce_mod exceeded {max_steps} rewrite steps")
        k, e, lead, rep = hit
        c = cur.pop(k)
        rest = p.ring.monomial(tuple(a - b for a, b in zip(e, lead)), 1)
        add = (rest * rep).scale(c)
        for kk, vv in add.terms.items():
            v = cur.get(kk, 0) + vv
            if v:
                cur[kk] = _norm(v)
            else:
                cur.pop(kk, None)


def in_ideal(p: Polynomial, relations, max_basis: int = 5000) -> bool:
    """Whether ``p`` lies in the ideal over Q generated by homogeneous ``relations``.

    Decided weight by weight: the weight-w part of the ideal is spanned by
    ``m * r`` with ``m`` a monomial of weight ``w - weight(r)``.
    """
    reg = p.registry
    rels = [r.to_ring(p.ring) for r in relations]
    for r in rels:
        if not r.is_homogeneous():
            raise UsageError(f"relation {r} is not homogeneous")
    by_weight: dict[int, dict] = {}
    for k, c in p.terms.items():
        by_weight.setdefault(key_weight(k), {})[k] = c
    for w, part in by_weight.items():
        rows = []
        for r in rels:
            if not r.terms or r.weight > w:
                continue
            mons = monomial_basis(reg, w - r.weight)
            if len(mons) > max_basis:
                raise ResourceGuardError(f"ideal membership basis at weight {w} exceeds {max_basis}")
            for e in mons:
                rows.append((p.ring.monomial(e) * r).terms)
        echelon: dict[int, dict] = {}
        for row in rows:
            _echelon_insert(echelon, {k: Fraction(v) for k, v in row.items()})
        rem = {k: Fraction(v) for k, v in part.items()}
        while rem:
            k = max(rem)
            piv = echelon.get(k)
            if piv is None:
                return False
            f = rem[k]
            for kk, vv in piv.items():
                nv = rem.get(kk, 0) - f * vv
                if nv:
                    rem[kk] = nv
                else:
                    rem.pop(kk, None)
    return True


def _echelon_insert(echelon: dict, row: dict) -> None:
    while row:
        k = max(row)
        piv = echelon.get(k)
        if piv is None:
            lead = row[k]
            echelon[k] = {kk: vv / lead for kk, vv in row.items()}
            return
        f = row[k]
        for kk, vv in piv.items():
            nv = row.get(kk, 0) - f * vv
            if nv:
                row[kk] = nv
            else:
                row.pop(kk, None)


def span_rank(rows) -> int:
    """Rank over Q of sparse rows ``{key: coefficient}``."""
    echelon: dict[int, dict] = {}
    for row in rows:
        _echelon_insert(echelon, {k: Fraction(v) for k, v in row.items() if v})
    return len(echelon)
