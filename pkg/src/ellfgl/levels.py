"""Level-N relations and the weight-by-weight solver over Q.

Three kinds of constraints on the Buchstaber series A(u), B(u):

* form relations (one identity of series, with extra parameters for N = 5, 6),
* specialization relations (finitely many polynomials in A_k, B_k),
* the general family relation with parameters a_i, b_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ellfgl.errors import UsageError, VerificationError
from ellfgl.fgl import (
    FormalGroupLaw,
    ab_series,
    assoc_defect,
    buchstaber_fgl,
    buchstaber_registry,
    tate_fgl,
    tate_s,
)
from ellfgl.polyring import Polynomial, PolyRing, VarRegistry, in_ideal, monomial_basis, reduce_mod, span_rank
from ellfgl.series import Series

__all__ = [
    "FormCertificate",
    "LevelSpec",
    "SolvedSpecialization",
    "PARAMETER_WEIGHTS",
    "form_certificate",
    "level_relation",
    "level_ring",
    "residual_rules",
    "solve_universal",
    "solved_defect",
    "specialization_relations",
    "TATE_VARIANTS",
    "TateSpecialization",
    "tate_specialization",
]

MODES = ("form", "specialization", "general")
PARAMETER_WEIGHTS = {"b1": 1, "b2": 1, "a1": 2, "a2": 2}


@dataclass(frozen=True)
class LevelSpec:
    N: int
    mode: str = "specialization"

    def __post_init__(self):
        if self.N not in (2, 3, 4, 5, 6):
            raise UsageError(f"N must be in 2..6, got {self.N}")
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}")

    @property
    def n(self) -> int:
        return (self.N - 1) // 2

    @property
    def m(self) -> int:
        return (self.N - 2) // 2

    @property
    def parameters(self) -> tuple[str, ...]:
        """Extra parameter variables the relation needs."""
        if self.mode == "general":
            return tuple(f"b{i}" for i in range(1, self.n + 1)) + tuple(f"a{i}" for i in range(1, self.m + 1))
        if self.mode == "form" and self.N == 5:
            return ("b1", "b2", "a1")
        if self.mode == "form" and self.N == 6:
            return ("b1", "b2", "a1", "a2")
        return ()


def level_ring(max_weight: int, parameters=(), domain: str = "QQ") -> PolyRing:
    """Buchstaber generators through ``max_weight`` plus named parameters."""
    extra = [(p, PARAMETER_WEIGHTS[p]) for p in parameters]
    return PolyRing(buchstaber_registry(max_weight, extra=extra), domain)


def _param(ring: PolyRing, name: str) -> Polynomial:
    if name not in ring.registry:
        raise UsageError(f"parameter {name} is missing from the ring")
    return ring.gen(name)


def level_relation(spec: LevelSpec, A: Series, B: Series, order: int | None = None) -> list[tuple[int, Polynomial]]:
    """Nonzero coefficients ``(k, c_k)`` of ``LHS - RHS`` through ``u^order``."""
    ring = A.ring
    if order is None:
        order = min(A.order, B.order)
    A = A.truncate(order)
    B = B.truncate(order)
    u = Series.variable(ring, ("u",), "u", order)
    u2 = u * u
    A1 = A.coefficient((1,))
    B2 = B.coefficient((2,))
    N = spec.N
    if spec.mode == "specialization":
        raise UsageError("specialization relations are polynomials; use specialization_relations")
    if spec.mode == "form":
        if N == 2:
            D = A - 1
        elif N == 3:
            D = B + u.scale(A1).scale(2) - A * A
        elif N == 4:
            lhs = B.scale(2) + u.scale(A1).scale(3)
            D = lhs * lhs - A * A * (A.scale(4) - u2.scale((A1 * A1).scale(3) - B2.scale(8)))
        elif N == 5:
            b1, b2, a1 = (_param(ring, p) for p in ("b1", "b2", "a1"))
            x = B + u.scale(b1)
            y = A + u2.scale(a1)
            D = x * x * (B + u.scale(b2)) - A * A * y * y
        else:
            b1, b2, a1, a2 = (_param(ring, p) for p in ("b1", "b2", "a1", "a2"))
            x1 = B + u.scale(b1)
            x2 = B + u.scale(b2)
            y1 = A + u2.scale(a1)
            D = x1 * x1 * x2 * x2 - A * A * y1 * y1 * (A + u2.scale(a2))
    else:
        n, m = spec.n, spec.m
        lhs = Series.one(ring, ("u",), order)
        for i in range(1, n + 1):
            f = B + u.scale(_param(ring, f"b{i}"))
            lhs = lhs * (f ** (2 if i < n else N - 2 * n))
        if n == 0:
            lhs = B ** N
        rhs = Series.one(ring, ("u",), order)
        for i in range(0, m + 1):
            f = A if i == 0 else A + u2.scale(_param(ring, f"a{i}"))
            rhs = rhs * (f ** (2 if i < m else N - 1 - 2 * m))
        D = lhs - rhs
    return [(e[0], c) for e, c in sorted(D.coeffs.items())]


_SPECIALIZATION_TEXT = {
    2: ["A1", "A3"],
    3: ["B2 - A1^2", "B4"],
    4: ["2*A3 + A1*(A1^2 - 2*B2)", "8*B4 - (3*A1^4 - 4*A1^2*B2 - 4*B2^2)"],
    5: [
        "B4 - (A1^4 - 3*A1^2*B2 + B2^2 + 4*A1*A3)",
        "A3^2 - 2*A1*(5*A1^2 - 2*B2)*A3 - (2*A1^2 - B2)*(A1^4 - 3*A1^2*B2 + B2^2)",
    ],
    6: [
        "5*A1^5 - 20*A1^3*B2 + 15*A1*B2^2 + 24*A1^2*A3 - 24*B2*A3 - 18*A1*B4",
        "5*A1^6 - 21*A1^4*B2 + 18*A1^2*B2^2 + 48*A1^3*A3 - 36*A1*B2*A3 + 18*A3^2",
        "3*A3*(11*A1^4 - 56*A1^2*B2 - 18*A1*A3 + 33*B2^2 + 18*B4)"
        " + A1*(5*A1^2 - 6*B2)*(A1^2 - 3*B2)*(A1^2 - 4*B2)",
        "6*A1^2*(A1^2 - B2)*(7*A1^2 - 4*B2)^2 - (17*A1^4 - 18*A1^2*B2 + 6*A1*A3 + 3*B2^2 + 6*B4)^2",
    ],
}


def specialization_relations(N: int, ring: PolyRing | None = None) -> list[Polynomial]:
    """Generators of the specialization ideal J_N, written as ``LHS - RHS``."""
    if N not in _SPECIALIZATION_TEXT:
        raise UsageError(f"N must be in 2..6, got {N}")
    ring = ring or PolyRing(buchstaber_registry(4), "ZZ")
    return [ring.parse(t) for t in _SPECIALIZATION_TEXT[N]]


def residual_rules(N: int, ring: PolyRing):
    """Rewrite rules (single-variable leading powers) for the residual relations.

    Only N = 5 ships such a rule set: ``A3^2 -> ...``. Returns ``[]``
    otherwise.
    """
    if N != 5:
        return []
    q = specialization_relations(5, ring)[1]
    lead = ring.gen("A3") ** 2
    return [(lead, lead - q)]


# ---------------------------------------------------------------------------
# universal solver over Q

# (free, algebraic, constraint relation indices, residual relation indices)
_SOLVER_DEFAULTS = {
    2: (("B2", "B4"), (), (0, 1), ()),
    3: (("A1", "A3"), (), (0, 1), ()),
    4: (("A1", "B2"), (), (0, 1), ()),
    5: (("A1", "B2", "A3"), (), (0,), (1,)),
    6: (("A1", "B2"), ("A3", "B4"), (), (0, 1, 2, 3)),
}


def _gen_names(max_weight: int) -> list[str]:
    return list(buchstaber_registry(max_weight).names)


def _weight(name: str) -> int:
    return int(name[1:]) if name[0] in "AB" else PARAMETER_WEIGHTS[name]


@dataclass
class SolvedSpecialization:
    """Bindings of the non-free ``A_k, B_k`` over ``Q[free, algebraic]``."""

    spec: LevelSpec
    free: tuple[str, ...]
    algebraic: tuple[str, ...]
    bindings: dict[str, Polynomial]
    residuals: list[Polynomial]
    fgl: FormalGroupLaw
    order: int
    report: list[dict] = field(default_factory=list)

    @property
    def ring(self) -> PolyRing:
        return self.fgl.ring

    def value(self, name: str) -> Polynomial:
        """``A_k`` or ``B_k`` in the solved ring (0 for A2, B1)."""
        if name in ("A2", "B1"):
            return self.ring.zero()
        if name in self.free or name in self.algebraic:
            return self.ring.gen(name)
        if name not in self.bindings:
            raise UsageError(f"{name} is beyond the solve order")
        return self.bindings[name]

    def series(self, order: int | None = None, ring: PolyRing | None = None) -> tuple[Series, Series]:
        """``A(u), B(u)`` through ``u^order`` (default: the solve order)."""
        order = self.order if order is None else order
        ring = ring or self.ring
        A = {(0,): ring.one()}
        B = {(0,): ring.one()}
        for k in range(1, order + 1):
            for letter, tgt in (("A", A), ("B", B)):
                c = self.value(f"{letter}{k}").to_ring(ring)
                if c.terms:
                    tgt[(k,)] = c
        return Series(ring, ("u",), order, A), Series(ring, ("u",), order, B)

    def reduces_to_zero(self, p: Polynomial) -> bool:
        p = p.to_ring(self.ring)
        if not p.terms:
            return True
        if not self.residuals:
            return False
        return in_ideal(p, self.residuals)

    def to_json(self) -> dict:
        return {
            "N": self.spec.N,
            "order": self.order,
            "free": list(self.free),
            "algebraic": list(self.algebraic),
            "bindings": {k: str(v) for k, v in sorted(self.bindings.items(), key=lambda t: (_weight(t[0]), t[0]))},
            "residuals": [str(r) for r in self.residuals],
            "report": self.report,
        }


def _solve_linear(rows, unknowns):
    """Gaussian elimination of ``sum c_i X_i = rhs`` (scalar c, polynomial rhs).

    Returns ``(solution for pivot unknowns, leftover right-hand sides,
    unknowns without a pivot)``.
    """
    pivots: dict[int, tuple[list, Polynomial]] = {}
    leftovers = []
    for coeffs, rhs in rows:
        coeffs = list(coeffs)
        for col in range(len(unknowns)):
            if coeffs[col] and col in pivots:
                pc, pr = pivots[col]
                f = coeffs[col]
                coeffs = [a - f * b for a, b in zip(coeffs, pc)]
                rhs = rhs - pr.scale(f)
        lead = next((i for i, a in enumerate(coeffs) if a), None)
        if lead is None:
            if rhs.terms:
                leftovers.append(rhs)
            continue
        inv = Fraction(1) / coeffs[lead]
        coeffs = [a * inv for a in coeffs]
        rhs = rhs.scale(inv)
        for col, (pc, pr) in list(pivots.items()):
            f = pc[lead]
            if f:
                pivots[col] = ([a - f * b for a, b in zip(pc, coeffs)], pr - rhs.scale(f))
        pivots[lead] = (coeffs, rhs)
    solution = {}
    missing = []
    for col, name in enumerate(unknowns):
        if col not in pivots:
            missing.append(name)
            continue
        pc, pr = pivots[col]
        if any(a for i, a in enumerate(pc) if i != col):
            missing.append(name)
            continue
        solution[name] = pr
    return solution, leftovers, missing


def _split_affine(c: Polynomial, unknowns: list[str]):
    """``c = sum coef_i X_i + rest`` with scalar ``coef_i``; raises if not affine."""
    reg = c.registry
    idx = [reg.index(n) for n in unknowns]
    coeffs = [Fraction(0)] * len(unknowns)
    rest = {}
    for k, v in c.terms.items():
        e = reg.unpack(k)
        hits = [(j, e[i]) for j, i in enumerate(idx) if e[i]]
        if not hits:
            rest[e] = v
        elif len(hits) == 1 and hits[0][1] == 1 and sum(e) == 1:
            coeffs[hits[0][0]] += v
        else:
            raise VerificationError(f"constraint {c} is not affine-linear in {unknowns}")
    return coeffs, c.ring.from_terms(rest.items())


def solve_universal(
    spec: LevelSpec | int,
    free=None,
    order: int = 10,
    algebraic=None,
) -> SolvedSpecialization:
    """Solve associativity plus the J_N relations weight by weight over Q.

    At weight ``w`` the unknowns are ``A_w, B_w`` minus the free and
    algebraic generators; they enter the weight-``w`` constraints linearly.
    Rows with no unknown left must lie in the ideal of the residual
    relations.
    """
    if isinstance(spec, int):
        spec = LevelSpec(spec)
    N = spec.N
    d_free, d_alg, cons_idx, res_idx = _SOLVER_DEFAULTS[N]
    free = tuple(d_free if free is None else free)
    algebraic = tuple(d_alg if algebraic is None else algebraic)
    if order < 2:
        raise UsageError("solve order must be >= 2")
    symbolic = free + algebraic
    for n in symbolic:
        if n not in _gen_names(max(order, _weight(n))):
            raise UsageError(f"{n} is not a Buchstaber generator")
    names = _gen_names(order)
    unknown_names = [n for n in names if n not in symbolic]
    work = PolyRing(VarRegistry([(n, _weight(n)) for n in symbolic] + [(n, _weight(n)) for n in unknown_names]), "QQ")
    sym_ring = PolyRing(VarRegistry([(n, _weight(n)) for n in symbolic]), "QQ")
    rels = specialization_relations(N, work)
    constraints = [rels[i] for i in cons_idx]
    residuals = [rels[i] for i in res_idx]
    for r in residuals:
        if set(r.variables()) - set(symbolic):
            raise UsageError(f"residual relation {r} involves non-symbolic generators")

    bindings: dict[str, Polynomial] = {}
    report = []

    def value(name, current):
        if name in ("A2", "B1"):
            return work.zero()
        if name in symbolic or name in current:
            return work.gen(name)
        return bindings.get(name, work.zero())

    for w in range(1, order + 1):
        current = [n for n in (f"A{w}", f"B{w}") if n in unknown_names]
        A = {(0,): work.one()}
        B = {(0,): work.one()}
        for k in range(1, w + 1):
            a, b = value(f"A{k}", current), value(f"B{k}", current)
            if a.terms:
                A[(k,)] = a
            if b.terms:
                B[(k,)] = b
        As = Series(work, ("u",), w, A)
        Bs = Series(work, ("u",), w, B)
        F = buchstaber_fgl(As, Bs, w + 1)
        rows = [c for (e, c) in assoc_defect(F, w + 1) if sum(e) == w + 1]
        for r in constraints:
            if r.weight == w:
                rows.append(r.substitute({n: p for n, p in bindings.items()}))
        lin = [_split_affine(c, current) for c in rows]
        solution, leftovers, missing = _solve_linear([(co, -rest) for co, rest in lin], current)
        bad = [p for p in leftovers if not (residuals and in_ideal(p, residuals))]
        report.append(
            {"weight": w, "unknowns": current, "constraints": len(rows), "leftover": len(leftovers), "consistent": not bad}
        )
        if bad:
            raise VerificationError(f"no specialization at weight {w}: leftover constraint {bad[0]}")
        if missing:
            raise VerificationError(f"underdetermined at weight {w}: {missing} not fixed by the constraints")
        bindings.update(solution)

    sym_bindings = {n: p.to_ring(sym_ring) for n, p in bindings.items()}
    A = {(0,): sym_ring.one()}
    B = {(0,): sym_ring.one()}
    for k in range(1, order + 1):
        for letter, tgt in (("A", A), ("B", B)):
            n = f"{letter}{k}"
            c = sym_ring.gen(n) if n in symbolic else sym_bindings.get(n, sym_ring.zero())
            if c.terms:
                tgt[(k,)] = c
    F = buchstaber_fgl(Series(sym_ring, ("u",), order, A), Series(sym_ring, ("u",), order, B), order + 1, f"solved-level-{N}")
    return SolvedSpecialization(
        spec,
        free,
        algebraic,
        sym_bindings,
        [r.to_ring(sym_ring) for r in residuals],
        F,
        order,
        report,
    )


def solved_defect(sol: SolvedSpecialization, order: int | None = None) -> list:
    """Associativity defect coefficients of the solved law that do not reduce to 0."""
    order = sol.fgl.order if order is None else order
    return [(e, c) for e, c in assoc_defect(sol.fgl, order) if not sol.reduces_to_zero(c)]


# ---------------------------------------------------------------------------
# Tate specializations for levels 2 and 3


@dataclass
class TateSpecialization:
    N: int
    mu: dict[str, Polynomial]
    A: Series
    B: Series
    tate: FormalGroupLaw
    buchstaber: FormalGroupLaw
    identity_residual: list
    differences: list

    @property
    def ok(self) -> bool:
        return not self.identity_residual and not self.differences


TATE_VARIANTS = ("printed", "corrected")


def tate_specialization(N: int, order: int = 8, variant: str = "printed") -> TateSpecialization:
    """Specialize the Tate law to level 2 or 3 and compare with the Buchstaber form.

    Level 2: ``mu1 = mu3 = mu6 = 0``, ``A = 1`` and ``B`` the square root
    of ``(1 - mu2 u^2)^2 - 4 mu4 u^4``. Level 3: ``mu2 = -mu1^2``,
    ``mu4 = mu1 mu3``, ``mu6 = -mu3^2/3``, ``A = 1 - mu1 u - mu3 s(u)`` and
    ``B = A^2 - 2 A1 u``. With these level-3 relations the two laws first
    differ at weight 4; ``variant="corrected"`` uses ``mu4 = -mu1 mu3``,
    for which they agree.
    """
    if variant not in TATE_VARIANTS:
        raise UsageError(f"variant must be one of {TATE_VARIANTS}")
    if N == 2:
        ring = PolyRing(VarRegistry([("mu2", 2), ("mu4", 4)]), "QQ")
        mu2, mu4 = ring.gen("mu2"), ring.gen("mu4")
        mu = {"mu1": ring.zero(), "mu3": ring.zero(), "mu6": ring.zero(), "mu2": mu2, "mu4": mu4}
        u = Series.variable(ring, ("u",), "u", order)
        base = 1 - (u * u).scale(mu2)
        square = base * base - (u ** 4).scale(mu4).scale(4)
        B = square.sqrt()
        A = Series.one(ring, ("u",), order)
        residual = [(e, c) for e, c in sorted((B * B - square).coeffs.items())]
    elif N == 3:
        ring = PolyRing(VarRegistry([("mu1", 1), ("mu3", 3)]), "QQ")
        mu1, mu3 = ring.gen("mu1"), ring.gen("mu3")
        mu = {"mu1": mu1, "mu3": mu3, "mu2": -(mu1 * mu1), "mu4": (mu1 * mu3).scale(1 if variant == "printed" else -1), "mu6": (mu3 * mu3).scale(Fraction(-1, 3))}
        u = Series.variable(ring, ("u",), "u", order)
        s = tate_s(mu, order, ring)
        A = 1 - u.scale(mu1) - s.scale(mu3)
        A1 = A.coefficient((1,))
        B = A * A - u.scale(A1).scale(2)
        residual = level_relation(LevelSpec(3, "form"), A, B, order)
    else:
        raise UsageError("Tate specializations are shipped for N = 2, 3 only")
    tate = tate_fgl(mu, order, ring)
    buch = buchstaber_fgl(A, B, order, f"tate-level-{N}")
    return TateSpecialization(N, mu, A, B, tate, buch, residual, tate.differences(buch))


# ---------------------------------------------------------------------------
# the form relation on a solved law


@dataclass
class FormCertificate:
    """Whether the solved law satisfies its form relation through ``order``.

    ``direct``: the coefficients of LHS - RHS vanish (modulo residuals).
    ``elimination``: the parameters are adjoined and every coefficient
    through ``u^order`` is imposed; per weight, the ideal so generated must
    meet the polynomials in the Buchstaber generators exactly in the
    residual ideal.
    """

    N: int
    order: int
    method: str
    failures: list
    weights: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"N": self.N, "order": self.order, "method": self.method, "ok": self.ok,
                "failures": [str(f) for f in self.failures], "weights": self.weights}


def _ideal_rows(ring: PolyRing, gens, w: int) -> list[dict]:
    rows = []
    for r in gens:
        if not r.terms or r.weight > w:
            continue
        for e in monomial_basis(ring.registry, w - r.weight):
            rows.append((ring.monomial(e) * r).terms)
    return rows


def form_certificate(sol: SolvedSpecialization, order: int = 8, form_N: int | None = None) -> FormCertificate:
    """Check the form relation of level ``form_N`` (default: the solved level)."""
    N = sol.spec.N if form_N is None else form_N
    spec = LevelSpec(N, "form")
    if order > sol.order:
        raise UsageError("certificate order exceeds the solve order")
    params = spec.parameters
    base = sol.ring
    if not params:
        A, B = sol.series(order)
        bad = [(k, c) for k, c in level_relation(spec, A, B, order) if not sol.reduces_to_zero(c)]
        return FormCertificate(N, order, "direct", bad)
    reg = base.registry.extend([(p, PARAMETER_WEIGHTS[p]) for p in params])
    ring = PolyRing(reg, "QQ")
    A, B = sol.series(order, ring)
    imposed = [c for _, c in level_relation(spec, A, B, order)]
    ideal = [r.to_ring(ring) for r in sol.residuals] + imposed
    failures, weights = [], []
    for w in range(1, order + 1):
        plain = [{ring.monomial(tuple(e) + (0,) * len(params)).terms.popitem()[0]: 1}
                 for e in monomial_basis(base.registry, w)]
        rows = _ideal_rows(ring, ideal, w)
        meet = span_rank(rows) + len(plain) - span_rank(rows + plain)
        expected = span_rank(_ideal_rows(base, sol.residuals, w))
        weights.append({"weight": w, "forced": meet, "residual": expected})
        if meet != expected:
            failures.append(f"weight {w}: form relation forces {meet - expected} extra relation(s)")
    return FormCertificate(N, order, "elimination", failures, weights)
