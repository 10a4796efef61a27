"""Graded presentations of coefficient rings and their homogeneous pieces.

A presentation is a weighted polynomial ring over Z with homogeneous
relations, complete through a weight cutoff ``W``. Pieces are finitely
generated abelian groups, computed by integer elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from ellfgl.algebra import Lattice, abelian_group, extended_gcd_list
from ellfgl.errors import ResourceGuardError, UsageError
from ellfgl.fgl import FormalGroupLaw, ab_series, assoc_defect, buchstaber_fgl, buchstaber_registry
from ellfgl.levels import LevelSpec, level_relation, specialization_relations
from ellfgl.polyring import Polynomial, PolyRing, monomial_basis
from ellfgl.series import Series

__all__ = [
    "AbelianGroupReport",
    "FAMILIES",
    "GradedPresentation",
    "build_presentation",
    "e_element",
    "graded_piece",
    "indecomposable_piece",
    "rho",
    "rho_table",
]

FAMILIES = ("RB", "R2", "R3", "R4", "RB_mod_JN")
DEFAULT_GUARD = 5000


@dataclass
class GradedPresentation:
    family: str
    ring: PolyRing
    relations: list[Polynomial]
    W: int
    fgl: FormalGroupLaw
    N: int | None = None

    @property
    def registry(self):
        return self.ring.registry

    @property
    def linear_only(self) -> bool:
        return self.ring.max_degree == 1

    def relations_of_weight(self, w: int) -> list[Polynomial]:
        return [r for r in self.relations if r.weight == w]

    def generators_of_weight(self, w: int) -> list[str]:
        reg = self.registry
        return [n for n in reg.names if reg.weight_of(n) == w]

    def label(self) -> str:
        return f"RB/J{self.N}" if self.family == "RB_mod_JN" else self.family


def _family_series(family: str, ring: PolyRing, W: int) -> tuple[Series, Series]:
    A, B = ab_series(ring, W)
    if family == "R2":
        A = Series.one(ring, ("u",), W)
    elif family == "R3":
        u = Series.variable(ring, ("u",), "u", W)
        B = A * A - u.scale(A.coefficient((1,))).scale(2)
    return A, B


def build_presentation(
    family: str,
    W: int,
    N: int | None = None,
    linear_only: bool = False,
    extra_relations=(),
) -> GradedPresentation:
    """Generators through weight ``W`` and every relation of weight ``<= W``.

    With ``linear_only`` the ring is truncated at total degree one, which
    is exactly what indecomposables and ``rho`` need.
    """
    if family not in FAMILIES:
        raise UsageError(f"unsupported family {family!r}; choose from {FAMILIES}")
    if W < 1:
        raise UsageError("W must be >= 1")
    if family == "RB_mod_JN" and N not in (2, 3, 4, 5, 6):
        raise UsageError("RB_mod_JN needs N in 2..6")
    reg = buchstaber_registry(W, a=family != "R2", b=family != "R3")
    ring = PolyRing(reg, "ZZ", 1 if linear_only else None)
    A, B = _family_series(family, ring, W)
    F = buchstaber_fgl(A, B, W + 1)
    rels = [c for _, c in assoc_defect(F, W + 1)]
    if family == "R4":
        rels += [c for _, c in level_relation(LevelSpec(4, "form"), A, B, W)]
    if family == "RB_mod_JN":
        big = PolyRing(buchstaber_registry(max(W, 4)), "ZZ")
        for r in specialization_relations(N, big):
            if r.weight <= W:
                rels.append(r.to_ring(ring.truncated(None)).truncate_degree(1) if linear_only else r.to_ring(ring))
    for r in extra_relations:
        rels.append(r.to_ring(ring))
    rels = [r for r in rels if r.terms]
    for r in rels:
        if not r.is_homogeneous():
            raise UsageError(f"relation {r} is not homogeneous")
    return GradedPresentation(family, ring, rels, W, F, N)


# ---------------------------------------------------------------------------
# e_n and rho


def e_element(F: FormalGroupLaw, n: int, lambdas=None) -> Polynomial:
    """``sum lambda_i a_{i, n+1-i}`` with ``sum lambda_i C(n+1, i) = d(n+1)``."""
    if n < 1:
        raise UsageError("n must be >= 1")
    if n + 1 > F.order:
        raise UsageError(f"e_{n} needs a law of order >= {n + 1}")
    binoms = [comb(n + 1, i) for i in range(1, n + 1)]
    if lambdas is None:
        _, lambdas = extended_gcd_list(binoms)
    elif len(lambdas) != n:
        raise UsageError("need one lambda per coefficient")
    e = F.ring.zero()
    for i, lam in enumerate(lambdas, start=1):
        if lam:
            e = e + F.coefficient(i, n + 1 - i).scale(lam)
    return e


@dataclass
class AbelianGroupReport:
    weight: int
    free_rank: int
    invariant_factors: list[int]
    basis: list[str]
    torsion_classes: list[str] = field(default_factory=list)
    classes: dict[str, int | None] = field(default_factory=dict)

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "free_rank": self.free_rank,
            "invariant_factors": self.invariant_factors,
            "basis": self.basis,
            "torsion_classes": self.torsion_classes,
            "classes": {k: ("inf" if v is None else v) for k, v in self.classes.items()},
        }


def _vector(p: Polynomial, index: dict[int, int]) -> dict[int, int]:
    out = {}
    for k, c in p.terms.items():
        if k not in index:
            raise UsageError(f"term of {p} lies outside the basis")
        out[index[k]] = int(c)
    return out


def _indecomposable_setup(pres: GradedPresentation, w: int):
    if w > pres.W:
        raise UsageError(f"weight {w} exceeds the cutoff W = {pres.W}")
    gens = pres.generators_of_weight(w)
    index = {pres.ring.gen(g).terms.popitem()[0]: i for i, g in enumerate(gens)}
    rows = [_vector(r.linear_part(), index) for r in pres.relations_of_weight(w)]
    return gens, index, [r for r in rows if r]


def indecomposable_piece(pres: GradedPresentation, w: int) -> AbelianGroupReport:
    """``Z{generators of weight w}`` modulo the linear parts of weight-``w`` relations."""
    gens, _, rows = _indecomposable_setup(pres, w)
    G = abelian_group(rows, len(gens))
    return AbelianGroupReport(w, G.free_rank, list(G.torsion), gens, [_dict_label(r, gens) for r in G.torsion_reps])


def _dict_label(vec: dict[int, int], labels: list[str]) -> str:
    parts = []
    for i in sorted(vec):
        c = vec[i]
        parts.append(labels[i] if c == 1 else f"{c}*{labels[i]}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def rho(pres: GradedPresentation, n: int, F: FormalGroupLaw | None = None, lambdas=None) -> int | None:
    """Order of the class of ``e_n`` in ``R/I^2`` at weight ``n``; ``None`` is infinity."""
    F = F or pres.fgl
    gens, index, rows = _indecomposable_setup(pres, n)
    e = e_element(F, n, lambdas).linear_part().to_ring(pres.ring)
    return Lattice(rows).order(_vector(e, index))


def rho_table(pres: GradedPresentation, max_n: int | None = None) -> dict[int, int | None]:
    max_n = pres.W if max_n is None else max_n
    return {n: rho(pres, n) for n in range(1, max_n + 1)}


# ---------------------------------------------------------------------------
# full graded pieces


def _piece_setup(pres: GradedPresentation, w: int, guard: int):
    if pres.linear_only:
        raise UsageError("full graded pieces need a presentation built without linear_only")
    if w > pres.W:
        raise UsageError(f"weight {w} exceeds the cutoff W = {pres.W}")
    reg = pres.registry
    basis = monomial_basis(reg, w)
    if len(basis) > guard:
        raise ResourceGuardError(f"weight {w} has {len(basis)} monomials, above the guard {guard}")
    ring = pres.ring
    mons = [ring.monomial(e) for e in basis]
    index = {m.terms.popitem()[0]: i for i, m in enumerate(ring.monomial(e) for e in basis)}
    rows = []
    for r in pres.relations:
        if r.weight > w:
            continue
        for e in monomial_basis(reg, w - r.weight):
            row = _vector(ring.monomial(e) * r, index)
            if row:
                rows.append(row)
    return [str(m) for m in mons], index, rows


def graded_piece(
    pres: GradedPresentation,
    w: int,
    guard: int = DEFAULT_GUARD,
    classes=(),
) -> AbelianGroupReport:
    """The weight-``w`` component of the presented ring as an abelian group.

    ``classes`` are polynomials whose orders in the piece are reported.
    """
    labels, index, rows = _piece_setup(pres, w, guard)
    G = abelian_group(rows, len(labels))
    report = AbelianGroupReport(w, G.free_rank, list(G.torsion), labels, [_dict_label(r, labels) for r in G.torsion_reps])
    if classes:
        lat = Lattice(rows)
        for p in classes:
            p = p.to_ring(pres.ring)
            if p.weight != w:
                raise UsageError(f"class {p} is not of weight {w}")
            report.classes[str(p)] = lat.order(_vector(p, index))
    return report
