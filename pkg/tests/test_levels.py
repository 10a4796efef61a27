from fractions import Fraction

import pytest

from ellfgl.errors import UsageError
from ellfgl.fgl import ab_series, assoc_defect, buchstaber_registry, fgl_exp
from ellfgl.levels import (
    LevelSpec,
    form_certificate,
    level_relation,
    level_ring,
    solve_universal,
    solved_defect,
    specialization_relations,
    tate_specialization,
)
from ellfgl.polyring import PolyRing, reduce_mod
from ellfgl.series import Series


def generic_ab(order, parameters=()):
    ring = level_ring(order, parameters)
    A, B = ab_series(ring, order)
    return ring, A, B


def test_level_spec_indices():
    assert (LevelSpec(5).n, LevelSpec(5).m) == (2, 1)
    assert (LevelSpec(6).n, LevelSpec(6).m) == (2, 2)
    assert LevelSpec(6, "form").parameters == ("b1", "b2", "a1", "a2")
    with pytest.raises(UsageError):
        LevelSpec(7)
    with pytest.raises(UsageError):
        LevelSpec(3, "bogus")


def test_form_n3_holds_for_its_own_b():
    ring, A, _ = generic_ab(8)
    u = Series.variable(ring, ("u",), "u", 8)
    B = A * A - u.scale(A.coefficient((1,))).scale(2)
    assert level_relation(LevelSpec(3, "form"), A, B) == []


def test_form_n4_low_coefficients_vanish():
    _, A, B = generic_ab(6)
    degrees = [k for k, _ in level_relation(LevelSpec(4, "form"), A, B)]
    assert 1 not in degrees and 2 not in degrees and 0 not in degrees
    assert 3 in degrees


def test_form_n4_weight3_coefficient():
    ring, A, B = generic_ab(6)
    rel = dict(level_relation(LevelSpec(4, "form"), A, B))
    # sympy expansion of (2B + 3A1u)^2 - A^2(4A - (3A1^2 - 8B2)u^2) at u^3
    want = ring.parse("2*A1^3 - 4*A1*B2 - 12*A3 + 8*B3")
    assert rel[3] == want


def test_form_relations_are_homogeneous():
    for N in (2, 3, 4, 5, 6):
        spec = LevelSpec(N, "form")
        _, A, B = generic_ab(6, spec.parameters)
        for k, c in level_relation(spec, A, B):
            assert c.is_homogeneous() and c.weight == k


@pytest.mark.parametrize("N", [5, 6])
def test_general_equation_reproduces_form(N):
    _, A, B = generic_ab(7, LevelSpec(N, "general").parameters)
    assert level_relation(LevelSpec(N, "general"), A, B) == level_relation(LevelSpec(N, "form"), A, B)


def test_missing_parameters():
    _, A, B = generic_ab(5)
    with pytest.raises(UsageError):
        level_relation(LevelSpec(5, "form"), A, B)


def test_specialization_relations_text():
    ring = PolyRing(buchstaber_registry(4), "ZZ")
    assert specialization_relations(2, ring) == [ring.gen("A1"), ring.gen("A3")]
    assert specialization_relations(4, ring) == [
        ring.parse("2*A3 + A1*(A1^2 - 2*B2)"),
        ring.parse("8*B4 - 3*A1^4 + 4*A1^2*B2 + 4*B2^2"),
    ]
    six = specialization_relations(6, ring)
    assert [r.weight for r in six] == [5, 6, 7, 8]
    for N in (2, 3, 4, 5, 6):
        assert all(r.is_homogeneous() for r in specialization_relations(N, ring))


def test_solver_n2_odd(solved):
    sol = solved(2)
    for k in (1, 3, 5, 7, 9):
        assert sol.value(f"A{k}") == 0 and sol.value(f"B{k}") == 0
    f = fgl_exp(sol.fgl)
    assert all(e[0] % 2 == 1 for e in f.coeffs)


def test_solver_n3_bindings(solved):
    sol = solved(3)
    A, B = sol.series()
    A1 = sol.value("A1")
    assert sol.value("B2") == A1 * A1
    assert sol.value("B4") == 0
    u = Series.variable(sol.ring, ("u",), "u", sol.order)
    assert B == A * A - u.scale(A1).scale(2)


def test_solver_n4_matches_relations(solved):
    sol = solved(4)
    p = sol.ring.parse
    assert sol.value("A3") == p("-A1^3/2 + A1*B2")
    assert sol.value("B4") == p("3*A1^4/8 - A1^2*B2/2 - B2^2/2")


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_solver_zero_defect(solved, N):
    sol = solved(N)
    assert sol.fgl.order >= 10
    assert solved_defect(sol) == []
    full = PolyRing(buchstaber_registry(4), "QQ")
    values = {n: sol.value(n) for n in full.registry.names}
    for r in specialization_relations(N, full):
        assert sol.reduces_to_zero(r.substitute(values, sol.ring))


def test_solver_n5_residual_reduction(solved):
    sol = solved(5)
    (q,) = sol.residuals
    lead = sol.ring.gen("A3") ** 2
    assert q.coefficient((0, 0, 2)) == 1
    rules = [(lead, lead - q)]
    for _, c in assoc_defect(sol.fgl, 8):
        assert reduce_mod(c, rules) == 0


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_form_certificate(solved, N):
    cert = form_certificate(solved(N), order=8)
    assert cert.ok, cert.failures


@pytest.mark.parametrize("N,other", [(3, 5), (4, 5)])
def test_form_certificate_negative(solved, N, other):
    assert not form_certificate(solved(N), order=8, form_N=other).ok


def test_solver_rejects_bad_free_set():
    with pytest.raises(Exception):
        solve_universal(3, free=("B2",), order=6)


def test_tate_level2():
    t = tate_specialization(2, 8)
    assert t.ok
    p = t.B.ring.parse
    assert t.B.coefficient((2,)) == p("-mu2")
    assert t.B.coefficient((4,)) == p("-2*mu4")


def test_tate_level2_tangent_closed_form():
    t = tate_specialization(2, 8)
    ring = t.tate.ring
    mu2 = ring.gen("mu2")
    F = t.tate.substitute({"mu4": ring.zero()}).series()
    u = Series.variable(ring, ("u", "v"), "u", 8)
    v = Series.variable(ring, ("u", "v"), "v", 8)
    lhs = F * (1 + (u * v).scale(mu2))
    assert lhs == (u + v).truncate(8)


def test_tate_level3_corrected():
    t = tate_specialization(3, 10, "corrected")
    assert t.ok
    assert t.A.coefficient((1,)) == -t.A.ring.gen("mu1")


def test_tate_level3_printed_records_mismatch():
    t = tate_specialization(3, 8, "printed")
    assert t.identity_residual == []
    first = t.differences[0]
    assert first[0] == (1, 4)
    assert first[1] == t.tate.ring.parse("-4*mu1*mu3")


def test_tate_specialization_bad_args():
    with pytest.raises(UsageError):
        tate_specialization(4)
    with pytest.raises(UsageError):
        tate_specialization(3, variant="other")


def test_solution_json(solved):
    obj = solved(4).to_json()
    assert obj["free"] == ["A1", "B2"] and "A3" in obj["bindings"]
