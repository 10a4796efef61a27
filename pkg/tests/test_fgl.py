from fractions import Fraction

import pytest
import sympy

from ellfgl.errors import UsageError
from ellfgl.fgl import (
    ab_series,
    assoc_defect,
    buchstaber_fgl,
    buchstaber_registry,
    check_exponential,
    fgl_exp,
    fgl_log,
    generic_buchstaber,
    invariant_diff,
    tate_exp_via_wp,
    tate_fgl,
    tate_s,
    weierstrass_from_mu,
    wp_series,
)
from ellfgl.polyring import PolyRing, VarRegistry
from ellfgl.series import Series


def series_u(ring, coeffs, order):
    return Series(ring, ("u",), order, {(k,): ring.scalar(c) if not hasattr(c, "terms") else c for k, c in enumerate(coeffs) if c != 0})


@pytest.fixture(scope="module")
def generic6():
    return generic_buchstaber(6)


def test_additive_and_multiplicative(beta_ring):
    one = Series.one(beta_ring, ("u",), 6)
    assert buchstaber_fgl(one, one, 6).table == {}
    beta = beta_ring.gen("beta")
    A = one + Series.variable(beta_ring, ("u",), "u", 6).scale(beta)
    F = buchstaber_fgl(A, one, 6)
    assert F.table == {(1, 1): beta}
    assert assoc_defect(F) == []


def test_generic_low_order(generic6):
    g = generic6.ring.gens()
    A1, B2, A3, B3 = g["A1"], g["B2"], g["A3"], g["B3"]
    assert generic6.coefficient(1, 1) == A1
    assert generic6.coefficient(1, 2) == B2
    assert generic6.coefficient(1, 3) == B3
    assert generic6.coefficient(2, 2) == A1 * B2 - A3 + B3.scale(2)


def test_generic_matches_closed_form_oracle(generic6):
    """Expand the rational closed form in sympy and compare every a_ij through order 6."""
    u, v, t = sympy.symbols("u v t")
    names = generic6.ring.registry.names
    syms = {n: sympy.Symbol(n) for n in names}
    A = lambda x: 1 + sum(syms[f"A{k}"] * x ** k for k in range(1, 6) if f"A{k}" in syms)  # noqa: E731
    B = lambda x: 1 + sum(syms[f"B{k}"] * x ** k for k in range(1, 6) if f"B{k}" in syms)  # noqa: E731
    num = sympy.cancel((u ** 2 * A(v) - v ** 2 * A(u)) / (u - v))
    den = sympy.cancel((u * B(v) - v * B(u)) / (u - v))
    expr = (num / den).subs({u: t * u, v: t * v}, simultaneous=True)
    ser = sympy.expand(sympy.series(expr, t, 0, 7).removeO())
    ring = generic6.ring
    for n in range(2, 7):
        poly = sympy.Poly(ser.coeff(t, n), u, v)
        for i in range(1, n):
            c = poly.coeff_monomial(u ** i * v ** (n - i))
            want = ring.qq.parse(str(sympy.expand(c))) if c != 0 else ring.zero()
            assert generic6.coefficient(i, n - i) == want, (i, n - i)


def test_generic_symmetry_and_grading(generic6):
    assert generic6.is_symmetric() and generic6.is_graded()
    assert generic6.series().set_zero("v") == Series.variable(generic6.ring, ("u", "v"), "u", 6)


def test_generic_defect_is_homogeneous(generic6):
    defect = assoc_defect(generic6)
    assert defect
    for (i, j, k), c in defect:
        assert c.is_homogeneous() and c.weight == i + j + k - 1
    # sympy oracle: the degree-4 defect is -uvw(u - w)(2A3 - B3)
    g = generic6.ring.gens()
    rel = g["A3"].scale(2) - g["B3"]
    assert [(e, c) for e, c in defect if sum(e) == 4] == [((1, 1, 2), rel), ((2, 1, 1), -rel)]


def test_gauge_invariance():
    reg = buchstaber_registry(7).extend([("c1", 1), ("c2", 2)])
    ring = PolyRing(reg, "ZZ")
    A, B = ab_series(ring, 8)
    u = Series.variable(ring, ("u",), "u", 8)
    base = buchstaber_fgl(A, B, 8)
    assert buchstaber_fgl(A + (u * u).scale(ring.gen("c2")), B, 8).table == base.table
    assert buchstaber_fgl(A, B + u.scale(ring.gen("c1")), 8).table == base.table


def test_rejects_non_unit(beta_ring):
    x = Series.variable(beta_ring, ("u",), "u", 4)
    with pytest.raises(UsageError):
        buchstaber_fgl(x, Series.one(beta_ring, ("u",), 4), 4)


def test_tate_s_printed(mu_ring):
    s = tate_s(None, 6, mu_ring)
    p = mu_ring.parse
    assert [s.coefficient((k,)) for k in range(3)] == [0, 0, 0]
    assert s.coefficient((3,)) == 1
    assert s.coefficient((4,)) == p("mu1")
    assert s.coefficient((5,)) == p("mu2 + mu1^2")
    assert s.coefficient((6,)) == p("mu3 + 2*mu1*mu2 + mu1^3")


def test_tate_s_fixed_point(mu_ring):
    s = tate_s(None, 9, mu_ring)
    u = Series.variable(mu_ring, ("u",), "u", 9)
    g = mu_ring.gens()
    rhs = u * u * u + (u * s).scale(g["mu1"]) + (u * u * s).scale(g["mu2"]) + (s * s).scale(g["mu3"])
    rhs = rhs + (u * s * s).scale(g["mu4"]) + (s * s * s).scale(g["mu6"])
    assert rhs == s


def test_tate_basic(tate7, mu_ring):
    p = mu_ring.parse
    assert tate7.coefficient(1, 1) == p("-mu1")
    assert tate7.coefficient(2, 1) == p("-mu2")
    assert tate7.is_integral() and tate7.is_symmetric() and tate7.is_graded()
    assert tate_fgl({n: 0 for n in ("mu1", "mu2", "mu3", "mu4", "mu6")}, 5, mu_ring).table == {}


def test_tate_associative(tate7):
    assert assoc_defect(tate7, 7) == []


def test_tate_invariant_differential(tate7, mu_ring):
    s = tate_s(None, 6, mu_ring)
    g = mu_ring.gens()
    u = Series.variable(mu_ring, ("u",), "u", 6)
    want = 1 - u.scale(g["mu1"]) - (u * u).scale(g["mu2"]) - s.scale(g["mu3"].scale(2))
    want = want - (u * s).scale(g["mu4"].scale(2)) - (s * s).scale(g["mu6"].scale(3))
    assert invariant_diff(tate7) == want


def test_invariant_differential_simple(eps_ring):
    one = Series.one(eps_ring, ("u",), 6)
    assert invariant_diff(buchstaber_fgl(one, one, 6)) == Series.one(eps_ring, ("u",), 5)
    u = Series.variable(eps_ring, ("u",), "u", 6)
    eps = eps_ring.gen("eps")
    F = buchstaber_fgl(one, 1 - (u * u).scale(eps), 6)
    assert invariant_diff(F) == (1 - (u * u).scale(eps)).truncate(5)


def test_log_exp_multiplicative(beta_ring):
    beta = beta_ring.gen("beta")
    one = Series.one(beta_ring, ("u",), 7)
    F = buchstaber_fgl(one + Series.variable(beta_ring, ("u",), "u", 7).scale(beta), one, 7)
    g = fgl_log(F)
    f = fgl_exp(F)
    for n in range(1, 7):
        assert g.coefficient((n,)) == (beta ** (n - 1)).scale(Fraction((-1) ** (n - 1), n))
        assert f.coefficient((n,)) == (beta ** (n - 1)).scale(Fraction(1, sympy.factorial(n)))
    assert check_exponential(F, f) == []


def test_log_tangent(eps_ring):
    one = Series.one(eps_ring, ("u",), 7)
    u = Series.variable(eps_ring, ("u",), "u", 7)
    eps = eps_ring.gen("eps")
    g = fgl_log(buchstaber_fgl(one, 1 - (u * u).scale(eps), 7))
    assert g.coefficient((3,)) == eps.scale(Fraction(1, 3))
    assert g.coefficient((5,)) == (eps * eps).scale(Fraction(1, 5))
    assert g.coefficient((2,)) == 0 and g.coefficient((4,)) == 0


def test_exp_log_round_trip(tate7):
    g = fgl_log(tate7)
    f = fgl_exp(tate7)
    assert g.compose(f.rename(("u",))).rename(("z",)) == Series.variable(g.ring, ("z",), "z", f.order)
    assert check_exponential(tate7, f) == []


def test_weierstrass_from_mu(mu_ring):
    t = mu_ring.gen("mu4")
    zero = {n: 0 for n in ("mu1", "mu2", "mu3", "mu4", "mu6")}
    assert weierstrass_from_mu(zero, mu_ring) == (0, 0)
    g2, g3 = weierstrass_from_mu({**zero, "mu4": t}, mu_ring)
    assert g2 == t.scale(-4) and g3 == 0
    t6 = mu_ring.gen("mu6")
    g2, g3 = weierstrass_from_mu({**zero, "mu6": t6}, mu_ring)
    assert g2 == 0 and g3 == t6.scale(-4)
    g2, g3 = weierstrass_from_mu(None, mu_ring)
    assert g2.weight == 4 and g3.weight == 6


def test_wp_recurrence():
    ring = PolyRing(VarRegistry.of("g2:4", "g3:6"), "QQ")
    g2, g3 = ring.gen("g2"), ring.gen("g3")
    wp = wp_series(g2, g3, 8)
    c2, c3, c4 = wp.coefficient(2), wp.coefficient(4), wp.coefficient(6)
    assert wp.coefficient(-2) == 1 and wp.coefficient(0) == 0
    assert c2 == g2.scale(Fraction(1, 20))
    assert c3 == g3.scale(Fraction(1, 28))
    assert c4 == (c2 * c2).scale(Fraction(1, 3))
    assert all(k % 2 == 0 for k, _ in wp.items())
    flat = wp_series(ring.zero(), ring.zero(), 8)
    assert [k for k, _ in flat.items()] == [-2]


def test_wp_satisfies_ode_sympy():
    ring = PolyRing(VarRegistry.of("g2:4", "g3:6"), "QQ")
    wp = wp_series(ring.gen("g2"), ring.gen("g3"), 12)
    z, G2, G3 = sympy.symbols("z g2 g3")
    P = sum(sympy.sympify(str(c).replace("^", "**")) * z ** k for k, c in wp.items())
    lhs = sympy.expand(sympy.diff(P, z) ** 2 - 4 * P ** 3 + G2 * P + G3)
    for k in range(-6, 8):
        assert sympy.expand(lhs.coeff(z, k)) == 0


def test_tate_exp_cross_check(mu_ring):
    f_wp = tate_exp_via_wp(None, 10, mu_ring)
    f_fgl = fgl_exp(tate_fgl(None, 10, mu_ring))
    assert f_wp.order >= 10 and f_fgl.order >= 10
    assert f_wp.truncate(10) == f_fgl.truncate(10)
    assert f_wp.coefficient((2,)) == mu_ring.qq.gen("mu1").scale(Fraction(-1, 2))


def test_tate_exp_degenerate(mu_ring):
    zero = {n: 0 for n in ("mu1", "mu2", "mu3", "mu4", "mu6")}
    f = tate_exp_via_wp(zero, 8, mu_ring)
    assert f == Series.variable(f.ring, ("z",), "z", f.order)
