from fractions import Fraction

import pytest

from ellfgl.errors import UsageError
from ellfgl.fgl import buchstaber_fgl, fgl_exp, generic_buchstaber, tate_fgl
from ellfgl.genus import cpn_coefficients, hirzebruch_defect, krichever_fit, q_ring
from ellfgl.levels import tate_specialization
from ellfgl.series import Series


@pytest.fixture(scope="module")
def f2():
    return fgl_exp(tate_specialization(2, 12).tate)


@pytest.fixture(scope="module")
def f3():
    return fgl_exp(tate_specialization(3, 12, "corrected").tate)


def test_krichever_identity():
    ring = q_ring()
    f = Series.variable(ring, ("z",), "z", 8)
    fit = krichever_fit(f)
    assert fit.ok and (fit.q1, fit.q2, fit.q3) == (0, 0, 0)


def test_krichever_level2(f2):
    fit = krichever_fit(f2)
    assert fit.checked_through >= 10 and fit.ok
    assert fit.q1 == 0
    assert fit.q2 == f2.ring.gen("mu2").scale(Fraction(1, 3))


def test_krichever_level3_corrected(f3):
    fit = krichever_fit(f3)
    assert fit.checked_through >= 10 and fit.ok


def test_krichever_level3_solved(solved):
    fit = krichever_fit(fgl_exp(solved(3, 12).fgl))
    assert fit.checked_through >= 10 and fit.ok


def test_krichever_level3_printed_residual():
    fit = krichever_fit(fgl_exp(tate_specialization(3, 12, "printed").tate))
    assert not fit.ok and fit.residuals[0][0] == 4


def test_krichever_generic_tate_is_data(mu_ring):
    fit = krichever_fit(fgl_exp(tate_fgl(None, 10, mu_ring)))
    assert fit.checked_through == 8
    assert all(c.is_homogeneous() for _, c in fit.residuals)


def test_krichever_rescaling(f2):
    lam = 2
    z = Series.variable(f2.ring, ("z",), "z", f2.order)
    g = f2.compose(z.scale(lam)).scale(Fraction(1, lam))
    base, scaled = krichever_fit(f2), krichever_fit(g)
    assert scaled.ok
    assert scaled.q1 == base.q1.scale(lam)
    assert scaled.q2 == base.q2.scale(lam ** 2)
    assert scaled.q3 == base.q3.scale(lam ** 3)


def test_krichever_rejects_short():
    ring = q_ring()
    with pytest.raises(UsageError):
        krichever_fit(Series.variable(ring, ("z",), "z", 4))
    with pytest.raises(UsageError):
        krichever_fit(Series.variable(ring, ("z",), "z", 8).scale(2))


def test_hfe_odd_n2(eps_ring):
    one = Series.one(eps_ring, ("u",), 9)
    u = Series.variable(eps_ring, ("u",), "u", 9)
    f = fgl_exp(buchstaber_fgl(one, 1 - (u * u).scale(eps_ring.gen("eps")), 9))
    rep = hirzebruch_defect(f, 2, 6)
    assert rep.ok and rep.c == 0


def test_hfe_level2(f2):
    assert hirzebruch_defect(f2, 2, 6).ok
    four = hirzebruch_defect(f2, 4, 6)
    assert four.ok
    three = hirzebruch_defect(f2, 3, 6)
    assert not three.ok and three.symmetric


def test_hfe_level3(f3, solved):
    assert hirzebruch_defect(f3, 3, 6).ok
    assert hirzebruch_defect(fgl_exp(solved(3).fgl), 3, 6).ok


def test_hfe_errors(f2):
    with pytest.raises(UsageError):
        hirzebruch_defect(f2, 5, 4)
    with pytest.raises(UsageError):
        hirzebruch_defect(f2.truncate(5), 3, 6)


def test_cpn_additive_and_multiplicative(beta_ring):
    one = Series.one(beta_ring, ("u",), 8)
    vals = cpn_coefficients(buchstaber_fgl(one, one, 8))
    assert vals[0][1] == 1 and all(v == 0 for _, v, _ in vals[1:])
    beta = beta_ring.gen("beta")
    F = buchstaber_fgl(one + Series.variable(beta_ring, ("u",), "u", 8).scale(beta), one, 8)
    for n, v, integral in cpn_coefficients(F):
        assert v == (-beta) ** n and integral


def test_cpn_integral_tate_and_generic(mu_ring):
    assert all(ok for _, _, ok in cpn_coefficients(tate_fgl(None, 9, mu_ring), 9))
    assert all(ok for _, _, ok in cpn_coefficients(generic_buchstaber(8)))
