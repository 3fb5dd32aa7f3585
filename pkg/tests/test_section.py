import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shapewalk import exact as ex
from shapewalk.groups import INF, make_u_minus, make_u_plus, moebius_act
from shapewalk.lattice2 import Lattice2, shape
from shapewalk import section as sec

big = st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) <= 10**6)


def test_lambda_examples():
    assert sec.lambda_t(0).basis == ((1, 0, 0), (0, 1, 0))
    assert sec.lambda_t(INF).basis == ((0, 1, 0), (0, 0, 2))
    assert sec.lambda_t(1).basis == ((1, 1, 0), (0, 1, 2))
    assert sec.psi(3).lattice == sec.lambda_t(3)


@given(big)
def test_normal_parametrization(t):
    assert ex.parallel(sec.lambda_t(t).normal(), (2 * t * t, -2 * t, 1))


def test_equivariance_examples():
    c, M = sec.equivariance_check(0, "minus")
    assert c == 1 and abs(ex.det2(M)) == 1
    assert sec.equivariance_check(INF, "plus") is not None
    assert sec.equivariance_check(INF, "minus") is not None
    assert sec.equivariance_check(Fraction(-1, 2), "plus") is not None  # g1 sends -1/2 to oo


def test_equivariance_rejects_bad_input():
    with pytest.raises(ValueError):
        sec.equivariance_check(0, "sideways")
    with pytest.raises(ex.NotExactError):
        sec.equivariance_check(0.5, "plus")


@settings(max_examples=300)
@given(big)
def test_equivariance_random_rationals(t):
    sec.equivariance_check(t, "plus")
    sec.equivariance_check(t, "minus")


@settings(max_examples=200)
@given(st.lists(st.sampled_from(["+", "-", "+i", "-i"]), max_size=10),
       st.fractions(max_denominator=1000).filter(lambda x: abs(x) < 1000))
def test_word_equivariance(word, t):
    assert sec.word_check(word, t) is not None


def test_wrong_identity_is_caught():
    # u+ paired with g2 is not an equivariance: the check must fail
    left = sec.lambda_t(Fraction(1, 3)).act(make_u_plus(2))
    right = sec.lambda_t(moebius_act(sec.G2, Fraction(1, 3)))
    assert ex.lattice2_eq_homothety(left.basis, right.basis) is None


def test_zeta_examples():
    assert sec.zeta((0, 0, 1)) == sec.lambda_t(0)
    assert sec.zeta((2, -2, 1)) == sec.lambda_t(1)
    assert sec.zeta((1, 0, 0)) == sec.lambda_t(INF)
    with pytest.raises(sec.NotIsotropicError):
        sec.zeta((0, 1, 0))  # span{e1, e3}
    assert sec.zeta_parameter((2, -2, 1)) == 1
    assert sec.zeta_parameter((5, 0, 0)) == INF


@given(big)
def test_zeta_inverts_plane_map(t):
    n = sec.lambda_t(t).normal()
    assert sec.is_isotropic(n)
    lat = sec.zeta(sec.IsotropicPlane(n))
    assert lat == sec.lambda_t(t)
    assert ex.parallel(sec.plane_of(lat).normal, n)


@given(st.floats(-1e3, 1e3))
def test_zeta_float_flavor(t):
    n = (2 * t * t, -2 * t, 1.0)
    assert sec.is_isotropic(n)
    lat = sec.zeta(n)
    assert math.isclose(lat.u[1], t, rel_tol=1e-9, abs_tol=1e-9)


def test_non_isotropic_planes():
    assert not sec.is_isotropic((0, 1, 0))
    assert not sec.is_isotropic((1, 1, 1))
    assert sec.is_isotropic((0, 0, 1))


def test_curve_examples():
    pts = sec.curve_sample([0])
    assert pts[0] == (0, pts[0][1]) and pts[0][1].z == 1j
    assert pts[-1][0] == INF and abs(pts[-1][1].z - 2j) < 1e-12
    for t, s in sec.curve_sample([10**6, -10**6]):
        assert abs(s.z - 2j) < 1e-3


def test_tan_grid_is_symmetric():
    g = sec.tan_grid(2000)
    assert len(g) == 2000 and all(a < b for a, b in zip(g, g[1:]))
    assert all(math.isclose(a, -b, rel_tol=1e-9, abs_tol=1e-9) for a, b in zip(g, reversed(g)))


@given(big)
def test_section_shape_symmetry(t):
    # t and -t are exchanged by diag(1,-1,1), an isometry
    assert abs(shape(sec.lambda_t(t)).z - shape(sec.lambda_t(-t)).z) < 1e-9
