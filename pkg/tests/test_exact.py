import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from shapewalk import exact as ex

small = st.integers(-9, 9)
vec3 = st.tuples(small, small, small)
mat3 = st.tuples(vec3, vec3, vec3)


def test_wedge_examples():
    assert ex.wedge2((1, 0, 0), (0, 1, 0)) == (0, 0, 1)
    assert ex.wedge2((1, 1, -1), (4, -1, -1)) == (-2, -3, -5)
    assert ex.is_zero(ex.wedge2((3, -1, 7), (3, -1, 7)))


@given(vec3, vec3)
def test_wedge_antisymmetry(u, w):
    assert ex.wedge2(u, w) == ex.scale(-1, ex.wedge2(w, u))


@given(mat3, vec3, vec3)
def test_wedge_equivariance(g, u, w):
    assume(ex.det3(g) != 0)
    g = ex.qmat(g)
    d = ex.det3(g)
    g = (tuple(x / d for x in g[0]),) + g[1:]  # force det 1
    assert ex.det3(g) == 1
    lhs = ex.wedge2(ex.matvec(g, u), ex.matvec(g, w))
    rhs = ex.matvec(ex.inv_transpose3(g), ex.wedge2(u, w))
    assert lhs == rhs


@pytest.mark.parametrize("v, expected", [
    ((1, 1, 1), {(1, -1, 0), (0, 1, -1)}),
    ((0, 0, 1), {(1, 0, 0), (0, 1, 0)}),
    ((2, 3, 5), {(1, 1, -1), (4, -1, -1)}),
])
def test_kernel_examples(v, expected):
    w1, w2 = ex.integer_kernel_basis(v)
    assert ex.dot(w1, v) == 0 and ex.dot(w2, v) == 0
    c = ex.wedge2(w1, w2)
    assert c == v or c == ex.scale(-1, v)
    # the expected basis spans the same lattice
    e1, e2 = sorted(expected)
    c, _ = ex.lattice2_eq_homothety((w1, w2), (e1, e2))
    assert c == 1


def test_kernel_rejects_zero():
    with pytest.raises(ValueError):
        ex.integer_kernel_basis((0, 0, 0))


coord = st.integers(-50, 50)


@settings(max_examples=1000)
@given(st.tuples(coord, coord, coord))
def test_kernel_cross_product_on_primitive_vectors(v):
    assume(any(v) and ex.content(v) == 1)
    w1, w2 = ex.integer_kernel_basis(v)
    assert ex.dot(w1, v) == 0 and ex.dot(w2, v) == 0
    assert ex.wedge2(w1, w2) in (v, ex.scale(-1, v))


@given(st.tuples(coord, coord, coord))
def test_kernel_of_imprimitive_vector(v):
    assume(any(v))
    w1, w2 = ex.integer_kernel_basis(v)
    g = ex.content(v)
    prim = tuple(x // g for x in v)
    assert ex.wedge2(w1, w2) in (prim, ex.scale(-1, prim))


def _int_det(rows):
    """Exact determinant by fraction-valued elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n, det = len(a), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if a[r][i] != 0), None)
        if p is None:
            return 0
        if p != i:
            a[i], a[p] = a[p], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            a[r] = [x - f * y for x, y in zip(a[r], a[i])]
    return det


@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=5))
def test_unimodular_completion(v):
    assume(any(v))
    g, cols = ex.unimodular_completion(v)
    assert g == math.gcd(*v)
    assert sum(a * b for a, b in zip(v, cols[0])) == g
    for c in cols[1:]:
        assert sum(a * b for a, b in zip(v, c)) == 0
    assert abs(_int_det([list(c) for c in cols])) == 1


def test_homothety_examples():
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert ex.lattice2_eq_homothety((e1, e2), ((2, 0, 0), (0, 2, 0))) == (2, ((1, 0), (0, 1)))
    assert ex.lattice2_eq_homothety((e1, e2), (e1, (0, 1, 1))) is None
    c, M = ex.lattice2_eq_homothety(((1, 2, 2), (0, 1, 2)), ((1, 1, 0), (0, 1, 2)))
    assert c == 1 and abs(ex.det2(M)) == 1


def test_homothety_rejects_rank_deficient():
    with pytest.raises(ValueError):
        ex.lattice2_eq_homothety(((1, 2, 3), (2, 4, 6)), ((1, 0, 0), (0, 1, 0)))


def _apply(A, c, M):
    (a, b), (cc, d) = M
    u, w = ex.qvec(A[0]), ex.qvec(A[1])
    return (ex.scale(c, ex.add(ex.scale(a, u), ex.scale(cc, w))),
            ex.scale(c, ex.add(ex.scale(b, u), ex.scale(d, w))))


@given(vec3, vec3, st.tuples(small, small, small, small),
       st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
def test_homothety_witness_reconstructs(u, w, m, c):
    assume(not ex.is_zero(ex.wedge2(u, w)))
    M = ((m[0], m[1]), (m[2], m[3]))
    assume(abs(ex.det2(M)) >= 1)
    B = _apply((u, w), c, M)
    wit = ex.lattice2_eq_homothety((u, w), B)
    if abs(ex.det2(M)) == 1:
        assert wit is not None
        c2, M2 = wit
        assert _apply((u, w), c2, M2) == tuple(B)
    # reflexive and symmetric
    assert ex.lattice2_eq_homothety((u, w), (u, w))[0] == 1
    assert (wit is None) == (ex.lattice2_eq_homothety(B, (u, w)) is None)


# all integer 2x2 matrices with entries in [-10, 10] and det +-1
_R = np.arange(-10, 11)
_ALL = np.array(list(itertools.product(_R, repeat=4)))
_UNI = _ALL[np.abs(_ALL[:, 0] * _ALL[:, 3] - _ALL[:, 1] * _ALL[:, 2]) == 1]


def _brute(A, B):
    """Search over unimodular M with |entries| <= 10 for B = c A M."""
    wa, wb = ex.wedge2(*A), ex.wedge2(*B)
    if not ex.parallel(wa, wb):
        return False
    k = max(range(3), key=lambda i: abs(wa[i]))
    ratio = abs(Fraction(wb[k], wa[k]))
    c = Fraction(math.isqrt(ratio.numerator), math.isqrt(ratio.denominator))
    if c * c != ratio:
        return False
    a = np.array(A, dtype=np.int64).T * c.numerator  # 3x2 columns
    b = np.array(B, dtype=np.int64).T * c.denominator
    col1 = a[:, :1] * _UNI[:, 0] + a[:, 1:] * _UNI[:, 2]
    col2 = a[:, :1] * _UNI[:, 1] + a[:, 1:] * _UNI[:, 3]
    hit = (col1 == b[:, :1]).all(0) & (col2 == b[:, 1:]).all(0)
    return bool(hit.any())


@settings(max_examples=60)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
       st.tuples(*[st.integers(-3, 3)] * 4), st.sampled_from([1, 2, 3]))
def test_homothety_agrees_with_brute_force(u, w, m, c):
    assume(not ex.is_zero(ex.wedge2(u, w)))
    M = ((m[0], m[1]), (m[2], m[3]))
    assume(ex.det2(M) != 0)
    B = tuple(ex.as_int_vec(x) for x in _apply((u, w), c, M))
    assert (ex.lattice2_eq_homothety((u, w), B) is not None) == _brute((u, w), B)


def test_exact_flavor_and_sqrt():
    assert ex.flavor_of(Fraction(1, 2), 3) == "exact"
    assert ex.flavor_of(1.5) == "float"
    assert ex.flavor_of(mpmath.mpf(2)) == "mpf"
    assert ex.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert ex.inv3(ex.qmat(((2, 0, 0), (0, 1, 0), (0, 0, 1)))) == ex.qmat(((Fraction(1, 2), 0, 0), (0, 1, 0), (0, 0, 1)))


@given(mat3)
def test_inverse_is_exact(g):
    assume(ex.det3(g) != 0)
    assert ex.mat_eq(ex.matmul(ex.inv3(g), g), ex.IDENTITY3)


@given(vec3, vec3)
def test_gauss_reduce_exact_is_reduced(u, w):
    assume(not ex.is_zero(ex.wedge2(u, w)))
    a, b = ex.gauss_reduce_exact(u, w)
    assert ex.norm2(a) <= ex.norm2(b)
    assert 2 * abs(ex.dot(a, b)) <= ex.norm2(a)
    assert ex.wedge2(a, b) in (ex.wedge2(u, w), ex.scale(-1, ex.wedge2(u, w)))


_entry = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@given(st.lists(_entry, min_size=9, max_size=9), st.lists(_entry, min_size=9, max_size=9))
def test_matmul_fast_path_matches_general(xs, ys):
    a = tuple(tuple(xs[3 * i:3 * i + 3]) for i in range(3))
    b = tuple(tuple(ys[3 * i:3 * i + 3]) for i in range(3))
    slow = tuple(tuple(sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3)) for i in range(3))
    assert ex.matmul(a, b) == slow


def test_matmul_non_square_shapes():
    a = ((1, 2), (3, 4), (5, 6))
    b = ((1, 0, 2), (0, 1, 3))
    assert ex.matmul(a, b) == ((1, 2, 8), (3, 4, 18), (5, 6, 28))
    assert ex.matmul(b, a) == ((11, 14), (18, 22))
