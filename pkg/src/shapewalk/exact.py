"""Exact scalar / vector / matrix helpers over Python numbers.

Vectors are 3-tuples and matrices are tuples of row tuples.  Everything is
generic over the scalar type: ``fractions.Fraction`` (and ``int``) gives the
exact flavor, ``float`` the double flavor and ``mpmath.mpf`` the configurable
precision flavor.  Only the decision procedures (kernels, homothety) insist
on exact input.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import mpmath

Vec = tuple
Mat = tuple

IDENTITY3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class NotExactError(TypeError):
    """An exact decision procedure received inexact scalars."""


def flavor_of(*values) -> str:
    """'exact', 'mpf' or 'float' for a collection of scalars (nested ok)."""
    kinds = set()

    def walk(x):
        if isinstance(x, (tuple, list)):
            for y in x:
                walk(y)
        elif isinstance(x, bool):
            kinds.add("exact")
        elif isinstance(x, Rational):
            kinds.add("exact")
        elif isinstance(x, mpmath.mpf):
            kinds.add("mpf")
        else:
            kinds.add("float")

    walk(values)
    if "mpf" in kinds:
        return "mpf"
    if "float" in kinds:
        return "float"
    return "exact"


def is_exact(*values) -> bool:
    return flavor_of(*values) == "exact"


def q(x) -> Fraction:
    """Coerce an int/Fraction/decimal string to a normalized Fraction."""
    if isinstance(x, float):
        raise NotExactError(f"refusing to coerce float {x!r} to an exact rational")
    return Fraction(x)


def qvec(v: Sequence) -> Vec:
    return tuple(q(x) for x in v)


def qmat(m: Sequence[Sequence]) -> Mat:
    return tuple(tuple(q(x) for x in row) for row in m)


def fvec(v: Sequence) -> Vec:
    return tuple(float(x) for x in v)


def fmat(m: Sequence[Sequence]) -> Mat:
    return tuple(tuple(float(x) for x in row) for row in m)


def sqrt(x):
    """Square root in the flavor of ``x``; rationals fall back to float."""
    if isinstance(x, mpmath.mpf):
        return mpmath.sqrt(x)
    return math.sqrt(x)


# -- vectors -----------------------------------------------------------------

def add(u: Vec, w: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, w))


def sub(u: Vec, w: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, w))


def scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def dot(u: Vec, w: Vec):
    return u[0] * w[0] + u[1] * w[1] + u[2] * w[2]


def norm2(u: Vec):
    return dot(u, u)


def norm(u: Vec):
    return sqrt(norm2(u))


def wedge2(u: Vec, w: Vec) -> Vec:
    """Coordinates of u^w in the basis (e2^e3, e3^e1, e1^e2), i.e. u x w."""
    return (
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    )


def is_zero(u: Vec) -> bool:
    return all(a == 0 for a in u)


def parallel(u: Vec, w: Vec) -> bool:
    return is_zero(wedge2(u, w))


# -- matrices ----------------------------------------------------------------

def matvec(m: Mat, v: Vec) -> Vec:
    return tuple(row[0] * v[0] + row[1] * v[1] + row[2] * v[2] for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    if len(a) == 3 and len(a[0]) == 3 and len(b) == 3 and len(b[0]) == 3:
        (a0, a1, a2), (a3, a4, a5), (a6, a7, a8) = a
        (b0, b1, b2), (b3, b4, b5), (b6, b7, b8) = b
        return ((a0 * b0 + a1 * b3 + a2 * b6, a0 * b1 + a1 * b4 + a2 * b7, a0 * b2 + a1 * b5 + a2 * b8),
                (a3 * b0 + a4 * b3 + a5 * b6, a3 * b1 + a4 * b4 + a5 * b7, a3 * b2 + a4 * b5 + a5 * b8),
                (a6 * b0 + a7 * b3 + a8 * b6, a6 * b1 + a7 * b4 + a8 * b7, a6 * b2 + a7 * b5 + a8 * b8))
    n, k, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p))
        for i in range(n)
    )


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def det2(m: Mat):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det3(m: Mat):
    return dot(m[0], wedge2(m[1], m[2]))


def adjugate3(m: Mat) -> Mat:
    """adj(m) with m @ adj(m) = det(m) I."""
    c0, c1, c2 = transpose(m)
    # row i of adj is the cross product of the other two columns (cyclic)
    return (wedge2(c1, c2), wedge2(c2, c0), wedge2(c0, c1))


def inv3(m: Mat) -> Mat:
    d = det3(m)
    if d == 0:
        raise ZeroDivisionError("singular 3x3 matrix")
    adj = adjugate3(m)
    if is_exact(m):
        return tuple(tuple(Fraction(x) / d for x in row) for row in adj)
    return tuple(tuple(x / d for x in row) for row in adj)


def inv_transpose3(m: Mat) -> Mat:
    return transpose(inv3(m))


def inv2(m: Mat) -> Mat:
    d = det2(m)
    if d == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    a, b = m[0]
    c, e = m[1]
    if is_exact(m):
        d = Fraction(d)
    return ((e / d, -b / d), (-c / d, a / d))


def mat_eq(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_integral(x) -> bool:
    return isinstance(x, Rational) and Fraction(x).denominator == 1


def as_int_vec(v: Vec) -> tuple[int, ...]:
    if not all(is_integral(x) for x in v):
        raise ValueError(f"expected integer entries, got {v}")
    return tuple(int(x) for x in v)


# -- integer lattice algorithms ---------------------------------------------

def content(v: Sequence[int]) -> int:
    return math.gcd(*(int(x) for x in v))


def unimodular_completion(v: Sequence[int]) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Return (g, U) with U unimodular (columns u_k) and v . u_0 = g = gcd(v),
    v . u_k = 0 for k > 0.

    Column-style Hermite reduction of the 1 x n row ``v``: Euclid's algorithm
    is run on the entries while the same column operations act on U.
    """
    row = [int(x) for x in v]
    n = len(row)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]  # cols[j] = column j
    while True:
        nz = [j for j in range(n) if row[j] != 0]
        if len(nz) <= 1:
            break
        p = min(nz, key=lambda j: abs(row[j]))
        for j in nz:
            if j == p:
                continue
            f = row[j] // row[p]
            row[j] -= f * row[p]
            cols[j] = [a - f * b for a, b in zip(cols[j], cols[p])]
    nz = [j for j in range(n) if row[j] != 0]
    if not nz:
        raise ValueError("zero vector has no completion")
    p = nz[0]
    if row[p] < 0:
        row[p] = -row[p]
        cols[p] = [-a for a in cols[p]]
    order = [p] + [j for j in range(n) if j != p]
    return row[p], tuple(tuple(cols[j]) for j in order)


def gauss_reduce_exact(u: Vec, w: Vec) -> tuple[Vec, Vec]:
    """Lagrange-Gauss reduction with exact arithmetic (any exact inner product)."""
    if norm2(u) > norm2(w):
        u, w = w, u
    integral = all(type(x) is int for x in u + w)
    while True:
        nu = norm2(u)
        if integral:
            k = (2 * dot(u, w) + nu) // (2 * nu)
        else:
            k = math.floor(Fraction(dot(u, w)) / nu + Fraction(1, 2))
        if k:
            w = sub(w, scale(k, u))
        if norm2(w) < nu:
            u, w = w, u
        else:
            return u, w


def integer_kernel_basis(v: Sequence[int]) -> tuple[Vec, Vec]:
    """Basis of the rank-2 lattice Z^3 cap v^perp for a nonzero integer v.

    The basis is Gauss-reduced so it is short; w1 x w2 = +-v/gcd(v).
    """
    v = as_int_vec(tuple(v))
    if is_zero(v):
        raise ValueError("integer_kernel_basis: zero vector")
    _, cols = unimodular_completion(v)
    w1, w2 = gauss_reduce_exact(cols[1], cols[2])
    return tuple(int(x) for x in w1), tuple(int(x) for x in w2)


# -- homothety of exact 2-lattices ------------------------------------------

def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _coords_in_basis(a1: Vec, a2: Vec, b: Vec) -> tuple[Fraction, Fraction] | None:
    """Exact (x, y) with x a1 + y a2 = b, or None when b is off the plane."""
    n = wedge2(a1, a2)
    # pick the coordinate pair with the largest nonzero minor
    idx = max(range(3), key=lambda k: abs(n[k]))
    i, j = [(1, 2), (2, 0), (0, 1)][idx]
    d = Fraction(n[idx])
    x = Fraction(b[i] * a2[j] - b[j] * a2[i]) / d
    y = Fraction(a1[i] * b[j] - a1[j] * b[i]) / d
    if add(scale(x, a1), scale(y, a2)) != tuple(Fraction(c) for c in b):
        return None
    return x, y


def lattice2_eq_homothety(A: tuple[Vec, Vec], B: tuple[Vec, Vec]):
    """Decide [A] = [B] exactly for rational 2-lattice bases.

    Returns ``(c, M)`` with c > 0 rational and M a unimodular integer 2x2
    matrix such that (b1, b2) = c * (a1, a2) @ M, or ``None``.
    """
    a1, a2 = (qvec(x) for x in A)
    b1, b2 = (qvec(x) for x in B)
    wa, wb = wedge2(a1, a2), wedge2(b1, b2)
    if is_zero(wa) or is_zero(wb):
        raise ValueError("rank-deficient basis")
    if not parallel(wa, wb):
        return None
    k = max(range(3), key=lambda i: abs(wa[i]))
    r = wb[k] / wa[k]
    c = _rational_sqrt(abs(r))
    if c is None:
        return None
    m1 = _coords_in_basis(a1, a2, scale(1 / c, b1))
    m2 = _coords_in_basis(a1, a2, scale(1 / c, b2))
    if m1 is None or m2 is None:
        return None
    M = ((m1[0], m2[0]), (m1[1], m2[1]))
    if not all(is_integral(x) for row in M for x in row):
        return None
    if abs(det2(M)) != 1:
        return None
    return c, tuple(tuple(int(x) for x in row) for row in M)
