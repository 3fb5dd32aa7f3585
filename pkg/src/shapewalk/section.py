"""The Gamma_0-equivariant section over the circle of isotropic planes.

``lambda_t`` is the explicit family t -> span{e1 + t e2, e2 + 2t e3} (with
t = oo giving span{e2, 2e3}); on the projective line the generators
u+(2), u-(2) act through g1 = [[1,0],[2,1]] and g2 = [[1,1],[0,1]].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact as ex
from .groups import INF, Q_GRAM, make_u_minus, make_u_plus, moebius_act
from .lattice2 import Lattice2, ShapePoint, shape

G1 = ((1, 0), (2, 1))
G2 = ((1, 1), (0, 1))


class EquivarianceError(AssertionError):
    """An exact equivariance identity failed."""


class NotIsotropicError(ValueError):
    pass


def _is_inf(t) -> bool:
    return t == INF or t == -INF


def lambda_t(t) -> Lattice2:
    if _is_inf(t):
        return Lattice2((0, 1, 0), (0, 0, 2))
    if isinstance(t, float):
        return Lattice2((1.0, t, 0.0), (0.0, 1.0, 2 * t))
    t = Fraction(t)
    return Lattice2((Fraction(1), t, Fraction(0)), (Fraction(0), Fraction(1), 2 * t))


@dataclass(frozen=True)
class SectionPoint:
    t: object
    lattice: Lattice2


def psi(t) -> SectionPoint:
    return SectionPoint(t, lambda_t(t))


@dataclass(frozen=True)
class IsotropicPlane:
    """A plane given by a (Euclidean) normal vector, up to scale."""

    normal: tuple

    def basis(self):
        n = self.normal
        if ex.is_exact(n):
            n = ex.qvec(n)
            den = math.lcm(*(x.denominator for x in n))
            return ex.integer_kernel_basis(tuple(int(x * den) for x in n))
        # float: two vectors orthogonal to n
        k = min(range(3), key=lambda i: abs(n[i]))
        e = tuple(float(i == k) for i in range(3))
        a = ex.wedge2(n, e)
        b = ex.wedge2(n, a)
        return a, b


def restricted_gram(n) -> tuple:
    """Gram matrix of Q restricted to the plane with normal n."""
    a, b = IsotropicPlane(tuple(n)).basis()
    B = lambda x, y: ex.dot(x, ex.matvec(Q_GRAM, y))
    return ((B(a, a), B(a, b)), (B(a, b), B(b, b)))


def is_isotropic(n, tol: float = 1e-9) -> bool:
    """Q restricted to the plane n^perp is degenerate (plane tangent to the light cone)."""
    if ex.is_zero(n):
        raise ValueError("zero normal")
    G = restricted_gram(n)
    d = ex.det2(G)
    if ex.is_exact(n):
        return d == 0
    scale = max(abs(x) for row in G for x in row) or 1.0
    return abs(d) <= tol * scale * scale


def plane_of(lat: Lattice2) -> IsotropicPlane:
    return IsotropicPlane(lat.normal())


def equivariance_check(t, side: str):
    """Verify u+ Lambda_t ~ Lambda_{g1 t} (side 'plus') or u- Lambda_t ~ Lambda_{g2 t}.

    Exact; returns the homothety witness ``(c, M)`` and raises
    :class:`EquivarianceError` when the identity fails.
    """
    if isinstance(t, float) and not _is_inf(t):
        raise ex.NotExactError("equivariance_check needs rational t or oo")
    if side == "plus":
        g, m = make_u_plus(2), G1
    elif side == "minus":
        g, m = make_u_minus(2), G2
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    left = lambda_t(t).act(g)
    right = lambda_t(moebius_act(m, t))
    wit = ex.lattice2_eq_homothety(left.basis, right.basis)
    if wit is None:
        raise EquivarianceError(f"{side} side fails at t={t}")
    return wit


def word_check(letters: Sequence[str], t):
    """Equivariance along a word in {'+', '-', '+i', '-i'} (i = inverse).

    The word acts right-to-left like a matrix product; returns the witness.
    """
    g, m = ex.IDENTITY3, ((1, 0), (0, 1))
    table = {
        "+": (make_u_plus(2), G1),
        "-": (make_u_minus(2), G2),
        "+i": (make_u_plus(-2), ((1, 0), (-2, 1))),
        "-i": (make_u_minus(-2), ((1, -1), (0, 1))),
    }
    for letter in letters:
        gl, ml = table[letter]
        g = ex.matmul(g, gl)
        m = ex.matmul(m, ml)
    left = lambda_t(t).act(g)
    right = lambda_t(moebius_act(m, t))
    wit = ex.lattice2_eq_homothety(left.basis, right.basis)
    if wit is None:
        raise EquivarianceError(f"word {''.join(letters)} fails at t={t}")
    return wit


def zeta(p: IsotropicPlane | Sequence, tol: float = 1e-9) -> Lattice2:
    """The section: the unique Lambda_t whose plane is p."""
    n = p.normal if isinstance(p, IsotropicPlane) else tuple(p)
    if not is_isotropic(n, tol):
        raise NotIsotropicError(f"plane with normal {n} is not isotropic")
    exact = ex.is_exact(n)
    n = ex.qvec(n) if exact else ex.fvec(n)
    scale = max(abs(x) for x in n)
    if (n[2] == 0) if exact else abs(n[2]) <= tol * scale:
        return lambda_t(INF)
    t = -n[1] / (2 * n[2])
    # consistency with the parametrization n ~ (2t^2, -2t, 1)
    resid = n[0] - 2 * t * t * n[2]
    if (resid != 0) if exact else abs(resid) > 1e-6 * scale:
        raise NotIsotropicError(f"normal {n} is off the parametrized circle")
    return lambda_t(t)


def zeta_parameter(p) -> object:
    n = p.normal if isinstance(p, IsotropicPlane) else tuple(p)
    lat = zeta(n)
    if lat.u == (0, 1, 0):
        return INF
    return lat.u[1]


def tan_grid(n: int) -> list[float]:
    """n parameters t = tan(theta), theta evenly spaced in (-pi/2, pi/2)."""
    return [math.tan(-math.pi / 2 + math.pi * (k + 0.5) / n) for k in range(n)]


def curve_sample(grid: Iterable) -> list[tuple[object, ShapePoint]]:
    """Shapes of Lambda_t over ``grid`` (oo appended when absent)."""
    grid = list(grid)
    if not any(_is_inf(t) for t in grid):
        grid.append(INF)
    return [(t, shape(lambda_t(t))) for t in grid]
