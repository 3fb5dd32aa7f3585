"""Rank-2 discrete subgroups of R^3 up to scaling: shapes, heights, cocycles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact as ex
from .exact import Vec

MAX_REDUCTION_STEPS = 10_000
_EPS = 1e-12


class RankError(ValueError):
    """Basis vectors are linearly dependent."""


class ReductionError(ArithmeticError):
    """Modular reduction failed to terminate (float pathology near the real axis)."""


@dataclass(frozen=True)
class Lattice2:
    """span_Z{u, w} in R^3.  Scalars may be exact, float or mpf."""

    u: Vec
    w: Vec

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "w", tuple(self.w))
        if ex.is_zero(ex.wedge2(self.u, self.w)):
            raise RankError(f"rank-deficient basis {self.u}, {self.w}")

    @classmethod
    def exact(cls, u, w) -> "Lattice2":
        return cls(ex.qvec(u), ex.qvec(w))

    @classmethod
    def floating(cls, u, w) -> "Lattice2":
        return cls(ex.fvec(u), ex.fvec(w))

    @property
    def flavor(self) -> str:
        return ex.flavor_of(self.u, self.w)

    @property
    def basis(self) -> tuple[Vec, Vec]:
        return self.u, self.w

    def wedge(self) -> Vec:
        return ex.wedge2(self.u, self.w)

    def gram(self):
        u, w = self.u, self.w
        return ((ex.dot(u, u), ex.dot(u, w)), (ex.dot(u, w), ex.dot(w, w)))

    def covolume(self):
        return ex.norm(self.wedge())

    def normal(self) -> Vec:
        """Normal direction of the spanned plane (not normalized)."""
        return self.wedge()

    def act(self, g) -> "Lattice2":
        return Lattice2(ex.matvec(g, self.u), ex.matvec(g, self.w))

    def scaled(self, c) -> "Lattice2":
        return Lattice2(ex.scale(c, self.u), ex.scale(c, self.w))

    def change_basis(self, M) -> "Lattice2":
        """Basis (u, w) @ M for a 2x2 integer matrix M."""
        (a, b), (c, d) = M
        return Lattice2(
            ex.add(ex.scale(a, self.u), ex.scale(c, self.w)),
            ex.add(ex.scale(b, self.u), ex.scale(d, self.w)),
        )

    def contains(self, v: Vec) -> bool:
        """Exact membership test (exact flavor only)."""
        if not ex.is_exact(self.u, self.w, v):
            raise ex.NotExactError("membership is decided in exact flavor only")
        c = ex._coords_in_basis(ex.qvec(self.u), ex.qvec(self.w), ex.qvec(v))
        return c is not None and all(ex.is_integral(x) for x in c)

    def as_float(self) -> "Lattice2":
        return Lattice2(ex.fvec(self.u), ex.fvec(self.w))


@dataclass(frozen=True)
class ShapePoint:
    z: complex
    reduced: bool = True
    reduction_word: tuple = field(default=(), compare=False)

    @property
    def re(self) -> float:
        return self.z.real

    @property
    def im(self) -> float:
        return self.z.imag


def apply_word(z: complex, word: Sequence) -> complex:
    """Undo a reduction: map the reduced point back along ``word``.

    ``word`` lists the moves applied during reduction, ("T", n) for
    z -> z + n and ("S",) for z -> -1/z; they are inverted in reverse order.
    """
    for move in reversed(word):
        if move[0] == "T":
            z = z - move[1]
        else:
            z = -1 / z
    return z


def reduce_fundamental(z: complex) -> tuple[complex, tuple]:
    """Move z into the standard PSL2(Z) fundamental domain.

    Output satisfies -1/2 <= Re < 1/2 and |z| >= 1, with Re >= 0 on the unit
    circle arc.  Returns the reduced point and the word of moves applied.
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError(f"reduce_fundamental needs Im z > 0, got {z}")
    word = []
    for _ in range(MAX_REDUCTION_STEPS):
        n = -math.floor(z.real + 0.5)
        if n:
            z = z + n
            word.append(("T", n))
        if abs(z) < 1 - _EPS:
            z = -1 / z
            word.append(("S",))
            continue
        break
    else:
        raise ReductionError(f"no convergence after {MAX_REDUCTION_STEPS} steps")
    # boundary conventions
    if z.real >= 0.5:
        z = z - 1
        word.append(("T", -1))
    if abs(abs(z) - 1) <= _EPS and z.real < 0:
        z = -1 / z
        word.append(("S",))
    return z, tuple(word)


def canonical_o2(z: complex) -> complex:
    """Pick the Re >= 0 sheet of the reflection quotient."""
    return complex(-z.real, z.imag) if z.real < 0 else z


def shape_from_gram(a, b, c) -> ShapePoint:
    """Shape of a lattice with Gram matrix [[a, b], [b, c]]."""
    det = a * c - b * b
    if not det > 0:
        raise RankError("degenerate Gram matrix")
    # exact Grams keep the determinant exact; only the final ratio is rounded
    z0 = complex(float(Fraction(b, 1) / a) if ex.is_exact(a, b) else float(b / a),
                 math.sqrt(float(Fraction(det) / (Fraction(a) ** 2)) if ex.is_exact(a, det)
                           else float(det / (a * a))))
    z, word = reduce_fundamental(z0)
    return ShapePoint(canonical_o2(z), True, word)


def gauss_reduce(lat: Lattice2) -> tuple[Vec, Vec]:
    """Lagrange-Gauss reduced basis (|u| <= |w|, |<u,w>| <= |u|^2/2).

    Runs in the lattice's own scalar type so exact and mpf inputs keep their
    precision.
    """
    u, w = lat.u, lat.w
    if lat.flavor == "exact":
        return ex.gauss_reduce_exact(u, w)
    if ex.norm2(u) > ex.norm2(w):
        u, w = w, u
    for _ in range(MAX_REDUCTION_STEPS):
        nu = ex.norm2(u)
        k = int(math.floor(float(ex.dot(u, w) / nu) + 0.5))
        if k:
            w = ex.sub(w, ex.scale(k, u))
        if ex.norm2(w) < nu:
            u, w = w, u
        else:
            return u, w
    raise ReductionError("Gauss reduction did not terminate")


def shape(lat: Lattice2) -> ShapePoint:
    """Reduced, reflection-canonical shape of ``lat``."""
    u, w = gauss_reduce(lat)
    return shape_from_gram(ex.dot(u, u), ex.dot(u, w), ex.dot(w, w))


def shortest_vector(lat: Lattice2) -> Vec:
    return gauss_reduce(lat)[0]


def height(lat: Lattice2) -> float:
    """u_X = covolume^(1/2) / (length of a shortest nonzero vector)."""
    v = shortest_vector(lat)
    return math.sqrt(float(lat.covolume())) / float(ex.norm(v))


def normalized_length(lat: Lattice2, v: Vec) -> float:
    return float(ex.norm(v)) / math.sqrt(float(lat.covolume()))


def expansion_cocycle(g, lat: Lattice2, v: Vec) -> float:
    """Stretch factor N_{g lat}(g v) / N_lat(v) of a lattice vector under g."""
    if ex.is_zero(v):
        raise ValueError("expansion_cocycle: v must be nonzero")
    gv = ex.matvec(g, v)
    wedge = lat.wedge()
    gwedge = ex.wedge2(ex.matvec(g, lat.u), ex.matvec(g, lat.w))
    stretch = float(ex.norm(gv)) / float(ex.norm(v))
    area = float(ex.norm(gwedge)) / float(ex.norm(wedge))
    return stretch / math.sqrt(area)


def rho_line(lat: Lattice2, direction: Vec) -> float:
    """|lat cap l| / covolume^(1/2) for the line l = R * direction.

    Decided exactly: the direction must lie in the plane of ``lat`` and meet
    the lattice nontrivially.
    """
    if not ex.is_exact(lat.u, lat.w, direction):
        raise ex.NotExactError("rho_line is decided in exact flavor only")
    d = ex.qvec(direction)
    if ex.is_zero(d):
        raise ValueError("zero direction")
    c = ex._coords_in_basis(ex.qvec(lat.u), ex.qvec(lat.w), d)
    if c is None:
        raise ValueError("direction does not lie in the plane of the lattice")
    # primitive lattice vector on the line: clear denominators, divide content
    x, y = c
    den = math.lcm(x.denominator, y.denominator)
    a, b = int(x * den), int(y * den)
    g = math.gcd(a, b)
    a, b = a // g, b // g
    prim = ex.add(ex.scale(a, lat.u), ex.scale(b, lat.w))
    return float(ex.norm(prim)) / math.sqrt(float(lat.covolume()))
