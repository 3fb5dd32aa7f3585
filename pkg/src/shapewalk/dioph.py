"""Diophantine side: continued fractions, directional 2-lattices, the
diagonal-flow height scan, totally real cubic fields and their units.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numba
import numpy as np

from . import exact as ex
from ._kernels import _gauss, _observe
from .lattice2 import Lattice2, ShapePoint, height, shape

DEFAULT_DPS = 50


# -- continued fractions --------------------------------------------------------

@dataclass(frozen=True)
class QuadraticSurd:
    """(P + sqrt(D)) / Q with D a positive non-square integer."""

    P: int
    D: int
    Q: int

    def __post_init__(self):
        r = math.isqrt(self.D)
        if self.D <= 0 or r * r == self.D:
            raise ValueError("D must be a positive non-square")
        if self.Q == 0:
            raise ZeroDivisionError("Q must be nonzero")

    def __float__(self):
        return (self.P + math.sqrt(self.D)) / self.Q

    def to_mpf(self, dps: int = DEFAULT_DPS):
        with mpmath.workdps(dps):
            return (self.P + mpmath.sqrt(self.D)) / self.Q

    def __str__(self):
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


@dataclass(frozen=True)
class Interval:
    """Closed rational enclosure [lo, hi] of a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("empty interval")


def enclosure(x, ulps: int = 4) -> Interval:
    """Rational interval around a float or mpf, widened by ``ulps`` units."""
    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise ValueError("non-finite input")
        sign, man, exp, _ = x._mpf_
        man = -int(man) if sign else int(man)
        centre = Fraction(man) * Fraction(2) ** exp
        # relative rounding unit of the working precision
        rad = abs(centre) * Fraction(ulps, 2 ** (mpmath.mp.prec - 1)) if man else Fraction(0)
        return Interval(centre - rad, centre + rad)
    x = float(x)
    rad = Fraction(math.ulp(x)) * ulps
    return Interval(Fraction(x) - rad, Fraction(x) + rad)


@dataclass
class CFExpansion:
    digits: list  # a0; a1, a2, ...
    certified: int
    descriptor: str
    terminated: bool = False  # rational input fully expanded
    exhausted: bool = False  # precision ran out before n terms

    def convergents(self) -> list[tuple[int, int]]:
        return convergents(self.digits)

    @property
    def max_partial_quotient(self) -> int:
        return max(self.digits[1:], default=0)

    def as_dict(self) -> dict:
        return {"input": self.descriptor, "digits": self.digits, "certified": self.certified,
                "terminated": self.terminated, "precision_exhausted": self.exhausted}


def _floor_surd(P: int, D: int, Q: int) -> int:
    r = math.isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return -((P + r) // -Q) - 1


def _cf_rational(x: Fraction, n: int) -> tuple[list[int], bool]:
    out = []
    num, den = x.numerator, x.denominator
    while len(out) < n:
        a, r = divmod(num, den)
        out.append(a)
        if r == 0:
            return out, True
        num, den = den, r
    return out, False


def _cf_surd(s: QuadraticSurd, n: int) -> list[int]:
    P, D, Q = s.P, s.D, s.Q
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    out = []
    for _ in range(n):
        a = _floor_surd(P, D, Q)
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


def _cf_interval(iv: Interval, n: int) -> tuple[list[int], bool, bool]:
    """Digits shared by every point of the enclosure."""
    lo, hi = iv.lo, iv.hi
    out = []
    while len(out) < n:
        a = math.floor(lo)
        if math.floor(hi) != a:
            return out, False, True
        if lo == hi:
            if lo == a:
                out.append(a)
                return out, True, False
        elif lo == a:
            # remainder could be zero inside the enclosure: stop after a
            out.append(a)
            return out, False, True
        out.append(a)
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return out, False, False


def cf_expand(x, n: int) -> CFExpansion:
    """First ``n`` partial quotients of x, every emitted digit certified.

    ``x`` may be an int/Fraction (exact), a :class:`QuadraticSurd` (exact
    periodic algorithm), an :class:`Interval`, or a float/mpf which is
    enclosed in a few-ulp interval first.  When the enclosure no longer fixes
    the next digit the expansion stops with ``exhausted`` set.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        digits, done = _cf_rational(Fraction(x), n)
        return CFExpansion(digits, len(digits), str(Fraction(x)), terminated=done)
    if isinstance(x, QuadraticSurd):
        digits = _cf_surd(x, n)
        return CFExpansion(digits, n, str(x))
    desc = None
    if not isinstance(x, Interval):
        desc = mpmath.nstr(x, 20) if isinstance(x, mpmath.mpf) else repr(float(x))
        x = enclosure(x)
    digits, done, exhausted = _cf_interval(x, n)
    return CFExpansion(digits, len(digits), desc or f"[{float(x.lo)!r}, {float(x.hi)!r}]",
                       terminated=done, exhausted=exhausted)


def convergents(digits: Sequence[int]) -> list[tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, digits[0], 1
    out = [(p1, q1)]
    for a in digits[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def cf_value(digits: Sequence[int]) -> Fraction:
    """Exact value of a finite continued fraction."""
    x = Fraction(digits[-1])
    for a in reversed(digits[:-1]):
        x = a + 1 / x
    return x


# -- full-rank lattices and directional 2-lattices ---------------------------------

@dataclass(frozen=True)
class Lattice3:
    b1: tuple
    b2: tuple
    b3: tuple

    def __post_init__(self):
        for name in ("b1", "b2", "b3"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.det() == 0:
            raise ValueError("singular basis")

    @classmethod
    def standard(cls) -> "Lattice3":
        return cls((1, 0, 0), (0, 1, 0), (0, 0, 1))

    @property
    def basis(self):
        return (self.b1, self.b2, self.b3)

    def det(self):
        return ex.det3(self.basis)

    def covolume(self) -> float:
        return abs(float(self.det()))

    def point(self, coords: Sequence[int]) -> tuple:
        out = (0, 0, 0)
        for c, b in zip(coords, self.basis):
            out = ex.add(out, ex.scale(c, b))
        return out

    def coords_of(self, v) -> tuple[int, ...]:
        """Integer coordinates of a lattice point (raises if v is not in L)."""
        m = ex.transpose(self.basis)  # columns are basis vectors
        if ex.is_exact(m, v):
            c = ex.matvec(ex.inv3(m), ex.qvec(v))
            return ex.as_int_vec(c)
        c = np.linalg.solve(np.array(ex.fmat(m)), np.array(ex.fvec(v)))
        r = np.rint(c)
        if np.max(np.abs(c - r)) > 1e-9 * max(1.0, np.max(np.abs(c))):
            raise ValueError(f"{v} is not a point of the lattice")
        return tuple(int(x) for x in r)


def complete_to_basis(coords: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Unimodular integer matrix (rows = columns of V) whose first column is ``coords``."""
    g, cols = ex.unimodular_completion(coords)
    if g != 1:
        raise ValueError(f"{tuple(coords)} is not primitive (content {g})")
    U = ex.transpose(cols)  # matrix whose columns are cols
    V = ex.inv_transpose3(U)
    return tuple(tuple(int(x) for x in col) for col in ex.transpose(V))


def project_out(x, v):
    """Orthogonal projection of x onto v^perp."""
    return ex.sub(x, ex.scale(ex.dot(x, v) / ex.dot(v, v), v))


def directional(L: Lattice3, v=None, coords=None) -> Lattice2:
    """The projection of L along the L-rational line through primitive v."""
    if coords is None:
        if v is None:
            raise ValueError("give v or coords")
        coords = L.coords_of(v)
    coords = tuple(int(c) for c in coords)
    if math.gcd(*coords) != 1:
        raise ValueError(f"{coords} is not primitive in L")
    v = L.point(coords)
    cols = complete_to_basis(coords)
    y2, y3 = L.point(cols[1]), L.point(cols[2])
    if ex.is_exact(v, y2, y3):
        v, y2, y3 = ex.qvec(v), ex.qvec(y2), ex.qvec(y3)
    return Lattice2(project_out(y2, v), project_out(y3, v))


# -- diagonal flow scan ------------------------------------------------------------

@numba.njit(cache=True)
def _scan_kernel(u0, w0, t1s, t2s, out):
    u = np.empty(3)
    w = np.empty(3)
    for i in range(t1s.shape[0]):
        for j in range(t2s.shape[0]):
            a0 = math.exp(t1s[i])
            a1 = math.exp(t2s[j])
            a2 = math.exp(-t1s[i] - t2s[j])
            u[0], u[1], u[2] = a0 * u0[0], a1 * u0[1], a2 * u0[2]
            w[0], w[1], w[2] = a0 * w0[0], a1 * w0[1], a2 * w0[2]
            if not _gauss(u, w):
                out[i, j] = np.nan
                continue
            out[i, j] = _observe(u, w)[2]


@dataclass
class HeightField:
    t1: np.ndarray
    t2: np.ndarray
    heights: np.ndarray  # heights[i, j] at (t1[i], t2[j])

    @property
    def max(self) -> float:
        return float(np.nanmax(self.heights))

    @property
    def argmax(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.nanargmax(self.heights), self.heights.shape)
        return float(self.t1[i]), float(self.t2[j])


def _axis(T: float, n: int) -> np.ndarray:
    return np.array([0.0]) if n == 1 else np.linspace(-T, T, n)


def a_orbit_scan(lat: Lattice2, box=(8.0, 8.0), grid=(161, 161)) -> HeightField:
    """Heights of diag(e^t1, e^t2, e^(-t1-t2)) lat over a grid in the box."""
    if grid[0] < 1 or grid[1] < 1:
        raise ValueError("grid must be at least 1 x 1")
    t1, t2 = _axis(box[0], grid[0]), _axis(box[1], grid[1])
    out = np.empty((len(t1), len(t2)))
    # normalize first so float exponents act on an O(1) basis
    s = 1 / math.sqrt(float(lat.covolume()))
    u0 = np.array([float(x) * s for x in lat.u])
    w0 = np.array([float(x) * s for x in lat.w])
    _scan_kernel(u0, w0, t1, t2, out)
    return HeightField(t1, t2, out)


def coordinate_plane_violations(lat: Lattice2, bound: int = 50, tol: float = 1e-12) -> list:
    """Small combinations m u + n w with a (numerically) zero coordinate."""
    bad = []
    scale = max(abs(float(x)) for x in lat.u + lat.w)
    for m in range(0, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) <= (0, 0) or math.gcd(m, n) != 1:
                continue
            for i in range(3):
                val = m * lat.u[i] + n * lat.w[i]
                if (val == 0) if ex.is_exact(val) else abs(float(val)) <= tol * scale * (m + abs(n)):
                    bad.append(((m, n), i))
    return bad


def ratio_lattice(r1, r2, r3) -> Lattice2:
    """span{(r1, r2, r3), (1, 1, 1)}; its coordinate ratios are exactly r_i."""
    one = type(r1)(1) if isinstance(r1, mpmath.mpf) else 1
    return Lattice2((r1, r2, r3), (one, one, one))


def furstenberg_report(lat: Lattice2, box=(8.0, 8.0), grid=(161, 161), cf_terms: int = 20) -> dict:
    """Ratios u_i / w_i, their certified CF prefixes, and the A-orbit height scan."""
    ratios, cfs, flags = [], [], []
    for i in range(3):
        if lat.w[i] == 0:
            flags.append(f"w[{i}] = 0: ratio undefined")
            ratios.append(None)
            cfs.append(None)
            continue
        r = lat.u[i] / lat.w[i]
        ratios.append(r)
        cf = cf_expand(r, cf_terms)
        if cf.exhausted:
            flags.append(f"ratio {i + 1}: precision exhausted after {cf.certified} digits")
        cfs.append(cf)
    violations = coordinate_plane_violations(lat)
    if violations:
        flags.append(f"lattice meets a coordinate plane: {violations[:3]}")
    scan = a_orbit_scan(lat, box, grid)
    return {
        "ratios": [None if r is None else (mpmath.nstr(r, 25) if isinstance(r, mpmath.mpf) else str(r))
                   for r in ratios],
        "cf": [None if c is None else c.as_dict() for c in cfs],
        "max_partial_quotient": max((c.max_partial_quotient for c in cfs if c), default=0),
        "max_height": scan.max,
        "argmax": scan.argmax,
        "box": list(box),
        "grid": list(grid),
        "flags": flags,
    }


# -- totally real cubic fields ---------------------------------------------------

class FieldError(ValueError):
    pass


def _monic(coeffs: Sequence[int]) -> tuple[int, int, int]:
    c = [int(x) for x in coeffs]
    if len(c) == 4:
        if c[0] != 1:
            raise FieldError("polynomial must be monic")
        c = c[1:]
    if len(c) != 3:
        raise FieldError("expected x^3 + a x^2 + b x + c as (1, a, b, c) or (a, b, c)")
    return tuple(c)


def discriminant(a: int, b: int, c: int) -> int:
    """Discriminant of x^3 + a x^2 + b x + c."""
    return 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c


def _has_integer_root(a: int, b: int, c: int) -> bool:
    f = lambda x: x**3 + a * x * x + b * x + c
    if c == 0:
        return True
    return any(f(s * d) == 0 for d in range(1, abs(c) + 1) if c % d == 0 for s in (1, -1))


def sylvester_resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) from the Sylvester matrix (coefficients highest degree first)."""
    f = list(f)
    g = list(g)
    while g and g[0] == 0:
        g.pop(0)
    m, n = len(f) - 1, len(g) - 1
    if n < 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + f + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + g + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(rows) -> int:
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


@dataclass
class CubicFieldSpec:
    coeffs: tuple  # (a, b, c) of x^3 + a x^2 + b x + c
    roots: tuple  # sigma_1(alpha) > sigma_2(alpha) > sigma_3(alpha), mpf
    disc: int
    dps: int
    integral_basis: tuple  # coordinate triples over (1, alpha, alpha^2)
    lattice: Lattice3 = field(repr=False)

    def embed(self, coords: Sequence) -> tuple:
        """phi(a + b alpha + c alpha^2)."""
        with mpmath.workdps(self.dps):
            return tuple(coords[0] + coords[1] * r + coords[2] * r * r
                         for r in (mpmath.mpf(x) for x in self.roots))

    def mult_matrix(self, x: Sequence[int]) -> tuple:
        """Matrix of multiplication by x on the basis (1, alpha, alpha^2)."""
        cols = [tuple(x), self.mul(x, (0, 1, 0)), self.mul(x, (0, 0, 1))]
        return ex.transpose(cols)

    def mul(self, x: Sequence[int], y: Sequence[int]) -> tuple:
        a, b, c = self.coeffs
        prod = [0] * 5
        for i in range(3):
            for j in range(3):
                prod[i + j] += x[i] * y[j]
        # alpha^3 = -c - b alpha - a alpha^2, reduce degrees 4 and 3
        for d in (4, 3):
            k = prod[d]
            prod[d] = 0
            prod[d - 3] -= c * k
            prod[d - 2] -= b * k
            prod[d - 1] -= a * k
        return tuple(prod[:3])

    def norm(self, x: Sequence[int]) -> int:
        return ex.det3(self.mult_matrix(x))

    def inverse_unit(self, x: Sequence[int]) -> tuple:
        m = self.mult_matrix(x)
        d = ex.det3(m)
        if abs(d) != 1:
            raise FieldError(f"{tuple(x)} is not a unit (norm {d})")
        inv = ex.adjugate3(m)
        return tuple(int(inv[i][0] * d) for i in range(3))

    def power(self, x: Sequence[int], k: int) -> tuple:
        if k < 0:
            x, k = self.inverse_unit(x), -k
        out = (1, 0, 0)
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def log_embedding(self, x: Sequence[int]) -> tuple[float, float, float]:
        with mpmath.workdps(self.dps):
            return tuple(float(mpmath.log(abs(s))) for s in self.embed(x))


def cubic_field(coeffs: Sequence[int], dps: int = DEFAULT_DPS, integral_basis=None) -> CubicFieldSpec:
    """Totally real cubic field Q(alpha), alpha a root of the monic integer cubic.

    The embedded lattice is phi(Z[alpha]) unless ``integral_basis`` gives
    rational coordinate triples of a (finer) order, e.g. the maximal order.
    """
    a, b, c = _monic(coeffs)
    if _has_integer_root(a, b, c):
        raise FieldError("polynomial is reducible over Q (has an integer root)")
    disc = discriminant(a, b, c)
    if disc <= 0:
        raise FieldError(f"discriminant {disc} <= 0: not totally real")
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([1, a, b, c], maxsteps=200, extraprec=4 * dps)
        roots = sorted((mpmath.re(r) for r in roots), reverse=True)
        prod = roots[0] * roots[1] * roots[2]
        if abs(prod + c) > mpmath.mpf(10) ** (-dps // 2):
            raise FieldError("root refinement failed")
    basis = tuple(tuple(Fraction(x) for x in v) for v in (integral_basis or ((1, 0, 0), (0, 1, 0), (0, 0, 1))))
    spec = CubicFieldSpec((a, b, c), tuple(roots), disc, dps, basis, None)
    with mpmath.workdps(dps):
        vecs = [spec.embed([mpmath.mpf(x.numerator) / x.denominator for x in v]) for v in basis]
    spec.lattice = Lattice3(*vecs)
    return spec


@dataclass(frozen=True)
class UnitElement:
    coords: tuple
    norm: int
    log_embedding: tuple

    def as_dict(self) -> dict:
        return {"coords": list(self.coords), "norm": self.norm,
                "log_embedding": list(self.log_embedding)}


def unit_search(spec: CubicFieldSpec, bound: int) -> list[UnitElement]:
    """All a + b alpha + c alpha^2 with |a|, |b|, |c| <= bound and norm +-1."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    out = []
    r = range(-bound, bound + 1)
    for x in itertools.product(r, r, r):
        if x == (0, 0, 0):
            continue
        n = spec.norm(x)
        if abs(n) == 1:
            out.append(UnitElement(x, int(n), spec.log_embedding(x)))
    return out


def log_rank(units: Iterable[UnitElement], tol: float = 1e-6) -> int:
    m = np.array([u.log_embedding for u in units])
    if m.size == 0:
        return 0
    return int(np.linalg.matrix_rank(m, tol=tol))


def independent_pair(units: Sequence[UnitElement], tol: float = 1e-6):
    """The first pair (in order of increasing log-size) of independent units."""
    ordered = sorted(units, key=lambda u: (sum(abs(x) for x in u.log_embedding), u.coords))
    ordered = [u for u in ordered if max(abs(x) for x in u.log_embedding) > tol]
    for e1, e2 in itertools.combinations(ordered, 2):
        if log_rank([e1, e2], tol) == 2:
            return e1, e2
    raise FieldError("no multiplicatively independent pair among the units")


@dataclass
class ConditionedSample:
    exponents: tuple
    coords: tuple
    shape: ShapePoint  # projection of L along phi(eps)
    shape_transport: ShapePoint  # diag(sigma(eps))^-1 applied to L* cap 1^perp
    shape_literal: ShapePoint  # diag(sigma(eps)) applied to the projection along phi(1)
    height: float
    agree: bool

    @property
    def literal_gap(self) -> float:
        return abs(self.shape.z - self.shape_literal.z)


def dual_slice(L: Lattice3, coords: Sequence[int]) -> Lattice2:
    """L* cap v^perp for v = L.point(coords); its shape equals that of the
    projection of L along v (the two are dual lattices in the same plane)."""
    B = ex.transpose(L.basis)
    BinvT = ex.inv_transpose3(B)
    k1, k2 = ex.integer_kernel_basis(coords)
    return Lattice2(ex.matvec(BinvT, k1), ex.matvec(BinvT, k2))


def conditioned_shapes(spec: CubicFieldSpec, units=None, exponents=range(-6, 7),
                       tol: float = 1e-6, min_digits: int = 20):
    """Shapes of the directional lattices of L along phi(e1^m e2^n).

    Two independent routes per unit eps: projecting L along phi(eps)
    (basis completion + orthogonal projection), and transporting the base
    slice L* cap 1^perp by diag(sigma(eps))^-1, which maps it onto
    L* cap phi(eps)^perp because the diagonal unit action preserves L*.
    ``agree`` compares the two.  The image of the projection along phi(1)
    under diag(sigma(eps)) is recorded too; it lies in a different plane and
    generally has a different shape.

    Returns (samples, truncated); ``truncated`` lists exponent pairs skipped
    because cancellation in phi(eps) would leave fewer than ``min_digits``
    correct digits at the working precision.
    """
    if units is None:
        units = independent_pair(unit_search(spec, 2))
    e1, e2 = (u.coords if isinstance(u, UnitElement) else tuple(u) for u in units)
    L = spec.lattice
    one = _field_coords(spec, (1, 0, 0))
    with mpmath.workdps(spec.dps):
        base = directional(L, coords=one)
        base_dual = dual_slice(L, one)
        out, truncated = [], []
        for m in exponents:
            for n in exponents:
                eps = spec.mul(spec.power(e1, m), spec.power(e2, n))
                sig = spec.embed(eps)
                if _digits_lost(spec, eps, sig) > spec.dps - min_digits:
                    truncated.append((m, n))
                    continue
                direct = shape(directional(L, coords=_field_coords(spec, eps)))
                inv = tuple(tuple(1 / sig[i] if i == j else 0 for j in range(3)) for i in range(3))
                fwd = tuple(tuple(sig[i] if i == j else 0 for j in range(3)) for i in range(3))
                transported = shape(base_dual.act(inv))
                literal = shape(base.act(fwd))
                agree = abs(direct.z - transported.z) <= tol
                out.append(ConditionedSample((m, n), eps, direct, transported, literal,
                                             math.sqrt(direct.im), agree))
    return out, truncated


def _digits_lost(spec: CubicFieldSpec, eps, sig) -> float:
    """Decimal digits cancelled when summing a + b r + c r^2 for each root r."""
    worst = 0.0
    for r, s in zip(spec.roots, sig):
        terms = max(abs(eps[0]), abs(eps[1] * r), abs(eps[2] * r * r))
        if terms == 0:
            continue
        if s == 0:
            return math.inf
        worst = max(worst, float(mpmath.log10(terms / abs(s))))
    return worst


def _field_coords(spec: CubicFieldSpec, x: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of x (given over 1, alpha, alpha^2) in the lattice basis."""
    B = ex.transpose(spec.integral_basis)
    c = ex.matvec(ex.inv3(B), ex.qvec(x))
    return ex.as_int_vec(c)
