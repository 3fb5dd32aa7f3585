"""Random walks on the space of 2-lattices up to scaling.

Trajectories g_n ... g_1 x with shape and height observations, the binned
hyperbolic reference for goodness of fit, Lyapunov vector estimation and
an empirical probe of the contraction hypothesis for powers of the height.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate, stats

from . import exact as ex
from ._kernels import lyapunov_kernel, walk_kernel
from .groups import MeasureSpec
from .lattice2 import Lattice2, height
from .rng import Xoshiro256

DEFAULT_STRIDE = 10


class NumericalFailure(ArithmeticError):
    def __init__(self, step: int):
        super().__init__(f"non-finite or non-reducible basis at step {step}")
        self.step = step


class UndersampledError(ValueError):
    pass


# -- trajectories -------------------------------------------------------------

@dataclass
class WalkReport:
    steps: int
    seed: int
    stride: int
    measure: str
    record_steps: np.ndarray
    re: np.ndarray
    im: np.ndarray
    heights: np.ndarray

    @property
    def n_samples(self) -> int:
        return len(self.re)

    def z(self) -> np.ndarray:
        return self.re + 1j * self.im

    def fraction_below(self, m: float) -> float:
        """Fraction of recorded times with height <= m."""
        return float(np.mean(self.heights <= m))

    def time_fraction_below(self, m: float) -> float:
        return self.fraction_below(m)

    def __eq__(self, other):
        if not isinstance(other, WalkReport):
            return NotImplemented
        return (
            (self.steps, self.seed, self.stride, self.measure)
            == (other.steps, other.seed, other.stride, other.measure)
            and np.array_equal(self.record_steps, other.record_steps)
            and np.array_equal(self.re, other.re)
            and np.array_equal(self.im, other.im)
            and np.array_equal(self.heights, other.heights)
        )


def _float_basis(x0: Lattice2):
    return np.array([float(a) for a in x0.u]), np.array([float(a) for a in x0.w])


def run_walk(mu: MeasureSpec, x0: Lattice2, steps: int, seed: int,
             stride: int = DEFAULT_STRIDE, stream: int | None = None) -> WalkReport:
    """Simulate ``steps`` steps from x0, recording every ``stride`` steps.

    After each multiplication the basis is Gauss-reduced and rescaled to unit
    covolume, which leaves the homothety class unchanged.  Records include
    step 0.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    rng = Xoshiro256(seed, stream)
    idx = mu.draw_indices(rng, steps) if steps else np.empty(0, dtype=np.int64)
    u0, w0 = _float_basis(x0)
    n_rec = steps // stride + 1
    out = np.empty((n_rec, 3))
    status = walk_kernel(mu.float_atoms(), idx, u0, w0, stride, out)
    if status >= 0:
        raise NumericalFailure(status)
    return WalkReport(steps, seed, stride, mu.name, np.arange(n_rec) * stride,
                      out[:, 0], out[:, 1], out[:, 2])


def run_walk_reference(mu: MeasureSpec, x0: Lattice2, steps: int, seed: int,
                       stride: int = DEFAULT_STRIDE) -> WalkReport:
    """Pure-Python twin of :func:`run_walk` (slow; for cross-checking)."""
    from .lattice2 import gauss_reduce

    rng = Xoshiro256(seed)
    idx = mu.draw_indices(rng, steps) if steps else []
    atoms = [ex.fmat(g) for g in mu.atoms]
    lat = x0.as_float()
    rows = []

    def observe(u, w):
        nu = ex.norm2(u)
        area = ex.norm(ex.wedge2(u, w))
        return abs(ex.dot(u, w) / nu), area / nu, math.sqrt(area / nu)

    u, w = gauss_reduce(lat)
    rows.append(observe(u, w))
    for step in range(1, steps + 1):
        g = atoms[int(idx[step - 1])]
        u, w = gauss_reduce(Lattice2(ex.matvec(g, u), ex.matvec(g, w)))
        s = 1 / math.sqrt(ex.norm(ex.wedge2(u, w)))
        u, w = ex.scale(s, u), ex.scale(s, w)
        if step % stride == 0:
            rows.append(observe(u, w))
    arr = np.array(rows)
    return WalkReport(steps, seed, stride, mu.name, np.arange(len(rows)) * stride,
                      arr[:, 0], arr[:, 1], arr[:, 2])


def merge_reports(reports: Sequence[WalkReport]) -> WalkReport:
    """Concatenate samples of independent walks (order-independent for counts)."""
    if not reports:
        raise ValueError("nothing to merge")
    cat = lambda name: np.concatenate([getattr(r, name) for r in reports])
    first = reports[0]
    return WalkReport(sum(r.steps for r in reports), first.seed, first.stride, first.measure,
                      cat("record_steps"), cat("re"), cat("im"), cat("heights"))


# -- hyperbolic reference ---------------------------------------------------------

S_MAX = 2 / math.sqrt(3)  # 1/Im z at the corner of the fundamental domain


def _arc(x: float) -> float:
    """1/Im z on the unit-circle boundary above Re z = x."""
    return 1 / math.sqrt(1 - x * x)


@dataclass
class BinnedReference:
    """Bins of the half fundamental domain in (Re z, 1/Im z) plus a cusp tail.

    The hyperbolic probability measure (3/pi) dx dy / y^2 on the domain, folded
    onto Re z >= 0, has constant density 6/pi in the coordinates (x, s = 1/y),
    so each bin mass is (6/pi) times the area of the bin below the arc
    s <= 1/sqrt(1 - x^2).  The last mass is the tail {Im z > y_max}, equal to
    3 / (pi y_max).
    """

    y_max: float = 6.0
    nx: int = 12
    ns: int = 12
    x_edges: np.ndarray = field(init=False)
    s_edges: np.ndarray = field(init=False)
    masses: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.y_max <= 1:
            raise ValueError("y_max must exceed 1")
        self.x_edges = np.linspace(0.0, 0.5, self.nx + 1)
        self.s_edges = np.linspace(1.0 / self.y_max, S_MAX, self.ns + 1)
        m = np.empty(self.nx * self.ns + 1)
        for i in range(self.nx):
            for j in range(self.ns):
                m[i * self.ns + j] = self._bin_mass(i, j)
        m[-1] = self.tail_mass()
        self.masses = m

    def tail_mass(self) -> float:
        return 3.0 / (math.pi * self.y_max)

    def _bin_mass(self, i: int, j: int) -> float:
        x0, x1 = self.x_edges[i], self.x_edges[i + 1]
        s0, s1 = self.s_edges[j], self.s_edges[j + 1]
        height_in_bin = lambda x: min(max(_arc(x) - s0, 0.0), s1 - s0)
        # the arc crosses the bin's bottom/top at these x; split there for quad
        pts = [x for x in (math.sqrt(max(0, 1 - 1 / s0**2)), math.sqrt(max(0, 1 - 1 / s1**2)))
               if x0 < x < x1]
        val, _ = integrate.quad(height_in_bin, x0, x1, points=pts or None,
                                epsabs=1e-14, epsrel=1e-12, limit=200)
        return 6.0 / math.pi * val

    @property
    def n_bins(self) -> int:
        return len(self.masses)

    def bin_index(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        re = np.asarray(re, dtype=float)
        im = np.asarray(im, dtype=float)
        s = 1.0 / im
        ix = np.clip(np.floor(re / 0.5 * self.nx).astype(np.int64), 0, self.nx - 1)
        js = (s - self.s_edges[0]) / (self.s_edges[-1] - self.s_edges[0]) * self.ns
        js = np.clip(np.floor(js).astype(np.int64), 0, self.ns - 1)
        out = ix * self.ns + js
        out[im > self.y_max] = self.n_bins - 1
        return out

    def counts(self, re, im) -> np.ndarray:
        return np.bincount(self.bin_index(re, im), minlength=self.n_bins)

    def sample(self, rng: Xoshiro256, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Inverse-transform sampler of the folded hyperbolic measure.

        The x-marginal has density proportional to 1/sqrt(1 - x^2) on [0, 1/2],
        so x = sin(U pi/6); given x, s = 1/y is uniform on (0, 1/sqrt(1-x^2)).
        """
        u = rng.u64_array(2 * n)
        a = (u[:n] >> np.uint64(11)).astype(float) * 2.0**-53
        b = (u[n:] >> np.uint64(11)).astype(float) * 2.0**-53
        x = np.sin(a * math.pi / 6)
        s = (1.0 - b) / np.sqrt(1 - x * x)
        return x, 1.0 / s


@dataclass(frozen=True)
class GofResult:
    chi2: float
    dof: int
    p_value: float
    tv: float
    n: int

    def as_dict(self) -> dict:
        return {"chi2": self.chi2, "dof": self.dof, "p_value": self.p_value,
                "tv": self.tv, "n": self.n}


def gof_from_counts(counts: np.ndarray, ref: BinnedReference) -> GofResult:
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n < 100 * ref.n_bins:
        raise UndersampledError(f"{int(n)} samples; need >= {100 * ref.n_bins}")
    live = ref.masses > 0
    if counts[~live].any():
        chi2 = math.inf
    else:
        expected = n * ref.masses[live]
        chi2 = float(((counts[live] - expected) ** 2 / expected).sum())
    dof = int(live.sum()) - 1
    p = float(stats.chi2.sf(chi2, dof))
    tv = 0.5 * float(np.abs(counts / n - ref.masses).sum())
    return GofResult(chi2, dof, p, tv, int(n))


def gof_hyperbolic(report: WalkReport, ref: BinnedReference | None = None) -> GofResult:
    """Chi-square and total variation of the report's shapes against the reference.

    Degrees of freedom are (nonempty bins - 1) with no autocorrelation
    correction.
    """
    ref = ref or BinnedReference()
    return gof_from_counts(ref.counts(report.re, report.im), ref)


# -- Lyapunov vector -----------------------------------------------------------

WEIGHTS = ("omega_R3", "omega_wedge2", "omega_l0", "omega_r0", "omega_l0_r0")


def weights_of(t1: float, t2: float, t3: float) -> dict:
    return {
        "omega_R3": t1,
        "omega_wedge2": t1 + t2,
        "omega_l0": 2 * (t1 - t3),
        "omega_r0": t1 + t2 - 2 * t3,
        "omega_l0_r0": t1 - t2,
    }


@dataclass
class LyapunovEstimate:
    lambda1: float
    lambda12: float  # top exponent on the exterior square
    sigma: tuple
    weights: dict
    se: dict
    replicas: int
    steps: int
    degenerate: bool
    per_replica: np.ndarray = field(repr=False)

    @property
    def t1(self):
        return self.sigma[0]

    @property
    def t2(self):
        return self.sigma[1]

    @property
    def t3(self):
        return self.sigma[2]

    def fundamental_gap(self) -> tuple[float, float]:
        """omega_R3 - omega_wedge2/2 and its standard error."""
        return 0.5 * self.weights["omega_l0_r0"], 0.5 * self.se["omega_l0_r0"]

    def as_dict(self) -> dict:
        gap, gap_se = self.fundamental_gap()
        return {
            "lambda1": self.lambda1, "lambda1_plus_lambda2": self.lambda12,
            "sigma": list(self.sigma), "weights": dict(self.weights),
            "se": dict(self.se), "fundamental_gap": gap, "fundamental_gap_se": gap_se,
            "replicas": self.replicas, "steps": self.steps, "degenerate": self.degenerate,
        }


def _derived(l1: np.ndarray, l12: np.ndarray) -> dict:
    t1, t2 = l1, l12 - l1
    t3 = -t1 - t2
    out = {"lambda1": l1, "lambda12": l12, "t1": t1, "t2": t2, "t3": t3}
    out.update(weights_of(t1, t2, t3))
    return out


def _random_unit(rng: Xoshiro256) -> np.ndarray:
    while True:
        v = np.array([rng.normal() for _ in range(3)])
        n = float(np.sqrt((v * v).sum()))
        if n > 1e-12:
            return v / n


def estimate_lyapunov(mu: MeasureSpec, steps: int, replicas: int = 16, seed: int = 0,
                      burn_in: int | None = None, n_batches: int = 20) -> LyapunovEstimate:
    """Top exponents on R^3 and on the exterior square, and the Lyapunov vector.

    Replica ``r`` uses substream ``(seed, r)``.  The first ``burn_in`` steps
    (default steps // 10) only align the vectors and are not averaged.
    Standard errors are across replicas, or across batch means when
    ``replicas == 1``.
    """
    if steps < 1000:
        raise ValueError("steps must be >= 1000")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    burn = steps // 10 if burn_in is None else burn_in
    mats = mu.float_atoms()
    inv_t = np.array([np.linalg.inv(g).T for g in mats])
    rows = []
    for r in range(replicas):
        rng = Xoshiro256(seed, stream=r)
        v0, b0 = _random_unit(rng), _random_unit(rng)
        idx = mu.draw_indices(rng, steps + burn)
        sums = lyapunov_kernel(mats, inv_t, idx, v0, b0, burn, n_batches)
        rows.append(sums)
    sums = np.array(rows)  # (replicas, batches, 3)
    if replicas > 1:
        l1 = sums[:, :, 0].sum(1) / sums[:, :, 2].sum(1)
        l12 = sums[:, :, 1].sum(1) / sums[:, :, 2].sum(1)
    else:
        l1 = sums[0, :, 0] / sums[0, :, 2]
        l12 = sums[0, :, 1] / sums[0, :, 2]
    d = _derived(l1, l12)
    k = len(l1)
    mean = {name: float(np.mean(val)) for name, val in d.items()}
    se = {name: float(np.std(val, ddof=1) / math.sqrt(k)) for name, val in d.items()}
    degenerate = all(abs(mean[n]) <= 3 * se[n] + 1e-12 for n in ("lambda1", "lambda12"))
    return LyapunovEstimate(
        lambda1=mean["lambda1"], lambda12=mean["lambda12"],
        sigma=(mean["t1"], mean["t2"], mean["t3"]),
        weights={w: mean[w] for w in WEIGHTS},
        se={n: se[n] for n in ("lambda1", "lambda12", "t1", "t2", "t3") + WEIGHTS},
        replicas=replicas, steps=steps, degenerate=degenerate,
        per_replica=np.column_stack([l1, l12]),
    )


# -- contraction hypothesis probe --------------------------------------------

@dataclass
class ProbeRow:
    height: float
    u_delta: float
    mean: float
    se: float
    exact_mean: float

    @property
    def contracted_3sigma(self) -> bool:
        return self.mean + 3 * self.se < self.u_delta


@dataclass
class ProbeResult:
    delta: float
    rows: list
    c: float
    b: float

    @property
    def c_below_one(self) -> bool:
        return self.c < 1

    def as_dict(self) -> dict:
        return {
            "delta": self.delta, "c": self.c, "b": self.b, "c_below_one": self.c_below_one,
            "rows": [vars(r) | {"contracted_3sigma": r.contracted_3sigma} for r in self.rows],
        }


def contraction_probe(mu: MeasureSpec, delta: float, points: Sequence[Lattice2],
                      inner_samples: int = 10_000, seed: int = 0) -> ProbeResult:
    """Monte Carlo estimate of A_mu(u_X^delta)(x) = E[u_X(g x)^delta] per point.

    Point ``i`` draws ``inner_samples`` letters from substream ``(seed, i)``.
    The exact finite-support average is reported alongside.  (c, b) is the
    least-squares fit of the estimates against u_X^delta over the table.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not points:
        raise ValueError("need at least one probe point")
    rows = []
    probs = np.array([float(p) for p in mu.probs])
    for i, x in enumerate(points):
        xf = x.as_float()
        vals = np.array([height(xf.act(ex.fmat(g))) ** delta for g in mu.atoms])
        rng = Xoshiro256(seed, stream=i)
        idx = mu.draw_indices(rng, inner_samples)
        draws = vals[idx]
        se = float(draws.std(ddof=1) / math.sqrt(inner_samples)) if inner_samples > 1 else math.nan
        hx = height(xf)
        rows.append(ProbeRow(hx, hx ** delta, float(draws.mean()), se, float(vals @ probs)))
    xs = np.array([r.u_delta for r in rows])
    ys = np.array([r.mean for r in rows])
    if len(rows) >= 2 and np.ptp(xs) > 0:
        c, b = np.polyfit(xs, ys, 1)
    else:
        c, b = float(ys[0] / xs[0]), 0.0
    return ProbeResult(delta, rows, float(c), float(b))


def thin_lattice(height_value: float, rotation=None) -> Lattice2:
    """A lattice of the given height: span{e1, e2 / h^2}, optionally rotated."""
    s = height_value ** 2
    lat = Lattice2((1.0, 0.0, 0.0), (0.0, 1.0 / s, 0.0))
    if rotation is not None:
        lat = lat.act(tuple(tuple(float(x) for x in row) for row in rotation))
    return lat


def random_rotation(rng: Xoshiro256) -> tuple:
    """Haar-random rotation from a normalized quaternion."""
    q = np.array([rng.normal() for _ in range(4)])
    a, b, c, d = q / np.linalg.norm(q)
    return (
        (a*a + b*b - c*c - d*d, 2*(b*c - a*d), 2*(b*d + a*c)),
        (2*(b*c + a*d), a*a - b*b + c*c - d*d, 2*(c*d - a*b)),
        (2*(b*d - a*c), 2*(c*d + a*b), a*a - b*b - c*c + d*d),
    )
