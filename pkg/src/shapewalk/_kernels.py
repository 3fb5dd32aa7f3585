"""numba inner loops of the walk engine (float64 only)."""
from __future__ import annotations

import math

import numba
import numpy as np

MAX_GAUSS = 10_000


@numba.njit(cache=True)
def _gauss(u, w):
    """In-place Lagrange-Gauss reduction; returns False on non-termination."""
    nu = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
    nw = w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
    if nu > nw:
        for i in range(3):
            u[i], w[i] = w[i], u[i]
        nu, nw = nw, nu
    for _ in range(MAX_GAUSS):
        d = u[0] * w[0] + u[1] * w[1] + u[2] * w[2]
        k = math.floor(d / nu + 0.5)
        if k != 0.0:
            for i in range(3):
                w[i] -= k * u[i]
            nw = w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
        if nw < nu:
            for i in range(3):
                u[i], w[i] = w[i], u[i]
            nu, nw = nw, nu
        else:
            return True
    return False


@numba.njit(cache=True)
def _observe(u, w):
    """(Re z, Im z, height) of a Gauss-reduced basis, reflection-canonical."""
    nu = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
    d = u[0] * w[0] + u[1] * w[1] + u[2] * w[2]
    c0 = u[1] * w[2] - u[2] * w[1]
    c1 = u[2] * w[0] - u[0] * w[2]
    c2 = u[0] * w[1] - u[1] * w[0]
    area = math.sqrt(c0 * c0 + c1 * c1 + c2 * c2)
    return abs(d / nu), area / nu, math.sqrt(area / nu)


@numba.njit(cache=True)
def walk_kernel(mats, idx, u0, w0, stride, out):
    """Run the trajectory; ``out`` has one row (re, im, height) per record.

    Returns -1 on success or the 1-based step index of a numerical failure.
    """
    u = u0.copy()
    w = w0.copy()
    tu = np.empty(3)
    tw = np.empty(3)
    if not _gauss(u, w):
        return 0
    re, im, h = _observe(u, w)
    out[0, 0] = re
    out[0, 1] = im
    out[0, 2] = h
    rec = 1
    n = idx.shape[0]
    for step in range(1, n + 1):
        g = mats[idx[step - 1]]
        for i in range(3):
            tu[i] = g[i, 0] * u[0] + g[i, 1] * u[1] + g[i, 2] * u[2]
            tw[i] = g[i, 0] * w[0] + g[i, 1] * w[1] + g[i, 2] * w[2]
        for i in range(3):
            u[i] = tu[i]
            w[i] = tw[i]
        if not _gauss(u, w):
            return step
        c0 = u[1] * w[2] - u[2] * w[1]
        c1 = u[2] * w[0] - u[0] * w[2]
        c2 = u[0] * w[1] - u[1] * w[0]
        s = 1.0 / math.sqrt(math.sqrt(c0 * c0 + c1 * c1 + c2 * c2))
        for i in range(3):
            u[i] *= s
            w[i] *= s
        if not (math.isfinite(u[0] + u[1] + u[2] + w[0] + w[1] + w[2]) and s > 0.0):
            return step
        if step % stride == 0:
            re, im, h = _observe(u, w)
            out[rec, 0] = re
            out[rec, 1] = im
            out[rec, 2] = h
            rec += 1
    return -1


@numba.njit(cache=True)
def lyapunov_kernel(mats, inv_t, idx, v0, b0, burn, n_batches):
    """Accumulate log growth of a vector under g and a bivector under g^{-T}.

    Steps after ``burn`` are split into ``n_batches`` contiguous batches;
    returns per-batch (sum log|gv|/|v|, sum log|g^-T b|/|b|, count).
    """
    v = v0 / math.sqrt((v0 * v0).sum())
    b = b0 / math.sqrt((b0 * b0).sum())
    tv = np.empty(3)
    tb = np.empty(3)
    n = idx.shape[0]
    kept = n - burn
    sums = np.zeros((n_batches, 3))
    for step in range(n):
        g = mats[idx[step]]
        h = inv_t[idx[step]]
        for i in range(3):
            tv[i] = g[i, 0] * v[0] + g[i, 1] * v[1] + g[i, 2] * v[2]
            tb[i] = h[i, 0] * b[0] + h[i, 1] * b[1] + h[i, 2] * b[2]
        nv = math.sqrt(tv[0] * tv[0] + tv[1] * tv[1] + tv[2] * tv[2])
        nb = math.sqrt(tb[0] * tb[0] + tb[1] * tb[1] + tb[2] * tb[2])
        for i in range(3):
            v[i] = tv[i] / nv
            b[i] = tb[i] / nb
        if step >= burn:
            k = ((step - burn) * n_batches) // kept
            sums[k, 0] += math.log(nv)
            sums[k, 1] += math.log(nb)
            sums[k, 2] += 1.0
    return sums
