"""Acting groups: SO(Q) generators, SL3(Z) elementary set, measures, words."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import exact as ex
from .exact import Mat
from .rng import Xoshiro256

INF = math.inf  # the point at infinity of R u {oo}

# Gram matrix of Q(v) = 2 v1 v3 - v2^2
Q_GRAM: Mat = ((0, 0, 1), (0, -1, 0), (1, 0, 0))


def quad_form(v) -> object:
    return 2 * v[0] * v[2] - v[1] * v[1]


def make_u_plus(t) -> Mat:
    t = ex.q(t) if not isinstance(t, float) else t
    return ((1, t, t * t / 2), (0, 1, t), (0, 0, 1))


def make_u_minus(t) -> Mat:
    t = ex.q(t) if not isinstance(t, float) else t
    return ((1, 0, 0), (t, 1, 0), (t * t / 2, t, 1))


def make_k() -> Mat:
    return ((0, 0, 1), (0, -1, 0), (1, 0, 0))


def _normalize(m: Mat) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def elementary(i: int, j: int, sign: int = 1) -> Mat:
    """I + sign * E_ij."""
    return tuple(
        tuple(Fraction(int(r == c) + (sign if (r, c) == (i, j) else 0)) for c in range(3))
        for r in range(3)
    )


def make_sl3_elementary_set() -> list[Mat]:
    """The 12 matrices I +- E_ij (i != j); a Zariski dense generating set of SL3(Z)."""
    return [elementary(i, j, s) for i in range(3) for j in range(3) if i != j for s in (1, -1)]


def check_SL3(g: Mat, tol: float = 1e-9) -> bool:
    d = ex.det3(g)
    if ex.is_exact(g):
        return d == 1
    return abs(float(d) - 1.0) <= tol


def check_SOQ(g: Mat, tol: float = 1e-9) -> bool:
    """g^T S g == S and det g == 1 (exactly for rational g)."""
    lhs = ex.matmul(ex.matmul(ex.transpose(g), Q_GRAM), g)
    if ex.is_exact(g):
        return ex.mat_eq(lhs, Q_GRAM) and ex.det3(g) == 1
    err = max(abs(float(a) - b) for ra, rb in zip(lhs, Q_GRAM) for a, b in zip(ra, rb))
    return err <= tol and check_SL3(g, tol)


# -- measures ----------------------------------------------------------------

class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureSpec:
    """Finitely supported probability measure on SL3(R).

    ``case`` is a user-declared label ("I" for Zariski dense in SL3, "II" for
    Zariski dense in SO(Q)); it is not computed.
    """

    atoms: tuple
    probs: tuple
    name: str = "custom"
    case: str | None = None

    def __post_init__(self):
        if not self.atoms:
            raise MeasureError("empty measure")
        if len(self.atoms) != len(self.probs):
            raise MeasureError("atoms and probabilities differ in length")
        if any(p <= 0 for p in self.probs):
            raise MeasureError("probabilities must be positive")
        total = sum(self.probs)
        if ex.is_exact(self.probs):
            if total != 1:
                raise MeasureError(f"probabilities sum to {total}, not 1")
        elif abs(float(total) - 1) > 1e-12:
            raise MeasureError(f"probabilities sum to {float(total)!r}, not 1")
        for g in self.atoms:
            if not check_SL3(g):
                raise MeasureError(f"atom {g} does not have determinant 1")

    @classmethod
    def uniform(cls, atoms: Sequence[Mat], name: str = "custom", case=None,
                symmetric: bool = False) -> "MeasureSpec":
        atoms = list(atoms)
        if symmetric:
            atoms = with_inverses(atoms)
        n = len(atoms)
        return cls(tuple(atoms), tuple(Fraction(1, n) for _ in atoms), name, case)

    @property
    def symmetric(self) -> bool:
        pairs = dict()
        for g, p in zip(self.atoms, self.probs):
            pairs[_key(g)] = p
        for g, p in zip(self.atoms, self.probs):
            if pairs.get(_key(ex.inv3(g))) != p:
                return False
        return True

    @property
    def flavor(self) -> str:
        return ex.flavor_of(self.atoms)

    def float_atoms(self) -> np.ndarray:
        return np.array([[[float(x) for x in row] for row in g] for g in self.atoms])

    def cumulative(self) -> np.ndarray:
        c = np.cumsum([float(p) for p in self.probs])
        c[-1] = 1.0
        return c

    def is_uniform(self) -> bool:
        return len(set(self.probs)) == 1

    def draw_indices(self, rng: Xoshiro256, n: int) -> np.ndarray:
        if self.is_uniform():
            return rng.randbelow_array(len(self.atoms), n)
        return rng.choice_array(self.cumulative(), n)

    def conjugate(self, k: Mat) -> "MeasureSpec":
        kinv = ex.inv3(k) if ex.is_exact(k) else ex.transpose(k)
        atoms = tuple(ex.matmul(ex.matmul(k, g), kinv) for g in self.atoms)
        return MeasureSpec(atoms, self.probs, self.name + "^k", self.case)


def _key(g: Mat):
    return tuple(tuple(Fraction(x) if ex.is_exact(x) else float(x) for x in row) for row in g)


def with_inverses(atoms: Sequence[Mat]) -> list[Mat]:
    """atoms plus their inverses, without duplicates, order preserved."""
    out, seen = [], set()
    for g in list(atoms) + [ex.inv3(g) for g in atoms]:
        k = _key(g)
        if k not in seen:
            seen.add(k)
            out.append(_normalize(g) if ex.is_exact(g) else g)
    return out


def case1_elementary() -> MeasureSpec:
    return MeasureSpec.uniform(make_sl3_elementary_set(), "case1-elementary", "I")


def gamma0_measure() -> MeasureSpec:
    """Uniform on {u+(2)^{+-1}, u-(2)^{+-1}}."""
    return MeasureSpec.uniform([make_u_plus(2), make_u_minus(2)], "gamma0", "II", symmetric=True)


def figure3_measures() -> dict[str, MeasureSpec]:
    """Four Case II generator sets for the Lyapunov comparison, symmetrized."""
    up, um, k = make_u_plus, make_u_minus, make_k()
    sets = {
        "fig3a": [up(2), um(1)],
        "fig3b": [up(1), um(2)],
        "fig3c": [up(2), um(1), k],
        "fig3d": [up(1), um(1)],
    }
    return {name: MeasureSpec.uniform(g, name, "II", symmetric=True) for name, g in sets.items()}


def ortho_generators() -> list[Mat]:
    """{u+(2)^{+-1}, u-(2)^{+-1}, k}: the letters of the orthogonal-shape sampler."""
    return with_inverses([make_u_plus(2), make_u_minus(2), make_k()])


def builtin_measures() -> dict[str, MeasureSpec]:
    out = {"I": case1_elementary(), "case1": case1_elementary(), "gamma0": gamma0_measure()}
    out.update(figure3_measures())
    return out


def sample_word(mu: MeasureSpec, rng: Xoshiro256, n: int):
    """Product g_n ... g_1 of n letters drawn from mu, and the letter indices."""
    if n < 0:
        raise ValueError("n must be >= 0")
    letters = mu.draw_indices(rng, n) if n else np.empty(0, dtype=np.int64)
    g = ex.IDENTITY3
    for i in letters:
        g = ex.matmul(mu.atoms[int(i)], g)
    if mu.flavor == "exact":
        g = _normalize(g)
    return g, tuple(int(i) for i in letters)


def moebius_act(M: Mat, t):
    """Fractional linear action of a 2x2 matrix on R u {oo} (oo is ``INF``)."""
    (a, b), (c, d) = M
    if abs(ex.det2(M)) != 1 and ex.is_exact(M):
        raise ValueError("moebius_act expects determinant +-1")
    if t == INF or t == -INF:
        return INF if c == 0 else Fraction(a) / c if ex.is_exact(a, c) else a / c
    num, den = a * t + b, c * t + d
    if den == 0:
        return INF
    if ex.is_exact(num, den):
        return Fraction(num) / Fraction(den)
    return num / den


# -- measure spec files -------------------------------------------------------

def parse_measure_text(text: str, name: str = "file", case: str | None = None) -> MeasureSpec:
    """Parse the plain-text measure format.

    One atom per non-blank, non-comment line: nine row-major entries
    (integers or rationals like ``1/2``), optionally followed by ``@ weight``.
    Missing weights mean uniform.  Lines ``case: I`` / ``symmetric: yes``
    set metadata.  ``#`` starts a comment.
    """
    atoms, weights = [], []
    symmetric = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, val = (s.strip() for s in line.split(":", 1))
            if key == "case":
                case = val
            elif key == "symmetric":
                symmetric = val.lower() in ("1", "yes", "true")
            elif key == "name":
                name = val
            else:
                raise MeasureError(f"line {lineno}: unknown key {key!r}")
            continue
        entries, _, weight = line.partition("@")
        try:
            vals = [Fraction(x) for x in entries.replace(",", " ").split()]
            w = Fraction(weight.strip()) if weight.strip() else None
        except (ValueError, ZeroDivisionError) as exc:
            raise MeasureError(f"line {lineno}: {exc}") from None
        if len(vals) != 9:
            raise MeasureError(f"line {lineno}: expected 9 entries, got {len(vals)}")
        atoms.append(tuple(tuple(vals[3 * r:3 * r + 3]) for r in range(3)))
        weights.append(w)
    if not atoms:
        raise MeasureError("measure file has no atoms")
    if all(w is None for w in weights):
        return MeasureSpec.uniform(atoms, name, case, symmetric=symmetric)
    if any(w is None for w in weights):
        raise MeasureError("either all atoms carry weights or none do")
    if symmetric:
        raise MeasureError("symmetric: yes requires unweighted atoms")
    total = sum(weights)
    return MeasureSpec(tuple(atoms), tuple(w / total for w in weights), name, case)


def load_measure(path_or_name: str) -> MeasureSpec:
    builtins = builtin_measures()
    if path_or_name in builtins:
        return builtins[path_or_name]
    path = Path(path_or_name)
    if not path.exists():
        raise MeasureError(f"no built-in measure or file named {path_or_name!r}")
    return parse_measure_text(path.read_text(), name=path.stem)


def format_measure(mu: MeasureSpec) -> str:
    lines = [f"name: {mu.name}"]
    if mu.case:
        lines.append(f"case: {mu.case}")
    for g, p in zip(mu.atoms, mu.probs):
        lines.append(" ".join(str(Fraction(x)) for row in g for x in row) + f" @ {p}")
    return "\n".join(lines) + "\n"
