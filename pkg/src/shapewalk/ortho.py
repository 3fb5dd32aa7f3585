"""Orthogonal shapes: Z^3 cap v^perp for v on the level set Q = 1."""
from __future__ import annotations

from dataclasses import dataclass

from . import exact as ex
from .groups import Q_GRAM, ortho_generators, quad_form
from .lattice2 import Lattice2, ShapePoint, shape
from .rng import Xoshiro256

V1 = (1, 1, 1)


class DualityError(AssertionError):
    pass


def _int_mat(g):
    return tuple(tuple(int(x) for x in row) for row in g)


LETTERS = [_int_mat(g) for g in ortho_generators()]


def ortho_lattice(v) -> Lattice2:
    """Basis of Z^3 cap v^perp."""
    w1, w2 = ex.integer_kernel_basis(v)
    return Lattice2(w1, w2)


BASE = ortho_lattice(V1)


@dataclass(frozen=True)
class OrthoSample:
    index: int
    word_len: int
    letters: tuple
    g: tuple
    v: tuple  # g (1,1,1), a point of the level set Q = 1
    normal: tuple  # g^{-T} (1,1,1); g Lambda_{v1} = Z^3 cap normal^perp
    shape: ShapePoint


def _word_product(letters) -> tuple:
    g = ex.IDENTITY3
    for i in letters:
        g = ex.matmul(LETTERS[i], g)
    return g


def conj1_sample(n_words: int, word_len: int, seed: int, dedup: bool = False) -> list[OrthoSample]:
    """Shapes of g * Lambda_{(1,1,1)} for uniform random words g.

    Word ``i`` draws its ``word_len`` letters from substream ``(seed, i)``
    over {u+(2)^{+-1}, u-(2)^{+-1}, k}.
    """
    if n_words < 1 or word_len < 1:
        raise ValueError("n_words and word_len must be >= 1")
    out, seen = [], set()
    for i in range(n_words):
        rng = Xoshiro256(seed, stream=i)
        letters = tuple(int(x) for x in rng.randbelow_array(len(LETTERS), word_len))
        g = _word_product(letters)
        if dedup:
            if g in seen:
                continue
            seen.add(g)
        lat = BASE.act(g)
        normal = ex.as_int_vec(ex.matvec(ex.inv_transpose3(g), V1))
        out.append(OrthoSample(i, word_len, letters, g, ex.matvec(g, V1), normal, shape(lat)))
    return out


def duality_check(g, v):
    """Z^3 cap (g v)^perp == g^{-T} (Z^3 cap v^perp); returns the homothety witness."""
    if ex.det3(g) != 1:
        raise ValueError("duality_check needs det g = 1")
    lhs = ortho_lattice(ex.as_int_vec(ex.matvec(g, v)))
    rhs = ortho_lattice(v).act(ex.inv_transpose3(g))
    wit = ex.lattice2_eq_homothety(lhs.basis, rhs.basis)
    if wit is None or wit[0] != 1:
        raise DualityError(f"duality fails for g={g}, v={v}")
    return wit


def soq_dual_identity(g) -> bool:
    """For g in SO(Q): g^{-T} == S g S^{-1} (S is its own inverse)."""
    return ex.mat_eq(ex.inv_transpose3(g), ex.matmul(ex.matmul(Q_GRAM, g), Q_GRAM))


def on_level_set(v) -> bool:
    return quad_form(v) == 1
