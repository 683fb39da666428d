"""Ready-made coefficient systems and seeded random samplers."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .coeff_algebra import Action, AlgebraDescriptor, AlgebraElement, Endomorphism
from .qlattice_core import FreeAbelianGroup, FreeGroup, GroupWord, QuasiLatticePair

__all__ = [
    "swap_c2", "collapse_c2", "default_action", "scalar_action", "c2_action",
    "random_element", "random_positive", "random_group_element",
]


def swap_c2() -> Endomorphism:
    desc = AlgebraDescriptor((1, 1))
    return Endomorphism(desc, [[0, 1], [1, 0]])


def collapse_c2() -> Endomorphism:
    """``(x1, x2) ↦ (x1, x1)``."""
    desc = AlgebraDescriptor((1, 1))
    return Endomorphism(desc, [[1, 0], [1, 0]])


def _flip(X: np.ndarray) -> np.ndarray:
    s = np.array([[0, 1], [1, 0]])
    return s @ X @ s


def default_action(n: int = 2) -> Action:
    """A = C ⊕ C ⊕ M_2 (dimension 6) with 0/1 generator matrices.

    Odd generators act by ``(x1, x2, X) ↦ (x2, x1, σXσ)`` (an automorphism),
    even ones by ``(x1, x2, X) ↦ (x1, x1, diag(x1, x2))`` which is not injective.
    Integer data stays exact under these maps.
    """
    desc = AlgebraDescriptor((1, 1, 2))

    def auto(x: AlgebraElement) -> AlgebraElement:
        x1, x2, X = x.blocks
        return desc.element([x2, x1, _flip(X)])

    def squash(x: AlgebraElement) -> AlgebraElement:
        x1, x2, _ = x.blocks
        return desc.element([x1, x1, np.diag([x1[0, 0], x2[0, 0]])])

    gens = [Endomorphism.from_function(desc, auto if i % 2 == 0 else squash) for i in range(n)]
    return Action(FreeGroup(n), desc, gens)


def c2_action(n: int = 2) -> Action:
    """A = C² with the swap and the collapse maps alternating."""
    gens = [swap_c2() if i % 2 == 0 else collapse_c2() for i in range(n)]
    return Action(FreeGroup(n), gens[0].desc, gens)


def scalar_action(pair: Optional[QuasiLatticePair] = None) -> Action:
    """A = C with the trivial action."""
    pair = pair or FreeGroup(1)
    desc = AlgebraDescriptor((1,))
    return Action(pair, desc, [Endomorphism.identity(desc) for _ in range(pair.num_generators)])


def random_element(desc: AlgebraDescriptor, rng: np.random.Generator,
                   integer: bool = True, scale: int = 2) -> AlgebraElement:
    """Gaussian-integer entries in [-scale, scale] keep arithmetic exact; floats otherwise."""
    if integer:
        v = rng.integers(-scale, scale + 1, desc.dim) + 1j * rng.integers(-scale, scale + 1, desc.dim)
    else:
        v = rng.standard_normal(desc.dim) + 1j * rng.standard_normal(desc.dim)
    return desc.from_vector(v)


def random_positive(pair: QuasiLatticePair, max_len: int, rng: np.random.Generator):
    if isinstance(pair, FreeAbelianGroup):
        k = int(rng.integers(0, max_len + 1))
        coords = [0] * pair.k
        for _ in range(k):
            coords[int(rng.integers(0, pair.k))] += 1
        return pair.check(type(pair.identity)(coords))
    k = int(rng.integers(0, max_len + 1))
    return GroupWord(int(x) for x in rng.integers(1, pair.n + 1, k))


_WORDS: dict = {}


def random_group_element(pair: QuasiLatticePair, max_len: int, rng: np.random.Generator):
    key = (pair, max_len)
    if key not in _WORDS:
        _WORDS[key] = pair.group_words(max_len)
    words = _WORDS[key]
    return words[int(rng.integers(0, len(words)))]
