"""Finite-dimensional C*-algebras as direct sums of matrix blocks, and their endomorphisms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .qlattice_core import FreeAbelianGroup, QuasiLatticePair

__all__ = [
    "AlgebraDescriptor", "AlgebraElement", "Endomorphism", "EndomorphismReport",
    "Action", "Unitisation", "verify_endomorphism", "alpha_of_word", "unitise",
    "VERIFY_TOL",
]

VERIFY_TOL = 1e-12


@dataclass(frozen=True)
class AlgebraDescriptor:
    """``A = M_{d_1} ⊕ ... ⊕ M_{d_k}``; elements are stored as one flat complex vector."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("need at least one block of positive size")
        object.__setattr__(self, "block_dims", dims)

    @property
    def dim(self) -> int:
        return sum(d * d for d in self.block_dims)

    @property
    def rep_dim(self) -> int:
        return sum(self.block_dims)

    @property
    def offsets(self) -> list[int]:
        out, o = [], 0
        for d in self.block_dims:
            out.append(o)
            o += d * d
        return out

    def element(self, blocks: Sequence) -> "AlgebraElement":
        if len(blocks) != len(self.block_dims):
            raise ValueError("wrong number of blocks")
        parts = []
        for b, d in zip(blocks, self.block_dims):
            b = np.asarray(b, dtype=complex).reshape(d, d) if np.ndim(b) else np.full((1, 1), b, complex)
            if b.shape != (d, d):
                raise ValueError(f"block shape {b.shape} does not match {d}")
            parts.append(b.ravel())
        return AlgebraElement(self, np.concatenate(parts))

    def from_vector(self, v) -> "AlgebraElement":
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            raise ValueError("wrong vector length")
        return AlgebraElement(self, v)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim, complex))

    def one(self) -> "AlgebraElement":
        return self.element([np.eye(d) for d in self.block_dims])

    def scalar(self, c: complex) -> "AlgebraElement":
        return c * self.one()

    def basis(self) -> list["AlgebraElement"]:
        """Matrix units, in the order of the flat storage."""
        out = []
        for k in range(self.dim):
            v = np.zeros(self.dim, complex)
            v[k] = 1
            out.append(AlgebraElement(self, v))
        return out

    def block_slices(self) -> list[tuple[slice, int]]:
        return [(slice(o, o + d * d), d) for o, d in zip(self.offsets, self.block_dims)]


class AlgebraElement:
    """An element of a block algebra. Equality is exact."""

    __slots__ = ("desc", "data")

    def __init__(self, desc: AlgebraDescriptor, data: np.ndarray):
        self.desc = desc
        data = np.asarray(data, dtype=complex)
        data.setflags(write=False)
        self.data = data

    @property
    def blocks(self) -> list[np.ndarray]:
        return [self.data[s].reshape(d, d) for s, d in self.desc.block_slices()]

    def _check(self, other: "AlgebraElement"):
        if other.desc != self.desc:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.desc, self.data + other.data)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.desc, self.data - other.data)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.desc, -self.data)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            out = np.empty(self.desc.dim, complex)
            for s, d in self.desc.block_slices():
                if d == 1:
                    out[s] = self.data[s] * other.data[s]
                else:
                    out[s] = (self.data[s].reshape(d, d) @ other.data[s].reshape(d, d)).ravel()
            return AlgebraElement(self.desc, out)
        return AlgebraElement(self.desc, self.data * complex(other))

    def __rmul__(self, c) -> "AlgebraElement":
        return AlgebraElement(self.desc, self.data * complex(c))

    def adjoint(self) -> "AlgebraElement":
        out = np.empty(self.desc.dim, complex)
        for s, d in self.desc.block_slices():
            out[s] = self.data[s].reshape(d, d).conj().T.ravel()
        return AlgebraElement(self.desc, out)

    def norm(self) -> float:
        """The C*-norm: the largest block operator norm."""
        best = 0.0
        for s, d in self.desc.block_slices():
            b = self.data[s].reshape(d, d)
            best = max(best, float(np.linalg.norm(b, 2)) if d > 1 else abs(b[0, 0]))
        return best

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement) and other.desc == self.desc
                and np.array_equal(self.data, other.data))

    __hash__ = None

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.data - other.data), initial=0.0) <= atol)

    def to_record(self) -> list:
        return [[[[float(z.real), float(z.imag)] for z in row] for row in b] for b in self.blocks]

    @classmethod
    def from_record(cls, desc: AlgebraDescriptor, record: list) -> "AlgebraElement":
        blocks = [np.array([[complex(re, im) for re, im in row] for row in b]) for b in record]
        return desc.element(blocks)

    def __repr__(self) -> str:
        parts = []
        for b in self.blocks:
            if b.shape == (1, 1):
                parts.append(f"{b[0, 0]:g}")
            else:
                parts.append(np.array2string(b, precision=4, separator=","))
        return "A(" + " ⊕ ".join(parts) + ")"


@dataclass
class EndomorphismReport:
    multiplicativity_defect: float
    star_defect: float
    unitality_defect: float
    tol: float = VERIFY_TOL

    @property
    def ok(self) -> bool:
        return max(self.multiplicativity_defect, self.star_defect, self.unitality_defect) <= self.tol

    def __bool__(self) -> bool:
        return self.ok


class Endomorphism:
    """A linear map of A given by its matrix on the flat element basis."""

    def __init__(self, desc: AlgebraDescriptor, matrix, unital: bool = True, verified: bool = False):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (desc.dim, desc.dim):
            raise ValueError(f"matrix must be {desc.dim}x{desc.dim}, got {m.shape}")
        m.setflags(write=False)
        self.desc = desc
        self.matrix = m
        self.unital = unital
        self.verified = verified

    @classmethod
    def identity(cls, desc: AlgebraDescriptor) -> "Endomorphism":
        return cls(desc, np.eye(desc.dim), unital=True, verified=True)

    @classmethod
    def from_function(cls, desc: AlgebraDescriptor, fn: Callable[[AlgebraElement], AlgebraElement],
                      unital: bool = True) -> "Endomorphism":
        cols = [fn(e).data for e in desc.basis()]
        return cls(desc, np.stack(cols, axis=1), unital=unital)

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.desc, self.matrix @ x.data)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """``self ∘ other``."""
        return Endomorphism(self.desc, self.matrix @ other.matrix,
                            unital=self.unital and other.unital,
                            verified=self.verified and other.verified)

    __matmul__ = compose

    def verify(self, tol: float = VERIFY_TOL) -> "Endomorphism":
        rep = verify_endomorphism(self, self.desc, tol)
        if not rep.ok:
            raise ValueError(f"not a *-endomorphism: {rep}")
        return Endomorphism(self.desc, self.matrix, self.unital, verified=True)

    def to_record(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]

    @classmethod
    def from_record(cls, desc: AlgebraDescriptor, record: list, unital: bool = True) -> "Endomorphism":
        m = np.array([[complex(re, im) for re, im in row] for row in record])
        return cls(desc, m, unital=unital)


def verify_endomorphism(phi: Endomorphism, A: AlgebraDescriptor, tol: float = VERIFY_TOL) -> EndomorphismReport:
    """Check multiplicativity on all basis pairs, *-preservation and unitality."""
    if phi.matrix.shape != (A.dim, A.dim):
        raise ValueError("shape mismatch between endomorphism and algebra")
    basis = A.basis()
    images = [phi(e) for e in basis]
    mult = 0.0
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            d = phi(x * y) - images[i] * images[j]
            mult = max(mult, float(np.max(np.abs(d.data))))
    star = 0.0
    for x, px in zip(basis, images):
        d = phi(x.adjoint()) - px.adjoint()
        star = max(star, float(np.max(np.abs(d.data))))
    unit = 0.0
    if phi.unital:
        unit = float(np.max(np.abs((phi(A.one()) - A.one()).data)))
    return EndomorphismReport(mult, star, unit, tol)


def alpha_of_word(letters, generators: Sequence[Endomorphism]) -> Endomorphism:
    """``α_{i1} ∘ ... ∘ α_{ik}`` for the word ``a_{i1} ... a_{ik}``."""
    if not generators:
        raise ValueError("no generators")
    if any(not g.verified for g in generators):
        raise ValueError("generators must be verified first")
    letters = getattr(letters, "letters", letters)
    out = Endomorphism.identity(generators[0].desc)
    for i in letters:
        if i < 1:
            raise ValueError("alpha is defined on positive words only")
        out = out.compose(generators[i - 1])
    return out


class Action:
    """A left action of P on A by verified *-endomorphisms, one per generator."""

    def __init__(self, pair: QuasiLatticePair, desc: AlgebraDescriptor,
                 generators: Sequence[Endomorphism], tol: float = VERIFY_TOL):
        if len(generators) != pair.num_generators:
            raise ValueError(f"need {pair.num_generators} generator maps, got {len(generators)}")
        self.pair = pair
        self.desc = desc
        self.generators = tuple(g if g.verified else g.verify(tol) for g in generators)
        if any(g.desc != desc for g in self.generators):
            raise ValueError("generator maps act on a different algebra")
        if isinstance(pair, FreeAbelianGroup):
            # N^k needs commuting generators
            for i, f in enumerate(self.generators):
                for g in self.generators[i + 1:]:
                    if np.max(np.abs(f.matrix @ g.matrix - g.matrix @ f.matrix)) > tol:
                        raise ValueError("generator maps of an abelian pair must commute")
        self._cache: dict = {}

    @property
    def unital(self) -> bool:
        return all(g.unital for g in self.generators)

    def require_unital(self):
        if not self.unital:
            raise ValueError("this construction needs a unital action; pass it through unitise() first")

    def alpha(self, a) -> Endomorphism:
        return self._alpha_letters(self.pair.letters_of(a))

    def _alpha_letters(self, key: tuple) -> Endomorphism:
        m = self._cache.get(key)
        if m is None:
            if not key:
                m = Endomorphism.identity(self.desc)
            else:
                m = self._alpha_letters(key[:-1]).compose(self.generators[key[-1] - 1])
            self._cache[key] = m
        return m

    def apply(self, a, x: AlgebraElement) -> AlgebraElement:
        return self.alpha(a)(x)


@dataclass
class Unitisation:
    """``A⁺ = A ⊕ C`` with the extended action.

    Elements of A⁺ are stored as block-algebra elements ``(x + λ 1_A, λ)``,
    which is the usual identification of the unitisation of a unital algebra.
    """

    base: Action
    desc: AlgebraDescriptor
    action: Action

    def embed(self, x: AlgebraElement) -> AlgebraElement:
        """``x ↦ (x, 0)``."""
        return self.desc.element(list(x.blocks) + [0])

    def scalar(self, lam: complex) -> AlgebraElement:
        """``λ ↦ (0, λ) = λ 1_{A⁺}``."""
        return lam * self.desc.one()

    def epsilon(self, y: AlgebraElement) -> complex:
        return complex(y.data[-1])

    def split(self, y: AlgebraElement) -> tuple[AlgebraElement, complex]:
        """Inverse of ``(x, λ) ↦ y``."""
        lam = self.epsilon(y)
        x = self.base.desc.from_vector(y.data[:-1]) - lam * self.base.desc.one()
        return x, lam


def unitise(action: Action) -> Unitisation:
    desc = action.desc
    plus = AlgebraDescriptor(desc.block_dims + (1,))
    one = desc.one().data
    gens = []
    for g in action.generators:
        m = np.zeros((plus.dim, plus.dim), complex)
        m[:-1, :-1] = g.matrix
        # (x + λ1, λ) ↦ (α(x) + λ1, λ)
        m[:-1, -1] = one - g.matrix @ one
        m[-1, -1] = 1
        gens.append(Endomorphism(plus, m, unital=True))
    return Unitisation(action, plus, Action(action.pair, plus, gens))
