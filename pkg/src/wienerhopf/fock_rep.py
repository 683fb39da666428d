"""Truncated regular representation on ``A ⊗ l²(P_{≤L})``.

Operators are :class:`AMatrix` objects: arrays over a word basis with entries in
A acting by left multiplication. Each block ``M_{d_i}`` of A is stored as one
expanded complex matrix whose ``(r, c)`` tile of size ``d_i`` is the i-th block
of the entry, so products of AMatrices are entrywise algebra products.
"""
from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .coeff_algebra import Action, AlgebraDescriptor, AlgebraElement
from .qlattice_core import QuasiLatticePair

__all__ = [
    "Basis", "TruncationWindow", "AMatrix", "FockRepresentation", "operator_norm",
    "build_pi", "build_W", "represent", "interior_projector", "induced_rep",
    "RANK_TOL",
]

RANK_TOL = 1e-10
_DENSE_LIMIT = 3000


class Basis:
    """An ordered list of hashable labels with an index lookup."""

    def __init__(self, labels: Iterable):
        self.labels = tuple(labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator:
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.index

    def __getitem__(self, i: int):
        return self.labels[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Basis) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def product(self, other: "Basis") -> "Basis":
        return Basis((x, y) for x in self.labels for y in other.labels)

    def __repr__(self) -> str:
        return f"Basis({len(self)} labels)"


class TruncationWindow:
    """Positive words of length at most ``L`` in length-lexicographic order."""

    def __init__(self, pair: QuasiLatticePair, L: int):
        if L < 1:
            raise ValueError("L must be at least 1")
        self.pair = pair
        self.L = L
        self.basis = Basis(pair.positive_words(L))

    @property
    def n(self) -> int:
        return self.pair.num_generators

    def interior(self, slack: int) -> list:
        if slack < 0 or slack > self.L:
            raise ValueError(f"slack must lie in [0, {self.L}]")
        return [w for w in self.basis if len(w) <= self.L - slack]

    def __repr__(self) -> str:
        return f"TruncationWindow({self.pair!r}, L={self.L})"


def _tile_index(indices: Sequence[int], d: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.intp)
    return (idx[:, None] * d + np.arange(d)[None, :]).ravel()


def _csr(B) -> scipy.sparse.csr_matrix:
    B = scipy.sparse.csr_matrix(B, dtype=complex)
    B.eliminate_zeros()
    return B


def _trimmed(B: scipy.sparse.csr_matrix) -> np.ndarray:
    """Dense copy of B without its zero rows and columns."""
    rows = np.unique(B.nonzero()[0])
    cols = np.unique(B.nonzero()[1])
    return B[rows][:, cols].toarray()


class AMatrix:
    """A finite operator matrix with entries in A.

    Block ``i`` of A is stored as a sparse complex matrix of size
    ``(rows * d_i) x (cols * d_i)``.
    """

    __slots__ = ("desc", "rows", "cols", "blocks")

    def __init__(self, desc: AlgebraDescriptor, rows: Basis, cols: Basis, blocks: Sequence):
        self.desc = desc
        self.rows = rows
        self.cols = cols
        self.blocks = [_csr(B) for B in blocks]
        for B, d in zip(self.blocks, desc.block_dims):
            if B.shape != (len(rows) * d, len(cols) * d):
                raise ValueError("block storage does not match the bases")

    # constructors
    @classmethod
    def zeros(cls, desc: AlgebraDescriptor, rows: Basis, cols: Optional[Basis] = None) -> "AMatrix":
        cols = rows if cols is None else cols
        return cls(desc, rows, cols, [scipy.sparse.csr_matrix((len(rows) * d, len(cols) * d), dtype=complex)
                                      for d in desc.block_dims])

    @classmethod
    def scalar(cls, desc: AlgebraDescriptor, rows: Basis, cols: Basis, S) -> "AMatrix":
        """Entries ``S[r, c] · 1_A``."""
        S = scipy.sparse.csr_matrix(S, dtype=complex)
        return cls(desc, rows, cols, [scipy.sparse.kron(S, scipy.sparse.identity(d), format="csr")
                                      for d in desc.block_dims])

    @classmethod
    def identity(cls, desc: AlgebraDescriptor, basis: Basis) -> "AMatrix":
        return cls.scalar(desc, basis, basis, scipy.sparse.identity(len(basis)))

    @classmethod
    def from_triplets(cls, desc: AlgebraDescriptor, rows: Basis, cols: Basis, triplets) -> "AMatrix":
        """Sum of entries ``x`` placed at index pairs ``(i, j)``."""
        triplets = list(triplets)
        blocks = []
        for bi, d in enumerate(desc.block_dims):
            ri, ci, vals = [], [], []
            local_r = np.repeat(np.arange(d), d)
            local_c = np.tile(np.arange(d), d)
            for i, j, x in triplets:
                blk = x.blocks[bi].ravel()
                if not blk.any():
                    continue
                ri.append(i * d + local_r)
                ci.append(j * d + local_c)
                vals.append(blk)
            shape = (len(rows) * d, len(cols) * d)
            if vals:
                B = scipy.sparse.coo_matrix((np.concatenate(vals), (np.concatenate(ri), np.concatenate(ci))),
                                            shape=shape).tocsr()
            else:
                B = scipy.sparse.csr_matrix(shape, dtype=complex)
            blocks.append(B)
        return cls(desc, rows, cols, blocks)

    @classmethod
    def diagonal(cls, desc: AlgebraDescriptor, basis: Basis, entries: Sequence[AlgebraElement]) -> "AMatrix":
        return cls.from_triplets(desc, basis, basis, ((k, k, x) for k, x in enumerate(entries)))

    @classmethod
    def from_entries(cls, desc: AlgebraDescriptor, rows: Basis, cols: Basis, entries) -> "AMatrix":
        return cls.from_triplets(desc, rows, cols,
                                 ((rows.index[r], cols.index[c], x) for (r, c), x in entries.items()))

    @staticmethod
    def kron(S, rows: Basis, cols: Basis, M: "AMatrix") -> "AMatrix":
        """``S ⊗ M`` for a scalar matrix S on the outer bases; labels are pairs."""
        S = scipy.sparse.csr_matrix(S, dtype=complex)
        return AMatrix(M.desc, rows.product(M.rows), cols.product(M.cols),
                       [scipy.sparse.kron(S, B, format="csr") for B in M.blocks])

    @staticmethod
    def block(rows: Sequence[Basis], cols: Sequence[Basis], parts: dict, desc: AlgebraDescriptor) -> "AMatrix":
        """Block operator on direct sums; ``parts[(i, j)]`` maps ``cols[j]`` into ``rows[i]``.

        Labels of the sum are ``(k, label)`` with ``k`` the summand index.
        """
        R = Basis((k, l) for k, b in enumerate(rows) for l in b)
        C = Basis((k, l) for k, b in enumerate(cols) for l in b)
        blocks = []
        for bi, d in enumerate(desc.block_dims):
            grid = [[None] * len(cols) for _ in rows]
            for (i, j), M in parts.items():
                grid[i][j] = M.blocks[bi]
            for i, b in enumerate(rows):
                if all(g is None for g in grid[i]):
                    grid[i][0] = scipy.sparse.csr_matrix((len(b) * d, len(cols[0]) * d), dtype=complex)
            for j, b in enumerate(cols):
                if all(grid[i][j] is None for i in range(len(rows))):
                    grid[0][j] = scipy.sparse.csr_matrix((len(rows[0]) * d, len(b) * d), dtype=complex)
            blocks.append(scipy.sparse.bmat(grid, format="csr"))
        return AMatrix(desc, R, C, blocks)

    # access
    def entry(self, r, c) -> AlgebraElement:
        i, j = self.rows.index[r], self.cols.index[c]
        return self.desc.element([B[i * d:(i + 1) * d, j * d:(j + 1) * d].toarray()
                                  for B, d in zip(self.blocks, self.desc.block_dims)])

    def nonzero_entries(self) -> Iterator[tuple]:
        pos = set()
        for B, d in zip(self.blocks, self.desc.block_dims):
            r, c = B.nonzero()
            pos.update(zip((r // d).tolist(), (c // d).tolist()))
        for i, j in sorted(pos):
            yield self.rows[i], self.cols[j], self.entry(self.rows[i], self.cols[j])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dense(self) -> list[np.ndarray]:
        return [B.toarray() for B in self.blocks]

    # algebra
    def _same_shape(self, other: "AMatrix"):
        if self.rows != other.rows or self.cols != other.cols or self.desc != other.desc:
            raise ValueError("matrices act on different spaces")

    def __add__(self, other: "AMatrix") -> "AMatrix":
        self._same_shape(other)
        return AMatrix(self.desc, self.rows, self.cols, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "AMatrix") -> "AMatrix":
        self._same_shape(other)
        return AMatrix(self.desc, self.rows, self.cols, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self) -> "AMatrix":
        return AMatrix(self.desc, self.rows, self.cols, [-a for a in self.blocks])

    def __mul__(self, c) -> "AMatrix":
        c = complex(c)
        return AMatrix(self.desc, self.rows, self.cols, [a * c for a in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other: "AMatrix") -> "AMatrix":
        if self.cols != other.rows or self.desc != other.desc:
            raise ValueError("inner bases do not match")
        return AMatrix(self.desc, self.rows, other.cols, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def adjoint(self) -> "AMatrix":
        return AMatrix(self.desc, self.cols, self.rows, [a.conj().T for a in self.blocks])

    @property
    def H(self) -> "AMatrix":
        return self.adjoint()

    def compress(self, rows: Iterable, cols: Optional[Iterable] = None) -> "AMatrix":
        """Restrict to the given row and column labels."""
        rb = rows if isinstance(rows, Basis) else Basis(rows)
        cb = rb if cols is None else (cols if isinstance(cols, Basis) else Basis(cols))
        ri = [self.rows.index[r] for r in rb]
        ci = [self.cols.index[c] for c in cb]
        out = []
        for B, d in zip(self.blocks, self.desc.block_dims):
            out.append(B[_tile_index(ri, d)][:, _tile_index(ci, d)])
        return AMatrix(self.desc, rb, cb, out)

    def relabel(self, rows: Basis, cols: Basis) -> "AMatrix":
        if len(rows) != len(self.rows) or len(cols) != len(self.cols):
            raise ValueError("relabelling must keep sizes")
        return AMatrix(self.desc, rows, cols, [B.copy() for B in self.blocks])

    # numerics
    def max_abs(self) -> float:
        return max((float(abs(B).max()) if B.nnz else 0.0 for B in self.blocks), default=0.0)

    def exactly_equal(self, other: "AMatrix") -> bool:
        self._same_shape(other)
        return all((a != b).nnz == 0 for a, b in zip(self.blocks, other.blocks))

    def norm(self, tol: float = 1e-12) -> float:
        return operator_norm(self, tol)

    def rank(self, tol: float = RANK_TOL) -> int:
        """Complex rank of the operator on the vector space ``A ⊗ l²``.

        A block ``M_d`` acts on itself as ``d`` copies of ``C^d``, so each
        block's expanded rank is counted ``d`` times.
        """
        total = 0
        for B, d in zip(self.blocks, self.desc.block_dims):
            if B.nnz == 0:
                continue
            s = np.linalg.svd(_trimmed(B), compute_uv=False)
            total += d * int(np.sum(s > tol))
        return total

    def export_sparse(self, fmt: Callable = str) -> list[str]:
        """Lines ``row_word col_word block_index i j re im`` for nonzero scalars."""
        lines = []
        for bi, (B, d) in enumerate(zip(self.blocks, self.desc.block_dims)):
            C = B.tocoo()
            order = np.lexsort((C.col, C.row))
            for p, q, z in zip(C.row[order], C.col[order], C.data[order]):
                r, i = divmod(int(p), d)
                c, j = divmod(int(q), d)
                lines.append(f"{fmt(self.rows[r])} {fmt(self.cols[c])} {bi} {i} {j} {float(z.real)!r} {float(z.imag)!r}")
        return lines

    def __repr__(self) -> str:
        return f"AMatrix({len(self.rows)}x{len(self.cols)}, blocks={self.desc.block_dims})"


def operator_norm(M: AMatrix, tol: float = 1e-12) -> float:
    """Largest singular value of the expanded matrix, block by block.

    Zero rows and columns are dropped first; what remains is handled by a dense
    SVD when small and by an ARPACK estimate with relative tolerance ``tol``
    otherwise.
    """
    best = 0.0
    for B in M.blocks:
        if B.nnz == 0:
            continue
        rows = np.unique(B.nonzero()[0])
        cols = np.unique(B.nonzero()[1])
        if max(len(rows), len(cols)) <= _DENSE_LIMIT:
            val = float(np.linalg.norm(B[rows][:, cols].toarray(), 2))
        else:
            val = float(scipy.sparse.linalg.svds(B, k=1, tol=tol, return_singular_vectors=False)[0])
        best = max(best, val)
    return best


class FockRepresentation:
    """π, V, W and E on the truncated module, and the map ρ on normal forms."""

    def __init__(self, action: Action, L: int):
        self.action = action
        self.pair = action.pair
        self.desc = action.desc
        self.window = TruncationWindow(action.pair, L)
        self.basis = self.window.basis
        self.L = L

    def identity(self) -> AMatrix:
        return AMatrix.identity(self.desc, self.basis)

    def build_pi(self, x: AlgebraElement) -> AMatrix:
        """Diagonal with ``α_b(x)`` at ``(b, b)``."""
        return AMatrix.diagonal(self.desc, self.basis, [self.action.apply(b, x) for b in self.basis])

    def multiplication_operator(self, fn: Callable) -> AMatrix:
        """Diagonal with ``fn(b)`` at ``(b, b)``; ``fn`` maps words to A."""
        return AMatrix.diagonal(self.desc, self.basis, [fn(b) for b in self.basis])

    def shift_matrix(self, g) -> scipy.sparse.csr_matrix:
        N = len(self.basis)
        idx = self.basis.index
        ri, ci = [], []
        for j, b in enumerate(self.basis):
            i = idx.get(b * g)
            if i is not None:
                ri.append(i)
                ci.append(j)
        return scipy.sparse.csr_matrix((np.ones(len(ri)), (ri, ci)), shape=(N, N))

    def build_W(self, g) -> AMatrix:
        """``W_g δ_b = δ_{bg}`` when ``bg`` is positive (and inside the window)."""
        return AMatrix.scalar(self.desc, self.basis, self.basis, self.shift_matrix(g))

    def build_V(self, a) -> AMatrix:
        if not a.is_positive:
            raise ValueError("V_a needs a positive a")
        return self.build_W(a)

    def build_E(self, g) -> AMatrix:
        W = self.build_W(g)
        return W @ W.adjoint()

    def represent(self, z) -> AMatrix:
        """``ρ(v_a x v_b*) = V_a π(x) V_b*``: the entry at ``(ca, cb)`` is ``α_c(x)``."""
        idx = self.basis.index
        trip = []
        for (a, b), x in z.terms.items():
            for c in self.basis:
                i = idx.get(c * a)
                j = idx.get(c * b)
                if i is not None and j is not None:
                    trip.append((i, j, self.action.apply(c, x)))
        return AMatrix.from_triplets(self.desc, self.basis, self.basis, trip)

    def interior_projector(self, slack: int) -> AMatrix:
        keep = set(self.window.interior(slack))
        return AMatrix.scalar(self.desc, self.basis, self.basis,
                              scipy.sparse.diags([1.0 if b in keep else 0.0 for b in self.basis]))

    def induced_labels(self, a) -> Basis:
        ai = a.inv()
        return Basis(ai * b for b in self.basis)

    def reindex_unitary(self, a) -> AMatrix:
        """``U_a δ_b = δ_{a^{-1} b}`` from the word basis to the induced labels."""
        return AMatrix.scalar(self.desc, self.induced_labels(a), self.basis, scipy.sparse.identity(len(self.basis)))

    def induced_rep(self, f, a) -> AMatrix:
        """Matrix of the representation induced from the principal point ``P^{-1} a``.

        For a section ``f = Σ_g W_{d_g, g}`` the entry from ``δ_{h1}`` to
        ``δ_h`` is ``d_g(a h)`` when ``h^{-1} h1 = g`` and ``(P^{-1}a, h)`` is an
        arrow, i.e. ``a h`` is positive. ``f`` needs a ``summands`` mapping from
        group elements to objects with an ``evaluate`` method.
        """
        labels = self.induced_labels(a)
        trip = []
        idx = self.basis.index
        for j, h1 in enumerate(labels):
            for g, d in f.summands.items():
                h = h1 * g.inv()
                ah = a * h
                if not ah.is_positive:
                    continue
                i = idx.get(ah)
                if i is None:
                    continue
                trip.append((i, j, d.evaluate(ah)))
        return AMatrix.from_triplets(self.desc, labels, labels, trip)


def build_pi(rep: FockRepresentation, x: AlgebraElement) -> AMatrix:
    return rep.build_pi(x)


def build_W(rep: FockRepresentation, g) -> AMatrix:
    return rep.build_W(g)


def represent(rep: FockRepresentation, z) -> AMatrix:
    return rep.represent(z)


def interior_projector(rep: FockRepresentation, slack: int) -> AMatrix:
    return rep.interior_projector(slack)


def induced_rep(rep: FockRepresentation, f, a) -> AMatrix:
    return rep.induced_rep(f, a)
