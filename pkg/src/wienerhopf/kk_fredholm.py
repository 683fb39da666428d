"""Finite-truncation checks of the Kasparov triple and the rotation homotopy.

The module ``E0 = A ⊗ l²(P)`` is cut down to words of length at most L and
``E1`` to the nonempty ones; ``P = 1 ⊗ Q`` forgets the ``δ_e`` slot.
For the homotopy, ``l²(P) ⊗ T`` is modelled by an outer word window tensored
with the truncated regular representation of T on an inner window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse

from .coeff_algebra import Action, AlgebraElement
from .fock_rep import AMatrix, Basis, FockRepresentation, RANK_TOL
from .nica_symbolic import NicaAlgebra, NormalFormElement
from .qlattice_core import FreeGroup
from .report import CheckResult, verdict

__all__ = [
    "KasparovData", "DefectReport", "HomotopyModule", "HomotopyOperator",
    "commutator_defect", "homotopy_operator", "homotopy_nica_check",
    "lipschitz_check", "endpoint_inclusion_check", "endpoint_rotation_check",
    "DEFAULT_T_GRID",
]

DEFAULT_T_GRID = (0.0, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)


def _cos_sin(t: float) -> tuple[float, float]:
    # exact values at the endpoints keep the endpoint decompositions exact
    if abs(t) < 1e-15:
        return 1.0, 0.0
    if abs(t - math.pi / 2) < 1e-15:
        return 0.0, 1.0
    return math.cos(t), math.sin(t)


def _block(rows: Sequence[Basis], cols: Sequence[Basis], parts: dict, desc) -> AMatrix:
    return AMatrix.block(rows, cols, parts, desc)


def _restrict(M: AMatrix, rows: Basis, cols: Basis) -> AMatrix:
    return M.compress(rows.labels, cols.labels)


class KasparovData:
    """``E0``, ``E1``, the boundary projection ``P`` and ``F = [[0, P*], [P, 0]]``."""

    def __init__(self, action: Action, L: int):
        if not isinstance(action.pair, FreeGroup):
            raise ValueError("the Kasparov triple is built for free monoids")
        self.action = action
        self.desc = action.desc
        self.rep = FockRepresentation(action, L)
        self.nica = NicaAlgebra(action)
        self.E0 = self.rep.basis
        self.E1 = Basis(w for w in self.E0 if len(w) > 0)
        S = np.zeros((len(self.E1), len(self.E0)))
        for i, w in enumerate(self.E1):
            S[i, self.E0.index[w]] = 1
        self.boundary_projection = AMatrix.scalar(self.desc, self.E1, self.E0, S)
        P = self.boundary_projection
        self.F_block = _block([self.E0, self.E1], [self.E0, self.E1], {(0, 1): P.adjoint(), (1, 0): P}, self.desc)

    @property
    def window(self):
        return self.rep.window

    def slot_projector(self) -> AMatrix:
        """``1 ⊗ p`` on E0."""
        S = np.zeros((len(self.E0), len(self.E0)))
        S[0, 0] = 1
        return AMatrix.scalar(self.desc, self.E0, self.E0, S)

    def lambda0(self, z: NormalFormElement) -> AMatrix:
        return self.rep.represent(z)

    def lambda1(self, z: NormalFormElement) -> AMatrix:
        """The restricted pair on E1: ``Σ Ṽ_a π̃(x) Ṽ_b*`` with ``Ṽ_a = V_a|E1``."""
        rep, E1 = self.rep, self.E1
        out = AMatrix.zeros(self.desc, E1)
        for (a, b), x in z.terms.items():
            Va = _restrict(rep.build_V(a), E1, E1)
            Vb = _restrict(rep.build_V(b), E1, E1)
            pi = _restrict(rep.build_pi(x), E1, E1)
            out = out + Va @ pi @ Vb.adjoint()
        return out


@dataclass
class DefectReport:
    matrix: AMatrix
    norm: float
    rank: int


def commutator_defect(z: NormalFormElement, kd: KasparovData, rank_tol: float = RANK_TOL) -> DefectReport:
    """``P λ0(z) − λ1(z) P`` with its norm and rank."""
    P = kd.boundary_projection
    D = P @ kd.lambda0(z) - kd.lambda1(z) @ P
    return DefectReport(D, D.norm(), D.rank(rank_tol))


class HomotopyModule:
    """Outer window ``l²(P_{≤L})`` tensored with the inner regular representation."""

    def __init__(self, action: Action, L: int, L_inner: Optional[int] = None):
        if not isinstance(action.pair, FreeGroup):
            raise ValueError("the homotopy is built for free monoids")
        L_inner = L if L_inner is None else L_inner
        if L_inner > L:
            raise ValueError("the inner window must not exceed the outer one")
        self.action = action
        self.desc = action.desc
        self.n = action.pair.n
        self.outer = FockRepresentation(action, L)
        self.inner = FockRepresentation(action, L_inner)
        self.obasis = self.outer.basis
        self.basis = self.obasis.product(self.inner.basis)
        N = len(self.obasis)
        self._p = scipy.sparse.csr_matrix(([1.0], ([0], [0])), shape=(N, N))
        self.slot = Basis((self.obasis[0], y) for y in self.inner.basis)
        self.F1 = Basis(l for l in self.basis if len(l[0]) > 0)

    def kron(self, S, M: AMatrix) -> AMatrix:
        return AMatrix.kron(S, self.obasis, self.obasis, M)

    def shift(self, i: int) -> scipy.sparse.csr_matrix:
        return self.outer.shift_matrix(self.action.pair.generator(i))

    def identity(self) -> AMatrix:
        return AMatrix.identity(self.desc, self.basis)

    def slot_projector(self) -> AMatrix:
        return self.kron(self._p, self.inner.identity())

    def interior(self, slack_outer: int = 1, slack_inner: int = 1) -> AMatrix:
        keep = set(self.outer.window.interior(slack_outer))
        So = scipy.sparse.diags([1.0 if w in keep else 0.0 for w in self.obasis])
        return self.kron(So, self.inner.interior_projector(slack_inner))

    def sigma0_coeff(self, x: AlgebraElement) -> AMatrix:
        """``δ_c ⊗ y ↦ δ_c ⊗ α_c(x) y``; on the inner basis the entry is ``α_{bc}(x)``."""
        act = self.action
        return AMatrix.diagonal(self.desc, self.basis, [act.apply(b * c, x) for c, b in self.basis])

    def sigma0_shift(self, i: int) -> AMatrix:
        return self.kron(self.shift(i), self.inner.identity())

    def m_coeff(self, x: AlgebraElement) -> AMatrix:
        return self.inner.build_pi(x)

    def m_shift(self, i: int) -> AMatrix:
        return self.inner.build_V(self.action.pair.generator(i))

    def w(self, i: int, t: float) -> AMatrix:
        """``cos t (v_i p ⊗ 1) + sin t (p ⊗ V_i) + v_i (1 − p) ⊗ 1``."""
        c, s = _cos_sin(t)
        v = self.shift(i)
        one = self.inner.identity()
        out = self.kron(v @ (scipy.sparse.identity(len(self.obasis)) - self._p), one)
        if c != 0:
            out = out + c * self.kron(v @ self._p, one)
        if s != 0:
            out = out + s * self.kron(self._p, self.m_shift(i))
        return out


@dataclass
class HomotopyOperator:
    i: int
    t: float
    matrix: AMatrix


def homotopy_operator(i: int, t: float, module: HomotopyModule) -> HomotopyOperator:
    if not (-1e-15 <= t <= math.pi / 2 + 1e-15):
        raise ValueError(f"t = {t} lies outside [0, pi/2]")
    if not 1 <= i <= module.n:
        raise ValueError(f"generator index {i} out of range")
    return HomotopyOperator(i, t, module.w(i, t))


def homotopy_nica_check(t: float, module: HomotopyModule, tol: float = 1e-12,
                        cov_tol: float = 1e-10, rank_tol: float = RANK_TOL) -> list[CheckResult]:
    """Isometry, orthogonal ranges, covariance and the finite-rank difference at one t."""
    out = []
    Pi = module.interior(1, 1)
    ws = {i: homotopy_operator(i, t, module).matrix for i in range(1, module.n + 1)}
    one = module.identity()
    slot_dim = len(module.inner.basis) * module.desc.dim
    not_slot = one - module.slot_projector()
    for i, w in ws.items():
        params = {"i": i, "t": t}
        out.append(verdict("homotopy isometry", params, ((w.adjoint() @ w - one) @ Pi).norm(), tol))
        for j, wj in ws.items():
            if j != i:
                out.append(verdict("homotopy orthogonal ranges", {"i": i, "j": j, "t": t},
                                   (w.adjoint() @ wj @ Pi).norm(), tol))
        alpha = module.action.generators[i - 1]
        cov = 0.0
        for x in module.desc.basis():
            lhs = module.sigma0_coeff(x) @ w
            rhs = w @ module.sigma0_coeff(alpha(x))
            cov = max(cov, ((lhs - rhs) @ Pi).norm())
        out.append(verdict("homotopy covariance", params, cov, cov_tol))
        D = w - module.sigma0_shift(i)
        r = D.rank(rank_tol)
        r_slot = (D @ module.slot_projector()).rank(rank_tol)
        off = (D @ not_slot).max_abs()
        res = verdict("homotopy finite-rank difference", dict(params, slot_rank=r_slot), off, 0.0,
                      rank=r, max_rank=2 * slot_dim)
        if r != r_slot:
            res.status = "fail"
        out.append(res)
    return out


def lipschitz_check(module: HomotopyModule, ts: Sequence[float] = DEFAULT_T_GRID) -> list[CheckResult]:
    """``||w(t) − w(s)|| <= 2 |t − s|`` over all sampled pairs."""
    out = []
    for i in range(1, module.n + 1):
        mats = {t: module.w(i, t) for t in ts}
        worst = 0.0
        for a in ts:
            for b in ts:
                if a < b:
                    worst = max(worst, (mats[a] - mats[b]).norm() - 2 * abs(a - b))
        out.append(verdict("homotopy lipschitz", {"i": i, "samples": len(ts)}, max(worst, 0.0), 1e-12))
    return out


def endpoint_inclusion_check(kd: KasparovData) -> list[CheckResult]:
    """Pulled back to A, the triple splits as the δ_e slot plus a degenerate part.

    On ``E0 ⊕ E1 = δ_e ⊕ (E1 ⊕ E1)`` the operator F vanishes on the slot and is
    the flip on the rest, which commutes with ``π̃ ⊕ π̃``.
    """
    desc = kd.desc
    out = []
    p = kd.slot_projector()
    e = kd.E0[0]
    P = kd.boundary_projection
    slot_defect = 0.0
    for x in desc.basis():
        lx = kd.lambda0(kd.nica.coeff(x))
        slot_defect = max(slot_defect, (lx @ p - p @ lx).max_abs())
        slot_defect = max(slot_defect, float(np.max(np.abs((lx.entry(e, e) - x).data))))
    out.append(verdict("inclusion: slot carries m", {}, slot_defect, 0.0))
    # F kills the slot on both sides
    Z = AMatrix.zeros(desc, kd.E1, kd.E1)
    p_sum = _block([kd.E0, kd.E1], [kd.E0, kd.E1], {(0, 0): p, (1, 1): Z}, desc)
    F = kd.F_block
    out.append(verdict("inclusion: F vanishes on slot", {}, max((F @ p_sum).max_abs(), (p_sum @ F).max_abs()), 0.0))
    # the degenerate part: F restricted to E1 ⊕ E1 is the flip
    keep = [(0, w) for w in kd.E1] + [(1, w) for w in kd.E1]
    Fd = F.compress(keep)
    I = AMatrix.identity(desc, Fd.rows)
    flip_defect = max((Fd @ Fd - I).max_abs(), (Fd - Fd.adjoint()).max_abs())
    X = AMatrix.scalar(desc, kd.E1, kd.E1, np.eye(len(kd.E1)))
    flip = _block([kd.E1, kd.E1], [kd.E1, kd.E1], {(0, 1): X, (1, 0): X}, desc)
    flip_defect = max(flip_defect, (Fd.relabel(flip.rows, flip.cols) - flip).max_abs())
    comm = 0.0
    for x in desc.basis():
        px = _restrict(kd.lambda0(kd.nica.coeff(x)), kd.E1, kd.E1)
        lam = _block([kd.E1, kd.E1], [kd.E1, kd.E1], {(0, 0): px, (1, 1): kd.lambda1(kd.nica.coeff(x))}, desc)
        comm = max(comm, (flip @ lam - lam @ flip).max_abs())
    out.append(verdict("inclusion: degenerate flip", {}, flip_defect, 0.0))
    out.append(verdict("inclusion: degenerate commutation", {}, comm, 0.0))
    out.append(verdict("PP* = 1", {}, (P @ P.adjoint() - AMatrix.identity(desc, kd.E1)).max_abs(), 0.0))
    out.append(verdict("P*P = 1 - 1⊗p", {}, (P.adjoint() @ P - (AMatrix.identity(desc, kd.E0) - p)).max_abs(), 0.0,
                       rank=(P.adjoint() @ P - AMatrix.identity(desc, kd.E0)).rank(), expected_rank=desc.dim))
    return out


def endpoint_rotation_check(module: HomotopyModule) -> list[CheckResult]:
    """At ``t = π/2`` the slot ``δ_e ⊗ T`` carries m and the rest carries σ⁽¹⁾."""
    out = []
    slot, F1 = module.slot, module.F1
    gens = [("x", x, module.sigma0_coeff(x), module.m_coeff(x)) for x in module.desc.basis()]
    gens += [(f"v{i}", None, module.w(i, math.pi / 2), module.m_shift(i)) for i in range(1, module.n + 1)]
    for name, x, tau, m in gens:
        if x is None:
            i = int(name[1:])
            s1 = _restrict(module.sigma0_shift(i), F1, F1)
        else:
            s1 = _restrict(module.sigma0_coeff(x), F1, F1)
        for op, mop, s1op, label in ((tau, m, s1, name), (tau.adjoint(), m.adjoint(), s1.adjoint(), name + "*")):
            off = max(_restrict(op, F1, slot).max_abs(), _restrict(op, slot, F1).max_abs())
            on_slot = _restrict(op, slot, slot)
            slot_def = (on_slot.relabel(mop.rows, mop.cols) - mop).max_abs()
            rest_def = (_restrict(op, F1, F1) - s1op).max_abs()
            out.append(verdict("rotation endpoint block decomposition", {"generator": label},
                               max(off, slot_def, rest_def), 0.0))
    return out
