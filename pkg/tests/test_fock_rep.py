import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wienerhopf.checks import random_diagonal, random_normal_form
from wienerhopf.fock_rep import AMatrix, FockRepresentation, TruncationWindow, operator_norm
from wienerhopf.groupoid_rep import WienerHopfGroupoid
from wienerhopf.nica_symbolic import NicaAlgebra, diagonal_norm, to_diagonal
from wienerhopf.presets import c2_action, default_action, random_element, scalar_action
from wienerhopf.qlattice_core import FreeGroup, GroupWord, parse_word

w = parse_word
E = GroupWord()
ACT = default_action(2)
TT = NicaAlgebra(ACT)
F = FockRepresentation(ACT, 5)
seeds = st.integers(0, 2 ** 32 - 1)


def on_interior(M, slack, rep=F):
    return M @ rep.interior_projector(slack)


def test_window_basis_order():
    win = TruncationWindow(FreeGroup(2), 2)
    assert [str(b) for b in win.basis] == ["e", "a1", "a2", "a1a1", "a1a2", "a2a1", "a2a2"]
    with pytest.raises(ValueError):
        TruncationWindow(FreeGroup(2), 0)


# pi

def test_build_pi_examples():
    assert F.build_pi(ACT.desc.one()).exactly_equal(F.identity())
    rep = FockRepresentation(c2_action(2), 3)
    x = rep.desc.element([1, 0])
    P = rep.build_pi(x)
    assert P.entry(w("a1"), w("a1")) == rep.desc.element([0, 1])
    assert P.entry(E, E) == x
    assert P.entry(w("a2"), w("a2")) == rep.desc.element([1, 1])


# shifts

def test_unilateral_shift():
    rep = FockRepresentation(scalar_action(FreeGroup(1)), 6)
    W = rep.build_W(w("a1"))
    (B,) = W.to_dense()
    assert np.array_equal(B, np.eye(7, k=-1))


def test_range_projection_of_a1():
    P = F.build_E(w("a1"))
    for b in F.basis:
        ends = len(b) >= 1 and b.letters[-1] == 1
        assert P.entry(b, b) == (ACT.desc.one() if ends else ACT.desc.zero())
    assert len(list(P.nonzero_entries())) == sum(1 for b in F.basis if b.letters[-1:] == (1,))


def test_partial_isometry_support():
    # b·a1·a2^{-1} is never positive, while b·a2^{-1}·a1 is positive iff b ends in a2
    assert F.build_W(w("a1A2")).max_abs() == 0
    g = w("A2a1")
    W = F.build_W(g)
    cols = {c for _, c, _ in W.nonzero_entries()}
    assert cols == {b for b in F.basis if b.letters[-1:] == (2,)}
    for r, c, x in W.nonzero_entries():
        assert r == c * g and x == ACT.desc.one()


def test_adjoint_is_inverse_shift():
    for g in ACT.pair.group_words(3):
        assert F.build_W(g).adjoint().exactly_equal(F.build_W(g.inv()))


def test_shift_product_on_interior():
    for g in ACT.pair.group_words(2):
        for h in ACT.pair.group_words(2):
            lhs = F.build_W(g) @ F.build_W(h)
            rhs = F.build_E(g) @ F.build_W(h * g)
            assert on_interior(lhs - rhs, len(g) + len(h)).max_abs() == 0


def test_covariance_on_interior():
    x = random_element(ACT.desc, np.random.default_rng(3))
    for a in ACT.pair.positive_words(3):
        lhs = F.build_pi(x) @ F.build_V(a)
        rhs = F.build_V(a) @ F.build_pi(ACT.apply(a, x))
        assert on_interior(lhs - rhs, len(a)).max_abs() == 0
    with pytest.raises(ValueError):
        F.build_V(w("A1"))


def test_nica_covariance_exact():
    for a in ACT.pair.positive_words(2):
        for b in ACT.pair.positive_words(2):
            c = ACT.pair.meet(a, b)
            expected = F.build_E(c) if c is not None else AMatrix.zeros(ACT.desc, F.basis)
            assert (F.build_E(a) @ F.build_E(b)).exactly_equal(expected)


# represent

def test_represent_examples():
    assert F.represent(TT.one()).exactly_equal(F.identity())
    assert F.represent(TT.v(w("a1"))).exactly_equal(F.build_W(w("a1")))
    assert F.represent(TT.vstar(w("a1")) * TT.v(w("a2"))).max_abs() == 0


def test_represent_is_multiplicative_on_interior():
    rng = np.random.default_rng(11)
    for _ in range(30):
        z1, z2 = random_normal_form(TT, rng, 2), random_normal_form(TT, rng, 2)
        D = F.represent(z1 * z2) - F.represent(z1) @ F.represent(z2)
        assert on_interior(D, 4).max_abs() < 1e-10


def test_represent_star():
    rng = np.random.default_rng(5)
    z = random_normal_form(TT, rng)
    assert F.represent(z.adjoint()).exactly_equal(F.represent(z).adjoint())


# interior projector

def test_interior_projector_examples():
    assert F.interior_projector(0).exactly_equal(F.identity())
    P = F.interior_projector(F.L)
    assert [(r, c) for r, c, _ in P.nonzero_entries()] == [(E, E)]
    V = F.build_V(w("a1"))
    assert (V.adjoint() @ V @ F.interior_projector(1)).exactly_equal(F.interior_projector(1))
    with pytest.raises(ValueError):
        F.interior_projector(F.L + 1)
    with pytest.raises(ValueError):
        F.interior_projector(-1)


# norms

def test_norm_examples():
    assert operator_norm(F.identity()) == pytest.approx(1.0, abs=1e-12)
    assert F.build_V(w("a1")).norm() == pytest.approx(1.0, abs=1e-12)
    assert AMatrix.zeros(ACT.desc, F.basis).norm() == 0.0


@settings(max_examples=15)
@given(seeds)
def test_norm_bounded_by_diagonal_norm(seed):
    z = random_diagonal(TT, np.random.default_rng(seed), max_len=2)
    exact = diagonal_norm(to_diagonal(z))
    assert F.represent(z).norm() <= exact + 1e-8


def test_norm_monotone_in_window():
    rng = np.random.default_rng(2)
    for _ in range(3):
        z = random_normal_form(TT, rng, max_len=2)
        norms = [FockRepresentation(ACT, L).represent(z).norm() for L in range(3, 8)]
        assert all(b >= a - 1e-10 for a, b in zip(norms, norms[1:]))


def test_rank_counts_matrix_blocks():
    # a single matrix unit in the M_2 block has rank 2 on A = C ⊕ C ⊕ M_2
    x = ACT.desc.element([0, 0, [[1, 0], [0, 0]]])
    M = AMatrix.from_entries(ACT.desc, F.basis, F.basis, {(E, E): x})
    assert M.rank() == 2
    assert F.identity().rank() == ACT.desc.dim * len(F.basis)


# closure identities for positive multipliers

def test_closure_identities():
    rng = np.random.default_rng(9)
    h0 = random_element(ACT.desc, rng)
    y = h0 * h0.adjoint()
    P = lambda x: F.build_pi(x)
    y2, y3 = y * y, y * y * y
    for g in ACT.pair.group_words(2):
        for h in ACT.pair.group_words(2):
            Wg, Wh = F.build_W(g), F.build_W(h)
            slack = len(g) + len(h)
            A = P(y) @ Wh
            lhs = A @ A.adjoint() @ P(y) @ F.build_W(g * h)
            rhs = P(y3) @ Wh @ Wg
            assert on_interior(lhs - rhs, slack).max_abs() < 1e-9
            lhs = Wg @ P(y3) @ Wh
            rhs = (P(y) @ F.build_W(g.inv())).adjoint() @ (P(y2) @ Wh)
            assert on_interior(lhs - rhs, slack).max_abs() < 1e-9


# induced representations

def test_induced_rep_at_identity():
    G = WienerHopfGroupoid(ACT)
    x = random_element(ACT.desc, np.random.default_rng(4))
    d = G.j(w("a1"), x)
    for g in (E, w("a1"), w("A2")):
        f = G.W(d, g)
        lhs = F.induced_rep(f, E).relabel(F.basis, F.basis)
        rhs = F.multiplication_operator(d.evaluate) @ F.build_W(g).adjoint()
        assert lhs.exactly_equal(rhs)


def test_induced_rep_of_indicator_is_projection():
    G = WienerHopfGroupoid(ACT)
    M = F.induced_rep(G.W(G.one_omega(), E), E).relabel(F.basis, F.basis)
    assert M.exactly_equal(F.identity())


def test_induced_rep_conjugation():
    G = WienerHopfGroupoid(ACT)
    rng = np.random.default_rng(8)
    a = w("a2")
    U = F.reindex_unitary(a)
    for _ in range(10):
        d = G.j(w("a1"), random_element(ACT.desc, rng, integer=False)) + G.j(E, random_element(ACT.desc, rng))
        for g in ACT.pair.group_words(1):
            f = G.W(d, g)
            lhs = U.adjoint() @ F.induced_rep(f, a) @ U
            rhs = F.multiplication_operator(d.evaluate) @ F.build_W(g).adjoint()
            assert (lhs - rhs).max_abs() < 1e-12


# export

def test_export_format():
    rep = FockRepresentation(c2_action(2), 1)
    M = rep.build_pi(rep.desc.element([2, 1j]))
    lines = M.export_sparse()
    assert lines[0] == "e e 0 0 0 2.0 0.0"
    for line in lines:
        parts = line.split()
        assert len(parts) == 7
        float(parts[5]), float(parts[6])
    assert "e e 1 0 0 0.0 1.0" in lines
