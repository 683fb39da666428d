import numpy as np
import pytest
from hypothesis import given, strategies as st

from wienerhopf.coeff_algebra import (Action, AlgebraDescriptor, AlgebraElement, Endomorphism, alpha_of_word,
                                      unitise, verify_endomorphism)
from wienerhopf.presets import collapse_c2, default_action, random_element, swap_c2
from wienerhopf.qlattice_core import FreeAbelianGroup, FreeGroup, GroupWord, parse_word

C2 = AlgebraDescriptor((1, 1))
ACT = default_action(2)
words4 = st.lists(st.integers(1, 2), max_size=4).map(GroupWord)
seeds = st.integers(0, 2 ** 32 - 1)


def test_descriptor_dimensions():
    d = AlgebraDescriptor((1, 1, 2))
    assert d.dim == 6 and d.rep_dim == 4
    with pytest.raises(ValueError):
        AlgebraDescriptor(())
    with pytest.raises(ValueError):
        AlgebraDescriptor((0,))


def test_element_algebra_is_blockwise():
    d = AlgebraDescriptor((1, 2))
    x = d.element([2, [[0, 1], [0, 0]]])
    y = d.element([3, [[0, 0], [1, 0]]])
    xy = x * y
    assert xy.blocks[0][0, 0] == 6
    assert np.array_equal(xy.blocks[1], [[1, 0], [0, 0]])
    assert np.array_equal(x.adjoint().blocks[1], [[0, 0], [1, 0]])
    assert x.norm() == 2.0


def test_element_record_round_trip(rng):
    x = random_element(ACT.desc, rng, integer=False)
    assert AlgebraElement.from_record(ACT.desc, x.to_record()) == x


def test_verify_identity_swap_collapse():
    rep = verify_endomorphism(Endomorphism.identity(C2), C2)
    assert rep.ok
    assert rep.multiplicativity_defect == rep.star_defect == rep.unitality_defect == 0
    assert verify_endomorphism(swap_c2(), C2).ok
    assert verify_endomorphism(collapse_c2(), C2).ok


def test_verify_rejects_non_multiplicative():
    bad = Endomorphism(C2, [[1, 1], [0, 0]])
    assert not verify_endomorphism(bad, C2).ok
    with pytest.raises(ValueError):
        bad.verify()
    with pytest.raises(ValueError):
        Endomorphism(C2, np.eye(3))


def test_alpha_of_word_examples():
    gens = [swap_c2().verify(), collapse_c2().verify()]
    assert np.array_equal(alpha_of_word(GroupWord(), gens).matrix, np.eye(2))
    a12 = alpha_of_word(parse_word("a1a2"), gens)
    assert np.array_equal(a12.matrix, gens[0].matrix @ gens[1].matrix)
    assert np.array_equal(alpha_of_word(parse_word("a1a1"), gens).matrix, np.eye(2))
    with pytest.raises(ValueError):
        alpha_of_word(parse_word("a1"), [swap_c2()])


@given(words4, words4)
def test_alpha_composition_consistency(u, v):
    lhs = ACT.alpha(u * v).matrix
    rhs = (ACT.alpha(u) @ ACT.alpha(v)).matrix
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(words4, seeds)
def test_alpha_is_contractive(a, seed):
    x = random_element(ACT.desc, np.random.default_rng(seed), integer=False)
    assert ACT.apply(a, x).norm() <= x.norm() + 1e-12


def test_default_action_is_verified_and_partly_non_injective():
    assert all(g.verified and g.unital for g in ACT.generators)
    ranks = [np.linalg.matrix_rank(g.matrix) for g in ACT.generators]
    assert ranks == [6, 2]


def test_abelian_action_needs_commuting_maps():
    Z = FreeAbelianGroup(2)
    with pytest.raises(ValueError):
        Action(Z, C2, [swap_c2(), collapse_c2()])
    Action(Z, C2, [swap_c2(), swap_c2()])


def test_unitisation():
    nonunital = Endomorphism(C2, [[1, 0], [0, 0]], unital=False)
    act = Action(FreeGroup(1), C2, [nonunital])
    assert not act.unital
    U = unitise(act)
    assert U.desc.dim == C2.dim + 1
    assert U.action.unital and all(g.verified for g in U.action.generators)
    x = C2.element([2, 5])
    a = parse_word("a1")
    # on A ⊕ 0 the extended action is α
    y = U.action.apply(a, U.embed(x))
    back, lam = U.split(y)
    assert back == act.apply(a, x) and lam == 0
    # ε is a unital *-homomorphism onto C
    p = U.embed(x) + U.scalar(3)
    q = U.embed(C2.element([1j, -1])) + U.scalar(2)
    assert U.epsilon(p * q) == U.epsilon(p) * U.epsilon(q)
    assert U.epsilon(p.adjoint()) == np.conj(U.epsilon(p))
    assert U.epsilon(U.scalar(1)) == 1 and U.epsilon(U.embed(x)) == 0
