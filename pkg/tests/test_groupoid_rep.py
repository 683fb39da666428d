import numpy as np
import pytest
from hypothesis import given, strategies as st

from wienerhopf.checks import _random_gdiag, random_normal_form
from wienerhopf.groupoid_rep import GroupoidArrow, WienerHopfGroupoid, enumerate_arrows, translate
from wienerhopf.presets import default_action, random_element, random_group_element
from wienerhopf.qlattice_core import FreeGroup, GroupWord, OmegaPoint, parse_word

w = parse_word
E = GroupWord()
ACT = default_action(2)
G = WienerHopfGroupoid(ACT)
T = G.nica
D = ACT.desc
X = D.element([1, 2j, [[0, 1], [3, 0]]])
seeds = st.integers(0, 2 ** 32 - 1)
ONE = G.one_omega()


# translation

def test_translate_examples():
    for g in (w("a1"), w("A2a1"), w("a2a2")):
        assert translate(G.j(E, X), g) == G.j(g.inv(), X)
    d = G.j(w("a1"), X) + G.j(w("A2"), D.one())
    assert translate(d, E) == d
    assert translate(translate(d, w("a1A2")), w("a2A1")) == d


@given(seeds)
def test_translate_is_pullback(seed):
    rng = np.random.default_rng(seed)
    d = _random_gdiag(G, rng)
    s = random_group_element(G.pair, 2, rng)
    td = d.translate(s)
    for h in G.pair.group_words(3):
        assert td.evaluate(h) == d.evaluate(h * s)


# diagonal products

@given(seeds)
def test_diagonal_product_is_pointwise(seed):
    rng = np.random.default_rng(seed)
    d1, d2 = _random_gdiag(G, rng), _random_gdiag(G, rng)
    prod = d1 * d2
    for h in G.pair.group_words(3):
        assert prod.evaluate(h) == d1.evaluate(h) * d2.evaluate(h)


# convolution

def test_unit_is_identity():
    f = G.W(G.j(w("a1"), X), w("A2"))
    assert G.unit() * f == f and f * G.unit() == f


def test_generator_isometry():
    s = G.W(ONE, w("A1"))
    assert s.adjoint() * s == G.unit()
    assert s * s.adjoint() == G.W(G.indicator(w("a1")), E)


def test_covariance_chain():
    a = w("a1")
    s = G.W(ONE, a.inv())
    lhs = G.W(G.j(E, X), E) * s
    rhs = s * G.W(G.j(E, ACT.apply(a, X)), E)
    assert lhs == rhs and lhs.equals_by_evaluation(rhs, L_eq=6)


def test_associativity_by_evaluation():
    rng = np.random.default_rng(21)
    for _ in range(100):
        fs = [G.W(_random_gdiag(G, rng), random_group_element(G.pair, 2, rng)) for _ in range(3)]
        lhs, rhs = (fs[0] * fs[1]) * fs[2], fs[0] * (fs[1] * fs[2])
        assert lhs.equals_by_evaluation(rhs, L_eq=6)


# adjoint

def test_adjoint_examples():
    assert G.W(G.j(E, X), E).adjoint() == G.W(G.j(E, X.adjoint()), E)
    f = G.W(G.j(w("a2"), X), w("A1")) + G.W(G.j(E, X), w("a2"))
    assert f.adjoint().adjoint() == f
    assert G.W(ONE, w("A1")).adjoint() == G.W(ONE.translate(w("a1")), w("a1"))


@given(seeds)
def test_adjoint_reverses_products(seed):
    rng = np.random.default_rng(seed)
    f1 = G.W(_random_gdiag(G, rng), random_group_element(G.pair, 2, rng))
    f2 = G.W(_random_gdiag(G, rng), random_group_element(G.pair, 2, rng))
    assert (f1 * f2).adjoint() == f2.adjoint() * f1.adjoint()


# vanishing

def test_vanishing_examples():
    # 1_Ω 1_{Ω a1} j_{a2}(x) = 0 since Pa1 ∩ Pa2 is empty
    assert G.W(G.j(w("a2"), X), w("A1")).is_zero()
    assert not G.W(G.j(w("a1"), X), w("A1")).is_zero()
    assert G.section({}).is_zero()


@given(seeds)
def test_vanishing_matches_evaluation(seed):
    rng = np.random.default_rng(seed)
    d, g = _random_gdiag(G, rng), random_group_element(G.pair, 2, rng)
    brute = all(d.evaluate(b).is_zero() for b in G.pair.positive_words(6) if (b * g).is_positive)
    assert G.W(d, g).is_zero() == brute


# lambda and mu

def test_lambda_examples():
    assert G.lambda_map(T.e(w("a1"))) == G.W(G.indicator(w("a1")), E)
    assert G.lambda_map(T.one()) == G.unit()
    assert G.lambda_map(T.monomial(w("a1"), X, w("a1"))) == G.W(G.j(w("a1"), X), E)
    assert G.lambda_map(T.v(w("a1"))) == G.W(ONE, w("A1"))


def test_mu_examples():
    assert G.mu_map(G.lambda_map(T.v(w("a1")))) == T.v(w("a1"))
    assert G.mu_map(G.unit()) == T.one()
    assert G.mu_map(G.section({})).is_zero()


def test_mu_lambda_round_trip():
    rng = np.random.default_rng(33)
    for _ in range(100):
        z = random_normal_form(T, rng, max_len=3)
        assert G.mu_map(G.lambda_map(z)) == z


@given(seeds)
def test_lambda_is_star_homomorphism(seed):
    rng = np.random.default_rng(seed)
    z1, z2 = random_normal_form(T, rng, max_len=2), random_normal_form(T, rng, max_len=2)
    assert G.lambda_map(z1 * z2) == G.lambda_map(z1) * G.lambda_map(z2)
    assert G.lambda_map(z1.adjoint()) == G.lambda_map(z1).adjoint()


def test_section_records_round_trip():
    f = G.W(G.j(w("a2"), X), w("A1")) + G.W(G.j(E, X), w("a2"))
    assert G.from_records(f.to_records()) == f
    g = G.from_records([{"g": "e", "terms": [{"S": "Omega.A1", "h": "e", "coefficient": D.one().to_record()}]}])
    assert g == G.W(G.indicator(w("A1")), E)
    with pytest.raises(ValueError):
        G.from_records([{"g": "e", "terms": [{"S": "Q", "h": "e", "coefficient": D.one().to_record()}]}])


# arrows

def test_arrows_from_the_base_point():
    X0 = OmegaPoint(E)
    got = {ar.g for ar in enumerate_arrows(FreeGroup(2), 0, 2)}
    assert got == set(FreeGroup(2).positive_words(2))
    assert all(ar.X == X0 for ar in enumerate_arrows(FreeGroup(2), 0, 2))


def test_units_are_arrows():
    for a in FreeGroup(2).positive_words(3):
        ar = GroupoidArrow(OmegaPoint(a), E)
        assert ar.source == ar.range


def test_arrow_count_against_brute_force():
    pair = FreeGroup(2)
    arrows = enumerate_arrows(pair, 2, 2)
    brute = {(X, g) for X in pair.positive_words(2) for g in pair.group_words(2)
             if all(x > 0 for x in (X * g).letters)}
    assert {(ar.X.word, ar.g) for ar in arrows} == brute
    # frozen: 7 positive g from each point, plus A_last and A_last a_j from |X| >= 1,
    # plus A_last A_prev from |X| = 2: 7 + 2*9 + 4*10
    assert len(arrows) == 65


def test_arrow_algebra():
    ar = GroupoidArrow(OmegaPoint(w("a2a1")), w("A1"))
    assert ar.source == OmegaPoint(w("a2"))
    inv = ar.inverse()
    assert ar.compose(inv).g == E and inv.compose(ar).X == inv.X
    with pytest.raises(ValueError):
        GroupoidArrow(OmegaPoint(w("a1")), w("A2"))
    assert ar.to_text() == "a2a1\tA1"
