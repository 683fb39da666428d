from wienerhopf import qlattice_core
from wienerhopf.oracles import abelian_oracle, atomize_oracle, meet_oracle, positive_ideal_oracle
from wienerhopf.qlattice_core import Atom, ConstructibleSet, FreeGroup, GroupWord, ZkVector, parse_word


def test_oracles_pass_on_small_windows():
    assert meet_oracle(2, 3, 7).ok
    assert positive_ideal_oracle(2, 3, 4).ok
    assert abelian_oracle(2, 3).ok


def test_meet_oracle_detects_a_wrong_meet(monkeypatch):
    real = qlattice_core.FreeGroup.meet

    def shortest(self, a, b):
        c = real(self, a, b)
        return None if c is None else min(a, b, key=len)

    monkeypatch.setattr(qlattice_core.FreeGroup, "meet", shortest)
    rep = meet_oracle(2, 2, 7)
    assert not rep.ok and ("a1", "a2a1") in rep.mismatches


def test_positive_ideal_oracle_detects_a_wrong_pair(monkeypatch):
    def never(self, g):
        return (g, GroupWord()) if g.is_positive else None

    monkeypatch.setattr(qlattice_core.FreeGroup, "positive_ideal", never)
    rep = positive_ideal_oracle(2, 2, 3)
    assert not rep.ok and any(m[0] == "A2a1" for m in rep.mismatches)


def test_abelian_oracle_detects_a_wrong_meet(monkeypatch):
    monkeypatch.setattr(qlattice_core.FreeAbelianGroup, "meet",
                        lambda self, a, b: ZkVector(tuple(x + y for x, y in zip(a.coords, b.coords))))
    assert not abelian_oracle(2, 2).ok


def test_atomize_oracle_detects_overlap():
    F2 = FreeGroup(2)
    overlapping = ConstructibleSet(F2, [Atom(GroupWord(), ()), Atom(parse_word("a1"), ())])
    rep = atomize_oracle(overlapping, 3)
    assert not rep.ok
