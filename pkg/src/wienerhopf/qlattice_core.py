"""Quasi-lattice ordered pairs: free monoids in free groups and N^k in Z^k.

The order used throughout is the right order: ``a <= b`` when ``b = c a`` for a
positive ``c``, so the principal ideal ``P a`` is the set of positive elements
ending in ``a``.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

__all__ = [
    "GroupWord", "MonoidWord", "ZkVector", "PrincipalIdeal", "Atom",
    "ConstructibleSet", "OmegaPoint", "FreeGroup", "FreeAbelianGroup",
    "reduce", "right_leq", "meet", "positive_ideal", "atomize",
    "omega_membership", "parse_word", "format_word",
]


def _concat_reduce(u: tuple, v: tuple) -> tuple:
    # both factors are reduced, so cancellation only happens at the junction
    k = 0
    m = min(len(u), len(v))
    while k < m and u[-1 - k] == -v[k]:
        k += 1
    return u[: len(u) - k] + v[k:]


class GroupWord:
    """A reduced word in the free group; letters are signed generator indices."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(int(x) for x in letters)
        if 0 in letters:
            raise ValueError("generator indices start at 1")
        for x, y in zip(letters, letters[1:]):
            if x == -y:
                raise ValueError(f"word {letters} is not reduced")
        self.letters = letters
        self._hash = hash(letters)

    @classmethod
    def _trusted(cls, letters: tuple) -> "GroupWord":
        obj = object.__new__(cls)
        obj.letters = letters
        obj._hash = hash(letters)
        return obj

    @classmethod
    def generator(cls, i: int) -> "GroupWord":
        return cls((i,))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord._trusted(_concat_reduce(self.letters, other.letters))

    def inv(self) -> "GroupWord":
        return GroupWord._trusted(tuple(-x for x in reversed(self.letters)))

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "GroupWord") -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"GroupWord({format_word(self)!r})"


# positive words are the GroupWords whose letters are all positive
MonoidWord = GroupWord


class ZkVector:
    """An element of Z^k; the group law is written multiplicatively."""

    __slots__ = ("coords", "_hash")

    def __init__(self, coords: Iterable[int]):
        self.coords = tuple(int(c) for c in coords)
        self._hash = hash(("zk", self.coords))

    def __mul__(self, other: "ZkVector") -> "ZkVector":
        return ZkVector(a + b for a, b in zip(self.coords, other.coords))

    def inv(self) -> "ZkVector":
        return ZkVector(-a for a in self.coords)

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def is_identity(self) -> bool:
        return not any(self.coords)

    def __len__(self) -> int:
        return sum(abs(c) for c in self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, ZkVector) and self.coords == other.coords

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "ZkVector") -> bool:
        return (len(self), self.coords) < (len(other), other.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"ZkVector({self.coords})"


Element = Union[GroupWord, ZkVector]

_WORD_RE = re.compile(r"([aA])(\d+)")


def parse_word(text: str) -> GroupWord:
    """Parse ``"A2a1"`` style words; ``"e"`` is the identity. The result is reduced."""
    text = text.strip()
    if text in ("e", ""):
        return GroupWord()
    pos = 0
    raw = []
    for m in _WORD_RE.finditer(text):
        if m.start() != pos:
            break
        i = int(m.group(2))
        if i == 0:
            raise ValueError(f"bad generator index in {text!r}")
        raw.append(i if m.group(1) == "a" else -i)
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"cannot parse word {text!r}")
    return reduce(raw)


def format_word(g: GroupWord) -> str:
    if not g.letters:
        return "e"
    return "".join(f"a{x}" if x > 0 else f"A{-x}" for x in g.letters)


def reduce(raw: Iterable[int]) -> GroupWord:
    """Freely reduce a sequence of signed generator indices."""
    stack: list[int] = []
    for x in raw:
        x = int(x)
        if x == 0:
            raise ValueError("generator indices start at 1")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return GroupWord._trusted(tuple(stack))


def right_leq(a: Element, b: Element) -> bool:
    """True when ``b = c a`` for some positive ``c``."""
    if isinstance(a, ZkVector):
        return all(y >= x for x, y in zip(a.coords, b.coords))
    k = len(a.letters)
    return k <= len(b.letters) and b.letters[len(b.letters) - k:] == a.letters


def _meet_element(a: Element, b: Element) -> Optional[Element]:
    if isinstance(a, ZkVector):
        return ZkVector(max(x, y) for x, y in zip(a.coords, b.coords))
    if right_leq(a, b):
        return b
    if right_leq(b, a):
        return a
    return None


def _positive_ideal(g: Element) -> Optional[tuple[Element, Element]]:
    if isinstance(g, ZkVector):
        return (ZkVector(max(c, 0) for c in g.coords),
                ZkVector(max(-c, 0) for c in g.coords))
    letters = g.letters
    k = 0
    while k < len(letters) and letters[k] < 0:
        k += 1
    if any(x < 0 for x in letters[k:]):
        return None
    s = GroupWord._trusted(tuple(-x for x in reversed(letters[:k])))
    t = GroupWord._trusted(letters[k:])
    return t, s


@dataclass(frozen=True)
class PrincipalIdeal:
    """The right ideal ``P a``."""

    generator: Element

    def __contains__(self, b: Element) -> bool:
        return right_leq(self.generator, b)

    def __str__(self) -> str:
        return f"P({self.generator})"


def meet(a: Element, b: Element) -> Optional[PrincipalIdeal]:
    """Return ``Pc`` with ``Pa ∩ Pb = Pc``, or None when the intersection is empty."""
    c = _meet_element(a, b)
    return None if c is None else PrincipalIdeal(c)


def positive_ideal(g: Element) -> Optional[tuple[Element, Element]]:
    """Return ``(a, b)`` with ``Pg ∩ P = Pa`` and ``b = a g^{-1}``, or None.

    In the free group this is nonempty exactly when the reduced form of ``g`` is
    ``s^{-1} t`` with ``s, t`` positive, and then ``a = t``, ``b = s``.
    """
    return _positive_ideal(g)


class QuasiLatticePair:
    """Common interface of the shipped pairs ``(P, G)``."""

    identity: Element

    def mul(self, g: Element, h: Element) -> Element:
        return g * h

    def inv(self, g: Element) -> Element:
        return g.inv()

    def is_positive(self, g: Element) -> bool:
        return g.is_positive

    def length(self, g: Element) -> int:
        return len(g)

    def right_leq(self, a: Element, b: Element) -> bool:
        return right_leq(a, b)

    def meet(self, a: Element, b: Element) -> Optional[Element]:
        return _meet_element(a, b)

    def positive_ideal(self, g: Element) -> Optional[tuple[Element, Element]]:
        return _positive_ideal(g)

    def quotient(self, c: Element, a: Element) -> Element:
        """``c a^{-1}``, positive whenever ``a <= c``."""
        return c * a.inv()

    # subclasses provide enumeration, parsing and letter expansion
    def positive_words(self, max_len: int) -> list:
        raise NotImplementedError

    def group_words(self, max_len: int) -> list:
        raise NotImplementedError

    def letters_of(self, a: Element) -> tuple[int, ...]:
        raise NotImplementedError

    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def format(self, g: Element) -> str:
        return str(g)

    def check(self, g: Element) -> Element:
        raise NotImplementedError


class FreeGroup(QuasiLatticePair):
    """The free group on ``n`` generators with the free monoid as positive cone."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.identity = GroupWord()
        self.num_generators = n

    def generator(self, i: int) -> GroupWord:
        return GroupWord((i,))

    def positive_words(self, max_len: int) -> list[GroupWord]:
        """All positive words of length <= max_len in length-lexicographic order."""
        out = []
        for k in range(max_len + 1):
            for letters in itertools.product(range(1, self.n + 1), repeat=k):
                out.append(GroupWord._trusted(letters))
        return out

    def group_words(self, max_len: int) -> list[GroupWord]:
        """All reduced words of length <= max_len."""
        alphabet = [i for j in range(1, self.n + 1) for i in (j, -j)]
        layer = [()]
        out = [GroupWord()]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for x in alphabet:
                    if w and w[-1] == -x:
                        continue
                    nxt.append(w + (x,))
            out.extend(GroupWord._trusted(w) for w in nxt)
            layer = nxt
        return out

    def letters_of(self, a: GroupWord) -> tuple[int, ...]:
        if not a.is_positive:
            raise ValueError(f"{a} is not positive")
        return a.letters

    def parse(self, text: str) -> GroupWord:
        return self.check(parse_word(text))

    def format(self, g: GroupWord) -> str:
        return format_word(g)

    def check(self, g: GroupWord) -> GroupWord:
        if not isinstance(g, GroupWord):
            raise TypeError(f"expected a GroupWord, got {type(g).__name__}")
        if any(abs(x) > self.n for x in g.letters):
            raise ValueError(f"{g} uses a generator outside 1..{self.n}")
        return g

    def __repr__(self) -> str:
        return f"FreeGroup({self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("F", self.n))


class FreeAbelianGroup(QuasiLatticePair):
    """Z^k ordered by N^k; ``length`` is the l1 norm."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.identity = ZkVector((0,) * k)
        self.num_generators = k

    def generator(self, i: int) -> ZkVector:
        return ZkVector(1 if j == i - 1 else 0 for j in range(self.k))

    def _box(self, max_len: int, signed: bool) -> list[ZkVector]:
        lo = -max_len if signed else 0
        pts = [ZkVector(c) for c in itertools.product(range(lo, max_len + 1), repeat=self.k)
               if sum(abs(x) for x in c) <= max_len]
        return sorted(pts)

    def positive_words(self, max_len: int) -> list[ZkVector]:
        return self._box(max_len, signed=False)

    def group_words(self, max_len: int) -> list[ZkVector]:
        return self._box(max_len, signed=True)

    def letters_of(self, a: ZkVector) -> tuple[int, ...]:
        if not a.is_positive:
            raise ValueError(f"{a} is not positive")
        return tuple(i + 1 for i, c in enumerate(a.coords) for _ in range(c))

    def parse(self, text: str) -> ZkVector:
        text = text.strip()
        if text == "e":
            return self.identity
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"cannot parse vector {text!r}")
        body = text[1:-1].strip()
        coords = [int(c) for c in body.split(",")] if body else []
        return self.check(ZkVector(coords))

    def check(self, g: ZkVector) -> ZkVector:
        if not isinstance(g, ZkVector) or len(g.coords) != self.k:
            raise ValueError(f"{g!r} is not an element of Z^{self.k}")
        return g

    def __repr__(self) -> str:
        return f"FreeAbelianGroup({self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAbelianGroup) and other.k == self.k

    def __hash__(self) -> int:
        return hash(("Z", self.k))


def _pair_for(x: Element) -> QuasiLatticePair:
    if isinstance(x, ZkVector):
        return FreeAbelianGroup(len(x.coords))
    return FreeGroup(max((abs(i) for i in x.letters), default=1))


@dataclass(frozen=True)
class Atom:
    """The set ``P c`` minus the union of ``P e`` over the excluded ``e``.

    ``generator`` is None for an empty atom. ``index_set`` records which input
    ideals contain the atom when it comes from :func:`atomize`.
    """

    generator: Optional[Element]
    excluded: tuple = ()
    index_set: frozenset = frozenset()

    @property
    def representative(self) -> Optional[Element]:
        return self.generator

    @property
    def is_empty(self) -> bool:
        return self.generator is None

    def __contains__(self, w: Element) -> bool:
        if self.generator is None or not right_leq(self.generator, w):
            return False
        return not any(right_leq(e, w) for e in self.excluded)

    def to_record(self) -> dict:
        return {
            "index_set": sorted(self.index_set),
            "generator": None if self.generator is None else str(self.generator),
            "exclude": [str(e) for e in self.excluded],
            "representative": None if self.generator is None else str(self.generator),
        }


def _minimal_generators(pair: QuasiLatticePair, words: Iterable[Element]) -> tuple:
    # drop words whose cone sits inside another listed cone
    ws = sorted(set(words))
    keep = [w for w in ws if not any(v != w and pair.right_leq(v, w) for v in ws)]
    return tuple(keep)


class ConstructibleSet:
    """A finite disjoint union of atoms; complements are taken inside P."""

    def __init__(self, pair: QuasiLatticePair, atoms: Sequence[Atom]):
        self.pair = pair
        self.atoms = tuple(a for a in atoms if not a.is_empty)
        self._all_atoms = tuple(atoms)

    @classmethod
    def empty(cls, pair: QuasiLatticePair) -> "ConstructibleSet":
        return cls(pair, ())

    @classmethod
    def ideal(cls, pair: QuasiLatticePair, a: Element) -> "ConstructibleSet":
        return cls(pair, (Atom(a),))

    @classmethod
    def whole(cls, pair: QuasiLatticePair) -> "ConstructibleSet":
        return cls.ideal(pair, pair.identity)

    def __contains__(self, w: Element) -> bool:
        return any(w in a for a in self.atoms)

    def atom_for(self, index_set: Iterable[int]) -> Atom:
        """The atom ``Y_B`` for an index set ``B``; empty atoms have no generator."""
        key = frozenset(index_set)
        for a in self._all_atoms:
            if a.index_set == key:
                return a
        return Atom(None, (), key)

    def _words(self) -> list:
        out = []
        for a in self.atoms:
            out.append(a.generator)
            out.extend(a.excluded)
        return out

    def _refine(self, others: Sequence["ConstructibleSet"], keep) -> "ConstructibleSet":
        gens = set(self._words())
        for o in others:
            gens.update(o._words())
        fine = atomize([PrincipalIdeal(g) for g in sorted(gens)], self.pair) if gens else \
            ConstructibleSet.whole(self.pair)
        chosen = []
        for a in fine.atoms:
            r = a.representative
            if keep(r in self, *[r in o for o in others]):
                chosen.append(Atom(a.generator, a.excluded))
        return ConstructibleSet(self.pair, chosen)

    def union(self, other: "ConstructibleSet") -> "ConstructibleSet":
        return self._refine([other], lambda x, y: x or y)

    def intersection(self, other: "ConstructibleSet") -> "ConstructibleSet":
        return self._refine([other], lambda x, y: x and y)

    def difference(self, other: "ConstructibleSet") -> "ConstructibleSet":
        return self._refine([other], lambda x, y: x and not y)

    def complement(self) -> "ConstructibleSet":
        return self._refine([], lambda x: not x)

    def is_empty(self) -> bool:
        return not self.atoms

    def same_set(self, other: "ConstructibleSet") -> bool:
        return self.difference(other).is_empty() and other.difference(self).is_empty()

    def to_record(self) -> dict:
        return {"atoms": [a.to_record() for a in self._all_atoms]}

    def dumps(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def from_record(cls, pair: QuasiLatticePair, record: dict) -> "ConstructibleSet":
        atoms = []
        for r in record["atoms"]:
            gen = None if r["generator"] is None else pair.parse(r["generator"])
            atoms.append(Atom(gen, tuple(pair.parse(e) for e in r["exclude"]),
                              frozenset(r.get("index_set", ()))))
        return cls(pair, atoms)

    def __repr__(self) -> str:
        parts = []
        for a in self.atoms:
            s = f"P({a.generator})"
            if a.excluded:
                s += " \\ " + " ∪ ".join(f"P({e})" for e in a.excluded)
            parts.append(s)
        return "ConstructibleSet[" + "; ".join(parts) + "]"


def atomize(ideals: Sequence[Union[PrincipalIdeal, Element]],
            pair: Optional[QuasiLatticePair] = None) -> ConstructibleSet:
    """Split P into the atoms ``Y_B`` generated by the given principal ideals.

    ``Y_B`` is the part of the intersection of the ideals indexed by ``B`` that
    lies in no other listed ideal. Only nonempty atoms are built; each is the
    cone of a meet ``a_B`` of input generators (or of the identity when
    ``B`` is empty) with the remaining cones removed, and ``a_B`` belongs to it.
    """
    if not ideals:
        raise ValueError("atomize needs at least one ideal")
    gens = [i.generator if isinstance(i, PrincipalIdeal) else i for i in ideals]
    if pair is None:
        pair = _pair_for(gens[0])
    family = {pair.identity}
    frontier = set(gens) - family
    family |= frontier
    while frontier:
        new = set()
        for c in frontier:
            for d in list(family):
                m = pair.meet(c, d)
                if m is not None and m not in family:
                    new.add(m)
        family |= new
        frontier = new
    atoms = []
    for c in sorted(family):
        inside = frozenset(i for i, b in enumerate(gens) if pair.right_leq(b, c))
        excl = []
        for i, b in enumerate(gens):
            if i in inside:
                continue
            m = pair.meet(c, b)
            if m is not None:
                excl.append(m)
        atoms.append(Atom(c, _minimal_generators(pair, excl), inside))
    return ConstructibleSet(pair, atoms)


class OmegaPoint:
    """A point of the compactification Ω given by a word.

    With ``depth_truncated`` False this is the principal point ``P^{-1} a``.
    Otherwise ``word`` holds the last letters of a left-infinite word, and
    membership questions that need more letters are undecided.
    """

    __slots__ = ("word", "depth_truncated")

    def __init__(self, word: Element, depth_truncated: bool = False):
        if not word.is_positive:
            raise ValueError("an Ω point is labelled by a positive word")
        if depth_truncated and isinstance(word, ZkVector):
            raise ValueError("boundary points are only modelled for free monoids")
        self.word = word
        self.depth_truncated = depth_truncated

    @property
    def depth(self) -> int:
        return len(self.word)

    def contains(self, g: Element) -> Optional[bool]:
        """Three-valued membership of ``g`` in X; None means undecided."""
        pi = _positive_ideal(g)
        if pi is None:
            return False
        a = pi[0]
        if right_leq(a, self.word):
            return True
        if self.depth_truncated and len(a) > self.depth:
            return None
        return False

    def suffixes(self) -> list:
        """The positive elements of X (for principal points)."""
        if isinstance(self.word, ZkVector):
            return [ZkVector(c) for c in itertools.product(*(range(x + 1) for x in self.word.coords))]
        L = self.word.letters
        return [GroupWord._trusted(L[i:]) for i in range(len(L) + 1)]

    def translate(self, g: Element) -> "OmegaPoint":
        """The point ``X g``; requires ``g^{-1}`` in X."""
        ok = self.contains(g.inv())
        if ok is None:
            raise ValueError(f"translation by {g} exceeds the stored depth")
        if not ok:
            raise ValueError(f"{g.inv()} is not in {self}")
        return OmegaPoint(self.word * g, self.depth_truncated)

    def __eq__(self, other) -> bool:
        return (isinstance(other, OmegaPoint) and self.word == other.word
                and self.depth_truncated == other.depth_truncated)

    def __hash__(self) -> int:
        return hash((self.word, self.depth_truncated))

    def __repr__(self) -> str:
        tag = "..." if self.depth_truncated else ""
        return f"OmegaPoint({tag}{self.word})"


def omega_membership(X: OmegaPoint, g: Element) -> Optional[bool]:
    return X.contains(g)
