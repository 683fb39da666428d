"""Exhaustive brute-force oracles for the order calculus.

Nothing here calls the word arithmetic under test: words are enumerated with
``itertools``, suffix tests use base-(n+1) integer codes and products ``p g``
are reduced by a vectorized junction cancellation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .qlattice_core import FreeAbelianGroup, FreeGroup, GroupWord, ZkVector, right_leq

__all__ = ["OracleReport", "meet_oracle", "positive_ideal_oracle", "abelian_oracle", "atomize_oracle"]


@dataclass
class OracleReport:
    name: str
    cases: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _positive_tuples(n: int, max_len: int) -> list[tuple]:
    return [t for k in range(max_len + 1) for t in itertools.product(range(1, n + 1), repeat=k)]


def _reduced_tuples(n: int, max_len: int) -> list[tuple]:
    letters = [s * i for i in range(1, n + 1) for s in (1, -1)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [t + (x,) for t in frontier for x in letters if not t or t[-1] != -x]
        out.extend(frontier)
    return out


def _codes(words: list[tuple], base: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer code with the rightmost letter as the lowest digit, plus lengths."""
    code = np.zeros(len(words), dtype=np.int64)
    length = np.array([len(w) for w in words], dtype=np.int64)
    for i, w in enumerate(words):
        c = 0
        for x in w:
            c = c * base + x
        code[i] = c
    return code, length


def _cone_matrix(gens: list[tuple], witnesses: list[tuple], n: int) -> np.ndarray:
    """Packed bit rows: bit w of row a is set when a is a suffix of w."""
    base = n + 1
    wc, wl = _codes(witnesses, base)
    gc, gl = _codes(gens, base)
    rows = np.zeros((len(gens), len(witnesses)), dtype=bool)
    for k in range(int(gl.max()) + 1):
        sel = np.nonzero(gl == k)[0]
        if not len(sel):
            continue
        tail = wc % (base ** k)
        ok = wl >= k
        rows[sel] = (tail[None, :] == gc[sel][:, None]) & ok[None, :]
    return np.packbits(rows, axis=1)


def meet_oracle(n: int, max_len: int = 6, witness_len: int = 12) -> OracleReport:
    """Compare ``meet`` with the brute-force cone intersection inside a witness window."""
    F = FreeGroup(n)
    rep = OracleReport(f"meet n={n} |a|,|b|<={max_len} witnesses<={witness_len}")
    gens = _positive_tuples(n, max_len)
    wit = _positive_tuples(n, witness_len)
    M = _cone_matrix(gens, wit, n)
    index = {t: i for i, t in enumerate(gens)}
    words = [GroupWord(t) for t in gens]
    empty = np.zeros(M.shape[1], dtype=M.dtype)
    for i, a in enumerate(words):
        inter = M[i][None, :] & M
        expected = np.empty_like(M)
        for j, b in enumerate(words):
            c = F.meet(a, b)
            expected[j] = empty if c is None else M[index[c.letters]]
        bad = np.nonzero(~np.all(inter == expected, axis=1))[0]
        rep.cases += len(words)
        rep.mismatches.extend((str(a), str(words[j])) for j in bad)
    return rep


def positive_ideal_oracle(n: int, max_len: int = 6, probe_len: int = 6) -> OracleReport:
    """Compare ``positive_ideal(g) = (a, b)`` with ``{p : p g ∈ P} = P b`` over ``|p| <= probe_len``."""
    F = FreeGroup(n)
    rep = OracleReport(f"positive_ideal n={n} |g|<={max_len} |p|<={probe_len}")
    probes = _positive_tuples(n, probe_len)
    base = n + 1
    pc, pl = _codes(probes, base)
    width = max(probe_len, max_len)
    prev = np.zeros((len(probes), width), dtype=np.int64)
    for i, p in enumerate(probes):
        for k, x in enumerate(reversed(p)):
            prev[i, k] = x
    gs = _reduced_tuples(n, max_len)
    for start in range(0, len(gs), 2000):
        chunk = gs[start:start + 2000]
        gl = np.zeros((len(chunk), width), dtype=np.int64)
        for i, g in enumerate(chunk):
            gl[i, :len(g)] = g
        # neg_after[g, j]: some letter of g at position >= j is an inverse
        neg = gl < 0
        neg_after = np.zeros((len(chunk), width + 1), dtype=bool)
        neg_after[:, :width] = np.flip(np.cumsum(np.flip(neg, axis=1), axis=1), axis=1) > 0
        match = (prev[None, :, :] == -gl[:, None, :]) & (gl[:, None, :] != 0)
        cancel = np.cumprod(match, axis=2).sum(axis=2)
        positive = ~np.take_along_axis(neg_after, cancel, axis=1)
        for i, g in enumerate(chunk):
            got = F.positive_ideal(GroupWord(g))
            rep.cases += 1
            if got is None:
                if positive[i].any():
                    rep.mismatches.append((str(GroupWord(g)), "expected nonempty"))
                continue
            a, b = got
            if not (a.is_positive and b.is_positive) or (b * GroupWord(g)) != a:
                rep.mismatches.append((str(GroupWord(g)), "returned pair is inconsistent"))
                continue
            k = len(b)
            bcode = 0
            for x in b.letters:
                bcode = bcode * base + x
            cone = (pc % (base ** k) == bcode) & (pl >= k)
            if not np.array_equal(cone, positive[i]):
                rep.mismatches.append((str(GroupWord(g)), str(b)))
    return rep


def abelian_oracle(k: int = 2, max_len: int = 6) -> OracleReport:
    """Meet and positive_ideal in N^k against coordinatewise brute force."""
    Z = FreeAbelianGroup(k)
    rep = OracleReport(f"N^{k} |a|<={max_len}")
    pos = [v for v in itertools.product(range(max_len + 1), repeat=k) if sum(v) <= max_len]
    wit = [v for v in itertools.product(range(2 * max_len + 1), repeat=k) if sum(v) <= 2 * max_len]
    W = np.array(wit)

    def cone(a) -> np.ndarray:
        return np.all(W >= np.array(a), axis=1)

    cones = {a: cone(a) for a in pos}
    for a in pos:
        for b in pos:
            rep.cases += 1
            inter = cones[a] & cones[b]
            c = Z.meet(ZkVector(a), ZkVector(b))
            exp = cone(c.coords) if c is not None else np.zeros(len(W), dtype=bool)
            if c is None or not np.array_equal(inter, exp):
                rep.mismatches.append((a, b))
    probes = np.array(pos)
    gs = [v for v in itertools.product(range(-max_len, max_len + 1), repeat=k) if sum(map(abs, v)) <= max_len]
    for g in gs:
        rep.cases += 1
        hit = np.all(probes + np.array(g) >= 0, axis=1)
        got = Z.positive_ideal(ZkVector(g))
        if got is None:
            if hit.any():
                rep.mismatches.append((g, "expected nonempty"))
            continue
        a, b = got
        exp = np.all(probes >= np.array(b.coords), axis=1)
        if not np.array_equal(hit, exp) or ZkVector(np.add(b.coords, g)) != a:
            rep.mismatches.append((g, b.coords))
    return rep


def atomize_oracle(cs, max_len: int = 8) -> OracleReport:
    """Every word lies in exactly one atom and each representative lies in its atom."""
    pair = cs.pair
    rep = OracleReport(f"atomize over |w|<={max_len}")
    for w in pair.positive_words(max_len):
        rep.cases += 1
        hits = [i for i, at in enumerate(cs.atoms) if w in at]
        if len(hits) != 1:
            rep.mismatches.append((str(w), f"in {len(hits)} atoms"))
    for at in cs.atoms:
        if at.generator is not None and at.generator not in at:
            rep.mismatches.append((str(at.generator), "representative outside its atom"))
        if at.generator is not None and any(right_leq(x, at.generator) for x in at.excluded):
            rep.mismatches.append((str(at.generator), "representative in an excluded cone"))
    return rep
