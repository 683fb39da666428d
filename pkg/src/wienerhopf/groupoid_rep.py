"""Sections of the Wiener-Hopf groupoid and the maps to and from normal forms.

Diagonal data are functions on G spanned by

    j_g(x)(h) = α_{h g^{-1}}(x)   if h ∈ Pg,   0 otherwise.

For a unital action the indicator ``1_{Ωg}`` of ``Pg`` is ``j_g(1)`` and products
of ``j``'s are again single ``j``'s, so every diagonal element is stored as a
finite sum ``Σ_g j_g(x_g)``. That representation is unique: evaluating at a
minimal index recovers its coefficient.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Optional

import numpy as np

from .coeff_algebra import Action, AlgebraElement
from .nica_symbolic import NicaAlgebra, NormalFormElement
from .qlattice_core import OmegaPoint, QuasiLatticePair

__all__ = [
    "GroupoidArrow", "GDiagonalElement", "SectionElement", "WienerHopfGroupoid",
    "enumerate_arrows", "translate", "convolve", "adjoint", "lambda_map", "mu_map",
]


class GroupoidArrow:
    """An arrow ``(X, g)`` with ``g^{-1} ∈ X``; its source is ``X g``."""

    __slots__ = ("X", "g")

    def __init__(self, X: OmegaPoint, g):
        ok = X.contains(g.inv())
        if ok is None:
            raise ValueError(f"cannot decide whether ({X}, {g}) is an arrow")
        if not ok:
            raise ValueError(f"({X}, {g}) is not an arrow: {g.inv()} is not in X")
        self.X = X
        self.g = g

    @property
    def range(self) -> OmegaPoint:
        return self.X

    @property
    def source(self) -> OmegaPoint:
        return self.X.translate(self.g)

    def compose(self, other: "GroupoidArrow") -> "GroupoidArrow":
        if other.X != self.source:
            raise ValueError("arrows are not composable")
        return GroupoidArrow(self.X, self.g * other.g)

    def inverse(self) -> "GroupoidArrow":
        return GroupoidArrow(self.source, self.g.inv())

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupoidArrow) and self.X == other.X and self.g == other.g

    def __hash__(self) -> int:
        return hash((self.X, self.g))

    def to_text(self) -> str:
        return f"{self.X.word}\t{self.g}"

    def __repr__(self) -> str:
        return f"GroupoidArrow({self.X.word}, {self.g})"


def enumerate_arrows(pair: QuasiLatticePair, depth: int, gbound: int) -> list[GroupoidArrow]:
    """All arrows out of principal points ``P^{-1}a`` with ``|a| <= depth`` and ``|g| <= gbound``."""
    out = []
    gs = pair.group_words(gbound)
    for a in pair.positive_words(depth):
        X = OmegaPoint(a)
        for g in gs:
            if X.contains(g.inv()):
                out.append(GroupoidArrow(X, g))
    return out


class GDiagonalElement:
    """``Σ_g j_g(x_g)``, a function on G with values in A."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: "WienerHopfGroupoid", terms: dict):
        self.parent = parent
        self.terms = terms

    def evaluate(self, h) -> AlgebraElement:
        act = self.parent.action
        out = self.parent.desc.zero()
        for g, x in self.terms.items():
            k = h * g.inv()
            if k.is_positive:
                out = out + act.apply(k, x)
        return out

    def __add__(self, other: "GDiagonalElement") -> "GDiagonalElement":
        out = dict(self.terms)
        for g, x in other.terms.items():
            out[g] = out[g] + x if g in out else x
        return self.parent.diagonal(out)

    def __sub__(self, other: "GDiagonalElement") -> "GDiagonalElement":
        return self + (-other)

    def __neg__(self) -> "GDiagonalElement":
        return GDiagonalElement(self.parent, {g: -x for g, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, GDiagonalElement):
            return self.parent.diagonal_product(self, other)
        return self.parent.diagonal({g: complex(other) * x for g, x in self.terms.items()})

    def __rmul__(self, c):
        return self.parent.diagonal({g: complex(c) * x for g, x in self.terms.items()})

    def adjoint(self) -> "GDiagonalElement":
        return GDiagonalElement(self.parent, {g: x.adjoint() for g, x in self.terms.items()})

    def translate(self, s) -> "GDiagonalElement":
        """``β_s(f)(h) = f(h s)``; on generators ``β_s(j_g(x)) = j_{g s^{-1}}(x)``."""
        si = s.inv()
        return GDiagonalElement(self.parent, {g * si: x for g, x in self.terms.items()})

    def restrict_to_omega(self) -> "GDiagonalElement":
        """``1_Ω d``: uses ``1_Ω j_g(x) = j_a(α_b(x))`` with ``Pg ∩ P = Pa``, ``b = a g^{-1}``."""
        return self.parent.one_omega() * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, GDiagonalElement) or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[g] == other.terms[g] for g in self.terms)

    __hash__ = None

    def equals_on(self, other: "GDiagonalElement", points: Iterable, atol: float = 0.0) -> bool:
        for h in points:
            d = self.evaluate(h) - other.evaluate(h)
            if np.max(np.abs(d.data), initial=0.0) > atol:
                return False
        return True

    def to_records(self) -> list[dict]:
        fmt = self.parent.pair.format
        return [{"S": "G", "h": fmt(g), "coefficient": x.to_record()}
                for g, x in sorted(self.terms.items(), key=lambda kv: kv[0])]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"j[{g}]({x!r})" for g, x in sorted(self.terms.items(), key=lambda kv: kv[0]))


class SectionElement:
    """``Σ_g W_{d_g, g}`` with each ``d_g`` replaced by ``1_Ω 1_{Ωg^{-1}} d_g``."""

    __slots__ = ("parent", "summands")

    def __init__(self, parent: "WienerHopfGroupoid", summands: dict):
        self.parent = parent
        self.summands = summands

    def __add__(self, other: "SectionElement") -> "SectionElement":
        out = dict(self.summands)
        for g, d in other.summands.items():
            out[g] = out[g] + d if g in out else d
        return self.parent.section(out)

    def __sub__(self, other: "SectionElement") -> "SectionElement":
        return self + (-other)

    def __neg__(self) -> "SectionElement":
        return SectionElement(self.parent, {g: -d for g, d in self.summands.items()})

    def __mul__(self, other):
        if isinstance(other, SectionElement):
            return self.parent.convolve(self, other)
        return self.parent.section({g: complex(other) * d for g, d in self.summands.items()})

    def __rmul__(self, c):
        return self.parent.section({g: complex(c) * d for g, d in self.summands.items()})

    def adjoint(self) -> "SectionElement":
        """``W_{d,g}* = W_{β_{g^{-1}}(d*), g^{-1}}``."""
        return self.parent.section({g.inv(): d.adjoint().translate(g.inv()) for g, d in self.summands.items()})

    def value_at(self, a, h) -> AlgebraElement:
        """The fibre value at the arrow ``(P^{-1}a, h)`` read through evaluation at ``a``."""
        ah = a * h
        if not ah.is_positive:
            raise ValueError(f"({a}, {h}) is not an arrow")
        d = self.summands.get(h)
        return self.parent.desc.zero() if d is None else d.evaluate(a)

    def is_zero(self) -> bool:
        return not self.summands

    def __eq__(self, other) -> bool:
        if not isinstance(other, SectionElement) or set(self.summands) != set(other.summands):
            return False
        return all(self.summands[g] == other.summands[g] for g in self.summands)

    __hash__ = None

    def equals_by_evaluation(self, other: "SectionElement", L_eq: int = 8, atol: float = 0.0) -> bool:
        """Compare every ``d_g`` at all positive words of length <= L_eq."""
        pts = self.parent.pair.positive_words(L_eq)
        zero = self.parent.diagonal({})
        for g in set(self.summands) | set(other.summands):
            if not self.summands.get(g, zero).equals_on(other.summands.get(g, zero), pts, atol):
                return False
        return True

    def to_records(self) -> list[dict]:
        fmt = self.parent.pair.format
        return [{"g": fmt(g), "terms": d.to_records()}
                for g, d in sorted(self.summands.items(), key=lambda kv: kv[0])]

    def __repr__(self) -> str:
        if not self.summands:
            return "0"
        return " + ".join(f"W[{d!r}, {g}]" for g, d in sorted(self.summands.items(), key=lambda kv: kv[0]))


class WienerHopfGroupoid:
    """Section calculus for a unital action, plus the maps λ and μ."""

    def __init__(self, action: Action):
        action.require_unital()
        self.action = action
        self.pair = action.pair
        self.desc = action.desc
        self.nica = NicaAlgebra(action)

    # diagonal part
    def diagonal(self, terms: Mapping) -> GDiagonalElement:
        return GDiagonalElement(self, {g: x for g, x in terms.items() if not x.is_zero()})

    def j(self, g, x: AlgebraElement) -> GDiagonalElement:
        return self.diagonal({g: x})

    def indicator(self, g) -> GDiagonalElement:
        """``1_{Ωg}``, which on G is the indicator of ``Pg``."""
        return self.j(g, self.desc.one())

    def one_omega(self) -> GDiagonalElement:
        return self.indicator(self.pair.identity)

    def diagonal_product(self, d1: GDiagonalElement, d2: GDiagonalElement) -> GDiagonalElement:
        # j_{g1}(x1) j_{g2}(x2) = j_{a g2}(α_b(x1) α_a(x2)) where (a, b) = positive_ideal(g1 g2^{-1})
        act = self.action
        out: dict = {}
        for g1, x1 in d1.terms.items():
            for g2, x2 in d2.terms.items():
                pi = self.pair.positive_ideal(g1 * g2.inv())
                if pi is None:
                    continue
                a, b = pi
                g = a * g2
                val = act.apply(b, x1) * act.apply(a, x2)
                out[g] = out[g] + val if g in out else val
        return self.diagonal(out)

    # sections
    def canonical(self, d: GDiagonalElement, g) -> GDiagonalElement:
        return self.one_omega() * self.indicator(g.inv()) * d

    def W(self, d: GDiagonalElement, g) -> SectionElement:
        return self.section({g: d})

    def section(self, summands: Mapping) -> SectionElement:
        out = {}
        for g, d in summands.items():
            c = self.canonical(d, g)
            if not c.is_zero():
                out[g] = c
        return SectionElement(self, out)

    def unit(self) -> SectionElement:
        return self.W(self.one_omega(), self.pair.identity)

    def convolve(self, f1: SectionElement, f2: SectionElement) -> SectionElement:
        """``W_{d1,g1} W_{d2,g2} = W_{1_{Ω g1^{-1}} d1 β_{g1}(d2), g1 g2}``, extended bilinearly."""
        out: dict = {}
        for g1, d1 in f1.summands.items():
            left = self.indicator(g1.inv()) * d1
            for g2, d2 in f2.summands.items():
                d = left * d2.translate(g1)
                g = g1 * g2
                out[g] = out[g] + d if g in out else d
        return self.section(out)

    def arrow_value(self, f: SectionElement, arrow: GroupoidArrow) -> AlgebraElement:
        if arrow.X.depth_truncated:
            raise ValueError("boundary points are not evaluated")
        return f.value_at(arrow.X.word, arrow.g)

    # the maps to and from normal forms
    def lambda_map(self, z: NormalFormElement) -> SectionElement:
        """λ on normal forms: ``λ(x) = W_{j_e(x), e}``, ``λ(v_a) = W_{1_Ω, a^{-1}}``."""
        e = self.pair.identity
        total = self.section({})
        for (a, b), x in z.terms.items():
            va = self.W(self.one_omega(), a.inv())
            vb = self.W(self.one_omega(), b.inv())
            total = total + va * self.W(self.j(e, x), e) * vb.adjoint()
        return total

    def nu(self, d: GDiagonalElement) -> NormalFormElement:
        """``ν(j_h(x)) = w_h x w_h*``."""
        T = self.nica
        total = T.zero()
        for h, x in d.terms.items():
            wh = T.w(h)
            total = total + wh * T.coeff(x) * wh.adjoint()
        return total

    def mu_map(self, f: SectionElement) -> NormalFormElement:
        """``μ(f) = Σ_g ν(d_g) w_{g^{-1}}``."""
        T = self.nica
        total = T.zero()
        for g, d in f.summands.items():
            total = total + self.nu(d) * T.w(g.inv())
        return total

    def from_records(self, records) -> SectionElement:
        parse = self.pair.parse
        summands: dict = {}
        for r in records:
            g = parse(r["g"])
            d = self.diagonal({})
            for t in r["terms"]:
                if t.get("S", "G") != "G":
                    d_S = self._set_from_text(t["S"])
                else:
                    d_S = None
                piece = self.j(parse(t["h"]), AlgebraElement.from_record(self.desc, t["coefficient"]))
                d = d + (piece if d_S is None else d_S * piece)
            summands[g] = summands[g] + d if g in summands else d
        return self.section(summands)

    def _set_from_text(self, text: str) -> GDiagonalElement:
        # "Ωg" style indicator names, e.g. "Omega.A1" for 1_{Ω a1^{-1}}
        if not text.startswith("Omega"):
            raise ValueError(f"unknown set label {text!r}")
        rest = text[len("Omega"):].lstrip(".")
        return self.indicator(self.pair.parse(rest or "e"))


def translate(d: GDiagonalElement, g) -> GDiagonalElement:
    return d.translate(g)


def convolve(f1: SectionElement, f2: SectionElement) -> SectionElement:
    return f1.parent.convolve(f1, f2)


def adjoint(f: SectionElement) -> SectionElement:
    return f.adjoint()


def lambda_map(G: WienerHopfGroupoid, z: NormalFormElement) -> SectionElement:
    return G.lambda_map(z)


def mu_map(G: WienerHopfGroupoid, f: SectionElement) -> NormalFormElement:
    return G.mu_map(f)
