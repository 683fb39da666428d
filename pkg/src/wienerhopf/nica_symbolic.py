"""The universal Nica covariance algebra in normal form ``Σ v_a x v_b*``.

Multiplication follows the rule
``(v_{a1} x v_{b1}*)(v_{a2} y v_{b2}*) = v_{s a1} α_s(x) α_t(y) v_{t b2}*``
where ``P b1 ∩ P a2 = P c`` and ``s b1 = t a2 = c``; the product is zero when
the intersection is empty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .coeff_algebra import Action, AlgebraDescriptor, AlgebraElement, Endomorphism, unitise
from .qlattice_core import Atom, PrincipalIdeal, atomize

__all__ = [
    "NicaAlgebra", "NormalFormElement", "DiagonalAtom", "DiagonalForm", "NonDiagonalError",
    "WRelationReport", "UnitisationReport", "multiply", "star_product", "w_of",
    "check_w_relations", "to_diagonal", "diagonal_norm", "evaluate", "unitise_split_check",
]


class NonDiagonalError(ValueError):
    pass


class NicaAlgebra:
    """Factory and multiplication rule for normal-form elements over a unital action."""

    def __init__(self, action: Action):
        action.require_unital()
        self.action = action
        self.pair = action.pair
        self.desc = action.desc

    def element(self, terms: Mapping) -> "NormalFormElement":
        clean = {}
        for (a, b), x in terms.items():
            if not (a.is_positive and b.is_positive):
                raise ValueError(f"normal-form keys must be positive, got ({a}, {b})")
            if x.desc != self.desc:
                raise ValueError("coefficient algebra mismatch")
            if not x.is_zero():
                clean[(a, b)] = x
        return NormalFormElement(self, clean)

    def zero(self) -> "NormalFormElement":
        return NormalFormElement(self, {})

    def monomial(self, a, x: AlgebraElement, b) -> "NormalFormElement":
        return self.element({(a, b): x})

    def one(self) -> "NormalFormElement":
        e = self.pair.identity
        return self.monomial(e, self.desc.one(), e)

    def coeff(self, x: AlgebraElement) -> "NormalFormElement":
        e = self.pair.identity
        return self.monomial(e, x, e)

    def v(self, a) -> "NormalFormElement":
        return self.monomial(a, self.desc.one(), self.pair.identity)

    def vstar(self, a) -> "NormalFormElement":
        return self.monomial(self.pair.identity, self.desc.one(), a)

    def range_projection(self, a) -> "NormalFormElement":
        """``e_a = v_a v_a*`` for positive ``a``."""
        return self.monomial(a, self.desc.one(), a)

    def w(self, g) -> "NormalFormElement":
        """``w_g = v_a v_{a g^{-1}}*`` when ``Pg ∩ P = Pa``, else 0."""
        pi = self.pair.positive_ideal(g)
        if pi is None:
            return self.zero()
        a, b = pi
        return self.monomial(a, self.desc.one(), b)

    def e(self, g) -> "NormalFormElement":
        """``e_g = w_g w_g*``."""
        pi = self.pair.positive_ideal(g)
        if pi is None:
            return self.zero()
        return self.range_projection(pi[0])

    def multiply(self, z1: "NormalFormElement", z2: "NormalFormElement") -> "NormalFormElement":
        if z1.parent is not self or z2.parent is not self:
            if z1.parent.desc != z2.parent.desc or z1.parent.pair != z2.parent.pair:
                raise ValueError("factors live over different algebras")
        pair, act = self.pair, self.action
        out: dict = {}
        for (a1, b1), x in z1.terms.items():
            for (a2, b2), y in z2.terms.items():
                c = pair.meet(b1, a2)
                if c is None:
                    continue
                s = pair.quotient(c, b1)
                t = pair.quotient(c, a2)
                key = (s * a1, t * b2)
                val = act.apply(s, x) * act.apply(t, y)
                out[key] = out[key] + val if key in out else val
        return self.element(out)

    def star_product(self, a, b) -> "NormalFormElement":
        """``v_a* v_b = v_{c a^{-1}} v_{c b^{-1}}*`` with ``Pa ∩ Pb = Pc``, or 0."""
        c = self.pair.meet(a, b)
        if c is None:
            return self.zero()
        return self.monomial(self.pair.quotient(c, a), self.desc.one(), self.pair.quotient(c, b))

    def from_records(self, records: Iterable[Mapping]) -> "NormalFormElement":
        terms: dict = {}
        for r in records:
            key = (self.pair.parse(r["a"]), self.pair.parse(r["b"]))
            x = AlgebraElement.from_record(self.desc, r["coefficient"])
            terms[key] = terms[key] + x if key in terms else x
        return self.element(terms)


class NormalFormElement:
    """A finite sum ``Σ v_a x_{a,b} v_b*`` keyed by ``(a, b)``; never stores zero coefficients."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: NicaAlgebra, terms: dict):
        self.parent = parent
        self.terms = terms

    def _combine(self, other: "NormalFormElement", sign: int) -> "NormalFormElement":
        out = dict(self.terms)
        for k, x in other.terms.items():
            if k in out:
                out[k] = out[k] + x if sign > 0 else out[k] - x
            else:
                out[k] = x if sign > 0 else -x
        return self.parent.element(out)

    def __add__(self, other: "NormalFormElement") -> "NormalFormElement":
        return self._combine(other, 1)

    def __sub__(self, other: "NormalFormElement") -> "NormalFormElement":
        return self._combine(other, -1)

    def __neg__(self) -> "NormalFormElement":
        return NormalFormElement(self.parent, {k: -x for k, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NormalFormElement):
            return self.parent.multiply(self, other)
        if isinstance(other, AlgebraElement):
            return self.parent.multiply(self, self.parent.coeff(other))
        return self.parent.element({k: complex(other) * x for k, x in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.parent.multiply(self.parent.coeff(other), self)
        return self.parent.element({k: complex(other) * x for k, x in self.terms.items()})

    def adjoint(self) -> "NormalFormElement":
        return NormalFormElement(self.parent, {(b, a): x.adjoint() for (a, b), x in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def is_diagonal(self) -> bool:
        return all(a == b for a, b in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalFormElement) or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def max_abs_difference(self, other: "NormalFormElement") -> float:
        d = self - other
        return max((float(np.max(np.abs(x.data))) for x in d.terms.values()), default=0.0)

    def to_records(self) -> list[dict]:
        fmt = self.parent.pair.format
        return [{"a": fmt(a), "b": fmt(b), "coefficient": x.to_record()}
                for (a, b), x in sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        fmt = self.parent.pair.format
        return " + ".join(f"v[{fmt(a)}] {x!r} v[{fmt(b)}]*"
                          for (a, b), x in sorted(self.terms.items(), key=lambda kv: kv[0]))


def multiply(z1: NormalFormElement, z2: NormalFormElement) -> NormalFormElement:
    return z1.parent.multiply(z1, z2)


def star_product(T: NicaAlgebra, a, b) -> NormalFormElement:
    return T.star_product(a, b)


def w_of(T: NicaAlgebra, g) -> NormalFormElement:
    return T.w(g)


@dataclass
class WRelationReport:
    g: object
    h: object
    product: NormalFormElement
    expected_product: NormalFormElement
    projection_product: NormalFormElement
    expected_projection: NormalFormElement

    @property
    def product_holds(self) -> bool:
        return self.product == self.expected_product

    @property
    def projection_holds(self) -> bool:
        return self.projection_product == self.expected_projection

    @property
    def holds(self) -> bool:
        return self.product_holds and self.projection_holds


def check_w_relations(T: NicaAlgebra, g, h) -> WRelationReport:
    """Compare ``w_g w_h`` with ``e_g w_{hg}`` and ``e_g e_h`` with its case rule."""
    pair = T.pair
    lhs = T.w(g) * T.w(h)
    rhs = T.e(g) * T.w(h * g)
    eprod = T.e(g) * T.e(h)
    pg, ph = pair.positive_ideal(g), pair.positive_ideal(h)
    expected = T.zero()
    if pg is not None and ph is not None:
        c = pair.meet(pg[0], ph[0])
        if c is not None:
            expected = T.range_projection(c)
    return WRelationReport(g, h, lhs, rhs, eprod, expected)


@dataclass
class DiagonalAtom:
    region: Atom
    representative: object
    coefficient: AlgebraElement


class DiagonalForm:
    """``Σ e_{Y_i} v_{a_i} x_i v_{a_i}*`` over pairwise disjoint atoms ``Y_i ∋ a_i``.

    As a function on P it takes the value ``α_{b a_i^{-1}}(x_i)`` at ``b ∈ Y_i``.
    """

    def __init__(self, action: Action, atoms: Iterable[DiagonalAtom]):
        self.action = action
        self.atoms = tuple(atoms)

    def evaluate(self, b) -> AlgebraElement:
        for at in self.atoms:
            if b in at.region:
                return self.action.apply(self.action.pair.quotient(b, at.representative), at.coefficient)
        return self.action.desc.zero()

    def norm(self) -> float:
        return float(max((at.coefficient.norm() for at in self.atoms), default=0.0))

    def max_length(self) -> int:
        lens = [len(at.representative) for at in self.atoms]
        lens += [len(e) for at in self.atoms for e in at.region.excluded]
        return max(lens, default=0)

    def equals(self, other: "DiagonalForm", L_eq: int = 8, atol: float = 0.0) -> bool:
        """Pointwise comparison on all positive words up to length ``L_eq``.

        The bound is raised to cover every generator and exclusion word of both
        forms; past that bound the difference is determined by its values there.
        """
        bound = max(L_eq, self.max_length(), other.max_length())
        for b in self.action.pair.positive_words(bound):
            d = self.evaluate(b) - other.evaluate(b)
            if np.max(np.abs(d.data), initial=0.0) > atol:
                return False
        return True

    def __repr__(self) -> str:
        return "DiagonalForm[" + "; ".join(
            f"({at.region!r}, {at.representative}, {at.coefficient!r})" for at in self.atoms) + "]"


def to_diagonal(z: NormalFormElement) -> DiagonalForm:
    """Rewrite ``Σ v_b y_b v_b*`` over the disjoint atoms of the cones ``Pb``.

    On the atom ``Y_B`` with representative ``a_B`` the coefficient is
    ``Σ_{i ∈ B} α_{a_B b_i^{-1}}(y_i)``; atoms with zero coefficient are dropped.
    """
    if not z.is_diagonal():
        bad = next((a, b) for a, b in z.terms if a != b)
        raise NonDiagonalError(f"term ({bad[0]}, {bad[1]}) is off the diagonal")
    T = z.parent
    act, pair = T.action, T.pair
    if z.is_zero():
        return DiagonalForm(act, ())
    items = sorted(((a, x) for (a, _), x in z.terms.items()), key=lambda t: t[0])
    gens = [a for a, _ in items]
    cs = atomize([PrincipalIdeal(b) for b in gens], pair)
    atoms = []
    for atom in cs.atoms:
        aB = atom.generator
        x = T.desc.zero()
        for i in atom.index_set:
            b, y = items[i]
            x = x + act.apply(pair.quotient(aB, b), y)
        if not x.is_zero():
            atoms.append(DiagonalAtom(atom, aB, x))
    return DiagonalForm(act, atoms)


def diagonal_norm(z: DiagonalForm) -> float:
    return z.norm()


def evaluate(z: DiagonalForm, b) -> AlgebraElement:
    return z.evaluate(b)


@dataclass
class UnitisationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def unitise_split_check(action: Action, max_len: int = 3) -> UnitisationReport:
    """Check the scalar-part map against the scalar embedding on ``{w_g}``.

    ``ε~`` applies ``ε(x, λ) = λ`` to every coefficient of an element over
    ``A⁺``; ``σ`` embeds a scalar normal form by ``λ ↦ λ 1``.
    """
    U = unitise(action)
    Tp = NicaAlgebra(U.action)
    cdesc = AlgebraDescriptor((1,))
    S = NicaAlgebra(Action(action.pair, cdesc, [Endomorphism.identity(cdesc)] * action.pair.num_generators))

    def eps(z: NormalFormElement) -> NormalFormElement:
        return S.element({k: cdesc.scalar(U.epsilon(x)) for k, x in z.terms.items()})

    def sigma(z: NormalFormElement) -> NormalFormElement:
        return Tp.element({k: U.scalar(complex(x.data[0])) for k, x in z.terms.items()})

    rep = UnitisationReport()
    words = action.pair.group_words(max_len)
    basis = action.desc.basis()
    for g in words:
        wg = S.w(g)
        rep.checked += 1
        if eps(sigma(wg)) != wg:
            rep.failures.append(("section", g))
        for x in basis:
            rep.checked += 1
            if not eps(Tp.coeff(U.embed(x)) * Tp.w(g)).is_zero():
                rep.failures.append(("kills A", g, x))
    rep.checked += 1
    if eps(Tp.one() * Tp.w(action.pair.identity)) != S.one():
        rep.failures.append(("unit",))
    # multiplicativity of the scalar-part map on products of w's
    short = action.pair.group_words(min(max_len, 2))
    for g in short:
        for h in short:
            rep.checked += 1
            if eps(Tp.w(g) * Tp.w(h)) != eps(Tp.w(g)) * eps(Tp.w(h)):
                rep.failures.append(("multiplicative", g, h))
    return rep
