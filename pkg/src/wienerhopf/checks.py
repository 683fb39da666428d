"""Verification suites run by the command line and the acceptance tests.

Each suite takes a :class:`RunConfig` and returns a list of
:class:`CheckResult`. Sampling is driven by ``numpy.random.default_rng(seed)``
so a suite is deterministic given its config.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from .config import RunConfig
from .fock_rep import AMatrix, FockRepresentation
from .groupoid_rep import WienerHopfGroupoid, enumerate_arrows
from .kk_fredholm import (DEFAULT_T_GRID, HomotopyModule, KasparovData, commutator_defect, endpoint_inclusion_check,
                 endpoint_rotation_check, homotopy_nica_check, lipschitz_check)
from .nica_symbolic import NicaAlgebra, check_w_relations, to_diagonal, unitise_split_check
from .oracles import abelian_oracle, atomize_oracle, meet_oracle, positive_ideal_oracle
from .presets import random_element, random_group_element, random_positive, scalar_action
from .qlattice_core import FreeAbelianGroup, FreeGroup, PrincipalIdeal, atomize
from .report import CheckResult, verdict

__all__ = ["SUITES", "run_suite", "thread_count", "random_normal_form", "random_diagonal",
           "relations_suite", "diagonal_norm_suite", "groupoid_suite", "roundtrip_suite", "kk_suite",
           "qlattice_suite", "unitisation_suite", "classical_suite"]


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("WIENERHOPF_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Iterable) -> list:
    items = list(items)
    k = thread_count()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


class _Tally:
    """Worst defect and the first few failing cases of a batch of comparisons."""

    def __init__(self):
        self.cases = 0
        self.worst = 0.0
        self.failures: list = []

    def add(self, ok: bool, defect: float, label) -> None:
        self.cases += 1
        self.worst = max(self.worst, float(defect))
        if not ok and len(self.failures) < 5:
            self.failures.append(str(label))

    def result(self, name: str, params: dict, tol: float = 0.0) -> CheckResult:
        params = dict(params, cases=self.cases)
        if self.failures:
            params["failures"] = self.failures
        res = verdict(name, params, self.worst, tol)
        if self.failures:
            res.status = "fail"
        return res


def _sym(tally: _Tally, lhs, rhs, label) -> None:
    ok = lhs == rhs
    tally.add(ok, 0.0 if ok else lhs.max_abs_difference(rhs), label)


def _mat(tally: _Tally, D: AMatrix, tol: float, label) -> None:
    d = D.norm() if D.max_abs() > 0 else 0.0
    tally.add(d <= tol, d, label)


# samplers

def random_normal_form(T: NicaAlgebra, rng: np.random.Generator, max_len: int = 3, max_terms: int = 3):
    terms: dict = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        a = random_positive(T.pair, max_len, rng)
        b = random_positive(T.pair, max_len, rng)
        x = random_element(T.desc, rng)
        terms[(a, b)] = terms[(a, b)] + x if (a, b) in terms else x
    return T.element(terms)


def random_diagonal(T: NicaAlgebra, rng: np.random.Generator, max_len: int = 3, max_terms: int = 3,
                    integer: bool = False):
    terms: dict = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        b = random_positive(T.pair, max_len, rng)
        x = random_element(T.desc, rng, integer=integer)
        terms[(b, b)] = terms[(b, b)] + x if (b, b) in terms else x
    return T.element(terms)


def _random_gdiag(G: WienerHopfGroupoid, rng: np.random.Generator, max_len: int = 2, max_terms: int = 2):
    terms: dict = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        h = random_group_element(G.pair, max_len, rng)
        x = random_element(G.desc, rng)
        terms[h] = terms[h] + x if h in terms else x
    return G.diagonal(terms)


# suites

def relations_suite(cfg: RunConfig) -> list[CheckResult]:
    """Defining relations, isometries and w-relations, symbolically and on the Fock interior."""
    act = cfg.action()
    T = NicaAlgebra(act)
    pair, desc, L = act.pair, act.desc, cfg.L
    tol = cfg.tol("relation")
    rep = FockRepresentation(act, L)
    out = []
    pos = pair.positive_words(4)
    basis = desc.basis()

    t = _Tally()
    for a in pos:
        for x in basis:
            _sym(t, T.coeff(x) * T.v(a), T.v(a) * T.coeff(act.apply(a, x)), (a, x))
    out.append(t.result("C1 covariance x v_a = v_a alpha_a(x)", {"max_len": 4}))

    t = _Tally()
    for a in pos:
        for b in pos:
            _sym(t, T.v(a) * T.v(b), T.v(b * a), (a, b))
    out.append(t.result("C2 v_a v_b = v_ba", {"max_len": 4}))

    t = _Tally()
    for a in pos:
        for b in pos:
            c = pair.meet(a, b)
            exp = T.zero() if c is None else T.range_projection(c)
            _sym(t, T.range_projection(a) * T.range_projection(b), exp, (a, b))
    out.append(t.result("C3 e_a e_b case rule", {"max_len": 4}))

    t = _Tally()
    for a in pos:
        for b in pos:
            _sym(t, T.vstar(a) * T.v(b), T.star_product(a, b), (a, b))
    out.append(t.result("isometries v_a* v_b", {"max_len": 4}))

    gw = pair.group_words(3)
    t1, t2, t3 = _Tally(), _Tally(), _Tally()
    for g in gw:
        _sym(t3, T.w(g).adjoint(), T.w(g.inv()), g)
        for h in gw:
            r = check_w_relations(T, g, h)
            t1.add(r.product_holds, 0.0 if r.product_holds else 1.0, (g, h))
            t2.add(r.projection_holds, 0.0 if r.projection_holds else 1.0, (g, h))
    out.append(t1.result("w-relation w_g w_h = e_g w_hg", {"max_len": 3}))
    out.append(t2.result("w-relation e_g e_h case rule", {"max_len": 3}))
    out.append(t3.result("w_g* = w_g^-1", {"max_len": 3}))

    # the same identities in the truncated regular representation
    W = {g: rep.build_W(g) for g in pair.group_words(min(6, L))}
    E = {g: W[g] @ W[g].adjoint() for g in gw}
    interiors = {s: rep.interior_projector(min(s, L)) for s in range(0, 7)}

    t = _Tally()
    for g in gw:
        t.add(W[g].adjoint().exactly_equal(W[g.inv()]), 0.0, g)
    out.append(t.result("fock W_g* = W_g^-1", {"L": L, "max_len": 3}))

    t = _Tally()
    for g in gw:
        t.add(rep.represent(T.w(g)).exactly_equal(W[g]), 0.0, g)
    out.append(t.result("fock represent(w_g) = W_g", {"L": L, "max_len": 3}))

    def wrel(g):
        loc = _Tally()
        for h in gw:
            Pi = interiors[len(g) + len(h)]
            hg = h * g
            Whg = W[hg] if hg in W else rep.build_W(hg)
            _mat(loc, (W[g] @ W[h] - E[g] @ Whg) @ Pi, tol, (g, h))
        return loc

    t = _Tally()
    for loc in _pmap(wrel, gw):
        t.cases += loc.cases
        t.worst = max(t.worst, loc.worst)
        t.failures.extend(loc.failures[: 5 - len(t.failures)])
    out.append(t.result("fock W_g W_h = E_g W_hg on interior", {"L": L, "max_len": 3}, tol))

    t = _Tally()
    for a in pair.positive_words(3):
        V = rep.build_V(a)
        Pi = interiors[len(a)]
        _mat(t, (V.adjoint() @ V - rep.identity()) @ Pi, tol, ("isometry", a))
        for x in basis:
            _mat(t, (rep.build_pi(x) @ V - V @ rep.build_pi(act.apply(a, x))) @ Pi, tol, ("covariance", a, x))
    out.append(t.result("fock isometry and covariance on interior", {"L": L, "max_len": 3}, tol))

    t = _Tally()
    half = pair.positive_words(L // 2)
    Es = {a: rep.build_E(a) for a in half}
    for a in half:
        for b in half:
            c = pair.meet(a, b)
            exp = AMatrix.zeros(desc, rep.basis) if c is None else rep.build_E(c)
            t.add((Es[a] @ Es[b]).exactly_equal(exp), 0.0, (a, b))
    out.append(t.result("fock Nica covariance E_a E_b", {"L": L, "max_len": L // 2}))

    rng = np.random.default_rng(cfg.seed)
    t = _Tally()
    for k in range(100):
        z1 = random_normal_form(T, rng, max_len=2, max_terms=2)
        z2 = random_normal_form(T, rng, max_len=2, max_terms=2)
        slack = max(len(a) for a, _ in z1.terms) + max(len(a) for a, _ in z2.terms)
        Pi = interiors[slack]
        _mat(t, (rep.represent(z1 * z2) - rep.represent(z1) @ rep.represent(z2)) @ Pi, tol, k)
    out.append(t.result("fock homomorphism cross-check", {"L": L, "samples": 100, "seed": cfg.seed}, tol))
    return out


def diagonal_norm_suite(cfg: RunConfig) -> list[CheckResult]:
    """Exact diagonal norm against the truncated matrix norm."""
    act = cfg.action()
    T = NicaAlgebra(act)
    L = cfg.L
    tol = cfg.tol("norm")
    rep = FockRepresentation(act, L)
    rng = np.random.default_rng(cfg.seed)
    out = []
    t_norm, t_eval, t_mult = _Tally(), _Tally(), _Tally()
    samples = [random_diagonal(T, rng, max_len=3) for _ in range(50)]
    for k, z in enumerate(samples):
        D = to_diagonal(z)
        M = rep.represent(z)
        sym, num = D.norm(), M.norm()
        t_norm.add(abs(sym - num) <= tol, abs(sym - num), k)
        worst = 0.0
        for b in rep.basis:
            worst = max(worst, float(np.max(np.abs((D.evaluate(b) - M.entry(b, b)).data))))
        t_eval.add(worst <= tol, worst, k)
    out.append(t_norm.result("diagonal norm = fock norm", {"L": L, "samples": 50, "seed": cfg.seed}, tol))
    out.append(t_eval.result("diagonal evaluate = fock diagonal entry", {"L": L}, tol))
    for k in range(len(samples) - 1):
        z1, z2 = samples[k], samples[k + 1]
        D1, D2, D12 = to_diagonal(z1), to_diagonal(z2), to_diagonal(z1 * z2)
        worst = 0.0
        for b in T.pair.positive_words(6):
            worst = max(worst, float(np.max(np.abs((D12.evaluate(b) - D1.evaluate(b) * D2.evaluate(b)).data))))
        t_mult.add(worst <= tol, worst, k)
    out.append(t_mult.result("evaluation is multiplicative", {"max_len": 6}, tol))
    # lower-bound sequence over growing windows
    t = _Tally()
    seq_report = []
    for k, z in enumerate(samples[:5]):
        seq = [FockRepresentation(act, l).represent(z).norm() for l in range(3, L + 2)]
        seq_report.append([round(v, 12) for v in seq])
        mono = all(b >= a - tol for a, b in zip(seq, seq[1:]))
        t.add(mono, 0.0 if mono else max(a - b for a, b in zip(seq, seq[1:])), k)
    res = t.result("fock norm nondecreasing in L", {"L_range": [3, L + 1], "sequences": seq_report}, tol)
    out.append(res)
    return out


def groupoid_suite(cfg: RunConfig) -> list[CheckResult]:
    """Induced representations, convolution identities and the vanishing criterion."""
    act = cfg.action()
    G = WienerHopfGroupoid(act)
    pair, desc, L = act.pair, act.desc, cfg.L
    rep = FockRepresentation(act, L)
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol("induced")
    out = []

    samples = []
    for _ in range(50):
        samples.append((_random_gdiag(G, rng), random_group_element(pair, 2, rng)))

    def induced(a):
        loc = _Tally()
        U = rep.reindex_unitary(a)
        for k, (d, g) in enumerate(samples):
            f = G.W(d, g)
            dc = f.summands.get(g, G.diagonal({}))
            lhs = U.adjoint() @ rep.induced_rep(f, a) @ U
            rhs = rep.multiplication_operator(dc.evaluate) @ rep.build_W(g).adjoint()
            loc.add((lhs - rhs).max_abs() <= tol, (lhs - rhs).max_abs(), (a, k))
        return loc

    t = _Tally()
    for loc in _pmap(induced, pair.positive_words(2)):
        t.cases += loc.cases
        t.worst = max(t.worst, loc.worst)
        t.failures.extend(loc.failures[: 5 - len(t.failures)])
    out.append(t.result("induced representation identity", {"L": L, "max_a": 2, "samples": 50}, tol))

    t = _Tally()
    for k, (d, g) in enumerate(samples):
        f = G.W(d, g)
        lam = rep.induced_rep(f, pair.identity)
        lam = lam.relabel(rep.basis, rep.basis)
        M = rep.represent(G.mu_map(f))
        t.add(lam.exactly_equal(M), (lam - M).max_abs(), k)
    out.append(t.result("induced rep at e = represent(mu(f))", {"L": L, "samples": 50}, tol))

    t = _Tally()
    for k in range(100):
        fs = [G.W(_random_gdiag(G, rng), random_group_element(pair, 2, rng)) for _ in range(3)]
        lhs = (fs[0] * fs[1]) * fs[2]
        rhs = fs[0] * (fs[1] * fs[2])
        ok = lhs == rhs and lhs.equals_by_evaluation(rhs, L_eq=min(cfg.L_eq, 6))
        t.add(ok, 0.0 if ok else 1.0, k)
    out.append(t.result("convolution associativity", {"samples": 100, "L_eq": min(cfg.L_eq, 6)}))

    t = _Tally()
    for k in range(100):
        d, g = _random_gdiag(G, rng), random_group_element(pair, 2, rng)
        zero = G.W(d, g).is_zero()
        brute = all(d.evaluate(b).is_zero() for b in pair.positive_words(cfg.L_eq) if (b * g).is_positive)
        t.add(zero == brute, 0.0 if zero == brute else 1.0, k)
    out.append(t.result("vanishing criterion", {"samples": 100, "L_eq": cfg.L_eq}))

    t = _Tally()
    one = G.one_omega()
    unit = G.unit()
    e = pair.identity
    for k, (d, g) in enumerate(samples):
        f = G.W(d, g)
        t.add(unit * f == f and f * unit == f, 0.0, ("unit", k))
        t.add(f.adjoint().adjoint() == f, 0.0, ("adjoint", k))
    for i in range(1, pair.num_generators + 1):
        ai = pair.generator(i)
        s = G.W(one, ai.inv())
        t.add(s.adjoint() * s == unit, 0.0, ("isometry", ai))
        t.add(s.adjoint() == G.W(one.translate(ai), ai), 0.0, ("adjoint formula", ai))
        for x in desc.basis():
            lhs = G.W(G.j(e, x), e) * s
            rhs = s * G.W(G.j(e, act.apply(ai, x)), e)
            t.add(lhs == rhs, 0.0, ("covariance", ai))
    out.append(t.result("section identities", {"samples": len(samples)}))

    t = _Tally()
    arrows = enumerate_arrows(pair, 2, 2)
    brute = sum(1 for X in pair.positive_words(2) for g in pair.group_words(2) if (X * g).is_positive)
    t.add(len(arrows) == brute, abs(len(arrows) - brute), "count")
    for ar in arrows:
        u = ar.compose(ar.inverse())
        t.add(u.g == e and u.X == ar.X, 0.0, ar.to_text())
    out.append(t.result("arrow enumeration", {"depth": 2, "gbound": 2, "arrows": len(arrows)}))
    return out


def roundtrip_suite(cfg: RunConfig) -> list[CheckResult]:
    """``μ∘λ = id`` and λ multiplicative and *-preserving on seeded samples."""
    act = cfg.action()
    G = WienerHopfGroupoid(act)
    T = G.nica
    rng = np.random.default_rng(cfg.seed)
    zs = [random_normal_form(T, rng, max_len=3) for _ in range(100)]
    lam = _pmap(G.lambda_map, zs)
    t_rt, t_mul, t_star = _Tally(), _Tally(), _Tally()
    for k, (z, f) in enumerate(zip(zs, lam)):
        back = G.mu_map(f)
        _sym(t_rt, back, z, k)
        z2, f2 = zs[(k + 1) % len(zs)], lam[(k + 1) % len(zs)]
        t_mul.add(G.lambda_map(z * z2) == f * f2, 0.0, k)
        t_star.add(G.lambda_map(z.adjoint()) == f.adjoint(), 0.0, k)
    params = {"samples": len(zs), "seed": cfg.seed}
    return [t_rt.result("mu(lambda(z)) = z", params), t_mul.result("lambda multiplicative", params),
            t_star.result("lambda *-preserving", params)]


def t_grid(samples: int) -> tuple:
    if samples == len(DEFAULT_T_GRID):
        return DEFAULT_T_GRID
    return tuple(float(t) for t in np.linspace(0.0, math.pi / 2, samples))


def kk_suite(cfg: RunConfig) -> list[CheckResult]:
    """Boundary projection, commutator defects and the rotation homotopy."""
    act = cfg.action()
    if not isinstance(act.pair, FreeGroup):
        raise ValueError("the kk suite needs a free monoid")
    desc = act.desc
    kd = KasparovData(act, cfg.kk_L)
    T = kd.nica
    tol = cfg.tol("kk")
    out = []
    e = act.pair.identity
    t = _Tally()
    for x in desc.basis():
        r = commutator_defect(T.coeff(x), kd)
        t.add(r.rank == 0 and r.norm == 0.0, r.norm, ("x", x))
    out.append(t.result("commutator defect of x vanishes", {"L": cfg.kk_L}))
    t = _Tally()
    closed = _Tally()
    for a in act.pair.positive_words(3):
        if len(a) == 0:
            continue
        r = commutator_defect(T.v(a), kd)
        expected = AMatrix.from_entries(desc, kd.E1, kd.E0, {(a, e): desc.one()})
        closed.add(r.matrix.exactly_equal(expected) and r.rank == desc.dim, (r.matrix - expected).max_abs(),
                   ("v", a, r.rank))
        rs = commutator_defect(T.vstar(a), kd)
        t.add(rs.rank == 0 and rs.norm == 0.0, rs.norm, ("v*", a))
    out.append(closed.result("commutator defect of v_a = 1 (x) p e_(a,e), rank dim A", {"L": cfg.kk_L, "max_len": 3}))
    out.append(t.result("commutator defect of v_a* vanishes", {"L": cfg.kk_L, "max_len": 3}))
    rng = np.random.default_rng(cfg.seed)
    t = _Tally()
    for k in range(20):
        z = random_normal_form(T, rng, max_len=3, max_terms=1)
        (a, b), = z.terms
        r = commutator_defect(z, kd)
        bound = desc.dim * max(len(a), 1)
        t.add(r.rank <= bound, 0.0, (str(a), str(b), r.rank))
    out.append(t.result("commutator defect rank <= dim A |a|", {"samples": 20, "seed": cfg.seed}))
    out.extend(endpoint_inclusion_check(kd))
    module = HomotopyModule(act, cfg.kk_L, cfg.kk_L_inner)
    ts = t_grid(cfg.t_samples)
    for res in _pmap(lambda s: homotopy_nica_check(s, module, tol=tol, cov_tol=cfg.tol("relation")), ts):
        out.extend(res)
    out.extend(endpoint_rotation_check(module))
    out.extend(lipschitz_check(module, ts))
    return out


def qlattice_suite(cfg: RunConfig) -> list[CheckResult]:
    """Brute-force oracles for meets, positive ideals and atoms."""
    out = []
    reports = [meet_oracle(2, 6, 12), meet_oracle(3, 6, 8), positive_ideal_oracle(2), positive_ideal_oracle(3),
               abelian_oracle(2)]
    F = FreeGroup(2)
    a1, a2 = F.generator(1), F.generator(2)
    for gens in ([a1, a2], [a1, a2 * a1], [a2 * a1, a1 * a1, a1]):
        reports.append(atomize_oracle(atomize([PrincipalIdeal(g) for g in gens], F)))
    for r in reports:
        out.append(verdict(r.name, {"cases": r.cases, "mismatches": [str(m) for m in r.mismatches[:5]]},
                           float(len(r.mismatches)), 0.0))
    return out


def unitisation_suite(cfg: RunConfig) -> list[CheckResult]:
    act = cfg.raw_action()
    rep = unitise_split_check(act, 3)
    return [verdict("unitisation split", {"max_len": 3, "checked": rep.checked,
                                          "failures": [str(f) for f in rep.failures[:5]]},
                    float(len(rep.failures)), 0.0)]


def classical_suite(cfg: RunConfig) -> list[CheckResult]:
    """N inside Z: W_1 is the unilateral shift and E_k the indicator of {j >= k}."""
    out = []
    for pair in (FreeGroup(1), FreeAbelianGroup(1)):
        rep = FockRepresentation(scalar_action(pair), cfg.L)
        N = len(rep.basis)
        g = pair.generator(1)
        S = rep.build_W(g).to_dense()[0]
        ok = np.array_equal(S, np.eye(N, k=-1))
        out.append(verdict("classical W_1 is the unilateral shift", {"pair": repr(pair), "L": cfg.L},
                           0.0 if ok else float(np.max(np.abs(S - np.eye(N, k=-1)))), 0.0))
        worst = 0.0
        gk = pair.identity
        for k in range(N):
            E = rep.build_E(gk).to_dense()[0]
            exp = np.diag([1.0 if j >= k else 0.0 for j in range(N)])
            worst = max(worst, float(np.max(np.abs(E - exp))))
            gk = gk * g
        out.append(verdict("classical E_k indicator of j >= k", {"pair": repr(pair), "L": cfg.L}, worst, 0.0))
    return out


SUITES = {
    "relations": relations_suite,
    "diagonal-norm": diagonal_norm_suite,
    "groupoid": groupoid_suite,
    "roundtrip": roundtrip_suite,
    "kk": kk_suite,
    "qlattice": qlattice_suite,
    "unitisation": unitisation_suite,
    "classical": classical_suite,
}


def run_suite(name: str, cfg: RunConfig) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg)
