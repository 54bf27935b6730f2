"""Buchberger's algorithm, ideals, elimination and radical membership."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .poly import GREVLEX, MonomialOrder, MultiPoly, PolyRing, block_order

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """Raised when a Gröbner computation exceeds its reduction-step budget."""


def default_budget() -> int:
    env = os.environ.get("DRINGKIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"Gröbner step budget of {self.limit} reductions exceeded")


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


class _Lead:
    """Polynomial with its leading data cached for one order."""

    __slots__ = ("poly", "lm", "lc")

    def __init__(self, poly: MultiPoly, order: MonomialOrder):
        self.poly = poly
        self.lm, self.lc = poly.leading_term(order)


def _reduce(f: MultiPoly, basis: Sequence[_Lead], order: MonomialOrder, budget: _Budget | None) -> MultiPoly:
    """Full reduction of ``f`` modulo ``basis`` (normal form)."""
    ring = f.ring
    K = ring.domain
    key = order.key
    rem: dict = {}
    p = dict(f.terms)
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for g in basis:
            if _divides(g.lm, lm):
                if budget is not None:
                    budget.tick()
                c = lc / g.lc
                shift = tuple(a - b for a, b in zip(lm, g.lm))
                for e, v in g.poly.terms.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    nv = p.get(ne, K.zero) - c * v
                    if nv:
                        p[ne] = nv
                    else:
                        p.pop(ne, None)
                break
        else:
            rem[lm] = lc
            del p[lm]
    return MultiPoly(ring, rem)


def normal_form(f: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder | None = None) -> MultiPoly:
    order = order or f.ring.order
    leads = [_Lead(g, order) for g in basis if g.terms]
    return _reduce(f, leads, order, None)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    fm, fc = f.leading_term(order)
    gm, gc = g.leading_term(order)
    l = _lcm(fm, gm)
    ring = f.ring
    mf = MultiPoly(ring, {tuple(a - b for a, b in zip(l, fm)): ring.domain.one / fc})
    mg = MultiPoly(ring, {tuple(a - b for a, b in zip(l, gm)): ring.domain.one / gc})
    return f * mf - g * mg


def buchberger(
    gens: Sequence[MultiPoly], order: MonomialOrder | None = None, budget: int | None = None
) -> list[MultiPoly]:
    """Reduced Gröbner basis using normal pair selection and Buchberger's criteria."""
    gens = [g for g in gens if g.terms]
    if not gens:
        return []
    order = order or gens[0].ring.order
    key = order.key
    bud = _Budget(budget if budget is not None else default_budget())

    G: list[_Lead] = []
    pairs: list[tuple[int, int]] = []

    def add(poly: MultiPoly):
        h = _Lead(poly.monic(order), order)
        i = len(G)
        G.append(h)
        for j in range(i):
            if G[j] is not None:
                pairs.append((j, i))

    for g in gens:
        r = _reduce(g, [x for x in G if x is not None], order, bud)
        if r.terms:
            if r.is_constant():
                return [r.ring.constant(1)]
            add(r)

    while pairs:
        # normal strategy: smallest lcm of leading monomials first
        best = min(range(len(pairs)), key=lambda t: key(_lcm(G[pairs[t][0]].lm, G[pairs[t][1]].lm)))
        i, j = pairs.pop(best)
        gi, gj = G[i], G[j]
        if gi is None or gj is None:
            continue
        l = _lcm(gi.lm, gj.lm)
        # coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(gi.lm, gj.lm)):
            continue
        # chain criterion
        skip = False
        for k, gk in enumerate(G):
            if gk is None or k in (i, j):
                continue
            if _divides(gk.lm, l):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        s = s_polynomial(gi.poly, gj.poly, order)
        r = _reduce(s, [x for x in G if x is not None], order, bud)
        if r.terms:
            if r.is_constant():
                return [r.ring.constant(1)]
            add(r)

    return _interreduce([g.poly for g in G if g is not None], order, bud)


def _interreduce(polys: list[MultiPoly], order: MonomialOrder, bud: _Budget) -> list[MultiPoly]:
    leads = [_Lead(p, order) for p in polys]
    # drop elements whose leading monomial is divisible by another's
    keep: list[_Lead] = []
    for i, g in enumerate(leads):
        redundant = False
        for j, h in enumerate(leads):
            if i == j:
                continue
            if _divides(h.lm, g.lm) and (h.lm != g.lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = [h for j, h in enumerate(keep) if j != i]
        r = _reduce(g.poly, others, order, bud).monic(order)
        out.append(r)
    out.sort(key=lambda p: order.key(p.leading_monomial(order)), reverse=True)
    return out


@dataclass
class Ideal:
    """An ideal of a polynomial ring given by generators, with cached Gröbner bases."""

    ring: PolyRing
    gens: list[MultiPoly]
    _bases: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.gens = [self.ring(g) for g in self.gens]

    def groebner(self, order: MonomialOrder | None = None, budget: int | None = None) -> list[MultiPoly]:
        order = order or self.ring.order
        if order not in self._bases:
            self._bases[order] = buchberger(self.gens, order, budget)
        return self._bases[order]

    def reduce(self, f: MultiPoly, order: MonomialOrder | None = None) -> MultiPoly:
        order = order or self.ring.order
        return normal_form(self.ring(f), self.groebner(order), order)

    def contains(self, f: MultiPoly) -> bool:
        return not self.reduce(f).terms

    def contains_ideal(self, other: Ideal) -> bool:
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring.vars == other.ring.vars and self.groebner() == [
            self.ring(g) for g in other.groebner(self.ring.order)
        ]

    def is_unit(self) -> bool:
        G = self.groebner()
        return len(G) == 1 and G[0].is_constant()

    def is_zero(self) -> bool:
        return not any(g.terms for g in self.gens)

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


def groebner_basis(I: Ideal, order: MonomialOrder | None = None, budget: int | None = None) -> Ideal:
    """Return a copy of ``I`` whose generators are its reduced Gröbner basis."""
    order = order or I.ring.order
    G = I.groebner(order, budget)
    ring = I.ring.with_order(order)
    out = Ideal(ring, [ring(g) for g in G])
    out._bases[order] = [ring(g) for g in G]
    return out


def elimination_ideal(I: Ideal, drop_vars: Sequence[str], budget: int | None = None) -> Ideal:
    """``I`` intersected with the polynomial ring in the variables not in ``drop_vars``."""
    drop = [v for v in I.ring.vars if v in set(drop_vars)]
    missing = set(drop_vars) - set(I.ring.vars)
    if missing:
        raise KeyError(f"unknown variables {sorted(missing)}")
    kept = [v for v in I.ring.vars if v not in set(drop)]
    order = block_order(len(drop))
    big = I.ring.with_vars(drop + kept, order)
    G = buchberger([g.change_ring(big) for g in I.gens], order, budget)
    small = I.ring.with_vars(kept, GREVLEX)
    out = [g.change_ring(small) for g in G if not (g.variables_used() & set(drop))]
    return Ideal(small, out)


def radical_membership(f: MultiPoly, I: Ideal, budget: int | None = None) -> bool:
    """Rabinowitsch: ``f`` is in the radical of ``I`` iff ``1 - z f`` and ``I`` generate the unit ideal."""
    if not f.terms:
        return True
    z = "_rabinowitsch_z"
    while z in I.ring.vars:
        z += "_"
    ring = I.ring.with_vars(list(I.ring.vars) + [z])
    gens = [g.change_ring(ring) for g in I.gens]
    gens.append(ring.constant(1) - ring.gen(z) * f.change_ring(ring))
    G = buchberger(gens, ring.order, budget)
    return len(G) == 1 and G[0].is_constant()
