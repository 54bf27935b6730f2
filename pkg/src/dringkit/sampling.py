"""Seeded random inputs for property checks."""

from __future__ import annotations

import itertools
import random

from .exactpoly import MultiPoly, PolyRing


def random_polynomial(
    ring: PolyRing, rng: random.Random, degree: int = 3, terms: int = 4, coeff_range: int = 5, variables=None
) -> MultiPoly:
    """Sum of up to ``terms`` monomials of total degree ``<= degree`` in ``variables`` (default: all)."""
    names = list(variables) if variables is not None else list(ring.vars)
    idx = [ring.index(v) for v in names]
    out = ring.zero
    for _ in range(terms):
        exps = [0] * ring.nvars
        budget = rng.randint(0, degree)
        for _ in range(budget):
            if idx:
                exps[rng.choice(idx)] += 1
        c = rng.randint(-coeff_range, coeff_range)
        if c:
            out = out + ring.monomial(exps, c)
    return out


def random_images(ring: PolyRing, rank: int, rng: random.Random, degree: int = 2, terms: int = 2) -> dict:
    """Random ``e(x) = (x, f_1, ..., f_{l-1})`` for each generator, as coordinate polynomials."""
    out = {}
    for v in ring.vars:
        out[v] = [ring.gen(v)] + [random_polynomial(ring, rng, degree, terms) for _ in range(rank - 1)]
    return out


def monomials_up_to(nvars: int, degree: int):
    for exps in itertools.product(range(degree + 1), repeat=nvars):
        if sum(exps) <= degree:
            yield exps
