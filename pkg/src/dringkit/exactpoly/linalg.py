"""Exact dense linear algebra over any field domain (row-major lists)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .fields import Domain


def rref(rows: Sequence[Sequence], K: Domain) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = K.one / m[r][c]
        if m[r][c] != K.one:
            m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row_r = m[r]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], K: Domain) -> int:
    return len(rref(rows, K)[1])


def nullspace(rows: Sequence[Sequence], K: Domain, ncols: int | None = None) -> list[list]:
    """Basis of ``{v : rows @ v = 0}`` (right kernel), in echelon-completion order."""
    if not rows:
        n = ncols or 0
        return [[K.one if i == j else K.zero for i in range(n)] for j in range(n)]
    n = len(rows[0])
    red, piv = rref(rows, K)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [K.zero] * n
        v[f] = K.one
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, K: Domain) -> list | None:
    """One solution ``x`` of ``rows @ x = rhs`` or ``None`` if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, K)
    if n in piv:
        return None
    x = [K.zero] * n
    for r, pc in enumerate(piv):
        x[pc] = red[r][n]
    return x


def in_span(vectors: Sequence[Sequence], target: Sequence, K: Domain) -> bool:
    """True iff ``target`` is a linear combination of ``vectors``."""
    if not any(target):
        return True
    if not vectors:
        return False
    cols = list(zip(*vectors))
    return solve([list(c) for c in cols], list(target), K) is not None


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], K: Domain) -> list[list]:
    bt = list(zip(*b))
    out = []
    for row in a:
        out.append([sum((x * y for x, y in zip(row, col) if x and y), K.zero) for col in bt])
    return out


def identity(n: int, K: Domain) -> list[list]:
    return [[K.one if i == j else K.zero for j in range(n)] for i in range(n)]


def inverse(m: Sequence[Sequence], K: Domain) -> list[list]:
    n = len(m)
    aug = [list(r) + e for r, e in zip(m, identity(n, K))]
    red, piv = rref(aug, K)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def jacobian_rank(fns: Sequence, variables: Sequence[str], *, rng: random.Random | None = None) -> int:
    """Rank of ``[d f_i / d x_j]`` over the function field; characteristic 0 only.

    This equals the transcendence degree of the field generated by ``fns``.
    Specialisation at random rational points gives a lower bound that is
    exact whenever it reaches ``min(rows, cols)``; otherwise the rank is
    computed by elimination over the function field.
    """
    from .poly import MultiPoly
    from .ratfunc import FractionField, RationalFunction

    if not fns:
        return 0
    first = fns[0]
    ring = first.ring if isinstance(first, (MultiPoly, RationalFunction)) else None
    if ring is None:
        return 0
    if ring.characteristic != 0:
        raise ValueError("the Jacobian criterion is only valid in characteristic 0")
    F = FractionField(ring)
    idx = [ring.index(v) for v in variables]
    rows = []
    for f in fns:
        f = F(f)
        rows.append([f.derivative(i) for i in idx])
    full = min(len(rows), len(idx))
    rng = rng or random.Random(0)
    best = 0
    for _ in range(3):
        point = [Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in ring.vars]
        try:
            spec = [[e.evaluate(point, one=Fraction(1)) for e in row] for row in rows]
        except ZeroDivisionError:
            continue
        best = max(best, rank(spec, F.domain))
        if best == full:
            return best
    return rank(rows, F)
