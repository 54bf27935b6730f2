"""Iterated operator systems and the characteristic-p p-th root machinery.

Basis tensors of the ``n``-fold iterate are indexed by tuples ``t = (t_1..t_n)``
with ``t_1`` the innermost level; the full index is ``sum t_k l^(k-1)``.  The
coordinate of ``E_n(a)`` at ``t`` is ``d_{t_1} ... d_{t_n}(a)`` (zeros act as
the identity), so dropping zeros gives the word that indexes ``D_n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from .algebra import AlgebraElement, AlgebraScheme, compose_algebras, truncated_algebra
from .decomposition import nilradical
from .exactpoly import Domain, FractionField
from .exactpoly.linalg import rref, solve
from .operators import DRing, make_dring

RANK_CAP = 4096

IndexWord = tuple  # zero-free tuple of operator indices


def drop_zeros(t: Sequence[int]) -> IndexWord:
    return tuple(i for i in t if i)


def words_up_to(n: int, ell: int) -> list[IndexWord]:
    """``L_n`` ordered by length, then lexicographically."""
    out: list[IndexWord] = []
    for m in range(n + 1):
        out.extend(itertools.product(range(1, ell), repeat=m))
    return out


def word_count(n: int, ell: int) -> int:
    return sum((ell - 1) ** m for m in range(n + 1))


def word_label(w: IndexWord) -> str:
    return "ε(" + ",".join(map(str, w)) + ")"


class RankOverflow(ValueError):
    """The iterate would exceed the configured rank bound."""


@dataclass
class IteratedAlgebra:
    base: AlgebraScheme
    n: int
    full: AlgebraScheme
    words: list[IndexWord]
    embedding: list[list[int]]  # full indices summed by each word's basis vector
    dn: AlgebraScheme
    f: list[list] | None  # rows: L_n words, columns: L_{n-1} words
    closed: bool

    @property
    def ell(self) -> int:
        return self.base.rank

    @property
    def rank(self) -> int:
        return len(self.words)

    def index_of(self, w: IndexWord) -> int:
        return self._index[w]

    def __post_init__(self):
        self._index = {w: i for i, w in enumerate(self.words)}

    def tuple_index(self, t: Sequence[int]) -> int:
        ell = self.ell
        return sum(x * ell**k for k, x in enumerate(t))

    def embed(self, coords: Sequence, ring: Domain) -> list:
        """``D_n`` coordinates to full coordinates."""
        out = [ring.zero] * self.full.rank
        for c, idxs in zip(coords, self.embedding):
            if c:
                for t in idxs:
                    out[t] = c
        return out

    def restrict(self, vec: Sequence, ring: Domain) -> list | None:
        """Full coordinates to ``D_n`` coordinates, or None when ``vec`` is not class-constant."""
        out = []
        covered = set()
        for idxs in self.embedding:
            vals = {vec[t] for t in idxs}
            if len(vals) != 1:
                return None
            out.append(ring(vals.pop()))
            covered.update(idxs)
        for t, v in enumerate(vec):
            if t not in covered and v:  # pragma: no cover - every tuple has a class
                return None
        return out

    def to_json(self) -> dict:
        return {
            "base": self.base.name,
            "n": self.n,
            "full_rank": self.full.rank,
            "dn_rank": self.rank,
            "words": [word_label(w) for w in self.words],
            "subalgebra_closed": self.closed,
        }


def _full_algebra(base: AlgebraScheme, n: int) -> AlgebraScheme:
    full = base
    for _ in range(n - 1):
        full = compose_algebras(full, base)
    return full


@lru_cache(maxsize=64)
def _iterate_cached(base: AlgebraScheme, n: int, cap: int) -> IteratedAlgebra:
    ell = base.rank
    if ell**n > cap:
        raise RankOverflow(f"iterate of rank {ell}^{n} = {ell**n} exceeds the bound {cap}")
    K = base.domain
    if n == 0:
        full = AlgebraScheme(K, ["ε()"], {(0, 0, 0): 1}, [1], name="trivial")
    else:
        full = _full_algebra(base, n)
    words = words_up_to(n, ell)
    index = {w: i for i, w in enumerate(words)}
    classes: list[list[int]] = [[] for _ in words]
    for t in itertools.product(range(ell), repeat=n):
        full_idx = sum(x * ell**k for k, x in enumerate(t))
        classes[index[drop_zeros(t)]].append(full_idx)

    # structure constants of D_n read back from products in the full algebra
    def vec(i):
        v = [K.zero] * full.rank
        for t in classes[i]:
            v[t] = K.one
        return v

    vecs = [vec(i) for i in range(len(words))]
    closed = True
    mul = {}
    for i in range(len(words)):
        for j in range(i, len(words)):
            prod = full.multiply_coords(vecs[i], vecs[j], K)
            for k, idxs in enumerate(classes):
                vals = {prod[t] for t in idxs}
                if len(vals) != 1:
                    closed = False
                c = prod[idxs[0]]
                if c:
                    mul[(i, j, k)] = c
    unit_full = list(full.unit)
    unit = []
    for idxs in classes:
        vals = {unit_full[t] for t in idxs}
        if len(vals) != 1:
            closed = False
        unit.append(unit_full[idxs[0]])
    dn = AlgebraScheme(K, [word_label(w) for w in words], mul, unit, name=f"{base.name}_{n}" if base.name else "")

    f = None
    if n >= 1:
        prev = words_up_to(n - 1, ell)
        pidx = {w: i for i, w in enumerate(prev)}
        # outer projection drops the last slot (normalized base: pi = first coordinate)
        f = []
        for w, idxs in zip(words, classes):
            row = [K.zero] * len(prev)
            for t in idxs:
                tup = [(t // ell**k) % ell for k in range(n)]
                c = base.projection_row[tup[-1]]
                if c:
                    row[pidx[drop_zeros(tup[:-1])]] = c
                    break
            f.append(row)
    return IteratedAlgebra(base, n, full, words, classes, dn, f, closed)


def iterate_algebra(base: AlgebraScheme, n: int, cap: int | None = None) -> IteratedAlgebra:
    """``D^(n)`` with its subalgebra ``D_n`` (basis ``L_n``) and the map ``f_n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not base.is_normalized():
        raise ValueError("the base algebra must be normalized")
    return _iterate_cached(base, n, cap or RANK_CAP)


def apply_f(it: IteratedAlgebra, coords: Sequence, ring: Domain) -> list:
    """``f_n: D_n -> D_{n-1}`` on coordinates."""
    if it.f is None:
        raise ValueError("f_0 is undefined")
    out = [ring.zero] * len(it.f[0])
    for c, row in zip(coords, it.f):
        if c:
            for k, r in enumerate(row):
                if r:
                    out[k] = out[k] + c * r
    return out


# -- E_n --------------------------------------------------------------------------


class _OperatorCache:
    """Memoised ``e`` for one D-ring."""

    def __init__(self, d):
        self.d = d
        self.memo: dict = {}

    def ops(self, v) -> list:
        if v not in self.memo:
            self.memo[v] = list(self.d.apply_e(v).coords)
        return self.memo[v]


def en_coordinates(f, d, n: int, cache: _OperatorCache | None = None) -> list:
    """Word-formula coordinates of ``E_n(f)`` over ``L_n``."""
    cache = cache or _OperatorCache(d)
    vals: dict[IndexWord, Any] = {(): d.coerce(f)}
    out = []
    for w in words_up_to(n, d.rank):
        if w not in vals:
            vals[w] = cache.ops(vals[w[1:]])[w[0]]
        out.append(vals[w])
    return out


def En_expand(f, d, n: int, it: IteratedAlgebra | None = None) -> AlgebraElement:
    """``E_n(f) = sum over words w of d_w(f) eps_w`` as an element of ``D_n``."""
    it = it or iterate_algebra(d.algebra, n)
    coords = en_coordinates(f, d, n)
    ring = d.target
    return AlgebraElement(it.dn, [ring(c) for c in coords], ring)


def en_full(f, d, n: int, cache: _OperatorCache | None = None) -> list:
    """``E_n(f)`` built by the recursion ``E_{n+1} = D(E_n) ∘ e`` in full coordinates."""
    cache = cache or _OperatorCache(d)
    v = d.coerce(f)
    if n == 0:
        return [v]
    ell = d.rank
    step = ell ** (n - 1)
    out = [None] * (ell**n)
    for j, c in enumerate(cache.ops(v)):
        inner = en_full(c, d, n - 1, cache)
        for t, x in enumerate(inner):
            out[t + j * step] = x
    return out


@dataclass
class IterativityViolation:
    condition: str
    sample: str
    m: int
    n: int
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return self.__dict__.copy()


@dataclass
class IterativityReport:
    checked: dict = field(default_factory=dict)
    violations: list[IterativityViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violations": [v.to_json() for v in self.violations]}


def check_iterativity(d, m: int, n: int, samples: Sequence) -> IterativityReport:
    """Evaluate ``E_0 = id``, ``f_{m,n} ∘ E_m = E_n`` and ``E_{m+n} = D_m(E_n) ∘ E_m`` exactly.

    The word formula, the recursive full construction and the composite
    ``D_m(E_n) ∘ E_m`` are computed independently and compared.
    """
    rep = IterativityReport({"E0": 0, "restriction": 0, "composition": 0, "recursion": 0})
    ring = d.target
    cache = _OperatorCache(d)
    big, small = max(m, n), min(m, n)
    its = {k: iterate_algebra(d.algebra, k) for k in range(0, m + n + 1)}

    def fmt(v):
        return "(" + ", ".join(str(x) for x in v) + ")"

    for s in samples:
        a = d.coerce(s)
        label = str(a)
        # (i)
        rep.checked["E0"] += 1
        e0 = en_coordinates(a, d, 0, cache)
        if e0 != [a]:
            rep.violations.append(IterativityViolation("E0", label, 0, 0, fmt(e0), str(a)))
        # (ii)
        rep.checked["restriction"] += 1
        cur = en_coordinates(a, d, big, cache)
        for k in range(big, small, -1):
            cur = apply_f(its[k], cur, ring)
        target = en_coordinates(a, d, small, cache)
        if [ring(x) for x in cur] != [ring(x) for x in target]:
            rep.violations.append(IterativityViolation("restriction", label, big, small, fmt(cur), fmt(target)))
        # (iii)
        rep.checked["composition"] += 1
        lhs = its[m + n].embed(en_coordinates(a, d, m + n, cache), ring)
        outer = its[m].embed(en_coordinates(a, d, m, cache), ring)
        step = d.rank**n
        rhs = [ring.zero] * (d.rank ** (m + n))
        for u, c in enumerate(outer):
            inner = its[n].embed(en_coordinates(c, d, n, cache), ring)
            for v, x in enumerate(inner):
                rhs[v + u * step] = x
        if [ring(x) for x in lhs] != [ring(x) for x in rhs]:
            rep.violations.append(IterativityViolation("composition", label, m, n, fmt(lhs), fmt(rhs)))
        # word formula against the recursive construction
        rep.checked["recursion"] += 1
        rec = en_full(a, d, m + n, cache)
        if [ring(x) for x in rec] != [ring(x) for x in lhs]:
            rep.violations.append(IterativityViolation("recursion", label, m + n, 0, fmt(rec), fmt(lhs)))
    return rep


# -- p-th powers ----------------------------------------------------------------------


def frobenius_span(it: IteratedAlgebra) -> list[list]:
    """Echelon basis (over the prime field) of the span of ``b^p`` for basis vectors ``b`` of ``D_n``."""
    K = it.dn.domain
    p = K.characteristic
    if p == 0:
        raise ValueError("p-th power membership needs positive characteristic")
    rows = []
    for i in range(it.rank):
        b = it.dn.basis_element(i)
        rows.append(list((b**p).coords))
    red, _ = rref(rows, K)
    return red


def pth_power_membership(v: Sequence, it: IteratedAlgebra) -> bool:
    """Whether ``v`` lies in the span of ``{b^p}`` over its coefficient field.

    The span has a basis defined over the prime field, so ``v`` belongs to it
    exactly when reducing ``v`` by the echelon rows leaves nothing.
    """
    basis = frobenius_span(it)
    vals = list(v.coords) if isinstance(v, AlgebraElement) else list(v)
    if len(vals) != it.rank:
        raise ValueError(f"vector has {len(vals)} coordinates, D_{it.n} has rank {it.rank}")
    rem = list(vals)
    for row in basis:
        piv = next(k for k, c in enumerate(row) if c)
        c = rem[piv]
        if c:
            rem = [x - c * r if r else x for x, r in zip(rem, row)]
    return not any(rem)


# -- the counterexample construction ---------------------------------------------------


def select_eta(A: AlgebraScheme) -> list:
    """The last nilradical basis vector outside the span of ``{b^p}`` over the base."""
    K = A.domain
    p = K.characteristic
    powers = [list((A.basis_element(i) ** p).coords) for i in range(A.rank)]
    span, _ = rref(powers, K)
    span = [r for r in span if any(r)]
    base_rank = len(span)
    for row in reversed(nilradical(A)):
        test, _ = rref(span + [list(row)], K)
        if len([r for r in test if any(r)]) > base_rank:
            return list(row)
    raise ValueError("every nilpotent basis vector is a p-th power combination; no eta exists")


@dataclass
class CharPReport:
    p: int
    m: int
    algebra: str
    epsilon: list
    eta: list
    expansions: dict[int, list[str]]
    residuals: dict[int, list[str]]
    membership: dict[int, bool]
    words: dict[int, list[str]]

    @property
    def pattern(self) -> list[bool]:
        return [self.membership[n] for n in sorted(self.membership)]

    @property
    def expected(self) -> list[bool]:
        return [n < self.m for n in sorted(self.membership)]

    @property
    def ok(self) -> bool:
        return self.pattern == self.expected and all(not any(r != "0" for r in res) for res in self.residuals.values())

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "algebra": self.algebra,
            "epsilon": [str(c) for c in self.epsilon],
            "eta": [str(c) for c in self.eta],
            "membership": {str(n): v for n, v in self.membership.items()},
            "pattern": self.pattern,
            "residuals": {str(n): r for n, r in self.residuals.items()},
            "expansions": {str(n): dict(zip(self.words[n], e)) for n, e in self.expansions.items()},
            "ok": self.ok,
        }


def witness_dring(A: AlgebraScheme, m: int, epsilon: Sequence, eta: Sequence) -> DRing:
    """``e(x_i) = x_i + x_{i+1} eps^p`` for ``i < m`` and ``e(x_m) = x_m + eta`` over ``F_p(x_1..x_m)``."""
    p = A.domain.characteristic
    eps_p = list((A.element(epsilon) ** p).coords)
    names = [f"x{i}" for i in range(1, m + 1)]
    images = {}
    for i, v in enumerate(names):
        coords = []
        for k in range(A.rank):
            terms = [v] if k == 0 else []
            if i < m - 1 and eps_p[k]:
                terms.append(f"({eps_p[k]})*{names[i + 1]}")
            if i == m - 1 and eta[k]:
                terms.append(f"({eta[k]})")
            coords.append(" + ".join(terms) or "0")
        images[v] = coords
    return make_dring(A, names, images, name=f"witness(p={p}, m={m})")


def _tensor_power_vectors(A: AlgebraScheme, vecs: Sequence[Sequence]) -> list:
    """Coordinates of ``v_1 ⊗ ... ⊗ v_n`` (first factor innermost)."""
    out = [A.domain.one]
    for v in vecs:
        out = [x * y for y in v for x in out]
    return out


def closed_form(it: IteratedAlgebra, epsilon: Sequence, ring: Domain, xs: Sequence) -> list:
    """``sum_j x_{j+1} sum_{|tau| = j} b_tau^p`` in ``D_n`` coordinates."""
    A = it.base
    K = A.domain
    p = K.characteristic
    n = it.n
    eps = A.element(epsilon)
    pows = [list(A.unit), list((eps**p).coords)]
    total = [ring.zero] * it.full.rank
    for j in range(n + 1):
        for tau in itertools.combinations(range(n), j):
            vecs = [pows[1] if i in tau else pows[0] for i in range(n)]
            b = _tensor_power_vectors(A, vecs)
            for t, c in enumerate(b):
                if c:
                    total[t] = total[t] + xs[j] * c
    res = it.restrict(total, ring)
    if res is None:
        raise ValueError("closed-form sum is not in the iterated subalgebra")
    return res


def charp_demo(
    p: int,
    base: AlgebraScheme | None = None,
    m: int = 2,
    *,
    length: int = 3,
    epsilon: Sequence | None = None,
    eta: Sequence | None = None,
) -> CharPReport:
    """Iterate the witness structure and record where ``E_n(x_1)`` stops being a p-th power."""
    A = base if base is not None else truncated_algebra(length, p)
    K = A.domain
    if K.characteristic != p:
        raise ValueError(f"the algebra has characteristic {K.characteristic}, not {p}")
    if not A.is_normalized():
        raise ValueError("the algebra must be normalized")
    if m < 1:
        raise ValueError("m must be at least 1")
    if epsilon is None:
        if A.rank < 2:
            raise ValueError("the algebra has no nilpotent basis vector")
        epsilon = [K.zero] * A.rank
        epsilon[1] = K.one
    epsilon = [K(c) for c in epsilon]
    eps = A.element(epsilon)
    if not (eps**p):
        raise ValueError("eps^p = 0; the construction needs a nilpotent with nonzero p-th power")
    if eps ** (A.rank + 1):
        raise ValueError("eps is not nilpotent")
    eta = [K(c) for c in eta] if eta is not None else select_eta(A)
    if eta[0] or any((A.element(eta) ** (A.rank + 1)).coords):
        raise ValueError("eta must be nilpotent")
    probe = iterate_algebra(A, 1)
    if pth_power_membership(eta, probe):
        raise ValueError("eta lies in the span of p-th powers")

    d = witness_dring(A, m, epsilon, eta)
    ring = d.target
    xs = [d.coerce(f"x{i}") for i in range(1, m + 1)]
    cache = _OperatorCache(d)
    expansions, residuals, membership, words = {}, {}, {}, {}
    for n in range(m + 1):
        it = iterate_algebra(A, n)
        coords = [ring(c) for c in en_coordinates(xs[0], d, n, cache)]
        expansions[n] = [str(c) for c in coords]
        words[n] = [word_label(w) for w in it.words]
        membership[n] = pth_power_membership(coords, it)
        if n < m:
            cf = closed_form(it, epsilon, ring, xs + [ring.zero])
            residuals[n] = [str(a - b) for a, b in zip(coords, cf)]
    return CharPReport(p, m, A.name or "custom", epsilon, eta, expansions, residuals, membership, words)


def span_membership_oracle(v: Sequence, it: IteratedAlgebra, ring: Domain) -> bool:
    """Solve ``sum_b c_b b^p = v`` over the function field by Gaussian elimination."""
    p = it.dn.domain.characteristic
    cols = [list((it.dn.basis_element(i) ** p).coords) for i in range(it.rank)]
    F = ring if isinstance(ring, FractionField) else FractionField(ring)
    A = [[F(cols[j][i]) for j in range(len(cols))] for i in range(it.rank)]
    b = [F(x) for x in v]
    return solve(A, b, F) is not None


__all__ = [
    "CharPReport",
    "IndexWord",
    "IterativityReport",
    "IterativityViolation",
    "IteratedAlgebra",
    "RANK_CAP",
    "RankOverflow",
    "En_expand",
    "apply_f",
    "charp_demo",
    "check_iterativity",
    "closed_form",
    "drop_zeros",
    "en_coordinates",
    "en_full",
    "frobenius_span",
    "iterate_algebra",
    "pth_power_membership",
    "select_eta",
    "span_membership_oracle",
    "witness_dring",
    "word_count",
    "word_label",
    "words_up_to",
]
