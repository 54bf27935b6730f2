"""Local artinian decomposition of a finite algebra and the associated operators.

``D(A) = B_0 x ... x B_t`` with each ``B_i`` local.  For every factor we
record its idempotent, a residue generator ``g_i`` whose powers span the
residue field ``A[x]/(P_i)``, and the maps

* ``theta_i``: coordinates of ``e_i v`` in the adapted basis
  ``[g_i^0, ..., g_i^{d_i-1}] + basis(N_i)`` of ``B_i``,
* ``rho_i``: the first ``d_i`` of those coordinates (the residue),
* ``pi_i = rho_i ∘ theta_i`` as a ``d_i x l`` matrix (``pi_rows``).

Row ``j`` of ``pi_i`` is ``alpha_ij`` written in terms of ``d_0, ..., d_{l-1}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .algebra import AlgebraElement, AlgebraScheme
from .exactpoly import PolyRing, QuotientElement, QuotientRing
from .exactpoly.fields import (
    Domain,
    upoly_divmod,
    upoly_eval,
    upoly_monic,
    upoly_mul,
    upoly_str,
    upoly_trim,
    upoly_xgcd,
)
from .exactpoly.linalg import nullspace, rank, rref, solve

FACTOR_DEGREE_BUDGET = 24


class FactorizationBudgetExceeded(RuntimeError):
    """A univariate polynomial is too large to factor without user hints."""


# -- linear algebra on the algebra ---------------------------------------------


def _span_basis(vectors: Sequence[Sequence], K: Domain) -> list[list]:
    if not vectors:
        return []
    red, _ = rref(vectors, K)
    return red


def _coords_in(basis: Sequence[Sequence], v: Sequence, K: Domain) -> list | None:
    if not basis:
        return [] if not any(v) else None
    cols = [list(c) for c in zip(*basis)]
    return solve(cols, list(v), K)


def _check_field(A: AlgebraScheme):
    if isinstance(A.domain, PolyRing) or not A.domain.is_field:
        raise ValueError("decomposition needs structure constants in a field (no symbolic parameters)")


def _frobenius_power(A: AlgebraScheme) -> int:
    p = A.characteristic
    q = p
    while q < A.rank:
        q *= p
    return q


def nilradical(A: AlgebraScheme) -> list[list]:
    """Basis (reduced echelon rows) of the ideal of nilpotent elements.

    Characteristic 0: kernel of the trace form ``(x, y) -> tr(M_{xy})``.
    Characteristic p: kernel of the ``F_p``-linear map ``x -> x^q`` with
    ``q = p^k >= rank``, which is exactly the set of nilpotents.
    """
    _check_field(A)
    K = A.domain
    n = A.rank
    basis = [A.basis_element(i) for i in range(n)]
    if A.characteristic == 0:
        traces = []
        for i in range(n):
            row = []
            for j in range(n):
                M = A.multiplication_matrix((basis[i] * basis[j]).coords)
                row.append(sum((M[k][k] for k in range(n)), K.zero))
            traces.append(row)
        ker = nullspace(traces, K, n)
    else:
        q = _frobenius_power(A)
        images = [(b**q).coords for b in basis]
        # v -> sum v_i images[i] is F_p-linear; kernel of the transposed system
        cols = [[images[i][k] for i in range(n)] for k in range(n)]
        ker = nullspace(cols, K, n)
    return _span_basis(ker, K)


def nilpotency_index(A: AlgebraScheme, nil: Sequence[Sequence] | None = None) -> int:
    """Smallest ``k`` with ``N^k = 0`` (1 for a reduced algebra)."""
    K = A.domain
    nil = nilradical(A) if nil is None else nil
    cur = [list(v) for v in nil]
    k = 1
    while cur:
        prods = [A.multiply_coords(u, v) for u in cur for v in nil]
        cur = _span_basis([p for p in prods if any(p)], K)
        k += 1
        if k > A.rank + 1:
            raise ArithmeticError("nilradical is not nilpotent; the algebra data are inconsistent")
    return k


def is_nilpotent(v: AlgebraElement) -> bool:
    return not any((v ** v.parent.rank).coords)


# -- univariate polynomials ------------------------------------------------------


def _to_sympy(coeffs: Sequence, K: Domain):
    import sympy

    x = sympy.Symbol("x")
    if K.characteristic == 0:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(coeffs))
        return sympy.Poly(expr, x, domain="QQ")
    expr = sum(int(c.value) * x**k for k, c in enumerate(coeffs))
    return sympy.Poly(expr, x, modulus=K.characteristic)


def _from_sympy(poly, K: Domain) -> list:
    from fractions import Fraction

    coeffs = list(reversed(poly.all_coeffs()))
    if K.characteristic == 0:
        return [K(Fraction(int(c.p), int(c.q))) for c in coeffs]
    return [K(int(c)) for c in coeffs]


def factor_univariate(coeffs: Sequence, K: Domain, hints: Sequence[Sequence] | None = None) -> list[list]:
    """Distinct monic irreducible factors of a univariate polynomial over ``Q`` or ``F_p``.

    Factoring is delegated to sympy up to degree 24; beyond that the caller
    must supply ``hints`` (asserted irreducible factors) which are divided
    out and checked.
    """
    f = upoly_monic(upoly_trim(list(coeffs)), K)
    deg = len(f) - 1
    if deg <= 0:
        return []
    out: list[list] = []
    if hints:
        for h in hints:
            h = upoly_monic([K(c) for c in h], K)
            q, r = upoly_divmod(f, h, K)
            if any(r):
                continue
            for g in out:
                if len(upoly_monic(upoly_xgcd(g, h, K)[0], K)) > 1:
                    raise ValueError("hinted factors are not pairwise coprime")
            out.append(h)
            while not any(r):
                f = q
                q, r = upoly_divmod(f, h, K)
        if len(f) == 1:
            return out
    if len(f) - 1 > FACTOR_DEGREE_BUDGET:
        raise FactorizationBudgetExceeded(
            f"degree {len(f) - 1} exceeds the factorization budget; supply factor hints for {upoly_str(f, 'x', K)}"
        )
    _, facs = _to_sympy(f, K).factor_list()
    for g, _ in facs:
        out.append(upoly_monic(_from_sympy(g, K), K))
    return out


def minimal_polynomial(a: AlgebraElement, unit: AlgebraElement, subspace: Sequence[Sequence] | None = None) -> list:
    """Monic minimal polynomial of ``a`` (low degree first), ``unit`` playing the role of 1."""
    K = a.ring
    powers = [list(unit.coords)]
    cur = unit
    while True:
        cur = cur * a
        v = list(cur.coords)
        sol = _coords_in(powers, v, K)
        if sol is not None:
            return [-c for c in sol] + [K.one]
        powers.append(v)


def _poly_at(coeffs: Sequence, a: AlgebraElement, unit: AlgebraElement) -> AlgebraElement:
    acc = a.parent.zero_element(a.ring)
    for c in reversed(coeffs):
        acc = acc * a + unit * c
    return acc


def lift_idempotent(e: AlgebraElement, max_steps: int = 64) -> AlgebraElement:
    """Iterate ``e <- 3e^2 - 2e^3`` to an exact idempotent (needs ``e^2 - e`` nilpotent)."""
    for _ in range(max_steps):
        e2 = e * e
        if e2 == e:
            return e
        e = e2 * 3 - e2 * e * 2
    raise ArithmeticError("idempotent lifting did not converge")


# -- the decomposition ---------------------------------------------------------------


@dataclass
class LocalFactor:
    idempotent: AlgebraElement
    residue_poly: list  # monic, low degree first
    residue_generator: AlgebraElement
    factor_basis: list[AlgebraElement]  # [g^0..g^{d-1}] + nilradical part
    nil_basis: list[list]
    theta: list[list]  # dim(B_i) x l
    pi_rows: list[list]  # d_i x l

    @property
    def degree(self) -> int:
        return len(self.residue_poly) - 1

    @property
    def dimension(self) -> int:
        return len(self.factor_basis)

    @property
    def rho(self) -> list[list]:
        """Residue map on adapted coordinates: projection to the first ``d_i`` entries."""
        K = self.idempotent.ring
        return [[K.one if c == r else K.zero for c in range(self.dimension)] for r in range(self.degree)]

    def residue_poly_str(self, var: str = "x") -> str:
        return upoly_str(self.residue_poly, var, self.idempotent.ring)


@dataclass
class LocalDecomposition:
    algebra: AlgebraScheme
    factors: list[LocalFactor]
    nilradical: list[list]
    nilpotency_index: int
    experimental: bool = False

    @property
    def t(self) -> int:
        return len(self.factors) - 1

    @property
    def assumption_4_1_ii(self) -> bool:
        """True iff every residue field is the base field."""
        return all(f.degree == 1 for f in self.factors)

    def to_json(self) -> dict:
        K = self.algebra.domain
        s = K.to_str
        return {
            "t": self.t,
            "rank": self.algebra.rank,
            "nilradical_rank": len(self.nilradical),
            "nilpotency_index": self.nilpotency_index,
            "assumption_4_1_ii": self.assumption_4_1_ii,
            "experimental": self.experimental,
            "factors": [
                {
                    "index": i,
                    "idempotent": [s(c) for c in f.idempotent.coords],
                    "dimension": f.dimension,
                    "residue_degree": f.degree,
                    "P": f.residue_poly_str(),
                    "P_coeffs": [s(c) for c in f.residue_poly],
                    "residue_generator": [s(c) for c in f.residue_generator.coords],
                    "alpha": [[s(c) for c in row] for row in f.pi_rows],
                }
                for i, f in enumerate(self.factors)
            ],
        }


def _candidates(A: AlgebraScheme):
    n = A.rank
    K = A.domain
    for i in range(n):
        yield A.basis_element(i)
    for i, j in itertools.combinations(range(n), 2):
        yield A.basis_element(i) + A.basis_element(j)
    for k in range(2, 4 * n + 8):
        yield A.element([K(k) ** i for i in range(n)])


def _restricted_minpoly(b: AlgebraElement, e: AlgebraElement) -> list:
    return minimal_polynomial(b * e, e)


def _split_once(
    e: AlgebraElement, A: AlgebraScheme, nil_dim: int, dim: int, hints
) -> tuple[AlgebraElement, AlgebraElement] | tuple[None, AlgebraElement | None]:
    """Split ``e`` into two orthogonal idempotents, or return ``(None, g)`` with a residue generator."""
    K = A.domain
    red_dim = dim - nil_dim
    for b in _candidates(A):
        a = b * e
        mu = minimal_polynomial(a, e)
        facs = factor_univariate(mu, K, hints)
        if len(facs) >= 2:
            f1 = facs[0]
            rest = [K.one]
            for g in facs[1:]:
                rest = upoly_mul(rest, g, K)
            g, s, t = upoly_xgcd(f1, rest, K)
            # t*rest = 1 mod f1 and 0 mod rest
            h = upoly_mul(t, rest, K)
            approx = _poly_at(h, a, e)
            e1 = lift_idempotent(approx)
            e2 = e - e1
            if e1 and e2:
                return e1, e2
        elif len(facs) == 1 and len(facs[0]) - 1 == red_dim:
            return None, a
    return None, None


def _subspace(e: AlgebraElement, A: AlgebraScheme) -> list[list]:
    K = A.domain
    return _span_basis([(e * A.basis_element(i)).coords for i in range(A.rank)], K)


def _primitive_idempotents(A: AlgebraScheme, nil: list[list], hints) -> list[tuple[AlgebraElement, Any]]:
    K = A.domain
    todo = [A.unit_element()]
    done: list[tuple[AlgebraElement, Any]] = []
    while todo:
        e = todo.pop()
        sub = _subspace(e, A)
        nil_e = _span_basis([v for v in (A.multiply_coords(e.coords, n) for n in nil) if any(v)], K)
        e1, other = _split_once(e, A, len(nil_e), len(sub), hints)
        if e1 is not None:
            todo.extend([e1, other])
            continue
        if other is None:
            raise ArithmeticError(f"could not split or certify locality of the factor with idempotent {e}")
        done.append((e, other))
    return done


def _sort_key(K: Domain):
    def num(c):
        return c if K.characteristic == 0 else c.value

    def key(item):
        e, P = item
        return (len(P), tuple(num(c) for c in reversed(P)), tuple(-num(c) for c in e.coords))

    return key


def local_decomposition(A: AlgebraScheme, factor_hints: Sequence[Sequence] | None = None) -> LocalDecomposition:
    """Decompose into local factors; factor 0 is the one on which ``pi`` is nonzero."""
    _check_field(A)
    K = A.domain
    if not A.is_normalized():
        raise ValueError("decomposition expects a normalized algebra")
    nil = nilradical(A)
    nidx = nilpotency_index(A, nil)
    prims = _primitive_idempotents(A, nil, factor_hints)

    items = []
    for e, gen in prims:
        nil_e = _span_basis([v for v in (A.multiply_coords(e.coords, n) for n in nil) if any(v)], K)
        sub = _subspace(e, A)
        d = len(sub) - len(nil_e)
        if d == 1:
            g = e
            P = [-K.one, K.one]
        else:
            g = gen
            P = minimal_polynomial(g, e)
            facs = factor_univariate(P, K, factor_hints)
            P = facs[0]
        items.append((e, P, g, nil_e))

    first = [it for it in items if it[0].project() == K.one]
    if len(first) != 1:
        raise ArithmeticError("exactly one local factor must carry the projection")
    rest = sorted((it for it in items if it is not first[0]), key=lambda it: _sort_key(K)((it[0], it[1])))
    ordered = first + rest

    factors = []
    for e, P, g, nil_e in ordered:
        d = len(P) - 1
        powers = [e]
        for _ in range(d - 1):
            powers.append(powers[-1] * g)
        basis = powers + [A.element(v) for v in nil_e]
        vecs = [b.coords for b in basis]
        theta_cols = []
        for m in range(A.rank):
            v = A.multiply_coords(e.coords, A.basis_element(m).coords)
            c = _coords_in(vecs, v, K)
            if c is None:
                raise ArithmeticError("adapted basis does not span the factor")
            theta_cols.append(c)
        theta = [[theta_cols[m][r] for m in range(A.rank)] for r in range(len(basis))]
        factors.append(LocalFactor(e, P, g, basis, nil_e, theta, theta[:d]))
    return LocalDecomposition(A, factors, nil, nidx, experimental=A.characteristic != 0)


# -- associated operators ------------------------------------------------------------


@dataclass
class AssociatedOperators:
    decomposition: LocalDecomposition
    alpha: list[list[list]]  # alpha[i][j] is a length-l row

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.alpha]

    @property
    def sigma_rows(self) -> dict[int, list]:
        """Rows of the endomorphisms ``sigma_i`` for the factors with ``d_i = 1``."""
        return {i: a[0] for i, a in enumerate(self.alpha) if len(a) == 1}

    def sigma_value(self, i: int, coords: Sequence, ring: Domain) -> list:
        """``sigma_i(a) = sum_j alpha_ij(a) x^j`` as a coefficient list, given ``e(a)``."""
        return [sum((c * ring(r) for c, r in zip(coords, row) if c and r), ring.zero) for row in self.alpha[i]]

    def to_json(self) -> dict:
        K = self.decomposition.algebra.domain
        return {
            "factors": [
                {"index": i, "degree": len(a), "alpha": [[K.to_str(c) for c in row] for row in a]}
                for i, a in enumerate(self.alpha)
            ]
        }


def associated_operators(dec: LocalDecomposition) -> AssociatedOperators:
    return AssociatedOperators(dec, [list(map(list, f.pi_rows)) for f in dec.factors])


def splitting_endomorphisms(
    ops: AssociatedOperators,
    dec: LocalDecomposition | None = None,
    splitting: Mapping[int, tuple[QuotientRing, Sequence]] | None = None,
) -> dict[int, list[list]]:
    """``sigma_ik = sum_j b_ik^j alpha_ij`` over a splitting field.

    ``splitting[i] = (L, roots)`` gives the ``d_i`` distinct roots of ``P_i``
    in the number field ``L``.  Degree-1 factors need no data.
    """
    dec = dec or ops.decomposition
    splitting = dict(splitting or {})
    out: dict[int, list[list]] = {}
    for i, (fac, rows) in enumerate(zip(dec.factors, ops.alpha)):
        d = len(rows)
        if d == 1 and i not in splitting:
            out[i] = [list(rows[0])]
            continue
        if i not in splitting:
            raise ValueError(f"factor {i} has residue degree {d}; give a splitting field and its roots")
        L, roots = splitting[i]
        roots = [L(r) for r in roots]
        if len(roots) != d:
            raise ValueError(f"factor {i} needs {d} roots, got {len(roots)}")
        if len(set(roots)) != d:
            raise ValueError("supplied roots are not distinct")
        for r in roots:
            val = upoly_eval([L(c) for c in fac.residue_poly], r, L.one)
            if val:
                raise ValueError(f"{r} is not a root of {fac.residue_poly_str()}")
        rows_k = []
        for r in roots:
            row = [L.zero] * len(rows[0])
            power = L.one
            for j in range(d):
                for m, c in enumerate(rows[j]):
                    if c:
                        row[m] = row[m] + power * L(c)
                power = power * r
            rows_k.append(row)
        out[i] = rows_k
    return out


# -- Hensel lifting -------------------------------------------------------------------


def _eval_poly(P: Sequence[AlgebraElement], b: AlgebraElement) -> AlgebraElement:
    acc = b.parent.zero_element(b.ring)
    for c in reversed(P):
        acc = acc * b + c
    return acc


def _derivative(P: Sequence[AlgebraElement]) -> list[AlgebraElement]:
    return [P[k] * k for k in range(1, len(P))]


def hensel_newton(P: Sequence[AlgebraElement], c: AlgebraElement, nil_index: int) -> AlgebraElement:
    """Newton's iteration ``b <- b - P(b)/P'(b)``; exact after ``ceil(log2(nil_index)) + 1`` steps."""
    dP = _derivative(P)
    if not _eval_poly(dP, c).is_unit():
        raise ZeroDivisionError("P'(c) is not a unit; Hensel lifting does not apply")
    b = c
    steps = max(1, math.ceil(math.log2(max(nil_index, 1)))) + 1
    for _ in range(steps):
        val = _eval_poly(P, b)
        if not val:
            return b
        try:
            inv = _eval_poly(dP, b).inverse()
        except ZeroDivisionError:
            raise ZeroDivisionError("P'(c) is not a unit; Hensel lifting does not apply") from None
        b = b - val * inv
    if _eval_poly(P, b):
        raise ArithmeticError("Newton iteration did not reach an exact root within the nilpotency bound")
    return b


def hensel_lift(P: Sequence, c: AlgebraElement) -> AlgebraElement:
    """The unique root ``b`` of ``P`` congruent to ``c`` modulo the nilradical.

    ``P`` is a coefficient list (low degree first) of algebra elements or
    scalars; ``P(c)`` must be nilpotent and ``P'(c)`` a unit.
    """
    A = c.parent
    coeffs = [p if isinstance(p, AlgebraElement) else A.scalar(p, c.ring) for p in P]
    coeffs = [p.change_ring(c.ring) for p in coeffs]
    if not is_nilpotent(_eval_poly(coeffs, c)):
        raise ValueError("P(c) is not nilpotent")
    idx = nilpotency_index(A) if not isinstance(A.domain, PolyRing) else A.rank + 1
    return hensel_newton(coeffs, c, idx)


__all__ = [
    "AssociatedOperators",
    "FactorizationBudgetExceeded",
    "LocalDecomposition",
    "LocalFactor",
    "associated_operators",
    "factor_univariate",
    "hensel_lift",
    "hensel_newton",
    "is_nilpotent",
    "lift_idempotent",
    "local_decomposition",
    "minimal_polynomial",
    "nilpotency_index",
    "nilradical",
    "splitting_endomorphisms",
]
