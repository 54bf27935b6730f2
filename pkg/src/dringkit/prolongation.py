"""Prolongations, the map nabla, twists, dominance decisions, jet ideals and word counts.

Prolonged coordinates of a variable ``v`` are named ``v_0, ..., v_{l-1}`` and
listed block by block: all ``*_0`` first, then all ``*_1``, and so on, which
matches ``nabla(a) = (a, d_1 a, ..., d_{l-1} a)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .algebra import AlgebraElement, AlgebraScheme
from .decomposition import LocalDecomposition, associated_operators, splitting_endomorphisms
from .exactpoly import (
    Domain,
    FractionField,
    Ideal,
    MultiPoly,
    PolyRing,
    QuotientRing,
    RationalFunction,
    elimination_ideal,
    jacobian_rank,
    normal_form,
    parse_expression,
    radical_membership,
)
from .exactpoly.linalg import rref
from .operators import DRing


@dataclass
class AffineVarietySpec:
    """``V(gens)`` in ``ring``; ``prime`` records the caller's assertion that the ideal is prime."""

    ring: PolyRing
    gens: list[MultiPoly]
    prime: bool = False

    def __post_init__(self):
        self.gens = [self.ring(g) for g in self.gens]

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(self.ring.vars)

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, list(self.gens))

    @classmethod
    def from_strings(cls, vars_: Sequence[str], gens: Sequence[str], domain: Domain, prime: bool = False):
        ring = PolyRing(domain, list(vars_))
        return cls(ring, [parse_expression(g, ring) for g in gens], prime)

    def contains_point(self, point: Sequence) -> bool:
        return all(not g.evaluate(list(point), one=self.ring.domain.one) for g in self.gens)

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "gens": [str(g) for g in self.gens], "prime": self.prime}


def variety_from_json(data: Mapping, domain: Domain) -> AffineVarietySpec:
    if "vars" not in data:
        raise ValueError("variety spec lacks 'vars'")
    return AffineVarietySpec.from_strings(data["vars"], data.get("gens", []), domain, bool(data.get("prime", False)))


def prolonged_names(vars_: Sequence[str], ell: int) -> list[str]:
    return [f"{v}_{j}" for j in range(ell) for v in vars_]


@dataclass
class ProlongedIdeal:
    source: AffineVarietySpec
    ring: PolyRing
    components: list[list[MultiPoly]]  # components[g][j] = P_g^{(j)}

    @property
    def gens(self) -> list[MultiPoly]:
        return [c for comps in self.components for c in comps if c]

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.gens)

    def provenance(self) -> dict[str, list[str]]:
        return {str(g): [str(c) for c in comps] for g, comps in zip(self.source.gens, self.components)}

    def as_variety(self) -> AffineVarietySpec:
        return AffineVarietySpec(self.ring, self.gens, False)

    def to_json(self) -> dict:
        return {
            "vars": list(self.ring.vars),
            "gens": [str(g) for g in self.gens],
            "provenance": self.provenance(),
            "groebner": [str(g) for g in self.ideal.groebner()],
        }


def _to_domain(v, C: Domain):
    """Coerce an operator value into the coefficient domain ``C``."""
    if isinstance(v, RationalFunction) and v.is_polynomial():
        v = v.numerator * (v.ring.domain.one / v.denominator.constant_value())
    if isinstance(v, MultiPoly) and not isinstance(C, (PolyRing, FractionField)):
        if not v.is_constant() and v.terms:
            raise ValueError(f"{v} is not a constant of {C!r}")
        return C(v.constant_value())
    return C(v)


def coefficient_e(d: DRing, C: Domain) -> Callable[[Any], list]:
    """``c -> coordinates of e(c)`` in ``C`` (constants of the base use the structure map)."""
    cache: dict = {}

    def image(c):
        key = c
        if key not in cache:
            if d.has_prime_base and not isinstance(c, (MultiPoly, RationalFunction)):
                cache[key] = [C(c) * C(u) for u in d.algebra.unit]
            else:
                cache[key] = [_to_domain(v, C) for v in d.apply_e(c).coords]
        return cache[key]

    return image


def prolong(X: AffineVarietySpec, d: DRing) -> ProlongedIdeal:
    """Components ``P^{(j)}`` of ``P^e(sum_j x^{(j)} eps_j)`` for each generator ``P``."""
    A = d.algebra
    ell = A.rank
    C = X.ring.domain
    S = PolyRing(C, prolonged_names(X.vars, ell))
    m = len(X.vars)
    xs = [
        AlgebraElement(A, [S.gen(f"{v}_{j}") for j in range(ell)], S)
        for v in X.vars
    ]
    e_coef = coefficient_e(d, C)
    unit = A.unit_element(S)
    comps = []
    for P in X.gens:
        cache: dict[tuple, AlgebraElement] = {}

        def mono(exps: tuple) -> AlgebraElement:
            if exps in cache:
                return cache[exps]
            if not any(exps):
                return unit
            i = max(t for t in range(m) if exps[t])
            prev = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
            val = mono(prev) * xs[i]
            cache[exps] = val
            return val

        acc = [S.zero] * ell
        for exps, c in P.terms.items():
            mv = mono(exps)
            ec = AlgebraElement(A, [S.constant(v) for v in e_coef(c)], S)
            t = ec * mv
            acc = [a + b for a, b in zip(acc, t.coords)]
        comps.append(acc)
    return ProlongedIdeal(X, S, comps)


def nabla(a: Sequence, d: DRing) -> tuple:
    """``(a, d_1 a, ..., d_{l-1} a)`` in block order."""
    rows = [d.apply_e(x).coords for x in a]
    return tuple(rows[k][j] for j in range(d.rank) for k in range(len(a)))


def nabla_compatible(P: ProlongedIdeal, a: Sequence, d: DRing) -> bool:
    """Every prolonged generator vanishes at ``nabla(a)``."""
    point = list(nabla(a, d))
    F = d.field
    point = [F(v) for v in point]
    for g in P.gens:
        val = g.evaluate(point, coeff_map=lambda c: F(c), one=F.one)
        if val:
            return False
    return True


# -- twists ----------------------------------------------------------------------------


def sigma_from_row(d: DRing, row: Sequence, C: Domain) -> Callable:
    """Coefficient map ``c -> sum_j row_j d_j(c)``."""
    e_coef = coefficient_e(d, C)

    def sigma(c):
        return sum((C(r) * v for r, v in zip(row, e_coef(c)) if r and v), C.zero)

    return sigma


def twist(X: AffineVarietySpec, sigma: Callable | None, target: Domain | None = None) -> AffineVarietySpec:
    """Apply ``sigma`` to every coefficient of the defining polynomials of ``X``."""
    if sigma is None:
        return X
    target = target or X.ring.domain
    ring = X.ring.with_domain(target)
    gens = []
    for g in X.gens:
        terms = {}
        for e, c in g.terms.items():
            try:
                terms[e] = target(sigma(c))
            except (TypeError, ValueError, KeyError) as exc:
                raise ValueError(f"twist undefined on coefficient {c}: {exc}") from None
        gens.append(MultiPoly(ring, terms))
    return AffineVarietySpec(ring, gens, X.prime)


def field_conjugation(L: QuotientRing, image) -> Callable:
    """The automorphism of ``L = Q[y]/(P)`` sending the generator to ``image`` (checked to be a root)."""
    image = L(image)
    val = L.zero
    for c in reversed(L.modulus):
        val = val * image + c
    if val:
        raise ValueError(f"{image} is not a root of {L.modulus_str()}")
    return L.hom(image)


# -- projections pi-hat -----------------------------------------------------------------


@dataclass
class PiHat:
    """Linear maps ``x_k -> sum_j row_j x_k^{(j)}``, one per row."""

    factor: int
    rows: list[list]
    domain: Domain

    def forms(self, ring: PolyRing, vars_: Sequence[str], ell: int) -> list[list[MultiPoly]]:
        out = []
        for row in self.rows:
            forms = []
            for v in vars_:
                f = ring.zero
                for j, c in enumerate(row):
                    if c:
                        f = f + ring.gen(f"{v}_{j}") * ring.domain(c)
                forms.append(f)
            out.append(forms)
        return out

    def apply(self, point: Sequence, m: int) -> list[list]:
        """Image of a prolonged point (block order) under each row."""
        ell = len(self.rows[0])
        out = []
        for row in self.rows:
            vals = []
            for k in range(m):
                acc = 0
                for j in range(ell):
                    if row[j]:
                        acc = acc + point[j * m + k] * row[j]
                vals.append(acc)
            out.append(vals)
        return out

    def __str__(self):
        parts = []
        for row in self.rows:
            terms = []
            for j, c in enumerate(row):
                if not c:
                    continue
                s = self.domain.to_str(c)
                if s == "1":
                    terms.append(f"x_{j}")
                elif self.domain.needs_parens(c):
                    terms.append(f"({s})*x_{j}")
                else:
                    terms.append(f"{s}*x_{j}")
            text = " + ".join(terms).replace("+ -", "- ") if terms else "0"
            parts.append("x -> " + text)
        return "; ".join(parts)


def pi_hat_matrix(
    i: int, dec: LocalDecomposition, splitting: Mapping[int, tuple[QuotientRing, Sequence]] | None = None
) -> PiHat:
    """Rows ``pi_i(eps_j)``; a residue-degree ``d_i`` factor gives ``d_i`` rows (split ones if data given)."""
    fac = dec.factors[i]
    K = dec.algebra.domain
    if fac.degree == 1:
        return PiHat(i, [list(fac.pi_rows[0])], K)
    if splitting and i in splitting:
        rows = splitting_endomorphisms(associated_operators(dec), dec, {i: splitting[i]})[i]
        return PiHat(i, rows, splitting[i][0])
    return PiHat(i, [list(r) for r in fac.pi_rows], K)


# -- dominance ------------------------------------------------------------------------


@dataclass
class DominanceVerdict:
    factor: int
    split: int
    dense: bool
    method: str  # "membership" or "radical"
    eliminated: list[str]
    pi_hat: str

    @property
    def flag(self) -> str:
        return "up to radical" if self.method == "radical" else ""

    def to_json(self) -> dict:
        return {
            "factor": self.factor,
            "split": self.split,
            "dense": self.dense,
            "method": self.method,
            "flag": self.flag,
            "pi_hat": self.pi_hat,
            "elimination_basis": self.eliminated,
        }


@dataclass
class DominanceReport:
    verdicts: list[DominanceVerdict]
    y_prime: bool
    x_prime: bool

    @property
    def all_dense(self) -> bool:
        return all(v.dense for v in self.verdicts)

    def verdict(self, i: int, k: int = 0) -> bool:
        for v in self.verdicts:
            if v.factor == i and v.split == k:
                return v.dense
        raise KeyError((i, k))

    def to_json(self) -> dict:
        return {
            "x_prime_asserted": self.x_prime,
            "y_prime_asserted": self.y_prime,
            "all_dense": self.all_dense,
            "verdicts": [v.to_json() for v in self.verdicts],
        }


class ContainmentError(ValueError):
    """``Y`` is not contained in the prolongation of ``X``."""


def dominance_check(
    Y: AffineVarietySpec,
    X: AffineVarietySpec,
    d: DRing,
    dec: LocalDecomposition,
    *,
    splitting: Mapping[int, tuple[QuotientRing, Sequence]] | None = None,
    budget: int | None = None,
) -> DominanceReport:
    """Decide, for every local factor (and split root), whether ``pi_hat_i(Y)`` is dense in ``X^{sigma_i}``.

    The closure of the image is computed by eliminating ``Y``'s coordinates
    from ``I_Y + <w_k - pi_hat_i(x_k)>``.  Membership of the eliminated
    generators in ``I(X^sigma)`` uses normal forms when ``X`` is asserted
    prime and Rabinowitsch radical membership otherwise.
    """
    ell = d.rank
    tau = prolong(X, d)
    if tuple(Y.ring.vars) != tuple(tau.ring.vars):
        missing = set(tau.ring.vars) ^ set(Y.ring.vars)
        if missing:
            raise ValueError(f"Y must use the prolonged coordinates {list(tau.ring.vars)}")
    IY = Ideal(Y.ring, Y.gens)
    G = IY.groebner(budget=budget)
    for g in tau.gens:
        if normal_form(Y.ring(g), G).terms:
            raise ContainmentError(f"Y is not contained in the prolongation: {g} does not vanish on Y")

    verdicts = []
    for i, fac in enumerate(dec.factors):
        if fac.degree > 1 and not (splitting and i in splitting):
            raise ValueError(f"factor {i} has residue degree {fac.degree}; give splitting data")
        ph = pi_hat_matrix(i, dec, splitting)
        C = ph.domain if fac.degree > 1 else Y.ring.domain
        for k, row in enumerate(ph.rows):
            wnames = [f"w_{v}" for v in X.vars]
            big = PolyRing(C, list(Y.ring.vars) + wnames)
            gens = [g.change_ring(big, C) for g in Y.gens]
            for v, w in zip(X.vars, wnames):
                form = big.zero
                for j, c in enumerate(row):
                    if c:
                        form = form + big.gen(f"{v}_{j}") * C(c)
                gens.append(big.gen(w) - form)
            J = elimination_ideal(Ideal(big, gens), list(Y.ring.vars), budget=budget)
            # the twisted target in the w coordinates
            sigma = sigma_from_row(d, row, C) if i else None
            Xs = twist(X, sigma, C) if sigma else twist(X, None)
            wring = J.ring
            targets = [g.change_ring(X.ring.with_domain(C), C) for g in Xs.gens]
            renamed = [MultiPoly(wring, dict(t.terms)) for t in targets]
            target_ideal = Ideal(wring, renamed)
            if X.prime:
                method = "membership"
                TG = target_ideal.groebner(budget=budget)
                dense = all(not normal_form(g, TG).terms for g in J.gens)
            else:
                method = "radical"
                dense = all(radical_membership(g, target_ideal, budget=budget) for g in J.gens)
            verdicts.append(
                DominanceVerdict(
                    i, k, dense, method, [str(g) for g in J.gens],
                    str(PiHat(i, [row], C)),
                )
            )
    return DominanceReport(verdicts, Y.prime, X.prime)


# -- jets -----------------------------------------------------------------------------


def _monomials(n: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(lo, hi + 1):
        combos = []
        for c in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for t in c:
                e[t] += 1
            combos.append(tuple(e))
        out.extend(sorted(set(combos), reverse=True))
    return out


def jet_var_name(vars_: Sequence[str], mu: Sequence[int]) -> str:
    parts = []
    for v, k in zip(vars_, mu):
        parts.extend([v] * k)
    return "v_" + "_".join(parts)


def jet_ideal(X: AffineVarietySpec, p: Sequence, m: int) -> Ideal:
    """Linear equations of the order-``m`` algebraic jet space of ``X`` at ``p``.

    For each generator ``P`` and each monomial ``u^nu`` with ``|nu| <= m-1``,
    the truncation of ``u^nu P(p + u)`` to degrees ``1..m`` is read as a
    linear form in jet coordinates ``v_mu``.
    """
    C = X.ring.domain
    if C.characteristic != 0:
        raise ValueError("jet ideals are computed in characteristic 0")
    if m < 1:
        raise ValueError("jet order must be at least 1")
    n = len(X.vars)
    point = [C(c) for c in p]
    if len(point) != n:
        raise ValueError("point has the wrong number of coordinates")
    if not X.contains_point(point):
        raise ValueError("the point is not on X")
    mus = _monomials(n, 1, m)
    J = PolyRing(C, [jet_var_name(X.vars, mu) for mu in mus])
    shift = [X.ring.gen(v) + point[i] for i, v in enumerate(X.vars)]
    rows = []
    for P in X.gens:
        Q = P.evaluate(shift, one=X.ring.one) if P.terms else P
        for nu in _monomials(n, 0, m - 1):
            prod = Q * X.ring.monomial(nu)
            row = [prod.coefficient(mu) for mu in mus]
            if any(row):
                rows.append(row)
    red, _ = rref(rows, C) if rows else ([], [])
    forms = []
    for row in red:
        f = J.zero
        for c, name in zip(row, J.vars):
            if c:
                f = f + J.gen(name) * c
        forms.append(f)
    return Ideal(J, forms)


def tangent_ideal(X: AffineVarietySpec, p: Sequence) -> Ideal:
    return jet_ideal(X, p, 1)


# -- words and dimension sequences ------------------------------------------------------------


@dataclass(frozen=True)
class OperatorWord:
    """A word in the operator alphabet, applied right to left."""

    letters: tuple

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "ε"
        out = []
        for a in self.letters:
            out.append(f"σ{a[1]}⁻¹" if isinstance(a, tuple) else f"∂{a}")
        return "".join(out)


def enumerate_words(r: int, ell: int, inverse_factors: int = 0) -> list[OperatorWord]:
    """All words of length ``<= r`` over ``d_1..d_{l-1}`` (plus ``sigma_i^{-1}``), length-lexicographic."""
    alphabet: list = list(range(1, ell))
    alphabet += [("inv", i) for i in range(1, inverse_factors + 1)]
    out = []
    for length in range(r + 1):
        for w in itertools.product(alphabet, repeat=length):
            out.append(OperatorWord(tuple(w)))
    return out


def apply_word(word: OperatorWord, a, d: DRing, memo: dict | None = None):
    """``theta(a)`` for a word of operators (no inverses)."""
    memo = {} if memo is None else memo
    key = (word.letters, a)
    if key in memo:
        return memo[key]
    if not word.letters:
        val = d.coerce(a)
    else:
        if any(isinstance(x, tuple) for x in word.letters):
            raise ValueError("inverse endomorphisms are not evaluable on a presented function field")
        inner = apply_word(OperatorWord(word.letters[1:]), a, d, memo)
        val = d.apply_e(inner).coords[word.letters[0]]
    memo[key] = val
    return val


def dim_sequence(a: Sequence, d: DRing, r_max: int) -> list[int]:
    """Transcendence degrees of ``(theta a : theta in Xi_r)`` for ``r = 0..r_max``."""
    if d.characteristic != 0:
        raise ValueError("dimension sequences use the characteristic-0 Jacobian criterion")
    words = enumerate_words(r_max, d.rank)
    memo: dict = {}
    values_by_len: dict[int, list] = {}
    for w in words:
        for x in a:
            values_by_len.setdefault(len(w), []).append(apply_word(w, x, d, memo))
    F = d.field
    out = []
    acc: list = []
    variables = [v for v in d.ring.vars]
    for r in range(r_max + 1):
        acc.extend(F(v) for v in values_by_len.get(r, []))
        out.append(jacobian_rank(acc, variables) if variables else 0)
    return out


__all__ = [
    "AffineVarietySpec",
    "ContainmentError",
    "DominanceReport",
    "DominanceVerdict",
    "OperatorWord",
    "PiHat",
    "ProlongedIdeal",
    "apply_word",
    "coefficient_e",
    "dim_sequence",
    "dominance_check",
    "enumerate_words",
    "field_conjugation",
    "jet_ideal",
    "jet_var_name",
    "nabla",
    "nabla_compatible",
    "pi_hat_matrix",
    "prolong",
    "prolonged_names",
    "sigma_from_row",
    "tangent_ideal",
    "twist",
    "variety_from_json",
]
