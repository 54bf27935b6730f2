"""Sparse multivariate polynomials over an exact coefficient domain."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .fields import Domain, GFElement, QuotientElement


def _grevlex_key(exps: Sequence[int]) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """A multiplicative total order on exponent vectors.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order
    compares the first ``split`` variables by grevlex and breaks ties with
    grevlex on the rest, so it eliminates the leading block.
    """

    kind: str = "grevlex"
    split: int = 0

    def key(self, exps: Sequence[int]) -> tuple:
        if self.kind == "lex":
            return tuple(exps)
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "block":
            k = self.split
            return _grevlex_key(exps[:k]) + _grevlex_key(exps[k:])
        raise ValueError(f"unknown monomial order {self.kind!r}")

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(n_elim: int) -> MonomialOrder:
    return MonomialOrder("block", n_elim)


class PolyRing(Domain):
    """``domain[vars]`` with a default monomial order."""

    def __init__(self, domain: Domain, variables: Sequence[str], order: MonomialOrder = GREVLEX):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        self.domain = domain
        self.vars = variables
        self.nvars = len(variables)
        self.order = order
        self.characteristic = domain.characteristic
        self.is_field = False
        self._index = {v: i for i, v in enumerate(variables)}
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.vars == self.vars
            and other.domain == self.domain
            and other.order == self.order
        )

    def __hash__(self):
        return hash(("PolyRing", self.vars, self.domain, self.order))

    def __repr__(self):
        return f"PolyRing({self.domain!r}, {list(self.vars)}, {self.order})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def gen(self, name: str) -> MultiPoly:
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): self.domain.one})

    def gens(self) -> list[MultiPoly]:
        return [self.gen(v) for v in self.vars]

    def monomial(self, exps: Sequence[int], coeff=None) -> MultiPoly:
        c = self.domain.one if coeff is None else self.domain(coeff)
        return MultiPoly(self, {tuple(exps): c} if c else {})

    def constant(self, c) -> MultiPoly:
        c = self.domain(c)
        return MultiPoly(self, {self._zero_exp: c} if c else {})

    def __call__(self, value) -> MultiPoly:
        if isinstance(value, MultiPoly):
            if value.ring == self:
                return value
            return value.change_ring(self)
        if isinstance(value, str):
            from .parse import parse_expression

            out = parse_expression(value, self.vars, self.domain)
            return self(out)
        if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(
            value, (int, Fraction)
        ):
            # a RationalFunction with unit denominator
            if value.denominator.is_constant():
                return self(value.numerator) * (self.domain.one / value.denominator.constant_value())
            raise TypeError("rational function with nonconstant denominator is not a polynomial")
        return self.constant(value)

    def with_vars(self, variables: Sequence[str], order: MonomialOrder | None = None) -> PolyRing:
        return PolyRing(self.domain, variables, order or self.order)

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.domain, self.vars, order)

    def with_domain(self, domain: Domain) -> PolyRing:
        return PolyRing(domain, self.vars, self.order)

    def to_str(self, value) -> str:
        return str(value)

    def needs_parens(self, value) -> bool:
        return len(value.terms) > 1 or (
            len(value.terms) == 1 and self.domain.needs_parens(next(iter(value.terms.values())))
        )


def _coerce_coeff(ring: PolyRing, c):
    if isinstance(c, (int, Fraction, GFElement, QuotientElement)):
        return ring.domain(c)
    return ring.domain(c)


class MultiPoly:
    """Immutable sparse polynomial: a mapping exponent vector -> nonzero coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object] | None = None):
        self.ring = ring
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    # -- construction helpers ---------------------------------------------

    def _wrap(self, other) -> MultiPoly | None:
        if isinstance(other, MultiPoly):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise TypeError(f"polynomials from different rings: {self.ring} vs {other.ring}")
        try:
            return self.ring.constant(other)
        except (TypeError, ValueError):
            return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                s = v + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            o = self._wrap(other)
        else:
            try:
                c = self.ring.domain(other)
            except (TypeError, ValueError):
                return NotImplemented
            if not c:
                return MultiPoly(self.ring)
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        if not self.terms or not o.terms:
            return MultiPoly(self.ring)
        if len(o.terms) == 1:
            ((eo, co),) = o.terms.items()
            return MultiPoly(
                self.ring,
                {tuple(a + b for a, b in zip(e, eo)): c * co for e, c in self.terms.items()},
            )
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.ring, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant() and other.terms:
                return self * (self.ring.domain.one / other.constant_value())
            from .ratfunc import RationalFunction

            return RationalFunction(self, other)
        c = self.ring.domain(other)
        return self * (self.ring.domain.one / c)

    def __rtruediv__(self, other):
        from .ratfunc import RationalFunction

        return RationalFunction(self.ring.constant(other), self)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring.vars == other.ring.vars and self.terms == other.terms
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_value(self):
        return self.terms.get(self.ring._zero_exp, self.ring.domain.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str | int) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.vars[i])
        return used

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[tuple, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ring.order
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder | None = None) -> tuple:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder | None = None) -> MultiPoly:
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == self.ring.domain.one:
            return self
        inv = self.ring.domain.one / lc
        return MultiPoly(self.ring, {e: c * inv for e, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[tuple, object]]:
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.domain.zero)

    # -- transformations ----------------------------------------------------

    def map_coefficients(self, hom: Callable, ring: PolyRing | None = None) -> MultiPoly:
        ring = ring or self.ring
        return MultiPoly(ring, {e: ring.domain(hom(c)) for e, c in self.terms.items()})

    def change_ring(self, ring: PolyRing, coeff_map: Callable | None = None) -> MultiPoly:
        """Re-express in ``ring``: variables are matched by name, missing ones must not occur."""
        coeff_map = coeff_map or ring.domain
        if ring.vars == self.ring.vars:
            return MultiPoly(ring, {e: coeff_map(c) for e, c in self.terms.items()})
        pos = []
        for i, v in enumerate(self.ring.vars):
            pos.append(ring._index.get(v))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = pos[i]
                    if j is None:
                        raise ValueError(f"variable {self.ring.vars[i]!r} not in target ring")
                    ne[j] = k
            out[tuple(ne)] = coeff_map(c)
        return MultiPoly(ring, out)

    def derivative(self, var: str | int) -> MultiPoly:
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * self.ring.domain(e[i])
        return MultiPoly(self.ring, out)

    def evaluate(self, values: Sequence, coeff_map: Callable | None = None, one=None):
        """Substitute ``values[i]`` for the i-th variable.

        ``coeff_map`` sends each coefficient into the target ring (defaults to
        leaving it as is, relying on mixed arithmetic); ``one`` is the target's
        unit, needed when the polynomial is a constant.
        """
        if one is None:
            one = values[0] ** 0 if values else self.ring.domain.one
        powers: list[dict] = [dict() for _ in values]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 1:
                    cache[1] = values[i]
                else:
                    h = k // 2
                    p = power(i, h) * power(i, k - h)
                    cache[k] = p
            return cache[k]

        acc = None
        for e, c in self.terms.items():
            term = coeff_map(c) if coeff_map else c
            mono = None
            for i, k in enumerate(e):
                if k:
                    mono = power(i, k) if mono is None else mono * power(i, k)
            if mono is not None:
                term = mono * term if not coeff_map else term * mono
            else:
                term = one * term
            acc = term if acc is None else acc + term
        if acc is None:
            return one * 0
        return acc

    def substitute(self, mapping: Mapping[str, object]) -> MultiPoly:
        """Substitute polynomials (in the same ring) for some variables."""
        values = [mapping.get(v, self.ring.gen(v)) for v in self.ring.vars]
        values = [self.ring(v) for v in values]
        return self.evaluate(values, one=self.ring.constant(1))

    def univariate_coeffs(self, var: str | int) -> dict[int, MultiPoly]:
        """View as a polynomial in ``var`` with coefficients free of ``var``."""
        i = var if isinstance(var, int) else self.ring.index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(k, {})[ne] = c
        return {k: MultiPoly(self.ring, t) for k, t in out.items()}

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def format_monomial(vars_: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for v, k in zip(vars_, exps):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(f: MultiPoly, order: MonomialOrder | None = None) -> str:
    if not f.terms:
        return "0"
    K = f.ring.domain
    out = []
    for e, c in f.sorted_terms(order):
        mono = format_monomial(f.ring.vars, e)
        cs = K.to_str(c)
        neg = cs.startswith("-") and not K.needs_parens(c)
        if neg:
            cs = cs[1:]
        if mono and K.needs_parens(c):
            cs = f"({cs})"
        if mono and cs == "1":
            body = mono
        elif mono:
            body = f"{cs}*{mono}"
        else:
            body = cs
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def poly_from_terms(ring: PolyRing, items: Iterable[tuple[Sequence[int], object]]) -> MultiPoly:
    out: dict = {}
    for e, c in items:
        e = tuple(e)
        c = ring.domain(c)
        out[e] = out.get(e, ring.domain.zero) + c
    return MultiPoly(ring, out)
