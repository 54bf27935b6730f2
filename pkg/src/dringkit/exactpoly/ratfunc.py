"""Rational functions over a field, kept in lowest terms.

Normalisation removes the gcd of numerator and denominator (recursive
primitive-remainder-sequence gcd over the coefficient field) and makes the
denominator monic under the ring's monomial order, so equal functions have
equal representations.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import Domain, GFElement, QuotientElement
from .poly import LEX, MultiPoly, PolyRing


def exact_divide(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Return ``f / g``; raises ``ArithmeticError`` if ``g`` does not divide ``f``."""
    if not g.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant():
        return f * (g.ring.domain.one / g.constant_value())
    ring = f.ring
    ge, gc = g.leading_term(LEX)
    inv = ring.domain.one / gc
    q: dict = {}
    r = f
    while r.terms:
        re_, rc = r.leading_term(LEX)
        d = tuple(a - b for a, b in zip(re_, ge))
        if any(k < 0 for k in d):
            raise ArithmeticError("inexact polynomial division")
        c = rc * inv
        q[d] = c
        r = r - g * MultiPoly(ring, {d: c})
    return MultiPoly(ring, q)


def _content(coeffs: dict[int, MultiPoly]) -> MultiPoly:
    g = None
    for c in coeffs.values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return g.ring.constant(1)
    return g


def _from_univariate(coeffs: dict[int, MultiPoly], i: int) -> MultiPoly:
    ring = next(iter(coeffs.values())).ring
    out = {}
    for k, c in coeffs.items():
        for e, v in c.terms.items():
            out[e[:i] + (k,) + e[i + 1 :]] = v
    return MultiPoly(ring, out)


def _prem(a: dict[int, MultiPoly], b: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
    db = max(b)
    lb = b[db]
    a = dict(a)
    while a and max(a) >= db:
        da = max(a)
        la = a[da]
        shift = da - db
        new = {k: c * lb for k, c in a.items()}
        for k, c in b.items():
            kk = k + shift
            new[kk] = new.get(kk, c.ring.constant(0)) - c * la
        a = {k: c for k, c in new.items() if c.terms}
    return a


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic (under the ring order) gcd of two polynomials over a field."""
    ring = f.ring
    if not f.terms:
        return g.monic()
    if not g.terms:
        return f.monic()
    if f.is_constant() or g.is_constant():
        return ring.constant(1)
    used_f = f.variables_used()
    used_g = g.variables_used()
    var = min((ring.index(v) for v in used_f | used_g))
    if ring.vars[var] not in used_g:
        return poly_gcd(_content(f.univariate_coeffs(var)), g)
    if ring.vars[var] not in used_f:
        return poly_gcd(f, _content(g.univariate_coeffs(var)))
    uf, ug = f.univariate_coeffs(var), g.univariate_coeffs(var)
    cf, cg = _content(uf), _content(ug)
    c = poly_gcd(cf, cg)
    a = {k: exact_divide(v, cf) for k, v in uf.items()}
    b = {k: exact_divide(v, cg) for k, v in ug.items()}
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            break
        if max(r) == 0:
            b = None
            break
        cr = _content(r)
        a, b = b, {k: exact_divide(v, cr) for k, v in r.items()}
    if b is None:
        return c.monic()
    h = _from_univariate(b, var)
    return (h * c).monic()


class RationalFunction:
    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator: MultiPoly, denominator: MultiPoly | None = None, _reduced=False):
        ring = numerator.ring
        if denominator is None:
            denominator = ring.constant(1)
        if denominator.ring != ring:
            raise TypeError("numerator and denominator live in different rings")
        if not denominator.terms:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not numerator.terms:
                denominator = ring.constant(1)
            elif denominator.is_constant():
                inv = ring.domain.one / denominator.constant_value()
                numerator = numerator * inv
                denominator = ring.constant(1)
            else:
                g = poly_gcd(numerator, denominator)
                if not g.is_constant():
                    numerator = exact_divide(numerator, g)
                    denominator = exact_divide(denominator, g)
                lc = denominator.leading_coefficient()
                if lc != ring.domain.one:
                    inv = ring.domain.one / lc
                    numerator = numerator * inv
                    denominator = denominator * inv
        self.numerator = numerator
        self.denominator = denominator
        self._hash = None

    @property
    def ring(self) -> PolyRing:
        return self.numerator.ring

    def _wrap(self, other) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise TypeError("rational functions over different rings")
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction(self.ring(other), _reduced=True)
        try:
            return RationalFunction(self.ring.constant(other), _reduced=True)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.denominator == o.denominator:
            if self.denominator.is_constant():
                return RationalFunction(self.numerator + o.numerator, self.denominator, _reduced=True)
            return RationalFunction(self.numerator + o.numerator, self.denominator)
        return RationalFunction(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, _reduced=True)

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
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.denominator.is_constant() and o.denominator.is_constant():
            return RationalFunction(self.numerator * o.numerator, _reduced=True)
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.numerator.terms:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.numerator**n, self.denominator**n, _reduced=True)

    def __eq__(self, other):
        o = other if isinstance(other, RationalFunction) else self._wrap(other)
        if o is None:
            return NotImplemented
        return self.numerator == o.numerator and self.denominator == o.denominator

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def __bool__(self):
        return bool(self.numerator.terms)

    def is_polynomial(self) -> bool:
        return self.denominator.is_constant()

    def derivative(self, var: str | int) -> RationalFunction:
        n, d = self.numerator, self.denominator
        return RationalFunction(n.derivative(var) * d - n * d.derivative(var), d * d)

    def evaluate(self, values, one=None):
        num = self.numerator.evaluate(values, one=one)
        den = self.denominator.evaluate(values, one=one)
        return num / den

    def __str__(self):
        if self.denominator.is_constant():
            return str(self.numerator)
        n = str(self.numerator)
        if len(self.numerator.terms) > 1:
            n = f"({n})"
        d = str(self.denominator)
        if len(self.denominator.terms) > 1 or self.ring.domain.needs_parens(
            next(iter(self.denominator.terms.values()))
        ) or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({self})"


class FractionField(Domain):
    """Field of fractions of a polynomial ring over a field."""

    is_field = True

    def __init__(self, ring: PolyRing):
        if not ring.domain.is_field:
            raise ValueError("fraction fields are only built over polynomial rings over fields")
        self.ring = ring
        self.vars = ring.vars
        self.domain = ring.domain
        self.characteristic = ring.characteristic

    def __call__(self, value) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.ring == self.ring:
                return value
            return RationalFunction(self.ring(value.numerator), self.ring(value.denominator))
        if isinstance(value, str):
            from .parse import parse_expression

            return self(parse_expression(value, self.ring.vars, self.ring.domain))
        if isinstance(value, MultiPoly):
            return RationalFunction(self.ring(value), _reduced=True)
        if isinstance(value, (int, Fraction, GFElement, QuotientElement)) or not hasattr(value, "ring"):
            return RationalFunction(self.ring.constant(value), _reduced=True)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def gen(self, name: str) -> RationalFunction:
        return RationalFunction(self.ring.gen(name), _reduced=True)

    def gens(self) -> list[RationalFunction]:
        return [self.gen(v) for v in self.vars]

    def to_str(self, value) -> str:
        return str(value)

    def needs_parens(self, value) -> bool:
        return value.denominator.is_constant() and len(value.numerator.terms) > 1 or (
            not value.denominator.is_constant()
        )

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.ring == self.ring

    def __hash__(self):
        return hash(("Frac", self.ring))

    def __repr__(self):
        return f"FractionField({self.ring!r})"
