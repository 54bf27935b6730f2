"""Exact coefficient domains.

A *domain* is a small object that knows its characteristic, how to build
its zero and one, and how to coerce foreign values (ints, fractions, strings,
elements of a subring) into its own elements.  Elements themselves are plain
Python objects supporting ``+ - * **`` and, for fields, ``/``.

Three kinds live here:

* ``QQ``: the rationals, elements are :class:`fractions.Fraction`.
* ``GF(p)``: prime fields, elements are :class:`GFElement`.
* :class:`QuotientRing`: ``K[y]/(P)`` for a field ``K`` and monic ``P``.
  Number fields are ``QuotientRing(QQ, P)``; the residue fields and algebraic
  extensions used elsewhere share the same dense-vector kernel.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence


class Domain:
    """Base class for coefficient domains."""

    characteristic: int = 0
    is_field: bool = True

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):  # pragma: no cover - abstract
        raise NotImplementedError

    def is_zero(self, value) -> bool:
        return not value

    def to_str(self, value) -> str:
        return str(value)

    def needs_parens(self, value) -> bool:
        """True when ``to_str(value)`` must be wrapped before multiplying."""
        return False


class RationalField(Domain):
    characteristic = 0
    is_field = True
    name = "QQ"

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __call__(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, GFElement):
            raise TypeError("cannot coerce a prime-field residue into QQ")
        return Fraction(value)

    def to_str(self, value) -> str:
        return str(value)

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return (RationalField, ())


QQ = RationalField()


class GFElement:
    """Residue modulo a prime, always stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise TypeError(f"mixing GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in GF({self.p})")
            return other.numerator * pow(other.denominator, -1, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.value, self.p)

    def inverse(self) -> GFElement:
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return GFElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * GFElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GFElement(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"GFElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class PrimeField(Domain):
    is_field = True

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, value) -> GFElement:
        if isinstance(value, GFElement):
            if value.p != self.p:
                raise TypeError(f"cannot coerce GF({value.p}) element into GF({self.p})")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in GF({self.p})")
            return GFElement(value.numerator * pow(value.denominator, -1, self.p), self.p)
        return GFElement(int(value), self.p)

    def elements(self):
        return [GFElement(v, self.p) for v in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_characteristic(char: int) -> Domain:
    return QQ if char == 0 else GF(char)


# ---------------------------------------------------------------------------
# dense univariate helpers over a field domain, shared by QuotientRing and the
# decomposition code.  Polynomials are coefficient lists, lowest degree first,
# with no trailing zeros.


def upoly_trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def upoly_add(a: Sequence, b: Sequence, K: Domain) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else K.zero) + (b[i] if i < len(b) else K.zero) for i in range(n)]
    return upoly_trim(out)


def upoly_sub(a: Sequence, b: Sequence, K: Domain) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else K.zero) - (b[i] if i < len(b) else K.zero) for i in range(n)]
    return upoly_trim(out)


def upoly_mul(a: Sequence, b: Sequence, K: Domain) -> list:
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return upoly_trim(out)


def upoly_divmod(a: Sequence, b: Sequence, K: Domain) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    upoly_trim(r)
    db = len(b) - 1
    inv_lc = K.one / b[-1]
    q = [K.zero] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = r[-1] * inv_lc
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = r[i + shift] - c * y
        r.pop()
        upoly_trim(r)
    return upoly_trim(q), r


def upoly_monic(a: Sequence, K: Domain) -> list:
    if not a:
        return []
    inv = K.one / a[-1]
    return [x * inv for x in a]


def upoly_gcd(a: Sequence, b: Sequence, K: Domain) -> list:
    a, b = upoly_trim(list(a)), upoly_trim(list(b))
    while b:
        a, b = b, upoly_divmod(a, b, K)[1]
    return upoly_monic(a, K)


def upoly_xgcd(a: Sequence, b: Sequence, K: Domain) -> tuple[list, list, list]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = upoly_trim(list(a)), upoly_trim(list(b))
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        q, r = upoly_divmod(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, upoly_sub(s0, upoly_mul(q, s1, K), K)
        t0, t1 = t1, upoly_sub(t0, upoly_mul(q, t1, K), K)
    if not r0:
        return [], s0, t0
    inv = K.one / r0[-1]
    return [x * inv for x in r0], [x * inv for x in s0], [x * inv for x in t0]


def upoly_derivative(a: Sequence, K: Domain) -> list:
    return upoly_trim([a[i] * K(i) for i in range(1, len(a))])


def upoly_eval(a: Sequence, x, one):
    acc = one * 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def upoly_str(a: Sequence, var: str = "x", K: Domain | None = None) -> str:
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        cs = K.to_str(c) if K is not None else str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if K is not None and K.needs_parens(c) and i > 0:
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and cs == "1":
            body = mono
        elif mono:
            body = f"{cs}*{mono}"
        else:
            body = cs
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------


class QuotientElement:
    """Element of ``K[y]/(P)`` stored as a length ``deg P`` coordinate tuple."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: QuotientRing, coords: Sequence):
        if len(coords) != ring.degree:
            raise ValueError("coordinate vector has the wrong length")
        self.ring = ring
        self.coords = tuple(coords)

    def _coerce(self, other):
        if isinstance(other, QuotientElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise TypeError("mixing elements of different quotient rings")
            return other
        try:
            return self.ring(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.ring, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuotientElement(self.ring, [a - b for a, b in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuotientElement(self.ring, [-a for a in self.coords])

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.ring.from_poly(upoly_mul(self.coords, o.coords, self.ring.base))

    __rmul__ = __mul__

    def inverse(self) -> QuotientElement:
        R = self.ring
        g, s, _ = upoly_xgcd(list(self.coords), R.modulus, R.base)
        if len(g) != 1:
            raise ZeroDivisionError(f"{self} is not invertible modulo {R.modulus_str()}")
        return R.from_poly(s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, QuotientElement) else other
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __str__(self):
        return upoly_str(list(upoly_trim(list(self.coords))), self.ring.var, self.ring.base)

    def __repr__(self):
        return f"QuotientElement({self})"


class QuotientRing(Domain):
    """``base[var]/(modulus)`` with ``modulus`` monic.

    ``is_field`` is a caller assertion (irreducibility is never certified).
    """

    def __init__(self, base: Domain, modulus: Sequence, var: str = "y", is_field: bool = True):
        mod = upoly_trim([base(c) for c in modulus])
        if len(mod) < 2:
            raise ValueError("modulus must have positive degree")
        if mod[-1] != base.one:
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = mod
        self.degree = len(mod) - 1
        self.var = var
        self.is_field = is_field and base.is_field
        self.characteristic = base.characteristic

    def __call__(self, value) -> QuotientElement:
        if isinstance(value, QuotientElement):
            if value.ring == self:
                return value
            raise TypeError("element of a different quotient ring")
        if isinstance(value, str):
            from .parse import parse_expression

            return parse_expression(value, [], self)
        c = self.base(value)
        return QuotientElement(self, [c] + [self.base.zero] * (self.degree - 1))

    def from_poly(self, coeffs: Sequence) -> QuotientElement:
        _, r = upoly_divmod(list(coeffs), self.modulus, self.base)
        r = r + [self.base.zero] * (self.degree - len(r))
        return QuotientElement(self, r)

    @property
    def gen(self) -> QuotientElement:
        return self.from_poly([self.base.zero, self.base.one])

    def modulus_str(self) -> str:
        return upoly_str(self.modulus, self.var, self.base)

    def to_str(self, value) -> str:
        return str(value)

    def needs_parens(self, value) -> bool:
        nz = [c for c in value.coords if c]
        return len(nz) > 1 or any(self.base.needs_parens(c) for c in nz)

    def hom(self, image) -> Any:
        """Ring map ``K[y]/(P) -> target`` fixing ``K`` and sending ``y`` to ``image``."""

        def apply(v: QuotientElement):
            acc = image * 0
            for c in reversed(v.coords):
                acc = acc * image + c
            return acc

        return apply

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and other.base == self.base
            and other.var == self.var
            and list(other.modulus) == list(self.modulus)
        )

    def __hash__(self):
        return hash(("Q", self.var, tuple(str(c) for c in self.modulus)))

    def __repr__(self):
        return f"QuotientRing({self.base!r}, {self.modulus_str()})"


def NumberField(modulus: Sequence, var: str = "y") -> QuotientRing:
    """``QQ[var]/(modulus)``; the modulus is asserted irreducible by the caller."""
    return QuotientRing(QQ, modulus, var)
