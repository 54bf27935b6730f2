"""D-ring structures: Leibniz identities, homomorphic extension of ``e`` and evaluation.

A D-ring structure on ``K[x_1..x_m]`` (or its fraction field) is determined by
the images ``e(x_i)`` in ``D(R)``: ``e`` extends uniquely to a ring
homomorphism because the operators are free.  Everything below derives the
operators ``d_k`` from ``e`` on generators; operator tables are never stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .algebra import AlgebraElement, AlgebraScheme, algebra_from_json, normalize_basis
from .exactpoly import (
    Domain,
    FractionField,
    MultiPoly,
    PolyRing,
    QuotientElement,
    QuotientRing,
    RationalFunction,
    parse_expression,
)

OP = "∂"


# -- Leibniz identities ------------------------------------------------------


def _coef_str(c, K: Domain) -> tuple[str, str]:
    """Sign and magnitude text of a coefficient, parenthesised when composite."""
    s = K.to_str(c)
    if s.startswith("-") and not K.needs_parens(c):
        return "-", s[1:]
    if K.needs_parens(c):
        return "+", f"({s})"
    return "+", s


@dataclass(frozen=True)
class LeibnizIdentity:
    """``d_k(xy) = sum a[i,j,k] d_i(x) d_j(y)`` and ``d_k(1) = c_k``."""

    k: int
    terms: tuple[tuple[tuple[int, int], Any], ...]
    unit_value: Any
    domain: Domain

    def as_dict(self) -> dict[tuple[int, int], Any]:
        return dict(self.terms)

    @staticmethod
    def _factor(i: int, var: str) -> str:
        return var if i == 0 else f"{OP}{i}({var})"

    def rhs(self, x: str = "x", y: str = "y") -> str:
        out = ""
        for n, ((i, j), c) in enumerate(self.terms):
            body = f"{self._factor(i, x)}*{self._factor(j, y)}"
            if c == self.domain.one:
                sign, text = "+", body
            elif c == -self.domain.one:
                sign, text = "-", body
            else:
                sign, mag = _coef_str(c, self.domain)
                text = f"{mag}*{body}"
            if n == 0:
                out = text if sign == "+" else f"-{text}"
            else:
                out += f" {sign} {text}"
        return out or "0"

    def product_rule(self, x: str = "x", y: str = "y") -> str:
        return f"{OP}{self.k}({x}*{y}) = {self.rhs(x, y)}"

    def unit_rule(self) -> str:
        return f"{OP}{self.k}(1) = {self.domain.to_str(self.unit_value)}"

    def __str__(self):
        return f"{self.product_rule()}; {self.unit_rule()}"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "product": self.product_rule(),
            "unit": self.unit_rule(),
            "terms": [{"i": i, "j": j, "c": self.domain.to_str(c)} for (i, j), c in self.terms],
        }


def leibniz_identities(A: AlgebraScheme) -> list[LeibnizIdentity]:
    """The functional equations imposed on ``d_1..d_{l-1}`` by multiplicativity of ``e``."""
    if not A.is_normalized():
        raise ValueError("leibniz identities need a normalized algebra (pi = first coordinate)")
    out = []
    for k in range(1, A.rank):
        terms = []
        for i in range(A.rank):
            for j in range(A.rank):
                c = A.const(i, j, k)
                if c:
                    terms.append(((i, j), c))
        out.append(LeibnizIdentity(k, tuple(terms), A.unit[k], A.domain))
    return out


def _op_pattern(names: Mapping[str, int]) -> re.Pattern:
    alts = "".join("|" + re.escape(n) for n in sorted(names, key=len, reverse=True))
    return re.compile(r"(∂_?(\d+)" + alts + r")\(\s*([A-Za-z])\s*\)")


def _clean_rule(text: str) -> str:
    for a, b in ((r"\partial", "∂"), (r"\sigma", "σ"), (r"\delta", "δ"), ("$", ""), ("{", ""), ("}", "")):
        text = text.replace(a, b)
    text = text.replace("\\", "")
    return text


def parse_leibniz_rule(
    text: str,
    names: Mapping[str, int] | None = None,
    coefficient_ring: Domain | None = None,
    x: str = "x",
    y: str = "y",
) -> tuple[int, dict[tuple[int, int], Any]]:
    """Read a product rule written by hand into ``(k, {(i, j): coefficient})``.

    Accepts forms like ``"D(xy) = xD(y) + D(x)y + D(x)D(y)c"`` or
    ``"∂_3(xy)=x∂_3(y)+y∂_3(x)+..."``.  ``names`` maps operator names other than
    ``∂k`` to indices; a bare ``x`` or ``y`` is the identity operator.  Factors
    may appear in any order within a term.
    """
    from .exactpoly import QQ

    names = dict(names or {})
    K = coefficient_ring or QQ
    text = _clean_rule(text)
    if "=" not in text:
        raise ValueError("a rule needs an '='")
    lhs, rhs = text.split("=", 1)

    def op_index(tok: str, num: str | None) -> int:
        if num is not None:
            return int(num)
        if tok in names:
            return names[tok]
        raise ValueError(f"unknown operator {tok!r}")

    pattern = _op_pattern(names)
    m = pattern.search(lhs.replace(f"{x}{y}", x).replace(f"{x}*{y}", x))
    if m is None:
        raise ValueError(f"cannot find the operator on the left of {text!r}")
    k = op_index(m.group(1), m.group(2))

    # split rhs into signed terms at top level
    terms: list[tuple[int, str]] = []
    depth, start, sign = 0, 0, 1
    body = rhs.strip()
    buf = ""
    for ch in body + "+":
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0:
            if buf.strip():
                terms.append((sign, buf))
            sign = 1 if ch == "+" else -1
            buf = ""
        else:
            buf += ch
    out: dict[tuple[int, int], Any] = {}
    for sgn, term in terms:
        i = j = None
        rest = term
        for mm in list(pattern.finditer(term)):
            idx = op_index(mm.group(1), mm.group(2))
            var = mm.group(3)
            if var == x:
                i = idx
            elif var == y:
                j = idx
            else:
                raise ValueError(f"unexpected argument {var!r} in {term!r}")
            rest = rest.replace(mm.group(0), " ", 1)
        # bare variables are the identity operator
        tokens = re.findall(r"[A-Za-z][A-Za-z0-9_]*|\d+(?:/\d+)?|\S", rest)
        coef_parts = []
        for t in tokens:
            if t == x and i is None:
                i = 0
            elif t == y and j is None:
                j = 0
            elif t == "*":
                continue
            else:
                coef_parts.append(t)
        if i is None or j is None:
            raise ValueError(f"term {term!r} does not involve both {x} and {y}")
        coef_text = "*".join(coef_parts) if coef_parts else "1"
        if isinstance(K, PolyRing):
            c = K(parse_expression(coef_text, K))
        else:
            c = parse_expression(coef_text, [], K)
        c = c if sgn > 0 else -c
        out[(i, j)] = out.get((i, j), K.zero) + c
    return k, {key: v for key, v in out.items() if v}


# -- D-ring structures -------------------------------------------------------


class DRing:
    """A D-ring structure on ``K[vars]`` (and its fraction field), given by ``e`` on generators.

    ``target`` is the coordinate domain of the generator images: the
    polynomial ring itself or its fraction field.  ``base_image`` gives ``e`` on
    coefficients; by default it is the structure map ``a -> a * 1``.
    """

    _CACHE_LIMIT = 200_000

    def __init__(
        self,
        algebra: AlgebraScheme,
        ring: PolyRing,
        gen_images: Mapping[str, AlgebraElement],
        target: Domain | None = None,
        base_image: Callable[[Any], AlgebraElement] | None = None,
        name: str = "",
    ):
        if not algebra.is_normalized():
            raise ValueError("D-ring structures need a normalized algebra (pi = first coordinate)")
        self.algebra = algebra
        self.ring = ring
        self.name = name
        self.target = target or ring
        self.field = FractionField(ring) if ring.domain.is_field else None
        missing = [v for v in ring.vars if v not in gen_images]
        if missing:
            raise ValueError(f"no image given for generators {missing}")
        self._base_image = base_image
        self.gen_images = {}
        for v in ring.vars:
            img = gen_images[v]
            if img.parent != algebra:
                raise ValueError(f"image of {v} lives in a different algebra")
            self.gen_images[v] = img.change_ring(self.target)
        self._gens = [self.gen_images[v] for v in ring.vars]
        self._mono: dict[tuple, AlgebraElement] = {}
        self._unit = algebra.unit_element(self.target)

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(self.ring.vars)

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    @property
    def has_prime_base(self) -> bool:
        return self._base_image is None

    def __repr__(self):
        return f"<DRing {self.name or ''} over {self.ring.domain!r}[{', '.join(self.ring.vars)}] rank {self.rank}>"

    # -- evaluation ----------------------------------------------------------

    def e_scalar(self, c, target: Domain | None = None) -> AlgebraElement:
        target = target or self.target
        if self._base_image is not None:
            return self._base_image(c).change_ring(target)
        return self.algebra.scalar(c, target)

    def _monomial(self, exps: tuple) -> AlgebraElement:
        cache = self._mono
        hit = cache.get(exps)
        if hit is not None:
            return hit
        # build along the last nonzero exponent, caching intermediate monomials
        chain = []
        cur = exps
        while cur not in cache and any(cur):
            i = max(t for t, k in enumerate(cur) if k)
            chain.append((cur, i))
            cur = cur[:i] + (cur[i] - 1,) + cur[i + 1 :]
        val = cache.get(cur) if any(cur) else self._unit
        for mono, i in reversed(chain):
            val = val * self._gens[i]
            if len(cache) < self._CACHE_LIMIT:
                cache[mono] = val
        return val

    def _apply_poly(self, f: MultiPoly) -> AlgebraElement:
        T = self.target
        n = self.rank
        acc = [T.zero] * n
        prime = self._base_image is None
        for exps, c in f.terms.items():
            m = self._monomial(exps) if any(exps) else self._unit
            if prime:
                cc = T(c)
                for k in range(n):
                    if m.coords[k]:
                        acc[k] = acc[k] + m.coords[k] * cc
            else:
                t = self.e_scalar(c) * m
                for k in range(n):
                    acc[k] = acc[k] + t.coords[k]
        return AlgebraElement(self.algebra, acc, T)

    def coerce(self, f):
        """Bring ``f`` into the polynomial ring or its fraction field."""
        if isinstance(f, str):
            f = parse_expression(f, self.ring)
        if isinstance(f, RationalFunction):
            if f.ring != self.ring:
                f = self.field(f)
            if f.denominator.is_constant():
                return self.ring(f)
            return f
        if isinstance(f, MultiPoly):
            return self.ring(f)
        return self.ring.constant(f)

    def apply_e(self, f) -> AlgebraElement:
        """``e(f)`` for a polynomial, rational function or scalar."""
        f = self.coerce(f)
        if isinstance(f, MultiPoly):
            return self._apply_poly(f)
        if self.field is None:
            raise TypeError("rational functions need a field of coefficients")
        F = self.field
        num = self._apply_poly(f.numerator).change_ring(F)
        den = self._apply_poly(f.denominator).change_ring(F)
        try:
            inv = den.inverse()
        except ZeroDivisionError:
            where = self.vanishing_factors(den)
            raise ZeroDivisionError(
                f"e({f.denominator}) is not a unit in D(L): its image vanishes in local factor(s) {where}"
            ) from None
        return num * inv

    def apply_operator(self, k: int, f):
        if not 0 <= k < self.rank:
            raise IndexError(f"operator index {k} out of range 0..{self.rank - 1}")
        if k == 0:
            return self.coerce(f)
        return self.apply_e(f).coords[k]

    def operators(self, f) -> tuple:
        """``(f, d_1 f, ..., d_{l-1} f)``."""
        return self.apply_e(f).coords

    def is_constant(self, f) -> bool:
        v = self.apply_e(f)
        f = self.coerce(f)
        return v == self.algebra.scalar(f, v.ring)

    def vanishing_factors(self, v: AlgebraElement) -> list[int]:
        """Local factors in which ``v`` has zero residue (``v`` is a unit iff this is empty)."""
        from .decomposition import local_decomposition

        dec = local_decomposition(self.algebra)
        out = []
        for i, fac in enumerate(dec.factors):
            vals = [
                sum((c * v.ring(r) for c, r in zip(v.coords, row) if c and r), v.ring.zero)
                for row in fac.pi_rows
            ]
            if not any(vals):
                out.append(i)
        return out

    def to_json(self) -> dict:
        from .algebra import algebra_to_json

        return {
            "algebra": algebra_to_json(self.algebra),
            "vars": list(self.ring.vars),
            "e": {v: [str(c) for c in img.coords] for v, img in self.gen_images.items()},
        }


def _parse_coord(value, ring: PolyRing):
    if isinstance(value, (MultiPoly, RationalFunction)):
        return value
    if isinstance(value, str):
        return parse_expression(value, ring)
    return ring.constant(value)


def make_dring(
    algebra: AlgebraScheme,
    ring_vars: Sequence[str],
    gen_images: Mapping[str, Sequence],
    *,
    domain: Domain | None = None,
    base_image: Callable | None = None,
    name: str = "",
) -> DRing:
    """Build the D-ring with ``e(x) = gen_images[x]`` (coordinate lists, strings allowed).

    Coordinates may be polynomials or rational functions; coordinate 0 must
    be the generator itself.
    """
    if not algebra.is_normalized():
        raise ValueError("the algebra must be normalized (pi = first coordinate)")
    base = domain or algebra.base_field
    params: list[str] = []
    if isinstance(algebra.domain, PolyRing):
        params = [p for p in algebra.domain.vars if p not in ring_vars]
    names = params + list(ring_vars)
    if len(set(names)) != len(names):
        raise ValueError("duplicate generator names")
    ring = PolyRing(base, names)
    F = FractionField(ring) if base.is_field else None
    parsed: dict[str, list] = {}
    rational = False
    for v in ring_vars:
        if v not in gen_images:
            raise ValueError(f"no image given for generator {v!r}")
        coords = list(gen_images[v])
        if len(coords) != algebra.rank:
            raise ValueError(f"image of {v!r} has {len(coords)} coordinates, the algebra has rank {algebra.rank}")
        vals = [_parse_coord(c, ring) for c in coords]
        rational |= any(isinstance(c, RationalFunction) and not c.is_polynomial() for c in vals)
        parsed[v] = vals
    extra = set(gen_images) - set(ring_vars)
    if extra:
        raise ValueError(f"images given for unknown generators {sorted(extra)}")
    target = F if rational else ring
    images = {}
    for v, vals in parsed.items():
        vals = [target(c) for c in vals]
        if vals[0] != target(ring.gen(v)):
            raise ValueError(f"coordinate 0 of e({v}) is {vals[0]}, it must be {v} (pi∘e = id)")
        images[v] = AlgebraElement(algebra, vals, target)
    for p in params:
        images[p] = algebra.scalar(ring.gen(p), target)
    return DRing(algebra, ring, images, target, base_image, name)


def prime_dring(algebra: AlgebraScheme) -> DRing:
    """The unique structure on the base field itself: ``e = s``, so ``d_i(a) = a c_i``."""
    return make_dring(algebra, [], {}, name="prime")


def is_constant(f, d: DRing) -> bool:
    return d.is_constant(f)


def apply_e(f, d: DRing) -> AlgebraElement:
    return d.apply_e(f)


def apply_operator(k: int, f, d: DRing):
    return d.apply_operator(k, f)


def apply_coefficient_hom(P: MultiPoly, hom: Callable, ring: Domain | None = None) -> Any:
    """Replace every coefficient of ``P`` by ``hom(c)``; monomials unchanged.

    With ``ring`` a polynomial ring the result is a polynomial there;
    otherwise the result is a mapping ``exponent -> image`` (e.g. when the
    images are algebra elements).
    """
    if isinstance(ring, PolyRing):
        return MultiPoly(ring, {e: ring.domain(hom(c)) for e, c in P.terms.items()})
    return {e: hom(c) for e, c in P.terms.items()}


def dring_from_json(data: Mapping, *, loader: Callable[[str], Mapping] | None = None) -> DRing:
    """``{"algebra": <inline or path>, "vars": [...], "e": {"x": ["x", "1"]}, "normalize"?: bool}``."""
    alg = data.get("algebra")
    if isinstance(alg, str):
        if loader is None:
            raise ValueError("algebra given by path but no loader")
        alg = loader(alg)
    if alg is None:
        raise ValueError("D-ring spec lacks 'algebra'")
    A = algebra_from_json(alg)
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    vars_ = list(data.get("vars", []))
    images = data.get("e", {})
    return make_dring(A, vars_, images, name=data.get("name", ""))


# -- algebraic extensions ----------------------------------------------------


class ExtendedDRing:
    """D-ring structure on ``E = F[z]/(P)`` extending one on ``F = K(vars)``.

    Elements of ``E`` are :class:`QuotientElement` with rational-function
    coordinates; ``e(z)`` is the Hensel lift computed by
    :func:`extend_dring_algebraic`.
    """

    def __init__(self, base: DRing, E: QuotientRing, z_image: AlgebraElement, roots: Sequence):
        self.base = base
        self.algebra = base.algebra
        self.E = E
        self.target = E
        self.z_image = z_image
        self.roots = tuple(roots)

    @property
    def rank(self) -> int:
        return self.algebra.rank

    def coerce(self, v) -> QuotientElement:
        return _extension_element(v, self.E, self.base.field, self.E.var)

    def apply_e(self, v) -> AlgebraElement:
        v = self.coerce(v)
        acc = self.algebra.zero_element(self.E)
        power = self.algebra.unit_element(self.E)
        for k, a in enumerate(v.coords):
            if k:
                power = power * self.z_image
            if a:
                acc = acc + self.base.apply_e(a).change_ring(self.E) * power
        return acc

    def apply_operator(self, k: int, v):
        return self.apply_e(v).coords[k]

    def is_constant(self, v) -> bool:
        v = self.coerce(v)
        return self.apply_e(v) == self.algebra.scalar(v, self.E)


def _univariate_over(P, var: str, F: FractionField) -> list:
    """Coefficient list (low degree first) of ``P`` in ``var`` with coefficients in ``F``."""
    if isinstance(P, (list, tuple)):
        return [F(c) for c in P]
    ring = PolyRing(F.domain, list(F.vars) + [var])
    if isinstance(P, str):
        P = parse_expression(P, ring)
    denom = F.one
    if isinstance(P, RationalFunction):
        if P.denominator.degree(var) > 0:
            raise ValueError(f"expected a polynomial in {var}, got a denominator involving it")
        denom = F(P.denominator.change_ring(F.ring))
        P = P.numerator
    coeffs = P.change_ring(ring).univariate_coeffs(var)
    deg = max(coeffs, default=0)
    out = []
    for k in range(deg + 1):
        c = coeffs.get(k)
        out.append(F(c.change_ring(F.ring)) / denom if c is not None else F(0))
    return out


def _extension_element(v, E: QuotientRing, F: FractionField, var: str) -> QuotientElement:
    if isinstance(v, QuotientElement):
        return v
    if isinstance(v, str):
        return E.from_poly(_univariate_over(v, var, F))
    return E(F(v))


def extend_dring_algebraic(
    d: DRing,
    minpoly,
    root_choices: Mapping[int, Any] | Sequence | None = None,
    var: str = "z",
) -> ExtendedDRing:
    """Extend ``d`` from ``F`` to ``E = F[z]/(P)`` with ``P`` monic irreducible (asserted).

    For each local factor ``i >= 1`` of ``D(A)`` (all with residue degree 1)
    ``root_choices[i]`` is a root of ``P^{sigma_i}`` in ``E``; factor 0 uses
    ``z``.  The starting point ``sum c_i e_i`` is refined by Newton's method
    on ``P^e`` in ``D(E)`` until exact.
    """
    from .decomposition import associated_operators, hensel_newton, local_decomposition

    if d.characteristic != 0:
        raise ValueError("algebraic extension is implemented in characteristic 0 only")
    F = d.field
    if F is None:
        raise ValueError("the base D-ring needs a field of coefficients")
    coeffs = _univariate_over(minpoly, var, F)
    lead = coeffs[-1]
    if lead != F.one:
        coeffs = [c / lead for c in coeffs]
    if len(coeffs) < 2:
        raise ValueError("the minimal polynomial must have positive degree")
    E = QuotientRing(F, coeffs, var)
    A = d.algebra
    dec = local_decomposition(A)
    ops = associated_operators(dec)
    if any(f.degree != 1 for f in dec.factors):
        raise NotImplementedError("only local factors with residue field equal to the base are supported")
    t = len(dec.factors) - 1
    if root_choices is None:
        root_choices = {}
    if not isinstance(root_choices, Mapping):
        root_choices = {i + 1: c for i, c in enumerate(root_choices)}
    missing = [i for i in range(1, t + 1) if i not in root_choices]
    if missing:
        raise ValueError(f"root choices needed for local factors {missing}")

    def sigma_poly(i: int) -> list:
        row = ops.sigma_rows[i]
        out = []
        for c in coeffs:
            img = d.apply_e(c).coords
            out.append(sum((x * F(r) for x, r in zip(img, row) if x and r), F.zero))
        return out

    roots = [E.gen]
    for i in range(1, t + 1):
        c = _extension_element(root_choices[i], E, F, var)
        Ps = sigma_poly(i)
        val = E.zero
        for a in reversed(Ps):
            val = val * c + E(a)
        if val:
            raise ValueError(f"root choice for factor {i} is not a root of the twisted polynomial")
        dval = E.zero
        for k in range(len(Ps) - 1, 0, -1):
            dval = dval * c + E(Ps[k] * k)
        if not dval:
            raise ValueError(f"twisted polynomial for factor {i} is inseparable at the chosen root")
        roots.append(c)

    Pe = [d.apply_e(c).change_ring(E) for c in coeffs]
    idem = [f.idempotent.change_ring(E) for f in dec.factors]
    start = A.zero_element(E)
    for r, ei in zip(roots, idem):
        start = start + ei * r
    b = hensel_newton(Pe, start, dec.nilpotency_index)
    if b.coords[0] != E.gen:
        raise ArithmeticError("lift does not project to z")
    return ExtendedDRing(d, E, b, roots)


__all__ = [
    "DRing",
    "ExtendedDRing",
    "LeibnizIdentity",
    "apply_coefficient_hom",
    "apply_e",
    "apply_operator",
    "dring_from_json",
    "extend_dring_algebraic",
    "is_constant",
    "leibniz_identities",
    "make_dring",
    "parse_leibniz_rule",
    "prime_dring",
]
