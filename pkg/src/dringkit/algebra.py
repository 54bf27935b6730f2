"""Finite free algebra schemes given by structure constants.

An :class:`AlgebraScheme` of rank ``l`` over a base field ``K`` is the data
``eps_i * eps_j = sum_k a[i,j,k] eps_k`` together with the coordinates of the
unit and a linear functional ``pi`` (the projection back to the base).
Evaluating the scheme on a ring ``R`` gives ``R^l`` with the same constants;
that is :class:`AlgebraElement`, whose coordinates may live in any ring
containing ``K`` (polynomials, rational functions, number fields, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .exactpoly import GF, QQ, Domain, PolyRing, field_from_characteristic, parse_expression
from .exactpoly.linalg import solve

EPS = "ε"


def _is_one(c) -> bool:
    try:
        return c == 1
    except TypeError:
        return False


class AlgebraScheme:
    """Structure-constant presentation of a finite free algebra with a projection.

    ``mul`` maps ``(i, j, k)`` to ``a[i,j,k]``; entries are canonicalised to
    ``i <= j``.  If both orders are supplied with different values the
    mismatch is remembered and reported by :func:`validate_algebra`.
    """

    def __init__(
        self,
        domain: Domain,
        labels: Sequence[str],
        mul: Mapping[tuple[int, int, int], Any],
        unit: Sequence,
        projection: Sequence | None = None,
        name: str = "",
    ):
        self.domain = domain
        self.labels = tuple(labels)
        self.rank = len(self.labels)
        if self.rank < 1:
            raise ValueError("an algebra scheme needs rank at least 1")
        n = self.rank
        self.name = name
        self._mul: dict[tuple[int, int], dict[int, Any]] = {}
        self.asymmetric: list[tuple[int, int, int]] = []
        seen: dict[tuple[int, int, int], Any] = {}
        for (i, j, k), c in mul.items():
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise ValueError(f"structure constant index {(i, j, k)} out of range for rank {n}")
            c = domain(c)
            key = (min(i, j), max(i, j), k)
            if key in seen and seen[key] != c:
                self.asymmetric.append(key)
                continue
            seen[key] = c
        for (i, j, k), c in seen.items():
            if c:
                self._mul.setdefault((i, j), {})[k] = c
        if len(unit) != n:
            raise ValueError("unit has the wrong number of coordinates")
        self.unit = tuple(domain(c) for c in unit)
        if projection is None:
            projection = [1] + [0] * (n - 1)
        if len(projection) != n:
            raise ValueError("projection row has the wrong number of coordinates")
        self.projection_row = tuple(domain(c) for c in projection)
        self._tables: dict = {}

    # -- basic data ---------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.domain.characteristic

    @property
    def base_field(self) -> Domain:
        """The prime-level coefficient field (strips symbolic parameters)."""
        d = self.domain
        return d.domain if isinstance(d, PolyRing) else d

    def const(self, i: int, j: int, k: int):
        return self._mul.get((min(i, j), max(i, j)), {}).get(k, self.domain.zero)

    def product_of_basis(self, i: int, j: int) -> dict[int, Any]:
        return dict(self._mul.get((min(i, j), max(i, j)), {}))

    def entries(self) -> list[tuple[int, int, int, Any]]:
        """Nonzero constants ``(i, j, k, a)`` with ``i <= j``, sorted."""
        return sorted((i, j, k, c) for (i, j), row in self._mul.items() for k, c in row.items())

    def is_normalized(self) -> bool:
        return self.projection_row[0] == self.domain.one and not any(self.projection_row[1:])

    def __eq__(self, other):
        if not isinstance(other, AlgebraScheme):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.rank == other.rank
            and self.entries() == other.entries()
            and self.unit == other.unit
            and self.projection_row == other.projection_row
        )

    def __hash__(self):
        return hash((self.rank, tuple(self.entries()), self.unit))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<AlgebraScheme{label} rank {self.rank} char {self.characteristic}>"

    # -- evaluation on a coefficient ring ----------------------------------

    def table(self, ring: Domain | None = None) -> list[list[list[tuple[int, Any, bool]]]]:
        """Dense table ``T[i][j] = [(k, a_ijk, a_ijk == 1), ...]`` with constants coerced into ``ring``."""
        ring = ring or self.domain
        key = ring
        if key not in self._tables:
            n = self.rank
            T = [[[] for _ in range(n)] for _ in range(n)]
            for (i, j), row in self._mul.items():
                items = [(k, ring(c), _is_one(c)) for k, c in sorted(row.items())]
                T[i][j] = items
                T[j][i] = items
            self._tables[key] = T
        return self._tables[key]

    def multiply_coords(self, a: Sequence, b: Sequence, ring: Domain | None = None) -> list:
        ring = ring or self.domain
        T = self.table(ring)
        out = [ring.zero] * self.rank
        nb = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if not x:
                continue
            Ti = T[i]
            for j, y in nb:
                entries = Ti[j]
                if not entries:
                    continue
                xy = x * y
                for k, c, one in entries:
                    out[k] = out[k] + (xy if one else xy * c)
        return out

    def element(self, coords: Sequence, ring: Domain | None = None) -> AlgebraElement:
        ring = ring or self.domain
        return AlgebraElement(self, [ring(c) for c in coords], ring)

    def basis_element(self, i: int, ring: Domain | None = None) -> AlgebraElement:
        ring = ring or self.domain
        return AlgebraElement(self, [ring.one if k == i else ring.zero for k in range(self.rank)], ring)

    def unit_element(self, ring: Domain | None = None) -> AlgebraElement:
        ring = ring or self.domain
        return AlgebraElement(self, [ring(c) for c in self.unit], ring)

    def zero_element(self, ring: Domain | None = None) -> AlgebraElement:
        ring = ring or self.domain
        return AlgebraElement(self, [ring.zero] * self.rank, ring)

    def scalar(self, a, ring: Domain | None = None) -> AlgebraElement:
        """The structure map ``s``: ``a`` times the unit."""
        ring = ring or self.domain
        a = ring(a)
        return AlgebraElement(self, [a * ring(c) if c else ring.zero for c in self.unit], ring)

    def project(self, coords: Sequence, ring: Domain | None = None):
        ring = ring or self.domain
        acc = ring.zero
        for x, p in zip(coords, self.projection_row):
            if x and p:
                acc = acc + (x if _is_one(p) else x * ring(p))
        return acc

    def multiplication_matrix(self, coords: Sequence, ring: Domain | None = None) -> list[list]:
        """Matrix ``M`` with ``M[k][j]`` the ``eps_k``-coordinate of ``a * eps_j``."""
        ring = ring or self.domain
        cols = []
        for j in range(self.rank):
            e = [ring.one if t == j else ring.zero for t in range(self.rank)]
            cols.append(self.multiply_coords(coords, e, ring))
        return [[cols[j][k] for j in range(self.rank)] for k in range(self.rank)]


class AlgebraElement:
    """A point of the scheme over ``ring``: ``sum coords[i] * eps_i``."""

    __slots__ = ("parent", "ring", "coords")

    def __init__(self, parent: AlgebraScheme, coords: Sequence, ring: Domain | None = None):
        if len(coords) != parent.rank:
            raise ValueError(f"expected {parent.rank} coordinates, got {len(coords)}")
        self.parent = parent
        self.ring = ring or parent.domain
        self.coords = tuple(coords)

    def _check(self, other: AlgebraElement):
        if other.parent is not self.parent and other.parent != self.parent:
            raise TypeError("elements of different algebra schemes")

    def _lift(self, other) -> AlgebraElement | None:
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        try:
            return self.parent.scalar(other, self.ring)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.parent, [a + b for a, b in zip(self.coords, o.coords)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.parent, [-a for a in self.coords], self.ring)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraElement(self.parent, [a - b for a, b in zip(self.coords, o.coords)], self.ring)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(
                self.parent, self.parent.multiply_coords(self.coords, other.coords, self.ring), self.ring
            )
        try:
            c = self.ring(other)
        except (TypeError, ValueError):
            return NotImplemented
        return AlgebraElement(self.parent, [a * c if a else a for a in self.coords], self.ring)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.parent.unit_element(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> AlgebraElement:
        """Multiplicative inverse by solving ``M_a x = 1`` (coordinate ring must be a field)."""
        if not self.ring.is_field:
            raise TypeError("inverting needs a field of coordinates")
        M = self.parent.multiplication_matrix(self.coords, self.ring)
        x = solve(M, list(self.parent.unit_element(self.ring).coords), self.ring)
        if x is None:
            raise ZeroDivisionError(f"{self} is not a unit")
        return AlgebraElement(self.parent, x, self.ring)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def is_unit(self) -> bool:
        try:
            self.inverse()
        except ZeroDivisionError:
            return False
        return True

    def project(self):
        return self.parent.project(self.coords, self.ring)

    def map(self, fn, ring: Domain | None = None) -> AlgebraElement:
        """Apply ``fn`` to each coordinate (a coefficient homomorphism)."""
        return AlgebraElement(self.parent, [fn(c) for c in self.coords], ring or self.ring)

    def change_ring(self, ring: Domain) -> AlgebraElement:
        return AlgebraElement(self.parent, [ring(c) for c in self.coords], ring)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.parent == other.parent and self.coords == other.coords
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"AlgebraElement{self}"


def multiply_elements(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.parent != b.parent:
        raise TypeError("elements of different algebra schemes")
    return a * b


# -- validation --------------------------------------------------------------


@dataclass
class Violation:
    kind: str
    where: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} {self.where}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [{"kind": v.kind, "where": list(v.where), "detail": v.detail} for v in self.violations],
        }


def validate_algebra(A: AlgebraScheme) -> ValidationReport:
    """List every violated commutativity, associativity, unit and projection condition."""
    rep = ValidationReport()
    K = A.domain
    n = A.rank
    for key in A.asymmetric:
        rep.violations.append(Violation("commutativity", key, "a[i,j,k] != a[j,i,k]"))
    basis = [A.basis_element(i) for i in range(n)]
    prods = [[basis[i] * basis[j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = A.multiply_coords(prods[i][j].coords, basis[k].coords)
                right = A.multiply_coords(basis[i].coords, prods[j][k].coords)
                if left != right:
                    diff = [l - r for l, r in zip(left, right)]
                    for t, d in enumerate(diff):
                        if d:
                            rep.violations.append(
                                Violation(
                                    "associativity",
                                    (i, j, k, t),
                                    f"(e{i}e{j})e{k} and e{i}(e{j}e{k}) differ by {K.to_str(d)} in coordinate {t}",
                                )
                            )
    u = A.unit_element()
    for i in range(n):
        if u * basis[i] != basis[i]:
            rep.violations.append(Violation("unit", (i,), f"1 * e{i} != e{i}"))
    pu = A.project(A.unit)
    if pu != K.one:
        rep.violations.append(Violation("projection", (), f"pi(1) = {K.to_str(pu)} != 1"))
    pr = A.projection_row
    for i in range(n):
        for j in range(i, n):
            lhs = A.project(prods[i][j].coords)
            rhs = pr[i] * pr[j]
            if lhs != rhs:
                rep.violations.append(
                    Violation("projection", (i, j), f"pi(e{i}e{j}) = {K.to_str(lhs)} != pi(e{i})pi(e{j})")
                )
    return rep


# -- change of basis -----------------------------------------------------------


def _format_combination(row: Sequence, labels: Sequence[str], K: Domain) -> str:
    parts = []
    for c, lab in zip(row, labels):
        if not c:
            continue
        if c == K.one:
            parts.append(("+", lab))
        elif c == -K.one:
            parts.append(("-", lab))
        else:
            s = K.to_str(c)
            if s.startswith("-"):
                parts.append(("-", f"{s[1:]}*{lab}"))
            else:
                parts.append(("+", f"{s}*{lab}"))
    out = ""
    for i, (sign, t) in enumerate(parts):
        out += (t if sign == "+" else "-" + t) if i == 0 else f"{sign}{t}"
    return out or "0"


def change_basis(A: AlgebraScheme, M: Sequence[Sequence], Minv: Sequence[Sequence], labels=None) -> AlgebraScheme:
    """Re-present ``A`` in the basis whose i-th vector is ``sum_j M[i][j] eps_j``; ``Minv`` is ``M``'s inverse."""
    K = A.domain
    n = A.rank
    rows = [A.element(r) for r in M]
    mul = {}
    for a in range(n):
        for b in range(a, n):
            prod = (rows[a] * rows[b]).coords
            for c in range(n):
                v = sum((prod[k] * Minv[k][c] for k in range(n) if prod[k] and Minv[k][c]), K.zero)
                if v:
                    mul[(a, b, c)] = v
    unit = [sum((A.unit[k] * Minv[k][c] for k in range(n)), K.zero) for c in range(n)]
    proj = [sum((M[i][j] * A.projection_row[j] for j in range(n)), K.zero) for i in range(n)]
    if labels is None:
        labels = []
        for i, r in enumerate(M):
            nz = [j for j, c in enumerate(r) if c]
            if len(nz) == 1 and r[nz[0]] == K.one:
                labels.append(A.labels[nz[0]])
            else:
                labels.append(_format_combination(r, A.labels, K))
    return AlgebraScheme(K, labels, mul, unit, proj, A.name)


def normalize_basis(A: AlgebraScheme) -> tuple[AlgebraScheme, list[list]]:
    """Change basis so that ``pi`` becomes the first coordinate.

    The new ``eps_0`` is ``eps_j / pi(eps_j)`` for the first ``j`` with
    ``pi(eps_j) != 0``; the others are ``eps_i - pi(eps_i) eps_0'`` in index
    order, a basis of ``ker pi``.  Returns the new scheme and the matrix whose
    rows are the new basis vectors in old coordinates.
    """
    K = A.domain
    n = A.rank
    pr = A.projection_row
    rep = validate_algebra(A)
    bad = [v for v in rep.violations if v.kind == "projection"]
    if bad:
        raise ValueError("projection is not an algebra homomorphism: " + "; ".join(map(str, bad)))
    piv = next((j for j, c in enumerate(pr) if c), None)
    if piv is None:
        raise ValueError("projection is zero, hence not surjective")
    inv = K.one / pr[piv]
    order = [piv] + [i for i in range(n) if i != piv]
    M = [[K.zero] * n for _ in range(n)]
    Minv = [[K.zero] * n for _ in range(n)]
    M[0][piv] = inv
    Minv[piv][0] = pr[piv]
    for pos, i in enumerate(order[1:], start=1):
        M[pos][i] = K.one
        M[pos][piv] = -pr[i] * inv
        Minv[i][pos] = K.one
        Minv[i][0] = pr[i]
    if A.is_normalized():
        return A, M
    return change_basis(A, M, Minv), M


# -- products ------------------------------------------------------------------


def _same_base(A1: AlgebraScheme, A2: AlgebraScheme):
    if A1.domain != A2.domain:
        raise ValueError(f"base-field mismatch: {A1.domain!r} vs {A2.domain!r}")


def _need_normalized(*algs: AlgebraScheme):
    for A in algs:
        if not A.is_normalized():
            raise ValueError(f"{A!r} is not normalized; call normalize_basis first")


def fibred_product(A1: AlgebraScheme, A2: AlgebraScheme) -> AlgebraScheme:
    """Fibred product over the base: pairs with equal projections, rank ``l1 + l2 - 1``."""
    _same_base(A1, A2)
    _need_normalized(A1, A2)
    K = A1.domain
    n1, n2 = A1.rank, A2.rank

    def i2(j):  # position of A2's eps_j
        return 0 if j == 0 else n1 + j - 1

    labels = [f"({A1.labels[0]},{A2.labels[0]})"]
    labels += [f"({A1.labels[i]},0)" for i in range(1, n1)]
    labels += [f"(0,{A2.labels[j]})" for j in range(1, n2)]
    mul: dict = {}
    for i, j, k, c in A1.entries():
        mul[(i, j, k)] = c
    for i, j, k, c in A2.entries():
        key = (i2(i), i2(j), i2(k))
        if key == (0, 0, 0):
            # a_000 = 1 on both sides: the shared coordinate
            continue
        mul[key] = c
    unit = list(A1.unit) + list(A2.unit[1:])
    name = f"{A1.name}×{A2.name}" if A1.name and A2.name else ""
    return AlgebraScheme(K, labels, mul, unit, None, name)


def tensor_product(A1: AlgebraScheme, A2: AlgebraScheme) -> AlgebraScheme:
    """Tensor product; ``eps_i ⊗ eps'_j`` sits at index ``i + j*l1``."""
    _same_base(A1, A2)
    K = A1.domain
    n1, n2 = A1.rank, A2.rank
    labels = [f"{A1.labels[i]}⊗{A2.labels[j]}" for j in range(n2) for i in range(n1)]
    e1 = A1.entries()
    e2 = A2.entries()
    mul: dict = {}
    for i, ii, k, c in e1:
        pairs1 = {(i, ii)} | {(ii, i)}
        for j, jj, kk, d in e2:
            pairs2 = {(j, jj)} | {(jj, j)}
            for a, aa in pairs1:
                for b, bb in pairs2:
                    mul[(a + b * n1, aa + bb * n1, k + kk * n1)] = c * d
    unit = [A1.unit[i] * A2.unit[j] for j in range(n2) for i in range(n1)]
    proj = [A1.projection_row[i] * A2.projection_row[j] for j in range(n2) for i in range(n1)]
    name = f"{A1.name}⊗{A2.name}" if A1.name and A2.name else ""
    return AlgebraScheme(K, labels, mul, unit, proj, name)


def compose_algebras(A1: AlgebraScheme, A2: AlgebraScheme) -> AlgebraScheme:
    """``A2`` evaluated on ``A1``-coordinates: ``A2(A1(R))``.

    As an algebra this coincides with :func:`tensor_product` (the inner index
    varies fastest).  The attached :func:`outer_projection` ``f`` applies the
    outer projection, landing in ``A1(R)``.
    """
    _need_normalized(A1, A2)
    out = tensor_product(A1, A2)
    out.name = f"{A2.name}∘{A1.name}" if A1.name and A2.name else ""
    out.composition = (A1, A2)
    return out


def outer_projection(A1: AlgebraScheme, A2: AlgebraScheme) -> list[list]:
    """Matrix of ``f: A2(A1(R)) -> A1(R)``, rows indexed by the ``l1*l2`` composite basis."""
    K = A1.domain
    n1, n2 = A1.rank, A2.rank
    M = []
    for j in range(n2):
        for i in range(n1):
            M.append([A2.projection_row[j] if t == i else K.zero for t in range(n1)])
    return M


# -- catalog -------------------------------------------------------------------


def _field(char: int) -> Domain:
    return field_from_characteristic(char)


def trivial_algebra(char: int = 0) -> AlgebraScheme:
    """Rank one: the base field itself."""
    return AlgebraScheme(_field(char), [f"{EPS}0"], {(0, 0, 0): 1}, [1], name="trivial")


def truncated_algebra(n: int, char: int = 0) -> AlgebraScheme:
    """``K[eta]/(eta^(n+1))`` with basis ``1, eta, ..., eta^n``."""
    K = _field(char)
    labels = ["1"] + ["η" if i == 1 else f"η^{i}" for i in range(1, n + 1)]
    mul = {(i, j, i + j): 1 for i in range(n + 1) for j in range(i, n + 1) if i + j <= n}
    return AlgebraScheme(K, labels, mul, [1] + [0] * n, name=f"truncated{n}")


def dual_numbers(char: int = 0) -> AlgebraScheme:
    A = truncated_algebra(1, char)
    A.name = "dual"
    return A


def pair_algebra(char: int = 0) -> AlgebraScheme:
    """``K x K`` with the standard basis; structures are endomorphisms."""
    K = _field(char)
    return AlgebraScheme(K, ["(1,0)", "(0,1)"], {(0, 0, 0): 1, (1, 1, 1): 1}, [1, 1], name="pair")


def twisted_algebra(c=None, char: int = 0) -> AlgebraScheme:
    """``K^2`` with ``(x1,y1)(x2,y2) = (x1x2, x1y2 + y1x2 + c*y1y2)``.

    With ``c=None`` the constant is a symbolic parameter ``c``.
    """
    K = _field(char)
    if c is None:
        D = PolyRing(K, ["c"])
        cval = D.gen("c")
    else:
        D = K
        cval = K(c)
    mul = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 1, 1): cval}
    return AlgebraScheme(D, ["1", "D"], mul, [1, 0], name="twisted")


def endomorphism_derivation_algebra(char: int = 0) -> AlgebraScheme:
    """``K x K[eta]/(eta^2)`` in the basis ``(1,0), (0,1), (1,eta)`` with ``pi`` the first factor.

    The third basis vector projects to 1, so this presentation is not
    normalized; :func:`normalize_basis` replaces it by ``(0,eta)``.
    """
    K = _field(char)
    # (1,0)^2=(1,0); (0,1)^2=(0,1); (1,0)(0,1)=0
    # (1,0)(1,eta)=(1,0); (0,1)(1,eta)=(0,eta)=(1,eta)-(1,0); (1,eta)^2=(1,0)
    mul = {
        (0, 0, 0): 1,
        (1, 1, 1): 1,
        (0, 2, 0): 1,
        (1, 2, 2): 1,
        (1, 2, 0): -1,
        (2, 2, 0): 1,
    }
    return AlgebraScheme(K, ["(1,0)", "(0,1)", "(1,η)"], mul, [1, 1, 0], [1, 0, 1], name="endo-derivation")


def bidual_algebra(char: int = 0) -> AlgebraScheme:
    """``K[eta1,eta2]/(eta1^2, eta2^2)`` with basis ``1, eta1, eta2, eta1*eta2``."""
    A = tensor_product(dual_numbers(char), dual_numbers(char))
    return AlgebraScheme(
        A.domain, ["1", "η1", "η2", "η1η2"], {(i, j, k): c for i, j, k, c in A.entries()}, A.unit, name="bidual"
    )


def quadratic_product_algebra(d: int = 2, char: int = 0) -> AlgebraScheme:
    """``K x K[x]/(x^2 - d)`` with basis ``(1,0), (0,1), (0,x)``."""
    K = _field(char)
    mul = {(0, 0, 0): 1, (1, 1, 1): 1, (1, 2, 2): 1, (2, 2, 1): d}
    return AlgebraScheme(K, ["(1,0)", "(0,1)", "(0,x)"], mul, [1, 1, 0], name=f"quadratic{d}")


CATALOG = {
    "trivial": lambda char=0: trivial_algebra(char),
    "dual": lambda char=0: dual_numbers(char),
    "pair": lambda char=0: pair_algebra(char),
    "twisted": lambda char=0: twisted_algebra(None, char),
    "endo-derivation": lambda char=0: endomorphism_derivation_algebra(char),
    "bidual": lambda char=0: bidual_algebra(char),
    "quadratic": lambda char=0: quadratic_product_algebra(2, char),
}


def catalog_algebra(name: str, char: int = 0) -> AlgebraScheme:
    """Look up a named algebra; ``truncatedN`` gives ``K[eta]/(eta^(N+1))``."""
    if name.startswith("truncated") and name[9:].isdigit():
        return truncated_algebra(int(name[9:]), char)
    try:
        return CATALOG[name](char)
    except KeyError:
        raise KeyError(f"unknown catalog algebra {name!r}") from None


# -- JSON ----------------------------------------------------------------------


def _parse_scalar(value, domain: Domain):
    if isinstance(value, (int, Fraction)):
        return domain(value)
    if isinstance(value, str):
        if isinstance(domain, PolyRing):
            return domain(parse_expression(value, domain))
        return parse_expression(value, [], domain)
    raise ValueError(f"cannot read {value!r} as a scalar")


def algebra_from_json(data: Mapping) -> AlgebraScheme:
    """Read ``{"char", "basis", "mul", "unit", "pi"?, "params"?, "name"?}``."""
    if "catalog" in data:
        return catalog_algebra(data["catalog"], int(data.get("char", 0)))
    for key in ("basis", "mul", "unit"):
        if key not in data:
            raise ValueError(f"algebra spec is missing {key!r}")
    char = int(data.get("char", 0))
    K = _field(char)
    params = list(data.get("params", []))
    D = PolyRing(K, params) if params else K
    mul = {}
    for entry in data["mul"]:
        try:
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
        except KeyError as exc:
            raise ValueError(f"structure constant entry {entry!r} lacks {exc}") from None
        c = _parse_scalar(entry.get("c", 1), D)
        key = (i, j, k)
        if key in mul and mul[key] != c:
            raise ValueError(f"conflicting values for a[{i},{j},{k}]")
        mul[key] = c
    # keep both orders visible so the validator can report asymmetry
    sym: dict = {}
    asym = []
    for (i, j, k), c in mul.items():
        other = mul.get((j, i, k))
        if other is not None and other != c:
            asym.append((min(i, j), max(i, j), k))
        sym[(i, j, k)] = c
    unit = [_parse_scalar(c, D) for c in data["unit"]]
    pi = [_parse_scalar(c, D) for c in data["pi"]] if data.get("pi") is not None else None
    A = AlgebraScheme(D, data["basis"], sym, unit, pi, data.get("name", ""))
    A.asymmetric = sorted(set(A.asymmetric) | set(asym))
    return A


def algebra_to_json(A: AlgebraScheme) -> dict:
    D = A.domain
    out: dict = {"char": A.characteristic}
    if A.name:
        out["name"] = A.name
    if isinstance(D, PolyRing):
        out["params"] = list(D.vars)
    out["basis"] = list(A.labels)
    out["mul"] = [{"i": i, "j": j, "k": k, "c": D.to_str(c)} for i, j, k, c in A.entries()]
    out["unit"] = [D.to_str(c) for c in A.unit]
    out["pi"] = [D.to_str(c) for c in A.projection_row]
    return out


__all__ = [
    "AlgebraElement",
    "AlgebraScheme",
    "CATALOG",
    "ValidationReport",
    "Violation",
    "algebra_from_json",
    "algebra_to_json",
    "bidual_algebra",
    "catalog_algebra",
    "change_basis",
    "compose_algebras",
    "dual_numbers",
    "endomorphism_derivation_algebra",
    "fibred_product",
    "multiply_elements",
    "normalize_basis",
    "outer_projection",
    "pair_algebra",
    "quadratic_product_algebra",
    "tensor_product",
    "trivial_algebra",
    "truncated_algebra",
    "twisted_algebra",
    "validate_algebra",
]
