"""Exact arithmetic, polynomials, Gröbner bases and linear algebra."""

from .fields import (
    GF,
    QQ,
    Domain,
    GFElement,
    NumberField,
    PrimeField,
    QuotientElement,
    QuotientRing,
    field_from_characteristic,
)
from .parse import ParseError, parse_expression
from .poly import GREVLEX, LEX, MonomialOrder, MultiPoly, PolyRing, block_order
from .ratfunc import FractionField, RationalFunction, exact_divide, poly_gcd
from .groebner import (
    BudgetExceeded,
    Ideal,
    buchberger,
    elimination_ideal,
    groebner_basis,
    normal_form,
    radical_membership,
    s_polynomial,
)
from .linalg import jacobian_rank
