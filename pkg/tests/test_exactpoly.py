import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from dringkit.algebra import dual_numbers
from dringkit.exactpoly import (
    GF,
    GREVLEX,
    LEX,
    QQ,
    BudgetExceeded,
    FractionField,
    Ideal,
    NumberField,
    ParseError,
    PolyRing,
    RationalFunction,
    block_order,
    elimination_ideal,
    groebner_basis,
    jacobian_rank,
    normal_form,
    parse_expression,
    poly_gcd,
    radical_membership,
    s_polynomial,
)
from dringkit.exactpoly.linalg import nullspace, rank, rref, solve
from dringkit.operators import apply_coefficient_hom, make_dring
from dringkit.sampling import random_polynomial
from oracles import brute_force_membership, from_sympy, to_sympy

R2 = PolyRing(QQ, ["x", "y"])
R3 = PolyRing(QQ, ["x", "y", "z"])


def P(text, ring=R2):
    return parse_expression(text, ring)


# -- coefficient fields ----------------------------------------------------------


class TestFields:
    def test_rationals_in_lowest_terms(self):
        c = QQ(Fraction(6, -4))
        assert (c.numerator, c.denominator) == (-3, 2)

    def test_prime_field_residues(self):
        F = GF(5)
        assert F(7).value == 2
        assert F(-1).value == 4
        assert F(3) * F(3).inverse() == F.one
        assert F(Fraction(1, 2)) == F(3)
        with pytest.raises(ZeroDivisionError):
            F(Fraction(1, 5))

    def test_number_field_reduction(self):
        K = NumberField([-2, 0, 1], "s")
        s = K.gen
        assert s * s == K(2)
        assert len((s * s * s).coords) == 2
        inv = (1 + s).inverse()
        assert inv * (1 + s) == K.one
        assert str(inv) == "s - 1"

    def test_number_field_hom_is_conjugation(self):
        K = NumberField([-2, 0, 1], "s")
        conj = K.hom(-K.gen)
        assert conj(K.gen + 3) == 3 - K.gen
        assert conj(K.gen * K.gen) == K(2)


# -- parsing --------------------------------------------------------------------------


class TestParse:
    def test_simple_polynomial(self):
        f = parse_expression("y - x^2", ["x", "y"], QQ)
        assert f.terms == {(0, 1): 1, (2, 0): -1}

    def test_identity_expansion_is_zero(self):
        assert P("(x+1)^2 - x^2 - 2*x - 1").is_zero()

    def test_division_by_one_over_f2(self):
        ring = PolyRing(GF(2), ["x1", "x2"])
        f = parse_expression("x1 + x2/1", ring)
        expected = ring.gen("x1") + ring.gen("x2")
        assert f == expected
        assert f.terms == {(1, 0): GF(2).one, (0, 1): GF(2).one}

    def test_rational_function(self):
        f = P("1/x + 1/y")
        assert isinstance(f, RationalFunction)
        assert f == RationalFunction(P("x + y"), P("x*y"))

    def test_rational_literal(self):
        assert P("3/4*x").coefficient((1, 0)) == Fraction(3, 4)

    @pytest.mark.parametrize(
        "text, fragment, pos",
        [
            ("x +* y", "unexpected token", 3),
            ("z + 1", "unknown variable 'z'", 0),
            ("x/(y-y)", "division by zero", 1),
            ("(x", "expected ')'", 2),
        ],
    )
    def test_errors_carry_position(self, text, fragment, pos):
        with pytest.raises(ParseError) as info:
            P(text)
        assert fragment in str(info.value)
        assert f"position {pos}" in str(info.value)

    def test_round_trip_on_generated_corpus(self):
        rng = random.Random(20240)
        for _ in range(200):
            ring = R3
            f = random_polynomial(ring, rng, degree=4, terms=5, coeff_range=9)
            if rng.random() < 0.5:
                f = f * Fraction(rng.randint(1, 7), rng.randint(1, 7))
            if rng.random() < 0.3:
                g = random_polynomial(ring, rng, degree=2, terms=2) + 1
                value = RationalFunction(f, g) if not g.is_zero() else f
            else:
                value = f
            assert parse_expression(str(value), ring) == value


# -- arithmetic -----------------------------------------------------------------------

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1))
polys = st.dictionaries(exps, coeffs, max_size=5).map(
    lambda d: sum((R3.monomial(list(e), c) for e, c in d.items()), R3.zero)
)


class TestRingLaws:
    @given(polys, polys, polys)
    def test_distributive(self, f, g, h):
        assert (f + g) * h == f * h + g * h

    @given(polys, polys)
    def test_commutative(self, f, g):
        assert f * g == g * f
        assert f + g == g + f

    @given(polys, polys, polys)
    def test_associative(self, f, g, h):
        assert f * (g * h) == (f * g) * h

    @given(polys, polys)
    def test_product_matches_sympy(self, f, g):
        assert to_sympy(f * g) == sp.expand(to_sympy(f) * to_sympy(g))

    @given(polys)
    def test_no_zero_coefficients_stored(self, f):
        assert all(c != 0 for c in (f - f + f).terms.values())
        assert not (f - f).terms


class TestRationalFunctions:
    def test_gcd_reduction(self):
        f = RationalFunction(P("x^2 - y^2"), P("2*x - 2*y"))
        assert f.numerator == P("1/2*x + 1/2*y")
        assert f.denominator.is_constant()

    def test_denominator_monic(self):
        f = RationalFunction(P("1"), P("3*x + 6"))
        assert f.denominator.leading_coefficient() == 1

    def test_field_operations(self):
        F = FractionField(R2)
        a, b = F.gen("x"), F.gen("y")
        q = (a + b) / (a - b)
        assert q * (a - b) == a + b
        assert q.inverse() * q == F.one

    def test_gcd_against_sympy(self):
        rng = random.Random(7)
        for _ in range(40):
            a = random_polynomial(R3, rng, 2, 3)
            b = random_polynomial(R3, rng, 2, 3)
            c = random_polynomial(R3, rng, 2, 3)
            if a.is_zero() or b.is_zero() or c.is_zero():
                continue
            ours = poly_gcd(a * c, b * c)
            ref = sp.gcd(to_sympy(a * c), to_sympy(b * c))
            ratio = sp.simplify(to_sympy(ours) / ref)
            assert ratio.is_number and ratio != 0


# -- coefficient homomorphisms -------------------------------------------------


class TestCoefficientHom:
    def test_identity(self):
        f = P("2*x + 3")
        assert apply_coefficient_hom(f, lambda c: c, R2) == f

    def test_dual_numbers_on_coefficients(self):
        d = make_dring(dual_numbers(), ["a"], {"a": ["a", "1"]})
        S = PolyRing(d.ring, ["x"])
        f = S.monomial([1], d.ring.gen("a")) + S.monomial([0], d.ring.one)
        image = apply_coefficient_hom(f, d.apply_e)
        assert image[(1,)].coords == (d.ring.gen("a"), d.ring.one)
        assert image[(0,)].coords == (d.ring.one, d.ring.zero)

    def test_frobenius_on_f2(self):
        ring = PolyRing(GF(2), ["x"])
        f = ring.gen("x") ** 2
        assert apply_coefficient_hom(f, lambda c: c**2, ring) == f


# -- Gröbner bases -------------------------------------------------------------------


class TestGroebner:
    def test_coordinate_ideal(self):
        I = Ideal(R2.with_order(LEX), [R2.gen("x"), R2.gen("y")])
        assert set(map(str, groebner_basis(I, LEX).gens)) == {"x", "y"}

    def test_parabola_and_axis(self):
        ring = R2.with_order(LEX)
        I = Ideal(ring, [P("y - x^2", ring), P("y", ring)])
        assert sorted(map(str, groebner_basis(I, LEX).gens)) == ["x^2", "y"]

    def test_single_reduction(self):
        ring = PolyRing(QQ, ["x"])
        I = Ideal(ring, [P("x^2 - 1", ring), P("x - 1", ring)])
        assert [str(g) for g in groebner_basis(I).gens] == ["x - 1"]

    def test_reduced_basis_matches_sympy(self):
        rng = random.Random(3)
        syms = sp.symbols("x y z")
        for trial in range(12):
            order = LEX if trial % 2 else GREVLEX
            ring = R3.with_order(order)
            gens = [random_polynomial(ring, rng, 2, 3, 3) for _ in range(3)]
            gens = [g for g in gens if not g.is_zero()]
            ours = groebner_basis(Ideal(ring, gens), order).gens
            ref = sp.groebner([to_sympy(g, syms) for g in gens], *syms, order=order.kind, domain="QQ")
            assert {to_sympy(g.monic(order), syms) for g in ours} == set(ref.exprs)

    def test_s_polynomials_reduce_to_zero(self):
        ring = R3
        gens = [P(t, ring) for t in ("x^2 + y*z - 1", "x*y - z^2", "y^3 - x/2")]
        G = groebner_basis(Ideal(ring, gens)).gens
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                assert normal_form(s_polynomial(G[i], G[j], ring.order), G, ring.order).is_zero()
        for g in gens:
            assert normal_form(g, G, ring.order).is_zero()

    def test_membership_matches_brute_force(self):
        rng = random.Random(11)
        ring = R2
        gens = [P("x^2 - y", ring), P("x*y - 1", ring)]
        I = Ideal(ring, gens)
        for _ in range(8):
            a = random_polynomial(ring, rng, 1, 2)
            b = random_polynomial(ring, rng, 1, 2)
            member = a * gens[0] + b * gens[1]
            assert I.contains(member)
            assert brute_force_membership(member, gens, 1)
            other = member + ring.gen("x")
            assert I.contains(other) == brute_force_membership(other, gens, 2)

    def test_budget_is_reported(self):
        ring = R3
        gens = [P(t, ring) for t in ("x^3 + y*z - 1", "x*y^2 - z^3 + x", "y^3*z - x^2 + y")]
        with pytest.raises(BudgetExceeded):
            groebner_basis(Ideal(ring, gens), budget=3)


class TestElimination:
    def test_parabola_projects_densely(self):
        assert elimination_ideal(Ideal(R2, [P("y - x^2")]), ["x"]).is_zero()

    def test_substitute_zero(self):
        J = elimination_ideal(Ideal(R2, [P("y - x^2"), P("x")]), ["x"])
        assert [str(g) for g in J.gens] == ["y"]

    def test_parametrization(self):
        S = PolyRing(QQ, ["t", "x", "y"])
        J = elimination_ideal(Ideal(S, [P("x - t", S), P("y - t^2", S)]), ["t"])
        assert len(J.gens) == 1
        t, x, y = sp.symbols("t x y")
        res = sp.resultant(x - t, y - t**2, t)
        assert sp.simplify(to_sympy(J.gens[0], [x, y]) / res).is_number

    def test_block_order_eliminates_first_block(self):
        order = block_order(1)
        assert order.key((1, 0, 0)) > order.key((0, 5, 5))


class TestRadical:
    X = PolyRing(QQ, ["x"])

    def test_nilpotent_member(self):
        assert radical_membership(self.X.gen("x"), Ideal(self.X, [P("x^2", self.X)]))

    def test_non_member(self):
        assert not radical_membership(self.X.gen("x") + 1, Ideal(self.X, [P("x^2", self.X)]))

    def test_zero(self):
        assert radical_membership(self.X.zero, Ideal(self.X, [P("x^2 + 1", self.X)]))


# -- linear algebra and the Jacobian criterion ------------------------------------


class TestLinearAlgebra:
    def test_rank_and_nullspace_against_sympy(self):
        rng = random.Random(5)
        for _ in range(20):
            rows = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(3)]
            rows.append([a + b for a, b in zip(rows[0], rows[1])])
            M = sp.Matrix(rows)
            assert rank(rows, QQ) == M.rank()
            for v in nullspace(rows, QQ, 4):
                assert all(sum(r * c for r, c in zip(row, v)) == 0 for row in rows)
            assert len(nullspace(rows, QQ, 4)) == 4 - M.rank()

    def test_rref_over_f2(self):
        F = GF(2)
        red, pivots = rref([[F(1), F(1)], [F(1), F(1)]], F)
        assert pivots == [0]

    def test_solve(self):
        sol = solve([[1, 1], [1, -1]], [3, 1], QQ)
        assert sol == [2, 1]
        assert solve([[1, 1], [1, 1]], [1, 2], QQ) is None


class TestJacobianRank:
    def test_independent_coordinates(self):
        assert jacobian_rank([R2.gen("x"), R2.gen("y")], ["x", "y"]) == 2

    def test_powers_of_one_variable(self):
        ring = PolyRing(QQ, ["x1"])
        assert jacobian_rank([ring.gen("x1"), ring.gen("x1") ** 2], ["x1"]) == 1

    def test_symmetric_functions(self):
        fns = [P("x + y"), P("x*y"), P("x^2 + y^2")]
        assert jacobian_rank(fns, ["x", "y"]) == 2
        x, y = sp.symbols("x y")
        assert sp.Matrix([to_sympy(f) for f in fns]).jacobian([x, y]).rank() == 2

    def test_rejects_positive_characteristic(self):
        ring = PolyRing(GF(2), ["x"])
        with pytest.raises(ValueError):
            jacobian_rank([ring.gen("x")], ["x"])

    def test_rational_functions(self):
        F = FractionField(R2)
        fns = [F.gen("x") / F.gen("y"), F.gen("y") / F.gen("x")]
        assert jacobian_rank(fns, ["x", "y"]) == 1

    def test_adding_combinations_keeps_rank(self):
        rng = random.Random(17)
        for _ in range(20):
            fns = [random_polynomial(R3, rng, 2, 3) for _ in range(2)]
            fns = [f for f in fns if not f.is_constant()]
            if not fns:
                continue
            base = jacobian_rank(fns, R3.vars)
            combo = fns[0] * fns[-1] + fns[0] * 3
            assert jacobian_rank(fns + [combo], R3.vars) == base

    def test_from_sympy_round_trip(self):
        x, y = sp.symbols("x y")
        assert from_sympy((x + y) ** 2, R2) == P("x^2 + 2*x*y + y^2")
