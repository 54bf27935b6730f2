import pytest
import sympy as sp

from dringkit.algebra import (
    catalog_algebra,
    compose_algebras,
    dual_numbers,
    fibred_product,
    normalize_basis,
    pair_algebra,
    quadratic_product_algebra,
    truncated_algebra,
    twisted_algebra,
)
from dringkit.decomposition import (
    FactorizationBudgetExceeded,
    associated_operators,
    factor_univariate,
    hensel_lift,
    is_nilpotent,
    lift_idempotent,
    local_decomposition,
    nilpotency_index,
    nilradical,
    splitting_endomorphisms,
)
from dringkit.exactpoly import GF, QQ, NumberField
from dringkit.exactpoly.linalg import rank

CHAR0 = ["dual", "pair", "twisted1", "endo-derivation", "bidual", "quadratic", "truncated2", "truncated3"]


def algebra(name, char=0):
    if name == "twisted1":
        return twisted_algebra(1, char)
    A = catalog_algebra(name, char)
    return A if A.is_normalized() else normalize_basis(A)[0]


def trace_form_kernel(A):
    """Nilradical in characteristic 0 via sympy: kernel of (a, b) -> tr(L_ab)."""
    n = A.rank
    T = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            M = A.multiplication_matrix((A.basis_element(i) * A.basis_element(j)).coords)
            T[i, j] = sum(sp.Rational(M[k][k].numerator, M[k][k].denominator) for k in range(n))
    return T.nullspace()


def same_span(rows_a, rows_b, K=QQ):
    ra = rank(rows_a, K) if rows_a else 0
    rb = rank(rows_b, K) if rows_b else 0
    both = rank(list(rows_a) + list(rows_b), K) if rows_a or rows_b else 0
    return ra == rb == both


class TestNilradical:
    def test_dual(self):
        assert nilradical(dual_numbers()) == [[0, 1]]

    def test_pair(self):
        assert nilradical(pair_algebra()) == []

    def test_quadratic_is_reduced(self):
        A = quadratic_product_algebra()
        assert nilradical(A) == []
        assert trace_form_kernel(A) == []

    @pytest.mark.parametrize("name", CHAR0)
    def test_matches_trace_form_oracle(self, name):
        A = algebra(name)
        ours = nilradical(A)
        ref = [[QQ(sp.Rational(c).p) / sp.Rational(c).q for c in v] for v in trace_form_kernel(A)]
        assert same_span(ours, ref)
        for v in ours:
            assert is_nilpotent(A.element(v))

    def test_characteristic_p(self):
        A = truncated_algebra(3, 2)
        nil = nilradical(A)
        assert len(nil) == 3
        for v in nil:
            assert is_nilpotent(A.element(v))

    def test_nilpotency_index(self):
        assert nilpotency_index(truncated_algebra(3)) == 4
        assert nilpotency_index(pair_algebra()) == 1


class TestLocalDecomposition:
    def test_pair(self):
        dec = local_decomposition(pair_algebra())
        assert dec.t == 1
        assert [f.degree for f in dec.factors] == [1, 1]
        assert dec.factors[1].residue_poly_str() == "x - 1"
        assert associated_operators(dec).sigma_rows[1] == [0, 1]

    def test_quadratic(self):
        dec = local_decomposition(quadratic_product_algebra())
        assert dec.t == 1
        assert dec.factors[0].degree == 1
        assert dec.factors[1].residue_poly_str() == "x^2 - 2"
        assert dec.assumption_4_1_ii is False
        assert dec.factors[1].dimension == 2

    def test_truncated_is_local(self):
        dec = local_decomposition(truncated_algebra(2))
        assert dec.t == 0
        assert len(dec.nilradical) == 2

    def test_factor_zero_carries_projection(self):
        for name in CHAR0:
            dec = local_decomposition(algebra(name))
            assert dec.factors[0].idempotent.project() == 1
            assert dec.factors[0].pi_rows[0] == list(dec.algebra.projection_row)

    @pytest.mark.parametrize("name", CHAR0)
    def test_idempotents_complete_and_orthogonal(self, name):
        A = algebra(name)
        dec = local_decomposition(A)
        total = A.zero_element()
        for i, f in enumerate(dec.factors):
            e = f.idempotent
            assert e * e == e
            for g in dec.factors[i + 1 :]:
                assert not (e * g.idempotent)
            total = total + e
        assert total == A.unit_element()

    @pytest.mark.parametrize("name", CHAR0)
    def test_rank_bookkeeping(self, name):
        A = algebra(name)
        dec = local_decomposition(A)
        assert sum(f.degree for f in dec.factors) + len(dec.nilradical) == A.rank
        assert sum(f.dimension for f in dec.factors) == A.rank
        stacked = [row for f in dec.factors for row in f.theta]
        assert rank(stacked, QQ) == A.rank

    @pytest.mark.parametrize("name", CHAR0)
    def test_local_projections_are_homomorphisms(self, name):
        A = algebra(name)
        dec = local_decomposition(A)
        for f in dec.factors:
            L = NumberField(f.residue_poly, "x") if f.degree > 1 else QQ

            def pi(v):
                vals = [sum(r * c for r, c in zip(row, v)) for row in f.pi_rows]
                if f.degree == 1:
                    return vals[0]
                return sum((L(c) * L.gen**j for j, c in enumerate(vals)), L.zero)

            assert pi(A.unit) == 1
            for i in range(A.rank):
                for j in range(A.rank):
                    a, b = A.basis_element(i), A.basis_element(j)
                    assert pi((a * b).coords) == pi(a.coords) * pi(b.coords)

    def test_composed_pairs(self):
        A = compose_algebras(pair_algebra(), pair_algebra())
        dec = local_decomposition(A)
        assert dec.t == 3
        assert all(f.degree == 1 for f in dec.factors)

    def test_fibred(self):
        dec = local_decomposition(fibred_product(dual_numbers(), pair_algebra()))
        assert dec.t == 1
        assert len(dec.nilradical) == 1

    def test_char_p_flagged_experimental(self):
        dec = local_decomposition(pair_algebra(2))
        assert dec.experimental
        assert dec.t == 1

    def test_json_report(self):
        data = local_decomposition(quadratic_product_algebra()).to_json()
        assert data["t"] == 1
        assert data["assumption_4_1_ii"] is False
        assert data["factors"][1]["P"] == "x^2 - 2"
        assert data["factors"][1]["alpha"] == [["0", "1", "0"], ["0", "0", "1"]]


class TestAssociatedOperators:
    def test_quadratic_alphas(self):
        ops = associated_operators(local_decomposition(quadratic_product_algebra()))
        assert ops.alpha[1] == [[0, 1, 0], [0, 0, 1]]
        assert ops.degrees == [1, 2]

    def test_dual_has_only_identity(self):
        ops = associated_operators(local_decomposition(dual_numbers()))
        assert ops.alpha == [[[1, 0]]]

    def test_sigma_zero_is_identity(self):
        for name in CHAR0:
            ops = associated_operators(local_decomposition(algebra(name)))
            row = ops.alpha[0][0]
            assert row[0] == 1 and not any(row[1:])


class TestSplitting:
    K = NumberField([-2, 0, 1], "s")

    def test_quadratic_split(self):
        dec = local_decomposition(quadratic_product_algebra())
        s = self.K.gen
        rows = splitting_endomorphisms(associated_operators(dec), dec, {1: (self.K, [s, -s])})
        assert rows[1] == [[0, 1, s], [0, 1, -s]]
        assert rows[0] == [[1, 0, 0]]

    def test_degree_one_unchanged(self):
        dec = local_decomposition(pair_algebra())
        assert splitting_endomorphisms(associated_operators(dec), dec)[1] == [[0, 1]]

    def test_four_idempotent_functionals(self):
        dec = local_decomposition(compose_algebras(pair_algebra(), pair_algebra()))
        rows = splitting_endomorphisms(associated_operators(dec), dec)
        vectors = sorted(tuple(r[0]) for r in rows.values())
        assert vectors == sorted(tuple(int(i == k) for i in range(4)) for k in range(4))

    def test_missing_splitting_data(self):
        dec = local_decomposition(quadratic_product_algebra())
        with pytest.raises(ValueError, match="splitting field"):
            splitting_endomorphisms(associated_operators(dec), dec)

    def test_bad_roots(self):
        dec = local_decomposition(quadratic_product_algebra())
        ops = associated_operators(dec)
        s = self.K.gen
        with pytest.raises(ValueError, match="not distinct"):
            splitting_endomorphisms(ops, dec, {1: (self.K, [s, s])})
        with pytest.raises(ValueError, match="not a root"):
            splitting_endomorphisms(ops, dec, {1: (self.K, [s, s + 1])})


class TestFactorization:
    def test_over_rationals(self):
        facs = factor_univariate([-2, 0, -1, 0, 1], QQ)  # (x^2 - 2)(x^2 + 1)
        assert sorted(facs) == sorted([[-2, 0, 1], [1, 0, 1]])

    def test_over_f2(self):
        F = GF(2)
        facs = factor_univariate([F(1), F(0), F(1)], F)  # (x + 1)^2
        assert facs == [[F(1), F(1)]]

    def test_hints_beyond_budget(self):
        a = [-2] + [0] * 14 + [1]
        b = [3] + [0] * 14 + [1]
        f = [0] * 31
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                f[i + j] += x * y
        assert factor_univariate(f, QQ, hints=[a, b]) == [a, b]
        # a hint that does not divide is irrelevant; the rest still exceeds the budget
        with pytest.raises(FactorizationBudgetExceeded):
            factor_univariate(f, QQ, hints=[[1, 1]])

    def test_budget(self):
        big = [1] + [0] * 29 + [1]
        with pytest.raises(FactorizationBudgetExceeded):
            factor_univariate(big, QQ)


class TestHensel:
    def test_square_root_in_dual_numbers(self):
        A = dual_numbers()
        b = hensel_lift([A.element([-1, -2]), 0, 1], A.element([1, 0]))
        assert b.coords == (1, 1)
        assert b * b == A.element([1, 2])

    def test_idempotent_lift(self):
        A = dual_numbers()
        b = hensel_lift([0, -1, 1], A.element([1, 0]))
        assert b * b == b

    def test_truncated_square_root(self):
        A = truncated_algebra(2)
        b = hensel_lift([A.element([-4, -1, 0]), 0, 1], A.element([2, 0, 0]))
        assert b.coords == (2, QQ(1) / 4, QQ(-1) / 64)
        assert b * b == A.element([4, 1, 0])

    def test_derivative_not_unit(self):
        A = dual_numbers()
        with pytest.raises(ZeroDivisionError):
            hensel_lift([A.element([0, 0]), 0, 1], A.element([0, 0]))

    def test_value_not_nilpotent(self):
        A = dual_numbers()
        with pytest.raises(ValueError):
            hensel_lift([-4, 0, 1], A.element([1, 0]))

    def test_lift_idempotent_fixpoint(self):
        A = truncated_algebra(2)
        e = lift_idempotent(A.element([1, 5, 7]))
        assert e * e == e
