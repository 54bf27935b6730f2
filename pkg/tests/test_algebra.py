import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dringkit.algebra import (
    AlgebraScheme,
    algebra_from_json,
    algebra_to_json,
    bidual_algebra,
    change_basis,
    catalog_algebra,
    compose_algebras,
    dual_numbers,
    endomorphism_derivation_algebra,
    fibred_product,
    multiply_elements,
    normalize_basis,
    outer_projection,
    pair_algebra,
    quadratic_product_algebra,
    tensor_product,
    trivial_algebra,
    truncated_algebra,
    twisted_algebra,
    validate_algebra,
)
from dringkit.exactpoly import QQ, PolyRing
from dringkit.exactpoly.linalg import identity, inverse, rank
from dringkit.operators import leibniz_identities

CATALOG = ["dual", "pair", "twisted", "endo-derivation", "bidual", "quadratic", "truncated2", "truncated3"]


def normalized(name, char=0):
    A = catalog_algebra(name, char)
    return A if A.is_normalized() else normalize_basis(A)[0]


def brute_associative(A):
    """Check associativity by multiplying basis vectors, independently of the validator."""
    for i, j, k in itertools.product(range(A.rank), repeat=3):
        ei, ej, ek = (A.basis_element(t) for t in (i, j, k))
        if (ei * ej) * ek != ei * (ej * ek):
            return False
    return True


class TestValidation:
    @pytest.mark.parametrize("name", CATALOG)
    def test_catalog_is_valid(self, name):
        A = catalog_algebra(name)
        assert validate_algebra(A).ok
        assert brute_associative(A)

    def test_dual_numbers_constants(self):
        A = dual_numbers()
        assert A.const(0, 0, 0) == 1 and A.const(0, 1, 1) == 1
        assert A.const(1, 1, 0) == 0 and A.const(1, 1, 1) == 0
        assert list(A.unit) == [1, 0]

    def test_injected_constant_breaks_projection(self):
        # eta^2 = 1 is still associative, but pi is no longer multiplicative
        D = dual_numbers()
        B = AlgebraScheme(D.domain, D.labels, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 1, 0): 1}, [1, 0])
        report = validate_algebra(B)
        assert not report.ok
        assert {v.kind for v in report.violations} == {"projection"}
        assert brute_associative(B)

    def test_associativity_violation_reported(self):
        B = AlgebraScheme(
            QQ, ["a", "b", "c"], {(0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1, (1, 1, 2): 1, (1, 2, 1): 1}, [1, 0, 0]
        )
        report = validate_algebra(B)
        assert "associativity" in {v.kind for v in report.violations}
        assert not brute_associative(B)

    def test_commutativity_violation_from_json(self):
        data = {
            "basis": ["1", "e"],
            "mul": [{"i": 0, "j": 0, "k": 0}, {"i": 0, "j": 1, "k": 1}, {"i": 1, "j": 0, "k": 1, "c": "2"}],
            "unit": ["1", "0"],
        }
        report = validate_algebra(algebra_from_json(data))
        assert "commutativity" in {v.kind for v in report.violations}

    def test_unit_violation(self):
        B = AlgebraScheme(QQ, ["1", "e"], {(0, 0, 0): 1, (0, 1, 1): 1}, [1, 1])
        assert "unit" in {v.kind for v in validate_algebra(B).violations}

    def test_pair_algebra_valid(self):
        A = pair_algebra()
        assert validate_algebra(A).ok
        assert list(A.unit) == [1, 1]


class TestMultiply:
    def test_dual(self):
        A = dual_numbers()
        assert multiply_elements(A.element([3, 4]), A.element([2, 5])).coords == (6, 23)

    def test_pair(self):
        A = pair_algebra()
        assert multiply_elements(A.element([3, 4]), A.element([2, 5])).coords == (6, 20)

    def test_twisted_symbolic(self):
        A = twisted_algebra()
        # the parameter c becomes a variable of the coordinate ring
        S = PolyRing(QQ, ["c", "x1", "y1", "x2", "y2"])
        c, x1, y1, x2, y2 = S.gens()
        prod = A.element([x1, y1], S) * A.element([x2, y2], S)
        assert prod.coords == (x1 * x2, x1 * y2 + y1 * x2 + y1 * y2 * c)

    def test_parent_mismatch(self):
        with pytest.raises((TypeError, ValueError)):
            multiply_elements(dual_numbers().element([1, 0]), pair_algebra().element([1, 0]))


class TestNormalize:
    def sum_projection_pair(self):
        # basis u = (1,0), w = (1,1) of Q^2 with pi the first coordinate of Q^2
        return AlgebraScheme(QQ, ["u", "w"], {(0, 0, 0): 1, (0, 1, 0): 1, (1, 1, 1): 1}, [0, 1], [1, 1])

    def test_change_of_basis(self):
        A = self.sum_projection_pair()
        assert validate_algebra(A).ok
        N, M = normalize_basis(A)
        assert N.is_normalized()
        assert list(N.projection_row) == [1, 0]
        assert validate_algebra(N).ok
        assert brute_associative(N)
        assert len(M) == 2

    def test_identity_on_dual(self):
        A = dual_numbers()
        N, M = normalize_basis(A)
        assert M == identity(2, QQ)
        assert N.entries() == A.entries()

    def test_quadratic_unchanged(self):
        A = quadratic_product_algebra()
        N, M = normalize_basis(A)
        assert M == identity(3, QQ)
        assert list(N.projection_row) == [1, 0, 0]

    def test_endo_derivation_basis(self):
        A = endomorphism_derivation_algebra()
        assert not A.is_normalized()
        N, _ = normalize_basis(A)
        assert N.is_normalized()
        # the third vector becomes (0, eta), which squares to zero
        e2 = N.basis_element(2)
        assert not (e2 * e2)
        assert validate_algebra(N).ok

    @pytest.mark.parametrize("name", CATALOG)
    def test_idempotent(self, name):
        N, _ = normalize_basis(catalog_algebra(name))
        N2, M2 = normalize_basis(N)
        assert M2 == identity(N.rank, N.domain)
        assert N2.entries() == N.entries()

    def test_rejects_non_surjective(self):
        A = AlgebraScheme(QQ, ["1", "e"], {(0, 0, 0): 1, (0, 1, 1): 1}, [1, 0], [0, 0])
        with pytest.raises(ValueError):
            normalize_basis(A)


class TestProducts:
    def test_fibred_dual_pair(self):
        F = fibred_product(dual_numbers(), pair_algebra())
        assert F.rank == 3
        assert validate_algebra(F).ok
        rules = [str(r) for r in leibniz_identities(F)]
        assert rules == ["∂1(x*y) = x*∂1(y) + ∂1(x)*y; ∂1(1) = 0", "∂2(x*y) = ∂2(x)*∂2(y); ∂2(1) = 1"]

    def test_fibred_dual_dual(self):
        F = fibred_product(dual_numbers(), dual_numbers())
        rules = [r.as_dict() for r in leibniz_identities(F)]
        assert rules == [{(0, 1): 1, (1, 0): 1}, {(0, 2): 1, (2, 0): 1}]

    def test_fibred_unit(self):
        A = pair_algebra()
        assert fibred_product(A, trivial_algebra()).entries() == A.entries()

    def test_tensor_dual_dual(self):
        T = tensor_product(dual_numbers(), dual_numbers())
        assert T.rank == 4
        rule = leibniz_identities(T)[2]
        assert rule.as_dict() == {(0, 3): 1, (3, 0): 1, (1, 2): 1, (2, 1): 1}
        assert T.entries() == bidual_algebra().entries()

    def test_tensor_unit(self):
        A = truncated_algebra(2)
        assert tensor_product(A, trivial_algebra()).entries() == A.entries()

    def test_tensor_pair_dual_has_twisted_rule(self):
        T = tensor_product(pair_algebra(), dual_numbers())
        rules = {r.k: r.as_dict() for r in leibniz_identities(T)}
        assert rules[1] == {(1, 1): 1}
        # delta(xy) = sigma(x) delta(y) + delta(x) sigma(y) with sigma = d1, delta = d3
        assert rules[3] == {(1, 3): 1, (3, 1): 1}

    def test_tensor_labels(self):
        T = tensor_product(dual_numbers(), pair_algebra())
        assert T.labels[1] == "η⊗(1,0)"
        assert T.labels[2] == "1⊗(0,1)"

    @pytest.mark.parametrize("a, b", [("dual", "dual"), ("pair", "dual"), ("dual", "pair"), ("truncated2", "pair")])
    def test_compose_matches_tensor(self, a, b):
        A1, A2 = catalog_algebra(a), catalog_algebra(b)
        assert sorted(compose_algebras(A1, A2).entries()) == sorted(tensor_product(A1, A2).entries())

    def test_compose_unit(self):
        A = dual_numbers()
        assert compose_algebras(A, trivial_algebra()).entries() == A.entries()

    def test_pair_pair_idempotents(self):
        C = compose_algebras(pair_algebra(), pair_algebra())
        assert C.rank == 4
        total = C.zero_element()
        for i in range(4):
            e = C.basis_element(i)
            assert e * e == e
            for j in range(i + 1, 4):
                assert not (e * C.basis_element(j))
            total = total + e
        assert total == C.unit_element()

    def test_outer_projection(self):
        f = outer_projection(dual_numbers(), pair_algebra())
        assert [list(r) for r in f] == [[1, 0], [0, 1], [0, 0], [0, 0]]

    def test_base_field_mismatch(self):
        with pytest.raises(ValueError):
            tensor_product(dual_numbers(), dual_numbers(2))


names = st.sampled_from(["dual", "pair", "truncated2", "bidual", "quadratic", "endo-derivation"])


class TestConstructorProperties:
    @given(names, names, st.sampled_from([fibred_product, tensor_product, compose_algebras]))
    def test_constructors_valid(self, a, b, op):
        C = op(normalized(a), normalized(b))
        assert validate_algebra(C).ok

    @given(names, st.integers(0, 2**32 - 1))
    def test_random_basis_change_normalizes(self, name, seed):
        A = normalized(name)
        rng = random.Random(seed)
        n = A.rank
        while True:
            M = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            if rank(M, QQ) == n:
                break
        B = change_basis(A, M, inverse(M, QQ))
        assert validate_algebra(B).ok
        N, _ = normalize_basis(B)
        assert N.is_normalized() and validate_algebra(N).ok
        assert brute_associative(N)

    @pytest.mark.parametrize("name", CATALOG)
    def test_json_round_trip(self, name):
        A = catalog_algebra(name)
        B = algebra_from_json(algebra_to_json(A))
        assert B.entries() == A.entries()
        assert list(B.unit) == list(A.unit)
        assert list(B.projection_row) == list(A.projection_row)
