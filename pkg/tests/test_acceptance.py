"""Acceptance suite: one check per criterion, each reporting a PASS/FAIL line.

Run with pytest or directly as ``python tests/test_acceptance.py``.
"""

import functools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from dringkit.algebra import (  # noqa: E402
    bidual_algebra,
    dual_numbers,
    endomorphism_derivation_algebra,
    normalize_basis,
    pair_algebra,
    quadratic_product_algebra,
    truncated_algebra,
    twisted_algebra,
)
from dringkit.decomposition import (  # noqa: E402
    associated_operators,
    hensel_lift,
    local_decomposition,
    nilradical,
    splitting_endomorphisms,
)
from dringkit.exactpoly import QQ, Ideal, NumberField, PolyRing, parse_expression  # noqa: E402
from dringkit.iteration import (  # noqa: E402
    En_expand,
    charp_demo,
    check_iterativity,
    iterate_algebra,
    span_membership_oracle,
)
from dringkit.operators import LeibnizIdentity, leibniz_identities, make_dring, parse_leibniz_rule, prime_dring  # noqa: E402
from dringkit.prolongation import (  # noqa: E402
    AffineVarietySpec,
    dim_sequence,
    dominance_check,
    enumerate_words,
    nabla_compatible,
    prolong,
)
from dringkit.sampling import random_images, random_polynomial  # noqa: E402
from oracles import gf_span_membership  # noqa: E402

SEED = 20240917
RESULTS: dict[int, str] = {}


def criterion(number: int, title: str, limit: float):
    """Time the check, record a PASS/FAIL line, and fail if it errors or runs past ``limit`` seconds."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                elapsed = time.perf_counter() - start
                RESULTS[number] = f"criterion {number}: FAIL ({elapsed:.2f} s) {title}"
                print(RESULTS[number])
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < limit
            status = "PASS" if ok else f"FAIL (limit {limit} s)"
            RESULTS[number] = f"criterion {number}: {status} ({elapsed:.2f} s) {title}"
            print(RESULTS[number])
            assert ok, f"took {elapsed:.2f} s, limit {limit} s"

        run.criterion = number
        return run

    return wrap


# -- 1 ------------------------------------------------------------------------------------


def truncated_rule(i: int) -> str:
    """The rule d_i(xy) = sum_{r+s=i} d_r(x) d_s(y) written out term by term."""
    def op(r, v):
        return v if r == 0 else f"∂_{r}({v})"

    return f"∂_{i}(xy) = " + " + ".join(op(r, "x") + op(i - r, "y") for r in range(i + 1))


def catalog_rules():
    """(algebra, stated rules, operator names, expected value at 1) for each catalog entry."""
    endo, _ = normalize_basis(endomorphism_derivation_algebra())
    cases = [
        ("differential", dual_numbers(), [r"\partial(xy) = x\partial(y)+y\partial(x)"], {"∂": 1}, [0]),
        ("truncated n=2", truncated_algebra(2), [truncated_rule(i) for i in (1, 2)], {}, [0, 0]),
        ("truncated n=3", truncated_algebra(3), [truncated_rule(i) for i in (1, 2, 3)], {}, [0, 0, 0]),
        ("difference", pair_algebra(), ["σ(xy) = σ(x)σ(y)"], {"σ": 1}, [1]),
        ("twisted D", twisted_algebra(), ["D(xy) = x D(y) + D(x) y + D(x) D(y) c"], {"D": 1}, [0]),
        (
            "endomorphism with derivation",
            endo,
            # sigma is multiplicative; delta follows the sigma-twisted rule
            [r"$\sigma(xy)=\sigma(x)\sigma(y)$", r"$\delta(xy)=\sigma(x)\delta(y)+\delta(x)\sigma(y)$"],
            {"σ": 1, "δ": 2},
            [1, 0],
        ),
        (
            "two derivations and a mixed operator",
            bidual_algebra(),
            [
                r"\partial_1(xy)=x\partial_1(y)+y\partial_1(x)",
                r"\partial_2(xy)=x\partial_2(y)+y\partial_2(x)",
                r"\partial_3(xy)=x\partial_3(y)+y\partial_3(x)+\partial_1(x)\partial_2(y)+\partial_2(x)\partial_1(y)",
            ],
            {},
            [0, 0, 0],
        ),
    ]
    return cases


@criterion(1, "Leibniz catalog reproduction", 1.0)
def test_criterion_1_leibniz_catalog():
    for label, A, rules, names, units in catalog_rules():
        ours = leibniz_identities(A)
        assert len(ours) == len(rules), label
        for syn, text, unit in zip(ours, rules, units):
            k, terms = parse_leibniz_rule(text, names, A.domain)
            stated = LeibnizIdentity(k, tuple(sorted(terms.items())), A.domain(unit), A.domain)
            assert (syn.k, syn.as_dict()) == (k, terms), label
            assert str(syn) == str(stated), (label, str(syn), str(stated))


# -- 2 ------------------------------------------------------------------------------------


@criterion(2, "quadratic residue field decomposition and splitting", 1.0)
def test_criterion_2_quadratic_decomposition():
    A = quadratic_product_algebra()
    dec = local_decomposition(A)
    assert dec.t == 1
    assert dec.factors[1].residue_poly_str() == "x^2 - 2"
    ops = associated_operators(dec)
    assert ops.alpha[1] == [[0, 1, 0], [0, 0, 1]]  # alpha_10 = d1, alpha_11 = d2
    K = NumberField([-2, 0, 1], "s")
    s = K.gen
    rows = splitting_endomorphisms(ops, dec, {1: (K, [s, -s])})
    assert rows[1] == [[0, 1, s], [0, 1, -s]]
    # the stated product rules of this algebra
    stated = [
        r"\partial_1(ab)=\partial_1(a)\partial_1(b)+2\partial_2(a)\partial_2(b)",
        r"\partial_2(ab)=\partial_1(a)\partial_2(b)+\partial_2(a)\partial_1(b)",
    ]
    for syn, text in zip(leibniz_identities(A), stated):
        assert (syn.k, syn.as_dict()) == parse_leibniz_rule(text, x="a", y="b")


# -- 3 ------------------------------------------------------------------------------------

PARABOLA = AffineVarietySpec.from_strings(["x", "y"], ["y - x^2"], QQ, prime=True)


def reduced_basis(ring, texts):
    return Ideal(ring, [parse_expression(t, ring) for t in texts]).groebner()


@criterion(3, "prolongation golden ideals and nabla compatibility", 5.0)
def test_criterion_3_prolongation():
    expected = {
        "dual": (dual_numbers(), ["y_0 - x_0^2", "y_1 - 2*x_0*x_1"]),
        "pair": (pair_algebra(), ["y_0 - x_0^2", "y_1 - x_1^2"]),
    }
    rng = random.Random(SEED)
    t_ring = PolyRing(QQ, ["t"])
    for label, (A, gens) in expected.items():
        tau = prolong(PARABOLA, prime_dring(A))
        assert tau.ideal.groebner() == reduced_basis(tau.ring, gens), label
        checked = 0
        while checked < 100:
            d = make_dring(A, ["t"], random_images(t_ring, A.rank, rng, 3, 2))
            f = random_polynomial(d.ring, rng, 3, 3)
            assert nabla_compatible(tau, [f, f * f], d), (label, str(f))
            checked += 1


# -- 4 ------------------------------------------------------------------------------------


@criterion(4, "dominance verdicts", 10.0)
def test_criterion_4_dominance():
    A = pair_algebra()
    d, dec = prime_dring(A), local_decomposition(A)
    line = AffineVarietySpec.from_strings(["y"], [], QQ, prime=True)

    def Y(gens):
        return AffineVarietySpec.from_strings(["y_0", "y_1"], gens, QQ, prime=True)

    graph = dominance_check(Y(["y_1 - y_0^2"]), line, d, dec)
    assert [v.dense for v in graph.verdicts] == [True, True]
    flat = dominance_check(Y(["y_1"]), line, d, dec)
    assert [v.dense for v in flat.verdicts] == [True, False]
    full = dominance_check(prolong(PARABOLA, d).as_variety(), PARABOLA, d, dec)
    assert full.all_dense and len(full.verdicts) == 2


# -- 5 ------------------------------------------------------------------------------------


def iterativity_algebras():
    endo, _ = normalize_basis(endomorphism_derivation_algebra())
    return [
        dual_numbers(),
        pair_algebra(),
        twisted_algebra(1),
        truncated_algebra(2),
        endo,
        dual_numbers(2),
        pair_algebra(2),
        truncated_algebra(2, 2),
    ]


PAIRS = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)]


@criterion(5, "iterativity conditions on random samples", 60.0)
def test_criterion_5_iterativity():
    rng = random.Random(SEED)
    for A in iterativity_algebras():
        assert A.rank <= 3
        ring = PolyRing(A.domain, ["x", "y"])
        # affine images keep E_4 of a cubic sample small
        d = make_dring(A, ["x", "y"], random_images(ring, A.rank, rng, 1, 2))
        samples = [random_polynomial(d.ring, rng, 3, 4) for _ in range(100)]
        for m, n in PAIRS:
            rep = check_iterativity(d, m, n, samples)
            assert rep.ok, (A.name, m, n, rep.violations[:1])
            assert rep.checked["composition"] == 100


# -- 6 ------------------------------------------------------------------------------------


@criterion(6, "characteristic-2 p-th power obstruction", 30.0)
def test_criterion_6_charp():
    A = truncated_algebra(3, 2)
    for m in (2, 3):
        rep = charp_demo(2, A, m)
        assert rep.m == m
        for n in range(m):
            assert set(rep.residuals[n]) == {"0"}, (m, n)
        names = [f"x{i}" for i in range(1, m + 1)]
        ring = PolyRing(A.domain, names)
        verdicts = []
        for n in range(m + 1):
            it = iterate_algebra(A, n)
            coords = [parse_expression(c, ring) for c in rep.expansions[n]]
            oracle = span_membership_oracle(coords, it, ring)
            assert oracle == gf_span_membership(rep.expansions[n], it.dn.entries(), it.rank, 2, names)
            assert rep.membership[n] == oracle
            verdicts.append(oracle)
        assert verdicts == [True] * m + [False]


# -- 7 ------------------------------------------------------------------------------------


def constant_structure(A, rng):
    """A structure on Q(t, x) (or F_p) where t is a constant and x is random."""
    ring = PolyRing(A.domain, ["t", "x"])
    t = ring.gen("t")
    images = random_images(ring, A.rank, rng, 2, 2)
    images["t"] = [t * u for u in A.unit]
    return make_dring(A, ["t", "x"], images)


@criterion(7, "homomorphism and constants properties over 500 trials", 30.0)
def test_criterion_7_properties():
    rng = random.Random(SEED)
    algebras = iterativity_algebras() + [truncated_algebra(3)]
    iterates = {}
    failures = []
    for trial in range(500):
        A = algebras[trial % len(algebras)]
        d = constant_structure(A, rng)
        f = random_polynomial(d.ring, rng, 3, 3)
        g = random_polynomial(d.ring, rng, 3, 3)
        ef, eg = d.apply_e(f), d.apply_e(g)
        if d.apply_e(f * g) != ef * eg:
            failures.append(("multiplicative", trial))
        if ef.coords[0] != d.coerce(f) or eg.project() != d.coerce(g):
            failures.append(("section", trial))
        c1 = random_polynomial(d.ring, rng, 3, 3, variables=["t"])
        c2 = random_polynomial(d.ring, rng, 2, 2, variables=["t"])
        if not (d.is_constant(c1) and d.is_constant(c2)):
            failures.append(("constant", trial))
        if not (d.is_constant(c1 + c2) and d.is_constant(c1 * c2) and d.is_constant(c1 - c2)):
            failures.append(("closure", trial))
        n = trial % 3
        key = (id(A), n)
        if key not in iterates:
            iterates[key] = iterate_algebra(A, n)
        it = iterates[key]
        c = d.coerce(c1 * c2 + 1)
        if En_expand(c, d, n, it).coords != tuple(c * u for u in it.dn.unit):
            failures.append(("E_n on constants", trial))
    assert not failures, f"seed {SEED}: {failures[:5]}"


# -- 8 ------------------------------------------------------------------------------------


@criterion(8, "Hensel lifting and uniqueness", 1.0)
def test_criterion_8_hensel():
    D = dual_numbers()
    T = truncated_algebra(2)
    cases = [
        (D, [D.element([-1, -2]), 0, 1], D.element([1, 0]), (1, 1)),
        (D, [0, -1, 1], D.element([1, 0]), (1, 0)),
        (T, [T.element([-4, -1, 0]), 0, 1], T.element([2, 0, 0]), (2, QQ(1) / 4, QQ(-1) / 64)),
    ]
    rng = random.Random(SEED)
    for A, P, c, expected in cases:

        def value(b, P=P, A=A):
            acc = A.zero_element()
            for k, coeff in enumerate(P):
                term = coeff if hasattr(coeff, "coords") else A.unit_element() * coeff
                acc = acc + term * b**k
            return acc

        b = hensel_lift(P, c)
        assert b.coords == expected
        assert not value(b)
        nil = [A.element(v) for v in nilradical(A)]
        perturbations = list(nil)
        for _ in range(5):
            v = A.zero_element()
            for w in nil:
                v = v + w * rng.randint(-3, 3)
            if v:
                perturbations.append(v)
        for v in perturbations:
            assert value(b + v), (A.name, v.coords)


# -- 9 ------------------------------------------------------------------------------------


@criterion(9, "dimension sequences", 30.0)
def test_criterion_9_dim_sequence():
    ddx = make_dring(dual_numbers(), ["x"], {"x": ["x", "1"]})
    assert dim_sequence([ddx.coerce("x")], ddx, 3) == [1, 1, 1, 1]
    sq = make_dring(pair_algebra(), ["x"], {"x": ["x", "x^2"]})
    assert dim_sequence([sq.coerce("x")], sq, 3) == [1, 1, 1, 1]
    free = make_dring(dual_numbers(), ["x1", "x2"], {"x1": ["x1", "x2"], "x2": ["x2", "0"]})
    assert dim_sequence([free.coerce("x1")], free, 3) == [1, 2, 2, 2]

    rng = random.Random(SEED)
    algebras = [dual_numbers(), pair_algebra(), truncated_algebra(2), twisted_algebra(1)]
    for trial in range(50):
        A = algebras[trial % len(algebras)]
        ring = PolyRing(QQ, ["x1", "x2", "x3"])
        d = make_dring(A, list(ring.vars), random_images(ring, A.rank, rng, 2, 2))
        a = [random_polynomial(d.ring, rng, 2, 3) for _ in range(rng.randint(1, 2))]
        r_max = 2
        seq = dim_sequence(a, d, r_max)
        assert all(x <= y for x, y in zip(seq, seq[1:])), (trial, seq)
        for r, v in enumerate(seq):
            assert v <= min(len(enumerate_words(r, A.rank)) * len(a), 3)


CHECKS = [
    test_criterion_1_leibniz_catalog,
    test_criterion_2_quadratic_decomposition,
    test_criterion_3_prolongation,
    test_criterion_4_dominance,
    test_criterion_5_iterativity,
    test_criterion_6_charp,
    test_criterion_7_properties,
    test_criterion_8_hensel,
    test_criterion_9_dim_sequence,
]


def main() -> int:
    failed = 0
    for check in CHECKS:
        try:
            check()
        except BaseException:  # the line is already printed
            failed += 1
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
