import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitcoh.algebra import (
    BadDegree,
    BadParams,
    NameClash,
    NotApplicable,
    RewriteRule,
    SpaceKind,
    TruncatedAlgebra,
    add,
    apply_substitution,
    basis_of_degree,
    build_space_algebra,
    euler_characteristic,
    find_obstruction_class,
    fixed_point_obstruction,
    format_presentation,
    hilbert_series,
    involutive_automorphism_candidates,
    kunneth_product,
    multiply,
    nilpotency_order,
    power,
)


def count_by_degree(alg, maxdeg):
    """Oracle: walk every exponent vector below the caps and tally degrees."""
    caps = [2 if alg.rewrite and g.name == alg.rewrite.target else g.trunc for g in alg.generators]
    counts = [0] * (maxdeg + 1)
    for exps in itertools.product(*(range(c) for c in caps)):
        d = sum(e * g.degree for e, g in zip(exps, alg.generators))
        if d <= maxdeg:
            counts[d] += 1
    return tuple(counts)


def theorem_iii(n, m, params=(0, 0, 0), d=1):
    alpha, beta, gamma = params
    rule = RewriteRule("w", "x", "y", "z", x_power=d, alpha=alpha, beta=beta, gamma=gamma)
    return TruncatedAlgebra.of(
        ("x", 1, d + 1), ("y", 2 * d, (n + 1) // 2), ("z", 2 * d, (m + 1) // 2), ("w", d, 2), rewrite=rule
    )


# -- build_space_algebra ----------------------------------------------------


def test_build_real_product():
    alg = build_space_algebra("real", 1, 2)
    assert alg.degrees == (1, 1)
    assert alg.truncs == (2, 3)


def test_build_complex_single():
    alg = build_space_algebra(SpaceKind.COMPLEX_SINGLE, 3)
    assert alg.degrees == (2,)
    assert alg.truncs == (4,)


def test_build_normalizes_order():
    assert build_space_algebra("real", 3, 1) == build_space_algebra("real", 1, 3)
    assert build_space_algebra("real", 3, 1).truncs == (2, 4)


@pytest.mark.parametrize("args", [("real", 0, 1), ("real", 1, None), ("real-single", 2, 3), ("complex", 1, 0)])
def test_build_rejects_bad_params(args):
    with pytest.raises(BadParams):
        build_space_algebra(*args)


# -- bases and series ---------------------------------------------------------


def test_basis_examples():
    assert basis_of_degree(build_space_algebra("real", 2, 2), 2) == ((0, 2), (1, 1), (2, 0))
    assert basis_of_degree(build_space_algebra("complex", 4, 7), 0) == ((0, 0),)
    assert basis_of_degree(build_space_algebra("real", 1, 3), 4) == ((1, 3),)
    assert basis_of_degree(build_space_algebra("real", 1, 3), 5) == ()


def test_basis_matches_degree_band_description():
    # l <= n: a^l, a^(l-1) b, ..., b^l; n < l <= m: a^n b^(l-n), ..., b^l
    n, m = 3, 6
    alg = build_space_algebra("real", n, m)
    for l in range(n + m + 1):
        lo, hi = max(0, l - m), min(n, l)
        assert set(basis_of_degree(alg, l)) == {(i, l - i) for i in range(lo, hi + 1)}


def test_hilbert_examples():
    assert hilbert_series(build_space_algebra("real", 2, 2), 4).coeffs == (1, 2, 3, 2, 1)
    assert hilbert_series(theorem_iii(1, 1)).coeffs == (1, 2, 1)
    assert hilbert_series(build_space_algebra("complex-single", 1)).coeffs == (1, 0, 1)


@pytest.mark.parametrize(
    "alg",
    [
        build_space_algebra("real", 3, 5),
        build_space_algebra("complex", 2, 3),
        theorem_iii(3, 5),
        theorem_iii(5, 7, (1, 1, 1), d=2),
        TruncatedAlgebra.of(("x", 1, 3), ("y", 4, 2), ("z", 2, 4)),
        TruncatedAlgebra(()),
    ],
)
def test_hilbert_matches_enumeration(alg):
    maxdeg = alg.top_degree + 3
    series = hilbert_series(alg, maxdeg).coeffs
    assert series == count_by_degree(alg, maxdeg)
    assert series == tuple(len(basis_of_degree(alg, l)) for l in range(maxdeg + 1))


@pytest.mark.parametrize("n, m, d", [(1, 1, 1), (3, 5, 1), (7, 3, 1), (1, 1, 2), (5, 9, 2)])
def test_rewrite_series_independent_of_params(n, m, d):
    series = {hilbert_series(theorem_iii(n, m, p, d)).coeffs for p in itertools.product((0, 1), repeat=3)}
    assert len(series) == 1


def test_kunneth_examples():
    lens = TruncatedAlgebra.of(("x", 1, 2), ("y", 2, 2))
    rp2 = TruncatedAlgebra.of(("z", 1, 3))
    # (1+q)(1+q^2)(1+q+q^2) expanded by hand
    assert hilbert_series(kunneth_product(lens, rp2)).coeffs == (1, 2, 3, 3, 2, 1)
    unit = TruncatedAlgebra(())
    assert hilbert_series(kunneth_product(lens, unit)) == hilbert_series(lens)
    s1 = TruncatedAlgebra.of(("a", 1, 2))
    assert hilbert_series(kunneth_product(s1, TruncatedAlgebra.of(("b", 1, 2)))).coeffs == (1, 2, 1)


def test_kunneth_name_clash():
    with pytest.raises(NameClash):
        kunneth_product(TruncatedAlgebra.of(("a", 1, 2)), TruncatedAlgebra.of(("a", 2, 2)))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 4)), min_size=0, max_size=3),
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 4)), min_size=0, max_size=3),
)
def test_kunneth_is_convolution(left, right):
    a1 = TruncatedAlgebra.of(*((f"p{i}", d, t) for i, (d, t) in enumerate(left)))
    a2 = TruncatedAlgebra.of(*((f"q{i}", d, t) for i, (d, t) in enumerate(right)))
    s1, s2 = hilbert_series(a1).coeffs, hilbert_series(a2).coeffs
    conv = [0] * (len(s1) + len(s2) - 1)
    for i, x in enumerate(s1):
        for j, y in enumerate(s2):
            conv[i + j] += x * y
    assert hilbert_series(kunneth_product(a1, a2)).coeffs == tuple(conv)


# -- Euler characteristic ----------------------------------------------------------


def test_euler_examples():
    assert euler_characteristic(build_space_algebra("real", 2, 2)) == 1
    assert all(euler_characteristic(build_space_algebra("real", 1, m)) == 0 for m in range(1, 12))
    assert euler_characteristic(build_space_algebra("complex", 1, 1)) == 4


def three_band_euler_sum(n, m):
    """Three-band sum for RP^n x RP^m with n < m, ranks l+1, n+1, n+m+1-l."""
    return (
        sum((-1) ** l * (l + 1) for l in range(n + 1))
        + sum((-1) ** l * (n + 1) for l in range(n + 1, m + 1))
        + sum((-1) ** l * (n + m + 1 - l) for l in range(m + 1, n + m + 1))
    )


@pytest.mark.parametrize("n", range(1, 16))
@pytest.mark.parametrize("m", range(1, 16))
def test_euler_closed_forms(n, m):
    real = euler_characteristic(build_space_algebra("real", n, m))
    assert real == (1 if n % 2 == 0 and m % 2 == 0 else 0)
    lo, hi = min(n, m), max(n, m)
    if lo < hi:
        assert real == three_band_euler_sum(lo, hi)
    assert euler_characteristic(build_space_algebra("complex", n, m)) == (n + 1) * (m + 1)


# -- multiplication --------------------------------------------------------------


def test_multiply_examples():
    alg = build_space_algebra("real", 1, 4)
    a = alg.gen("a")
    assert multiply(alg, a, a) == ()
    alg = build_space_algebra("real", 3, 3)
    s = add(alg.gen("a"), alg.gen("b"))
    assert multiply(alg, s, s) == add(alg.mono(a=2), alg.mono(b=2))
    rule_alg = theorem_iii(3, 3, (1, 1, 0))
    w = rule_alg.gen("w")
    assert multiply(rule_alg, w, w) == add(rule_alg.mono(x=1, w=1), rule_alg.mono(y=1))


def small_algebras():
    yield build_space_algebra("real", 2, 3)
    yield build_space_algebra("complex", 1, 2)
    for p in itertools.product((0, 1), repeat=3):
        yield theorem_iii(3, 5, p)
        yield theorem_iii(3, 3, p, d=2)


@pytest.mark.parametrize("alg", list(small_algebras()), ids=format_presentation)
def test_multiply_commutative_associative(alg):
    basis = [(m,) for l in range(alg.top_degree + 1) for m in basis_of_degree(alg, l)]
    for u, v in itertools.product(basis, repeat=2):
        assert multiply(alg, u, v) == multiply(alg, v, u)
    for u, v, w in itertools.product(basis[:12], repeat=3):
        assert multiply(alg, multiply(alg, u, v), w) == multiply(alg, u, multiply(alg, v, w))


def test_rewrite_rule_degree_check():
    bad = RewriteRule("w", "x", "y", "z", beta=1)
    with pytest.raises(BadParams):
        TruncatedAlgebra.of(("x", 1, 2), ("y", 3, 2), ("z", 2, 2), ("w", 1, 2), rewrite=bad)


# -- nilpotency ----------------------------------------------------------------------


def binomial_order(n, m):
    """Oracle: (a+b)^k = sum C(k,i) a^i b^(k-i) vanishes iff each surviving C(k,i) is even."""
    k = 1
    while any(comb(k, i) % 2 for i in range(max(0, k - m), min(n, k) + 1)):
        k += 1
    return k


def test_nilpotency_examples():
    alg = build_space_algebra("real", 1, 2)
    assert nilpotency_order(alg, alg.gen("a")) == 2
    assert nilpotency_order(alg, add(alg.gen("a"), alg.gen("b"))) == 4
    alg = build_space_algebra("real", 1, 3)
    assert nilpotency_order(alg, add(alg.gen("a"), alg.gen("b"))) == 4


@pytest.mark.parametrize("kind", ["real", "complex"])
@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 10) for m in range(n, 12)])
def test_nilpotency_orders(kind, n, m):
    alg = build_space_algebra(kind, n, m)
    assert nilpotency_order(alg, alg.gen("a")) == n + 1
    assert nilpotency_order(alg, alg.gen("b")) == m + 1
    assert nilpotency_order(alg, add(alg.gen("a"), alg.gen("b"))) == binomial_order(n, m)


def test_order_of_sum_is_n_plus_m_plus_1_iff_binomial_odd():
    for n in range(1, 12):
        for m in range(n, 14):
            alg = build_space_algebra("real", n, m)
            order = nilpotency_order(alg, add(alg.gen("a"), alg.gen("b")))
            assert (order == n + m + 1) == bool(comb(n + m, n) % 2)


def test_nilpotency_rejects_inhomogeneous():
    alg = build_space_algebra("real", 2, 2)
    with pytest.raises(BadDegree):
        nilpotency_order(alg, add(alg.one(), alg.gen("a")))


# -- automorphisms and the fixed-point obstruction ------------------------------------


def test_candidates_circle_product():
    alg = build_space_algebra("real", 1, 1)
    cands = involutive_automorphism_candidates(alg)
    # GL(2, F2) has 6 elements; 4 of them square to the identity
    assert len(cands) == 4
    assert cands[0] == (alg.gen("a"), alg.gen("b"))


def test_candidates_identity_only():
    alg = build_space_algebra("real", 1, 2)
    assert involutive_automorphism_candidates(alg) == [(alg.gen("a"), alg.gen("b"))]


def test_candidates_with_gap():
    alg = build_space_algebra("real", 1, 3)
    a, b = alg.gen("a"), alg.gen("b")
    assert involutive_automorphism_candidates(alg) == [(a, b), (a, add(a, b))]
    assert find_obstruction_class(alg, (a, add(a, b))) is None


def test_candidates_not_applicable():
    with pytest.raises(NotApplicable):
        involutive_automorphism_candidates(build_space_algebra("real-single", 3))


@pytest.mark.parametrize("kind", ["real", "complex"])
@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 6) for m in range(n, 7)])
def test_candidates_are_involutions(kind, n, m):
    alg = build_space_algebra(kind, n, m)
    for images in involutive_automorphism_candidates(alg):
        assert tuple(apply_substitution(alg, images, x) for x in images) == (alg.gen("a"), alg.gen("b"))
        assert not any(power(alg, img, g.trunc) for img, g in zip(images, alg.generators))


def test_obstruction_examples():
    for n in range(1, 6):
        alg = build_space_algebra("real", n, n)
        a, b = alg.gen("a"), alg.gen("b")
        assert fixed_point_obstruction(alg, (b, a), alg.mono(a=n))
    alg = build_space_algebra("real", 1, 1)
    a, b = alg.gen("a"), alg.gen("b")
    assert not fixed_point_obstruction(alg, (a, b), a)
    assert fixed_point_obstruction(alg, (add(a, b), b), a)


def test_obstruction_bad_degree():
    alg = build_space_algebra("real", 2, 2)
    with pytest.raises(BadDegree):
        fixed_point_obstruction(alg, (alg.gen("a"), alg.gen("b")), alg.gen("a"))
    with pytest.raises(BadDegree):
        fixed_point_obstruction(build_space_algebra("real", 1, 2), (), ())


@pytest.mark.parametrize("n, m", [(1, 1), (1, 3), (2, 2), (3, 3), (2, 4), (3, 5), (1, 5)])
def test_obstruction_search_is_exhaustive(n, m):
    alg = build_space_algebra("real", n, m)
    half = alg.top_degree // 2
    basis = basis_of_degree(alg, half)
    for images in involutive_automorphism_candidates(alg):
        # oracle: every nonzero middle-degree class
        brute = any(
            fixed_point_obstruction(alg, images, tuple(m for m, bit in zip(basis, bits) if bit))
            for bits in itertools.product((0, 1), repeat=len(basis))
            if any(bits)
        )
        assert brute == (find_obstruction_class(alg, images) is not None)
