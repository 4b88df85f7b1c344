import random
from fractions import Fraction

import pytest

from qkzmod import selftest
from qkzmod.exactpoly import Polynomial, VarSpace
from qkzmod.tensorrep import (
    VectorPolynomial,
    VerificationReport,
    apply_cyclic,
    apply_e,
    apply_f,
    apply_h,
    apply_permutation,
    matmul,
    pr_cleared_action,
    qkz_cleared_action,
    qkz_matrix,
    subsets,
)

Z2, Z3 = VarSpace(0, 2), VarSpace(0, 3)


def basis(n, I, space=None, c=1):
    return VectorPolynomial.basis(n, I, space or VarSpace(0, n), c)


def test_subsets_order():
    assert subsets(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert subsets(4, 0) == [()]


def test_vector_validation():
    with pytest.raises(ValueError):
        VectorPolynomial(3, 1, Z3, {(1, 2): Polynomial.one(Z3)})
    with pytest.raises(ValueError):
        VectorPolynomial(3, 1, Z3, {(4,): Polynomial.one(Z3)})
    v = VectorPolynomial(3, 1, Z3, {(1,): Polynomial.one(Z3)})
    assert (v - v).is_zero()


def test_json_roundtrip():
    z1 = Polynomial.z(Z3, 1)
    v = VectorPolynomial(3, 2, Z3, {(1, 3): 3 * z1 - 1, (1, 2): Polynomial.one(Z3)})
    data = v.to_json()
    assert [c["I"] for c in data["coords"]] == [[1, 2], [1, 3]]
    assert VectorPolynomial.from_json(data) == v


def test_e_examples():
    assert apply_e(basis(2, (1,))) == basis(2, ())
    total = basis(3, (1,)) + basis(3, (2,)) + basis(3, (3,))
    assert apply_e(total) == basis(3, (), c=3)
    assert apply_e(VectorPolynomial.zero(3, 1, Z3)).is_zero()
    with pytest.raises(ValueError):
        apply_e(basis(3, ()))


def test_permutation_examples():
    assert apply_permutation(basis(2, (1,)), 1, 2) == basis(2, (2,))
    assert apply_permutation(basis(2, (1, 2)), 1, 2) == basis(2, (1, 2))
    with pytest.raises(ValueError):
        apply_permutation(basis(2, (1,)), 1, 1)


def test_cyclic_matches_composed_swaps():
    # P^{(1,2)} P^{(2,3)} with the right factor acting first sends v_{1} to v_{2}
    v = basis(3, (1,))
    composed = apply_permutation(apply_permutation(v, 2, 3), 1, 2)
    assert apply_cyclic(v) == composed == basis(3, (2,))
    for n in (2, 3, 4, 5):
        for l in range(n + 1):
            for I in subsets(n, l):
                w = basis(n, I)
                expected = w
                for a in range(n - 1, 0, -1):
                    expected = apply_permutation(expected, a, a + 1)
                assert apply_cyclic(w) == expected
                # inverse cycle acts as the relabelling I -> mu^{-1} I
                moved = tuple(sorted(n if a == 1 else a - 1 for a in I))
                back = w
                for a in range(1, n):
                    back = apply_permutation(back, a, a + 1)
                assert back == basis(n, moved)


def test_permutation_involution_and_weight():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 5)
        l = rng.randint(0, n)
        a, b = rng.sample(range(1, n + 1), 2)
        I = rng.choice(subsets(n, l))
        v = basis(n, I, c=rng.randint(1, 9))
        w = apply_permutation(v, a, b)
        assert w.l == v.l
        assert apply_permutation(w, a, b) == v


def test_pr_action_examples():
    z = [None] + [Polynomial.z(Z3, a) for a in (1, 2, 3)]
    v = basis(3, (3,), Z3, z[3])
    assert pr_cleared_action(v, 1) == v.scale(z[1] - z[2] - 1)
    z1, z2 = Polynomial.z(Z2, 1), Polynomial.z(Z2, 2)
    assert pr_cleared_action(basis(2, (1,)), 1) == basis(2, (2,), Z2, z1 - z2) - basis(2, (1,))
    assert pr_cleared_action(VectorPolynomial.zero(2, 1, Z2), 1).is_zero()


def test_qkz_action_examples():
    Z1 = VarSpace(0, 1)
    v = basis(1, (1,), Z1)
    assert qkz_cleared_action(v, 1, 2) == (v, Polynomial.one(Z1))
    z1, z2 = Polynomial.z(Z2, 1), Polynomial.z(Z2, 2)
    num, den = qkz_cleared_action(basis(2, (1,)), 1, 3)
    assert num == basis(2, (1,), Z2, z1 - z2) - basis(2, (2,))
    assert den == z1 - z2 - 1
    _, den2 = qkz_cleared_action(basis(2, (1,)), 2, 3)
    assert den2 == z2 - z1 - 3 - 1


def test_yang_baxter_and_unitarity():
    assert selftest.yang_baxter()
    assert selftest.unitarity()


def test_sl2_relations():
    assert selftest.sl2_relations(5)
    space = VarSpace(0, 0)
    for n in (3, 4):
        for l in range(2, n + 1):
            for I in subsets(n, l):
                x = basis(n, I, space)
                ee = apply_e(apply_e(x))
                assert n - 2 * ee.l == n - 2 * l + 4
                # [h, e] = 2e
                assert apply_h(apply_e(x)) - apply_e(apply_h(x)) == apply_e(x).scale(2)


def _shifted(point, a, kappa):
    p = list(point)
    p[a - 1] -= kappa
    return p


@pytest.mark.parametrize("n", [2, 3])
def test_flatness(n):
    """``K_a(.., z_b - kappa, ..) K_b(z) = K_b(.., z_a - kappa, ..) K_a(z)``."""
    rng = random.Random(n)
    kappa = 3
    checked = 0
    while checked < 6:
        point = [Fraction(rng.randint(-40, 40)) for _ in range(n)]
        for l in range(n + 1):
            for a in range(1, n + 1):
                for b in range(a + 1, n + 1):
                    try:
                        lhs = matmul(qkz_matrix(a, _shifted(point, b, kappa), kappa, n, l), qkz_matrix(b, point, kappa, n, l))
                        rhs = matmul(qkz_matrix(b, _shifted(point, a, kappa), kappa, n, l), qkz_matrix(a, point, kappa, n, l))
                    except ZeroDivisionError:
                        continue
                    assert lhs == rhs
        checked += 1


def test_flatness_detects_wrong_order():
    # reversing the factor order of K_1 breaks flatness, so the check has teeth
    n, kappa, l = 3, 3, 1
    point = [Fraction(5), Fraction(-11), Fraction(23)]

    def k1_reversed(pt):
        cols = {}
        for J in subsets(n, l):
            v = basis(n, J)
            den = Polynomial.one(v.space)
            for b in (3, 2):
                u = Polynomial.z(v.space, 1) - Polynomial.z(v.space, b)
                v = v.scale(u) - apply_permutation(v, 1, b)
                den = den * (u - 1)
            d = den.evaluate(pt)
            cols[J] = {I: p.evaluate(pt) / d for I, p in v.coords.items()}
        return cols

    good = matmul(qkz_matrix(1, _shifted(point, 2, kappa), kappa, n, l), qkz_matrix(2, point, kappa, n, l))
    bad = matmul(k1_reversed(_shifted(point, 2, kappa)), qkz_matrix(2, point, kappa, n, l))
    rhs = matmul(qkz_matrix(2, _shifted(point, 1, kappa), kappa, n, l), qkz_matrix(1, point, kappa, n, l))
    assert good == rhs
    assert bad != rhs


def test_report_semantics():
    rep = VerificationReport(5)
    rep.record("zero", basis(2, (1,), c=10))
    rep.record("nonzero", basis(2, (1,), c=7))
    assert rep.failures() == ["nonzero"]
    assert rep.to_json()[1]["witness"]["coords"][0]["poly"][0]["coef"] == "2"
    exact = VerificationReport(None)
    exact.record("x", basis(2, (1,), c=10))
    assert not exact.passed
