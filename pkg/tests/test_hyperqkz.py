import random
import warnings
from collections import Counter
from fractions import Fraction
from math import comb

import pytest

from qkzmod.diffcalc import compute_params, pochhammer
from qkzmod.exactpoly import Polynomial, VarSpace, permute_z, substitute_shift
from qkzmod.hyperqkz import (
    TrivialSequenceWarning,
    cyclic_partner,
    integrand,
    integrand_degree,
    master_factors,
    master_polynomial,
    multiply_by_period,
    permutations_of,
    solve_r,
    solve_r_naive,
    string_product_value,
    t_degree,
    verify_integrand_symmetry,
    verify_qkz,
    verify_singular,
    verify_symmetric_qkz,
    weight_function_value,
    weight_summand,
    weight_summand_factors,
)
from qkzmod.tensorrep import VectorPolynomial, subsets

Z3 = VarSpace(0, 3)
y1, y2, y3 = (Polynomial.z(Z3, a) for a in (1, 2, 3))
P3, P5 = compute_params(3, 2), compute_params(5, 2)


def gold_b():
    return VectorPolynomial(3, 1, Z3, {
        (1,): 14 - y1 - 2 * y2 - 2 * y3,
        (2,): 10 - y2 - 2 * y1 - 2 * y3,
        (3,): 6 - y3 - 2 * y1 - 2 * y2,
    })


def test_master_examples():
    assert master_polynomial(P3, 3, 0) == 1
    S = VarSpace(1, 2)
    t, z1, z2 = Polynomial.t(S, 1), Polynomial.z(S, 1), Polynomial.z(S, 2)
    assert master_polynomial(P3, 2, 1) == (t - z1) * (t - z2)
    S = VarSpace(1, 3)
    t = Polynomial.t(S, 1)
    expected = Polynomial.one(S)
    for a in (1, 2, 3):
        za = Polynomial.z(S, a)
        expected = expected * (t - za) * (t - za - 2)
    phi = master_polynomial(P5, 3, 1)
    assert phi == expected and phi.degree() == 6


@pytest.mark.parametrize("N,kappa,n,l", [(5, 2, 3, 1), (7, 3, 4, 2), (5, 4, 4, 2)])
def test_master_symmetric_in_z(N, kappa, n, l):
    params = compute_params(N, kappa)
    phi = master_polynomial(params, n, l)
    assert phi.degree() == n * l * params.k + l * (l - 1) * params.kprime // 2
    for a in range(1, n):
        sigma = list(range(1, n + 1))
        sigma[a - 1], sigma[a] = sigma[a], sigma[a - 1]
        assert permute_z(phi, sigma) == phi
    assert permute_z(phi, tuple(range(2, n + 1)) + (1,)) == phi


def test_weight_summand_examples():
    S = VarSpace(1, 2)
    t, z2 = Polynomial.t(S, 1), Polynomial.z(S, 2)
    assert weight_summand((1,), (1,), P3, 2) == t - z2
    params = compute_params(7, 2)
    k, kappa = params.k, params.kappa
    S = VarSpace(1, 4)
    t = Polynomial.t(S, 1)
    a = 3
    expected = Polynomial.one(S)
    for s in range(1, 5):
        zs = Polynomial.z(S, s)
        if s < a:
            expected = expected * pochhammer(t - zs - kappa, k, kappa)
        elif s == a:
            expected = expected * pochhammer(t - zs - kappa, k - 1, kappa)
        else:
            expected = expected * pochhammer(t - zs, k, kappa)
    assert weight_summand((a,), (1,), params, 4) == expected


@pytest.mark.parametrize("N,kappa,n,l", [(5, 2, 3, 1), (7, 3, 4, 2), (13, 4, 5, 2), (9, 2, 5, 2)])
def test_string_census(N, kappa, n, l):
    params = compute_params(N, kappa)
    expected = Counter()
    expected[params.kprime] += comb(l, 2)
    expected[params.k] += l * (n - 1)
    expected[params.k - 1] += l
    for I in subsets(n, l):
        for tau in permutations_of(l):
            lengths = Counter(length for _, length in weight_summand_factors(I, tau, params, n))
            assert lengths == expected


@pytest.mark.parametrize("N,kappa,n,l", [(5, 2, 3, 1), (3, 2, 4, 2), (5, 4, 4, 2), (7, 6, 4, 2), (3, 1, 2, 1)])
def test_summand_equals_master_times_weight(N, kappa, n, l):
    params = compute_params(N, kappa)
    phi = master_polynomial(params, n, l)
    rng = random.Random(N * 100 + n)
    for I in subsets(n, l):
        for tau in permutations_of(l):
            U = weight_summand(I, tau, params, n)
            done = 0
            while done < 5:
                pt = [Fraction(rng.randint(-60, 60), rng.randint(1, 9)) for _ in range(l + n)]
                try:
                    w = weight_function_value(I, tau, params, n, pt)
                except ZeroDivisionError:
                    continue
                assert U.evaluate(pt) == phi.evaluate(pt) * w
                assert string_product_value(weight_summand_factors(I, tau, params, n), pt, kappa) == U.evaluate(pt)
                done += 1


@pytest.mark.parametrize("N,kappa,n,l", [(7, 3, 4, 2), (9, 4, 4, 2), (13, 5, 5, 2), (9, 5, 4, 2)])
def test_factored_summand_equals_master_times_weight(N, kappa, n, l):
    """Same identity on instances too large to expand, using factored values."""
    params = compute_params(N, kappa)
    rng = random.Random(N + kappa)
    for I in subsets(n, l):
        for tau in permutations_of(l):
            done = 0
            while done < 3:
                pt = [Fraction(rng.randint(-60, 60), rng.randint(1, 9)) for _ in range(l + n)]
                try:
                    w = weight_function_value(I, tau, params, n, pt)
                except ZeroDivisionError:
                    continue
                phi = string_product_value(master_factors(params, n, l), pt, kappa)
                assert string_product_value(weight_summand_factors(I, tau, params, n), pt, kappa) == phi * w
                done += 1


def test_weight_function_oracle_discriminates():
    # dropping the twist for inversions of tau breaks agreement
    params = compute_params(7, 3)
    n, l, I, tau = 4, 2, (1, 3), (2, 1)
    pt = [Fraction(1, 3), Fraction(5, 7), Fraction(2), Fraction(-3), Fraction(11, 2), Fraction(4)]
    U = weight_summand(I, tau, params, n)
    plain = weight_function_value(I, (1, 2), params, n, [pt[1], pt[0]] + pt[2:])
    assert U.evaluate(pt) != master_polynomial(params, n, l).evaluate(pt) * plain


def test_integrand_examples():
    assert integrand(P3, 3, 0).coords == {(): Polynomial.one(VarSpace(0, 3))}
    U3 = integrand(P3, 3, 1)
    U5 = integrand(P5, 3, 1)
    for a in (1, 2, 3):
        assert U3[(a,)].degree_in(0) == 2
        assert U5[(a,)].degree_in(0) == 5
    assert t_degree(P5, 3, 1) == 5 and integrand_degree(P5, 3, 1) == 5


def test_solve_gold():
    assert solve_r(P3, 3, 1, (2,)) == VectorPolynomial(3, 1, Z3, {(a,): Polynomial.one(Z3) for a in (1, 2, 3)})
    assert solve_r(P5, 3, 1, (4,)) == gold_b()


@pytest.mark.parametrize("N,kappa,n,l,r", [
    (3, 2, 2, 1, (2,)),
    (5, 2, 3, 1, (4,)),
    (5, 3, 3, 1, (4,)),
    (7, 3, 4, 1, (6,)),
    (9, 2, 3, 1, (2,)),
    (5, 4, 4, 2, (4, 4)),
    (5, 2, 4, 2, (4, 9)),
    (7, 6, 4, 2, (6, 6)),
    (3, 2, 4, 2, (2, 2)),
    (3, 2, 5, 2, (2, 5)),
])
def test_kernel_matches_naive(N, kappa, n, l, r):
    params = compute_params(N, kappa)
    fast = solve_r(params, n, l, r)
    assert fast == solve_r_naive(params, n, l, r)
    assert solve_r(params, n, l, r, modulus=N) == fast.reduce_mod(N)


def test_solution_degree_bound():
    for N, kappa, n, l, r in [(5, 2, 3, 1, (4,)), (7, 2, 4, 2, (6, 6)), (9, 4, 4, 2, (2, 5))]:
        params = compute_params(N, kappa)
        f = solve_r(params, n, l, r)
        assert f.degree() <= integrand_degree(params, n, l) - sum(r)


def test_trivial_r_flagged():
    with pytest.warns(TrivialSequenceWarning):
        f = solve_r(P5, 3, 1, (0,))
    assert f.reduce_mod(5).is_zero()
    with pytest.raises(ValueError):
        solve_r(P5, 3, 1, (4, 4))
    with pytest.raises(ValueError):
        solve_r(P5, 3, 2, (4, 4))


def test_verifiers_on_gold():
    for params, f in ((P3, solve_r(P3, 3, 1, (2,))), (P5, gold_b())):
        for rep in (verify_symmetric_qkz(f, params), verify_qkz(f, params), verify_singular(f, params.N)):
            assert rep.passed, rep.failures()
        assert len(verify_symmetric_qkz(f, params).entries) == 3


def test_verifiers_on_zero():
    zero = VectorPolynomial.zero(3, 1, Z3)
    assert verify_symmetric_qkz(zero, P5).passed
    assert verify_qkz(zero, P5).passed
    assert verify_singular(zero, 5).passed


def test_perturbation_breaks_cyclic():
    f = gold_b() + VectorPolynomial.basis(3, (1,), Z3, 1)
    rep = verify_symmetric_qkz(f, P5)
    assert "cyclic" in rep.failures()
    witness = next(e.witness for e in rep if e.equation == "cyclic")
    assert not witness.is_zero()


def test_random_non_solution_fails_qkz():
    rng = random.Random(4)
    f = VectorPolynomial(3, 1, Z3, {(a,): rng.randint(1, 4) * y1 ** rng.randint(1, 2) * y3 for a in (1, 2, 3)})
    assert not verify_qkz(f, P5).passed


def test_singular_examples():
    f3 = solve_r(P3, 3, 1, (2,))
    rep = verify_singular(f3, 3)
    assert rep.passed
    from qkzmod.tensorrep import apply_e
    assert apply_e(f3) == VectorPolynomial.basis(3, (), Z3, 3)
    assert apply_e(gold_b()) == VectorPolynomial.basis(3, (), Z3, 30 - 5 * (y1 + y2 + y3))
    Z2 = VarSpace(0, 2)
    g = VectorPolynomial.basis(2, (1,), Z2) - VectorPolynomial.basis(2, (2,), Z2)
    assert apply_e(g).is_zero()
    assert not verify_singular(VectorPolynomial.basis(2, (1,), Z2), 5).passed


@pytest.mark.parametrize("N,kappa,n,l", [(5, 2, 3, 1), (3, 2, 4, 2), (5, 4, 4, 2), (7, 6, 4, 2), (9, 2, 3, 1)])
def test_integrand_presymmetry(N, kappa, n, l):
    assert verify_integrand_symmetry(compute_params(N, kappa), n, l).passed


@pytest.mark.parametrize("N,kappa,n,l", [(5, 2, 3, 1), (3, 2, 5, 2), (5, 4, 4, 2), (7, 6, 4, 2), (13, 12, 4, 2)])
def test_cyclic_shift_identity(N, kappa, n, l):
    params = compute_params(N, kappa)
    space = VarSpace(l, n)
    cycle = tuple(range(2, n + 1)) + (1,)
    for I in subsets(n, l):
        for tau in permutations_of(l):
            U = weight_summand(I, tau, params, n)
            moved, tau2, b = cyclic_partner(I, tau, n)
            lhs = substitute_shift(U, space.z(1), -kappa)
            if b is not None:
                lhs = substitute_shift(lhs, space.t(b), -kappa)
            rhs = permute_z(weight_summand(moved, tau2, params, n), cycle)
            assert lhs == rhs, (I, tau)


@pytest.mark.parametrize("N,kappa,n", [(5, 2, 3), (7, 3, 4), (13, 6, 3), (9, 4, 5)])
def test_singularity_identity_l1(N, kappa, n):
    params = compute_params(N, kappa)
    phi = master_polynomial(params, n, 1)
    total = Polynomial.zero(phi.space)
    for a in range(1, n + 1):
        total = total + weight_summand((a,), (1,), params, n)
    assert substitute_shift(phi, 0, -kappa) - phi == total * (-kappa * params.k)


def test_multiply_by_period():
    f = solve_r(P5, 3, 1, (4,))
    assert multiply_by_period(f, Polynomial.one(Z3), (4,), P5) == f
    # r = (4) is maximal, so M_r = N = 5
    g = pochhammer(y1, 5, 2)
    h = multiply_by_period(f, g, (4,), P5)
    # a periodic multiplier keeps the difference equations; the transposition
    # equations additionally need it to be symmetric
    assert verify_qkz(h, P5).passed and verify_singular(h, 5).passed
    sym = pochhammer(y1, 5, 2) * pochhammer(y2, 5, 2) * pochhammer(y3, 5, 2)
    assert verify_symmetric_qkz(multiply_by_period(f, sym, (4,), P5), P5).passed
    with pytest.raises(ValueError, match="z_1"):
        multiply_by_period(f, y1, (4,), P5)
