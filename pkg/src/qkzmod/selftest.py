"""Invariant battery shared by ``qkzmod selftest`` and the test suite.

Every check returns ``True`` on success.  Suites are lists of
``(name, thunk)`` pairs so callers can time and report them individually.
"""
from __future__ import annotations

import random
import time
import warnings
from math import comb
from typing import Callable, Iterable

from .diffcalc import (
    compute_params,
    difference_r_integral,
    discrete_derivative,
    from_string_basis,
    is_n_constant,
    pochhammer,
    to_string_basis,
)
from .exactpoly import Polynomial, VarSpace, reduce_mod, substitute_shift
from .grid import Case, cases, units
from .hyperqkz import TrivialSequenceWarning, solve_r, verify_qkz, verify_singular, verify_symmetric_qkz
from .kzlimit import compare_top_degree, solve_kz_r, verify_kz_mod_n
from .tensorrep import VectorPolynomial, apply_e, apply_f, apply_h, apply_permutation, subsets

Check = Callable[[], bool]


def random_polynomial(rng: random.Random, space: VarSpace, degree: int, nterms: int, bound: int = 50) -> Polynomial:
    """Random polynomial of total degree at most ``degree``."""
    terms = {}
    for _ in range(nterms):
        left = degree
        exp = []
        for _ in range(space.nvars):
            e = rng.randint(0, left)
            exp.append(e)
            left -= e
        rng.shuffle(exp)
        terms[tuple(exp)] = rng.randint(-bound, bound)
    return Polynomial(space, terms)


# ---------------------------------------------------------------------------
# algebraic identities

def ring_axioms(rng: random.Random, trials: int = 20) -> bool:
    space = VarSpace(1, 2)
    for _ in range(trials):
        p, q, s = (random_polynomial(rng, space, 4, 5) for _ in range(3))
        if (p + q) * s != p * s + q * s or (p * q) * s != p * (q * s) or p * q != q * p:
            return False
        if reduce_mod(p * q, 7) != reduce_mod(reduce_mod(p, 7) * reduce_mod(q, 7), 7):
            return False
        if substitute_shift(substitute_shift(p, 0, 3), 0, -3) != p:
            return False
    return True


def string_roundtrip(rng: random.Random, trials: int = 20) -> bool:
    space = VarSpace(2, 1)
    for _ in range(trials):
        p = random_polynomial(rng, space, 6, 6)
        kappa = rng.randint(1, 12)
        if from_string_basis(to_string_basis(p, kappa)) != p:
            return False
    return True


def vandermonde(max_m: int = 8, kappas: Iterable[int] = (1, 2, 3, 5)) -> bool:
    """``[t + z]_m = sum_{i=0}^m C(m, i) [t]_i [z]_{m-i}``."""
    space = VarSpace(1, 1)
    t, z = Polynomial.t(space, 1), Polynomial.z(space, 1)
    zs = VarSpace(0, 1)
    for kappa in kappas:
        for m in range(max_m + 1):
            e = to_string_basis(pochhammer(t + z, m, kappa), kappa)
            for i in range(m + 1):
                expected = pochhammer(Polynomial.z(zs, 1), m - i, kappa) * comb(m, i)
                if e.coefficient((i,)) != expected:
                    return False
            if any(i > m for (i,) in e.support()):
                return False
    return True


def derivative_on_strings(max_m: int = 8, kappas: Iterable[int] = (1, 2, 3)) -> bool:
    """``D [t]_m = m kappa [t - kappa]_{m-1}``."""
    space = VarSpace(1, 0)
    t = Polynomial.t(space, 1)
    for kappa in kappas:
        for m in range(1, max_m + 1):
            if discrete_derivative(pochhammer(t, m, kappa), 0, kappa) != pochhammer(t - kappa, m - 1, kappa) * (m * kappa):
                return False
    return True


def leibniz(rng: random.Random, trials: int = 20) -> bool:
    """``D(fg) = (Df) g + f(t - kappa) Dg``."""
    space = VarSpace(2, 1)
    for _ in range(trials):
        f, g = random_polynomial(rng, space, 5, 5), random_polynomial(rng, space, 5, 5)
        kappa, j = rng.randint(1, 9), rng.randrange(2)
        lhs = discrete_derivative(f * g, j, kappa)
        rhs = discrete_derivative(f, j, kappa) * g + substitute_shift(f, j, -kappa) * discrete_derivative(g, j, kappa)
        if lhs != rhs:
            return False
    return True


def little_fermat(primes: Iterable[int] = (3, 5, 7)) -> bool:
    """``[t]_p = t^p - t`` modulo ``p``, for every unit step."""
    space = VarSpace(1, 0)
    t = Polynomial.t(space, 1)
    for p in primes:
        for kappa in range(1, p):
            if reduce_mod(pochhammer(t, p, kappa) - (t ** p - t), p):
                return False
    return True


def n_constant_sweep(moduli: Iterable[int] = (3, 4, 5, 6, 8, 9, 12)) -> bool:
    """``b [t]_a`` is an N-constant iff ``a b = 0 mod N``, for ``a, b < 2N``."""
    space = VarSpace(1, 0)
    t = Polynomial.t(space, 1)
    for N in moduli:
        for kappa in units(N):
            for a in range(2 * N):
                s = pochhammer(t, a, kappa)
                for b in range(2 * N):
                    if is_n_constant(s * b, 0, N, kappa) != ((a * b) % N == 0):
                        return False
    return True


def annihilation(rng: random.Random, trials: int, moduli=(3, 4, 5, 6, 7, 8, 9, 12, 13)) -> bool:
    """``{D_{t_j} p}_r = 0 mod N`` for random ``p``, every ``j`` and supported ``r``."""
    for _ in range(trials):
        l = rng.randint(1, 2)
        space = VarSpace(l, rng.randint(0, 2))
        p = random_polynomial(rng, space, rng.randint(1, 10), rng.randint(1, 8))
        N = rng.choice(moduli)
        params = compute_params(N, rng.choice(units(N)))
        for j in range(l):
            d = discrete_derivative(p, j, params.kappa)
            for r in to_string_basis(d, params).support():
                if reduce_mod(difference_r_integral(d, r, params), N):
                    return False
    return True


def _r_op(v: VectorPolynomial, a: int, b: int, u: Polynomial) -> VectorPolynomial:
    return v.scale(u) - apply_permutation(v, a, b)


def yang_baxter() -> bool:
    """Cleared ``R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)`` on all weight spaces."""
    space = VarSpace(0, 2)
    u, v = Polynomial.z(space, 1), Polynomial.z(space, 2)
    for l in range(4):
        for I in subsets(3, l):
            x = VectorPolynomial.basis(3, I, space)
            lhs = _r_op(_r_op(_r_op(x, 2, 3, v), 1, 3, u), 1, 2, u - v)
            rhs = _r_op(_r_op(_r_op(x, 1, 2, u - v), 1, 3, u), 2, 3, v)
            if lhs != rhs:
                return False
    return True


def unitarity() -> bool:
    """Cleared ``R12(u) R21(-u) = 1``: ``(u - P)(-u - P) = (u - 1)(-u - 1)``."""
    space = VarSpace(0, 1)
    u = Polynomial.z(space, 1)
    for l in range(3):
        for I in subsets(2, l):
            x = VectorPolynomial.basis(2, I, space)
            if _r_op(_r_op(x, 2, 1, -u), 1, 2, u) != x.scale((u - 1) * (-u - 1)):
                return False
    return True


def sl2_relations(n: int = 4) -> bool:
    """``[e, f] = h`` on every weight space of ``V^{(x)n}``."""
    space = VarSpace(0, 0)
    for l in range(1, n):
        for I in subsets(n, l):
            x = VectorPolynomial.basis(n, I, space)
            if apply_e(apply_f(x)) - apply_f(apply_e(x)) != apply_h(x):
                return False
    return True


# ---------------------------------------------------------------------------
# solution checks

def qkz_case(case: Case, fault: bool = False) -> bool:
    """Solve mod N and run the three qKZ verifiers."""
    p = case.params
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialSequenceWarning)
        f = solve_r(p, case.n, case.l, case.r, modulus=p.N)
    if fault:
        f = f + VectorPolynomial.basis(case.n, subsets(case.n, case.l)[0], f.space, 1)
    return verify_symmetric_qkz(f, p).passed and verify_qkz(f, p).passed and verify_singular(f, p.N).passed


def kz_case(case: Case) -> bool:
    f0 = solve_kz_r(case.params, case.n, case.l, case.r, modulus=case.params.N)
    return verify_kz_mod_n(f0, case.params).passed


def top_degree_case(case: Case) -> bool:
    p = case.params
    f = solve_r(p, case.n, case.l, case.r)
    f0 = solve_kz_r(p, case.n, case.l, case.r)
    return compare_top_degree(f, f0, p, case.r).passed


def gold_examples() -> bool:
    space = VarSpace(0, 3)
    z = [None] + [Polynomial.z(space, a) for a in (1, 2, 3)]
    a = solve_r(compute_params(3, 2), 3, 1, (2,))
    want_a = VectorPolynomial(3, 1, space, {(i,): Polynomial.one(space) for i in (1, 2, 3)})
    b = solve_r(compute_params(5, 2), 3, 1, (4,))
    want_b = VectorPolynomial(3, 1, space, {
        (1,): 14 - z[1] - 2 * z[2] - 2 * z[3],
        (2,): 10 - z[2] - 2 * z[1] - 2 * z[3],
        (3,): 6 - z[3] - 2 * z[1] - 2 * z[2],
    })
    return a == want_a and b == want_b


# ---------------------------------------------------------------------------
# battery

SELFTEST_BUDGET = {"small": None, "default": 20_000}


def suites(grid: str = "default", seed: int = 0, inject_fault: bool = False) -> list[tuple[str, list[tuple[str, Check]]]]:
    """Named suites of named checks.

    The ``default`` selftest grid keeps the cases whose dense output bound is
    within ``SELFTEST_BUDGET``; ``small`` runs its grid in full.
    """
    rng = random.Random(seed)
    budget = SELFTEST_BUDGET[grid]
    qkz_cases = [c for c in cases(grid) if budget is None or c.output_size() <= budget]
    maximal = [c for c in qkz_cases if c.maximal]
    return [
        ("exactpoly", [("ring_axioms", lambda: ring_axioms(rng))]),
        ("diffcalc", [
            ("string_roundtrip", lambda: string_roundtrip(rng)),
            ("vandermonde", vandermonde),
            ("derivative_on_strings", derivative_on_strings),
            ("leibniz", lambda: leibniz(rng)),
            ("little_fermat", little_fermat),
            ("n_constant_sweep", n_constant_sweep),
            ("annihilation", lambda: annihilation(rng, 50)),
        ]),
        ("tensorrep", [("yang_baxter", yang_baxter), ("unitarity", unitarity), ("sl2", sl2_relations)]),
        ("hyperqkz", [("gold_examples", gold_examples)]
            + [(c.label(), lambda c=c, i=i: qkz_case(c, fault=inject_fault and i == 0)) for i, c in enumerate(qkz_cases)]),
        ("kzlimit", [(c.label(), lambda c=c: kz_case(c)) for c in maximal]
            + [("top " + c.label(), lambda c=c: top_degree_case(c)) for c in maximal if c.output_size() <= 2000]),
    ]


def run(grid: str = "default", seed: int = 0, inject_fault: bool = False) -> list[dict]:
    results = []
    for name, checks in suites(grid, seed, inject_fault):
        start = time.perf_counter()
        failed = [label for label, check in checks if not check()]
        results.append({
            "suite": name,
            "checks": len(checks),
            "failed": failed,
            "pass": not failed,
            "seconds": round(time.perf_counter() - start, 3),
        })
    return results
