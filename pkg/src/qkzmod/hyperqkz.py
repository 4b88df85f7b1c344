"""N-hypergeometric polynomial solutions of the symmetric qKZ equations mod N.

The integrand ``U(t, z) = sum_I sum_tau U_I^tau(t, z) v_I`` is assembled
from strings in ``t - z`` and ``t_i - t_j``; a solution is the coordinate-wise
difference r-integral ``f_r(z) = {U}_r``.  The verifiers check the cleared
polynomial congruences modulo ``N``.
"""
from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from . import _kernel
from .diffcalc import ModParams, RSequence, difference_r_integral, is_n_constant, pochhammer
from .exactpoly import LinearForm, Polynomial, VarSpace, permute_z, substitute_shift, swap_z
from .tensorrep import (
    VectorPolynomial,
    VerificationReport,
    apply_cyclic,
    apply_e,
    pr_cleared_action,
    qkz_cleared_action,
    qkz_denominator_factors,
    subsets,
)

StringFactor = tuple  # (LinearForm, length)


class TrivialSequenceWarning(UserWarning):
    """The requested r-integral vanishes identically modulo N."""


def check_dims(n: int, l: int):
    if n < 1 or l < 0 or 2 * l > n:
        raise ValueError(f"need n >= 1 and 0 <= 2l <= n, got n={n}, l={l}")


def permutations_of(l: int) -> list[tuple[int, ...]]:
    """``S_l`` in lexicographic one-line notation (1-based)."""
    return list(permutations(range(1, l + 1)))


def integrand_degree(params: ModParams, n: int, l: int) -> int:
    """Total degree of every summand ``U_I^tau``: ``nlk + l(l-1)k'/2 - l``."""
    return n * l * params.k + l * (l - 1) * params.kprime // 2 - l


def t_degree(params: ModParams, n: int, l: int) -> int:
    """Degree of the integrand in a single ``t_i``."""
    if l == 0:
        return 0
    return n * params.k - 1 + (params.kprime if l > 1 else 0)


# ---------------------------------------------------------------------------
# master polynomial and weight summands as string products

def master_factors(params: ModParams, n: int, l: int) -> list[StringFactor]:
    space = VarSpace(l, n)
    out = []
    for a in range(1, n + 1):
        for i in range(1, l + 1):
            out.append((LinearForm.build(space, t={i: 1}, z={a: -1}), params.k))
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            out.append((LinearForm.build(space, t={i: 1, j: -1}, const=1), params.kprime))
    return out


def weight_summand_factors(I: Sequence[int], tau: Sequence[int], params: ModParams, n: int) -> list[StringFactor]:
    """The strings whose product is ``U_I^tau``.

    ``C(l,2)`` strings of length ``k'``, ``l(n-1)`` of length ``k`` and ``l`` of
    length ``k - 1``, in that order.
    """
    I, tau = tuple(I), tuple(tau)
    l = len(I)
    if sorted(tau) != list(range(1, l + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{l}")
    check_dims(n, l)
    space = VarSpace(l, n)
    kappa, k = params.kappa, params.k
    out = []
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            shift = 0 if tau[i - 1] < tau[j - 1] else -kappa
            out.append((LinearForm.build(space, t={i: 1, j: -1}, const=1 + shift), params.kprime))
    for i, a_i in enumerate(I, start=1):
        ti = tau[i - 1]
        for s in range(1, n + 1):
            if s < a_i:
                out.append((LinearForm.build(space, t={ti: 1}, z={s: -1}, const=-kappa), k))
            elif s > a_i:
                out.append((LinearForm.build(space, t={ti: 1}, z={s: -1}), k))
        out.append((LinearForm.build(space, t={ti: 1}, z={a_i: -1}, const=-kappa), k - 1))
    return out


def expand_strings(factors: Sequence[StringFactor], kappa: int, space: VarSpace) -> Polynomial:
    result = Polynomial.one(space)
    for form, length in factors:
        result = result * pochhammer(form, length, kappa)
    return result


def string_product_value(factors: Sequence[StringFactor], point: Sequence, kappa: int) -> Fraction:
    """Exact value of a product of strings at a rational point."""
    value = Fraction(1)
    for form, length in factors:
        x = form.evaluate(point)
        for i in range(length):
            value *= x - i * kappa
    return value


def master_polynomial(params: ModParams, n: int, l: int) -> Polynomial:
    check_dims(n, l)
    return expand_strings(master_factors(params, n, l), params.kappa, VarSpace(l, n))


def weight_summand(I: Sequence[int], tau: Sequence[int], params: ModParams, n: int) -> Polynomial:
    return expand_strings(weight_summand_factors(I, tau, params, n), params.kappa, VarSpace(len(I), n))


def weight_function_value(I: Sequence[int], tau: Sequence[int], params: ModParams, n: int, point: Sequence) -> Fraction:
    """Exact value of the rational weight function ``w_I^tau`` at ``(t, z)``.

    ``w_I^tau = tau( prod_i 1/(t_i - z_{a_i}) prod_{j < a_i} (t_i - z_j - kappa k)/(t_i - z_j) )``
    with ``(tau g)(t) = g(t_tau(1), ...) prod_{i<j, tau(i)>tau(j)} (t_i - t_j + 1 - kappa k')/(t_i - t_j + 1)``.
    """
    l = len(I)
    t = [Fraction(x) for x in point[:l]]
    z = [Fraction(x) for x in point[l:]]
    kk, kkp = params.kappa * params.k, params.kappa * params.kprime
    value = Fraction(1)
    for i, a_i in enumerate(I):
        ti = t[tau[i] - 1]
        value /= ti - z[a_i - 1]
        for j in range(a_i - 1):
            value *= (ti - z[j] - kk) / (ti - z[j])
    for i in range(l):
        for j in range(i + 1, l):
            if tau[i] > tau[j]:
                value *= (t[i] - t[j] + 1 - kkp) / (t[i] - t[j] + 1)
    return value


# ---------------------------------------------------------------------------
# integrand and solutions

def integrand(params: ModParams, n: int, l: int) -> VectorPolynomial:
    """Fully expanded ``U(t, z)``; only practical for small instances."""
    check_dims(n, l)
    space = VarSpace(l, n)
    coords = {}
    for I in subsets(n, l):
        total = Polynomial.zero(space)
        for tau in permutations_of(l):
            total = total + weight_summand(I, tau, params, n)
        coords[I] = total
    return VectorPolynomial(n, l, space, coords)


def _kernel_factors(factors: Sequence[StringFactor], kappa: int, l: int) -> list[_kernel.Factor]:
    out = []
    for form, length in factors:
        tc, zc = form.coeffs[:l], form.coeffs[l:]
        for i in range(length):
            out.append((tc, zc, form.const - i * kappa))
    return out


def _rsequence(r: Sequence[int], params: ModParams, l: int) -> RSequence:
    rs = RSequence.of(r, params.N)
    if len(rs.r) != l:
        raise ValueError(f"r={rs.r} must have length l={l}")
    if rs.trivial and l:
        warnings.warn(f"r={rs.r} is trivial for N={params.N}: the integral vanishes mod N", TrivialSequenceWarning, stacklevel=3)
    return rs


def solve_r(params: ModParams, n: int, l: int, r: Sequence[int], modulus: int | None = None) -> VectorPolynomial:
    """``f_r(z) = {U(t, z)}_r``, the difference r-integral of the integrand.

    Coordinates are exact integers unless ``modulus`` is given, in which case
    they are returned reduced modulo ``modulus`` (which must be a multiple of N
    for the result to be meaningful mod N).
    """
    check_dims(n, l)
    rs = _rsequence(r, params, l)
    zs = VarSpace(0, n)
    coords = {}
    for I in subsets(n, l):
        summands = [_kernel_factors(weight_summand_factors(I, tau, params, n), params.kappa, l) for tau in permutations_of(l)]
        terms = _kernel.coefficient_at(summands, rs.r, params.kappa, n, modulus)
        p = Polynomial(zs, terms, _trusted=True) * rs.N_r
        coords[I] = p.reduce_mod(modulus) if modulus else p
    return VectorPolynomial(n, l, zs, coords)


def solve_r_naive(params: ModParams, n: int, l: int, r: Sequence[int]) -> VectorPolynomial:
    """Reference route: expand the integrand, convert to strings, read off ``r``."""
    U = integrand(params, n, l)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialSequenceWarning)
        _rsequence(r, params, l)
    coords = {I: difference_r_integral(p, r, params) for I, p in U.coords.items()}
    return VectorPolynomial(n, l, VarSpace(0, n), coords)


# ---------------------------------------------------------------------------
# verification

def _z_map(v: VectorPolynomial, fn) -> VectorPolynomial:
    return v.map(fn)


def verify_symmetric_qkz(f: VectorPolynomial, params: ModParams, equations: str = "all") -> VerificationReport:
    """Check the symmetric qKZ system modulo N.

    For ``a < n``: ``(z_a - z_{a+1} - 1) f(.., z_{a+1}, z_a, ..) = ((z_a - z_{a+1}) P^{(a,a+1)} - 1) f(z)``.
    Cyclic equation: ``f(z_1 - kappa, z_2, .., z_n) = P^{(mu)} f(z_2, .., z_n, z_1)``.
    ``equations="swaps"`` skips the cyclic one (used at integrand level).
    """
    n, space = f.n, f.space
    report = VerificationReport(params.N)
    f = f.reduce_mod(params.N)
    for a in range(1, n):
        u = Polynomial.z(space, a) - Polynomial.z(space, a + 1)
        lhs = _z_map(f, lambda p: swap_z(p, a, a + 1)).scale(u - 1)
        report.record(f"swap_{a}", lhs - pr_cleared_action(f, a))
    if equations == "all":
        shifted = _z_map(f, lambda p: substitute_shift(p, space.z(1), -params.kappa))
        cycle = tuple(range(2, n + 1)) + (1,)
        rotated = apply_cyclic(_z_map(f, lambda p: permute_z(p, cycle)))
        report.record("cyclic", shifted - rotated)
    return report


def verify_qkz(f: VectorPolynomial, params: ModParams) -> VerificationReport:
    """``den_a(z) f(.., z_a - kappa, ..) = num_a(f)`` modulo N for every ``a``."""
    N = params.N
    report = VerificationReport(N)
    # only residues mod N matter, so reduce early and after every factor
    f = f.reduce_mod(N)
    for a in range(1, f.n + 1):
        num, _ = qkz_cleared_action(f, a, params.kappa, modulus=N)
        idx = f.space.z(a)
        lhs = _z_map(f, lambda p: substitute_shift(p, idx, -params.kappa)).reduce_mod(N)
        for u in qkz_denominator_factors(a, params.kappa, f.space, f.n):
            lhs = lhs.scale(u - 1).reduce_mod(N)
        report.record(f"K_{a}", lhs - num)
    return report


def verify_singular(f: VectorPolynomial, N: int) -> VerificationReport:
    report = VerificationReport(N)
    if f.l == 0:
        report.record("e", VectorPolynomial.zero(f.n, 0, f.space))
    else:
        report.record("e", apply_e(f))
    return report


def verify_integrand_symmetry(params: ModParams, n: int, l: int, U: VectorPolynomial | None = None) -> VerificationReport:
    """The transposition equations already hold for ``U(t, z)`` before integrating."""
    U = U if U is not None else integrand(params, n, l)
    return verify_symmetric_qkz(U, params, equations="swaps")


def multiply_by_period(f: VectorPolynomial, g: Polynomial, r: Sequence[int], params: ModParams) -> VectorPolynomial:
    """``g * f_r`` for an ``M_r``-constant ``g``; other multipliers are rejected.

    Any such ``g`` keeps the qKZ system and singularity.  The transposition
    equations also need ``g`` symmetric in ``z``.
    """
    rs = RSequence.of(r, params.N)
    if g.space != f.space:
        raise ValueError(f"multiplier lives in {g.space}, expected {f.space}")
    for a in range(1, f.n + 1):
        if not is_n_constant(g, g.space.z(a), rs.M_r, params.kappa):
            raise ValueError(f"multiplier is not an M_r-constant (M_r={rs.M_r}) in z_{a}")
    return f.scale(g)


def cyclic_partner(I: Sequence[int], tau: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...], int | None]:
    """``(mu^{-1} I, tau', b)`` for the cyclic-shift identity of the summands.

    With ``1 in I`` the variable ``t_b``, ``b = tau(1)``, is shifted and
    ``tau'(i) = tau(i + 1)`` (indices mod l); otherwise nothing is shifted.
    """
    I, tau = tuple(I), tuple(tau)
    moved = tuple(sorted(n if a == 1 else a - 1 for a in I))
    if 1 not in I:
        return moved, tau, None
    return moved, tau[1:] + tau[:1], tau[0]
