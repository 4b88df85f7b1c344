"""Mod-N polynomial solutions of the KZ differential equations.

Same shape as the qKZ construction with every string replaced by a plain
power: ``Phi0 = prod (t_i - z_a)^k prod (t_i - t_j)^{k'}`` and the weight
function uses the plain symmetrization.  Solutions are monomial-basis
coefficients of ``t^r`` for maximal ``r``; their top-degree parts match the
qKZ solutions.
"""
from __future__ import annotations

from typing import Sequence

from . import _kernel
from .diffcalc import ModParams, RSequence
from .exactpoly import LinearForm, Polynomial, VarSpace, homogeneous_component, partial_derivative
from .hyperqkz import check_dims, integrand_degree, permutations_of
from .tensorrep import VectorPolynomial, VerificationReport, apply_e, apply_permutation, subsets

PowerFactor = tuple  # (LinearForm, exponent)


def master_factors_kz(params: ModParams, n: int, l: int) -> list[PowerFactor]:
    space = VarSpace(l, n)
    out = [(LinearForm.build(space, t={i: 1}, z={a: -1}), params.k) for a in range(1, n + 1) for i in range(1, l + 1)]
    out += [(LinearForm.build(space, t={i: 1, j: -1}), params.kprime) for i in range(1, l + 1) for j in range(i + 1, l + 1)]
    return out


def integrand_kz_factors(I: Sequence[int], tau: Sequence[int], params: ModParams, n: int) -> list[PowerFactor]:
    """``Phi0 / prod_i (t_tau(i) - z_{a_i})`` as a list of powers."""
    l = len(I)
    space = VarSpace(l, n)
    dropped = {(tau[i], a) for i, a in enumerate(I)}
    out = []
    for a in range(1, n + 1):
        for i in range(1, l + 1):
            e = params.k - 1 if (i, a) in dropped else params.k
            out.append((LinearForm.build(space, t={i: 1}, z={a: -1}), e))
    out += [(LinearForm.build(space, t={i: 1, j: -1}), params.kprime) for i in range(1, l + 1) for j in range(i + 1, l + 1)]
    return out


def _expand(factors: Sequence[PowerFactor], space: VarSpace) -> Polynomial:
    result = Polynomial.one(space)
    for form, e in factors:
        result = result * form.to_polynomial() ** e
    return result


def master_polynomial_kz(params: ModParams, n: int, l: int) -> Polynomial:
    check_dims(n, l)
    return _expand(master_factors_kz(params, n, l), VarSpace(l, n))


def integrand_kz(params: ModParams, n: int, l: int) -> VectorPolynomial:
    check_dims(n, l)
    space = VarSpace(l, n)
    coords = {}
    for I in subsets(n, l):
        total = Polynomial.zero(space)
        for tau in permutations_of(l):
            total = total + _expand(integrand_kz_factors(I, tau, params, n), space)
        coords[I] = total
    return VectorPolynomial(n, l, space, coords)


def top_degree(params: ModParams, n: int, l: int, r: Sequence[int]) -> int:
    """``d_r = nlk + l(l-1)k'/2 - l - sum(r)``."""
    return integrand_degree(params, n, l) - sum(r)


def _require_maximal(r: Sequence[int], params: ModParams, l: int) -> RSequence:
    rs = RSequence.of(r, params.N)
    if len(rs.r) != l:
        raise ValueError(f"r={rs.r} must have length l={l}")
    bad = [x for x in rs.r if (x + 1) % params.N]
    if bad:
        raise ValueError(f"r={rs.r} is not maximal: entries {bad} are not -1 mod N={params.N}")
    return rs


def solve_kz_r(params: ModParams, n: int, l: int, r: Sequence[int], modulus: int | None = None) -> VectorPolynomial:
    """``f0_r(z) = sum_I [t^r] U0_I(t, z) v_I`` for a maximal ``r``."""
    check_dims(n, l)
    rs = _require_maximal(r, params, l)
    zs = VarSpace(0, n)
    coords = {}
    for I in subsets(n, l):
        summands = []
        for tau in permutations_of(l):
            flat = []
            for form, e in integrand_kz_factors(I, tau, params, n):
                flat += [(form.coeffs[:l], form.coeffs[l:], form.const)] * e
            summands.append(flat)
        # step 0: the string basis degenerates to the monomial basis
        terms = _kernel.coefficient_at(summands, rs.r, 0, n, modulus)
        coords[I] = Polynomial(zs, terms, _trusted=True)
    return VectorPolynomial(n, l, zs, coords)


def solve_kz_r_naive(params: ModParams, n: int, l: int, r: Sequence[int]) -> VectorPolynomial:
    """Reference route: expand ``U0`` and read the ``t^r`` monomial coefficient."""
    rs = _require_maximal(r, params, l)
    U = integrand_kz(params, n, l)
    zs = VarSpace(0, n)
    coords = {}
    for I, p in U.coords.items():
        coords[I] = Polynomial(zs, {e[l:]: c for e, c in p.terms.items() if e[:l] == rs.r})
    return VectorPolynomial(n, l, zs, coords)


def verify_kz_mod_n(f: VectorPolynomial, params: ModParams) -> VerificationReport:
    """Cleared KZ congruences and ``e f = 0`` modulo N.

    For each ``a``: ``kappa prod_{s != a}(z_a - z_s) df/dz_a`` against
    ``sum_{s != a} prod_{s' != a, s}(z_a - z_s') (P^{(a,s)} - 1) f``.
    """
    n, space = f.n, f.space
    report = VerificationReport(params.N)
    diffs = {(a, s): Polynomial.z(space, a) - Polynomial.z(space, s) for a in range(1, n + 1) for s in range(1, n + 1) if a != s}
    for a in range(1, n + 1):
        others = [s for s in range(1, n + 1) if s != a]
        full = Polynomial.one(space)
        for s in others:
            full = full * diffs[a, s]
        idx = space.z(a)
        lhs = f.map(lambda p: partial_derivative(p, idx)).scale(full * params.kappa)
        rhs = VectorPolynomial.zero(n, f.l, space)
        for s in others:
            cofactor = Polynomial.one(space)
            for s2 in others:
                if s2 != s:
                    cofactor = cofactor * diffs[a, s2]
            rhs = rhs + (apply_permutation(f, a, s) - f).scale(cofactor)
        report.record(f"KZ_{a}", lhs - rhs)
    if f.l:
        report.record("e", apply_e(f))
    return report


def compare_top_degree(f_qkz: VectorPolynomial, f_kz: VectorPolynomial, params: ModParams, r: Sequence[int]) -> VerificationReport:
    """Exact check that the degree-``d_r`` part of ``f_qkz`` equals ``f_kz``."""
    if (f_qkz.n, f_qkz.l) != (f_kz.n, f_kz.l):
        raise ValueError("solutions live in different weight spaces")
    _require_maximal(r, params, f_qkz.l)
    d = top_degree(params, f_qkz.n, f_qkz.l, r)
    report = VerificationReport(None)
    if d < 0:
        residue = f_kz
    else:
        residue = f_qkz.map(lambda p: homogeneous_component(p, d)) - f_kz
    report.record(f"top_degree_{d}", residue)
    return report
