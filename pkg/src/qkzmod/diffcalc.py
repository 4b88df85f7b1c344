"""Difference calculus modulo N: strings, discrete derivatives, r-integrals.

The string ``[x]_m = x (x - kappa) ... (x - (m-1) kappa)`` is the discrete
analogue of ``x^m``.  Products of strings in the ``t`` variables form a
``Z[z]``-basis of ``Z[t, z]``; the difference r-integral reads off the
coefficient at a multi-index ``r`` and scales it by ``N_r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .exactpoly import LinearForm, Polynomial, VarSpace, reduce_mod, substitute_shift

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class ModParams:
    """Arithmetic context ``(N, kappa, k, k')``.

    ``k`` and ``k'`` are the unique integers in ``(0, N)`` with
    ``kappa*k = -1`` and ``kappa*k' = 2`` modulo ``N``.
    """

    N: int
    kappa: int
    k: int
    kprime: int

    def __post_init__(self):
        N, kappa = self.N, self.kappa
        if (kappa * self.k + 1) % N or (kappa * self.kprime - 2) % N:
            raise ValueError(f"k={self.k}, k'={self.kprime} do not solve the congruences for N={N}, kappa={kappa}")
        if not (0 < self.k < N and 0 < self.kprime < N):
            raise ValueError("k and k' must lie in (0, N)")

    def to_json(self) -> dict:
        return {"N": self.N, "kappa": self.kappa, "k": self.k, "k'": self.kprime}


def compute_params(N: int, kappa: int) -> ModParams:
    if N < 3:
        raise ValueError(f"N={N}: need N >= 3, otherwise no k' in (0, N) solves kappa*k' = 2 mod N")
    if not 0 < kappa < N:
        raise ValueError(f"kappa={kappa} must satisfy 0 < kappa < N={N}")
    if gcd(kappa, N) != 1:
        raise ValueError(f"gcd(kappa, N) = gcd({kappa}, {N}) != 1")
    inv = pow(kappa, -1, N)
    return ModParams(N, kappa, (-inv) % N, (2 * inv) % N)


def pochhammer(form: LinearForm | Polynomial, m: int, kappa: int) -> Polynomial:
    """The string ``[L]_m = prod_{i<m} (L - i*kappa)``."""
    if m < 0:
        raise ValueError("string length must be non-negative")
    base = form.to_polynomial() if isinstance(form, LinearForm) else form
    result = Polynomial.one(base.space)
    for i in range(m):
        result = result * (base - i * kappa)
    return result


# ---------------------------------------------------------------------------
# string basis conversion

def _monomial_to_string(coeffs: list[int], kappa: int) -> list[int]:
    """Newton coefficients at the nodes ``0, kappa, 2 kappa, ...``.

    ``coeffs[j]`` is the coefficient of ``x^j``; the result holds the
    coefficients of ``[x]_m``.  Repeated synthetic division by ``x - i*kappa``.
    """
    a = list(coeffs)
    out = []
    node = 0
    while a:
        # divide a(x) by (x - node): quotient b, remainder r
        d = len(a) - 1
        b = [0] * d
        acc = 0
        for j in range(d, 0, -1):
            acc = a[j] + node * acc
            b[j - 1] = acc
        out.append(a[0] + node * acc)
        a = b
        node += kappa
    return out


def _string_to_monomial(coeffs: list[int], kappa: int) -> list[int]:
    """Inverse of :func:`_monomial_to_string` (nested Horner evaluation)."""
    result: list[int] = []
    for m in range(len(coeffs) - 1, -1, -1):
        # result <- result * (x - m*kappa) + coeffs[m]
        node = m * kappa
        new = [0] * (len(result) + 1)
        for j, c in enumerate(result):
            new[j + 1] += c
            new[j] -= node * c
        new[0] += coeffs[m]
        result = new
    while result and result[-1] == 0:
        result.pop()
    return result


def _convert_variable(terms: Mapping[tuple, int], index: int, kappa: int, forward: bool) -> Dict[tuple, int]:
    groups: Dict[tuple, Dict[int, int]] = {}
    for exp, c in terms.items():
        key = exp[:index] + (0,) + exp[index + 1:]
        groups.setdefault(key, {})[exp[index]] = c
    convert = _monomial_to_string if forward else _string_to_monomial
    out: Dict[tuple, int] = {}
    for key, by_deg in groups.items():
        dense = [0] * (max(by_deg) + 1)
        for d, c in by_deg.items():
            dense[d] = c
        for m, c in enumerate(convert(dense, kappa)):
            if c:
                out[key[:index] + (m,) + key[index + 1:]] = c
    return out


@dataclass(frozen=True)
class StringExpansion:
    """``p = sum_m coefficients[m](z) * prod_i [t_i]_{m_i}``."""

    space: VarSpace
    kappa: int
    coefficients: Mapping[MultiIndex, Polynomial] = field(default_factory=dict)

    def coefficient(self, m: Sequence[int]) -> Polynomial:
        return self.coefficients.get(tuple(m), Polynomial.zero(self.space.z_only()))

    def support(self) -> list[MultiIndex]:
        return sorted(self.coefficients)

    def to_json(self) -> list[dict]:
        return [{"m": list(m), "coef": self.coefficients[m].to_json()} for m in self.support()]

    @classmethod
    def from_json(cls, space: VarSpace, kappa: int, data) -> "StringExpansion":
        zs = space.z_only()
        return cls(space, kappa, {tuple(item["m"]): Polynomial.from_json(zs, item["coef"]) for item in data})


def _kappa(params: ModParams | int) -> int:
    return params.kappa if isinstance(params, ModParams) else int(params)


def to_string_basis(p: Polynomial, params: ModParams | int) -> StringExpansion:
    kappa = _kappa(params)
    terms = p.terms
    for i in range(p.space.l):
        terms = _convert_variable(terms, i, kappa, forward=True)
    l = p.space.l
    zs = p.space.z_only()
    grouped: Dict[MultiIndex, Dict[tuple, int]] = {}
    for exp, c in terms.items():
        grouped.setdefault(exp[:l], {})[exp[l:]] = c
    return StringExpansion(p.space, kappa, {m: Polynomial(zs, t, _trusted=True) for m, t in grouped.items()})


def from_string_basis(e: StringExpansion, params: ModParams | int | None = None) -> Polynomial:
    kappa = e.kappa if params is None else _kappa(params)
    terms = {}
    for m, coef in e.coefficients.items():
        for zexp, c in coef.terms.items():
            terms[tuple(m) + zexp] = c
    for i in range(e.space.l):
        terms = _convert_variable(terms, i, kappa, forward=False)
    return Polynomial(e.space, terms)


def discrete_derivative(p: Polynomial, index: int, kappa: int) -> Polynomial:
    """``D f = f(x) - f(x - kappa)`` in the variable at ``index``."""
    return p - substitute_shift(p, index, -kappa)


def is_n_constant(p: Polynomial, index: int, N: int, kappa: int) -> bool:
    if N == 1:
        return True
    return reduce_mod(discrete_derivative(p, index, kappa), N).is_zero()


# ---------------------------------------------------------------------------
# r-integrals

@dataclass(frozen=True)
class RSequence:
    r: MultiIndex
    N: int
    N_r: int
    M_r: int

    @classmethod
    def of(cls, r: Iterable[int], N: int) -> "RSequence":
        r = tuple(int(x) for x in r)
        N_r, M_r = n_r(r, N)
        return cls(r, N, N_r, M_r)

    @property
    def trivial(self) -> bool:
        return self.N_r == self.N

    @property
    def maximal(self) -> bool:
        return self.N_r == 1


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def n_r(r: Sequence[int], N: int) -> tuple[int, int]:
    """``(N_r, M_r)``: least ``N_r > 0`` with ``N_r (r_i + 1) = 0 mod N``, and ``N / N_r``."""
    if any(x < 0 for x in r):
        raise ValueError(f"r must be non-negative, got {tuple(r)}")
    via_gcd = N // reduce(gcd, (x + 1 for x in r), N)
    via_lcm = reduce(_lcm, (N // gcd(N, x + 1) for x in r), 1)
    assert via_gcd == via_lcm, (r, N)
    return via_gcd, N // via_gcd


def difference_r_integral(p: Polynomial, r: Sequence[int], params: ModParams) -> Polynomial:
    r = tuple(r)
    if len(r) != p.space.l:
        raise ValueError(f"r has length {len(r)}, expected l={p.space.l}")
    N_r, _ = n_r(r, params.N)
    return to_string_basis(p, params).coefficient(r) * N_r


def partial_r_integral(p: Polynomial, i: int, r_i: int, params: ModParams) -> Polynomial:
    """Integrate in ``t_i`` alone: ``N_{(r_i)}`` times the ``[t_i]_{r_i}`` coefficient.

    The result stays in ``p.space`` with the exponent of ``t_i`` equal to zero.
    """
    idx = p.space.t(i)
    converted = _convert_variable(p.terms, idx, params.kappa, forward=True)
    N_ri, _ = n_r((r_i,), params.N)
    out = {}
    for exp, c in converted.items():
        if exp[idx] == r_i:
            out[exp[:idx] + (0,) + exp[idx + 1:]] = c * N_ri
    return Polynomial(p.space, out)


def repeated_integral(p: Polynomial, r1: int, r2: int, params: ModParams, order: tuple[int, int] = (1, 2)) -> Polynomial:
    """``{{p}^{t_a}_{r_a}}^{t_b}_{r_b}`` for ``order = (a, b)``; needs ``l = 2``."""
    if p.space.l != 2:
        raise ValueError("repeated integral needs exactly two t variables")
    rs = {1: r1, 2: r2}
    a, b = order
    inner = partial_r_integral(p, a, rs[a], params)
    return partial_r_integral(inner, b, rs[b], params).drop_t()


def period_module_generators(p: Polynomial, params: ModParams) -> list[tuple[MultiIndex, Polynomial, int]]:
    """Non-trivial ``(r, {p}_r, M_r)`` over the string support of ``p``."""
    expansion = to_string_basis(p, params)
    out = []
    for r in expansion.support():
        N_r, M_r = n_r(r, params.N)
        if N_r < params.N:
            out.append((r, expansion.coefficient(r) * N_r, M_r))
    return out


# ---------------------------------------------------------------------------
# module of t-periods (one t, one z variable), bounded-degree membership

def m_constant_basis(M: int, degree: int, kappa: int, space: VarSpace, index: int) -> list[Polynomial]:
    """Generators, modulo ``M``, of the ``M``-constants of degree <= ``degree``.

    ``sum_a b_a [x]_a`` is an M-constant iff ``a*b_a = 0 mod M`` for all ``a``,
    so the multiples ``(M / gcd(a, M)) [x]_a`` generate.
    """
    x = Polynomial.variable(space, index)
    out = []
    for a in range(degree + 1):
        b = M // gcd(a, M) if a else 1
        out.append(pochhammer(x, a, kappa) * b)
    return out


def period_module_spanning_set(p: Polynomial, params: ModParams, multiplier_degree: int) -> list[Polynomial]:
    """Spanning set, mod N, of the t-periods of ``p`` with multipliers of bounded degree.

    ``p`` must live in ``VarSpace(1, 1)``.
    """
    if p.space != VarSpace(1, 1):
        raise ValueError("period modules are implemented for one t and one z variable")
    zs = VarSpace(0, 1)
    gens = []
    for r, value, M_r in period_module_generators(p, params):
        for g in m_constant_basis(M_r, multiplier_degree, params.kappa, zs, 0):
            prod = reduce_mod(value * g, params.N)
            if prod:
                gens.append(prod)
    return gens


def _lattice_basis(vectors: list[list[int]], N: int, dim: int) -> list[list[int]]:
    """Echelon basis of the Z-lattice spanned by ``vectors`` and ``N e_i``."""
    rows = [list(v) for v in vectors] + [[N if j == i else 0 for j in range(dim)] for i in range(dim)]
    basis = []
    for col in range(dim):
        pivot_rows = [row for row in rows if row[col]]
        rest = [row for row in rows if not row[col]]
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda row: abs(row[col]))
            head = pivot_rows[0]
            new = [head]
            for row in pivot_rows[1:]:
                q = row[col] // head[col]
                reduced = [x - q * y for x, y in zip(row, head)]
                if reduced[col]:
                    new.append(reduced)
                else:
                    rest.append(reduced)
            pivot_rows = new
        if pivot_rows:
            head = pivot_rows[0]
            if head[col] < 0:
                head = [-x for x in head]
            basis.append(head)
        rows = [[x % N for x in row] for row in rest]
        rows = [row for row in rows if any(row)]
        rows += [[N if j == i else 0 for j in range(dim)] for i in range(col + 1, dim)]
    return basis


def _lattice_contains(basis: list[list[int]], target: list[int]) -> bool:
    v = list(target)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def module_contains(spanning: list[Polynomial], targets: list[Polynomial], N: int) -> bool:
    """Whether every target lies in the Z/N-span of ``spanning``."""
    polys = spanning + targets
    if not polys:
        return True
    dim = max(p.degree() for p in polys) + 1
    if dim <= 0:
        return all(reduce_mod(t, N).is_zero() for t in targets)

    def vec(p):
        return [p.coefficient((d,)) for d in range(dim)]

    basis = _lattice_basis([vec(g) for g in spanning], N, dim)
    return all(_lattice_contains(basis, vec(t)) for t in targets)


def shifted_basis_expansion(p: Polynomial, n1: int, n2: int, params: ModParams) -> Polynomial:
    """Rewrite ``p(t, z)`` as ``q(s, z)`` with ``s = t + n1 z + n2``.

    String coefficients of ``q`` in ``s`` are the coefficients of ``p`` in the
    basis ``[t + n1 z + n2]_m``.
    """
    space = p.space
    if space != VarSpace(1, 1):
        raise ValueError("shifted bases are implemented for one t and one z variable")
    s = Polynomial.t(space, 1) - Polynomial.z(space, 1) * n1 - n2
    # substitute t -> s - n1 z - n2 by Horner in t
    by_t: Dict[int, Dict[tuple, int]] = {}
    for (et, ez), c in p.terms.items():
        by_t.setdefault(et, {})[(0, ez)] = c
    out = Polynomial.zero(space)
    for et in range(max(by_t, default=-1), -1, -1):
        out = out * s + Polynomial(space, by_t.get(et, {}))
    return out


def period_modules_equal(p: Polynomial, q: Polynomial, params: ModParams, multiplier_degree: int) -> bool:
    """Bounded-degree check that ``p`` and ``q`` have the same t-period module mod N.

    Each spanning element of one side is tested for membership in the span
    of the other side with multipliers up to ``multiplier_degree``.
    """
    a = period_module_spanning_set(p, params, multiplier_degree)
    b = period_module_spanning_set(q, params, multiplier_degree)
    # the other side may need larger multipliers to reach the same degree
    wide = multiplier_degree + max(p.degree(), q.degree(), 0)
    a_wide = period_module_spanning_set(p, params, wide)
    b_wide = period_module_spanning_set(q, params, wide)
    return module_contains(b_wide, a, params.N) and module_contains(a_wide, b, params.N)
