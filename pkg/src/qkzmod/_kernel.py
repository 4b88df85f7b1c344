"""Coefficient extraction from products of linear factors.

Multiplying by a linear factor is cheap in the string basis:

    [t]_m * t = [t]_{m+1} + m*kappa*[t]_m

so string indices never decrease.  To get the coefficient at a fixed
multi-index ``r`` it suffices to track indices ``m <= r`` while the product
is built, and to drop states that can no longer reach ``r``.  With
``kappa = 0`` the same routine works in the monomial basis.

``z`` exponents are packed into one int (base ``B`` digits) for speed.
"""
from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

# (t coefficients, z coefficients, constant)
Factor = Tuple[Tuple[int, ...], Tuple[int, ...], int]


def _order(factors: list[Factor]) -> list[Factor]:
    # t-only factors first, then grouped by their z variable
    def key(f):
        zs = [s for s, c in enumerate(f[1]) if c]
        return (len(zs), zs)

    return sorted(factors, key=key)


def coefficient_at(
    summands: Iterable[Sequence[Factor]],
    r: Sequence[int],
    kappa: int,
    n: int,
    modulus: int | None = None,
) -> Dict[Tuple[int, ...], int]:
    """Coefficient of ``prod_i [t_i]_{r_i}`` in ``sum_j prod(summands[j])``.

    Returns the z-polynomial as ``{z exponent tuple: coefficient}``; with
    ``modulus`` the coefficients are reduced to least non-negative residues.
    """
    total: Dict[int, int] = {}
    r = tuple(r)
    summands = [list(s) for s in summands]
    base = max((len(s) for s in summands), default=0) + 1
    for factors in summands:
        for packed, c in _single(factors, r, kappa, n, base, modulus).items():
            total[packed] = total.get(packed, 0) + c
    out = {}
    for packed, c in total.items():
        if modulus:
            c %= modulus
        if c:
            out[_unpack(packed, n, base)] = c
    return out


def _unpack(packed: int, n: int, base: int) -> Tuple[int, ...]:
    exp = []
    for _ in range(n):
        packed, d = divmod(packed, base)
        exp.append(d)
    return tuple(exp)


def _single(factors: list[Factor], r: Tuple[int, ...], kappa: int, n: int, base: int, modulus) -> Dict[int, int]:
    l = len(r)
    factors = _order(factors)
    # remaining[step][i]: factors at positions >= step that raise t_i
    remaining = [[0] * l for _ in range(len(factors) + 1)]
    for step in range(len(factors) - 1, -1, -1):
        tc = factors[step][0]
        remaining[step] = [remaining[step + 1][i] + (1 if tc[i] else 0) for i in range(l)]
    if any(remaining[0][i] < r[i] for i in range(l)):
        return {}

    shifts = [base ** s for s in range(n)]
    state: Dict[Tuple[int, ...], Dict[int, int]] = {(0,) * l: {0: 1}}
    for step, (tc, zc, const) in enumerate(factors):
        rem = remaining[step + 1]
        zparts = [(shifts[s], c) for s, c in enumerate(zc) if c]
        tparts = [(i, c) for i, c in enumerate(tc) if c]
        new: Dict[Tuple[int, ...], Dict[int, int]] = {}
        for m, poly in state.items():
            if all(m[i] + rem[i] >= r[i] for i in range(l)):
                scalar = const + kappa * sum(c * m[i] for i, c in tparts)
                target = new.setdefault(m, {})
                if scalar:
                    for e, v in poly.items():
                        target[e] = target.get(e, 0) + scalar * v
                for sh, c in zparts:
                    for e, v in poly.items():
                        k = e + sh
                        target[k] = target.get(k, 0) + c * v
            for i, c in tparts:
                if m[i] >= r[i]:
                    continue
                m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
                if any(m2[j] + rem[j] < r[j] for j in range(l)):
                    continue
                target = new.setdefault(m2, {})
                for e, v in poly.items():
                    target[e] = target.get(e, 0) + c * v
        state = {}
        for m, poly in new.items():
            if modulus:
                poly = {e: v % modulus for e, v in poly.items() if v % modulus}
            else:
                poly = {e: v for e, v in poly.items() if v}
            if poly:
                state[m] = poly
        if not state:
            return {}
    return state.get(r, {})
