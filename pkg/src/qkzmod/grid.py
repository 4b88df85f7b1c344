"""Parameter grids for the property suites.

A case is ``(params, n, l, r)``.  The default grid covers ``n in 2..5``,
``l in {1, 2}`` with ``2l <= n``, ``N in {3, 5, 7, 9, 13}``, every unit
``kappa`` and every non-trivial ``r`` with ``r_i`` at most the ``t``-degree
of the integrand and ``sum(r)`` at most its total degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, gcd
from typing import Iterator

from .diffcalc import ModParams, RSequence, compute_params
from .hyperqkz import integrand_degree, t_degree

GRIDS = {
    "default": {"N": (3, 5, 7, 9, 13), "n": (2, 3, 4, 5), "l": (1, 2)},
    "small": {"N": (3, 5), "n": (2, 3), "l": (1,)},
}


@dataclass(frozen=True)
class Case:
    params: ModParams
    n: int
    l: int
    r: tuple[int, ...]

    @property
    def maximal(self) -> bool:
        return RSequence.of(self.r, self.params.N).maximal

    def label(self) -> str:
        p = self.params
        return f"N={p.N} kappa={p.kappa} n={self.n} l={self.l} r={','.join(map(str, self.r))}"

    def output_size(self) -> int:
        """Dense upper bound on the number of output monomials."""
        d = integrand_degree(self.params, self.n, self.l) - sum(self.r)
        return comb(self.n, self.l) * comb(d + self.n, self.n)


def units(N: int) -> list[int]:
    return [k for k in range(1, N) if gcd(k, N) == 1]


def sequences(params: ModParams, n: int, l: int, maximal_only: bool = False) -> Iterator[tuple[int, ...]]:
    top, deg = t_degree(params, n, l), integrand_degree(params, n, l)
    for r in product(range(top + 1), repeat=l):
        if sum(r) > deg:
            continue
        rs = RSequence.of(r, params.N)
        if rs.maximal if maximal_only else not rs.trivial:
            yield r


def cases(grid: str = "default", maximal_only: bool = False) -> Iterator[Case]:
    spec = GRIDS[grid]
    for N in spec["N"]:
        for kappa in units(N):
            params = compute_params(N, kappa)
            for n in spec["n"]:
                for l in spec["l"]:
                    if 2 * l > n:
                        continue
                    for r in sequences(params, n, l, maximal_only):
                        yield Case(params, n, l, r)
