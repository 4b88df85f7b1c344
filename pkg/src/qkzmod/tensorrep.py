"""Weight spaces of ``V^{(x)n}`` with polynomial coordinates.

The basis vector ``v_I`` of weight ``n - 2l`` carries ``v_2`` in the slots
listed in ``I`` and ``v_1`` elsewhere.  Slots and subsets are 1-based and
stored sorted.  R-matrix actions are returned with denominators cleared:
``R(u) = (u - P)/(u - 1)`` contributes the numerator ``u - P`` and the
scalar denominator ``u - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .exactpoly import Polynomial, VarSpace, reduce_mod

Subset = Tuple[int, ...]


def subsets(n: int, l: int) -> list[Subset]:
    """All ``l``-subsets of ``{1..n}`` in lexicographic order."""
    return list(combinations(range(1, n + 1), l))


def _canon(I: Iterable[int]) -> Subset:
    return tuple(sorted(I))


class VectorPolynomial:
    """``sum_I coords[I] * v_I`` with ``|I| = l``; missing subsets are zero."""

    __slots__ = ("n", "l", "space", "coords")

    def __init__(self, n: int, l: int, space: VarSpace, coords: Mapping[Iterable[int], Polynomial] | None = None):
        if not 0 <= l <= n:
            raise ValueError(f"weight index l={l} outside 0..{n}")
        self.n, self.l, self.space = n, l, space
        clean: Dict[Subset, Polynomial] = {}
        for I, p in (coords or {}).items():
            I = _canon(I)
            if len(I) != l or len(set(I)) != l or any(not 1 <= a <= n for a in I):
                raise ValueError(f"subset {I} is not an {l}-subset of 1..{n}")
            if p.space != space:
                raise ValueError(f"coordinate at {I} lives in {p.space}, expected {space}")
            if not p.is_zero():
                clean[I] = clean[I] + p if I in clean else p
                if clean[I].is_zero():
                    del clean[I]
        self.coords = clean

    @classmethod
    def zero(cls, n: int, l: int, space: VarSpace) -> "VectorPolynomial":
        return cls(n, l, space)

    @classmethod
    def basis(cls, n: int, I: Iterable[int], space: VarSpace, coefficient: Polynomial | int = 1) -> "VectorPolynomial":
        I = _canon(I)
        if isinstance(coefficient, int):
            coefficient = Polynomial.constant(space, coefficient)
        return cls(n, len(I), space, {I: coefficient})

    def __getitem__(self, I) -> Polynomial:
        return self.coords.get(_canon(I), Polynomial.zero(self.space))

    def is_zero(self) -> bool:
        return not self.coords

    def _compatible(self, other: "VectorPolynomial"):
        if (self.n, self.l, self.space) != (other.n, other.l, other.space):
            raise ValueError("vector polynomials live in different spaces")

    def __eq__(self, other):
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        return (self.n, self.l, self.space) == (other.n, other.l, other.space) and self.coords == other.coords

    def __add__(self, other: "VectorPolynomial") -> "VectorPolynomial":
        self._compatible(other)
        out = dict(self.coords)
        for I, p in other.coords.items():
            out[I] = out[I] + p if I in out else p
        return VectorPolynomial(self.n, self.l, self.space, out)

    def __neg__(self):
        return VectorPolynomial(self.n, self.l, self.space, {I: -p for I, p in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p: Polynomial | int) -> "VectorPolynomial":
        return VectorPolynomial(self.n, self.l, self.space, {I: q * p for I, q in self.coords.items()})

    def map(self, fn) -> "VectorPolynomial":
        """Apply a scalar polynomial map coordinate-wise (it must preserve the space)."""
        return VectorPolynomial(self.n, self.l, self.space, {I: fn(p) for I, p in self.coords.items()})

    def reduce_mod(self, N: int) -> "VectorPolynomial":
        return self.map(lambda p: reduce_mod(p, N))

    def degree(self) -> int:
        return max((p.degree() for p in self.coords.values()), default=-1)

    def nterms(self) -> int:
        return sum(len(p) for p in self.coords.values())

    def __repr__(self):
        body = ", ".join(f"{list(I)}: {p.to_str()}" for I, p in sorted(self.coords.items()))
        return f"VectorPolynomial(n={self.n}, l={self.l}, {{{body}}})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "coords": [{"I": list(I), "poly": self.coords[I].to_json()} for I in sorted(self.coords)],
        }

    @classmethod
    def from_json(cls, data: Mapping, space: VarSpace | None = None) -> "VectorPolynomial":
        n, l = int(data["n"]), int(data["l"])
        space = space or VarSpace(0, n)
        return cls(n, l, space, {tuple(c["I"]): Polynomial.from_json(space, c["poly"]) for c in data["coords"]})


# ---------------------------------------------------------------------------
# sl2 action

def apply_e(v: VectorPolynomial) -> VectorPolynomial:
    """Raising operator: ``e v_I = sum_{a in I} v_{I - a}``."""
    if v.l < 1:
        raise ValueError("e annihilates the highest weight space; need l >= 1")
    out: Dict[Subset, Polynomial] = {}
    for I, p in v.coords.items():
        for a in I:
            J = tuple(x for x in I if x != a)
            out[J] = out[J] + p if J in out else p
    return VectorPolynomial(v.n, v.l - 1, v.space, out)


def apply_f(v: VectorPolynomial) -> VectorPolynomial:
    """Lowering operator: ``f v_I = sum_{a not in I} v_{I + a}``."""
    if v.l >= v.n:
        raise ValueError("f annihilates the lowest weight space")
    out: Dict[Subset, Polynomial] = {}
    for I, p in v.coords.items():
        for a in range(1, v.n + 1):
            if a not in I:
                J = _canon(I + (a,))
                out[J] = out[J] + p if J in out else p
    return VectorPolynomial(v.n, v.l + 1, v.space, out)


def apply_h(v: VectorPolynomial) -> VectorPolynomial:
    return v.scale(v.n - 2 * v.l)


# ---------------------------------------------------------------------------
# permutations of tensor slots

def _swap_members(I: Subset, a: int, b: int) -> Subset:
    return _canon(b if x == a else a if x == b else x for x in I)


def apply_permutation(v: VectorPolynomial, a: int, b: int) -> VectorPolynomial:
    """``P^{(a,b)}``: exchange tensor slots ``a`` and ``b``."""
    if not (1 <= a <= v.n and 1 <= b <= v.n) or a == b:
        raise ValueError(f"invalid slots ({a}, {b}) for n={v.n}")
    return VectorPolynomial(v.n, v.l, v.space, {_swap_members(I, a, b): p for I, p in v.coords.items()})


def apply_cyclic(v: VectorPolynomial) -> VectorPolynomial:
    """``P^{(mu)} = P^{(1,2)} P^{(2,3)} ... P^{(n-1,n)}``; the rightmost factor acts first."""
    for a in range(v.n - 1, 0, -1):
        v = apply_permutation(v, a, a + 1)
    return v


def apply_r_numerator(v: VectorPolynomial, a: int, b: int, u: Polynomial) -> VectorPolynomial:
    """``(u - P^{(a,b)}) v``, the cleared numerator of ``R^{(a,b)}(u) v``."""
    return v.scale(u) - apply_permutation(v, a, b)


def pr_cleared_action(v: VectorPolynomial, a: int) -> VectorPolynomial:
    """``((z_a - z_{a+1}) P^{(a,a+1)} - 1) v``.

    This is ``(z_a - z_{a+1} - 1) P R(z_a - z_{a+1}) v`` with the scalar
    denominator cleared, using ``P R(u) = (u P - 1)/(u - 1)``.
    """
    if not 1 <= a < v.n:
        raise ValueError(f"slot a={a} must satisfy 1 <= a < n={v.n}")
    u = Polynomial.z(v.space, a) - Polynomial.z(v.space, a + 1)
    return apply_permutation(v, a, a + 1).scale(u) - v


def qkz_factor_order(a: int, n: int) -> list[int]:
    """Partner slots ``b`` of the factors ``R^{(a,b)}`` of ``K_a`` in acting order.

    ``K_a = R^{(a,a-1)} ... R^{(a,1)} R^{(a,n)} ... R^{(a,a+1)}`` acts with its
    rightmost factor first, i.e. ``b = a+1, ..., n, 1, ..., a-1``.
    """
    return list(range(a + 1, n + 1)) + list(range(1, a))


def qkz_denominator_factors(a: int, kappa: int, space: VarSpace, n: int) -> list[Polynomial]:
    """The arguments ``u_b`` of the factors of ``K_a``, in acting order.

    ``u_b = z_a - z_b - kappa`` for ``b < a`` and ``u_b = z_a - z_b`` for ``b > a``.
    """
    za = Polynomial.z(space, a)
    return [za - Polynomial.z(space, b) - (kappa if b < a else 0) for b in qkz_factor_order(a, n)]


def qkz_cleared_action(
    v: VectorPolynomial, a: int, kappa: int, modulus: int | None = None
) -> tuple[VectorPolynomial, Polynomial]:
    """``(num, den)`` with ``den * K_a(z; kappa) v = num``, ``den = prod_b (u_b - 1)``.

    With ``modulus`` the numerator is reduced after every factor, which is
    all a congruence check needs.
    """
    if not 1 <= a <= v.n:
        raise ValueError(f"slot a={a} outside 1..{v.n}")
    den = Polynomial.one(v.space)
    num = v
    for b, u in zip(qkz_factor_order(a, v.n), qkz_denominator_factors(a, kappa, v.space, v.n)):
        num = apply_r_numerator(num, a, b, u)
        if modulus:
            num = num.reduce_mod(modulus)
        den = den * (u - 1)
    return num, den


def qkz_matrix(a: int, point: Sequence, kappa, n: int, l: int) -> dict[Subset, dict[Subset, Fraction]]:
    """Exact matrix of ``K_a(z; kappa)`` on the weight space at a rational point ``z``.

    Column ``J`` holds ``K_a v_J``; raises ``ZeroDivisionError`` on a pole.
    """
    space = VarSpace(0, n)
    cols = {}
    for J in subsets(n, l):
        num, den = qkz_cleared_action(VectorPolynomial.basis(n, J, space), a, kappa)
        d = den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError(f"K_{a} has a pole at {tuple(point)}")
        cols[J] = {I: p.evaluate(point) / d for I, p in num.coords.items()}
    return cols


def matmul(A: Mapping, B: Mapping) -> dict:
    """Product of column-indexed sparse matrices (``A[col][row]``)."""
    out = {}
    for J, col in B.items():
        acc: dict = {}
        for K, x in col.items():
            for I, y in A.get(K, {}).items():
                acc[I] = acc.get(I, 0) + y * x
        out[J] = {I: x for I, x in acc.items() if x}
    return out


# ---------------------------------------------------------------------------
# verification reports

@dataclass
class ReportEntry:
    equation: str
    passed: bool
    witness: VectorPolynomial

    def to_json(self, with_witness: bool = True) -> dict:
        out = {"equation": self.equation, "pass": self.passed}
        if with_witness:
            out["witness"] = self.witness.to_json()
        return out


@dataclass
class VerificationReport:
    """Per-equation results; an entry passes iff its residue is zero mod N.

    ``N = None`` asks for exact equality over the integers.
    """

    N: int | None
    entries: list[ReportEntry] = field(default_factory=list)

    def record(self, equation: str, residue: VectorPolynomial) -> ReportEntry:
        witness = residue if self.N is None else residue.reduce_mod(self.N)
        entry = ReportEntry(equation, witness.is_zero(), witness)
        self.entries.append(entry)
        return entry

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[str]:
        return [e.equation for e in self.entries if not e.passed]

    def __iter__(self):
        return iter(self.entries)

    def to_json(self, with_witness: bool = True) -> list[dict]:
        return [e.to_json(with_witness) for e in self.entries]
