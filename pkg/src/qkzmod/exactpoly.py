"""Sparse multivariate polynomials over the integers.

Variables are ordered ``t_1..t_l, z_1..z_n`` inside a :class:`VarSpace`.
A :class:`Polynomial` stores a map from exponent tuples to nonzero Python
ints, so every ring operation is exact.  Reduction modulo an integer only
happens when :func:`reduce_mod` is called explicitly.

All objects are immutable; operations return new instances.
"""
from __future__ import annotations

from operator import add as add_int

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class VarSpace:
    """Variable layout ``t_1..t_l, z_1..z_n`` (``l`` may be zero)."""

    l: int
    n: int

    def __post_init__(self):
        if self.l < 0 or self.n < 0:
            raise ValueError(f"invalid variable counts l={self.l}, n={self.n}")

    @property
    def nvars(self) -> int:
        return self.l + self.n

    def t(self, i: int) -> int:
        """Index of ``t_i`` (1-based ``i``)."""
        if not 1 <= i <= self.l:
            raise IndexError(f"t_{i} outside t_1..t_{self.l}")
        return i - 1

    def z(self, a: int) -> int:
        """Index of ``z_a`` (1-based ``a``)."""
        if not 1 <= a <= self.n:
            raise IndexError(f"z_{a} outside z_1..z_{self.n}")
        return self.l + a - 1

    def names(self) -> list[str]:
        return [f"t{i}" for i in range(1, self.l + 1)] + [f"z{a}" for a in range(1, self.n + 1)]

    def z_only(self) -> "VarSpace":
        return VarSpace(0, self.n)


def _check_same_space(p: "Polynomial", q: "Polynomial"):
    if p.space != q.space:
        raise ValueError(f"mismatched variable spaces {p.space} and {q.space}")


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(map(add_int, a, b))


class Polynomial:
    """Element of ``Z[t_1..t_l, z_1..z_n]``.

    ``terms`` maps exponent tuples of length ``space.nvars`` to nonzero ints.
    """

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VarSpace, terms: Mapping[Exponent, int] | None = None, *, _trusted=False):
        self.space = space
        if _trusted:
            self.terms = terms
        else:
            clean: Dict[Exponent, int] = {}
            width = space.nvars
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != width or any(e < 0 for e in exp):
                    raise ValueError(f"exponent {exp} does not fit {space}")
                c = int(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
            self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, space: VarSpace) -> "Polynomial":
        return cls(space, {}, _trusted=True)

    @classmethod
    def constant(cls, space: VarSpace, c: int) -> "Polynomial":
        c = int(c)
        return cls(space, {(0,) * space.nvars: c} if c else {}, _trusted=True)

    @classmethod
    def one(cls, space: VarSpace) -> "Polynomial":
        return cls.constant(space, 1)

    @classmethod
    def variable(cls, space: VarSpace, index: int) -> "Polynomial":
        exp = [0] * space.nvars
        exp[index] = 1
        return cls(space, {tuple(exp): 1}, _trusted=True)

    @classmethod
    def t(cls, space: VarSpace, i: int) -> "Polynomial":
        return cls.variable(space, space.t(i))

    @classmethod
    def z(cls, space: VarSpace, a: int) -> "Polynomial":
        return cls.variable(space, space.z(a))

    # -- basic protocol ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_same_space(self, other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.space, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for exp, c in small.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return Polynomial(self.space, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.space, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial.zero(self.space)
            return Polynomial(self.space, {e: c * other for e, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        out: Dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.space, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.one(self.space)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- inspection -------------------------------------------------------
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=-1)

    def coefficient(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.space.nvars, 0)

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        """Terms in graded-lex order, ``t_1 > ... > t_l > z_1 > ... > z_n``."""
        return sorted(self.terms.items(), key=lambda item: (-sum(item[0]), tuple(-x for x in item[0])))

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        names = self.space.names()
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- substitutions ----------------------------------------------------
    def shift(self, index: int, c: int) -> "Polynomial":
        """Substitute ``x -> x + c`` for the variable at ``index``."""
        return substitute_shift(self, index, c)

    def permute_z(self, sigma: Sequence[int]) -> "Polynomial":
        return permute_z(self, sigma)

    def reduce_mod(self, modulus: int) -> "Polynomial":
        return reduce_mod(self, modulus)

    def evaluate(self, point: Sequence) -> Fraction:
        return evaluate_rational(self, point)

    def derivative(self, index: int) -> "Polynomial":
        return partial_derivative(self, index)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return homogeneous_component(self, d)

    def embed(self, space: VarSpace) -> "Polynomial":
        """Reinterpret a ``z``-only polynomial inside ``space`` (t-exponents zero)."""
        if self.space.n != space.n or self.space.l > space.l:
            raise ValueError(f"cannot embed {self.space} into {space}")
        pad = (0,) * (space.l - self.space.l)
        return Polynomial(space, {e[: self.space.l] + pad + e[self.space.l:]: c for e, c in self.terms.items()}, _trusted=True)

    def drop_t(self) -> "Polynomial":
        """Project onto ``Z[z]``; raises if any ``t`` variable occurs."""
        l = self.space.l
        out = {}
        for e, c in self.terms.items():
            if any(e[:l]):
                raise ValueError("polynomial still depends on t variables")
            out[e[l:]] = c
        return Polynomial(self.space.z_only(), out, _trusted=True)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"exp": list(e), "coef": str(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, space: VarSpace, data: Iterable[Mapping]) -> "Polynomial":
        return cls(space, {tuple(item["exp"]): int(item["coef"]) for item in data})


@dataclass(frozen=True)
class LinearForm:
    """``sum(coeffs[i] * x_i) + const`` over the variables of ``space``."""

    space: VarSpace
    coeffs: Tuple[int, ...]
    const: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.space.nvars:
            raise ValueError("coefficient vector does not match variable space")

    @classmethod
    def build(cls, space: VarSpace, t: Mapping[int, int] | None = None,
              z: Mapping[int, int] | None = None, const: int = 0) -> "LinearForm":
        """Build from 1-based ``{i: coeff}`` maps, e.g. ``t={1: 1}, z={2: -1}``."""
        coeffs = [0] * space.nvars
        for i, c in (t or {}).items():
            coeffs[space.t(i)] += c
        for a, c in (z or {}).items():
            coeffs[space.z(a)] += c
        return cls(space, tuple(coeffs), const)

    def __add__(self, c: int) -> "LinearForm":
        return LinearForm(self.space, self.coeffs, self.const + c)

    def __sub__(self, c: int) -> "LinearForm":
        return LinearForm(self.space, self.coeffs, self.const - c)

    def to_polynomial(self) -> Polynomial:
        width = self.space.nvars
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                exp = [0] * width
                exp[i] = 1
                terms[tuple(exp)] = c
        if self.const:
            terms[(0,) * width] = self.const
        return Polynomial(self.space, terms, _trusted=True)

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((Fraction(c) * x for c, x in zip(self.coeffs, point) if c), Fraction(self.const))


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same_space(p, q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same_space(p, q)
    return p * q


def substitute_shift(p: Polynomial, index: int, c: int) -> Polynomial:
    """Return ``p`` with variable ``index`` replaced by ``x + c``."""
    if not 0 <= index < p.space.nvars:
        raise IndexError(f"variable index {index} out of range")
    if c == 0:
        return p
    out: Dict[Exponent, int] = {}
    for exp, coef in p.terms.items():
        d = exp[index]
        if d == 0:
            out[exp] = out.get(exp, 0) + coef
            continue
        head, tail = exp[:index], exp[index + 1:]
        power = 1
        # (x + c)^d = sum_j C(d, j) c^(d-j) x^j, walking j downwards
        for j in range(d, -1, -1):
            key = head + (j,) + tail
            out[key] = out.get(key, 0) + coef * comb(d, j) * power
            power *= c
    return Polynomial(p.space, {e: v for e, v in out.items() if v}, _trusted=True)


def permute_z(p: Polynomial, sigma: Sequence[int]) -> Polynomial:
    """Return ``p(z_sigma(1), ..., z_sigma(n))``.

    ``sigma`` is the one-line notation ``(sigma(1), ..., sigma(n))`` with
    1-based entries.  With ``sigma = (2, ..., n, 1)`` this produces
    ``p(z_2, ..., z_n, z_1)``.
    """
    n, l = p.space.n, p.space.l
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(sigma)} is not a permutation of 1..{n}")
    out = {}
    for exp, c in p.terms.items():
        new = list(exp)
        for j in range(n):
            new[l + sigma[j] - 1] = exp[l + j]
        out[tuple(new)] = c
    return Polynomial(p.space, out, _trusted=True)


def swap_z(p: Polynomial, a: int, b: int) -> Polynomial:
    sigma = list(range(1, p.space.n + 1))
    sigma[a - 1], sigma[b - 1] = sigma[b - 1], sigma[a - 1]
    return permute_z(p, sigma)


def reduce_mod(p: Polynomial, modulus: int) -> Polynomial:
    """Least non-negative residues of all coefficients; zero residues dropped."""
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    out = {}
    for e, c in p.terms.items():
        c %= modulus
        if c:
            out[e] = c
    return Polynomial(p.space, out, _trusted=True)


def evaluate_rational(p: Polynomial, point: Sequence) -> Fraction:
    """Exact value of ``p`` at a point of rationals (ints or Fractions)."""
    if len(point) != p.space.nvars:
        raise ValueError(f"point has {len(point)} coordinates, expected {p.space.nvars}")
    xs = [Fraction(x) for x in point]
    powers: list[dict[int, Fraction]] = [{0: Fraction(1)} for _ in xs]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = xs[i] ** e
        return cache[e]

    total = Fraction(0)
    for exp, c in p.terms.items():
        term = Fraction(c)
        for i, e in enumerate(exp):
            if e:
                term *= power(i, e)
        total += term
    return total


def partial_derivative(p: Polynomial, index: int) -> Polynomial:
    if not 0 <= index < p.space.nvars:
        raise IndexError(f"variable index {index} out of range")
    out = {}
    for exp, c in p.terms.items():
        e = exp[index]
        if e:
            out[exp[:index] + (e - 1,) + exp[index + 1:]] = c * e
    return Polynomial(p.space, out, _trusted=True)


def homogeneous_component(p: Polynomial, d: int) -> Polynomial:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return Polynomial(p.space, {e: c for e, c in p.terms.items() if sum(e) == d}, _trusted=True)
