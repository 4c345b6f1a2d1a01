"""Exact quaternion arithmetic over the rational Hamilton quaternions.

Coordinates are stored doubled (2*x0, 2*x1, 2*x2, 2*x3) as integers sharing
parity, so half-integer points of the maximal order stay exact.  The module
provides the two integer orders used downstream (Lipschitz: all coordinates
integral; Hurwitz: all integral or all half-integral), norm-shell
enumeration, unit groups, and the rotation action on the trace-zero part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

__all__ = [
    "Quaternion",
    "OrderSpec",
    "LIPSCHITZ",
    "HURWITZ",
    "enumerate_norm",
    "unit_group",
    "rotation_of",
]


@dataclass(frozen=True)
class Quaternion:
    """Quaternion x0 + x1*i + x2*j + x3*k with doubled-integer coordinates.

    d0..d3 are the doubled coordinates 2*x0..2*x3; they must all be even or
    all odd (the Hurwitz lattice), which keeps every order element exact.
    """

    d0: int
    d1: int
    d2: int
    d3: int

    def __post_init__(self) -> None:
        parities = {self.d0 & 1, self.d1 & 1, self.d2 & 1, self.d3 & 1}
        if len(parities) != 1:
            raise ValueError(
                f"doubled coordinates must share parity, got {self.doubled()}"
            )

    @classmethod
    def from_ints(cls, x0: int, x1: int, x2: int, x3: int) -> Quaternion:
        return cls(2 * x0, 2 * x1, 2 * x2, 2 * x3)

    def doubled(self) -> tuple[int, int, int, int]:
        return (self.d0, self.d1, self.d2, self.d3)

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(d, 2) for d in self.doubled())  # type: ignore[return-value]

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(
            self.d0 + other.d0,
            self.d1 + other.d1,
            self.d2 + other.d2,
            self.d3 + other.d3,
        )

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(
            self.d0 - other.d0,
            self.d1 - other.d1,
            self.d2 - other.d2,
            self.d3 - other.d3,
        )

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.d0, -self.d1, -self.d2, -self.d3)

    def __mul__(self, other: Quaternion) -> Quaternion:
        # Hamilton product; doubled coordinates multiply to 4x the doubled
        # result, hence the exact halving at the end (always integral).
        a0, a1, a2, a3 = self.doubled()
        b0, b1, b2, b3 = other.doubled()
        c0 = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
        c1 = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
        c2 = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
        c3 = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0
        for c in (c0, c1, c2, c3):
            if c % 2:
                raise ArithmeticError("quaternion product left the lattice")
        return Quaternion(c0 // 2, c1 // 2, c2 // 2, c3 // 2)

    def conj(self) -> Quaternion:
        return Quaternion(self.d0, -self.d1, -self.d2, -self.d3)

    def norm(self) -> Fraction:
        """Reduced norm q * conj(q) = x0^2 + x1^2 + x2^2 + x3^2."""
        return Fraction(
            self.d0 * self.d0 + self.d1 * self.d1 + self.d2 * self.d2 + self.d3 * self.d3,
            4,
        )

    def trace(self) -> Fraction:
        return Fraction(self.d0, 1)

    def is_trace_zero(self) -> bool:
        return self.d0 == 0

    def __repr__(self) -> str:
        x = self.components()
        return f"Quaternion({x[0]}, {x[1]}, {x[2]}, {x[3]})"


ONE = Quaternion.from_ints(1, 0, 0, 0)
I = Quaternion.from_ints(0, 1, 0, 0)
J = Quaternion.from_ints(0, 0, 1, 0)
K = Quaternion.from_ints(0, 0, 0, 1)


@dataclass(frozen=True)
class OrderSpec:
    """Integer order in the Hamilton quaternions.

    kind is "lipschitz" (all coordinates integral, non-maximal) or "hurwitz"
    (the maximal order of discriminant 2, adding the all-half-integer
    points).
    """

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ("lipschitz", "hurwitz"):
            raise ValueError(f"unknown order kind {self.kind!r}")

    @property
    def discriminant(self) -> int:
        return 2

    @property
    def unit_count(self) -> int:
        return 8 if self.kind == "lipschitz" else 24

    def contains(self, q: Quaternion) -> bool:
        d = q.doubled()
        if all(v % 2 == 0 for v in d):
            return True
        return self.kind == "hurwitz" and all(v % 2 == 1 for v in d)


LIPSCHITZ = OrderSpec("lipschitz")
HURWITZ = OrderSpec("hurwitz")


def _doubled_tuples_of_norm(n: int, parity: int) -> Iterator[tuple[int, int, int, int]]:
    """All integer 4-tuples of the given parity with square-sum 4n.

    Lexicographic in (d0, d1, d2, d3); the bound |d_i| <= 2*sqrt(n) is the
    box scan the enumeration contract asks for.
    """
    target = 4 * n
    bound = math.isqrt(target)
    if (bound & 1) != parity:
        bound -= 1
    for d0 in range(-bound, bound + 1, 2):
        r0 = target - d0 * d0
        if r0 < 0:
            continue
        b1 = math.isqrt(r0)
        if (b1 & 1) != parity:
            b1 -= 1
        for d1 in range(-b1, b1 + 1, 2):
            r1 = r0 - d1 * d1
            if r1 < 0:
                continue
            b2 = math.isqrt(r1)
            if (b2 & 1) != parity:
                b2 -= 1
            for d2 in range(-b2, b2 + 1, 2):
                r2 = r1 - d2 * d2
                if r2 < 0:
                    continue
                d3 = math.isqrt(r2)
                if d3 * d3 == r2 and (d3 & 1) == parity:
                    if d3 == 0:
                        yield (d0, d1, d2, 0)
                    else:
                        yield (d0, d1, d2, -d3)
                        yield (d0, d1, d2, d3)


def enumerate_norm(order: OrderSpec, n: int) -> list[Quaternion]:
    """Every order element of reduced norm exactly n, lexicographically.

    Ordering is on the doubled-coordinate tuple, deterministic.
    """
    if n < 1:
        raise ValueError("norm must be a positive integer")
    out = [Quaternion(*d) for d in _doubled_tuples_of_norm(n, 0)]
    if order.kind == "hurwitz" and n % 2 == 1:
        # all-odd doubled tuples have square-sum 4 mod 8, i.e. odd norm only
        out.extend(Quaternion(*d) for d in _doubled_tuples_of_norm(n, 1))
    out.sort(key=Quaternion.doubled)
    return out


@lru_cache(maxsize=None)
def _unit_group_cached(kind: str) -> tuple[Quaternion, ...]:
    return tuple(enumerate_norm(OrderSpec(kind), 1))


def unit_group(order: OrderSpec) -> list[Quaternion]:
    """All norm-1 elements of the order (8 Lipschitz, 24 Hurwitz units)."""
    return list(_unit_group_cached(order.kind))


def rotation_of(q: Quaternion) -> tuple[tuple[Fraction, ...], ...]:
    """Exact SO(3) matrix of x -> conj(q) * x * q / norm(q) on span{i,j,k}.

    Returned as a 3x3 tuple of Fractions; row r gives the coordinates of the
    image of the r-th coordinate function, i.e. (M v)_r for a coordinate
    vector v of a trace-zero quaternion.
    """
    nq = q.norm()
    if nq == 0:
        raise ValueError("rotation is undefined for the zero quaternion")
    qc = q.conj()
    cols = []
    for basis in (I, J, K):
        img = qc * basis * q
        comps = img.components()
        if comps[0] != 0:
            raise ArithmeticError("conjugation left the trace-zero space")
        cols.append(tuple(c / nq for c in comps[1:]))
    # cols[j] is the image of e_j; transpose to rows acting on coordinates.
    return tuple(
        tuple(cols[j][r] for j in range(3)) for r in range(3)
    )


def rotation_matrix_times_norm_int(q: Quaternion) -> tuple[tuple[int, ...], ...]:
    """norm(q) * rotation_of(q) as an exact integer matrix.

    Integrality holds for every element of the Hurwitz lattice; it is what
    makes pure-integer Hecke summation possible downstream.
    """
    nq = q.norm()
    m = rotation_of(q)
    out = []
    for r in range(3):
        row = []
        for c in range(3):
            v = m[r][c] * nq
            if v.denominator != 1:
                raise ArithmeticError(f"non-integral scaled rotation entry {v}")
            row.append(v.numerator)
        out.append(tuple(row))
    return tuple(out)
