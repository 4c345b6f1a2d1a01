"""Exact trilinear forms on sphere harmonics and the central-value constants.

This module computes, in exact rational arithmetic:

  * triple-product integrals over S^2 (3-variable harmonics) and S^3
    (4-variable harmonics), in raw / probability / calibrated measure
    conventions, as ``PiScaled`` values;
  * the coefficient polynomials of the quaternionic generating series
    ``1/sqrt(Delta(X,T)^2 - 4 d(T) X1 X2 X3)`` via Newton iteration on
    multivariate power series (``ibukiyama_coeff``);
  * the closed-form constants attached to a weight triple: the Legendre
    triple-product constant ``c1``, the diagonal kernel value ``p0_diag``,
    and the corrected leading coefficient of the pairing polynomial;
  * the invariant trilinear form ``trilinear_T`` built by pairing against
    the corrected generating-series coefficient, and its exact
    proportionality to the plain triple integral;
  * the squared-integral comparison ``square_compare`` linking S^2 and S^3
    triple products through the tensor embedding;
  * the assembled central-value prediction and the lower-bound prefactor
    with its asymptotic slopes.

Calibration: all identities here are validated against each other in a
single normalization (S^2 measure of total mass 2, S^3 measure of total
mass pi/2, see ``triple_integral_S2``/``triple_integral_S3``).  Residual
constants between conventions are returned explicitly as ``PiScaled``
values, never absorbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .poly import MultiPoly, PiScaled, expectation, monomial_moment

__all__ = [
    "TripleIndex",
    "GenSeriesCoeff",
    "triple_integral_S2",
    "triple_integral_S3",
    "c1",
    "c1_factorial_form",
    "p0_diag",
    "saalschuetz_closed_form",
    "leading_correction",
    "corrected_leading",
    "ibukiyama_coeff",
    "generating_series_specialized",
    "pairing_polynomial",
    "vector_laplacian",
    "harmonicity_defect",
    "trilinear_T",
    "tcompare_constant",
    "square_compare",
    "predicted_central_value",
    "predicted_factor_breakdown",
    "lower_bound_prefactor",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# weight bookkeeping


@dataclass(frozen=True)
class TripleIndex:
    """Degree data for a triple of eigenfunctions with nu1 = nu2 >= nu3.

    The two equal harmonic degrees nu1 = nu2 and the third degree nu3
    determine modular weights k1 = k2 = 2 + 2*nu1 and k3 = 2 + 2*nu3 and
    the derived exponents a = k3 - 2 (always even), a_prime = a / 2 = nu3,
    and b = k1 - k3 = 2*(nu1 - nu3) (always even, >= 0).
    """

    nu1: int
    nu3: int
    level: int = 2

    def __post_init__(self) -> None:
        if self.nu1 < 0 or self.nu3 < 0:
            raise ValueError("degrees must be nonnegative")
        if self.nu3 > self.nu1:
            raise ValueError("third degree must not exceed the repeated degree")
        if self.level < 1:
            raise ValueError("level must be positive")

    @property
    def k1(self) -> int:
        return 2 + 2 * self.nu1

    @property
    def k2(self) -> int:
        return self.k1

    @property
    def k3(self) -> int:
        return 2 + 2 * self.nu3

    @property
    def a(self) -> int:
        return self.k3 - 2

    @property
    def a_prime(self) -> int:
        return self.nu3

    @property
    def b(self) -> int:
        return self.k1 - self.k3

    @property
    def omega(self) -> int:
        """Number of distinct prime divisors of the level."""
        n, count, p = self.level, 0, 2
        while p * p <= n:
            if n % p == 0:
                count += 1
                while n % p == 0:
                    n //= p
            p += 1
        return count + (1 if n > 1 else 0)

    def require_even(self) -> None:
        """The closed formulas below need both a_prime and b even."""
        if self.a_prime % 2 or self.b % 2:
            raise ValueError(
                f"closed formulas require even a'={self.a_prime} and b={self.b}"
            )


# ---------------------------------------------------------------------------
# triple-product integrals

_NORMALIZATIONS = ("raw", "normalized", "calibrated")


def _triple_expect(p1: MultiPoly, p2: MultiPoly, p3: MultiPoly, nvars: int) -> Fraction:
    for p in (p1, p2, p3):
        if p.nvars != nvars:
            raise ValueError(f"expected {nvars}-variable polynomials")
    return expectation(p1 * p2 * p3)


def triple_integral_S2(
    p1: MultiPoly,
    p2: MultiPoly,
    p3: MultiPoly,
    normalization: str = "calibrated",
) -> PiScaled:
    """Exact integral of a product of three 3-variable polynomials over S^2.

    normalization: "raw" uses surface measure (total mass 4 pi),
    "normalized" the probability measure (mass 1), "calibrated" the
    convention of total mass 2 in which the zonal Legendre triple product
    equals the constant c1 exactly.
    """
    e = _triple_expect(p1, p2, p3, 3)
    if normalization == "raw":
        return PiScaled(4 * e, 1)
    if normalization == "normalized":
        return PiScaled(e, 0)
    if normalization == "calibrated":
        return PiScaled(2 * e, 0)
    raise ValueError(f"unknown normalization {normalization!r}")


def triple_integral_S3(
    q1: MultiPoly,
    q2: MultiPoly,
    q3: MultiPoly,
    normalization: str = "calibrated",
) -> PiScaled:
    """Exact integral of a product of three 4-variable polynomials over S^3.

    normalization: "raw" uses surface measure (total mass 2 pi^2),
    "normalized" the probability measure, "calibrated" the convention of
    total mass pi/2 in which the aligned zonal kernel triple of degrees
    (a+b, a+b, a) integrates to exactly pi/2.
    """
    e = _triple_expect(q1, q2, q3, 4)
    if normalization == "raw":
        return PiScaled(2 * e, 2)
    if normalization == "normalized":
        return PiScaled(e, 0)
    if normalization == "calibrated":
        return PiScaled(e / 2, 1)
    raise ValueError(f"unknown normalization {normalization!r}")


# ---------------------------------------------------------------------------
# closed-form constants


def _gamma_half(two_n: int) -> tuple[Fraction, int]:
    """Gamma(two_n / 2) as (rational, count of sqrt(pi) factors).

    For even two_n = 2m this is (m-1)!.  For odd two_n = 2m+1 it is
    (2m)! / (4^m m!) * sqrt(pi).
    """
    if two_n <= 0:
        raise ValueError("gamma argument must be positive")
    if two_n % 2 == 0:
        return Fraction(math.factorial(two_n // 2 - 1)), 0
    m = two_n // 2
    return Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), 1


def c1(a_prime: int, b: int) -> Fraction:
    """Triple-product constant of two degree-(a'+b/2) and one degree-a'
    zonal Legendre harmonics in the calibrated S^2 normalization.

    Evaluates the gamma-quotient closed form; the a' = 0 degeneracy is
    handled by the same expression (the two gamma factors that would merge
    cancel analytically), yielding 2/(b+1).
    """
    if a_prime < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    if a_prime % 2 or b % 2:
        raise ValueError(f"parity violation: a'={a_prime}, b={b} must be even")
    num: list[int] = [3 * a_prime + b + 2, a_prime + 1, a_prime + 1, a_prime + b + 1]
    den: list[int] = [a_prime + 2, a_prime + 2, a_prime + b + 2, 3 * a_prime + b + 3]
    value, halves = _ONE, -2  # the explicit 1/pi contributes -2 half-powers
    for two_n in num:
        r, h = _gamma_half(two_n)
        value, halves = value * r, halves + h
    for two_n in den:
        r, h = _gamma_half(two_n)
        value, halves = value / r, halves - h
    if halves:
        raise ArithmeticError("pi powers did not cancel; parity guard failed")
    return value


def c1_factorial_form(a_prime: int, b: int) -> Fraction:
    """Second closed form of the same constant, in plain factorials."""
    if a_prime % 2 or b % 2:
        raise ValueError(f"parity violation: a'={a_prime}, b={b} must be even")
    s = (3 * a_prime + b) // 2
    return Fraction(
        2
        * math.factorial(a_prime) ** 2
        * math.factorial(a_prime + b)
        * math.factorial(s) ** 2,
        math.factorial(3 * a_prime + b + 1)
        * math.factorial(a_prime // 2) ** 4
        * math.factorial((a_prime + b) // 2) ** 2,
    )


def p0_diag(a_prime: int, b: int) -> Fraction:
    """Diagonal value of the corrected pairing polynomial on aligned unit
    vectors: 2^(b+4a') (3a'+b+1)! a'!^2 (a'+1)! (a'+b)! /
    ((2a')! (b+2a')!^2 b! (a'+b+1)!)."""
    if a_prime < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    return Fraction(
        2 ** (b + 4 * a_prime)
        * math.factorial(3 * a_prime + b + 1)
        * math.factorial(a_prime) ** 2
        * math.factorial(a_prime + 1)
        * math.factorial(a_prime + b),
        math.factorial(2 * a_prime)
        * math.factorial(b + 2 * a_prime) ** 2
        * math.factorial(b)
        * math.factorial(a_prime + b + 1),
    )


def saalschuetz_closed_form(a_prime: int, b: int) -> Fraction:
    """Closed form of the balanced hypergeometric sum that gives the top
    coefficient of the generating-series coefficient polynomial:
    (2a')! (b+2a')!^2 / (a'!^4 (b+a')!^2)."""
    return Fraction(
        math.factorial(2 * a_prime) * math.factorial(b + 2 * a_prime) ** 2,
        math.factorial(a_prime) ** 4 * math.factorial(b + a_prime) ** 2,
    )


def leading_correction(a_prime: int, b: int) -> Fraction:
    """Scalar making the pairing polynomial's top coefficient equal the
    corrected value 2^b 2^(4a') (a'+1)! / ((a'+b+1)! b!)."""
    return corrected_leading(a_prime, b) / saalschuetz_closed_form(a_prime, b)


def corrected_leading(a_prime: int, b: int) -> Fraction:
    """Corrected leading coefficient of the pairing polynomial."""
    return Fraction(
        2 ** (b + 4 * a_prime) * math.factorial(a_prime + 1),
        math.factorial(a_prime + b + 1) * math.factorial(b),
    )


# ---------------------------------------------------------------------------
# generating series: coefficients of 1/sqrt(Delta^2 - 4 d X1 X2 X3)
#
# Coefficient polynomials live in 6 variables (m1, m2, m3, r1, r2, r3); the
# series variables X are handled as sparse dicts exponent -> MultiPoly.

_Series = dict[tuple[int, int, int], MultiPoly]

_M = [MultiPoly.variable(6, i) for i in range(3)]
_R = [MultiPoly.variable(6, 3 + i) for i in range(3)]

IBUKIYAMA_TOTAL_BOUND = 16


def _series_mul(a: _Series, b: _Series, box: tuple[int, int, int], total: int) -> _Series:
    out: _Series = {}
    for e1, p1 in a.items():
        for e2, p2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            if e[0] > box[0] or e[1] > box[1] or e[2] > box[2] or sum(e) > total:
                continue
            q = p1 * p2
            if q.is_zero():
                continue
            if e in out:
                out[e] = out[e] + q
            else:
                out[e] = q
    return {e: p for e, p in out.items() if not p.is_zero()}


def _series_axpy(a: _Series, b: _Series, scale: Fraction) -> _Series:
    out = dict(a)
    for e, p in b.items():
        q = out.get(e)
        q = p * scale if q is None else q + p * scale
        if q.is_zero():
            out.pop(e, None)
        else:
            out[e] = q
    return out


@lru_cache(maxsize=None)
def _delta_terms() -> tuple[tuple[tuple[int, int, int], MultiPoly], ...]:
    m1, m2, m3 = _M
    r1, r2, r3 = _R
    return (
        ((0, 0, 0), MultiPoly.constant(6, 1)),
        ((1, 0, 0), -r1),
        ((0, 1, 0), -r2),
        ((0, 0, 1), -r3),
        ((0, 1, 1), r1 * m1),
        ((1, 0, 1), r2 * m2),
        ((1, 1, 0), r3 * m3),
        ((0, 0, 2), m1 * m2),
        ((2, 0, 0), m2 * m3),
        ((0, 2, 0), m3 * m1),
    )


@lru_cache(maxsize=None)
def _half_det() -> MultiPoly:
    m1, m2, m3 = _M
    r1, r2, r3 = _R
    return (
        MultiPoly.constant(6, 4) * m1 * m2 * m3
        - m1 * r1 * r1
        - m2 * r2 * r2
        - m3 * r3 * r3
        + r1 * r2 * r3
    )


def _newton_inverse_sqrt(f: _Series, box: tuple[int, int, int], total: int, one: MultiPoly) -> _Series:
    """Newton iteration y <- y (3 - F y^2) / 2 for 1/sqrt(F), F(0) = 1."""
    y: _Series = {(0, 0, 0): one}
    depth = min(sum(box), total)
    steps = math.ceil(math.log2(depth + 1)) if depth else 0
    three = one * 3
    for _ in range(steps):
        fyy = _series_mul(f, _series_mul(y, y, box, total), box, total)
        corr = _series_axpy({(0, 0, 0): three}, fyy, Fraction(-1))
        y = {e: p * Fraction(1, 2) for e, p in _series_mul(y, corr, box, total).items()}
    return y


@lru_cache(maxsize=None)
def _inverse_sqrt_series(box: tuple[int, int, int], total: int) -> tuple[tuple[tuple[int, int, int], MultiPoly], ...]:
    delta = dict(_delta_terms())
    f = _series_mul(delta, delta, box, total)
    f = _series_axpy(f, {(1, 1, 1): _half_det()}, Fraction(-4))
    y = _newton_inverse_sqrt(f, box, total, MultiPoly.constant(6, 1))
    return tuple(sorted(y.items()))


def generating_series_specialized(
    m_values: Sequence, r_values: Sequence, total_degree: int
) -> dict[tuple[int, int, int], Fraction]:
    """All series coefficients up to total degree with the six invariants
    replaced by scalars; exact rational output keyed by X exponents."""
    if len(m_values) != 3 or len(r_values) != 3:
        raise ValueError("need three m values and three r values")
    point = [Fraction(v) for v in (*m_values, *r_values)]
    box = (total_degree,) * 3
    one = MultiPoly.constant(0, 1)

    def scalarize(p: MultiPoly) -> MultiPoly:
        return one * p.evaluate(point)

    delta = {e: scalarize(p) for e, p in _delta_terms()}
    f = _series_mul(delta, delta, box, total_degree)
    f = _series_axpy(f, {(1, 1, 1): scalarize(_half_det())}, Fraction(-4))
    y = _newton_inverse_sqrt(f, box, total_degree, one)
    return {e: p.c.get((), _ZERO) for e, p in y.items()}


@dataclass(frozen=True)
class GenSeriesCoeff:
    """One coefficient of the generating series: the polynomial multiplying
    X1^mu1 X2^mu2 X3^mu3, in the six scalar invariants (m1, m2, m3, r1, r2,
    r3) of a triple of 4-vectors (m_i = |v_i|^2, r_1 = 2 v2.v3, r_2 =
    2 v1.v3, r_3 = 2 v1.v2)."""

    indices: tuple[int, int, int]
    poly: MultiPoly

    def vector_degrees(self) -> tuple[int, int, int]:
        """Homogeneity degrees in the three vector arguments."""
        m1, m2, m3 = self.indices
        return (m2 + m3, m1 + m3, m1 + m2)

    def vector_form(self) -> MultiPoly:
        """Expansion in 12 variables (three 4-vectors, slots 0-3, 4-7, 8-11)."""
        def dot(i: int, j: int, scale: int) -> MultiPoly:
            out: dict[tuple[int, ...], Fraction] = {}
            for t in range(4):
                e = [0] * 12
                e[4 * i + t] += 1
                e[4 * j + t] += 1
                out[tuple(e)] = Fraction(scale)
            return MultiPoly(12, out)

        images = [
            dot(0, 0, 1),
            dot(1, 1, 1),
            dot(2, 2, 1),
            dot(1, 2, 2),
            dot(0, 2, 2),
            dot(0, 1, 2),
        ]
        return self.poly.substitute(images)


def ibukiyama_coeff(mu1: int, mu2: int, mu3: int) -> GenSeriesCoeff:
    """Exact power-series coefficient of the inverse square root of the
    quadratic discriminant form, at X1^mu1 X2^mu2 X3^mu3."""
    mu = (mu1, mu2, mu3)
    if min(mu) < 0:
        raise ValueError("series indices must be nonnegative")
    if sum(mu) > IBUKIYAMA_TOTAL_BOUND:
        raise ValueError(
            f"total index {sum(mu)} exceeds configured bound {IBUKIYAMA_TOTAL_BOUND}"
        )
    series = dict(_inverse_sqrt_series(mu, sum(mu)))
    poly = series.get(mu, MultiPoly.zero(6))
    coeff = GenSeriesCoeff(mu, poly)
    want = coeff.vector_degrees()
    for e in poly.c:
        got = (
            2 * e[0] + e[4] + e[5],
            2 * e[1] + e[3] + e[5],
            2 * e[2] + e[3] + e[4],
        )
        if got != want:
            raise ArithmeticError(f"weighted degree {got} != {want} at {e}")
    return coeff


def vector_laplacian(p: MultiPoly, slot: int) -> MultiPoly:
    """Laplacian in one 4-variable block (slot 0, 1 or 2) of a 12-variable
    polynomial; zero output certifies harmonicity in that argument."""
    if p.nvars != 12:
        raise ValueError("expected a 12-variable polynomial")
    lo = 4 * slot
    out: dict[tuple[int, ...], Fraction] = {}
    for e, v in p.c.items():
        for i in range(lo, lo + 4):
            if e[i] >= 2:
                e2 = list(e)
                e2[i] -= 2
                key = tuple(e2)
                w = out.get(key, _ZERO) + v * e[i] * (e[i] - 1)
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
    return MultiPoly(12, out)


def _partial(p: MultiPoly, i: int) -> MultiPoly:
    out: dict[tuple[int, ...], Fraction] = {}
    for e, v in p.c.items():
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = v * e[i]
    return MultiPoly(p.nvars, out)


def harmonicity_defect(coeff: GenSeriesCoeff, slot: int) -> MultiPoly:
    """Laplacian of the vector form in one slot, pushed through the chain
    rule so it stays a 6-variable polynomial (zero iff harmonic).

    For slot 0 (vector v1, invariants m1, r2, r3) the defect is
    2 F_m1 + m1 F_m1m1 + m3 F_r2r2 + m2 F_r3r3 + r2 F_m1r2 + r3 F_m1r3
    + r1 F_r2r3, and cyclically for the other slots; the 12-variable
    Laplacian equals four times this composed with the invariants.
    """
    if slot not in (0, 1, 2):
        raise ValueError("slot must be 0, 1 or 2")
    f = coeff.poly
    # (own m index, the two r indices coupling this slot, the opposite r)
    m_i = slot
    r_pair = [j for j in range(3) if j != slot]  # r indices 2-slot couplings
    # r_k couples slots {0,1,2} \ {k}; slot i appears in r_j for j != i.
    rj, rk = (3 + j for j in r_pair)
    # partner masses: r_j couples slot i with slot (the third index of r_j)
    other_j = next(t for t in range(3) if t != slot and t != r_pair[0])
    other_k = next(t for t in range(3) if t != slot and t != r_pair[1])
    fm = _partial(f, m_i)
    frj = _partial(f, rj)
    frk = _partial(f, rk)
    m = _M
    r = _R
    return (
        fm * 2
        + m[m_i] * _partial(fm, m_i)
        + m[other_j] * _partial(frj, rj)
        + m[other_k] * _partial(frk, rk)
        + r[r_pair[0]] * _partial(fm, rj)
        + r[r_pair[1]] * _partial(fm, rk)
        + r[m_i] * _partial(frj, rk)
    )


# ---------------------------------------------------------------------------
# the invariant trilinear form


@lru_cache(maxsize=None)
def pairing_polynomial(a_prime: int, b: int) -> MultiPoly:
    """Corrected 12-variable pairing polynomial: the generating-series
    coefficient at (a', a', a'+b) in vector form, rescaled so its top
    coefficient is the corrected leading value.  Harmonic in each slot,
    with slot degrees (2a'+b, 2a'+b, 2a')."""
    coeff = ibukiyama_coeff(a_prime, a_prime, a_prime + b)
    return coeff.vector_form() * leading_correction(a_prime, b)


@lru_cache(maxsize=None)
def _moment4(e: tuple[int, int, int, int]) -> Fraction:
    return monomial_moment(e)


_Z4 = (0, 0, 0, 0)


def _pair_slot(p: MultiPoly, q: MultiPoly, slot: int, beta: int) -> MultiPoly:
    """Pair one 4-variable slot of a 12-variable polynomial against q on the
    sphere: sum over terms of p and q of (beta+1) E[x^(e_slot + f)], with the
    slot exponents zeroed in the output.  Fused product-and-integrate; terms
    of mismatched parity are skipped wholesale since their moments vanish.
    """
    by_parity: dict[tuple[int, ...], list[tuple[tuple[int, ...], Fraction]]] = {}
    for f, w in q.c.items():
        by_parity.setdefault(tuple(x & 1 for x in f), []).append((f, w))
    lo = 4 * slot
    out: dict[tuple[int, ...], Fraction] = {}
    for e, v in p.c.items():
        es = e[lo : lo + 4]
        bucket = by_parity.get((es[0] & 1, es[1] & 1, es[2] & 1, es[3] & 1))
        if not bucket:
            continue
        s = _ZERO
        for f, w in bucket:
            s += w * _moment4((es[0] + f[0], es[1] + f[1], es[2] + f[2], es[3] + f[3]))
        if s:
            e2 = e[:lo] + _Z4 + e[lo + 4 :]
            out[e2] = out.get(e2, _ZERO) + v * s
    scale = Fraction(beta + 1)
    return MultiPoly(12, {e: v * scale for e, v in out.items() if v})


def trilinear_T(q1: MultiPoly, q2: MultiPoly, q3: MultiPoly) -> PiScaled:
    """Invariant trilinear form on 4-variable harmonics of degrees
    (a+b, a+b, a): successive reproducing-normalized pairings of the three
    arguments against the corrected pairing polynomial.

    Returns an exact rational (pi power 0 in this calibration).  Triples
    whose third degree is odd admit no symmetric invariant form and give 0.
    """
    for q in (q1, q2, q3):
        if q.nvars != 4 or not q.is_homogeneous():
            raise ValueError("arguments must be homogeneous 4-variable polynomials")
    d1, d2, d3 = q1.degree(), q2.degree(), q3.degree()
    if q1.is_zero() or q2.is_zero() or q3.is_zero():
        return PiScaled(0)
    if d1 != d2:
        raise ValueError(f"first two degrees must match, got {d1} and {d2}")
    if d3 > d1:
        raise ValueError(f"third degree {d3} exceeds repeated degree {d1}")
    if d3 % 2:
        return PiScaled(0)
    a_prime, b = d3 // 2, d1 - d3
    acc = pairing_polynomial(a_prime, b)
    acc = _pair_slot(acc, q1, 0, d1)
    acc = _pair_slot(acc, q2, 1, d2)
    acc = _pair_slot(acc, q3, 2, d3)
    value = acc.c.get((0,) * 12, _ZERO)
    return PiScaled(value, 0)


def tcompare_constant(a_prime: int, b: int) -> PiScaled:
    """Exact proportionality constant between the trilinear form and the
    calibrated S^3 triple integral: 2 p0_diag / pi."""
    return PiScaled(2 * p0_diag(a_prime, b), -1)


# ---------------------------------------------------------------------------
# squared-integral comparison between S^2 and S^3


def square_compare(
    q1: MultiPoly, q2: MultiPoly, q3: MultiPoly
) -> tuple[PiScaled, PiScaled]:
    """Exact two-sided evaluation of the squared-integral identity.

    For 3-variable harmonics of degrees (a'+b/2, a'+b/2, a'), returns

      lhs = calibrated S^3 integral of the three diagonal tensor embeds,
      rhs = pi/(4 c1) * (calibrated S^2 integral of the triple)^2.

    The two sides agree for all degree triples in scope (even a', b); the
    ratio pi/(4 c1) is the stabilizer-volume constant.
    """
    from .poly import tensor_embed

    for q in (q1, q2, q3):
        if q.nvars != 3 or not q.is_homogeneous():
            raise ValueError("arguments must be homogeneous 3-variable polynomials")
    d1, d2, d3 = q1.degree(), q2.degree(), q3.degree()
    if (q1.is_zero() or q2.is_zero() or q3.is_zero()) or d1 != d2 or d3 > d1:
        raise ValueError("degrees must have the shape (a'+b/2, a'+b/2, a')")
    a_prime, b = d3, 2 * (d1 - d3)
    lhs = triple_integral_S3(
        tensor_embed(q1, q1), tensor_embed(q2, q2), tensor_embed(q3, q3), "calibrated"
    )
    s2 = triple_integral_S2(q1, q2, q3, "calibrated")
    rhs = PiScaled(s2.rat * s2.rat / (4 * c1(a_prime, b)), 2 * s2.pi_power + 1)
    return lhs, rhs


# ---------------------------------------------------------------------------
# central-value prediction


def _gamma_quotient(a_prime: int, b: int) -> Fraction:
    """Exact gamma-factor quotient of the assembled central-value formula."""
    if a_prime < 2:
        raise ValueError("gamma quotient needs a' >= 2")
    f = math.factorial
    num = (
        (b + a_prime)
        * a_prime
        * f((a_prime + b) // 2 - 1) ** 2
        * f(a_prime // 2 - 1) ** 4
        * f(3 * a_prime + b + 1)
    )
    den = (
        f(a_prime - 1) ** 2
        * f(2 * a_prime - 1)
        * f((3 * a_prime + b) // 2) ** 2
        * f(a_prime + b - 1)
        * f(2 * a_prime + b) ** 2
    )
    return Fraction(num, den)


def _petersson_value(p) -> tuple[float, float]:
    value = float(getattr(p, "value", p))
    error = float(getattr(p, "error", 0.0))
    return value, error


def predicted_factor_breakdown(
    idx: TripleIndex,
    triple_s2: PiScaled,
    petersson: Sequence,
    input_normalization: str = "gegenbauer",
) -> dict:
    """Every scalar factor of the predicted central value, inspectable.

    ``triple_s2`` is the calibrated S^2 triple integral of the three
    eigenfunctions; ``petersson`` the three Petersson norms (objects with
    ``value``/``error`` or plain floats).  ``input_normalization`` is
    "gegenbauer" when the eigenfunctions are normalized to unit reproducing
    norm, "l2" when they are L^2-normalized in the calibrated S^2 measure
    (this multiplies by (a'+(b+1)/2)^-2 (a'+1/2)^-1).
    """
    idx.require_even()
    ap, b = idx.a_prime, idx.b
    if len(petersson) != 3:
        raise ValueError("need exactly three Petersson norms")
    if input_normalization not in ("gegenbauer", "l2"):
        raise ValueError(f"unknown input normalization {input_normalization!r}")
    gamma_q = _gamma_quotient(ap, b)
    two_exp = 12 * ap + 4 * b - 4 - idx.omega
    pi_exp = 5 + 6 * ap + 2 * b + 2 * triple_s2.pi_power
    triple_sq = triple_s2.rat**2
    renorm = _ONE
    if input_normalization == "l2":
        renorm = Fraction(8, (2 * ap + b + 1) ** 2 * (2 * ap + 1))
    pets = [_petersson_value(p) for p in petersson]
    pet_product = pets[0][0] * pets[1][0] * pets[2][0]
    rel_err = sum(e / v for v, e in pets if v) if all(v for v, _ in pets) else 0.0
    value = (
        (1.0 / idx.level)
        * 2.0**two_exp
        * math.pi**pi_exp
        * pet_product
        * float(gamma_q)
        * float(triple_sq)
        * float(renorm)
    )
    return {
        "value": value,
        "error": abs(value) * rel_err,
        "level_inverse": 1.0 / idx.level,
        "power_of_two_exponent": two_exp,
        "pi_exponent": pi_exp,
        "gamma_quotient": str(gamma_q),
        "petersson_product": pet_product,
        "triple_integral_squared": str(triple_sq),
        "l2_renormalizer": str(renorm),
        "input_normalization": input_normalization,
        "indices": {"a_prime": ap, "b": b, "level": idx.level, "omega": idx.omega},
    }


def predicted_central_value(
    idx: TripleIndex,
    triple_s2: PiScaled,
    petersson: Sequence,
    input_normalization: str = "gegenbauer",
) -> float:
    """Predicted central value of the degree-8 triple product L-function
    from the squared S^2 triple integral and the three Petersson norms."""
    return predicted_factor_breakdown(idx, triple_s2, petersson, input_normalization)[
        "value"
    ]


# ---------------------------------------------------------------------------
# lower-bound prefactor and its growth exponents


def lower_bound_prefactor(idx: TripleIndex) -> tuple[float, float]:
    """Positive prefactor multiplying the squared triple integral in the
    central-value lower bound, before and after L^2 renormalization of the
    inputs.  Computed through log-gamma for large indices."""
    ap, b = idx.a_prime, idx.b
    if ap < 1:
        raise ValueError("prefactor needs a' >= 1")
    lg = math.lgamma
    log_before = (
        (-9 - idx.omega) * math.log(2.0)
        + 2.0 * math.log(math.pi)
        + 2.0 * math.log(ap)
        + math.log(2 * ap + 1)
        + math.log(ap + b)
        + 2.0 * math.log(b + 2 * ap + 1)
        + 2.0 * lg((ap + b) / 2.0)
        + lg(3 * ap + b + 2.0)
        + 4.0 * lg(ap / 2.0)
        - 2.0 * lg(float(ap))
        - 2.0 * lg((3 * ap + b) / 2.0 + 1.0)
        - lg(float(ap + b))
    )
    log_renorm = math.log(8.0) - 2.0 * math.log(2 * ap + b + 1.0) - math.log(2 * ap + 1.0)
    return math.exp(log_before), math.exp(log_before + log_renorm)


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need at least two matched points")
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    num = sum((x - mx) * (y - my) for x, y in zip(lx, ly))
    den = sum((x - mx) ** 2 for x in lx)
    return num / den
