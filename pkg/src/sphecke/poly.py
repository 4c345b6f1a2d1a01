"""Exact multivariate polynomials and harmonic analysis on S^2 and S^3.

Coefficients are rational (``fractions.Fraction``) throughout; sphere
integrals are exact via the classical all-even monomial moment formula and
carried as :class:`PiScaled` values (rational times an integer power of pi),
so normalization conventions stay visible instead of dissolving into floats.

Two scalar products coexist and are always named explicitly:

- the *reproducing* (Gegenbauer) products ``inner_s2`` / ``inner_s3``,
  normalized so the zonal kernels of :func:`kernel_S2` / :func:`kernel_S3`
  reproduce point evaluation;
- the *L2 probability* product ``E[PQ]`` over the normalized sphere measure
  (and its "mass 2" / "mass pi/2" calibrated variants used by the trilinear
  identities, exposed in :mod:`sphecke.trilinear`).

Conversion factors between them are explicit operations, never implicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .quat import Quaternion

__all__ = [
    "PiScaled",
    "MultiPoly",
    "laplacian",
    "harmonic_decompose",
    "harmonic_project",
    "sphere_integral",
    "monomial_moment",
    "HarmonicBasis",
    "basis",
    "harmonic_dimension",
    "gegenbauer_1d",
    "legendre_1d",
    "kernel_S3",
    "kernel_S2",
    "inner_s2",
    "inner_s3",
    "tensor_embed",
    "conjugation_components",
    "sphere_quadrature",
    "quadrature_integral",
    "poly_to_text",
    "poly_from_text",
    "l2_probability_norm_sq",
    "vilenkin_norm_sq",
    "reproducing_to_vilenkin_l2_sq",
]


@dataclass(frozen=True)
class PiScaled:
    """Exact value rational * pi**pi_power.

    Addition requires matching pi powers (a mismatch is a normalization bug
    by construction, so it raises); multiplication adds the powers.  Zero is
    canonicalized to pi_power 0 so equality behaves.
    """

    rat: Fraction
    pi_power: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "rat", Fraction(self.rat))
        if self.rat == 0:
            object.__setattr__(self, "pi_power", 0)

    def __add__(self, other: "PiScaled") -> "PiScaled":
        if not isinstance(other, PiScaled):
            return NotImplemented
        if self.rat == 0:
            return other
        if other.rat == 0:
            return self
        if self.pi_power != other.pi_power:
            raise ArithmeticError(
                f"cannot add pi^{self.pi_power} and pi^{other.pi_power} terms"
            )
        return PiScaled(self.rat + other.rat, self.pi_power)

    def __neg__(self) -> "PiScaled":
        return PiScaled(-self.rat, self.pi_power)

    def __sub__(self, other: "PiScaled") -> "PiScaled":
        return self + (-other)

    def __mul__(self, other) -> "PiScaled":
        if isinstance(other, PiScaled):
            return PiScaled(self.rat * other.rat, self.pi_power + other.pi_power)
        return PiScaled(self.rat * Fraction(other), self.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PiScaled":
        if isinstance(other, PiScaled):
            if other.rat == 0:
                raise ZeroDivisionError("division by zero PiScaled")
            return PiScaled(self.rat / other.rat, self.pi_power - other.pi_power)
        return PiScaled(self.rat / Fraction(other), self.pi_power)

    def __bool__(self) -> bool:
        return self.rat != 0

    def __float__(self) -> float:
        return float(self.rat) * math.pi**self.pi_power

    def __repr__(self) -> str:
        if self.pi_power == 0:
            return f"PiScaled({self.rat})"
        return f"PiScaled({self.rat}, pi^{self.pi_power})"


_ZERO = Fraction(0)


class MultiPoly:
    """Sparse exact polynomial in ``nvars`` variables.

    Terms live in a dict mapping exponent tuples to nonzero Fractions.  The
    public harmonic-space API uses 3 variables (trace-zero quaternions, S^2)
    and 4 variables (quaternions, S^3); intermediate constructions use other
    arities internally.  Instances are immutable by convention.
    """

    __slots__ = ("nvars", "c")

    def __init__(self, nvars: int, coeffs: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    clean[tuple(e)] = v
        self.c = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "MultiPoly":
        return cls(nvars, {tuple([0] * nvars): Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultiPoly":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, _ZERO) + v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
        r = MultiPoly.__new__(MultiPoly)
        r.nvars = self.nvars
        r.c = out
        return r

    def __neg__(self) -> "MultiPoly":
        r = MultiPoly.__new__(MultiPoly)
        r.nvars = self.nvars
        r.c = {e: -v for e, v in self.c.items()}
        return r

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if self.nvars != other.nvars:
                raise ValueError("variable count mismatch")
            out: dict[tuple[int, ...], Fraction] = {}
            for e1, v1 in self.c.items():
                for e2, v2 in other.c.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    w = out.get(e, _ZERO) + v1 * v2
                    if w:
                        out[e] = w
                    else:
                        out.pop(e, None)
            r = MultiPoly.__new__(MultiPoly)
            r.nvars = self.nvars
            r.c = out
            return r
        s = Fraction(other)
        if s == 0:
            return MultiPoly.zero(self.nvars)
        r = MultiPoly.__new__(MultiPoly)
        r.nvars = self.nvars
        r.c = {e: v * s for e, v in self.c.items()}
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.c.items())))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        return max((sum(e) for e in self.c), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.c}
        return len(degs) <= 1

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms sorted graded-lexicographically (ascending exponent tuples)."""
        return sorted(self.c.items(), key=lambda t: (sum(t[0]), t[0]))

    def diff(self, var: int) -> "MultiPoly":
        out: dict[tuple[int, ...], Fraction] = {}
        for e, v in self.c.items():
            if e[var] == 0:
                continue
            e2 = list(e)
            e2[var] -= 1
            out[tuple(e2)] = v * e[var]
        return MultiPoly(self.nvars, out)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a point of Fractions, floats, or complex numbers."""
        if len(point) != self.nvars:
            raise ValueError("point arity mismatch")
        total = None
        for e, v in self.c.items():
            acc = None
            for x, p in zip(point, e):
                if p:
                    f = x**p
                    acc = f if acc is None else acc * f
            term = v if acc is None else acc * v
            total = term if total is None else total + term
        if total is None:
            return 0 * point[0] if self.nvars else 0
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        return float(self.evaluate([float(x) for x in point]))

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by images[i] (all of equal arity)."""
        if len(images) != self.nvars:
            raise ValueError("need one image polynomial per variable")
        m = images[0].nvars
        pows: list[list[MultiPoly]] = [[MultiPoly.constant(m, 1)] for _ in range(self.nvars)]
        out = MultiPoly.zero(m)
        for e, v in self.c.items():
            term = MultiPoly.constant(m, v)
            for i, p in enumerate(e):
                while len(pows[i]) <= p:
                    pows[i].append(pows[i][-1] * images[i])
                if p:
                    term = term * pows[i][p]
            out = out + term
        return out

    def embed(self, nvars: int, var_map: Sequence[int]) -> "MultiPoly":
        """View this polynomial inside a larger ring, variable i -> var_map[i]."""
        out: dict[tuple[int, ...], Fraction] = {}
        for e, v in self.c.items():
            e2 = [0] * nvars
            for i, p in enumerate(e):
                e2[var_map[i]] += p
            out[tuple(e2)] = v
        return MultiPoly(nvars, out)

    def coefficient_scale(self) -> Fraction:
        """Scale that makes coefficients primitive integers (see primitive())."""
        if not self.c:
            return Fraction(1)
        den = 1
        for v in self.c.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        num = 0
        for v in self.c.values():
            num = math.gcd(num, abs(v.numerator * (den // v.denominator)))
        lead = self.terms()[-1][1]
        sign = 1 if lead > 0 else -1
        return Fraction(sign * den, num)

    def primitive(self) -> "MultiPoly":
        """Integer-primitive rescaling with positive leading (graded-lex) term."""
        return self * self.coefficient_scale()

    def __repr__(self) -> str:
        if not self.c:
            return "MultiPoly(0)"
        parts = [f"{v}*x^{e}" for e, v in self.terms()[:6]]
        more = "" if len(self.c) <= 6 else f" +{len(self.c) - 6} terms"
        return f"MultiPoly({' + '.join(parts)}{more})"


def radius_sq(nvars: int) -> MultiPoly:
    return MultiPoly(nvars, {tuple(2 * (i == j) for i in range(nvars)): Fraction(1) for j in range(nvars)})


def laplacian(p: MultiPoly) -> MultiPoly:
    """Sum of second partial derivatives."""
    out = MultiPoly.zero(p.nvars)
    for i in range(p.nvars):
        out = out + p.diff(i).diff(i)
    return out


def harmonic_decompose(p: MultiPoly) -> list[MultiPoly]:
    """Layers [h_0, h_1, ...] with p = sum_k r^(2k) h_k, each h_k harmonic.

    Uses Delta(r^(2k) h) = 2k (2 deg(h) + n + 2k - 2) r^(2k-2) h to solve the
    triangular system exactly; input must be homogeneous.
    """
    if p.is_zero():
        return []
    if not p.is_homogeneous():
        raise ValueError("harmonic decomposition needs a homogeneous input")
    m = p.degree()
    n = p.nvars
    if m <= 1:
        return [p]
    lp = laplacian(p)
    if lp.is_zero():
        return [p]
    sub = harmonic_decompose(lp)
    layers: list[MultiPoly] = [MultiPoly.zero(n) for _ in range(len(sub) + 1)]
    r2 = radius_sq(n)
    rest = MultiPoly.zero(n)
    for j, d in enumerate(sub):
        k = j + 1
        mu = 2 * k * (2 * m - 2 * k + n - 2)
        h = d * Fraction(1, mu)
        layers[k] = h
        rest = rest + (r2**k) * h
    layers[0] = p - rest
    return layers


def harmonic_project(p: MultiPoly) -> MultiPoly:
    """Harmonic component of a homogeneous polynomial (idempotent, exact)."""
    if p.is_zero():
        return p
    return harmonic_decompose(p)[0]


@lru_cache(maxsize=None)
def _moment_cached(e: tuple[int, ...]) -> Fraction:
    if any(v % 2 for v in e):
        return _ZERO
    n = len(e)
    num = 1
    for v in e:
        for odd in range(v - 1, 0, -2):
            num *= odd
    den = 1
    for j in range(sum(e) // 2):
        den *= n + 2 * j
    return Fraction(num, den)


def monomial_moment(e: tuple[int, ...]) -> Fraction:
    """E[x^e] over the unit sphere, probability measure, any dimension."""
    return _moment_cached(tuple(e))


def expectation(p: MultiPoly) -> Fraction:
    """E[p] over the unit sphere of the polynomial's own dimension."""
    total = _ZERO
    for e, v in p.c.items():
        m = _moment_cached(e)
        if m:
            total += v * m
    return total


def sphere_integral(p: MultiPoly, normalized: bool = False) -> PiScaled:
    """Exact sphere integral of p.

    3 variables integrate over S^2 (raw measure 4*pi), 4 variables over S^3
    (raw measure 2*pi^2); ``normalized`` divides by the total measure.
    """
    if p.nvars not in (3, 4):
        raise ValueError("sphere_integral expects 3 or 4 variables")
    mean = expectation(p)
    if normalized:
        return PiScaled(mean)
    if p.nvars == 3:
        return PiScaled(4 * mean, 1)
    return PiScaled(2 * mean, 2)


def harmonic_dimension(sphere_dim: int, degree: int) -> int:
    if sphere_dim == 2:
        return 2 * degree + 1
    if sphere_dim == 3:
        return (degree + 1) ** 2
    raise ValueError("sphere_dim must be 2 or 3")


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree, graded-lex ascending."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree + 1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    out.sort()
    return out


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthogonal exact basis of the degree-``degree`` harmonic space.

    Elements are integer-primitive and pairwise orthogonal; ``gram`` holds
    the exact inner products in the product named by ``normalization``
    ("L2-probability": E[b_i b_j] over the probability sphere measure).
    """

    sphere_dim: int
    degree: int
    elements: tuple[MultiPoly, ...]
    gram: tuple[tuple[PiScaled, ...], ...]
    normalization: str = "L2-probability"

    @property
    def dimension(self) -> int:
        return len(self.elements)


@lru_cache(maxsize=None)
def basis(sphere_dim: int, degree: int) -> HarmonicBasis:
    """Orthogonal basis via harmonic projection + exact Gram-Schmidt.

    Monomials are processed in graded-lex order; dependent projections are
    dropped exactly; each accepted vector is rescaled to primitive integer
    coefficients, so the construction is deterministic.
    """
    nvars = sphere_dim + 1
    accepted: list[MultiPoly] = []
    norms: list[Fraction] = []
    for e in monomials(nvars, degree):
        v = harmonic_project(MultiPoly(nvars, {e: Fraction(1)}))
        for b, nb in zip(accepted, norms):
            coef = expectation(v * b) / nb
            if coef:
                v = v - b * coef
        if v.is_zero():
            continue
        v = v.primitive()
        accepted.append(v)
        norms.append(expectation(v * v))
        if len(accepted) == harmonic_dimension(sphere_dim, degree):
            break
    if len(accepted) != harmonic_dimension(sphere_dim, degree):
        raise ArithmeticError(
            f"harmonic basis rank {len(accepted)} != expected "
            f"{harmonic_dimension(sphere_dim, degree)}"
        )
    gram = tuple(
        tuple(PiScaled(norms[i]) if i == j else PiScaled(0) for j in range(len(accepted)))
        for i in range(len(accepted))
    )
    return HarmonicBasis(sphere_dim, degree, tuple(accepted), gram)


# ---------------------------------------------------------------------------
# Gegenbauer / Legendre kernels


@lru_cache(maxsize=None)
def gegenbauer_1d(alpha: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending powers of t) of the degree-alpha zonal kernel
    polynomial 2^alpha * sum_j (-1)^j (alpha-j)! / (j! (alpha-2j)! 2^(2j))
    t^(alpha-2j)."""
    if alpha < 0:
        raise ValueError("degree must be nonnegative")
    coeffs = [Fraction(0)] * (alpha + 1)
    for j in range(alpha // 2 + 1):
        coeffs[alpha - 2 * j] = Fraction(
            (-1) ** j * 2**alpha * math.factorial(alpha - j),
            math.factorial(j) * math.factorial(alpha - 2 * j) * 4**j,
        )
    return tuple(coeffs)


@lru_cache(maxsize=None)
def legendre_1d(alpha: int) -> tuple[Fraction, ...]:
    """Legendre polynomial coefficients, ascending powers of t."""
    coeffs = [Fraction(0)] * (alpha + 1)
    for j in range(alpha // 2 + 1):
        coeffs[alpha - 2 * j] = Fraction(
            (-1) ** j * math.comb(alpha, j) * math.comb(2 * alpha - 2 * j, alpha),
            2**alpha,
        )
    return tuple(coeffs)


def _zonal_from_1d(
    coeffs: Sequence[Fraction], xdotw: MultiPoly, nx: MultiPoly, nw: Fraction
) -> MultiPoly:
    """Homogenize sum c_m t^m with t = xdotw / sqrt(nx*nw): even gaps only."""
    alpha = len(coeffs) - 1
    out = MultiPoly.zero(xdotw.nvars)
    for m, cm in enumerate(coeffs):
        if cm == 0:
            continue
        gap = alpha - m
        if gap % 2:
            raise ArithmeticError("zonal polynomial has mixed parity")
        j = gap // 2
        out = out + (xdotw**m) * (nx**j) * (cm * nw**j)
    return out


def kernel_S3(alpha: int, w: Quaternion) -> MultiPoly:
    """Degree-alpha zonal reproducing kernel on S^3 centered at w (4 vars).

    Reproduces point evaluation under inner_s3: <kernel_S3(a,w), Q> = Q(w)
    for harmonic Q of degree a.
    """
    nw = w.norm()
    if nw == 0:
        raise ValueError("kernel center must be nonzero")
    wc = w.components()
    xdotw = MultiPoly(
        4, {tuple(int(i == j) for i in range(4)): Fraction(wc[j]) for j in range(4) if wc[j]}
    )
    return _zonal_from_1d(gegenbauer_1d(alpha), xdotw, radius_sq(4), nw)


def _fraction_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


def kernel_S2(alpha: int, z: Quaternion) -> MultiPoly:
    """Degree-alpha zonal reproducing kernel on S^2 at a trace-zero unit z.

    Reproduces point evaluation under inner_s2 (the Legendre-normalized
    zonal family).  Centers of non-unit norm are accepted when the norm is a
    perfect rational square (Pythagorean lattice directions); the kernel is
    then taken at z/|z| exactly.
    """
    if not z.is_trace_zero():
        raise ValueError("kernel center must be trace-zero")
    nz = z.norm()
    if nz == 0:
        raise ValueError("kernel center must be nonzero")
    s = _fraction_sqrt(nz)
    if s is None:
        raise ValueError("kernel center norm must be a perfect rational square")
    zc = [c / s for c in z.components()[1:]]
    xdotz = MultiPoly(
        3, {tuple(int(i == j) for i in range(3)): Fraction(zc[j]) for j in range(3) if zc[j]}
    )
    return _zonal_from_1d(legendre_1d(alpha), xdotz, radius_sq(3), Fraction(1))


def _common_degree(p: MultiPoly, q: MultiPoly) -> int:
    if not (p.is_homogeneous() and q.is_homogeneous()):
        raise ValueError("inner products require homogeneous arguments")
    dp, dq = p.degree(), q.degree()
    if dp >= 0 and dq >= 0 and dp != dq:
        raise ValueError(f"degree mismatch {dp} != {dq}")
    return max(dp, dq, 0)


def inner_s2(p: MultiPoly, q: MultiPoly) -> Fraction:
    """Reproducing-normalized product on degree-nu 3-variable harmonics:
    (2 nu + 1) E[p q]."""
    nu = _common_degree(p, q)
    return (2 * nu + 1) * expectation(p * q)


def inner_s3(p: MultiPoly, q: MultiPoly) -> Fraction:
    """Reproducing-normalized product on degree-beta 4-variable harmonics:
    (beta + 1) E[p q]."""
    beta = _common_degree(p, q)
    return (beta + 1) * expectation(p * q)


# ---------------------------------------------------------------------------
# tensor identification U_nu x U_nu -> U_{2 nu}


@lru_cache(maxsize=None)
def conjugation_components() -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Trace-zero components of d * x * conj(d) in the 7-variable ring.

    Variables 0..3 are the quaternion d, variables 4..6 the trace-zero x.
    Each component is linear in x and quadratic in d.
    """
    n = 7
    d = [MultiPoly.variable(n, i) for i in range(4)]
    x = [MultiPoly.zero(n)] + [MultiPoly.variable(n, 4 + i) for i in range(3)]

    def qmul(a, b):
        return (
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        )

    dconj = (d[0], -d[1], -d[2], -d[3])
    prod = qmul(qmul(d, x), dconj)
    if not prod[0].is_zero():
        raise ArithmeticError("conjugation left the trace-zero space")
    return prod[1], prod[2], prod[3]


def tensor_embed(p1: MultiPoly, p2: MultiPoly) -> MultiPoly:
    """Identify p1 (x) p2 (degree-nu 3-variable harmonics) with a 4-variable
    harmonic of degree 2 nu.

    The image evaluates d |-> <<p2(x), p1(d x conj(d))>> with the pairing in
    the x variable; bilinear in (p1, p2).
    """
    if p1.nvars != 3 or p2.nvars != 3:
        raise ValueError("tensor_embed expects 3-variable inputs")
    if not (p1.is_homogeneous() and p2.is_homogeneous()):
        raise ValueError("tensor_embed expects homogeneous inputs")
    if p1.is_zero() or p2.is_zero():
        return MultiPoly.zero(4)
    nu = p1.degree()
    if p2.degree() != nu:
        raise ValueError(f"degree mismatch {p1.degree()} != {p2.degree()}")
    comp = conjugation_components()
    inner = p1.substitute(list(comp))  # 7-var: deg 2nu in d, nu in x
    integrand = inner * p2.embed(7, [4, 5, 6])
    out: dict[tuple[int, ...], Fraction] = {}
    for e, v in integrand.c.items():
        m = _moment_cached(e[4:])
        if not m:
            continue
        ed = e[:4]
        w = out.get(ed, _ZERO) + v * m
        if w:
            out[ed] = w
        else:
            out.pop(ed, None)
    return MultiPoly(4, out) * (2 * nu + 1)


# ---------------------------------------------------------------------------
# quadrature (floating point, used for cross-checks and experiments)


@lru_cache(maxsize=None)
def sphere_quadrature(sphere_dim: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes/weights on the sphere, probability-normalized.

    Exact (to roundoff) for polynomial integrands of total degree
    <= 2*order - 1: Gauss-Legendre in cos(theta), uniform azimuthal grid,
    and a second-kind Chebyshev rule for the extra S^3 angle.
    """
    t, wt = np.polynomial.legendre.leggauss(order)
    m = 2 * order + 1
    phi = 2.0 * np.pi * np.arange(m) / m
    st = np.sqrt(1.0 - t * t)
    if sphere_dim == 2:
        x = np.outer(st, np.cos(phi)).ravel()
        y = np.outer(st, np.sin(phi)).ravel()
        z = np.repeat(t, m)
        w = np.repeat(wt, m) / (2.0 * m)
        return np.column_stack([x, y, z]), w
    if sphere_dim == 3:
        k = np.arange(1, order + 1)
        chi = k * np.pi / (order + 1)
        wchi = np.sin(chi) ** 2 * (np.pi / (order + 1))  # sums to pi/2
        cc, ss = np.cos(chi), np.sin(chi)
        pts = []
        ws = []
        for ci, si, wc in zip(cc, ss, wchi):
            x0 = np.full(len(t) * m, ci)
            x1 = np.repeat(si * t, m)
            x2 = (si * np.outer(st, np.cos(phi))).ravel()
            x3 = (si * np.outer(st, np.sin(phi))).ravel()
            pts.append(np.column_stack([x0, x1, x2, x3]))
            ws.append(np.repeat(wt, m) * wc / m)
        w = np.concatenate(ws) / np.pi  # normalize: sum w = 1
        return np.vstack(pts), w
    raise ValueError("sphere_dim must be 2 or 3")


def quadrature_integral(p: MultiPoly, order: int | None = None) -> float:
    """Float sphere integral of p (probability measure) via sphere_quadrature."""
    if p.nvars not in (3, 4):
        raise ValueError("quadrature_integral expects 3 or 4 variables")
    if order is None:
        order = max(2, p.degree() // 2 + 1)
    pts, w = sphere_quadrature(p.nvars - 1, order)
    cols = [pts[:, i] for i in range(p.nvars)]
    vals = np.zeros(len(w))
    for e, v in p.c.items():
        term = np.full(len(w), float(v))
        for i, k in enumerate(e):
            if k:
                term = term * cols[i] ** k
        vals += term
    return float(np.dot(vals, w))


# ---------------------------------------------------------------------------
# normalization conversions (explicit, never implicit)


def l2_probability_norm_sq(p: MultiPoly) -> Fraction:
    """E[p^2] over the probability sphere measure."""
    return expectation(p * p)


def vilenkin_norm_sq(p: MultiPoly) -> PiScaled:
    """Squared L2 norm in the calibrated measures of total mass 2 (S^2) and
    pi/2 (S^3) used by the trilinear identities."""
    e = expectation(p * p)
    if p.nvars == 3:
        return PiScaled(2 * e)
    if p.nvars == 4:
        return PiScaled(e / 2, 1)
    raise ValueError("expected 3 or 4 variables")


def reproducing_to_vilenkin_l2_sq(nu: int) -> Fraction:
    """Squared calibrated-L2 norm of a degree-nu S^2 harmonic normalized to
    <<P,P>> = 1; its inverse square root is the renormalizer the central
    value formula applies when switching input conventions."""
    return Fraction(2, 2 * nu + 1)


# ---------------------------------------------------------------------------
# plain-text serialization


def poly_to_text(p: MultiPoly) -> str:
    """One `e0,e1,...:num/den` line per term, graded-lex order."""
    lines = [f"# nvars={p.nvars}"]
    for e, v in p.terms():
        lines.append(",".join(map(str, e)) + f":{v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def poly_from_text(text: str) -> MultiPoly:
    nvars = None
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "nvars=" in line:
                nvars = int(line.split("nvars=")[1])
            continue
        lhs, rhs = line.split(":")
        e = tuple(int(s) for s in lhs.split(","))
        num, den = rhs.split("/")
        coeffs[e] = Fraction(int(num), int(den))
        if nvars is None:
            nvars = len(e)
        elif len(e) != nvars:
            raise ValueError("inconsistent exponent arity")
    if nvars is None:
        raise ValueError("empty polynomial text without nvars header")
    return MultiPoly(nvars, coeffs)
