"""Independent oracles used to derive expected test values.

Everything in here is deliberately written from first principles, avoiding
the code paths under test: brute-force lattice scans, generic numerical
quadrature, naive q-series products, direct combinatorial sums.  Expected
values frozen into the test modules were computed with these functions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


# ---------------------------------------------------------------------------
# quaternion lattice oracles


def divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def brute_force_shell_count(n: int, include_half_integers: bool) -> int:
    """Count lattice quaternions of norm n by a direct box scan.

    Independent of the enumeration under test: loops over true (not doubled)
    coordinates for the integer part and over all-odd doubled tuples for the
    half-integer part, checking the norm directly.
    """
    count = 0
    b = math.isqrt(n)
    for x0 in range(-b, b + 1):
        for x1 in range(-b, b + 1):
            for x2 in range(-b, b + 1):
                r = n - x0 * x0 - x1 * x1 - x2 * x2
                if r < 0:
                    continue
                x3 = math.isqrt(r)
                if x3 * x3 == r:
                    count += 1 if x3 == 0 else 2
    if include_half_integers:
        db = math.isqrt(4 * n)
        rng = range(-db if db % 2 else -db + 1, db + 1, 2)
        for d0 in rng:
            for d1 in rng:
                for d2 in rng:
                    r = 4 * n - d0 * d0 - d1 * d1 - d2 * d2
                    if r < 0:
                        continue
                    d3 = math.isqrt(r)
                    if d3 * d3 == r and d3 % 2 == 1:
                        count += 2
    return count


# ---------------------------------------------------------------------------
# sphere quadrature oracles (generic, not exactness-tuned)


def quad_sphere2(f, n_polar: int = 48) -> float:
    """Numerical integral of f(x, y, z) over S^2 w.r.t. the probability measure.

    Gauss-Legendre in cos(theta) x uniform azimuthal grid; exact for
    polynomials of degree <= 2*n_polar - 1 in the polar part.
    """
    t, w = np.polynomial.legendre.leggauss(n_polar)
    m = 2 * n_polar + 1
    phi = 2.0 * np.pi * np.arange(m) / m
    st = np.sqrt(1.0 - t**2)
    total = 0.0
    for ti, sti, wi in zip(t, st, w):
        vals = f(sti * np.cos(phi), sti * np.sin(phi), np.full(m, ti))
        total += wi * float(np.sum(vals)) / m
    return total / 2.0


def quad_sphere3(f, n_polar: int = 48) -> float:
    """Numerical integral of f(x0,x1,x2,x3) over S^3, probability measure.

    Chebyshev (second kind) rule in the first polar angle handles the
    sin^2 weight exactly; Gauss-Legendre + uniform grid below it.
    """
    mchi = n_polar
    k = np.arange(1, mchi + 1)
    chi = k * np.pi / (mchi + 1)
    wchi = (np.pi / (mchi + 1)) * np.sin(chi) ** 2  # integrates f(cos chi) sin^2 chi dchi
    t, w = np.polynomial.legendre.leggauss(n_polar)
    m = 2 * n_polar + 1
    phi = 2.0 * np.pi * np.arange(m) / m
    st = np.sqrt(1.0 - t**2)
    total = 0.0
    for ci, wc in zip(np.cos(chi), wchi):
        s = math.sqrt(max(0.0, 1.0 - ci * ci))
        for ti, sti, wi in zip(t, st, w):
            vals = f(
                np.full(m, ci),
                np.full(m, s * ti),
                s * sti * np.cos(phi),
                s * sti * np.sin(phi),
            )
            total += wc * wi * float(np.sum(vals)) / m
    # total now approximates (2/pi)^-1 ... normalize: volume of S^3 in these
    # coordinates is int sin^2 chi dchi * 2 * 2pi / (2pi) handled implicitly:
    # sum wchi = pi/2, sum w = 2, mean over phi = 1  => divide by pi.
    return total / np.pi


def quad_monomial_sphere2(e: tuple[int, int, int], n_polar: int = 32) -> float:
    return quad_sphere2(lambda x, y, z: x ** e[0] * y ** e[1] * z ** e[2], n_polar)


def quad_monomial_sphere3(e: tuple[int, int, int, int], n_polar: int = 32) -> float:
    return quad_sphere3(
        lambda a, b, c, d: a ** e[0] * b ** e[1] * c ** e[2] * d ** e[3], n_polar
    )


# ---------------------------------------------------------------------------
# combinatorial oracles


@lru_cache(maxsize=None)
def double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    return n * double_factorial(n - 2)


def monomial_sphere_moment(e: tuple[int, ...]) -> Fraction:
    """Exact E[x^e] over the unit sphere in len(e) variables (probability).

    Classical formula: zero unless all exponents are even, else
    prod (e_i - 1)!! / prod_{j=0}^{|e|/2-1} (n + 2j).
    """
    if any(v % 2 for v in e):
        return Fraction(0)
    n = len(e)
    num = 1
    for v in e:
        num *= double_factorial(v - 1)
    den = 1
    s = sum(e) // 2
    for j in range(s):
        den *= n + 2 * j
    return Fraction(num, den)


def saalschuetz_sum(ap: int, b: int) -> Fraction:
    """Direct evaluation of the balanced terminating hypergeometric sum.

    sum_alpha C(2ap-2alpha, ap-alpha) * C(2ap+b+alpha, 3alpha+b)
              * (3alpha+b)! / (alpha!^2 (alpha+b)!)
    """
    total = Fraction(0)
    for alpha in range(ap + 1):
        total += (
            Fraction(math.comb(2 * ap - 2 * alpha, ap - alpha))
            * math.comb(2 * ap + b + alpha, 3 * alpha + b)
            * math.factorial(3 * alpha + b)
            / (math.factorial(alpha) ** 2 * math.factorial(alpha + b))
        )
    return total


def saalschuetz_closed_form(ap: int, b: int) -> Fraction:
    return Fraction(
        math.factorial(2 * ap) * math.factorial(b + 2 * ap) ** 2,
        math.factorial(ap) ** 4 * math.factorial(b + ap) ** 2,
    )


def multinomial_inverse_square_coeff(e1: int, e2: int, e3: int) -> int:
    """Coefficient of X1^e1 X2^e2 X3^e3 in (1 - X1 - X2 - X3)^(-2).

    (1-u)^(-2) = sum (m+1) u^m expanded multinomially.
    """
    m = e1 + e2 + e3
    return (m + 1) * math.comb(m, e1) * math.comb(m - e1, e2)


def legendre_poly_coeffs(n: int) -> list[Fraction]:
    """Coefficients of the Legendre polynomial P_n, index = power of t."""
    c = [Fraction(0)] * (n + 1)
    for j in range(n // 2 + 1):
        c[n - 2 * j] = Fraction((-1) ** j * math.comb(n, j) * math.comb(2 * n - 2 * j, n), 2**n)
    return c


def legendre_triple_integral(beta: int, a: int, n_nodes: int = 80) -> float:
    """int_{-1}^{1} P_beta(t)^2 P_a(t) dt by Gauss-Legendre quadrature."""
    t, w = np.polynomial.legendre.leggauss(n_nodes)
    cb = [float(x) for x in legendre_poly_coeffs(beta)]
    ca = [float(x) for x in legendre_poly_coeffs(a)]
    pb = np.polynomial.polynomial.polyval(t, cb)
    pa = np.polynomial.polynomial.polyval(t, ca)
    return float(np.sum(w * pb * pb * pa))


def chebyshev_u_coeffs(n: int) -> list[int]:
    """Coefficients of the Chebyshev polynomial U_n, index = power of t."""
    c = [0] * (n + 1)
    for j in range(n // 2 + 1):
        c[n - 2 * j] = (-1) ** j * math.comb(n - j, j) * 2 ** (n - 2 * j)
    return c


# ---------------------------------------------------------------------------
# q-series oracles


def eta_product_8_coeffs(n_max: int) -> list[int]:
    """Coefficients a_1..a_n_max of q * prod (1-q^n)^8 (1-q^{2n})^8.

    Naive truncated polynomial multiplication, one factor at a time.
    """
    c = [0] * (n_max + 1)
    c[0] = 1
    for n in range(1, n_max + 1):
        for rep in range(8):
            for i in range(n_max, n - 1, -1):
                c[i] -= c[i - n]
        if 2 * n <= n_max:
            for rep in range(8):
                for i in range(n_max, 2 * n - 1, -1):
                    c[i] -= c[i - 2 * n]
    return [0] + c[: n_max]  # shift by the leading q; index n = coefficient of q^n


def gauss_legendre_check() -> float:
    """Smoke value used to validate the quadrature helpers themselves."""
    return quad_sphere2(lambda x, y, z: x * x)


# ---------------------------------------------------------------------------
# L-series oracles


def euler_poly_from_roots(roots) -> np.ndarray:
    """Coefficients of prod (1 - r X) from explicit complex roots.

    numpy's poly builds the monic polynomial prod (X - r), whose
    coefficient sequence [1, -e1, e2, ...] equals that of prod (1 - r X)
    read in ascending powers of X.
    """
    return np.poly(list(roots))


def triple_product_roots(s1, s2, s3) -> list[complex]:
    """The eight Satake root products, one factor chosen from each pair."""
    return [
        x * y * z
        for x in (s1.alpha, s1.beta)
        for y in (s2.alpha, s2.beta)
        for z in (s3.alpha, s3.beta)
    ]


def afe_cutoff_quadrature(shifts, s: complex, x: float) -> complex:
    """The AFE cutoff F_s(x) by adaptive mpmath quadrature on Re u = 3/2.

    Independent of the vectorized trapezoid implementation under test:
    different nodes, different gamma evaluation, adaptive refinement.
    """
    import mpmath as mp

    mp.mp.dps = 25
    two_pi = 2 * mp.pi

    def integrand(t):
        u = mp.mpc(1.5, t)
        val = mp.mpc(x) ** u / u
        for mu in shifts:
            z = u + s + mp.mpf(float(mu))
            val *= two_pi ** (-z) * mp.gamma(z)
        return val

    total = mp.quad(integrand, [-60, -5, 0, 5, 60])
    return complex(total / two_pi)


def weight_10_level_2_coeffs(n_max: int) -> list[int]:
    """a_0..a_n_max of the weight-10 level-2 newform, built naively.

    Multiplies the naive eta-product coefficients by the weight-2
    Eisenstein combination 1 + 24 sum sigma_1(m) q^m - 48 sum sigma_1(m)
    q^(2m) term by term -- no pentagonal-number shortcuts.
    """
    eta = eta_product_8_coeffs(n_max)  # index n = coefficient of q^n
    eis = [1] + [
        24 * divisor_sum(j) - (48 * divisor_sum(j // 2) if j % 2 == 0 else 0)
        for j in range(1, n_max + 1)
    ]
    out = [0] * (n_max + 1)
    for i in range(1, n_max + 1):
        if not eta[i]:
            continue
        for j in range(0, n_max - i + 1):
            out[i + j] += eta[i] * eis[j]
    return out
