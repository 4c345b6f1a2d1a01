from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from sphecke.poly import (
    HarmonicBasis,
    MultiPoly,
    PiScaled,
    basis,
    conjugation_components,
    expectation,
    gegenbauer_1d,
    harmonic_decompose,
    harmonic_dimension,
    harmonic_project,
    inner_s2,
    inner_s3,
    kernel_S2,
    kernel_S3,
    l2_probability_norm_sq,
    laplacian,
    legendre_1d,
    monomial_moment,
    monomials,
    poly_from_text,
    poly_to_text,
    quadrature_integral,
    radius_sq,
    reproducing_to_vilenkin_l2_sq,
    sphere_integral,
    tensor_embed,
    vilenkin_norm_sq,
)
from sphecke.quat import Quaternion

from oracles import monomial_sphere_moment, quad_monomial_sphere2, chebyshev_u_coeffs

X = MultiPoly.variable(3, 0)
Y = MultiPoly.variable(3, 1)
Z = MultiPoly.variable(3, 2)


def rand_homogeneous(rng: random.Random, nvars: int, degree: int) -> MultiPoly:
    coeffs = {}
    for e in monomials(nvars, degree):
        if rng.random() < 0.6:
            coeffs[e] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    p = MultiPoly(nvars, coeffs)
    if p.is_zero():
        e = tuple([degree] + [0] * (nvars - 1))
        p = MultiPoly(nvars, {e: Fraction(1)})
    return p


def rand_harmonic(rng: random.Random, nvars: int, degree: int) -> MultiPoly:
    h = harmonic_project(rand_homogeneous(rng, nvars, degree))
    if h.is_zero():  # can only happen for radial inputs; retry deterministic
        h = harmonic_project(rand_homogeneous(rng, nvars, degree))
    return h


# ---------------------------------------------------------------------------
# PiScaled


def test_piscaled_addition_same_power():
    assert PiScaled(Fraction(1, 2), 1) + PiScaled(Fraction(1, 3), 1) == PiScaled(
        Fraction(5, 6), 1
    )


def test_piscaled_mixed_power_is_error():
    with pytest.raises(ArithmeticError):
        PiScaled(Fraction(1), 1) + PiScaled(Fraction(1), 2)


def test_piscaled_zero_is_neutral_across_powers():
    assert PiScaled(Fraction(0), 3) + PiScaled(Fraction(2), 1) == PiScaled(Fraction(2), 1)


def test_piscaled_multiplication_adds_powers():
    v = PiScaled(Fraction(3, 4), 2) * PiScaled(Fraction(2), -1)
    assert v == PiScaled(Fraction(3, 2), 1)
    assert float(PiScaled(Fraction(1), 1)) == pytest.approx(math.pi)


# ---------------------------------------------------------------------------
# laplacian / harmonic projection


def test_laplacian_x_squared():
    assert laplacian(X * X) == MultiPoly.constant(3, 2)


def test_laplacian_xyz_zero():
    assert laplacian(X * Y * Z).is_zero()


def test_laplacian_radius():
    assert laplacian(radius_sq(3)) == MultiPoly.constant(3, 6)


def test_harmonic_project_x_squared():
    expected = X * X - radius_sq(3) * Fraction(1, 3)
    got = harmonic_project(X * X)
    assert got == expected
    assert laplacian(got).is_zero()


def test_harmonic_project_fixes_harmonic():
    assert harmonic_project(X * Y * Z) == X * Y * Z


def test_harmonic_project_kills_radial():
    assert harmonic_project(radius_sq(3)).is_zero()


def test_harmonic_project_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        harmonic_project(X + X * X)


def test_harmonic_decompose_reconstructs():
    rng = random.Random(7)
    for nvars in (3, 4):
        for degree in range(2, 11):
            p = rand_homogeneous(rng, nvars, degree)
            layers = harmonic_decompose(p)
            r2 = radius_sq(nvars)
            rebuilt = MultiPoly.zero(nvars)
            for k, h in enumerate(layers):
                assert laplacian(h).is_zero()
                rebuilt = rebuilt + (r2**k) * h
            assert rebuilt == p


def test_harmonic_project_idempotent():
    rng = random.Random(11)
    for degree in range(1, 11):
        p = rand_homogeneous(rng, 3, degree)
        h = harmonic_project(p)
        assert harmonic_project(h) == h


# ---------------------------------------------------------------------------
# sphere integration


def test_sphere_integral_x_squared_normalized():
    assert sphere_integral(X * X, normalized=True) == PiScaled(Fraction(1, 3))


def test_sphere_integral_odd_vanishes():
    assert sphere_integral(X * Y * Y) == PiScaled(Fraction(0))


def test_sphere_integral_x2z2():
    # frozen from oracles.quad_monomial_sphere2((2,0,2)) = 0.06666666...
    got = sphere_integral(X * X * Z * Z, normalized=True)
    assert got == PiScaled(Fraction(1, 15))
    assert float(got) == pytest.approx(quad_monomial_sphere2((2, 0, 2)), abs=1e-13)


def test_sphere_integral_total_measures():
    one3 = MultiPoly.constant(3, 1)
    one4 = MultiPoly.constant(4, 1)
    assert sphere_integral(one3) == PiScaled(Fraction(4), 1)
    assert sphere_integral(one4) == PiScaled(Fraction(2), 2)


def test_monomial_moment_matches_oracle():
    cases = [(2, 0, 0), (2, 2, 0), (4, 0, 0), (2, 2, 2), (6, 0, 0)]
    for e in cases:
        assert monomial_moment(e) == monomial_sphere_moment(e)
    assert monomial_moment((2, 0, 0, 0)) == Fraction(1, 4)
    assert monomial_moment((4, 0, 0, 0)) == Fraction(1, 8)
    assert monomial_moment((2, 2, 0, 0)) == Fraction(1, 24)


def test_exact_vs_quadrature_on_random_polys():
    rng = random.Random(2024)
    for trial in range(50):
        nvars = rng.choice((3, 4))
        degree = rng.randint(0, 12)
        coeffs = {}
        for e in monomials(nvars, degree):
            if rng.random() < 0.4:
                coeffs[e] = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
        p = MultiPoly(nvars, coeffs)
        exact = float(sphere_integral(p, normalized=True))
        approx = quadrature_integral(p, order=8)
        scale = max(1.0, abs(exact))
        assert abs(exact - approx) <= 1e-12 * scale


# ---------------------------------------------------------------------------
# bases


def test_basis_dimensions():
    assert basis(2, 2).dimension == 5
    assert basis(3, 3).dimension == 16
    assert harmonic_dimension(2, 7) == 15


def test_basis_degree_zero_is_constant_one():
    b = basis(2, 0)
    assert b.elements == (MultiPoly.constant(3, 1),)


def test_basis_elements_harmonic_and_orthogonal():
    for sphere_dim, degree in ((2, 4), (2, 5), (3, 2), (3, 3)):
        b = basis(sphere_dim, degree)
        for el in b.elements:
            assert laplacian(el).is_zero()
            assert el.is_homogeneous() and el.degree() == degree
        for i in range(b.dimension):
            for j in range(i):
                assert expectation(b.elements[i] * b.elements[j]) == 0
        assert all(b.gram[i][i].rat > 0 for i in range(b.dimension))


def test_basis_memoized():
    assert basis(2, 3) is basis(2, 3)


# ---------------------------------------------------------------------------
# 1d kernels


def test_gegenbauer_1d_small():
    assert gegenbauer_1d(0) == (Fraction(1),)
    assert gegenbauer_1d(1) == (Fraction(0), Fraction(2))
    assert gegenbauer_1d(2) == (Fraction(-1), Fraction(0), Fraction(4))


def test_gegenbauer_matches_second_kind_chebyshev():
    for alpha in range(9):
        assert [int(c) for c in gegenbauer_1d(alpha)] == chebyshev_u_coeffs(alpha)


def test_legendre_1d_small():
    assert legendre_1d(0) == (Fraction(1),)
    assert legendre_1d(1) == (Fraction(0), Fraction(1))
    assert legendre_1d(2) == (Fraction(-1, 2), Fraction(0), Fraction(3, 2))


# ---------------------------------------------------------------------------
# reproducing kernels


def lattice_w_samples():
    return [
        Quaternion.from_ints(1, 0, 0, 0),
        Quaternion.from_ints(1, 2, 0, 2),
        Quaternion.from_ints(0, 1, 1, 1),
        Quaternion(1, 1, 1, 1),
        Quaternion.from_ints(2, -1, 3, 1),
    ]


def unit_z_samples():
    return [
        Quaternion.from_ints(0, 1, 0, 0),
        Quaternion.from_ints(0, 0, 0, 1),
        Quaternion.from_ints(0, 3, 4, 0),  # normalized internally to (3,4,0)/5
        Quaternion.from_ints(0, 1, 2, 2),
        Quaternion.from_ints(0, 2, -3, 6),
    ]


def test_kernel_s3_alpha0_constant():
    g = kernel_S3(0, Quaternion.from_ints(1, 1, 0, 0))
    assert g == MultiPoly.constant(4, 1)


def test_kernel_s3_reproduces_point_evaluation():
    rng = random.Random(5)
    for alpha in range(7):
        q = rand_harmonic(rng, 4, alpha)
        for w in lattice_w_samples():
            g = kernel_S3(alpha, w)
            assert laplacian(g).is_zero()
            pairing = inner_s3(g, q)
            assert pairing == q.evaluate(w.components())


def test_kernel_s3_diagonal_value():
    for alpha in range(5):
        w = Quaternion.from_ints(1, 0, 2, 2)  # norm 9
        g = kernel_S3(alpha, w)
        # <G_w, G_w> = G_w(w), the defining self-consistency of the kernel
        assert inner_s3(g, g) == g.evaluate(w.components())


def test_kernel_s2_alpha0_constant():
    g = kernel_S2(0, Quaternion.from_ints(0, 0, 1, 0))
    assert g == MultiPoly.constant(3, 1)


def test_kernel_s2_reproduces_point_evaluation():
    rng = random.Random(6)
    for alpha in range(7):
        q = rand_harmonic(rng, 3, alpha)
        for z in unit_z_samples():
            g = kernel_S2(alpha, z)
            assert laplacian(g).is_zero()
            s = z.norm()
            unit = [c / Fraction(math.isqrt(int(s.numerator * s.denominator)), s.denominator) for c in z.components()[1:]]
            pairing = inner_s2(g, q)
            assert pairing == q.evaluate(unit)


def test_kernel_s2_diagonal_value():
    for alpha in range(5):
        z = Quaternion.from_ints(0, 1, 2, 2)
        g = kernel_S2(alpha, z)
        unit = [Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)]
        assert inner_s2(g, g) == g.evaluate(unit)
        # Legendre normalization: the kernel itself is 1 on the diagonal,
        # the (2*alpha+1) weight lives in the pairing
        assert g.evaluate(unit) == 1


def test_kernel_s2_rejects_bad_centers():
    with pytest.raises(ValueError):
        kernel_S2(2, Quaternion.from_ints(1, 1, 0, 0))  # not trace zero
    with pytest.raises(ValueError):
        kernel_S2(2, Quaternion.from_ints(0, 1, 1, 0))  # norm 2 not a square


# ---------------------------------------------------------------------------
# tensor identification


def test_tensor_embed_constants():
    one = MultiPoly.constant(3, 1)
    out = tensor_embed(one, one)
    assert out == MultiPoly.constant(4, 1)


def test_tensor_embed_rejects_degree_mismatch():
    with pytest.raises(ValueError):
        tensor_embed(X, X * Y)


def test_tensor_embed_harmonic_output():
    rng = random.Random(9)
    for nu in range(1, 5):
        p1 = rand_harmonic(rng, 3, nu)
        p2 = rand_harmonic(rng, 3, nu)
        out = tensor_embed(p1, p2)
        assert out.is_homogeneous() and out.degree() == 2 * nu
        assert laplacian(out).is_zero()


def test_tensor_embed_bilinear():
    rng = random.Random(10)
    nu = 2
    p1, p2, q1 = (rand_harmonic(rng, 3, nu) for _ in range(3))
    s = Fraction(3, 7)
    lhs = tensor_embed(p1 + q1 * s, p2)
    rhs = tensor_embed(p1, p2) + tensor_embed(q1, p2) * s
    assert lhs == rhs


def test_tensor_embed_diagonal_gegenbauer_identity():
    # (G_z (x) G_z)(x) = G_z(conj(x) z x) for the S^2 kernel at z
    for alpha in range(1, 5):
        for z in (Quaternion.from_ints(0, 0, 0, 1), Quaternion.from_ints(0, 1, 2, 2)):
            gz = kernel_S2(alpha, z)
            lhs = tensor_embed(gz, gz)
            comp = conjugation_components()
            x_vars = [MultiPoly.variable(4, i) for i in range(4)]
            images7 = [
                x_vars[0],
                -x_vars[1],
                -x_vars[2],
                -x_vars[3],
                MultiPoly.constant(4, z.components()[1]),
                MultiPoly.constant(4, z.components()[2]),
                MultiPoly.constant(4, z.components()[3]),
            ]
            conj_action = [c.substitute(images7) for c in comp]
            s = z.norm()  # lhs kernel is at z/|z|; the substituted argument
            # conj(x) z x scales with |z|, so divide it out per degree
            root = Fraction(math.isqrt(int(s)), 1) if s.denominator == 1 else None
            assert root is not None and root * root == s
            scaled = [c * (1 / root) for c in conj_action]
            rhs = gz.substitute(scaled)
            assert lhs == rhs


def test_tensor_embed_isometry():
    rng = random.Random(12)
    for nu in (1, 2, 3, 4):
        p1, p2, q1, q2 = (rand_harmonic(rng, 3, nu) for _ in range(4))
        lhs = inner_s3(tensor_embed(p1, p2), tensor_embed(q1, q2))
        rhs = inner_s2(p1, q1) * inner_s2(p2, q2)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# normalization conversions


def test_normalization_conversions():
    rng = random.Random(13)
    for nu in (1, 2, 3):
        p = rand_harmonic(rng, 3, nu)
        n2 = l2_probability_norm_sq(p)
        assert n2 == expectation(p * p)
        assert vilenkin_norm_sq(p) == PiScaled(2 * n2)
        # a reproducing-normalized element has calibrated L2 norm 2/(2nu+1)
        g = inner_s2(p, p)
        assert vilenkin_norm_sq(p) == PiScaled(reproducing_to_vilenkin_l2_sq(nu) * g)


def test_vilenkin_norm_s3():
    q = MultiPoly.constant(4, 1)
    assert vilenkin_norm_sq(q) == PiScaled(Fraction(1, 2), 1)


# ---------------------------------------------------------------------------
# serialization


def test_poly_text_round_trip():
    rng = random.Random(14)
    for nvars in (3, 4):
        p = rand_homogeneous(rng, nvars, 5)
        assert poly_from_text(poly_to_text(p)) == p


def test_poly_text_format():
    p = MultiPoly(3, {(2, 0, 0): Fraction(1), (0, 1, 1): Fraction(-3, 2)})
    text = poly_to_text(p)
    assert "0,1,1:-3/2" in text
    assert "2,0,0:1/1" in text
