from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphecke.quat import (
    HURWITZ,
    LIPSCHITZ,
    Quaternion,
    enumerate_norm,
    rotation_of,
    rotation_matrix_times_norm_int,
    unit_group,
)

from oracles import brute_force_shell_count, divisor_sum

ONE = Quaternion.from_ints(1, 0, 0, 0)
I = Quaternion.from_ints(0, 1, 0, 0)
J = Quaternion.from_ints(0, 0, 1, 0)
K = Quaternion.from_ints(0, 0, 0, 1)


def quat_strategy(max_abs: int = 5):
    even = st.tuples(*([st.integers(-max_abs, max_abs).map(lambda v: 2 * v)] * 4))
    odd = st.tuples(*([st.integers(-max_abs, max_abs).map(lambda v: 2 * v + 1)] * 4))
    return st.one_of(even, odd).map(lambda d: Quaternion(*d))


def test_mixed_parity_rejected():
    with pytest.raises(ValueError):
        Quaternion(1, 2, 0, 0)


def test_defining_relations():
    assert I * J == K
    assert J * K == I
    assert K * I == J
    assert I * I == -ONE


def test_product_with_conjugate_is_norm():
    q = ONE + I
    assert q * q.conj() == Quaternion.from_ints(2, 0, 0, 0)
    assert q.norm() == 2


def test_norm_of_one_plus_i_plus_j_plus_k():
    assert (ONE + I + J + K).norm() == 4


@settings(max_examples=60)
@given(quat_strategy(), quat_strategy())
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()


@settings(max_examples=40)
@given(quat_strategy(), quat_strategy(), quat_strategy())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


def test_enumerate_norm_lipschitz_1():
    shell = enumerate_norm(LIPSCHITZ, 1)
    assert len(shell) == 8
    assert set(shell) == {ONE, -ONE, I, -I, J, -J, K, -K}


def test_enumerate_norm_lipschitz_3():
    # frozen from oracles.brute_force_shell_count(3, include_half_integers=False)
    shell = enumerate_norm(LIPSCHITZ, 3)
    assert len(shell) == 32
    assert len(shell) == brute_force_shell_count(3, include_half_integers=False)


def test_enumerate_norm_hurwitz_1():
    # frozen from oracles.brute_force_shell_count(1, include_half_integers=True)
    shell = enumerate_norm(HURWITZ, 1)
    assert len(shell) == 24
    assert len(shell) == brute_force_shell_count(1, include_half_integers=True)


def test_enumerate_norm_sorted_unique_and_exact():
    for n in (2, 5, 12):
        shell = enumerate_norm(HURWITZ, n)
        assert all(q.norm() == n for q in shell)
        keys = [q.doubled() for q in shell]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


def test_shell_sizes_against_divisor_sums():
    for n in range(1, 100, 2):
        s = divisor_sum(n)
        assert len(enumerate_norm(LIPSCHITZ, n)) == 8 * s
        assert len(enumerate_norm(HURWITZ, n)) == 24 * s


def test_unit_groups():
    lu = unit_group(LIPSCHITZ)
    hu = unit_group(HURWITZ)
    assert len(lu) == 8
    assert len(hu) == 24
    assert all(u.norm() == 1 for u in hu)
    assert set(lu) <= set(hu)


def test_rotation_of_unit():
    assert rotation_of(ONE) == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )


def test_rotation_of_i():
    assert rotation_of(I) == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(-1), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(-1)),
    )


def test_rotation_of_one_plus_i():
    # quarter turn about the i-axis; direct expansion of conj(q)*x*q/2
    # sends j -> -k and k -> j.
    assert rotation_of(ONE + I) == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(-1), Fraction(0)),
    )


def test_rotation_rejects_zero():
    with pytest.raises(ValueError):
        rotation_of(Quaternion(0, 0, 0, 0))


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[r][k] * b[k][c] for k in range(3)) for c in range(3))
        for r in range(3)
    )


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@settings(max_examples=40)
@given(quat_strategy(3).filter(lambda q: q.norm() > 0))
def test_rotation_orthogonal_det_one(q):
    m = rotation_of(q)
    mt = tuple(tuple(m[c][r] for c in range(3)) for r in range(3))
    ident = tuple(
        tuple(Fraction(1) if r == c else Fraction(0) for c in range(3)) for r in range(3)
    )
    assert _mat_mul(m, mt) == ident
    assert _det3(m) == 1


@settings(max_examples=40)
@given(
    quat_strategy(3).filter(lambda q: q.norm() > 0),
    quat_strategy(3).filter(lambda q: q.norm() > 0),
)
def test_rotation_composition(a, b):
    # conj(ab) x (ab) = conj(b) (conj(a) x a) b
    assert rotation_of(a * b) == _mat_mul(rotation_of(b), rotation_of(a))


def test_rotation_composition_with_units():
    q = ONE + I + J  # norm 3
    for u in unit_group(HURWITZ):
        assert rotation_of(u * q) == _mat_mul(rotation_of(q), rotation_of(u))


def test_scaled_rotation_integral_for_hurwitz():
    for n in (1, 3, 5):
        for q in enumerate_norm(HURWITZ, n):
            m = rotation_matrix_times_norm_int(q)
            assert all(isinstance(v, int) for row in m for v in row)
