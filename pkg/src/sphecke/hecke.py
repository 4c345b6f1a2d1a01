"""Hecke operators on spherical harmonics, realized by quaternionic rotation shells.

The operator at an odd prime p sends a degree-nu harmonic polynomial P to
the sum of P composed with the rotation attached to each quaternion of norm
p in the chosen order.  Two computational paths are provided:

* an exact path (``hecke_matrix``) that interpolates the action through
  integer sample points and returns a rational matrix in the orthogonal
  basis of ``poly.basis(2, nu)``;
* a floating point path (``hecke_matrix_float`` / ``simultaneous_eigenbasis``)
  that represents the harmonic space through a redundant frame of zonal
  kernels at quasi-uniform points, practical for large nu.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .poly import HarmonicBasis, MultiPoly, basis, monomials
from .quat import (
    HURWITZ,
    OrderSpec,
    Quaternion,
    enumerate_norm,
    rotation_matrix_times_norm_int,
    unit_group,
)

NORMALIZATIONS = ("raw", "unit-normalized")


def _require_good_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    if p % 2 == 0:
        raise ValueError("2 is a bad prime for this order; only odd primes are admitted")


def _half_shell(order: OrderSpec, p: int) -> list[Quaternion]:
    """One representative from each pair {y, -y}; both give the same rotation."""
    out = []
    for q in enumerate_norm(order, p):
        d = q.doubled()
        if d > tuple(-c for c in d):
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# exact path


@lru_cache(maxsize=None)
def _mono_plan(nu: int) -> tuple[list[tuple[int, int]], dict[tuple[int, int, int], int]]:
    """Build-order for all 3-variable monomial values of degree <= nu.

    Entry j of the plan is (parent_index, coordinate) with
    value[j] = value[parent] * point[coordinate]; index 0 is the constant 1.
    """
    index = {(0, 0, 0): 0}
    plan: list[tuple[int, int]] = []
    for d in range(1, nu + 1):
        for e in monomials(3, d):
            c = next(i for i in range(3) if e[i] > 0)
            parent = list(e)
            parent[c] -= 1
            plan.append((index[tuple(parent)], c))
            index[e] = len(plan)
    return plan, index


def _mono_values(plan: list[tuple[int, int]], point: tuple[int, int, int]) -> list[int]:
    vals = [1] * (len(plan) + 1)
    for j, (parent, c) in enumerate(plan):
        vals[j + 1] = vals[parent] * point[c]
    return vals


@lru_cache(maxsize=None)
def _basis_int_terms(nu: int) -> list[list[tuple[int, int]]]:
    """Each element of basis(2, nu) as (integer coefficient, monomial index) pairs."""
    _, index = _mono_plan(nu)
    out = []
    for el in basis(2, nu).elements:
        out.append([(int(v), index[e]) for e, v in sorted(el.c.items())])
    return out


def _candidate_points() -> list[tuple[int, int, int]]:
    pts = []
    for radius in range(1, 6):
        layer = []
        for x in range(-radius, radius + 1):
            for y in range(-radius, radius + 1):
                for z in range(-radius, radius + 1):
                    if max(abs(x), abs(y), abs(z)) == radius:
                        layer.append((x, y, z))
        layer.sort()
        pts.extend(layer)
    return pts


def _rref_insert(rows: list[list[Fraction]], row: list[Fraction]) -> bool:
    """Reduce row against the echelon rows; append if independent."""
    row = list(row)
    for pivot in rows:
        lead = next(i for i, v in enumerate(pivot) if v != 0)
        if row[lead] != 0:
            f = row[lead] / pivot[lead]
            row = [a - f * b for a, b in zip(row, pivot)]
    if any(v != 0 for v in row):
        rows.append(row)
        return True
    return False


def _invert_exact(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


@lru_cache(maxsize=None)
def _sample_frame(nu: int) -> tuple[tuple[tuple[int, int, int], ...], tuple[tuple[Fraction, ...], ...]]:
    """Integer points where evaluation determines a degree-nu harmonic, plus
    the inverse of the basis-evaluation matrix at those points."""
    plan, _ = _mono_plan(nu)
    terms = _basis_int_terms(nu)
    dim = len(terms)
    points: list[tuple[int, int, int]] = []
    b_rows: list[list[Fraction]] = []
    echelon: list[list[Fraction]] = []
    for pt in _candidate_points():
        vals = _mono_values(plan, pt)
        row = [Fraction(sum(c * vals[j] for c, j in t)) for t in terms]
        if _rref_insert(echelon, row):
            points.append(pt)
            b_rows.append(row)
            if len(points) == dim:
                break
    if len(points) < dim:
        raise ArithmeticError(f"could not find {dim} unisolvent integer points for nu={nu}")
    b_inv = _invert_exact(b_rows)
    return tuple(points), tuple(tuple(r) for r in b_inv)


@dataclass(frozen=True)
class HeckeMatrix:
    """Exact matrix of the rotation-shell operator in the standard harmonic basis.

    ``matrix[j][i]`` is the coefficient of basis element j in the image of
    basis element i, so matrices compose by ordinary multiplication on
    coordinate columns.
    """

    nu: int
    p: int
    order: OrderSpec
    normalization: str
    matrix: tuple[tuple[Fraction, ...], ...]
    basis: HarmonicBasis = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def gram_diagonal(self) -> tuple[Fraction, ...]:
        return tuple(g[i].rat for i, g in enumerate(self.basis.gram))

    def pairing_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix of <b_j, T b_i>; self-adjointness makes it symmetric."""
        d = self.gram_diagonal()
        return tuple(
            tuple(d[j] * self.matrix[j][i] for i in range(self.dimension))
            for j in range(self.dimension)
        )

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.matrix])

    def apply(self, coords: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        return tuple(
            sum((row[i] * coords[i] for i in range(self.dimension)), Fraction(0))
            for row in self.matrix
        )


@lru_cache(maxsize=None)
def hecke_matrix(
    nu: int,
    p: int,
    order: OrderSpec = HURWITZ,
    normalization: str = "raw",
) -> HeckeMatrix:
    """Exact rational matrix of the degree-nu rotation-shell operator at p.

    raw: plain sum over all quaternions of norm p in the order.
    unit-normalized: raw divided by the number of units, so the constant
    function has eigenvalue p + 1.
    """
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    _require_good_prime(p)
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    plan, _ = _mono_plan(nu)
    terms = _basis_int_terms(nu)
    dim = len(terms)
    points, b_inv = _sample_frame(nu)
    mats = [rotation_matrix_times_norm_int(y) for y in _half_shell(order, p)]
    a = [[0] * dim for _ in range(dim)]
    for k, v in enumerate(points):
        row = a[k]
        for w in mats:
            pt = (
                w[0][0] * v[0] + w[0][1] * v[1] + w[0][2] * v[2],
                w[1][0] * v[0] + w[1][1] * v[1] + w[1][2] * v[2],
                w[2][0] * v[0] + w[2][1] * v[1] + w[2][2] * v[2],
            )
            vals = _mono_values(plan, pt)
            for i, t in enumerate(terms):
                row[i] += sum(c * vals[j] for c, j in t)
    # both members of {y, -y} act identically; scale by the p^nu homogeneity
    # of evaluating at the integer-rescaled rotation
    scale = Fraction(2, p**nu)
    if normalization == "unit-normalized":
        scale /= len(unit_group(order))
    m = tuple(
        tuple(sum(b_inv[j][k] * a[k][i] for k in range(dim)) * scale for i in range(dim))
        for j in range(dim)
    )
    return HeckeMatrix(nu, p, order, normalization, m, basis(2, nu))


# ---------------------------------------------------------------------------
# invariant functions of the unit rotation group


def _signed_permutations(order: OrderSpec) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unit rotations as (permutation, signs) acting on coordinates.

    Every unit rotation of both orders is a signed permutation matrix;
    entry (perm, signs) maps variable i to signs[i] * variable perm[i].
    """
    seen = set()
    out = []
    for u in unit_group(order):
        w = rotation_matrix_times_norm_int(u)  # norm 1: the rotation itself
        if w in seen:
            continue
        seen.add(w)
        perm = []
        signs = []
        for i in range(3):
            j = next(c for c in range(3) if w[i][c] != 0)
            perm.append(j)
            signs.append(w[i][j])
        out.append((tuple(perm), tuple(signs)))
    return out


def invariant_dimension(nu: int, order: OrderSpec = HURWITZ) -> int:
    """Dimension of degree-nu harmonics fixed by every unit rotation.

    Computed by averaging rotation characters over the finite group:
    the trace of a rotation by angle theta on degree-nu harmonics is
    sin((2 nu + 1) theta / 2) / sin(theta / 2).
    """
    if order.kind == "hurwitz":
        c3 = (1, 0, -1)[nu % 3]
        total = (2 * nu + 1) + 3 * (-1) ** nu + 8 * c3
        assert total % 12 == 0
        return total // 12
    total = (2 * nu + 1) + 3 * (-1) ** nu
    assert total % 4 == 0
    return total // 4


def _symmetrize(p: MultiPoly, group) -> MultiPoly:
    acc: dict[tuple[int, ...], Fraction] = {}
    for perm, signs in group:
        for e, v in p.c.items():
            img = [0, 0, 0]
            sign = 1
            for i in range(3):
                img[perm[i]] = e[i]
                if signs[i] < 0 and e[i] % 2 == 1:
                    sign = -sign
            key = tuple(img)
            acc[key] = acc.get(key, Fraction(0)) + sign * v
    return MultiPoly(3, acc)


@lru_cache(maxsize=None)
def _zonal_int(nu: int, w: tuple[int, int, int]) -> MultiPoly:
    """Integer-coefficient multiple of the degree-nu zonal harmonic along w."""
    from .poly import legendre_1d, radius_sq

    coeffs = legendre_1d(nu)
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    dot = MultiPoly(3, {(1, 0, 0): Fraction(w[0]), (0, 1, 0): Fraction(w[1]), (0, 0, 1): Fraction(w[2])})
    n_w = Fraction(w[0] ** 2 + w[1] ** 2 + w[2] ** 2)
    r2 = radius_sq(3) * n_w
    acc = MultiPoly.zero(3)
    for j in range(nu, -1, -1):
        c = coeffs[j] * lcm
        if c == 0:
            continue
        acc = acc + (dot**j) * (r2 ** ((nu - j) // 2)) * c
    return acc.primitive()


def invariant_subspace(nu: int, order: OrderSpec = HURWITZ) -> tuple[MultiPoly, ...]:
    """Orthogonal basis of degree-nu harmonics fixed by all unit rotations.

    Spanned by group-averaged zonal harmonics at deterministic integer
    directions; exact rational reduction guarantees the span is complete
    because the target dimension is known in closed form.
    """
    from .poly import expectation

    dim = invariant_dimension(nu, order)
    if dim == 0:
        return ()
    group = _signed_permutations(order)
    mono_list = monomials(3, nu)
    mono_index = {e: i for i, e in enumerate(mono_list)}
    echelon: list[list[Fraction]] = []
    found: list[MultiPoly] = []
    for w in _candidate_points():
        cand = _symmetrize(_zonal_int(nu, w), group)
        if cand.is_zero():
            continue
        row = [Fraction(0)] * len(mono_list)
        for e, v in cand.c.items():
            row[mono_index[e]] = v
        if _rref_insert(echelon, row):
            found.append(cand.primitive())
            if len(found) == dim:
                break
    if len(found) < dim:
        raise ArithmeticError(f"invariant span incomplete at nu={nu}")
    # exact Gram-Schmidt in the sphere inner product
    ortho: list[MultiPoly] = []
    for cand in found:
        for prev in ortho:
            cand = cand - prev * (expectation(cand * prev) / expectation(prev * prev))
        ortho.append(cand.primitive())
    return tuple(ortho)


# ---------------------------------------------------------------------------
# floating point path


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues ascending, column eigenvectors).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    norm = math.sqrt(float((a * a).sum()))
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        offm = a - np.diag(a.diagonal())
        off2 = float((offm * offm).sum())
        if off2 <= (tol * norm) ** 2:
            break
        thresh = math.sqrt(off2) / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh * 1e-4:
                    continue
                g = 100.0 * abs(apq)
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ArithmeticError("jacobi iteration did not converge")
    w = a.diagonal().copy()
    idx = np.argsort(w, kind="stable")
    return w[idx], v[:, idx]


def legendre_values(nu: int, t: np.ndarray) -> np.ndarray:
    """P_nu evaluated by the three-term recurrence; exact parity in floats."""
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if nu == 0:
        return p_prev
    p_cur = t.copy()
    for n in range(1, nu):
        p_next = ((2 * n + 1) * t * p_cur - n * p_prev) / (n + 1)
        p_prev, p_cur = p_cur, p_next
    return p_cur


def fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic quasi-uniform unit vectors on the 2-sphere."""
    k = np.arange(count, dtype=float)
    z = 1.0 - (2.0 * k + 1.0) / count
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    return pts / np.linalg.norm(pts, axis=1)[:, None]


@lru_cache(maxsize=None)
def _kernel_frame(nu: int) -> tuple[np.ndarray, np.ndarray]:
    """Frame points and the frame-to-orthonormal map for degree-nu harmonics.

    Columns of the returned W convert frame kernel coefficients to an
    orthonormal basis of the (2 nu + 1)-dimensional space in L2 of the
    uniform probability measure.
    """
    dim = 2 * nu + 1
    count = dim + 24
    pts = fibonacci_sphere(count)
    gram = (2 * nu + 1) * legendre_values(nu, pts @ pts.T)
    gram = 0.5 * (gram + gram.T)
    evals, evecs = jacobi_eigh(gram)
    evals = evals[::-1]
    evecs = evecs[:, ::-1]
    if evals[dim - 1] <= 1e-8 * evals[0] or (len(evals) > dim and evals[dim] > 1e-6 * evals[dim - 1]):
        raise ArithmeticError(f"kernel frame at nu={nu} has ambiguous numerical rank")
    w = evecs[:, :dim] / np.sqrt(evals[:dim])[None, :]
    return pts, w


def _shell_rotations_float(order: OrderSpec, p: int) -> np.ndarray:
    mats = [rotation_matrix_times_norm_int(y) for y in _half_shell(order, p)]
    return np.array(mats, dtype=float) / p


def hecke_matrix_float(
    nu: int,
    p: int,
    order: OrderSpec = HURWITZ,
    normalization: str = "unit-normalized",
) -> np.ndarray:
    """Rotation-shell operator in the orthonormal kernel-frame basis.

    All primes at the same nu share the frame, so the returned matrices can
    be diagonalized simultaneously.
    """
    _require_good_prime(p)
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    pts, w = _kernel_frame(nu)
    rots = _shell_rotations_float(order, p)
    # <Z_k, T Z_l> = sum over the shell of the zonal kernel at (R y v_k, v_l)
    rotated = np.einsum("ymc,kc->ykm", rots, pts)
    dots = np.einsum("ykm,lm->ykl", rotated, pts)
    pairing = 2.0 * (2 * nu + 1) * legendre_values(nu, dots).sum(axis=0)
    if normalization == "unit-normalized":
        pairing /= len(unit_group(order))
    mat = w.T @ pairing @ w
    return 0.5 * (mat + mat.T)


@dataclass(frozen=True)
class EigenSystem:
    """Joint eigenfunctions of the rotation-shell operators at several primes.

    Eigenfunctions are normalized to unit L2 norm against the uniform
    probability measure and listed in lexicographic order of their
    eigenvalue vectors (primes taken ascending), which makes the listing
    independent of the order the primes were supplied in.
    """

    nu: int
    order: OrderSpec
    normalization: str
    primes: tuple[int, ...]
    eigenvalues: tuple[tuple[float, ...], ...]
    unresolved: tuple[tuple[int, ...], ...]
    invariant_flags: tuple[bool, ...]
    frame_points: np.ndarray = field(repr=False)
    frame_coefficients: np.ndarray = field(repr=False)
    residual: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def eigenvalue(self, index: int, p: int) -> float:
        return self.eigenvalues[index][self.primes.index(p)]

    def evaluate(self, index: int, point) -> float:
        """Value of eigenfunction ``index`` at a unit vector."""
        x = np.asarray(point, dtype=float)
        if x.shape != (3,):
            raise ValueError("point must be a 3-vector")
        if abs(float(x @ x) - 1.0) > 1e-12:
            raise ValueError("point is not on the unit sphere")
        kern = (2 * self.nu + 1) * legendre_values(self.nu, self.frame_points @ x)
        return float(self.frame_coefficients[:, index] @ kern)

    def table(self) -> str:
        header = "index " + " ".join(f"lambda_{p}" for p in self.primes)
        lines = [header]
        for i, row in enumerate(self.eigenvalues):
            lines.append(f"{i} " + " ".join(f"{v:.12e}" for v in row))
        return "\n".join(lines) + "\n"


def simultaneous_eigenbasis(
    nu: int,
    primes: tuple[int, ...] | list[int],
    order: OrderSpec = HURWITZ,
    normalization: str = "unit-normalized",
) -> EigenSystem:
    """Diagonalize the commuting rotation-shell operators at the given primes.

    Eigenvalue clusters left unsplit by every prime are reported in
    ``unresolved`` and raised as a warning; within such a cluster the
    returned functions are an arbitrary orthonormal choice.
    """
    primes_sorted = tuple(sorted(set(int(p) for p in primes)))
    if not primes_sorted:
        raise ValueError("need at least one prime")
    for p in primes_sorted:
        _require_good_prime(p)
    mats = [hecke_matrix_float(nu, p, order, normalization) for p in primes_sorted]
    dim = 2 * nu + 1
    e = np.eye(dim)
    clusters: list[list[int]] = [list(range(dim))]
    for m in mats:
        next_clusters: list[list[int]] = []
        for cl in clusters:
            if len(cl) == 1:
                next_clusters.append(cl)
                continue
            cols = e[:, cl]
            sub = cols.T @ m @ cols
            sub = 0.5 * (sub + sub.T)
            w, u = jacobi_eigh(sub)
            e[:, cl] = cols @ u
            scale = max(1.0, float(np.abs(w).max()))
            start = 0
            for i in range(1, len(cl)):
                if w[i] - w[i - 1] > 1e-8 * scale:
                    next_clusters.append(cl[start:i])
                    start = i
            next_clusters.append(cl[start:])
        clusters = next_clusters
    unresolved = tuple(tuple(cl) for cl in clusters if len(cl) > 1)
    if unresolved:
        warnings.warn(
            f"nu={nu}: eigenvalue multiplicity not separated by primes {primes_sorted} "
            f"in clusters {unresolved}",
            stacklevel=2,
        )
    lam = np.array([[float(e[:, i] @ m @ e[:, i]) for m in mats] for i in range(dim)])
    residual = 0.0
    for p, m in zip(primes_sorted, mats):
        # operator scale floored by the trivial eigenvalue bound: the operator
        # vanishes identically off the invariant subspace, so its computed
        # matrix can be pure frame noise and its own norm is then meaningless
        trivial = float(p + 1)
        if normalization == "raw":
            trivial *= len(unit_group(order))
        scale = max(float(np.sqrt((m * m).sum())), trivial)
        r = m @ e - e * np.einsum("ij,jk,ki->i", e.T, m, e)[None, :]
        residual = max(residual, float(np.sqrt((r * r).sum(axis=0)).max()) / scale)
    order_idx = sorted(range(dim), key=lambda i: tuple(lam[i]))
    e = e[:, order_idx]
    lam = lam[order_idx]
    # deterministic sign: largest-magnitude coordinate positive, ties to the
    # lowest index
    for i in range(dim):
        col = e[:, i]
        j = int(np.argmax(np.abs(col)))
        if col[j] < 0:
            e[:, i] = -col
    if residual > 1e-10:
        raise ArithmeticError(
            f"eigenbasis refinement at nu={nu} left worst residual {residual:.3e} > 1e-10"
        )
    pts, w = _kernel_frame(nu)
    coeffs = w @ e
    remap = {old: new for new, old in enumerate(order_idx)}
    unresolved = tuple(tuple(sorted(remap[i] for i in cl)) for cl in unresolved)
    flags = _invariance_flags(nu, order, pts, coeffs)
    return EigenSystem(
        nu=nu,
        order=order,
        normalization=normalization,
        primes=primes_sorted,
        eigenvalues=tuple(tuple(float(v) for v in row) for row in lam),
        unresolved=unresolved,
        invariant_flags=flags,
        frame_points=pts,
        frame_coefficients=coeffs,
        residual=residual,
    )


def _invariance_flags(
    nu: int, order: OrderSpec, pts: np.ndarray, coeffs: np.ndarray
) -> tuple[bool, ...]:
    """Flag eigenfunctions fixed by the unit rotation group.

    Tested by the residual of the group-averaging projector on the frame
    points; the count always matches invariant_dimension in practice.
    """
    group = []
    for perm, signs in _signed_permutations(order):
        g = np.zeros((3, 3))
        for i in range(3):
            g[i, perm[i]] = signs[i]
        group.append(g)
    kern = (2 * nu + 1) * legendre_values(nu, pts @ pts.T)
    vals = coeffs.T @ kern  # eigenfunction values at the frame points
    avg = np.zeros_like(vals)
    for g in group:
        rotated = pts @ g.T
        avg += coeffs.T @ ((2 * nu + 1) * legendre_values(nu, pts @ rotated.T))
    avg /= len(group)
    scale = max(1.0, float(np.abs(vals).max()))
    resid = np.abs(avg - vals).max(axis=1) / scale
    return tuple(bool(r <= 1e-8) for r in resid)


def harmonic_coordinates(p: MultiPoly, nu: int) -> tuple[Fraction, ...]:
    """Exact coordinates of a degree-nu harmonic polynomial in ``basis(2, nu)``."""
    from .poly import expectation

    b = basis(2, nu)
    return tuple(expectation(p * el) / expectation(el * el) for el in b.elements)


def _invariant_action(nu: int, p: int, order: OrderSpec) -> list[list[Fraction]]:
    """Matrix of the Hecke operator restricted to the invariant subspace."""
    from .poly import expectation

    inv = invariant_subspace(nu, order)
    m = hecke_matrix(nu, p, order, "unit-normalized")
    b = basis(2, nu)
    gram = [expectation(el * el) for el in b.elements]
    self_inner = [expectation(q * q) for q in inv]
    coords = [harmonic_coordinates(q, nu) for q in inv]
    out: list[list[Fraction]] = [[Fraction(0)] * len(inv) for _ in inv]
    for j, cj in enumerate(coords):
        img = m.apply(cj)
        for i, ci in enumerate(coords):
            out[i][j] = sum(a * b_ * g for a, b_, g in zip(img, ci, gram)) / self_inner[i]
    return out


def invariant_eigen_split(
    nu: int,
    order: OrderSpec = HURWITZ,
    primes: tuple[int, ...] = (3, 5, 7, 11, 13),
) -> tuple[tuple[MultiPoly, tuple[Fraction, ...]], ...]:
    """Exact simultaneous eigenvectors of the invariant subspace.

    Splits the unit-rotation-invariant subspace under the listed Hecke
    operators, insisting on rational eigenvalues.  Returns pairs of an
    integer-primitive eigenvector and its unit-normalized eigenvalue per
    prime, sorted by eigenvalue tuple.  Raises ArithmeticError when some
    block does not split over the rationals with the given primes.
    """
    inv = invariant_subspace(nu, order)
    d = len(inv)
    if d == 0:
        return ()
    import sympy

    actions = {p: sympy.Matrix([[sympy.Rational(v) for v in row] for row in _invariant_action(nu, p, order)]) for p in primes}
    spaces = [sympy.eye(d)]  # column-span blocks, refined prime by prime
    for p in primes:
        refined = []
        for w in spaces:
            if w.shape[1] == 1:
                refined.append(w)
                continue
            # restriction of the action to the stable span of w's columns
            sub = (w.T * w).inv() * w.T * actions[p] * w
            for val, _, vecs in sub.eigenvects():
                if not val.is_Rational:
                    continue
                refined.append(w * sympy.Matrix.hstack(*vecs))
        if sum(s.shape[1] for s in refined) != d:
            raise ArithmeticError(
                f"invariant subspace at nu={nu} does not split rationally at p={p}"
            )
        spaces = refined
    if any(s.shape[1] != 1 for s in spaces):
        raise ArithmeticError(
            f"invariant subspace at nu={nu} not fully split by primes {primes}"
        )
    out = []
    for s in spaces:
        combo = MultiPoly.zero(3)
        for i in range(d):
            combo = combo + inv[i] * Fraction(int(s[i, 0].p), int(s[i, 0].q))
        vec = combo.primitive()
        coords = harmonic_coordinates(vec, nu)
        lead = next(i for i, v in enumerate(coords) if v != 0)
        lams = []
        for p in primes:
            img = hecke_matrix(nu, p, order, "unit-normalized").apply(coords)
            lams.append(img[lead] / coords[lead])
        out.append((vec, tuple(lams)))
    out.sort(key=lambda pair: pair[1])
    return tuple(out)
