"""Builders for automorphisms, Blaschke products, tensor steps, and Whitney terms.

Sign convention for ball automorphisms: the rational map is

    z  ->  U (L_a(z) - a) / (1 - <z, a>),      L_a(z) = <z, a> a / (s + 1) + s z,

with s = sqrt(1 - ||a||^2) and <z, a> = sum z_j conj(a_j).  With this choice
a = 0 and U = I give the identity map, the map vanishes at z = a, and the
inverse automorphism has parameters (-U a, U*).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _linalg
from .ballmaps import (DimensionMismatchError, RationalBallMap, Verdict,
                       apply_linear, certify_proper)
from .polyalg import Polynomial


class NonIntegralWindingError(ArithmeticError):
    """The winding quadrature is too far from an integer to trust the input."""


class TensorSubspaceError(ValueError):
    """The tensor subspace is zero or its basis is not orthonormal."""


class BallAutomorphism:
    """Automorphism of the unit ball: unitary part U after a Moebius factor at a."""

    __slots__ = ("a", "U")

    def __init__(self, center: Sequence[complex], unitary: Optional[np.ndarray] = None,
                 tol: float = 1e-8):
        a = np.asarray(center, dtype=complex).reshape(-1)
        if a.size < 1:
            raise ValueError("center must be a nonempty vector")
        if np.linalg.norm(a) >= 1.0:
            raise ValueError(f"center must lie strictly inside the ball, |a|={np.linalg.norm(a)}")
        u = np.eye(a.size, dtype=complex) if unitary is None else np.asarray(unitary, dtype=complex)
        if u.shape != (a.size, a.size) or not _linalg.is_unitary(u, tol):
            raise ValueError("unitary part must be a square unitary matrix")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "U", u)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("BallAutomorphism is immutable")

    @classmethod
    def identity(cls, n: int) -> "BallAutomorphism":
        return cls(np.zeros(n, dtype=complex))

    @property
    def dim(self) -> int:
        return self.a.size

    @property
    def is_identity(self) -> bool:
        return (np.linalg.norm(self.a) == 0.0
                and np.max(np.abs(self.U - np.eye(self.dim))) <= 1e-14)

    def inverse(self) -> "BallAutomorphism":
        return BallAutomorphism(-(self.U @ self.a), self.U.conj().T)

    def __call__(self, z: Sequence[complex]) -> np.ndarray:
        return automorphism_map(self).evaluate(z)

    def __repr__(self):
        return f"BallAutomorphism(dim={self.dim}, |a|={np.linalg.norm(self.a):.3g})"


def automorphism_map(phi: BallAutomorphism) -> RationalBallMap:
    """Degree-one rational map of the automorphism; denominator 1 - <z, a>."""
    n = phi.dim
    a = phi.a
    s = math.sqrt(max(0.0, 1.0 - float(np.linalg.norm(a) ** 2)))
    pairing = Polynomial.zero(n)  # <z, a>
    for j in range(n):
        if abs(a[j]) > 0:
            pairing = pairing + Polynomial.variable(n, j) * a[j].conjugate()
    mobius = []
    for i in range(n):
        comp = pairing * (a[i] / (s + 1.0)) + Polynomial.variable(n, i) * s
        comp = comp - Polynomial.constant(n, a[i])
        mobius.append(comp)
    comps = []
    for i in range(n):
        acc = Polynomial.zero(n)
        for k in range(n):
            c = phi.U[i, k]
            if abs(c) > 0:
                acc = acc + mobius[k] * c
        comps.append(acc)
    denominator = Polynomial.one(n) - pairing
    return RationalBallMap(n, n, comps, denominator)


def automorphism_from_map(m: RationalBallMap, tol: float = 1e-8) -> BallAutomorphism:
    """Recognize a degree-one equidimensional proper map as a ball automorphism.

    Recovers the Moebius center from the denominator and solves for the
    unitary part on the coefficient level.  Raises ValueError when the map is
    not of that shape.
    """
    if m.N != m.n:
        raise ValueError("an automorphism must be equidimensional")
    if m.degree > 1 or m.q.degree > 1:
        raise ValueError("an automorphism has numerator and denominator of degree <= 1")
    n = m.n
    a = np.zeros(n, dtype=complex)
    for j in range(n):
        exps = [0] * n
        exps[j] = 1
        a[j] = -(m.q.terms.get(tuple(exps), 0.0)).conjugate()
    if np.linalg.norm(a) >= 1.0:
        raise ValueError("recovered center lies outside the open ball")
    reference = automorphism_map(BallAutomorphism(a))
    monos = sorted({alpha for comp in list(reference.p) + list(m.p) for alpha in comp.terms},
                   reverse=True)
    _, ref_mat = reference.coefficient_matrix(monos)
    _, map_mat = m.coefficient_matrix(monos)
    unitary = _linalg.procrustes_unitary(ref_mat, map_mat)
    if np.max(np.abs(unitary @ ref_mat - map_mat)) > 1e3 * tol:
        raise ValueError("map is not a unitary multiple of a Moebius factor")
    return BallAutomorphism(a, unitary)


def boundary_constant_map(point: Sequence[complex], tol: float = 1e-6) -> RationalBallMap:
    """Degenerate limit of automorphisms as the center reaches the sphere.

    When ||a|| = 1 the Moebius factor collapses to a constant boundary point
    (a unitary away from a itself); the compactified family therefore adds
    only constant maps.  Returns the constant map at the given point, with
    denominator 1.
    """
    a = np.asarray(point, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(a) - 1.0) > tol:
        raise ValueError("boundary constant requires a point of the unit sphere")
    return RationalBallMap.constant(a, a.size)


# --------------------------------------------------------------------- Blaschke
@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite product of disk factors e^{i theta} prod (z - a_j)/(1 - conj(a_j) z)."""

    theta: float
    zeros: tuple

    def __init__(self, theta: float, zeros: Sequence[complex]):
        zs = tuple(complex(a) for a in zeros)
        for a in zs:
            if abs(a) >= 1.0:
                raise ValueError(f"Blaschke zero {a} must lie inside the unit disk")
        object.__setattr__(self, "theta", float(theta))
        object.__setattr__(self, "zeros", zs)

    @property
    def factor_count(self) -> int:
        return len(self.zeros)


def blaschke_map(b: BlaschkeProduct) -> RationalBallMap:
    """The product as a rational self-map of the unit disk (degree = factor count)."""
    if not b.zeros:
        raise ValueError("a proper disk map needs at least one factor")
    num = Polynomial.constant(1, cmath.exp(1j * b.theta))
    den = Polynomial.one(1)
    z = Polynomial.variable(1, 0)
    for a in b.zeros:
        num = num * (z - Polynomial.constant(1, a))
        den = den * (Polynomial.one(1) - z * a.conjugate())
    return RationalBallMap(1, 1, [num], den)


def winding_integral(m: RationalBallMap, nodes: int = 4096) -> complex:
    """Quadrature value of (1/2 pi i) * contour integral of f'/f over |z| = 1.

    Uses trapezoidal quadrature on the circle, which for the logarithmic
    derivative of a rational map without zeros or poles on the contour
    converges geometrically.
    """
    if m.n != 1 or m.N != 1:
        raise DimensionMismatchError("winding numbers are defined for disk self-maps")
    p, q = m.p[0], m.q
    dp, dq = p.derivative(0), q.derivative(0)
    angles = 2.0 * np.pi * np.arange(nodes) / nodes
    zs = np.exp(1j * angles)[:, None]
    pv = p.evaluate_many(zs)
    qv = q.evaluate_many(zs)
    if np.min(np.abs(pv)) == 0.0 or np.min(np.abs(qv)) == 0.0:
        raise ZeroDivisionError("map has a zero or pole on the unit circle")
    logderiv = dp.evaluate_many(zs) / pv - dq.evaluate_many(zs) / qv
    return complex(np.mean(zs[:, 0] * logderiv))


def winding_degree(m: RationalBallMap, nodes: int = 4096,
                   residual_tol: float = 1e-3) -> int:
    """Nearest integer to the winding quadrature; rejects non-integral values."""
    value = winding_integral(m, nodes)
    nearest = round(value.real)
    residual = abs(value - nearest)
    if residual > residual_tol:
        raise NonIntegralWindingError(
            f"winding integral {value} is {residual:.2e} away from an integer")
    return int(nearest)


# ----------------------------------------------------------------- tensor steps
def _as_domain_map(phi, n: int) -> RationalBallMap:
    if phi is None:
        return RationalBallMap.identity(n)
    if isinstance(phi, BallAutomorphism):
        if phi.dim != n:
            raise DimensionMismatchError("automorphism dimension mismatch")
        return automorphism_map(phi)
    if isinstance(phi, RationalBallMap):
        if phi.n != n or phi.N != n:
            raise DimensionMismatchError("domain factor must be a self-map of the domain ball")
        return phi
    raise TypeError("phi must be None, a BallAutomorphism, or a RationalBallMap")


def subspace_basis(target_dim: int, columns) -> np.ndarray:
    """Normalize subspace input: index list or explicit vectors -> column matrix."""
    arr = np.asarray(columns)
    if arr.ndim == 1 and np.issubdtype(arr.dtype, np.integer):
        basis = np.zeros((target_dim, arr.size), dtype=complex)
        for m, j in enumerate(arr):
            basis[int(j), m] = 1.0
        return basis
    basis = np.asarray(columns, dtype=complex)
    if basis.ndim == 1:
        basis = basis[:, None]
    return basis


def tensor_on_subspace(f: RationalBallMap, basis: np.ndarray,
                       phi=None, tol: float = 1e-8) -> RationalBallMap:
    """Tensor the part of f in a target subspace with a domain self-map.

    With P the orthogonal projection onto the span of the (orthonormal) basis
    columns, the result represents (P f tensor phi) + (1 - P) f in orthonormal
    coordinates: first the tensor block, ordered by basis column then domain
    variable, then the complement coordinates.  Target dimension grows from N
    to N + d(n - 1); properness is preserved because on the sphere
    ||phi|| = 1 restores ||f||.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim == 1:
        basis = basis[:, None]
    if basis.shape[0] != f.N:
        raise DimensionMismatchError(
            f"basis rows {basis.shape[0]} do not match target dimension {f.N}")
    d = basis.shape[1]
    if d == 0:
        raise TensorSubspaceError("tensor subspace must be nonzero")
    if not _linalg.has_orthonormal_columns(basis, tol):
        raise TensorSubspaceError("subspace basis must have orthonormal columns")
    phi_map = _as_domain_map(phi, f.n)

    coords = []
    for m in range(d):
        acc = Polynomial.zero(f.n)
        for i in range(f.N):
            c = basis[i, m].conjugate()
            if abs(c) > 0:
                acc = acc + f.p[i] * c
        coords.append(acc)
    complement = _linalg.gram_schmidt_complement(basis)
    comp_coords = []
    for l in range(complement.shape[1]):
        acc = Polynomial.zero(f.n)
        for i in range(f.N):
            c = complement[i, l].conjugate()
            if abs(c) > 0:
                acc = acc + f.p[i] * c
        comp_coords.append(acc)

    new_components = []
    for m in range(d):
        for j in range(f.n):
            new_components.append(coords[m] * phi_map.p[j])
    for comp in comp_coords:
        new_components.append(comp * phi_map.q)
    denominator = f.q * phi_map.q
    return RationalBallMap(f.n, len(new_components), new_components, denominator)


def juxtapose(f: RationalBallMap, g: RationalBallMap, t: float) -> RationalBallMap:
    """The map sqrt(1 - t^2) f + t g into the direct sum of the two targets.

    Its squared norm is (1 - t^2) ||f||^2 + t^2 ||g||^2 exactly at the
    Hermitian-form level, so the juxtaposition is proper for every t in [0,1].
    """
    if f.n != g.n:
        raise DimensionMismatchError("juxtaposition requires a common domain")
    if not 0.0 <= t <= 1.0:
        raise ValueError("parameter must lie in [0, 1]")
    cf = math.sqrt(max(0.0, 1.0 - t * t))
    comps = [comp * g.q * cf for comp in f.p] + [comp * f.q * t for comp in g.p]
    return RationalBallMap(f.n, f.N + g.N, comps, f.q * g.q)


# --------------------------------------------------------------- Whitney terms
@dataclass(frozen=True)
class WhitneyStep:
    """One extension step: tensor subspace basis, domain automorphism, injection."""

    basis: np.ndarray
    phi: Optional[BallAutomorphism] = None
    injection: Optional[np.ndarray] = None


@dataclass(frozen=True)
class WhitneyTerm:
    """A term of an iterated tensor sequence, with its construction history.

    ``maps[k]`` is the k-th map of the sequence (``maps[0]`` is the starting
    automorphism), ``maps[-1]`` the current one.  The degree of the k-th map
    is at most k + 1, and every map in the chain is certified proper on
    construction.
    """

    start: BallAutomorphism
    steps: tuple
    maps: tuple

    @property
    def map(self) -> RationalBallMap:
        return self.maps[-1]

    @property
    def length(self) -> int:
        return len(self.steps)

    def parent(self) -> "WhitneyTerm":
        if not self.steps:
            raise ValueError("the starting term has no parent")
        return WhitneyTerm(self.start, self.steps[:-1], self.maps[:-1])


def whitney_start(phi: BallAutomorphism, certify: bool = True) -> WhitneyTerm:
    m = automorphism_map(phi)
    if certify:
        _require_proper(m)
    return WhitneyTerm(phi, (), (m,))


def _require_proper(m: RationalBallMap):
    certificate = certify_proper(m)
    if certificate.verdict is not Verdict.PROPER:
        raise ArithmeticError(
            f"construction produced a non-proper map: {certificate.verdict.value}, "
            f"residual {certificate.residual_norm:.3e}")


def whitney_extend(term: WhitneyTerm, basis, phi: Optional[BallAutomorphism] = None,
                   injection: Optional[np.ndarray] = None,
                   certify: bool = True) -> WhitneyTerm:
    """Extend a Whitney term by one tensor step followed by an isometric injection.

    The new degree is at most (history length + 2); it fails to increase
    exactly when the tensored subspace misses all top-degree components.
    """
    current = term.map
    basis = subspace_basis(current.N, basis)
    new_map = tensor_on_subspace(current, basis, phi)
    if injection is not None:
        injection = np.asarray(injection, dtype=complex)
        if injection.shape[1] != new_map.N:
            raise DimensionMismatchError("injection must accept the tensored target")
        if not _linalg.has_orthonormal_columns(injection):
            raise ValueError("injection must be norm-preserving (orthonormal columns)")
        new_map = apply_linear(injection, new_map)
    if certify:
        _require_proper(new_map)
    expected = term.length + 2
    if new_map.degree > expected:
        raise ArithmeticError(
            f"degree {new_map.degree} exceeds the bound {expected} for a Whitney term")
    step = WhitneyStep(basis=basis, phi=phi, injection=injection)
    return WhitneyTerm(term.start, term.steps + (step,), term.maps + (new_map,))


def random_ball_automorphism(n: int, rng: np.random.Generator,
                             max_center_norm: float = 0.5) -> BallAutomorphism:
    direction = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    radius = max_center_norm * rng.random()
    return BallAutomorphism(radius * direction, _linalg.random_unitary(n, rng))


def random_blaschke_product(rng: np.random.Generator, max_factors: int = 6,
                            min_factors: int = 1,
                            radius_range: tuple = (0.05, 0.85)) -> BlaschkeProduct:
    count = int(rng.integers(min_factors, max_factors + 1))
    lo, hi = radius_range
    zeros = []
    for _ in range(count):
        r = lo + (hi - lo) * rng.random()
        angle = 2.0 * np.pi * rng.random()
        zeros.append(r * np.exp(1j * angle))
    return BlaschkeProduct(2.0 * np.pi * rng.random(), zeros)
