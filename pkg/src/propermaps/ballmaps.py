"""Rational maps between unit balls: data type, properness certificate, invariants.

A map is stored as a numerator vector of polynomials together with a scalar
denominator normalized so q(0) = 1.  Properness of p/q as a map from the unit
ball of C^n to the unit ball of C^N is certified exactly at the coefficient
level: the Hermitian form of ||p||^2 - |q|^2 is reduced modulo the sphere
relation, and the map is proper precisely when the remainder vanishes and the
map is nonconstant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _linalg
from .polyalg import (DEFAULT_TOL, HermitianForm, MultiIndex, Polynomial,
                      properness_form, reduce_mod_sphere, squared_norm_form)

#: Fixed default seed for all pseudo-random sampling (reproducible runs).
DEFAULT_SEED = 7

#: Sampling floor below which the denominator counts as vanishing on the ball.
DENOMINATOR_FLOOR = 1e-6

DENOMINATOR_SAMPLES = 10_000
WITNESS_SAMPLES = 500


class DimensionMismatchError(ValueError):
    """Operands live over different domain or target dimensions."""


class NormalizationError(ValueError):
    """The denominator does not satisfy q(0) = 1."""


class DenominatorVanishesError(ArithmeticError):
    """The denominator has a (sampled) zero on the closed unit ball."""


class Verdict(enum.Enum):
    PROPER = "proper"
    NOT_PROPER = "not-proper"
    CONSTANT_ON_SPHERE = "constant-on-sphere"


class RationalBallMap:
    """Rational map p/q from the unit ball of C^n toward C^N.

    Invariants enforced at construction: all components share the domain
    variable count, and q(0) = 1.  Nonvanishing of q on the closed ball is a
    sampled check performed during certification, not here.
    """

    __slots__ = ("n", "N", "p", "q")

    def __init__(self, domain_dim: int, target_dim: int,
                 numerator: Sequence[Polynomial], denominator: Polynomial | None = None,
                 tol: float = DEFAULT_TOL):
        numerator = tuple(numerator)
        if target_dim != len(numerator):
            raise DimensionMismatchError(
                f"target_dim={target_dim} but {len(numerator)} components given")
        if target_dim < 1:
            raise DimensionMismatchError("target dimension must be positive")
        for comp in numerator:
            if comp.nvars != domain_dim:
                raise DimensionMismatchError("component variable count mismatch")
        if denominator is None:
            denominator = Polynomial.one(domain_dim)
        if denominator.nvars != domain_dim:
            raise DimensionMismatchError("denominator variable count mismatch")
        if abs(denominator.constant_term() - 1.0) > tol:
            raise NormalizationError(
                f"denominator must satisfy q(0)=1, got q(0)={denominator.constant_term()}")
        object.__setattr__(self, "n", domain_dim)
        object.__setattr__(self, "N", target_dim)
        object.__setattr__(self, "p", numerator)
        object.__setattr__(self, "q", denominator)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("RationalBallMap is immutable")

    # ------------------------------------------------------------------ build
    @classmethod
    def identity(cls, n: int) -> "RationalBallMap":
        return cls(n, n, [Polynomial.variable(n, j) for j in range(n)])

    @classmethod
    def constant(cls, values: Sequence[complex], domain_dim: int) -> "RationalBallMap":
        comps = [Polynomial.constant(domain_dim, v) for v in values]
        return cls(domain_dim, len(comps), comps)

    @classmethod
    def from_components(cls, components: Sequence[Polynomial],
                        denominator: Polynomial | None = None) -> "RationalBallMap":
        components = list(components)
        if not components:
            raise DimensionMismatchError("need at least one component")
        return cls(components[0].nvars, len(components), components, denominator)

    # ---------------------------------------------------------------- queries
    @property
    def degree(self):
        """Numerator degree: max total degree over terms above tolerance."""
        return max((comp.degree for comp in self.p), default=float("-inf"))

    @property
    def has_trivial_denominator(self) -> bool:
        return self.q.is_constant

    @property
    def is_monomial_map(self) -> bool:
        """True when q = 1 and every component is a single term (or zero)."""
        return (self.has_trivial_denominator
                and all(len(c.significant_terms()) <= 1 for c in self.p))

    def is_constant_map(self, tol: float = DEFAULT_TOL) -> bool:
        """True when p/q is a constant map, i.e. p_i = p_i(0) * q for all i."""
        for comp in self.p:
            residue = comp - comp.constant_term() * self.q
            if residue.max_abs_coeff() > tol:
                return False
        return True

    def monomial_support(self) -> list[MultiIndex]:
        monos = {alpha for comp in self.p for alpha in comp.terms}
        return sorted(monos, reverse=True)

    def coefficient_matrix(self, monomials: Sequence[MultiIndex] | None = None):
        """(monomials, matrix) with one row per component, one column per monomial."""
        monos = list(monomials) if monomials is not None else self.monomial_support()
        index = {alpha: j for j, alpha in enumerate(monos)}
        mat = np.zeros((self.N, len(monos)), dtype=complex)
        for i, comp in enumerate(self.p):
            for alpha, c in comp.terms.items():
                mat[i, index[alpha]] = c
        return monos, mat

    # -------------------------------------------------------------- evaluation
    def evaluate(self, point: Sequence[complex]) -> np.ndarray:
        qv = self.q(point)
        if qv == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return np.array([comp(point) for comp in self.p], dtype=complex) / qv

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        qv = self.q.evaluate_many(pts)
        num = np.stack([comp.evaluate_many(pts) for comp in self.p], axis=1)
        return num / qv[:, None]

    # ------------------------------------------------------------------ forms
    def squared_norm_form(self) -> HermitianForm:
        """Hermitian form of ||p||^2 (numerator only)."""
        return squared_norm_form(self.p)

    def properness_form(self) -> HermitianForm:
        return properness_form(self.p, self.q)

    # ------------------------------------------------------------- conversions
    def padded(self, target_dim: int) -> "RationalBallMap":
        """The map followed by the injection that appends zero components."""
        if target_dim < self.N:
            raise DimensionMismatchError("cannot pad to a smaller target")
        if target_dim == self.N:
            return self
        comps = list(self.p) + [Polynomial.zero(self.n)] * (target_dim - self.N)
        return RationalBallMap(self.n, target_dim, comps, self.q)

    def scaled(self, factor: complex) -> "RationalBallMap":
        return RationalBallMap(self.n, self.N, [comp * factor for comp in self.p], self.q)

    def allclose(self, other: "RationalBallMap", tol: float = DEFAULT_TOL) -> bool:
        if self.n != other.n:
            return False
        big = max(self.N, other.N)
        a, b = self.padded(big), other.padded(big)
        if not a.q.allclose(b.q, tol):
            return False
        return all(x.allclose(y, tol) for x, y in zip(a.p, b.p))

    def __repr__(self):
        return (f"RationalBallMap(B{self.n} -> B{self.N}, degree={self.degree}, "
                f"q_degree={self.q.degree})")


@dataclass(frozen=True)
class PropernessCertificate:
    """Outcome of exact properness certification plus a sampled witness.

    ``residual_norm`` is the largest remainder entry of the reduced Hermitian
    form (zero means ||p||^2 = |q|^2 identically on the sphere).  ``witness``
    is the sampled sphere point where | ||f||^2 - 1 | was largest, with that
    value in ``witness_value``.
    """

    verdict: Verdict
    residual_norm: float
    witness: Optional[np.ndarray] = None
    witness_value: Optional[float] = None

    @property
    def is_proper(self) -> bool:
        return self.verdict is Verdict.PROPER


def sphere_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Pseudo-random points on the unit sphere of C^n."""
    g = rng.standard_normal((count, 2 * n))
    z = g[:, :n] + 1j * g[:, n:]
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0] = 1.0
    return z / norms[:, None]


def ball_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Pseudo-random points of the closed unit ball of C^n (radius-uniform)."""
    directions = sphere_points(n, count, rng)
    radii = rng.random(count) ** (1.0 / (2 * n))
    return directions * radii[:, None]


def _check_denominator(m: RationalBallMap, floor: float, samples: int,
                       rng: np.random.Generator) -> float:
    if m.has_trivial_denominator:
        return abs(m.q.constant_term())
    half = samples // 2
    pts = np.vstack([ball_points(m.n, half, rng),
                     sphere_points(m.n, samples - half, rng)])
    vals = np.abs(m.q.evaluate_many(pts))
    minimum = float(vals.min())
    if minimum < floor:
        raise DenominatorVanishesError(
            f"denominator modulus {minimum:.3e} below {floor:.1e} on the closed ball")
    return minimum


def certify_proper(m: RationalBallMap, tol: float = DEFAULT_TOL,
                   seed: int = DEFAULT_SEED,
                   denominator_floor: float = DENOMINATOR_FLOOR,
                   denominator_samples: int = DENOMINATOR_SAMPLES,
                   witness_samples: int = WITNESS_SAMPLES) -> PropernessCertificate:
    """Certify whether p/q is a proper map between unit balls.

    The verdict is PROPER exactly when the sphere-reduced remainder of
    ||p||^2 - |q|^2 vanishes within tolerance and the map is nonconstant;
    CONSTANT_ON_SPHERE covers the boundary case where the norms agree but
    p/q is constant.  Raises DenominatorVanishesError when q has a sampled
    modulus below the floor on the closed ball.
    """
    rng = np.random.default_rng(seed)
    _check_denominator(m, denominator_floor, denominator_samples, rng)

    remainder = reduce_mod_sphere(m.properness_form())
    residual = remainder.max_abs_entry()

    witness = None
    witness_value = None
    if witness_samples > 0:
        pts = sphere_points(m.n, witness_samples, rng)
        values = np.abs(np.sum(np.abs(m.evaluate_many(pts)) ** 2, axis=1) - 1.0)
        k = int(np.argmax(values))
        witness = pts[k]
        witness_value = float(values[k])

    if residual <= tol:
        verdict = Verdict.CONSTANT_ON_SPHERE if m.is_constant_map(tol) else Verdict.PROPER
    else:
        verdict = Verdict.NOT_PROPER
    if verdict is Verdict.PROPER and m.N < m.n:
        # A proper map cannot decrease the dimension; reaching this means the
        # certificate itself is inconsistent.
        raise ArithmeticError("certified a proper map with target below domain")
    return PropernessCertificate(verdict, residual, witness, witness_value)


def degree(m: RationalBallMap) -> int:
    """Degree of a proper rational map: the degree of its numerator."""
    d = m.degree
    if d == float("-inf"):
        return 0
    return int(d)


def embedding_dimension(m: RationalBallMap, rtol: float = _linalg.RANK_RTOL) -> int:
    """Number of linearly independent components (rank of the coefficient rows)."""
    _, mat = m.coefficient_matrix()
    return _linalg.numerical_rank(mat, rtol=rtol)


@dataclass(frozen=True)
class NormEquivalence:
    """Result of the squared-norm comparison of two maps.

    On equivalence ``unitary`` maps the first map's components onto the
    second's (after zero-padding to the common target), with the reported
    max coefficient residual.  On failure ``mismatch`` holds a distinguishing
    Hermitian-form entry (alpha, beta, difference).
    """

    equivalent: bool
    unitary: Optional[np.ndarray] = None
    witness_residual: Optional[float] = None
    mismatch: Optional[tuple] = None


def _norm_forms(f: RationalBallMap, g: RationalBallMap, tol: float):
    """Hermitian forms whose equality is ||f||^2 == ||g||^2 as functions."""
    if f.q.allclose(g.q, tol):
        return squared_norm_form(f.p), squared_norm_form(g.p)
    # Cross-multiplied comparison |p_f|^2 |q_g|^2 == |p_g|^2 |q_f|^2.
    return (squared_norm_form(f.p).product(squared_norm_form([g.q])),
            squared_norm_form(g.p).product(squared_norm_form([f.q])))


def norm_equivalent(f: RationalBallMap, g: RationalBallMap,
                    tol: float = DEFAULT_TOL) -> NormEquivalence:
    """Decide ||f||^2 == ||g||^2, producing a unitary witness or a mismatch.

    Targets are first padded to a common dimension by appending zeros.  The
    witness is computed by least squares over unitaries on the stacked
    coefficient vectors (orthogonal Procrustes), so it is always unitary,
    including for rank-deficient stacks such as f vs f + zero components.
    """
    if f.n != g.n:
        raise DimensionMismatchError("maps must share the domain dimension")
    form_f, form_g = _norm_forms(f, g, tol)
    diff = form_f - form_g
    if not diff.is_zero:
        key = max(diff.entries, key=lambda k: abs(diff.entries[k]))
        worst = diff.entries[key]
        if abs(worst) > tol:
            return NormEquivalence(False, mismatch=(key[0], key[1], worst))

    big = max(f.N, g.N)
    fp, gp = f.padded(big), g.padded(big)
    same_q = f.q.allclose(g.q, tol)
    left = list(fp.p) if same_q else [comp * g.q for comp in fp.p]
    right = list(gp.p) if same_q else [comp * f.q for comp in gp.p]
    monos = sorted({a for comp in left + right for a in comp.terms}, reverse=True)
    index = {a: j for j, a in enumerate(monos)}
    stack_f = np.zeros((big, len(monos)), dtype=complex)
    stack_g = np.zeros((big, len(monos)), dtype=complex)
    for i, comp in enumerate(left):
        for alpha, c in comp.terms.items():
            stack_f[i, index[alpha]] = c
    for i, comp in enumerate(right):
        for alpha, c in comp.terms.items():
            stack_g[i, index[alpha]] = c
    unitary = _linalg.procrustes_unitary(stack_f, stack_g)
    residual = float(np.max(np.abs(unitary @ stack_f - stack_g))) if monos else 0.0
    return NormEquivalence(True, unitary=unitary, witness_residual=residual)


def degree_bound(n: int, N: int) -> Fraction:
    """Upper bound N(N-1) / (2(2n-3)) for the degree of a proper map."""
    if n < 2:
        raise ValueError("the degree bound requires domain dimension n >= 2")
    return Fraction(N * (N - 1), 2 * (2 * n - 3))


def largest_binomial_coefficient(d: int) -> int:
    """max_k binomial(d, k), the one-variable denominator coefficient bound."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return math.comb(d, d // 2)


def denominator_sup_bound(d: int) -> float:
    """Bound for |q| on the ball: (d+1) times the largest binomial coefficient."""
    return float((d + 1) * largest_binomial_coefficient(d))


def coefficient_bound(n: int, d: int) -> float:
    """Explicit coefficient bound for normalized degree-d proper maps on B_n.

    Chain: one-variable factorization bounds the coefficients of q by the
    largest binomial coefficient; the homogeneous expansion gives
    |q| <= (d+1) B(1,d) on the ball, and ||p|| = |q| on the sphere; Cauchy
    estimates on the polydisc of radius 1/(2 sqrt(n)) inside the ball then
    bound every coefficient by the sup times (2 sqrt(n))^d.
    """
    if n < 1:
        raise ValueError("domain dimension must be positive")
    if d < 0:
        raise ValueError("degree must be non-negative")
    return denominator_sup_bound(d) * (2.0 * math.sqrt(n)) ** d


def apply_linear(matrix: np.ndarray, m: RationalBallMap) -> RationalBallMap:
    """Compose with a linear map on the target: rows of ``matrix`` give components."""
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[1] != m.N:
        raise DimensionMismatchError(
            f"matrix shape {mat.shape} does not accept target dimension {m.N}")
    comps = []
    for i in range(mat.shape[0]):
        acc = Polynomial.zero(m.n)
        for k in range(m.N):
            c = mat[i, k]
            if abs(c) > 0:
                acc = acc + m.p[k] * c
        comps.append(acc)
    return RationalBallMap(m.n, mat.shape[0], comps, m.q)


def compose(outer: RationalBallMap, inner: RationalBallMap) -> RationalBallMap:
    """Composition outer(inner(z)) as a rational map, renormalized to q(0) = 1.

    Substitution clears denominators by homogenizing with powers of the inner
    denominator, so the result is exact at the coefficient level.
    """
    if inner.N != outer.n:
        raise DimensionMismatchError(
            f"cannot compose B{inner.n}->B{inner.N} with B{outer.n}->B{outer.N}")
    deg_terms = [outer.q.degree] + [comp.degree for comp in outer.p]
    top = max(int(d) for d in deg_terms if d != float("-inf"))

    power_cache: dict[MultiIndex, Polynomial] = {}

    def monomial_in_inner(alpha: MultiIndex) -> Polynomial:
        cached = power_cache.get(alpha)
        if cached is not None:
            return cached
        acc = Polynomial.one(inner.n)
        for j, e in enumerate(alpha):
            for _ in range(e):
                acc = acc * inner.p[j]
        power_cache[alpha] = acc
        return acc

    q_pows = [Polynomial.one(inner.n)]
    for _ in range(top):
        q_pows.append(q_pows[-1] * inner.q)

    def substituted(poly: Polynomial) -> Polynomial:
        acc = Polynomial.zero(inner.n)
        for alpha, c in poly.terms.items():
            acc = acc + monomial_in_inner(alpha) * q_pows[top - sum(alpha)] * c
        return acc

    new_p = [substituted(comp) for comp in outer.p]
    new_q = substituted(outer.q)
    c0 = new_q.constant_term()
    if abs(c0) <= DEFAULT_TOL:
        raise DenominatorVanishesError("composed denominator vanishes at the origin")
    scale = 1.0 / c0
    return RationalBallMap(inner.n, outer.N, [comp * scale for comp in new_p],
                           new_q * scale)
