"""Homotopy families of proper ball maps: contract, verification, generators.

A family is an evaluator t in [0, 1] -> RationalBallMap together with endpoint
maps.  Endpoint agreement is always up to zero-padding and a target unitary,
which is the right notion when targets of different dimensions are compared.
Verification samples the parameter interval, certifies properness at every
grid point, and tracks degree and embedding-dimension profiles plus the
largest coefficient increment between adjacent samples.

Families are concatenated by piecewise-linear reparameterization; junctions
must agree coefficientwise or at least be norm-equivalent, in which case a
unitary path from the identity to the witness unitary is spliced in (the
unitary group is path connected, so this stays inside proper maps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _linalg
from . import ballmaps as _bm
from .ballmaps import (DEFAULT_SEED, DimensionMismatchError, PropernessCertificate,
                       RationalBallMap, Verdict, apply_linear, certify_proper,
                       embedding_dimension, norm_equivalent)
from .constructors import (BallAutomorphism, BlaschkeProduct, WhitneyTerm,
                           automorphism_from_map, automorphism_map, blaschke_map,
                           tensor_on_subspace, juxtapose)
from .polyalg import DEFAULT_TOL, Polynomial

RATIONAL = "rational"
FIXED_TARGET = "fixed-target"
GENERAL = "general"


class PropernessFailureError(ArithmeticError):
    """A sampled family member failed properness certification."""

    def __init__(self, t: float, certificate: PropernessCertificate):
        super().__init__(f"family member at t={t} is {certificate.verdict.value} "
                         f"(residual {certificate.residual_norm:.3e})")
        self.t = t
        self.certificate = certificate


class EndpointMismatchError(ValueError):
    """A family endpoint does not match the declared map up to unitary and padding."""


class NotTensorImageError(ValueError):
    """The monomial map is not an iterated tensor image (missing or unequal siblings)."""


@dataclass(frozen=True)
class HomotopyFamily:
    """Continuous family of proper maps from B_n into B_M.

    ``evaluator`` must return a proper map with target dimension at most M for
    every t in [0, 1]; ``evaluate`` pads the result to exactly M components.
    ``evaluate(0)`` and ``evaluate(1)`` are norm-equivalent to the declared
    endpoints padded by zeros.
    """

    domain_dim: int
    target_dim: int
    evaluator: Callable[[float], RationalBallMap]
    endpoint_left: RationalBallMap
    endpoint_right: RationalBallMap
    kinds: tuple = (RATIONAL,)

    def evaluate(self, t: float) -> RationalBallMap:
        if not 0.0 <= t <= 1.0:
            raise ValueError("family parameter must lie in [0, 1]")
        m = self.evaluator(t)
        return m.padded(self.target_dim)

    def reversed(self) -> "HomotopyFamily":
        return HomotopyFamily(self.domain_dim, self.target_dim,
                              lambda t: self.evaluator(1.0 - t),
                              self.endpoint_right, self.endpoint_left, self.kinds)


def _segment(domain_dim: int, evaluator: Callable[[float], RationalBallMap],
             kinds: tuple = (RATIONAL,)) -> HomotopyFamily:
    left = evaluator(0.0)
    right = evaluator(1.0)
    if left.N != right.N:
        raise DimensionMismatchError("segment endpoints disagree in target dimension")
    return HomotopyFamily(domain_dim, left.N, evaluator, left, right, kinds)


def constant_family(m: RationalBallMap) -> HomotopyFamily:
    return HomotopyFamily(m.n, m.N, lambda t: m, m, m, (RATIONAL, FIXED_TARGET))


def unitary_bridge_family(m: RationalBallMap, unitary: np.ndarray) -> HomotopyFamily:
    """Family t -> U(t) m along a unitary path from the identity to ``unitary``."""
    path = _linalg.UnitaryPath(unitary)
    return _segment(m.n, lambda t: apply_linear(path(t), m))


def concat_families(segments: Sequence[HomotopyFamily], *,
                    endpoint_left: Optional[RationalBallMap] = None,
                    endpoint_right: Optional[RationalBallMap] = None,
                    kinds: tuple = (RATIONAL,),
                    tol: float = DEFAULT_TOL) -> HomotopyFamily:
    """Concatenate families, splicing unitary bridges at norm-equivalent junctions."""
    segs = list(segments)
    if not segs:
        raise ValueError("need at least one segment")
    n = segs[0].domain_dim
    if any(s.domain_dim != n for s in segs):
        raise DimensionMismatchError("segments must share the domain dimension")
    big = max(s.target_dim for s in segs)

    pieces: list[HomotopyFamily] = [segs[0]]
    for nxt in segs[1:]:
        prev_end = pieces[-1].evaluate(1.0).padded(big)
        nxt_start = nxt.evaluate(0.0).padded(big)
        if not prev_end.allclose(nxt_start, 1e3 * tol):
            witness = norm_equivalent(prev_end, nxt_start, tol=1e3 * tol)
            if not witness.equivalent:
                raise EndpointMismatchError(
                    "junction maps are not norm-equivalent; cannot concatenate")
            pieces.append(unitary_bridge_family(prev_end, witness.unitary))
        pieces.append(nxt)

    count = len(pieces)

    def evaluator(t: float) -> RationalBallMap:
        if t >= 1.0:
            return pieces[-1].evaluate(1.0).padded(big)
        x = t * count
        idx = int(x)
        return pieces[idx].evaluate(x - idx).padded(big)

    left = endpoint_left if endpoint_left is not None else segs[0].endpoint_left
    right = endpoint_right if endpoint_right is not None else segs[-1].endpoint_right
    return HomotopyFamily(n, big, evaluator, left, right, kinds)


# ------------------------------------------------------------------ verification
@dataclass
class FamilyReport:
    """Grid verification record for a homotopy family."""

    grid: list
    degrees: list
    embedding_dimensions: list
    residuals: list
    properness_failures: list
    endpoint_left_ok: bool
    endpoint_right_ok: bool
    max_coefficient_step: float
    target_dim: int = 0

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def passed(self) -> bool:
        return (not self.properness_failures and self.endpoint_left_ok
                and self.endpoint_right_ok)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "grid_size": len(self.grid),
            "target_dim": self.target_dim,
            "degrees": self.degrees,
            "embedding_dimensions": self.embedding_dimensions,
            "max_residual": self.max_residual,
            "max_coefficient_step": self.max_coefficient_step,
            "properness_failures": [
                {"t": t, "verdict": cert.verdict.value,
                 "residual": cert.residual_norm}
                for t, cert in self.properness_failures],
            "endpoint_left_ok": self.endpoint_left_ok,
            "endpoint_right_ok": self.endpoint_right_ok,
        }

    def summary(self) -> str:
        lines = [f"grid={len(self.grid)} target_dim={self.target_dim} "
                 f"passed={self.passed}",
                 f"degree profile: {sorted(set(self.degrees))} "
                 f"embdim profile: {sorted(set(self.embedding_dimensions))}",
                 f"max residual: {self.max_residual:.3e}; "
                 f"max coefficient step: {self.max_coefficient_step:.3e}"]
        for t, cert in self.properness_failures[:5]:
            lines.append(f"  failure at t={t:.4f}: {cert.verdict.value} "
                         f"residual={cert.residual_norm:.3e}")
        if not self.endpoint_left_ok:
            lines.append("  left endpoint mismatch")
        if not self.endpoint_right_ok:
            lines.append("  right endpoint mismatch")
        return "\n".join(lines)


def _coefficient_distance(m1: RationalBallMap, m2: RationalBallMap) -> float:
    worst = 0.0
    for c1, c2 in zip(m1.p, m2.p):
        for alpha in set(c1.terms) | set(c2.terms):
            worst = max(worst, abs(c1.terms.get(alpha, 0.0) - c2.terms.get(alpha, 0.0)))
    for alpha in set(m1.q.terms) | set(m2.q.terms):
        worst = max(worst, abs(m1.q.terms.get(alpha, 0.0) - m2.q.terms.get(alpha, 0.0)))
    return worst


def verify_family(family: HomotopyFamily, grid_size: int = 101,
                  tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED,
                  strict: bool = False) -> FamilyReport:
    """Certify a family on an equispaced grid and check its endpoints.

    Every sampled map is certified proper; degree and embedding-dimension
    profiles are recorded along with the largest coefficient increment
    between adjacent samples (an empirical continuity measure).  Endpoints
    are compared with the declared maps by norm equivalence after padding.
    With ``strict`` the first failure raises instead of being recorded.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    ts = [i / (grid_size - 1) for i in range(grid_size)]
    degrees, embdims, residuals, failures = [], [], [], []
    previous = None
    max_step = 0.0
    for t in ts:
        m = family.evaluate(t)
        cert = certify_proper(m, tol=tol, seed=seed)
        degrees.append(_bm.degree(m))
        embdims.append(embedding_dimension(m))
        residuals.append(cert.residual_norm)
        if cert.verdict is not Verdict.PROPER:
            if strict:
                raise PropernessFailureError(t, cert)
            failures.append((t, cert))
        if previous is not None:
            max_step = max(max_step, _coefficient_distance(previous, m))
        previous = m

    endpoint_tol = 1e3 * tol
    left_ok = norm_equivalent(family.evaluate(0.0), family.endpoint_left,
                              tol=endpoint_tol).equivalent
    right_ok = norm_equivalent(family.evaluate(1.0), family.endpoint_right,
                               tol=endpoint_tol).equivalent
    if strict and not (left_ok and right_ok):
        raise EndpointMismatchError("family endpoints do not match the declared maps")
    return FamilyReport(ts, degrees, embdims, residuals, failures,
                        left_ok, right_ok, max_step, family.target_dim)


# -------------------------------------------------------------------- generators
def juxtaposition_family(f: RationalBallMap, g: RationalBallMap) -> HomotopyFamily:
    """The family sqrt(1-t^2) f + t g connecting f + 0 and 0 + g."""
    if f.n != g.n:
        raise DimensionMismatchError("juxtaposition requires a common domain")
    return HomotopyFamily(f.n, f.N + g.N, lambda t: juxtapose(f, g, t),
                          f, g, (RATIONAL, FIXED_TARGET))


def blaschke_homotopy(b: BlaschkeProduct) -> HomotopyFamily:
    """Contract all zeros and the phase to 0: endpoints are the product and z^m."""
    if not b.zeros:
        raise ValueError("a product with no factors is constant, hence not proper")
    m = b.factor_count
    left = blaschke_map(b)
    right = RationalBallMap(1, 1, [Polynomial.monomial((m,))])

    def evaluator(t: float) -> RationalBallMap:
        shrink = 1.0 - t
        bt = BlaschkeProduct(shrink * b.theta, [shrink * a for a in b.zeros])
        return blaschke_map(bt)

    return HomotopyFamily(1, 1, evaluator, left, right, (RATIONAL, FIXED_TARGET))


def automorphism_path(phi: BallAutomorphism) -> Callable[[float], BallAutomorphism]:
    """t -> automorphism with center (1-t) a and unitary part contracted to I."""
    upath = _linalg.UnitaryPath(phi.U)
    center = phi.a

    def at(t: float) -> BallAutomorphism:
        return BallAutomorphism((1.0 - t) * center, upath(1.0 - t))

    return at


def automorphism_contraction(phi) -> HomotopyFamily:
    """Family joining an automorphism to the identity map.

    Accepts a BallAutomorphism, or an equidimensional degree-one proper map,
    which is recognized as an automorphism first.
    """
    if isinstance(phi, RationalBallMap):
        phi = automorphism_from_map(phi)
    at = automorphism_path(phi)
    left = automorphism_map(phi)
    right = RationalBallMap.identity(phi.dim)
    return HomotopyFamily(phi.dim, phi.dim, lambda t: automorphism_map(at(t)),
                          left, right, (RATIONAL, FIXED_TARGET))


def degree_drop_family() -> HomotopyFamily:
    """Built-in quartic/cubic family from B_2 to B_5 with a degree drop.

    With c = t and s = sqrt(1 - t^2) the member is

        (cz - sw^2, zw, (cz - sw^2)(sz + cw^2), zw (sz + cw^2), (sz + cw^2)^2).

    Every member is proper with embedding dimension 5; the degree is 4 on
    (0, 1] and drops to 3 at t = 0, so the degree is not a homotopy invariant.
    """
    z = Polynomial.variable(2, 0)
    w = Polynomial.variable(2, 1)
    zw = z * w
    w2 = w * w

    def evaluator(t: float) -> RationalBallMap:
        c = float(t)
        s = math.sqrt(max(0.0, 1.0 - c * c))
        u = z * c - w2 * s
        v = z * s + w2 * c
        return RationalBallMap(2, 5, [u, zw, u * v, zw * v, v * v])

    left = evaluator(0.0)   # degree 3
    right = evaluator(1.0)  # degree 4
    return HomotopyFamily(2, 5, evaluator, left, right, (RATIONAL, FIXED_TARGET))


def faran_maps() -> dict:
    """The four pairwise spherically inequivalent maps from B_2 to B_3."""
    z = Polynomial.variable(2, 0)
    w = Polynomial.variable(2, 1)
    zero = Polynomial.zero(2)
    return {
        "f": RationalBallMap(2, 3, [z, w, zero]),
        "g": RationalBallMap(2, 3, [z * z, z * w, w]),
        "h": RationalBallMap(2, 3, [z * z, z * w * math.sqrt(2.0), w * w]),
        "phi": RationalBallMap(2, 3, [z ** 3, z * w * math.sqrt(3.0), w ** 3]),
    }


def faran_families() -> dict:
    """Explicit homotopies between Faran maps in target dimensions 4, 4, 5.

    Keys: "fg" joins f and g in dimension 4, "gh" joins h and g in
    dimension 4, "hphi" joins phi and h in dimension 5.  Endpoint order
    follows the evaluator: endpoint_left is the map at t = 0.
    """
    maps = faran_maps()
    z = Polynomial.variable(2, 0)
    w = Polynomial.variable(2, 1)
    z2, zw, w2 = z * z, z * w, w * w

    def fg(t: float) -> RationalBallMap:
        s = math.sqrt(max(0.0, 1.0 - t * t))
        return RationalBallMap(2, 4, [z * s, z2 * t, zw * t, w])

    def gh(t: float) -> RationalBallMap:
        return RationalBallMap(2, 4, [z2, zw * math.sqrt(2.0 - t * t), w * t,
                                      w2 * math.sqrt(max(0.0, 1.0 - t * t))])

    def hphi(t: float) -> RationalBallMap:
        s = math.sqrt(max(0.0, 1.0 - t * t))
        return RationalBallMap(2, 5, [z2 * t, w2 * t, (z ** 3) * s, (w ** 3) * s,
                                      zw * math.sqrt(3.0 - t * t)])

    return {
        "fg": HomotopyFamily(2, 4, fg, maps["f"], maps["g"], (RATIONAL, FIXED_TARGET)),
        "gh": HomotopyFamily(2, 4, gh, maps["h"], maps["g"], (RATIONAL, FIXED_TARGET)),
        "hphi": HomotopyFamily(2, 5, hphi, maps["phi"], maps["h"],
                               (RATIONAL, FIXED_TARGET)),
    }


# ------------------------------------------------- reduction to a monomial map
def _alignment_permutation(components: Sequence[Polynomial], basis: np.ndarray,
                           complement: np.ndarray):
    """Choose component slots for the tensor subspace and the aligning unitary.

    Returns (S, rest, U) where S lists the slots whose monomials feed the
    tensor block (the first one of top degree, so the degree goes up), rest
    the remaining slots in ascending order, and U the unitary mapping slot
    basis vectors onto the subspace basis (None when it is the identity).
    """
    size = len(components)
    d = basis.shape[1]
    degrees = [c.degree for c in components]
    top_degree = max(degrees)

    canonical: Optional[list] = []
    for m in range(d):
        col = basis[:, m]
        j = int(np.argmax(np.abs(col)))
        if abs(col[j] - 1.0) <= 1e-12 and np.sum(np.abs(col)) - abs(col[j]) <= 1e-12:
            canonical.append(j)
        else:
            canonical = None
            break
    if (canonical is not None and len(set(canonical)) == d
            and max(degrees[j] for j in canonical) == top_degree):
        slots = canonical
    else:
        top = degrees.index(top_degree)
        pool = sorted((i for i in range(size) if i != top),
                      key=lambda i: (components[i].is_zero, i))
        slots = [top] + pool[:d - 1]
    rest = [i for i in range(size) if i not in slots]

    frame = np.hstack([basis, complement])
    perm = np.zeros((size, size), dtype=complex)
    for pos, i in enumerate(list(slots) + rest):
        perm[i, pos] = 1.0
    unitary = frame @ perm.conj().T
    if np.max(np.abs(unitary - np.eye(size))) <= 1e-12:
        return slots, rest, None
    return slots, rest, unitary


def _monomial_stage(fam_prev: HomotopyFamily, g_comps: list, step, n: int):
    """Lift the reduction family through one tensor step.

    Given a family joining F_k to the monomial map with components
    ``g_comps`` (one polynomial per slot of the family's target), produce the
    family joining F_{k+1} to the next monomial map: contract the step's
    automorphism, push the previous family through the tensor step, rotate the
    subspace onto monomial slots, and absorb the injection by a unitary
    bridge.
    """
    prev_dim = fam_prev.target_dim
    base_rows = step.basis.shape[0]
    d = step.basis.shape[1]
    if prev_dim > base_rows:
        basis = np.vstack([step.basis,
                           np.zeros((prev_dim - base_rows, d), dtype=complex)])
    else:
        basis = step.basis
    complement = _linalg.gram_schmidt_complement(basis)

    jmat = step.injection
    if jmat is not None and prev_dim > base_rows:
        extra = prev_dim - base_rows
        lifted = np.zeros((jmat.shape[0] + extra, jmat.shape[1] + extra), dtype=complex)
        lifted[:jmat.shape[0], :jmat.shape[1]] = jmat
        lifted[jmat.shape[0]:, jmat.shape[1]:] = np.eye(extra)
        jmat = lifted

    def stage_map(m: RationalBallMap, phi=None) -> RationalBallMap:
        tensored = tensor_on_subspace(m, basis, phi)
        return apply_linear(jmat, tensored) if jmat is not None else tensored

    segments = []
    start = fam_prev.evaluate(0.0)
    if step.phi is not None and not step.phi.is_identity:
        at = automorphism_path(step.phi)
        segments.append(_segment(n, lambda t: stage_map(start, at(t))))
    segments.append(_segment(n, lambda t: stage_map(fam_prev.evaluate(t))))

    slots, rest, unitary = _alignment_permutation(g_comps, basis, complement)
    g_map = RationalBallMap(n, prev_dim, g_comps)
    if unitary is not None:
        upath = _linalg.UnitaryPath(unitary)
        segments.append(_segment(n, lambda t: stage_map(apply_linear(upath(t), g_map))))
        aligned_end = stage_map(apply_linear(unitary, g_map))
    else:
        aligned_end = stage_map(g_map)

    next_comps = [g_comps[i] * Polynomial.variable(n, j)
                  for i in slots for j in range(n)]
    next_comps += [g_comps[r] for r in rest]
    if jmat is not None:
        out_dim = jmat.shape[0]
        padded = next_comps + [Polynomial.zero(n)] * (out_dim - len(next_comps))
        target = RationalBallMap(n, out_dim, padded)
        if not aligned_end.allclose(target, 1e-6):
            witness = norm_equivalent(aligned_end, target, tol=1e-6)
            if not witness.equivalent:
                raise ArithmeticError("injection bridge junction is not norm-equivalent")
            segments.append(unitary_bridge_family(aligned_end, witness.unitary))
        next_comps = padded

    return concat_families(segments), next_comps


def homotopy_to_monomial(term: WhitneyTerm) -> HomotopyFamily:
    """Family joining a Whitney term to a monomial map of degree history+1.

    Follows the construction chain: the starting automorphism contracts to the
    identity; each tensor step is pushed through the previous family after
    contracting its automorphism; a unitary rotation keeps the tensored
    subspace on top-degree monomial slots, so the right endpoint is a monomial
    map whose degree is exactly the history length plus one.
    """
    n = term.map.n
    family = automorphism_contraction(term.start)
    g_comps = [Polynomial.variable(n, j) for j in range(n)]
    for step in term.steps:
        family, g_comps = _monomial_stage(family, g_comps, step, n)
    nonzero = [c for c in g_comps if not c.is_zero]
    right = RationalBallMap(n, len(nonzero), nonzero)
    return HomotopyFamily(n, family.target_dim, family.evaluator,
                          term.map, right, (RATIONAL,))


# ------------------------------------------------------- degree-lowering family
def _single_monomials(components: Sequence[Polynomial]) -> list:
    """(slot, monomial, coefficient) for every nonzero single-term component."""
    out = []
    for i, comp in enumerate(components):
        terms = comp.significant_terms()
        if len(terms) > 1:
            raise ValueError("component is not a single monomial")
        if terms:
            (mono, coeff), = terms.items()
            out.append((i, mono, coeff))
    return out


def _match_siblings(slot_terms: list, q_mono: tuple, coefficient: complex,
                    n: int, tol: float) -> list:
    """One slot per variable carrying z_j * q with the common coefficient.

    Duplicate monomials across slots are allowed; any slot with a matching
    coefficient qualifies.  Raises NotTensorImageError when a sibling monomial
    is missing or only present with a different coefficient.
    """
    slots = []
    for j in range(n):
        sibling = tuple(e + (1 if k == j else 0) for k, e in enumerate(q_mono))
        holders = [(i, c) for i, mono, c in slot_terms if mono == sibling]
        if not holders:
            raise NotTensorImageError(
                f"missing sibling component for monomial {sibling}")
        matching = [i for i, c in holders if abs(c - coefficient) <= tol]
        if not matching:
            raise NotTensorImageError(
                f"sibling components have unequal coefficients at {sibling} "
                f"({holders[0][1]} vs {coefficient})")
        slots.append(matching[0])
    return slots


def collapse_to_linear(source, target_dim: Optional[int] = None,
                       tol: float = DEFAULT_TOL) -> HomotopyFamily:
    """Reduce a monomial tensor-image map to the identity in one extra dimension.

    Repeatedly takes the last top-degree monomial m (in descending monomial
    order), writes m = z_j q, checks that all sibling components z_1 q ... z_n q
    are present with a common coefficient, scales those by lambda while a new
    component sqrt(1 - lambda^2) q ramps up in a free slot, and ends the step
    with q replacing the whole block.  Iterating down to degree one yields a
    family in target dimension N + 1 ending at the identity injection.

    Raises NotTensorImageError when the sibling structure is missing, which
    happens exactly for monomial maps outside the iterated tensor image.
    """
    f = source.map if isinstance(source, WhitneyTerm) else source
    if not f.is_monomial_map:
        raise ValueError("degree lowering requires a monomial map with denominator 1")
    n = f.n
    base_target = f.N if target_dim is None else int(target_dim)
    if base_target < f.N:
        raise DimensionMismatchError("target dimension cannot drop below the map's")
    dim = base_target + 1
    components: list = list(f.p) + [Polynomial.zero(n)] * (dim - f.N)
    segments = []

    while True:
        slot_terms = _single_monomials(components)
        top = max((sum(mono) for _, mono, _ in slot_terms), default=0)
        if top < 2:
            break
        target_mono = min(mono for _, mono, _ in slot_terms if sum(mono) == top)
        last_var = max(j for j, e in enumerate(target_mono) if e > 0)
        q_mono = (target_mono[:last_var] + (target_mono[last_var] - 1,)
                  + target_mono[last_var + 1:])

        # The common coefficient can come from any slot holding the chosen
        # monomial; try each before giving up.
        match_error = None
        chosen = None
        for _, mono, coeff in slot_terms:
            if mono != target_mono:
                continue
            try:
                chosen = (coeff, _match_siblings(slot_terms, q_mono, coeff, n, tol))
                break
            except NotTensorImageError as exc:
                match_error = exc
        if chosen is None:
            raise match_error
        coefficient, sibling_slots = chosen

        free = next((i for i, comp in enumerate(components) if comp.is_zero), None)
        if free is None:
            raise NotTensorImageError("no free component slot for the new factor")
        q_poly = Polynomial(n, {q_mono: coefficient})
        snapshot = list(components)
        scaled = set(sibling_slots)

        def evaluator(t: float, snapshot=snapshot, scaled=scaled, free=free,
                      q_poly=q_poly) -> RationalBallMap:
            lam = 1.0 - t
            ramp = math.sqrt(max(0.0, 1.0 - lam * lam))
            comps = []
            for i, comp in enumerate(snapshot):
                if i in scaled:
                    comps.append(comp * lam)
                elif i == free:
                    comps.append(q_poly * ramp)
                else:
                    comps.append(comp)
            return RationalBallMap(n, dim, comps)

        segments.append(_segment(n, evaluator))
        components = [Polynomial.zero(n) if i in scaled else comp
                      for i, comp in enumerate(components)]
        components[free] = q_poly

    if any(comp.degree == 0 for comp in components if not comp.is_zero):
        raise NotTensorImageError("a constant component obstructs reduction "
                                  "to the identity")

    final_map = RationalBallMap(n, dim, components)
    identity_pad = RationalBallMap.identity(n).padded(dim)
    if not final_map.allclose(identity_pad, tol):
        witness = norm_equivalent(final_map, identity_pad, tol=1e-6)
        if not witness.equivalent:
            raise NotTensorImageError("reduced linear map is not a unitary image "
                                      "of the identity")
        segments.append(unitary_bridge_family(final_map, witness.unitary))

    if not segments:
        segments.append(constant_family(final_map))
    return concat_families(
        segments, endpoint_left=f, endpoint_right=RationalBallMap.identity(n),
        kinds=(RATIONAL, FIXED_TARGET))
