import math

import numpy as np
import pytest

from propermaps._linalg import UnitaryPath, is_unitary, random_unitary
from propermaps.ballmaps import (RationalBallMap, Verdict, certify_proper,
                                 compose, degree, norm_equivalent,
                                 squared_norm_form)
from propermaps.constructors import (BallAutomorphism, BlaschkeProduct,
                                     NonIntegralWindingError, TensorSubspaceError,
                                     automorphism_from_map, automorphism_map,
                                     blaschke_map, boundary_constant_map,
                                     juxtapose, random_ball_automorphism,
                                     random_blaschke_product, tensor_on_subspace,
                                     whitney_extend, whitney_start,
                                     winding_degree, winding_integral)
from propermaps.corpus import quadric_three_map, whitney_map
from propermaps.polyalg import Polynomial


# ------------------------------------------------------------- automorphisms
def test_trivial_automorphism_is_identity_map():
    m = automorphism_map(BallAutomorphism.identity(3))
    assert m.allclose(RationalBallMap.identity(3))


def test_automorphism_vanishes_at_its_center():
    phi = BallAutomorphism([0.35 + 0.1j, -0.25, 0.1j])
    m = automorphism_map(phi)
    assert np.max(np.abs(m.evaluate(phi.a))) < 1e-12


def test_automorphism_is_proper_degree_one(rng):
    phi = random_ball_automorphism(3, rng)
    m = automorphism_map(phi)
    assert certify_proper(m).verdict is Verdict.PROPER
    assert degree(m) == 1


def test_center_outside_ball_rejected():
    with pytest.raises(ValueError):
        BallAutomorphism([1.0, 0.0])
    with pytest.raises(ValueError):
        BallAutomorphism([0.8, 0.7])


def test_inverse_composes_to_identity(rng):
    for n in (1, 2, 3):
        phi = random_ball_automorphism(n, rng)
        forward = automorphism_map(phi)
        backward = automorphism_map(phi.inverse())
        for left, right in ((forward, backward), (backward, forward)):
            composed = compose(left, right)
            assert composed.allclose(RationalBallMap.identity(n), 1e-6)


def test_boundary_compactification_is_a_constant():
    a = np.array([0.6, 0.8])
    m = boundary_constant_map(a)
    assert m.is_constant_map()
    assert np.max(np.abs(m.evaluate(np.zeros(2)) - a)) < 1e-12
    assert certify_proper(m).verdict is Verdict.CONSTANT_ON_SPHERE
    with pytest.raises(ValueError):
        boundary_constant_map([0.5, 0.0])


def test_automorphism_recognition_roundtrip(rng):
    phi = random_ball_automorphism(2, rng)
    recovered = automorphism_from_map(automorphism_map(phi))
    assert np.max(np.abs(recovered.a - phi.a)) < 1e-9
    assert np.max(np.abs(recovered.U - phi.U)) < 1e-8
    with pytest.raises(ValueError):
        automorphism_from_map(quadric_three_map())


# ------------------------------------------------------------------- tensor
def test_tensor_identity_on_second_axis_gives_degree_two_triple():
    result = tensor_on_subspace(RationalBallMap.identity(2),
                                np.array([[0.0], [1.0]], dtype=complex))
    expected = quadric_three_map()  # (z, zw, w^2) up to component order
    assert result.N == 3
    assert norm_equivalent(result, expected).equivalent
    assert sorted(map(str, result.p)) == sorted(map(str, expected.p))


def test_tensor_identity_b3_gives_classical_degree_two_map():
    result = tensor_on_subspace(RationalBallMap.identity(3),
                                np.array([[0.0], [0.0], [1.0]], dtype=complex))
    assert result.N == 5
    assert norm_equivalent(result, whitney_map()).equivalent


def test_tensor_one_dimensional_iterates_to_monomial():
    m = RationalBallMap.identity(1)
    full = np.array([[1.0]], dtype=complex)
    for _ in range(4):
        m = tensor_on_subspace(m, full)
    assert m.N == 1
    assert m.p[0].allclose(Polynomial.monomial((5,)))


def test_tensor_preserves_properness_on_random_subspaces(rng):
    base = quadric_three_map()
    q, _ = np.linalg.qr(rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)))
    result = tensor_on_subspace(base, q, random_ball_automorphism(2, rng))
    assert result.N == base.N + 2 * (base.n - 1)
    assert certify_proper(result).verdict is Verdict.PROPER


def test_tensor_norm_difference_vanishes_on_sphere(rng):
    # With the identity domain factor, ||E_A(f)||^2 - ||f||^2 is a multiple of
    # ||z||^2 - 1, so the difference form reduces to zero.
    from propermaps.polyalg import reduce_mod_sphere
    base = quadric_three_map()
    q, _ = np.linalg.qr(rng.standard_normal((3, 1)) + 1j * rng.standard_normal((3, 1)))
    tensored = tensor_on_subspace(base, q)
    difference = squared_norm_form(tensored.p) - squared_norm_form(base.p)
    assert not difference.is_zero
    assert reduce_mod_sphere(difference).is_zero


def test_tensor_rejects_bad_subspaces():
    ident = RationalBallMap.identity(2)
    with pytest.raises(TensorSubspaceError):
        tensor_on_subspace(ident, np.zeros((2, 0)))
    with pytest.raises(TensorSubspaceError):
        tensor_on_subspace(ident, np.array([[1.0], [1.0]]))  # not normalized


# -------------------------------------------------------------- juxtaposition
def test_juxtaposition_endpoints():
    f = quadric_three_map()
    g = RationalBallMap.identity(2)
    at0 = juxtapose(f, g, 0.0)
    at1 = juxtapose(f, g, 1.0)
    assert at0.allclose(f.padded(5))
    assert norm_equivalent(at1, g).equivalent
    assert at1.p[0].is_zero and at1.p[1].is_zero and at1.p[2].is_zero


def test_juxtaposition_of_identities_keeps_the_norm_form():
    ident = RationalBallMap.identity(2)
    half = juxtapose(ident, ident, 0.5)
    form = squared_norm_form(half.p)
    expected = squared_norm_form(ident.p)
    assert form.allclose(expected, 1e-12)


def test_juxtaposition_is_proper_in_the_sum_target():
    f = quadric_three_map()
    g = RationalBallMap.identity(2)
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        m = juxtapose(f, g, t)
        assert m.N == 5
        assert certify_proper(m).verdict is Verdict.PROPER


# ------------------------------------------------------------- Whitney terms
def test_whitney_start_and_first_extension():
    term = whitney_start(BallAutomorphism.identity(2))
    assert term.length == 0 and degree(term.map) == 1
    extended = whitney_extend(term, np.array([1]))
    assert extended.length == 1
    assert degree(extended.map) == 2
    assert norm_equivalent(extended.map, quadric_three_map()).equivalent


def test_whitney_degree_does_not_increment_on_low_degree_subspace():
    term = whitney_start(BallAutomorphism.identity(2))
    term = whitney_extend(term, np.array([1]))       # degree 2: (zw, w^2, z)
    low = int(np.argmin([c.degree for c in term.map.p]))
    term = whitney_extend(term, np.array([low]))     # tensor the linear slot
    assert degree(term.map) == 2  # stays below the bound length+1 = 3


def test_whitney_degree_bound_randomized(rng):
    for n in (2, 3):
        for _ in range(4):
            term = whitney_start(random_ball_automorphism(n, rng))
            for _ in range(int(rng.integers(1, 4))):
                d = int(rng.integers(1, term.map.N + 1))
                idx = rng.choice(term.map.N, size=d, replace=False)
                term = whitney_extend(term, np.sort(idx),
                                      random_ball_automorphism(n, rng))
            assert degree(term.map) <= term.length + 1
            assert certify_proper(term.map).verdict is Verdict.PROPER


def test_whitney_extension_with_isometric_injection(rng):
    term = whitney_start(BallAutomorphism.identity(2))
    iso = np.zeros((4, 3), dtype=complex)
    iso[0, 0] = iso[1, 1] = 1.0
    iso[2, 2] = iso[3, 2] = 1.0 / math.sqrt(2.0)
    term = whitney_extend(term, np.array([0]), injection=iso)
    assert term.map.N == 4
    assert certify_proper(term.map).verdict is Verdict.PROPER


# ----------------------------------------------------------------- Blaschke
def test_blaschke_winding_basic_cases():
    single = BlaschkeProduct(0.0, [0.0])
    assert winding_degree(blaschke_map(single)) == 1
    triple = BlaschkeProduct(0.0, [0.3, -0.5j, 0.1 + 0.2j])
    assert winding_degree(blaschke_map(triple)) == 3
    quintic = BlaschkeProduct(0.0, [0.0] * 5)
    assert winding_degree(blaschke_map(quintic)) == 5


def test_blaschke_zero_outside_disk_rejected():
    with pytest.raises(ValueError):
        BlaschkeProduct(0.0, [1.2])


def test_blaschke_map_is_proper(rng):
    for _ in range(20):
        b = random_blaschke_product(rng)
        m = blaschke_map(b)
        assert certify_proper(m).verdict is Verdict.PROPER
        value = winding_integral(m)
        assert winding_degree(m) == b.factor_count
        assert abs(value - b.factor_count) <= 1e-6


def test_winding_rejects_under_resolved_quadrature():
    m = blaschke_map(BlaschkeProduct(0.0, [0.97, -0.96, 0.95j]))
    with pytest.raises(NonIntegralWindingError):
        winding_degree(m, nodes=4)


# ------------------------------------------------------------ linear algebra
def test_unitary_path_endpoints(rng):
    u = random_unitary(4, rng)
    path = UnitaryPath(u)
    assert np.max(np.abs(path(0.0) - np.eye(4))) < 1e-12
    assert np.max(np.abs(path(1.0) - u)) < 1e-10
    for s in (0.3, 0.8):
        assert is_unitary(path(s), tol=1e-10)
