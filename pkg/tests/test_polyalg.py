import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propermaps.polyalg import (DEFAULT_TOL, HermitianForm, Polynomial,
                                monomials_of_degree, poly_arith, properness_form,
                                reduce_mod_sphere, squared_norm_form)

from conftest import sample_sphere


def z(j, nvars=2):
    return Polynomial.variable(nvars, j)


# ---------------------------------------------------------------- monomials
def test_monomial_order_is_descending_with_first_variable_highest():
    monos = monomials_of_degree(2, 5)
    assert monos[0] == (5, 0)
    assert monos[-1] == (0, 5)
    assert monos == sorted(monos, reverse=True)
    assert len(monos) == 6


def test_monomial_count_matches_binomial():
    for n in (1, 2, 3, 4):
        for d in range(6):
            assert len(monomials_of_degree(n, d)) == math.comb(d + n - 1, n - 1)


# --------------------------------------------------------------- arithmetic
def test_product_of_variables():
    p = z(0) * z(1)
    assert p.terms == {(1, 1): 1.0 + 0.0j}


def test_difference_of_squares():
    p = (z(0) + z(1)) * (z(0) - z(1))
    assert p.allclose(Polynomial(2, {(2, 0): 1.0, (0, 2): -1.0}))


def test_two_term_denominator_square_expanded_by_hand():
    # q = 1 - 0.5 z1 has degree 1; its square is 1 - z1 + 0.25 z1^2 (degree 2).
    q = Polynomial(2, {(0, 0): 1.0, (1, 0): -0.5})
    square = q * q
    assert square.allclose(Polynomial(2, {(0, 0): 1.0, (1, 0): -1.0, (2, 0): 0.25}))
    assert square.degree == 2


def test_poly_arith_dispatch_and_dimension_mismatch():
    a, b = z(0), z(1)
    assert poly_arith(a, b, "add").allclose(a + b)
    assert poly_arith(a, b, "sub").allclose(a - b)
    assert poly_arith(a, b, "mul").allclose(a * b)
    with pytest.raises(ValueError):
        poly_arith(a, Polynomial.variable(3, 0), "add")
    with pytest.raises(ValueError):
        poly_arith(a, b, "div")


def test_zero_polynomial_degree_sentinel_and_canonical_form():
    zero = Polynomial.zero(2)
    assert zero.degree == float("-inf")
    tiny = Polynomial(2, {(1, 0): 1e-12})
    assert tiny.is_zero
    assert Polynomial(2, {(1, 0): 1e-12}, tol=0.0).terms


def test_power_and_derivative():
    p = z(0, 1) ** 3 + 2 * z(0, 1)
    assert p.derivative(0).allclose(Polynomial(1, {(2,): 3.0, (0,): 2.0}))
    assert (z(0) ** 0).allclose(Polynomial.one(2))


def test_evaluate_many_matches_pointwise(rng):
    p = (z(0) + 2.5 * z(1)) * (z(0) - 1j * z(1)) + 0.25
    pts = rng.standard_normal((40, 2)) + 1j * rng.standard_normal((40, 2))
    vec = p.evaluate_many(pts)
    for k in range(40):
        assert abs(vec[k] - p(pts[k])) < 1e-12


coeffs = st.complex_numbers(min_magnitude=0.0, max_magnitude=3.0,
                            allow_nan=False, allow_infinity=False)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exponents, coeffs, max_size=6).map(
    lambda terms: Polynomial(2, terms))


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_add_then_subtract_roundtrip(a, b):
    back = (a + b) - b
    assert back.allclose(a, tol=1e-7)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_product_is_evaluation_homomorphism(a, b):
    point = [0.4 + 0.2j, -0.3 + 0.1j]
    lhs = (a * b)(point)
    rhs = a(point) * b(point)
    assert abs(lhs - rhs) < 1e-6 * (1 + abs(rhs))


# ----------------------------------------------------------- Hermitian forms
def test_squared_norm_form_identity_map_is_diagonal_ones():
    form = squared_norm_form([z(0), z(1)])
    assert form.entries == {((1, 0), (1, 0)): 1.0 + 0j, ((0, 1), (0, 1)): 1.0 + 0j}


def test_squared_norm_form_quadratic_diagonal_1_2_1():
    # || (z^2, sqrt2 zw, w^2) ||^2 = |z|^4 + 2|z|^2|w|^2 + |w|^4 by expansion.
    comps = [z(0) * z(0), math.sqrt(2) * z(0) * z(1), z(1) * z(1)]
    form = squared_norm_form(comps)
    diag = {alpha: form.entries[(alpha, alpha)] for alpha, _ in form.entries}
    assert abs(diag[(2, 0)] - 1) < 1e-12
    assert abs(diag[(1, 1)] - 2) < 1e-12
    assert abs(diag[(0, 2)] - 1) < 1e-12
    assert len(form.entries) == 3


def test_squared_norm_form_degree_two_triple():
    form = squared_norm_form([z(0), z(0) * z(1), z(1) * z(1)])
    expected = {((1, 0), (1, 0)): 1, ((1, 1), (1, 1)): 1, ((0, 2), (0, 2)): 1}
    assert form.allclose(HermitianForm(2, expected))


def test_squared_norm_form_positive_semidefinite(rng):
    for _ in range(10):
        comps = [Polynomial(2, {(int(rng.integers(0, 3)), int(rng.integers(0, 3))):
                                complex(rng.standard_normal(), rng.standard_normal())
                                for _ in range(4)})
                 for _ in range(3)]
        _, mat = squared_norm_form(comps).as_matrix()
        eigs = np.linalg.eigvalsh(mat)
        assert eigs.min() >= -1e-6


def test_hermitian_symmetry_enforced():
    with pytest.raises(ValueError):
        HermitianForm(2, {((1, 0), (0, 1)): 1.0})  # mirror entry missing
    with pytest.raises(ValueError):
        HermitianForm(2, {((1, 0), (1, 0)): 1.0j})  # non-real diagonal


def test_properness_form_identity_is_sphere_defect():
    form = properness_form([z(0), z(1)], Polynomial.one(2))
    expected = HermitianForm(2, {((1, 0), (1, 0)): 1.0, ((0, 1), (0, 1)): 1.0,
                                 ((0, 0), (0, 0)): -1.0})
    assert form.allclose(expected)


def test_properness_form_constant_map_is_zero():
    form = properness_form([Polynomial.one(2)], Polynomial.one(2))
    assert form.is_zero


def test_properness_form_quintic_vanishes_on_sphere():
    # (z, zw, zw^2, zw^3, w^4): ||p||^2 - 1 restricted to the sphere is 0.
    w = z(1)
    comps = [z(0), z(0) * w, z(0) * w ** 2, z(0) * w ** 3, w ** 4]
    form = properness_form(comps, Polynomial.one(2))
    assert reduce_mod_sphere(form).is_zero


# ---------------------------------------------------------------- reduction
def test_reduce_sphere_defect_to_zero():
    form = properness_form([z(0), z(1)], Polynomial.one(2))
    assert reduce_mod_sphere(form).is_zero


def test_reduce_cubic_invariant_map():
    comps = [z(0) ** 3, math.sqrt(3.0) * z(0) * z(1), z(1) ** 3]
    form = properness_form(comps, Polynomial.one(2))
    assert reduce_mod_sphere(form).is_zero


def test_reduce_detects_shrunken_map():
    form = properness_form([0.5 * z(0), 0.5 * z(1)], Polynomial.one(2))
    remainder = reduce_mod_sphere(form)
    assert not remainder.is_zero
    assert remainder.max_abs_entry() > DEFAULT_TOL


def _sampled_max(form, seed=3):
    pts = sample_sphere(form.nvars, 200, seed=seed)
    return float(np.max(np.abs(form.evaluate_many(pts))))


def test_reduction_agrees_with_sphere_sampling_oracle():
    w = z(1)
    vanishing = [
        properness_form([z(0), z(1)], Polynomial.one(2)),
        properness_form([z(0) ** 2, math.sqrt(2.0) * z(0) * w, w ** 2],
                        Polynomial.one(2)),
        properness_form([z(0), z(0) * w, w ** 2], Polynomial.one(2)),
    ]
    for form in vanishing:
        assert reduce_mod_sphere(form).is_zero
        assert _sampled_max(form) <= 1e3 * DEFAULT_TOL
    defective = [
        properness_form([0.5 * z(0), 0.5 * w], Polynomial.one(2)),
        properness_form([z(0), 0.9 * w], Polynomial.one(2)),
        properness_form([Polynomial.constant(2, 0.5)], Polynomial.one(2)),
    ]
    for form in defective:
        assert not reduce_mod_sphere(form).is_zero
        assert _sampled_max(form) > DEFAULT_TOL


def test_reduce_handles_off_diagonal_shifts():
    # |z1 + z2|^2 - 1 vanishes nowhere on the whole sphere: remainder nonzero,
    # but (z1+z2)/sqrt(2) scaled norms agree only pointwise, not identically.
    p = z(0) + z(1)
    form = properness_form([p], Polynomial.one(2))
    remainder = reduce_mod_sphere(form)
    assert not remainder.is_zero
    # The cross terms z1 conj(z2) survive reduction with coefficient 1.
    assert abs(remainder.entries.get(((1, 0), (0, 1)), 0) - 1.0) < 1e-12


def test_one_variable_reduction_evaluates_at_one():
    # |z|^2 - 1 on the circle: the radial polynomial x - 1 vanishes at x = 1.
    form = properness_form([z(0, 1)], Polynomial.one(1))
    assert reduce_mod_sphere(form).is_zero


def test_multiples_of_the_sphere_defect_always_reduce_to_zero(rng):
    # (||z||^2 - 1) * F vanishes on the sphere for every Hermitian F.
    defect = HermitianForm(2, {((1, 0), (1, 0)): 1.0, ((0, 1), (0, 1)): 1.0,
                               ((0, 0), (0, 0)): -1.0})
    for _ in range(15):
        comps = [Polynomial(2, {(int(rng.integers(0, 3)), int(rng.integers(0, 3))):
                                complex(rng.standard_normal(), rng.standard_normal())
                                for _ in range(3)})
                 for _ in range(2)]
        factor = squared_norm_form(comps)
        product = factor.product(defect)
        assert reduce_mod_sphere(product).is_zero
        # Reduction is linear, so adding a sphere multiple changes nothing.
        assert reduce_mod_sphere(factor + product).allclose(
            reduce_mod_sphere(factor), 1e-9)


def test_form_product_matches_pointwise_values(rng):
    a = squared_norm_form([z(0), z(1)])
    b = squared_norm_form([Polynomial(2, {(0, 0): 1.0, (1, 0): -0.4})])
    prod = a.product(b)
    pts = rng.standard_normal((25, 2)) + 1j * rng.standard_normal((25, 2))
    va, vb, vp = a.evaluate_many(pts), b.evaluate_many(pts), prod.evaluate_many(pts)
    assert np.max(np.abs(vp - va * vb)) < 1e-10
