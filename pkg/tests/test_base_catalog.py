import math

import numpy as np
import pytest

from prodhyp.ambient import SpaceForm
from prodhyp.base_catalog import (
    BaseKind,
    cartan_product_invariant,
    cartan_residuals,
    is_isoparametric,
    make_base,
    mean_curvature_of_parallel,
    parallel_base,
    parallel_curvature,
    parallel_curvature_derivative
)
from prodhyp.errors import DomainError, FocalPointError


def test_clifford_product_quarter_pi(sphere4):
    base = make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=math.pi / 4, p=1, q=2)
    (lam1, m1), (lam2, m2) = base.curvatures
    assert (m1, m2) == (1, 2)
    assert lam1 == pytest.approx(-1.0)
    assert lam2 == pytest.approx(1.0)
    assert lam1 * lam2 == pytest.approx(-1.0)

def test_totally_geodesic(sphere4):
    base = make_base(sphere4, "totally_geodesic")
    assert base.curvatures == ((0.0, 3),)
    assert base.d == 1

def test_horosphere_needs_hyperbolic_space(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.HOROSPHERE)

def test_clifford_needs_sphere(hyperbolic4):
    with pytest.raises(DomainError):
        make_base(hyperbolic4, BaseKind.CLIFFORD_PRODUCT, r=0.5, p=1, q=2)

@pytest.mark.parametrize("r", (0.0, math.pi / 2, 2.0))
def test_clifford_angle_range(sphere4, r):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=r, p=1, q=2)

def test_clifford_multiplicities_must_sum(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=0.5, p=2, q=2)

def test_missing_radius(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.GEODESIC_SPHERE)

def test_unknown_kind(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, "torus")

def test_hyperbolic_catalog(hyperbolic4):
    assert make_base(hyperbolic4, BaseKind.HOROSPHERE).curvatures == ((1.0, 3),)
    equidistant = make_base(hyperbolic4, BaseKind.EQUIDISTANT, r=1.0)
    assert equidistant.curvatures[0][0] == pytest.approx(math.tanh(1.0))
    sphere = make_base(hyperbolic4, BaseKind.GEODESIC_SPHERE, r=1.0)
    assert sphere.curvatures[0][0] == pytest.approx(1.0 / math.tanh(1.0))

def test_hyperbolic_cylinder_product(hyperbolic4):
    base = make_base(hyperbolic4, BaseKind.HYPERBOLIC_CYLINDER, r=0.7, p=2, q=1)
    (lam1, _), (lam2, _) = base.curvatures
    assert lam1 * lam2 == pytest.approx(1.0)
    assert is_isoparametric(base)

def test_orientation_flips_curvatures(sphere4):
    base = make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=0.5, p=1, q=2)
    flipped = make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=0.5, p=1, q=2, orientation=-1)
    for (lam, m), (lam_f, m_f) in zip(base.curvatures, flipped.curvatures):
        assert lam_f == -lam
        assert m_f == m
    assert is_isoparametric(flipped)

def test_geodesic_sphere_parallel():
    sf = SpaceForm.create(1, 3)
    assert parallel_curvature(1.0 / math.tan(math.pi / 3), sf, math.pi / 6) == pytest.approx(
        1.0 / math.tan(math.pi / 6)
    )

def test_horosphere_is_parallel_invariant(hyperbolic4):
    for s in (-1.0, 0.0, 0.5, 3.0):
        assert parallel_curvature(1.0, hyperbolic4, s) == pytest.approx(1.0)

def test_focal_point(sphere4):
    r = 0.8
    with pytest.raises(FocalPointError) as info:
        parallel_curvature(1.0 / math.tan(r), sphere4, r)
    assert info.value.s == r

@pytest.mark.parametrize("eps", (1, -1))
def test_parallel_curvature_riccati(eps):
    sf = SpaceForm.create(eps, 3)
    h = 1e-5
    lam_g = 0.4
    for s in (0.0, 0.2, 0.5):
        numeric = (parallel_curvature(lam_g, sf, s + h) - parallel_curvature(lam_g, sf, s - h)) / (2 * h)
        expected = parallel_curvature_derivative(parallel_curvature(lam_g, sf, s), sf)
        assert numeric == pytest.approx(expected, abs=1e-8)

def test_cartan_synthetic_residual():
    sf = SpaceForm.create(1, 3)
    base = make_base(sf, BaseKind.CUSTOM, curvatures=[(1.0, 1), (2.0, 1)])
    residuals = cartan_residuals(base)
    assert residuals[0] == pytest.approx(-3.0)
    assert residuals[1] == pytest.approx(3.0)
    assert not is_isoparametric(base)

def test_cartan_clifford_vanishes():
    sf = SpaceForm.create(1, 5)
    base = make_base(sf, BaseKind.CLIFFORD_PRODUCT, r=math.pi / 6, p=2, q=2)
    np.testing.assert_allclose(cartan_residuals(base), [0.0, 0.0], atol=1e-12)

def test_cartan_vacuous_for_one_curvature(sphere4):
    assert cartan_residuals(make_base(sphere4, BaseKind.GEODESIC_SPHERE, r=0.5)) == []

def test_custom_requires_curvatures(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.CUSTOM)

def test_custom_rejects_coincident_values(sphere4):
    with pytest.raises(DomainError):
        make_base(sphere4, BaseKind.CUSTOM, curvatures=[(1.0, 1), (1.0, 2)])

def test_cartan_product_invariant_along_family(sphere4):
    base = make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=0.6, p=1, q=2)
    for s in np.linspace(-0.5, 0.5, 11):
        assert cartan_product_invariant(base, s) < 1e-12

def test_parallel_base_keeps_multiplicities(sphere4):
    base = make_base(sphere4, BaseKind.CLIFFORD_PRODUCT, r=0.6, p=1, q=2)
    assert [m for _, m in parallel_base(base, 0.2)] == [1, 2]

def test_mean_curvature_of_totally_geodesic(sphere4):
    base = make_base(sphere4, BaseKind.TOTALLY_GEODESIC)
    assert mean_curvature_of_parallel(base, 0.0) == 0.0
    assert mean_curvature_of_parallel(base, 0.3) == pytest.approx(math.tan(0.3))

def test_mean_curvature_of_horosphere(hyperbolic4):
    base = make_base(hyperbolic4, BaseKind.HOROSPHERE)
    for s in (-2.0, 0.0, 0.7, 3.0):
        assert mean_curvature_of_parallel(base, s) == pytest.approx(1.0)

def test_mean_curvature_of_geodesic_sphere(sphere4):
    base = make_base(sphere4, BaseKind.GEODESIC_SPHERE, r=math.pi / 4)
    assert mean_curvature_of_parallel(base, math.pi / 12) == pytest.approx(math.sqrt(3))
