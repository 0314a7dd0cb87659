import itertools

import numpy as np
import numpy.testing as npt
import pytest

from prodhyp.ambient import SpaceForm
from prodhyp.curvature import (
    RicciRoute,
    csv_header,
    curvature_report,
    curvature_tensor,
    gauss_component,
    report_record,
    ricci_by_contraction,
    ricci_closed_form,
    ricci_matrix,
    sectional,
    tensor_symmetry_residuals
)
from prodhyp.errors import DegeneratePlaneError, FrameIndexError, InputShapeError
from prodhyp.hypersurface import FrameData, Profile, frame_data, slice_frame


def _random_frame(rng: np.random.Generator, n: int) -> FrameData:
    direction = rng.normal(size=n)
    direction *= rng.uniform(0.0, 0.9) / np.linalg.norm(direction)
    return FrameData.synthetic(
        rng.uniform(-2.0, 2.0, size=n - 1).tolist(),
        float(rng.uniform(-2.0, 2.0)),
        direction.tolist()
    )


def test_csv_header():
    assert csv_header(3) == [
        "s", "lambda_1", "lambda_2", "lambda_3",
        "t_norm", "nu", "H", "rho", "einstein_defect", "k_spread"
    ]

@pytest.mark.parametrize("eps", (1, -1))
@pytest.mark.parametrize("n", (2, 4, 7))
def test_ricci_routes_agree(rng, eps, n):
    sf = SpaceForm.create(eps, n)
    for _ in range(20):
        fd = _random_frame(rng, n)
        closed = ricci_matrix(fd, sf, RicciRoute.CLOSED_FORM)
        npt.assert_allclose(closed, ricci_matrix(fd, sf, RicciRoute.CONTRACTION), atol=1e-10)
        npt.assert_allclose(closed, closed.T, atol=1e-12)

def test_ricci_componentwise(rng):
    sf = SpaceForm.create(-1, 4)
    fd = _random_frame(rng, 4)
    for i, j in itertools.product(range(1, 5), repeat=2):
        assert ricci_closed_form(fd, sf, i, j) == pytest.approx(ricci_by_contraction(fd, sf, i, j), abs=1e-10)

def test_tensor_matches_components(rng):
    sf = SpaceForm.create(1, 3)
    fd = _random_frame(rng, 3)
    tensor = curvature_tensor(fd, sf)
    for i, j, k, l in itertools.product(range(1, 4), repeat=4):
        assert tensor[i - 1, j - 1, k - 1, l - 1] == pytest.approx(
            gauss_component(fd, sf, i, j, k, l), abs=1e-12
        )

def test_tensor_symmetries(rng):
    for eps, n in itertools.product((1, -1), (3, 5)):
        residuals = tensor_symmetry_residuals(_random_frame(rng, n), SpaceForm.create(eps, n))
        assert set(residuals) == {"antisymmetry_ij", "antisymmetry_kl", "pair_symmetry", "first_bianchi"}
        assert max(residuals.values()) < 1e-12

def test_off_diagonal_ricci_from_t():
    sf = SpaceForm.create(1, 4)
    fd = FrameData.synthetic([0.5, 1.0, 1.5], 0.2, [0.3, 0.4, 0.0, 0.0])
    # eps(2-n) t_1 t_2
    assert ricci_closed_form(fd, sf, 1, 2) == pytest.approx(-0.24)
    assert ricci_closed_form(fd, sf, 3, 4) == 0.0

@pytest.mark.parametrize("eps", (1, -1))
def test_slice_report(eps):
    sf = SpaceForm.create(eps, 5)
    report = curvature_report(slice_frame(sf), sf)
    npt.assert_allclose(report.ric_diag, [eps * 4.0] * 5)
    assert report.rho == eps * 4.0
    assert report.einstein_defect == 0.0
    assert report.k_spread == 0.0
    assert report.ric_offdiag_max == 0.0
    npt.assert_allclose(report.sectional_values(), eps)
    assert len(report.sectional) == 10

def test_sectional_errors(sphere4):
    fd = slice_frame(sphere4)
    with pytest.raises(DegeneratePlaneError):
        sectional(fd, sphere4, 2, 2)

    with pytest.raises(FrameIndexError):
        sectional(fd, sphere4, 0, 1)

    with pytest.raises(FrameIndexError):
        ricci_closed_form(fd, sphere4, 1, 5)

def test_dimension_mismatch(sphere4):
    with pytest.raises(InputShapeError):
        curvature_report(slice_frame(SpaceForm.create(1, 3)), sphere4)

def test_principal_frame_sectional(sphere_base, sphere4):
    fd = frame_data(sphere_base, Profile.linear(1.0), 0.0)
    # eps + lam_i lam_j between base directions, eps(1 - |T|^2) + lam_i lam_n with e_n
    assert sectional(fd, sphere4, 1, 2) == pytest.approx(1.5)
    assert sectional(fd, sphere4, 1, 4) == pytest.approx(0.5)

def test_report_record(sphere_base, sphere4):
    fd = frame_data(sphere_base, Profile.linear(1.0), 0.1)
    report = curvature_report(fd, sphere4)
    record = report_record(fd, report)
    assert list(record) == csv_header(4)
    assert record["s"] == 0.1
    assert record["rho"] == report.rho
    assert record["einstein_defect"] == pytest.approx(np.max(np.abs(
        ricci_matrix(fd, sphere4) - report.rho * np.eye(4)
    )))
