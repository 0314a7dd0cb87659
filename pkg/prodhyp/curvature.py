"""
Module implements the intrinsic curvature of a hypersurface of Q^n(eps) x R:
the curvature tensor from the Gauss equation, the Ricci tensor (closed form and
by contraction), sectional curvatures and the Einstein defect

All tensors live in the orthonormal principal frame, indices are 1-based as in e_1..e_n
"""

from __future__ import annotations

import enum
import itertools
from typing import Any

import numpy as np
import pydantic

from .ambient import SpaceForm
from .errors import DegeneratePlaneError, FrameIndexError, InputShapeError
from .hypersurface import FrameData


class RicciRoute(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    CONTRACTION = "contraction"


class CurvatureReport(pydantic.BaseModel):
    """
    Curvature summary at one point
    """
    model_config = pydantic.ConfigDict(frozen=True)

    n: int
    ric_diag: list[float]
    ric_offdiag_max: float
    # (i, j, K_ij) for 1 <= i < j <= n
    sectional: list[tuple[int, int, float]]
    rho: float
    einstein_defect: float
    k_spread: float

    @pydantic.model_validator(mode="after")
    def _check_shape(self) -> CurvatureReport:
        if len(self.ric_diag) != self.n:
            raise ValueError(f"expected {self.n} Ricci entries, got {len(self.ric_diag)}")

        if len(self.sectional) != self.n * (self.n - 1) // 2:
            raise ValueError("sectional table must cover every pair i < j")

        if self.einstein_defect < 0 or self.k_spread < 0:
            raise ValueError("defects can't be negative")

        return self

    def sectional_values(self) -> np.ndarray:
        return np.asarray([k for _, _, k in self.sectional])

    def mean_sectional(self) -> float:
        return float(np.mean(self.sectional_values()))


def _check_frame(fd: FrameData, sf: SpaceForm):
    if fd.n != sf.n:
        raise InputShapeError(f"Frame data has dimension {fd.n}, the space form {sf.n}")

def _check_indices(n: int, *indices: int):
    for idx in indices:
        if not 1 <= idx <= n:
            raise FrameIndexError(f"Frame index {idx} outside of 1..{n}")

def gauss_component(fd: FrameData, sf: SpaceForm, i: int, j: int, k: int, l: int) -> float:
    """
    <R(e_i, e_j)e_k, e_l> from the Gauss equation, using
    R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    """
    _check_frame(fd, sf)
    _check_indices(fd.n, i, j, k, l)

    t = fd.t_components
    lam = fd.principal_curvatures()
    ti, tj, tk, tl = t[i - 1], t[j - 1], t[k - 1], t[l - 1]
    d_il = float(i == l)
    d_jk = float(j == k)
    d_ik = float(i == k)
    d_jl = float(j == l)

    ambient = (
        d_il * d_jk - d_ik * d_jl
        + ti * tk * d_jl + tj * tl * d_ik
        - tj * tk * d_il - ti * tl * d_jk
    )
    # <SX,W><SY,Z> - <SX,Z><SY,W> with a diagonal shape operator
    extrinsic = lam[i - 1] * lam[j - 1] * (d_il * d_jk - d_ik * d_jl)
    return float(sf.epsilon * ambient + extrinsic)

def curvature_tensor(fd: FrameData, sf: SpaceForm) -> np.ndarray:
    """
    Full array R[i,j,k,l] = <R(e_i, e_j)e_k, e_l>, 0-based
    """
    _check_frame(fd, sf)
    n = fd.n
    delta = np.eye(n)
    t = fd.t_vector()
    tt = np.outer(t, t)
    lam = fd.principal_curvatures()
    shape = np.diag(lam)

    def wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # a_il b_jk - a_ik b_jl
        return np.einsum("il,jk->ijkl", a, b) - np.einsum("ik,jl->ijkl", a, b)

    ambient = (
        wedge(delta, delta)
        + np.einsum("ik,jl->ijkl", tt, delta) + np.einsum("jl,ik->ijkl", tt, delta)
        - np.einsum("jk,il->ijkl", tt, delta) - np.einsum("il,jk->ijkl", tt, delta)
    )
    return sf.epsilon * ambient + wedge(shape, shape)

def ricci_closed_form(fd: FrameData, sf: SpaceForm, i: int, j: int) -> float:
    """
    Ric(e_i, e_j) = [eps(n-1-|T|^2) + nH lam_i - lam_i lam_j] delta_ij + eps(2-n) t_i t_j
    """
    _check_frame(fd, sf)
    _check_indices(fd.n, i, j)

    n = fd.n
    eps = sf.epsilon
    lam = fd.principal_curvatures()
    t = fd.t_components
    rv = eps * (2 - n) * t[i - 1] * t[j - 1]
    if i == j:
        lam_i = lam[i - 1]
        rv += eps * (n - 1 - fd.t_norm ** 2) + n * fd.H * lam_i - lam_i * lam_i
    return float(rv)

def ricci_by_contraction(fd: FrameData, sf: SpaceForm, i: int, j: int) -> float:
    """
    Ric(e_i, e_j) = sum_k <R(e_k, e_i)e_j, e_k>
    """
    _check_indices(fd.n, i, j)
    return sum(gauss_component(fd, sf, k, i, j, k) for k in range(1, fd.n + 1))

def ricci_matrix(fd: FrameData, sf: SpaceForm, route: RicciRoute = RicciRoute.CLOSED_FORM) -> np.ndarray:
    """
    Full Ricci matrix in the principal frame
    """
    if route is RicciRoute.CONTRACTION:
        return np.einsum("kijk->ij", curvature_tensor(fd, sf))

    n = fd.n
    return np.array([
        [ricci_closed_form(fd, sf, i, j) for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ])

def sectional(fd: FrameData, sf: SpaceForm, i: int, j: int) -> float:
    """
    Sectional curvature of the plane spanned by e_i and e_j
    """
    if i == j:
        raise DegeneratePlaneError(f"e_{i} and e_{j} don't span a plane")

    return gauss_component(fd, sf, i, j, j, i)

def tensor_symmetry_residuals(fd: FrameData, sf: SpaceForm) -> dict[str, float]:
    """
    Max violation of each algebraic symmetry of the curvature tensor
    """
    r = curvature_tensor(fd, sf)
    bianchi = r + np.einsum("ijkl->jkil", r) + np.einsum("ijkl->kijl", r)
    return {
        "antisymmetry_ij": float(np.max(np.abs(r + r.transpose(1, 0, 2, 3)))),
        "antisymmetry_kl": float(np.max(np.abs(r + r.transpose(0, 1, 3, 2)))),
        "pair_symmetry": float(np.max(np.abs(r - r.transpose(2, 3, 0, 1)))),
        "first_bianchi": float(np.max(np.abs(bianchi))),
    }

def curvature_report(fd: FrameData, sf: SpaceForm) -> CurvatureReport:
    """
    Aggregates the Ricci tensor and sectional curvatures at one point
    """
    n = fd.n
    ric = ricci_matrix(fd, sf)
    rho = float(np.trace(ric)) / n
    off_diag = ric - np.diag(np.diag(ric))
    table = [
        (i, j, sectional(fd, sf, i, j))
        for i, j in itertools.combinations(range(1, n + 1), 2)
    ]
    values = [k for _, _, k in table]

    return CurvatureReport(
        n=n,
        ric_diag=[float(v) for v in np.diag(ric)],
        ric_offdiag_max=float(np.max(np.abs(off_diag))),
        sectional=table,
        rho=rho,
        einstein_defect=float(np.max(np.abs(ric - rho * np.eye(n)))),
        k_spread=float(max(values) - min(values))
    )


def csv_header(n: int) -> list[str]:
    """
    Column names of a report row
    """
    return [
        "s",
        *(f"lambda_{i}" for i in range(1, n + 1)),
        "t_norm",
        "nu",
        "H",
        "rho",
        "einstein_defect",
        "k_spread"
    ]

def report_record(fd: FrameData, report: CurvatureReport) -> dict[str, Any]:
    """
    One output record per sample point, keys follow csv_header
    """
    values = [
        fd.s,
        *fd.principal_curvatures().tolist(),
        fd.t_norm,
        fd.nu,
        fd.H,
        report.rho,
        report.einstein_defect,
        report.k_spread
    ]
    return dict(zip(csv_header(fd.n), (float(v) for v in values)))
