"""
Module implements the case analysis for Einstein hypersurfaces of Q^n(eps) x R:
T as an eigenvector of the shape operator, the split on distinct principal
curvatures, the two branches of the argument and the constant sectional
curvature rotation examples
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Sequence

import numpy as np
import pydantic

from . import log_utils
from .ambient import DEFAULT_TOL, SpaceForm
from .base_catalog import (
    BaseKind,
    IsoparametricBase,
    make_base,
    mean_curvature_of_parallel,
    parallel_curvature
)
from .curvature import CurvatureReport, curvature_report, ricci_matrix, sectional
from .errors import BranchPreconditionError, DomainError, NoRealSolution
from .hypersurface import (
    FrameData,
    Profile,
    check_kn_ode,
    frame_data,
    slice_frame
)


class ProofCase(str, enum.Enum):
    ALL_EQUAL = "AllEqual"
    TWO_DISTINCT = "TwoDistinct"
    SLICE_BRANCH = "SliceBranch"


class Verdict(str, enum.Enum):
    CONSISTENT_CONSTANT_CURVATURE = "ConsistentConstantCurvature"
    CONTRADICTION = "Contradiction"
    # The frame fails the Einstein equations of its branch
    NOT_EINSTEIN = "NotEinstein"
    # Only reachable by the n=3 oracle of the two-curvature branch
    NO_OBSTRUCTION = "NoObstruction"


class EquationCheck(pydantic.BaseModel):
    name: str
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


class ProofCaseReport(pydantic.BaseModel):
    """
    Outcome of one branch of the case analysis
    """
    case: ProofCase
    n: int
    residuals: dict[str, float]
    verdict: Verdict
    n3_obstruction: int|None = None
    details: list[EquationCheck] = []

    @pydantic.model_validator(mode="after")
    def _check_verdict(self) -> ProofCaseReport:
        if any(v < 0 for v in self.residuals.values()):
            raise ValueError("residuals must be non-negative")

        if self.verdict is Verdict.CONTRADICTION and (
            self.case is not ProofCase.TWO_DISTINCT or self.n <= 3
        ):
            raise ValueError("a contradiction is only reached for two distinct curvatures and n > 3")

        return self

    def max_residual(self, *names: str) -> float:
        keys = names or tuple(self.residuals)
        return max((self.residuals[k] for k in keys if k in self.residuals), default=0.0)


class RegionConstants(pydantic.BaseModel):
    """
    Constants of the regions glued together at the end of the argument
    """
    k_open: float
    k_slice: int
    forced_rho: int
    agreement: float


class ProfileSample(pydantic.BaseModel):
    s: float
    a: float
    a1: float
    a2: float


class CurvatureSummary(pydantic.BaseModel):
    rho_min: float
    rho_max: float
    k_min: float
    k_max: float
    max_einstein_defect: float
    max_k_spread: float
    max_ode_residual: float
    within_tol: bool


class RotationResult(pydantic.BaseModel):
    """
    Constant sectional curvature hypersurface sampled on a grid
    """
    epsilon: int
    n: int
    c: float
    r: float
    samples: list[ProfileSample]
    frames: list[FrameData]
    reports: list[CurvatureReport]
    summary: CurvatureSummary


class TheoremSummary(pydantic.BaseModel):
    """
    Desk-scale check of "Einstein implies constant sectional curvature" on a grid
    """
    einstein: bool
    passed: bool
    message: str
    n_points: int
    worst_s: float
    worst_einstein_defect: float
    worst_k_spread: float
    rho_spread: float
    k_grid_spread: float
    rho: float
    k: float


def _base_values(fd: FrameData) -> np.ndarray:
    return fd.principal_curvatures()[:-1]

def _require_principal_t(fd: FrameData):
    if not fd.is_principal_t():
        raise BranchPreconditionError("T must point along e_n in this branch")

def lemma2_offdiag(fd: FrameData, sf: SpaceForm, rho: float) -> float:
    """
    Max over i != j of the Einstein condition
    [eps(n-1-|T|^2) + nH lam_i - lam_i lam_j - rho] delta_ij + eps(2-n) t_i t_j;
    off the diagonal only the T term survives, rho enters the diagonal alone
    """
    n = fd.n
    t = fd.t_components
    rv = 0.0
    for i, j in itertools.permutations(range(n), 2):
        rv = max(rv, abs(sf.epsilon * (2 - n) * t[i] * t[j]))

    log_utils.logger.debug(f"Off-diagonal Einstein condition at s={fd.s} (rho={rho}): {rv}")
    return rv

def _cluster(values: Sequence[float], tol: float) -> list[list[float]]:
    clusters: list[list[float]] = []
    for value in sorted(values):
        if clusters and value - clusters[-1][-1] <= tol:
            clusters[-1].append(value)
        else:
            clusters.append([value])
    return clusters

def count_distinct(fd: FrameData, tol: float = DEFAULT_TOL) -> tuple[int, float]:
    """
    Clusters lam_1..lam_{n-1} and evaluates (lam_i - lam_j)(nH - lam_i - lam_j)
    over pairs of distinct clusters

    OUT:
        (number of distinct base curvatures, max pair residual)
    """
    clusters = _cluster(_base_values(fd).tolist(), tol)
    reps = [float(np.mean(c)) for c in clusters]
    nh = fd.n * fd.H
    residual = max(
        (abs((a - b) * (nh - a - b)) for a, b in itertools.combinations(reps, 2)),
        default=0.0
    )
    return len(clusters), residual

def three_distinct_solution(nh: float) -> np.ndarray:
    """
    Solves lam_1 + lam_2 = lam_2 + lam_3 = lam_3 + lam_1 = nH,
    the only solution has lam_1 = lam_2 = lam_3
    """
    system = np.array([
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 1.0]
    ])
    return np.linalg.solve(system, np.full(3, nh))

def _report(case: ProofCase, n: int, details: list[EquationCheck], tol: float, **extra) -> ProofCaseReport:
    residuals = {d.name: d.residual for d in details}
    verdict = (
        Verdict.CONSISTENT_CONSTANT_CURVATURE
        if all(v < tol for v in residuals.values())
        else Verdict.NOT_EINSTEIN
    )
    return ProofCaseReport(
        case=case,
        n=n,
        residuals=residuals,
        verdict=extra.pop("verdict", verdict),
        details=details,
        **extra
    )

def slice_branch(fd: FrameData, sf: SpaceForm, rho: float, tol: float = DEFAULT_TOL) -> ProofCaseReport:
    """
    T = 0: the hypersurface is a piece of a slice, isometric to Q^n(eps)
    """
    if fd.t_norm >= tol:
        raise BranchPreconditionError(f"Slice branch requires T = 0, got |T|={fd.t_norm}")

    n = fd.n
    eps = sf.epsilon
    ks = [
        sectional(fd, sf, i, j)
        for i, j in itertools.combinations(range(1, n + 1), 2)
    ]
    ric = ricci_matrix(fd, sf)
    worst_k = max(ks, key=lambda k: abs(k - eps))
    ric_dev = float(np.max(np.abs(ric - eps * (n - 1) * np.eye(n))))
    details = [
        EquationCheck(name="sectional_slice", lhs=worst_k, rhs=eps),
        EquationCheck(name="ricci_slice", lhs=ric_dev, rhs=0.0),
        EquationCheck(name="rho_slice", lhs=rho, rhs=eps * (n - 1)),
    ]
    return _report(ProofCase.SLICE_BRANCH, n, details, tol)

def region_gluing(n: int, sf: SpaceForm, rho: float) -> RegionConstants:
    """
    Where |T| > 0 the curvature is rho/(n-1), on slice regions it is eps,
    and a slice region forces rho = (n-1)eps
    """
    k_open = rho / (n - 1)
    return RegionConstants(
        k_open=k_open,
        k_slice=sf.epsilon,
        forced_rho=sf.epsilon * (n - 1),
        agreement=abs(k_open - sf.epsilon)
    )

def all_equal_branch(fd: FrameData, sf: SpaceForm, rho: float, tol: float = DEFAULT_TOL) -> ProofCaseReport:
    """
    lam_1 = ... = lam_{n-1} = mu: every sectional curvature equals rho/(n-1)
    """
    _require_principal_t(fd)
    d_base, _ = count_distinct(fd, tol)
    if d_base != 1:
        raise BranchPreconditionError(
            f"All-equal branch requires one distinct base curvature, got {d_base}"
        )

    n = fd.n
    eps = sf.epsilon
    mu = float(np.mean(_base_values(fd)))
    lam_n = fd.lambda_n
    t2 = fd.t_norm ** 2
    nh = n * fd.H
    k0 = rho / (n - 1)
    k_in = eps * (1 - t2) + mu * lam_n

    details = [
        EquationCheck(
            name="equation_lambda_i",
            lhs=eps * (n - 1 - t2) + nh * mu - mu * mu,
            rhs=rho
        ),
        EquationCheck(
            name="equation_lambda_n",
            lhs=eps * (n - 1) * (1 - t2) + nh * lam_n - lam_n * lam_n,
            rhs=rho
        ),
        EquationCheck(name="sectional_ij", lhs=eps + mu * mu, rhs=k0),
        EquationCheck(name="constant_sectional_n", lhs=k_in, rhs=k0),
        EquationCheck(
            name="constant_sectional_i",
            lhs=k_in,
            rhs=rho - (n - 2) * (mu * mu + eps)
        ),
    ]
    return _report(ProofCase.ALL_EQUAL, n, details, tol)

def _cartan_pair_base(sf: SpaceForm, p: int, q: int) -> IsoparametricBase:
    """
    A two-curvature base with lam_1^g lam_2^g = -eps
    """
    if sf.epsilon == 1:
        return make_base(sf, BaseKind.CLIFFORD_PRODUCT, r=0.6, p=p, q=q)
    return make_base(sf, BaseKind.HYPERBOLIC_CYLINDER, r=0.6, p=p, q=q)

def two_distinct_branch(
    n: int,
    p: int,
    q: int,
    sf: SpaceForm,
    rho: float,
    oracle: bool = False,
    tol: float = DEFAULT_TOL
) -> ProofCaseReport:
    """
    Two distinct base curvatures with multiplicities p, q: follows the chain of
    substitutions down to the Cartan obstruction n - 3

    IN:
        n - dimension of the hypersurface
        p, q - multiplicities, p + q = n - 1
        sf - supplies eps, its own dimension is not used
        rho - Einstein constant fed into the substitutions
        oracle - allows n = 3 where the obstruction must vanish
        tol - verdict tolerance on the substitution residuals
    """
    if p < 1 or q < 1 or p + q != n - 1:
        raise BranchPreconditionError(f"Need p, q >= 1 with p + q = n - 1, got p={p}, q={q}, n={n}")

    if n <= 3 and not (oracle and n == 3):
        raise BranchPreconditionError(f"Two-curvature branch requires n > 3, got n={n}")

    eps = sf.epsilon
    space = SpaceForm.create(eps, n)
    base = _cartan_pair_base(space, p, q)
    (lam1_g, _), (lam2_g, _) = base.curvatures
    details: list[EquationCheck] = []

    # Branch lam_n != 0: g is isoparametric, Cartan gives lam_1^g lam_2^g = -eps
    # and |T|^2 = (eps(n-1) - rho)/(2 eps) is constant
    t2_nonzero = (eps * (n - 1) - rho) / (2 * eps)
    t_branch = math.sqrt(t2_nonzero) if 0 < t2_nonzero < 1 else 0.5
    s_sample = 0.1
    profile = Profile.constant_angle(math.atan(t_branch / math.sqrt(1 - t_branch ** 2)))
    fd = frame_data(base, profile, s_sample)
    (lam1, _), (lam2, _) = fd.lambdas
    lam1_s = parallel_curvature(lam1_g, space, s_sample)
    h_s = mean_curvature_of_parallel(base, s_sample)

    # lam_1 + lam_2 = nH eliminates lam_n
    lam_n = (1 - p) * lam1 + (1 - q) * lam2
    nh = p * lam1 + q * lam2 + lam_n
    details.append(EquationCheck(name="first_edo", lhs=nh, rhs=lam1 + lam2))

    t2 = fd.t_norm ** 2
    details.append(EquationCheck(
        name="second_edo",
        lhs=eps * (n - 1 - t2) + nh * lam1 - lam1 * lam1 - rho,
        rhs=lam1 * lam2 - (rho - eps * (n - 1 - t2))
    ))
    # Ric(e_n, e_n) through the mean curvature of g_s, on a profile with lam_n != 0
    bent = frame_data(base, Profile.exponential(1.0, 1.0), s_sample)
    details.append(EquationCheck(
        name="einstein_lambda_n",
        lhs=(
            eps * (n - 1) * (1 - bent.t_norm ** 2)
            - bent.t_norm * bent.lambda_n * (n - 1) * h_s
        ),
        rhs=float(ricci_matrix(bent, space)[n - 1, n - 1])
    ))
    details.append(EquationCheck(
        name="principal_curvature_transport",
        lhs=lam1,
        rhs=-fd.t_norm * lam1_s
    ))
    details.append(EquationCheck(name="cartan_1_2", lhs=lam1_g * lam2_g + eps, rhs=0.0))
    details.append(EquationCheck(
        name="product_curvatures_einstein",
        lhs=lam1 * lam2,
        rhs=-eps * t2
    ))
    details.append(EquationCheck(
        name="tnorm_sq_lambda_n_nonzero",
        lhs=-eps * t2_nonzero,
        rhs=rho - eps * (n - 1 - t2_nonzero)
    ))
    # Constant |T| means lam_n = d|T|/ds = 0, against the branch assumption
    details.append(EquationCheck(
        name="lambda_n_nonzero_branch",
        lhs=fd.lambda_n,
        rhs=0.0
    ))

    # Branch lam_n = 0
    t2_zero = (eps * (n - 1) - rho) / (eps * (n - 1))
    details.append(EquationCheck(
        name="tnorm_sq_lambda_n_zero",
        lhs=eps * (n - 1) * (1 - t2_zero),
        rhs=rho
    ))
    details.append(EquationCheck(
        name="tnorm_sq_incompatibility",
        lhs=t2_nonzero,
        rhs=t2_zero
    ))
    details.append(EquationCheck(
        name="second_edo_2",
        lhs=rho - eps * (n - 1 - t2_zero),
        rhs=(n - 2) / (n - 1) * (rho - eps * (n - 1))
    ))
    if t2_zero != 0:
        details.append(EquationCheck(
            name="second_edo_3",
            lhs=(n - 2) / (n - 1) * (rho - eps * (n - 1)) / t2_zero,
            rhs=-eps * (n - 2)
        ))

    # Terminal step: Cartan at s=0 against lam_1^s lam_2^s = -eps(n-2)
    obstruction = abs((-eps) - (-eps * (n - 2)))
    details.append(EquationCheck(
        name="cartan_obstruction",
        lhs=float(-eps),
        rhs=float(-eps * (n - 2))
    ))

    verdict = Verdict.CONTRADICTION if obstruction > 0 else Verdict.NO_OBSTRUCTION
    log_utils.logger.debug(
        f"Two-curvature branch n={n}, p={p}, q={q}, eps={eps}: obstruction {obstruction}"
    )
    return _report(
        ProofCase.TWO_DISTINCT,
        n,
        details,
        tol,
        verdict=verdict,
        n3_obstruction=obstruction
    )

def classify_frame(fd: FrameData, sf: SpaceForm, tol: float = DEFAULT_TOL) -> ProofCaseReport:
    """
    Routes a frame to its branch of the case analysis
    """
    rho = curvature_report(fd, sf).rho
    if fd.t_norm < tol:
        return slice_branch(fd, sf, rho, tol)

    if (offdiag := lemma2_offdiag(fd, sf, rho)) >= tol:
        raise BranchPreconditionError(
            f"T is not principal (off-diagonal Ricci {offdiag}), the frame can't be Einstein"
        )

    d_base, _ = count_distinct(fd, tol)
    if d_base == 1:
        return all_equal_branch(fd, sf, rho, tol)

    if d_base == 2:
        clusters = _cluster(_base_values(fd).tolist(), tol)
        p, q = len(clusters[0]), len(clusters[1])
        return two_distinct_branch(fd.n, p, q, sf, rho, tol=tol)

    raise BranchPreconditionError(
        f"{d_base} distinct base curvatures: pairwise sums can't all equal nH"
    )

def construct_constant_curvature_rotation(
    sf: SpaceForm,
    n: int,
    c: float,
    r: float,
    grid: Sequence[float],
    tol: float = 1e-8
) -> RotationResult:
    """
    Builds the rotation hypersurface over the geodesic sphere of radius r with
    constant sectional curvature c, by |T| = sqrt(c - eps)/lam^s

    IN:
        sf - space form, its dimension must equal n
        n - dimension of the hypersurface
        c - target sectional curvature, c >= eps
        r - radius of the geodesic sphere base
        grid - parameters s to sample
        tol - tolerance of the returned summary

    OUT:
        RotationResult with profile samples, frames, reports and a summary
    """
    if sf.n != n:
        raise DomainError(f"Space form dimension {sf.n} doesn't match n={n}")

    if not grid:
        raise DomainError("Empty grid")

    eps = sf.epsilon
    if c < eps - tol:
        raise NoRealSolution(f"Constant curvature c={c} < eps={eps} has no real solution")

    grid = sorted(float(s) for s in grid)
    base = make_base(sf, BaseKind.GEODESIC_SPHERE, r=r)
    ode_residuals: list[float] = []

    if abs(c - eps) <= tol:
        # Degenerate case: |T| = 0, a slice
        frames = [slice_frame(sf, s) for s in grid]
        samples = [ProfileSample(s=s, a=0.0, a1=0.0, a2=0.0) for s in grid]

    else:
        lo, hi = grid[0], grid[-1]
        profile = Profile.rotation(base, c, (lo, hi if hi > lo else lo + 1.0))
        frames = [frame_data(base, profile, s) for s in grid]
        samples = [
            ProfileSample(s=s, a=profile.a(s), a1=profile.a1(s), a2=profile.a2(s))
            for s in grid
        ]
        h = min(1e-4, (hi - lo) / 4) if hi > lo else 1e-4
        for s in grid:
            if profile.contains(s - h) and profile.contains(s + h):
                ode_residuals.append(check_kn_ode(base, profile, s, h))

    reports = [curvature_report(fd, sf) for fd in frames]
    ks = [k for rep in reports for k in rep.sectional_values()]
    rhos = [rep.rho for rep in reports]
    max_defect = max(rep.einstein_defect for rep in reports)
    max_spread = max(rep.k_spread for rep in reports)
    summary = CurvatureSummary(
        rho_min=min(rhos),
        rho_max=max(rhos),
        k_min=min(ks),
        k_max=max(ks),
        max_einstein_defect=max_defect,
        max_k_spread=max_spread,
        max_ode_residual=max(ode_residuals, default=0.0),
        within_tol=(
            max_defect <= tol
            and max_spread <= tol
            and max(abs(rho - (n - 1) * c) for rho in rhos) <= tol
        )
    )
    if not summary.within_tol:
        log_utils.logger.warning(f"Rotation construction for c={c} exceeds tol={tol}: {summary}")

    return RotationResult(
        epsilon=eps,
        n=n,
        c=c,
        r=r,
        samples=samples,
        frames=frames,
        reports=reports,
        summary=summary
    )

def summarize_theorem(
    frames: Sequence[FrameData],
    reports: Sequence[CurvatureReport],
    tol: float = DEFAULT_TOL,
    k_tol: float|None = None
) -> TheoremSummary:
    """
    Folds per-point reports into a theorem verdict, deterministic in the grid order
    """
    if not reports:
        raise DomainError("Nothing to summarize, the grid is empty")

    if k_tol is None:
        k_tol = 10 * tol

    # Worst point: largest value, smallest s on ties
    points = sorted(zip(frames, reports), key=lambda fr: fr[0].s)
    n = reports[0].n
    rhos = [rep.rho for _, rep in points]
    means = [rep.mean_sectional() for _, rep in points]
    einstein = all(rep.einstein_defect < tol for _, rep in points)

    def worst(key) -> tuple[FrameData, CurvatureReport]:
        best = points[0]
        for pt in points[1:]:
            if key(pt[1]) > key(best[1]):
                best = pt
        return best

    if not einstein:
        fd, rep = worst(lambda r: r.einstein_defect)
        passed = True
        message = f"not Einstein: defect {rep.einstein_defect:.3e} at s={fd.s:.17g}"

    else:
        fd, rep = worst(lambda r: r.k_spread)
        rho_spread = max(rhos) - min(rhos)
        k_grid = max(means) - min(means)
        k_vs_rho = max(abs(k - r / (n - 1)) for k, r in zip(means, rhos))
        passed = (
            rep.k_spread < k_tol
            and rho_spread < k_tol
            and k_grid < k_tol
            and k_vs_rho < k_tol
        )
        message = (
            f"Einstein with constant sectional curvature {means[0]:.12g}"
            if passed
            else f"theorem violated: k_spread {rep.k_spread:.3e} at s={fd.s:.17g}"
        )

    return TheoremSummary(
        einstein=einstein,
        passed=passed,
        message=message,
        n_points=len(points),
        worst_s=fd.s,
        worst_einstein_defect=rep.einstein_defect,
        worst_k_spread=rep.k_spread,
        rho_spread=max(rhos) - min(rhos),
        k_grid_spread=max(means) - min(means),
        rho=float(np.mean(rhos)),
        k=float(np.mean(means))
    )

def verify_theorem(
    base: IsoparametricBase,
    profile: Profile,
    grid: Sequence[float],
    tol: float = DEFAULT_TOL,
    k_tol: float|None = None
) -> TheoremSummary:
    """
    Evaluates the hypersurface on the grid and checks that an Einstein
    result comes with constant sectional curvature
    """
    frames = [frame_data(base, profile, s) for s in grid]
    reports = [curvature_report(fd, base.sf) for fd in frames]
    return summarize_theorem(frames, reports, tol, k_tol)
