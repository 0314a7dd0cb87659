"""
Module that implements the verification suites run by `verify`
"""

from __future__ import annotations

import abc
import itertools
import math
from types import MappingProxyType
from typing import ClassVar, TypeVar

import numpy as np
import pydantic

from . import log_utils
from .ambient import SpaceForm, ambient_inner, eps_trig
from .base_catalog import (
    BaseKind,
    IsoparametricBase,
    cartan_residuals,
    make_base,
    parallel_curvature
)
from .classifier import (
    Verdict,
    all_equal_branch,
    construct_constant_curvature_rotation,
    slice_branch,
    summarize_theorem,
    two_distinct_branch
)
from .curvature import (
    RicciRoute,
    curvature_report,
    ricci_by_contraction,
    ricci_matrix,
    tensor_symmetry_residuals
)
from .errors import GeometryError
from .hypersurface import (
    FrameData,
    Profile,
    check_kn_ode,
    check_kn_order,
    frame_data,
    slice_frame
)


T = TypeVar("T", bound="Suite")

SEED = 20240607

_suite_type_map: dict[str, type["Suite"]] = {}


class CheckResult(pydantic.BaseModel):
    name: str
    residual: float
    threshold: float
    passed: bool

    @classmethod
    def below(cls, name: str, residual: float, threshold: float) -> CheckResult:
        return cls(
            name=name,
            residual=float(residual),
            threshold=threshold,
            passed=bool(residual < threshold)
        )

    @classmethod
    def flag(cls, name: str, ok: bool, residual: float = 0.0) -> CheckResult:
        return cls(name=name, residual=float(residual), threshold=0.0, passed=bool(ok))


class SuiteResult(pydantic.BaseModel):
    suite: str
    passed: bool
    checks: list[CheckResult]


class SuiteError(GeometryError, LookupError):
    """
    Exception is raised on attempt to run a suite that doesn't exist
    """


class Suite(abc.ABC):
    """
    ABC for verification suites
    """
    __NAME: ClassVar[str]

    @classmethod
    def __init_subclass__(cls: type[T], /, suite_name: str|None = None, **kwargs):
        """
        Registers the suite under its name
        """
        super().__init_subclass__(**kwargs)

        name = cls.__name__.lower() if suite_name is None else suite_name
        if name in _suite_type_map:
            raise SuiteError(f"Suite with name '{name}' already exists")

        cls.__NAME = name
        _suite_type_map[name] = cls

    @classmethod
    def get_name(cls) -> str:
        return cls.__NAME

    def __init__(self) -> None:
        self.rng = np.random.default_rng(SEED)

    @abc.abstractmethod
    def checks(self) -> list[CheckResult]:
        """
        Runs the checks of this suite
        """

    def run(self) -> SuiteResult:
        checks = self.checks()
        result = SuiteResult(
            suite=self.get_name(),
            passed=all(c.passed for c in checks),
            checks=checks
        )
        log_utils.logger.info(
            f"Suite '{result.suite}': {sum(c.passed for c in checks)}/{len(checks)} checks passed"
        )
        return result


def get_suite_type(name: str) -> type[Suite]|None:
    """
    Returns a suite type by name
    """
    return _suite_type_map.get(name, None)

def get_suite_types():
    """
    Returns read-only mapping over suite types
    """
    return MappingProxyType(_suite_type_map)

def run_suite(name: str) -> SuiteResult:
    if (suite_type := get_suite_type(name)) is None:
        raise SuiteError(f"Unknown suite '{name}'")

    return suite_type().run()


def random_frame(rng: np.random.Generator, n: int, principal_t: bool = False) -> FrameData:
    """
    Frame data with random curvatures and a random T, |T| < 1
    """
    lambdas = rng.uniform(-2.0, 2.0, size=n - 1).tolist()
    lambda_n = float(rng.uniform(-2.0, 2.0))
    t_norm = float(rng.uniform(0.0, 0.95))
    if principal_t:
        return FrameData.synthetic(lambdas, lambda_n, t_norm)

    direction = rng.normal(size=n)
    direction /= np.linalg.norm(direction)
    return FrameData.synthetic(lambdas, lambda_n, (t_norm * direction).tolist())

def catalog_bases(max_n: int = 8) -> list[IsoparametricBase]:
    """
    Every catalog entry up to the given dimension, over a few parameter values
    """
    rv = []
    for n in range(3, max_n + 1):
        sphere, hyperbolic = SpaceForm.create(1, n), SpaceForm.create(-1, n)
        rv.append(make_base(sphere, BaseKind.TOTALLY_GEODESIC))
        rv.append(make_base(hyperbolic, BaseKind.TOTALLY_GEODESIC))
        rv.append(make_base(hyperbolic, BaseKind.HOROSPHERE))
        for r in (0.5, 1.0):
            rv.append(make_base(sphere, BaseKind.GEODESIC_SPHERE, r=r))
            rv.append(make_base(hyperbolic, BaseKind.GEODESIC_SPHERE, r=r))
            rv.append(make_base(hyperbolic, BaseKind.EQUIDISTANT, r=r))

        for p in range(1, n - 1):
            q = n - 1 - p
            for r in (math.pi / 6, math.pi / 4, math.pi / 3):
                rv.append(make_base(sphere, BaseKind.CLIFFORD_PRODUCT, r=r, p=p, q=q))
                rv.append(make_base(hyperbolic, BaseKind.HYPERBOLIC_CYLINDER, r=r, p=p, q=q))

    return rv


class Identities(Suite, suite_name="identities"):
    """
    eps-trigonometry, ambient product, parallel transport and curvature tensor symmetries
    """
    def checks(self) -> list[CheckResult]:
        rv = []
        h = 1e-4
        grid = np.linspace(-3.0, 3.0, 61)
        for eps in (1, -1):
            sf = SpaceForm.create(eps, 4)
            pythagoras = max(abs(c * c + eps * s * s - 1.0) for c, s in map(lambda x: eps_trig(sf, x), grid))
            # Relative scale: cosh grows quickly
            derivative = 0.0
            for x in grid:
                c, s = eps_trig(sf, x)
                c_plus, s_plus = eps_trig(sf, x + h)
                c_minus, s_minus = eps_trig(sf, x - h)
                scale = max(1.0, abs(c))
                derivative = max(
                    derivative,
                    abs((s_plus - s_minus) / (2 * h) - c) / scale,
                    abs((c_plus - c_minus) / (2 * h) + eps * s) / scale
                )

            rv.append(CheckResult.below(f"trig_pythagoras[eps={eps}]", pythagoras, 1e-12))
            rv.append(CheckResult.below(f"trig_derivatives[eps={eps}]", derivative, 1e-7))
            rv.append(CheckResult.flag(f"trig_at_zero[eps={eps}]", eps_trig(sf, 0.0) == (1.0, 0.0)))

            e1, e2 = np.eye(sf.ambient_dim)[:2]
            rv.append(CheckResult.below(
                f"ambient_inner[eps={eps}]",
                abs(ambient_inner(sf, e1, e1) - eps) + abs(ambient_inner(sf, e1, e2)),
                1e-15
            ))

            semigroup = 0.0
            for lam in self.rng.uniform(-1.0, 1.0, size=20):
                for s, t in self.rng.uniform(-0.3, 0.3, size=(5, 2)):
                    try:
                        direct = parallel_curvature(lam, sf, s + t)
                        composed = parallel_curvature(parallel_curvature(lam, sf, s), sf, t)
                    except GeometryError:
                        continue
                    semigroup = max(semigroup, abs(direct - composed))

            rv.append(CheckResult.below(f"parallel_semigroup[eps={eps}]", semigroup, 1e-9))

        symmetry = {}
        for _ in range(200):
            n = int(self.rng.integers(2, 9))
            fd = random_frame(self.rng, n)
            sf = SpaceForm.create(int(self.rng.choice((1, -1))), n)
            for name, value in tensor_symmetry_residuals(fd, sf).items():
                symmetry[name] = max(symmetry.get(name, 0.0), value)

        for name, value in symmetry.items():
            rv.append(CheckResult.below(f"tensor_{name}", value, 1e-12))

        return rv

class Cartan(Suite, suite_name="cartan"):
    """
    Cartan's identity for every catalog base
    """
    def checks(self) -> list[CheckResult]:
        rv = []
        for base in catalog_bases():
            residuals = cartan_residuals(base)
            name = f"{base.sf.name}:{base.label()}"
            if not residuals:
                rv.append(CheckResult.flag(f"{name} (vacuous)", base.d == 1))
                continue

            rv.append(CheckResult.below(name, max(map(abs, residuals)), 1e-9))

        return rv

class Lemma1(Suite, suite_name="lemma1"):
    """
    Closed form Ricci tensor against the contraction of the Gauss equation
    """
    samples = 1000
    scalar_samples = 50

    def checks(self) -> list[CheckResult]:
        worst_tensor = 0.0
        worst_scalar = 0.0
        for k in range(self.samples):
            n = int(self.rng.integers(4, 9))
            sf = SpaceForm.create(int(self.rng.choice((1, -1))), n)
            fd = random_frame(self.rng, n)
            closed = ricci_matrix(fd, sf, RicciRoute.CLOSED_FORM)
            contracted = ricci_matrix(fd, sf, RicciRoute.CONTRACTION)
            worst_tensor = max(worst_tensor, float(np.max(np.abs(closed - contracted))))

            if k < self.scalar_samples:
                for i, j in itertools.product(range(1, n + 1), repeat=2):
                    worst_scalar = max(
                        worst_scalar,
                        abs(closed[i - 1, j - 1] - ricci_by_contraction(fd, sf, i, j))
                    )

        return [
            CheckResult.below("closed_form_vs_tensor_contraction", worst_tensor, 1e-10),
            CheckResult.below("closed_form_vs_componentwise_contraction", worst_scalar, 1e-10),
        ]

def random_triple(rng: np.random.Generator) -> tuple[IsoparametricBase, Profile, float]:
    """
    A focal-free (base, profile, s) triple with a curved profile, s in [0, 0.3]
    """
    n = int(rng.integers(3, 9))
    eps = int(rng.choice((1, -1)))
    sf = SpaceForm.create(eps, n)
    r = float(rng.uniform(0.6, 1.2))
    p = int(rng.integers(1, n - 1))
    if eps == 1:
        kind = str(rng.choice(["totally_geodesic", "geodesic_sphere", "clifford_product"]))
    else:
        kind = str(rng.choice(
            ["totally_geodesic", "geodesic_sphere", "horosphere", "equidistant", "hyperbolic_cylinder"]
        ))

    if kind in ("clifford_product", "hyperbolic_cylinder"):
        base = make_base(sf, kind, r=r, p=p, q=n - 1 - p)
    elif kind in ("geodesic_sphere", "equidistant"):
        base = make_base(sf, kind, r=r)
    else:
        base = make_base(sf, kind)

    domain = (-1.0, 1.0)
    family = str(rng.choice(["quadratic", "exponential", "sinh"]))
    if family == "quadratic":
        k = float(rng.uniform(0.5, 2.0))
        profile = Profile.quadratic(k, k + float(rng.uniform(0.2, 1.0)), domain=domain)
    elif family == "exponential":
        profile = Profile.exponential(float(rng.uniform(0.3, 2.0)), float(rng.uniform(0.3, 2.0)), domain=domain)
    else:
        profile = Profile.sinh(float(rng.uniform(0.3, 2.0)), float(rng.uniform(0.3, 2.0)), domain=domain)

    return base, profile, float(rng.uniform(0.0, 0.3))

class Ode(Suite, suite_name="ode"):
    """
    lam_n = d|T|/ds by central differences, second order
    """
    samples = 100
    step = 1e-2

    def checks(self) -> list[CheckResult]:
        worst_order = math.inf
        worst_scaled = 0.0
        for _ in range(self.samples):
            base, profile, s = random_triple(self.rng)
            fine = check_kn_ode(base, profile, s, self.step / 2)
            if fine < 1e-10:
                continue

            # Two consecutive halvings: the leading error term may cancel at one step size
            order = max(
                check_kn_order(base, profile, s, self.step),
                check_kn_order(base, profile, s, self.step / 2)
            )
            worst_order = min(worst_order, order)
            worst_scaled = max(worst_scaled, fine / (self.step / 2) ** 2)

        return [
            CheckResult.flag("observed_order", worst_order >= 1.9, worst_order),
            CheckResult.below("residual_over_h_squared", worst_scaled, 1e3),
        ]

class Slice(Suite, suite_name="slice"):
    """
    T = 0: Ric = eps(n-1) I and K = eps
    """
    def checks(self) -> list[CheckResult]:
        rv = []
        for eps, n in itertools.product((1, -1), range(4, 9)):
            sf = SpaceForm.create(eps, n)
            fd = slice_frame(sf)
            report = curvature_report(fd, sf)
            ric = ricci_matrix(fd, sf)
            branch = slice_branch(fd, sf, report.rho, tol=1e-12)
            rv.append(CheckResult.below(
                f"slice[eps={eps},n={n}]",
                float(np.max(np.abs(ric - eps * (n - 1) * np.eye(n))))
                + float(np.max(np.abs(report.sectional_values() - eps))),
                1e-12
            ))
            rv.append(CheckResult.flag(
                f"slice_branch[eps={eps},n={n}]",
                branch.verdict is Verdict.CONSISTENT_CONSTANT_CURVATURE,
                branch.max_residual()
            ))

        return rv


# (eps, n, c, r, grid start, grid stop)
ROTATION_CASES = (
    (1, 4, 2.0, math.pi / 6, 0.0, 0.3),
    (1, 5, 1.5, math.pi / 6, 0.0, 0.3),
    (-1, 4, 0.0, 1.0, 0.0, 0.5),
    (-1, 6, -0.5, 1.0, 0.0, 0.5),
)

class Rotation(Suite, suite_name="rotation"):
    """
    Constant sectional curvature rotation hypersurfaces
    """
    tol = 1e-8

    def checks(self) -> list[CheckResult]:
        rv = []
        for eps, n, c, r, start, stop in ROTATION_CASES:
            sf = SpaceForm.create(eps, n)
            result = construct_constant_curvature_rotation(
                sf, n, c, r, np.linspace(start, stop, 21).tolist(), tol=self.tol
            )
            summary = result.summary
            tag = f"[eps={eps},n={n},c={c:g}]"
            rv.append(CheckResult.below(f"einstein_defect{tag}", summary.max_einstein_defect, self.tol))
            rv.append(CheckResult.below(f"k_spread{tag}", summary.max_k_spread, self.tol))
            rv.append(CheckResult.below(
                f"rho{tag}",
                max(abs(summary.rho_min - (n - 1) * c), abs(summary.rho_max - (n - 1) * c)),
                self.tol
            ))
            rv.append(CheckResult.below(f"kn_ode{tag}", summary.max_ode_residual, 1e-6))
            branch_residual = max(
                all_equal_branch(fd, sf, (n - 1) * c, tol=self.tol).max_residual()
                for fd in result.frames
            )
            rv.append(CheckResult.below(f"all_equal_branch{tag}", branch_residual, self.tol))

        return rv

class N3(Suite, suite_name="n3"):
    """
    The two-curvature branch ends in the obstruction n - 3
    """
    max_n = 64

    def checks(self) -> list[CheckResult]:
        wrong = []
        worst_substitution = 0.0
        worst_ricci_n = 0.0
        incompatible = True
        names = (
            "first_edo",
            "second_edo",
            "principal_curvature_transport",
            "cartan_1_2",
            "product_curvatures_einstein",
            "tnorm_sq_lambda_n_nonzero",
            "lambda_n_nonzero_branch",
            "tnorm_sq_lambda_n_zero",
            "second_edo_2",
            "second_edo_3",
        )
        for eps, n in itertools.product((1, -1), range(4, self.max_n + 1)):
            sf = SpaceForm.create(eps, n)
            rho = eps * (n - 1) - 0.5 * eps
            for p in range(1, n - 1):
                report = two_distinct_branch(n, p, n - 1 - p, sf, rho)
                if report.verdict is not Verdict.CONTRADICTION or report.n3_obstruction != n - 3:
                    wrong.append((eps, n, p))
                worst_substitution = max(worst_substitution, report.max_residual(*names))
                worst_ricci_n = max(worst_ricci_n, report.residuals["einstein_lambda_n"] / n)
                incompatible &= report.residuals["tnorm_sq_incompatibility"] > 0

        rv = [
            CheckResult.flag("obstruction_is_n_minus_3", not wrong, len(wrong)),
            CheckResult.below("tnorm_sq_substitutions", worst_substitution, 1e-12),
            CheckResult.below("ricci_n_through_mean_curvature", worst_ricci_n, 1e-10),
            CheckResult.flag("tnorm_sq_forms_incompatible", incompatible),
        ]
        for eps in (1, -1):
            sf = SpaceForm.create(eps, 3)
            oracle = two_distinct_branch(3, 1, 1, sf, eps * 2 - 0.5 * eps, oracle=True)
            rv.append(CheckResult.flag(
                f"n3_oracle[eps={eps}]",
                oracle.n3_obstruction == 0 and oracle.residuals["tnorm_sq_incompatibility"] < 1e-12
            ))

        for n in range(3, 17):
            listing = two_distinct_branch(n, 1, n - 2, SpaceForm.create(1, n), n - 1.5, oracle=True)
            rv.append(CheckResult.flag(
                f"obstruction[n={n}]",
                listing.n3_obstruction == n - 3,
                float(listing.n3_obstruction or 0)
            ))

        return rv

def theorem_configurations(rng: np.random.Generator, count: int = 200) -> list[tuple[IsoparametricBase, Profile, list[float]]]:
    """
    Generic (base, profile) pairs with a share of constant curvature rotation ones
    """
    rv = []
    rotation_count = count // 5
    for k in range(rotation_count):
        eps, n, c, r, start, stop = ROTATION_CASES[k % len(ROTATION_CASES)]
        # Shrinking towards eps keeps |T| inside (0, 1) on the grid
        c = eps + (c - eps) * (1.0 - 0.05 * (k // len(ROTATION_CASES)))
        sf = SpaceForm.create(eps, n)
        base = make_base(sf, BaseKind.GEODESIC_SPHERE, r=r)
        rv.append((base, Profile.rotation(base, c, (start, stop)), np.linspace(start, stop, 11).tolist()))

    while len(rv) < count:
        base, profile, _ = random_triple(rng)
        rv.append((base, profile, np.linspace(0.0, 0.3, 11).tolist()))

    return rv

class Theorem(Suite, suite_name="theorem"):
    """
    Einstein implies constant sectional curvature over a configuration sweep
    """
    tol = 1e-8
    k_tol = 1e-7

    def checks(self) -> list[CheckResult]:
        einstein = 0
        failures = []
        for k, (base, profile, grid) in enumerate(theorem_configurations(self.rng)):
            frames = [frame_data(base, profile, s) for s in grid]
            reports = [curvature_report(fd, base.sf) for fd in frames]
            summary = summarize_theorem(frames, reports, self.tol, self.k_tol)
            einstein += summary.einstein
            if not summary.passed:
                failures.append(k)
                log_utils.logger.error(f"Configuration {k} ({base.label()}, {profile!r}): {summary.message}")

        return [
            CheckResult.flag("no_theorem_violations", not failures, len(failures)),
            CheckResult.flag("einstein_configurations_found", einstein > 0, einstein),
        ]
