"""
Module implements the hypersurface f(x, s) = g_s(x) + a(s) d_{n+2}
of Q^n(eps) x R and its pointwise first-order data
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
import pydantic
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import log_utils
from .ambient import DEFAULT_TOL, SpaceForm
from .base_catalog import (
    BaseKind,
    IsoparametricBase,
    parallel_curvature,
    parallel_curvature_derivative
)
from .errors import DomainError, InvariantViolation


Evaluator = Callable[[float], float]

MIN_SAMPLES = 4


class ProfileFamily(str, enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    EXPONENTIAL = "exponential"
    SINH = "sinh"
    CONSTANT_ANGLE = "constant_angle"
    ROTATION = "rotation"
    SAMPLED = "sampled"


class Profile():
    """
    Height function a: I -> R of the hypersurface together with a' and a''
    Evaluators are pure in s
    """
    __slots__ = (
        "__domain",
        "__a",
        "__a1",
        "__a2",
        "__family",
        "__params"
    )

    def __init__(
        self,
        domain: tuple[float, float],
        a: Evaluator,
        a1: Evaluator,
        a2: Evaluator,
        family: ProfileFamily,
        params: dict[str, float]|None = None
    ) -> None:
        """
        Constructor

        IN:
            domain - closed interval (start, stop), bounds may be infinite
            a, a1, a2 - evaluators for a, a' and a''
            family - the family this profile belongs to
            params - parameters of the family, informative only
        """
        lo, hi = domain
        if not lo < hi:
            raise DomainError(f"Profile domain must be a non-empty interval, got {domain}")

        self.__domain = (float(lo), float(hi))
        self.__a = a
        self.__a1 = a1
        self.__a2 = a2
        self.__family = family
        self.__params = dict(params or {})

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v:g}" for k, v in sorted(self.__params.items()))
        return f"<Profile({self.__family.value}, [{params}], I={self.__domain})>"

    @property
    def domain(self) -> tuple[float, float]:
        return self.__domain

    @property
    def family(self) -> ProfileFamily:
        return self.__family

    @property
    def params(self) -> dict[str, float]:
        return dict(self.__params)

    def contains(self, s: float) -> bool:
        lo, hi = self.__domain
        return lo <= s <= hi

    def _check_domain(self, s: float):
        if not self.contains(s):
            raise DomainError(f"s={s!r} lies outside the profile domain {self.__domain}")

    def _evaluate(self, func: Evaluator, s: float) -> float:
        self._check_domain(s)
        try:
            return float(func(s))

        except OverflowError as e:
            raise InvariantViolation(f"{self!r} overflows at s={s!r}") from e

    def a(self, s: float) -> float:
        return self._evaluate(self.__a, s)

    def a1(self, s: float) -> float:
        return self._evaluate(self.__a1, s)

    def a2(self, s: float) -> float:
        return self._evaluate(self.__a2, s)

    def reparametrized(self, scale: float, shift: float = 0.0) -> Profile:
        """
        Returns the profile s -> a(scale*s + shift), scale must be positive
        """
        if scale <= 0:
            raise DomainError(f"Reparametrization must be increasing, got scale={scale}")

        lo, hi = self.__domain
        return Profile(
            ((lo - shift) / scale, (hi - shift) / scale),
            lambda s: self.__a(scale * s + shift),
            lambda s: scale * self.__a1(scale * s + shift),
            lambda s: scale * scale * self.__a2(scale * s + shift),
            self.__family,
            {**self.__params, "scale": scale, "shift": shift}
        )

    def _check_positive_slope(self, points: Sequence[float]):
        for s in points:
            if math.isfinite(s) and self.__a1(s) <= 0:
                raise InvariantViolation(
                    f"{self!r}: a'(s) must be positive, got {self.__a1(s)!r} at s={s!r}"
                )

    @classmethod
    def linear(
        cls,
        alpha: float,
        beta: float = 0.0,
        domain: tuple[float, float] = (-math.inf, math.inf)
    ) -> Profile:
        """
        a(s) = alpha*s + beta
        """
        if alpha <= 0:
            raise InvariantViolation(f"Linear profile requires alpha > 0, got {alpha}")

        return cls(
            domain,
            lambda s: alpha * s + beta,
            lambda s: alpha,
            lambda s: 0.0,
            ProfileFamily.LINEAR,
            {"alpha": alpha, "beta": beta}
        )

    @classmethod
    def quadratic(
        cls,
        k: float,
        alpha: float,
        beta: float = 0.0,
        domain: tuple[float, float] = (0.0, 1.0)
    ) -> Profile:
        """
        a(s) = k*s^2/2 + alpha*s + beta, a' is affine so the endpoints decide positivity
        """
        if k != 0 and not all(map(math.isfinite, domain)):
            raise DomainError("Quadratic profile requires a bounded domain")

        rv = cls(
            domain,
            lambda s: 0.5 * k * s * s + alpha * s + beta,
            lambda s: k * s + alpha,
            lambda s: k,
            ProfileFamily.QUADRATIC,
            {"k": k, "alpha": alpha, "beta": beta}
        )
        rv._check_positive_slope(domain if k != 0 else (0.0,))
        return rv

    @classmethod
    def exponential(
        cls,
        amplitude: float,
        rate: float,
        beta: float = 0.0,
        domain: tuple[float, float] = (-math.inf, math.inf)
    ) -> Profile:
        """
        a(s) = amplitude*exp(rate*s) + beta
        """
        if amplitude * rate <= 0:
            raise InvariantViolation(
                f"Exponential profile requires amplitude*rate > 0, got {amplitude * rate}"
            )

        return cls(
            domain,
            lambda s: amplitude * math.exp(rate * s) + beta,
            lambda s: amplitude * rate * math.exp(rate * s),
            lambda s: amplitude * rate * rate * math.exp(rate * s),
            ProfileFamily.EXPONENTIAL,
            {"amplitude": amplitude, "rate": rate, "beta": beta}
        )

    @classmethod
    def sinh(
        cls,
        amplitude: float = 1.0,
        rate: float = 1.0,
        beta: float = 0.0,
        domain: tuple[float, float] = (-math.inf, math.inf)
    ) -> Profile:
        """
        a(s) = amplitude*sinh(rate*s) + beta
        """
        if amplitude * rate <= 0:
            raise InvariantViolation(
                f"Sinh profile requires amplitude*rate > 0, got {amplitude * rate}"
            )

        return cls(
            domain,
            lambda s: amplitude * math.sinh(rate * s) + beta,
            lambda s: amplitude * rate * math.cosh(rate * s),
            lambda s: amplitude * rate * rate * math.sinh(rate * s),
            ProfileFamily.SINH,
            {"amplitude": amplitude, "rate": rate, "beta": beta}
        )

    @classmethod
    def constant_angle(
        cls,
        theta: float,
        beta: float = 0.0,
        domain: tuple[float, float] = (-math.inf, math.inf)
    ) -> Profile:
        """
        a' = tan(theta): the normal makes a constant angle with d_{n+2}
        """
        if not 0 < theta < math.pi / 2:
            raise DomainError(f"Constant angle must lie in (0, pi/2), got {theta}")

        slope = math.tan(theta)
        return cls(
            domain,
            lambda s: slope * s + beta,
            lambda s: slope,
            lambda s: 0.0,
            ProfileFamily.CONSTANT_ANGLE,
            {"theta": theta, "beta": beta}
        )

    @classmethod
    def sampled(cls, s_values: Sequence[float], a_values: Sequence[float]) -> Profile:
        """
        Cubic interpolant through (s, a) samples, derivatives are those of the interpolant
        """
        s_arr = np.asarray(s_values, dtype=float)
        a_arr = np.asarray(a_values, dtype=float)
        if s_arr.ndim != 1 or s_arr.shape != a_arr.shape:
            raise DomainError("Sampled profile needs two 1d arrays of the same length")

        if s_arr.size < MIN_SAMPLES:
            raise DomainError(
                f"Sampled profile needs at least {MIN_SAMPLES} nodes, got {s_arr.size}"
            )

        if np.any(np.diff(s_arr) <= 0):
            raise DomainError("Sample grid must be strictly increasing")

        spline = CubicSpline(s_arr, a_arr)
        d1 = spline.derivative(1)
        d2 = spline.derivative(2)
        rv = cls(
            (float(s_arr[0]), float(s_arr[-1])),
            lambda s: float(spline(s)),
            lambda s: float(d1(s)),
            lambda s: float(d2(s)),
            ProfileFamily.SAMPLED,
            {"nodes": float(s_arr.size)}
        )
        midpoints = 0.5 * (s_arr[1:] + s_arr[:-1])
        rv._check_positive_slope(np.concatenate((s_arr, midpoints)).tolist())
        return rv

    @classmethod
    def from_csv(cls, path: str|Path) -> Profile:
        """
        Loads a sampled profile from a CSV file with the header 's,a'
        """
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()

        except UnicodeDecodeError as e:
            raise DomainError(f"{path}: sample file is not valid UTF-8: {e.reason}") from e

        header = lines[0].strip().replace(" ", "") if lines else ""
        if header != "s,a":
            raise DomainError(f"{path}: expected the header 's,a', got '{header}'")

        try:
            data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)

        except ValueError as e:
            raise DomainError(f"{path}: malformed sample file: {e}") from e

        if data.shape[1] != 2:
            raise DomainError(f"{path}: expected 2 columns, got {data.shape[1]}")

        log_utils.logger.debug(f"Loaded {data.shape[0]} profile samples from {path}")
        return cls.sampled(data[:, 0], data[:, 1])

    @classmethod
    def rotation(
        cls,
        base: IsoparametricBase,
        c: float,
        domain: tuple[float, float],
        tol: float = DEFAULT_TOL
    ) -> Profile:
        """
        Profile over a geodesic sphere base producing constant sectional curvature c:
        |T| = sqrt(c - eps)/lam^s, so every lam_i = -sqrt(c - eps)

        a' and a'' are closed-form, a is integrated from the start of the domain
        """
        if base.kind is not BaseKind.GEODESIC_SPHERE:
            raise DomainError(f"Rotation profiles need a geodesic sphere base, got {base.label()}")

        sf = base.sf
        k = math.sqrt(c - sf.epsilon)
        (lam_g, _), = base.curvatures

        def t_norm(s: float) -> float:
            tn = k / parallel_curvature(lam_g, sf, s, tol)
            if not 0 < tn < 1:
                raise DomainError(
                    f"Rotation profile for c={c!r} undefined at s={s!r}: |T|={tn!r} not in (0, 1)"
                )
            return tn

        def a1(s: float) -> float:
            tn = t_norm(s)
            return tn / math.sqrt(1.0 - tn * tn)

        def a2(s: float) -> float:
            tn = t_norm(s)
            lam_s = parallel_curvature(lam_g, sf, s, tol)
            lambda_n = -k * parallel_curvature_derivative(lam_s, sf) / (lam_s * lam_s)
            return lambda_n / (1.0 - tn * tn) ** 1.5

        start = domain[0]

        def a(s: float) -> float:
            value, _ = integrate.quad(a1, start, s, epsabs=1e-13, epsrel=1e-12)
            return value

        return cls(domain, a, a1, a2, ProfileFamily.ROTATION, {"c": c})


def make_profile(family: ProfileFamily|str, domain: tuple[float, float], **params: float) -> Profile:
    """
    Builds an analytic profile by family name
    """
    try:
        family = ProfileFamily(family)

    except ValueError as e:
        raise DomainError(f"Unknown profile family '{family}'") from e

    factories = {
        ProfileFamily.LINEAR: Profile.linear,
        ProfileFamily.QUADRATIC: Profile.quadratic,
        ProfileFamily.EXPONENTIAL: Profile.exponential,
        ProfileFamily.SINH: Profile.sinh,
        ProfileFamily.CONSTANT_ANGLE: Profile.constant_angle,
    }
    if (factory := factories.get(family)) is None:
        raise DomainError(f"Profile family '{family.value}' can't be built from parameters")

    try:
        return factory(domain=domain, **params)

    except TypeError as e:
        raise DomainError(f"Invalid parameters for the '{family.value}' profile: {e}") from e


class FrameData(pydantic.BaseModel):
    """
    Snapshot of the first-order data at a point, expressed in the orthonormal
    principal frame e_1..e_n (e_n follows T for hypersurfaces built here)
    """
    model_config = pydantic.ConfigDict(frozen=True)

    s: float
    lambdas: tuple[tuple[float, int], ...]
    lambda_n: float
    t_norm: float
    nu: float
    H: float
    t_components: tuple[float, ...]

    @pydantic.model_validator(mode="after")
    def _check_consistency(self) -> FrameData:
        if any(m < 1 for _, m in self.lambdas):
            raise ValueError("multiplicities must be >= 1")

        n = self.n
        if len(self.t_components) != n:
            raise ValueError(f"expected {n} T components, got {len(self.t_components)}")

        if not 0.0 <= self.t_norm < 1.0:
            raise ValueError(f"|T| must lie in [0, 1), got {self.t_norm}")

        if self.nu <= 0:
            raise ValueError(f"the angle function must be positive, got {self.nu}")

        if abs(self.t_norm ** 2 + self.nu ** 2 - 1.0) > DEFAULT_TOL:
            raise ValueError("|T|^2 + nu^2 must equal 1")

        if abs(math.hypot(*self.t_components) - self.t_norm) > DEFAULT_TOL:
            raise ValueError("T components don't match |T|")

        expected_h = (sum(m * lam for lam, m in self.lambdas) + self.lambda_n) / n
        if abs(self.H - expected_h) > DEFAULT_TOL * max(1.0, abs(expected_h)):
            raise ValueError(f"H={self.H} doesn't match the principal curvatures ({expected_h})")

        return self

    @property
    def n(self) -> int:
        return sum(m for _, m in self.lambdas) + 1

    def principal_curvatures(self) -> np.ndarray:
        """
        Returns lam_1..lam_n with multiplicities expanded
        """
        values = [lam for lam, m in self.lambdas for _ in range(m)]
        values.append(self.lambda_n)
        return np.asarray(values)

    def t_vector(self) -> np.ndarray:
        return np.asarray(self.t_components)

    def is_principal_t(self) -> bool:
        """
        Checks whether T points along e_n
        """
        return all(t == 0.0 for t in self.t_components[:-1])

    @classmethod
    def synthetic(
        cls,
        lambdas: Sequence[float],
        lambda_n: float,
        t: Sequence[float]|float = 0.0,
        s: float = 0.0
    ) -> FrameData:
        """
        Builds frame data from raw values

        IN:
            lambdas - lam_1..lam_{n-1}, one per frame direction
            lambda_n - lam_n
            t - either the full component vector (t_1..t_n) or |T| placed along e_n
            s - parameter recorded in the snapshot
        """
        n = len(lambdas) + 1
        if isinstance(t, (int, float)):
            t_components = [0.0] * (n - 1) + [float(t)]
        else:
            t_components = [float(v) for v in t]

        t_norm = math.hypot(*t_components)
        if t_norm >= 1.0:
            raise InvariantViolation(f"|T| must be < 1, got {t_norm}")

        try:
            return cls(
                s=s,
                lambdas=tuple((float(lam), 1) for lam in lambdas),
                lambda_n=float(lambda_n),
                t_norm=t_norm,
                nu=math.sqrt(1.0 - t_norm * t_norm),
                H=(sum(lambdas) + lambda_n) / n,
                t_components=tuple(t_components)
            )

        except pydantic.ValidationError as e:
            raise InvariantViolation(str(e)) from e


def t_norm_angle(pr: Profile, s: float) -> tuple[float, float]:
    """
    Returns (|T|, nu) at s
    """
    slope = pr.a1(s)
    if not math.isfinite(slope):
        raise InvariantViolation(f"a'(s) must be finite, got {slope!r} at s={s!r}")

    if slope <= 0:
        raise InvariantViolation(f"a'(s) must be positive, got {slope!r} at s={s!r}")

    root = math.hypot(1.0, slope)
    t_norm = slope / root
    if t_norm >= 1.0:
        raise InvariantViolation(
            f"|T| rounds to 1 at s={s!r} (a'={slope!r}), the hypersurface is numerically vertical"
        )
    return t_norm, 1.0 / root

def _build_frame(s: float, **fields) -> FrameData:
    try:
        return FrameData(s=s, **fields)

    except pydantic.ValidationError as e:
        raise InvariantViolation(
            f"Inconsistent frame data at s={s!r}: {e.errors()[0]['msg'].removeprefix('Value error, ')}"
        ) from e

def frame_data(
    base: IsoparametricBase,
    pr: Profile,
    s: float,
    tol: float = DEFAULT_TOL
) -> FrameData:
    """
    First-order data of f(x, s) = g_s(x) + a(s) d_{n+2} at the parameter s
    """
    t_norm, nu = t_norm_angle(pr, s)
    slope = pr.a1(s)
    lambdas = tuple(
        (-t_norm * parallel_curvature(lam_g, base.sf, s, tol), m)
        for lam_g, m in base.curvatures
    )
    lambda_n = pr.a2(s) / (1.0 + slope * slope) ** 1.5
    n = base.sf.n

    return _build_frame(
        s,
        lambdas=lambdas,
        lambda_n=lambda_n,
        t_norm=t_norm,
        nu=nu,
        H=(sum(m * lam for lam, m in lambdas) + lambda_n) / n,
        t_components=(0.0,) * (n - 1) + (t_norm,)
    )

def slice_frame(sf: SpaceForm, s: float = 0.0) -> FrameData:
    """
    Frame data of a slice Q^n(eps) x {t_0}: totally geodesic, T = 0
    """
    return _build_frame(
        s,
        lambdas=((0.0, sf.n - 1),),
        lambda_n=0.0,
        t_norm=0.0,
        nu=1.0,
        H=0.0,
        t_components=(0.0,) * sf.n
    )

def check_kn_ode(
    base: IsoparametricBase,
    pr: Profile,
    s: float,
    h: float,
    tol: float = DEFAULT_TOL
) -> float:
    """
    Returns |lam_n(s) - (|T|(s+h) - |T|(s-h))/(2h)|, which is O(h^2)
    """
    fd = frame_data(base, pr, s, tol)
    # Both neighbours have to be regular points too
    frame_data(base, pr, s + h, tol)
    frame_data(base, pr, s - h, tol)

    t_plus, _ = t_norm_angle(pr, s + h)
    t_minus, _ = t_norm_angle(pr, s - h)
    return abs(fd.lambda_n - (t_plus - t_minus) / (2.0 * h))

def check_kn_order(
    base: IsoparametricBase,
    pr: Profile,
    s: float,
    h: float,
    tol: float = DEFAULT_TOL
) -> float:
    """
    Observed convergence order of check_kn_ode under halving h,
    infinite when the residual is already exact
    """
    coarse = check_kn_ode(base, pr, s, h, tol)
    fine = check_kn_ode(base, pr, s, h / 2.0, tol)
    if fine == 0.0 or coarse == 0.0:
        return math.inf

    return math.log2(coarse / fine)
