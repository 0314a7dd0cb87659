"""
Module implements the catalog of isoparametric hypersurfaces g of Q^n(eps)
and the transport of their principal curvatures along the parallel family g_s
"""

from __future__ import annotations

import enum
import itertools
import math
from typing import Any

import pydantic

from . import log_utils
from .ambient import DEFAULT_TOL, SpaceForm, eps_trig
from .errors import DomainError, FocalPointError


class BaseKind(str, enum.Enum):
    TOTALLY_GEODESIC = "totally_geodesic"
    GEODESIC_SPHERE = "geodesic_sphere"
    HOROSPHERE = "horosphere"
    EQUIDISTANT = "equidistant"
    CLIFFORD_PRODUCT = "clifford_product"
    HYPERBOLIC_CYLINDER = "hyperbolic_cylinder"
    CUSTOM = "custom"


# Kinds that only exist in one of the space forms
_KIND_EPSILON = {
    BaseKind.HOROSPHERE: -1,
    BaseKind.EQUIDISTANT: -1,
    BaseKind.HYPERBOLIC_CYLINDER: -1,
    BaseKind.CLIFFORD_PRODUCT: 1,
}


class IsoparametricBase(pydantic.BaseModel):
    """
    A hypersurface g of Q^n(eps) given by its distinct principal curvatures
    and their multiplicities
    """
    model_config = pydantic.ConfigDict(frozen=True)

    sf: SpaceForm
    kind: BaseKind
    params: dict[str, float] = {}
    orientation: int = 1
    curvatures: tuple[tuple[float, int], ...]

    @pydantic.field_validator("orientation")
    @classmethod
    def _check_orientation(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("orientation must be ±1")
        return value

    @pydantic.model_validator(mode="after")
    def _check_curvatures(self) -> IsoparametricBase:
        if not self.curvatures:
            raise ValueError("a base needs at least one principal curvature")

        if any(m < 1 for _, m in self.curvatures):
            raise ValueError("multiplicities must be >= 1")

        total = sum(m for _, m in self.curvatures)
        if total != self.sf.n - 1:
            raise ValueError(
                f"multiplicities must sum to n-1={self.sf.n - 1}, got {total}"
            )

        for (a, _), (b, _) in itertools.combinations(self.curvatures, 2):
            if abs(a - b) < DEFAULT_TOL:
                raise ValueError(f"distinct curvatures coincide: {a} and {b}")

        return self

    @property
    def d(self) -> int:
        """
        Number of distinct principal curvatures
        """
        return len(self.curvatures)

    def label(self) -> str:
        params = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.kind.value}({params})" if params else self.kind.value


def _require(condition: bool, msg: str):
    if not condition:
        raise DomainError(msg)

def _catalog_curvatures(
    sf: SpaceForm,
    kind: BaseKind,
    r: float|None,
    p: int|None,
    q: int|None
) -> list[tuple[float, int]]:
    n1 = sf.n - 1
    eps = sf.epsilon

    if kind is BaseKind.TOTALLY_GEODESIC:
        return [(0.0, n1)]

    if kind is BaseKind.HOROSPHERE:
        return [(1.0, n1)]

    _require(r is not None, f"'{kind.value}' requires the parameter r")
    assert r is not None

    if kind is BaseKind.GEODESIC_SPHERE:
        _require(r > 0, f"geodesic sphere radius must be > 0, got {r}")
        if eps == 1:
            _require(r < math.pi, f"geodesic sphere radius must be < pi in S^n, got {r}")
            return [(1.0 / math.tan(r), n1)]
        return [(1.0 / math.tanh(r), n1)]

    if kind is BaseKind.EQUIDISTANT:
        _require(r > 0, f"equidistant distance must be > 0, got {r}")
        return [(math.tanh(r), n1)]

    _require(
        p is not None and q is not None,
        f"'{kind.value}' requires the multiplicities p and q"
    )
    assert p is not None and q is not None
    _require(p >= 1 and q >= 1, f"multiplicities must be >= 1, got p={p}, q={q}")
    _require(p + q == n1, f"p + q must equal n-1={n1}, got {p + q}")

    if kind is BaseKind.CLIFFORD_PRODUCT:
        _require(0 < r < math.pi / 2, f"Clifford angle must lie in (0, pi/2), got {r}")
        return [(-math.tan(r), p), (1.0 / math.tan(r), q)]

    # Tube around a totally geodesic H^q
    _require(r > 0, f"tube radius must be > 0, got {r}")
    return [(1.0 / math.tanh(r), p), (math.tanh(r), q)]

def make_base(
    sf: SpaceForm,
    kind: BaseKind|str,
    *,
    r: float|None = None,
    p: int|None = None,
    q: int|None = None,
    orientation: int = 1,
    curvatures: list[tuple[float, int]]|None = None,
    tol: float = DEFAULT_TOL
) -> IsoparametricBase:
    """
    Builds a base hypersurface from the catalog

    IN:
        sf - the space form containing the base
        kind - catalog entry
        r - radius/distance/angle parameter for the kinds that need one
        p, q - multiplicities for the two-curvature kinds
        orientation - -1 reverses the unit normal (flips every curvature)
        curvatures - explicit (curvature, multiplicity) list, only for CUSTOM
        tol - Cartan identity tolerance for catalog kinds

    OUT:
        IsoparametricBase
    """
    try:
        kind = BaseKind(kind)

    except ValueError as e:
        raise DomainError(f"Unknown base kind '{kind}'") from e

    if (required_eps := _KIND_EPSILON.get(kind)) is not None and required_eps != sf.epsilon:
        raise DomainError(f"'{kind.value}' does not exist in {sf.name}")

    if kind is BaseKind.CUSTOM:
        _require(curvatures is not None, "a custom base requires explicit curvatures")
        assert curvatures is not None
        raw = [(float(lam), int(m)) for lam, m in curvatures]

    else:
        _require(curvatures is None, f"'{kind.value}' curvatures come from the catalog")
        raw = _catalog_curvatures(sf, kind, r, p, q)

    params: dict[str, Any] = {
        k: v for k, v in (("r", r), ("p", p), ("q", q)) if v is not None
    }
    try:
        base = IsoparametricBase(
            sf=sf,
            kind=kind,
            params=params,
            orientation=orientation,
            curvatures=tuple((orientation * lam, m) for lam, m in raw)
        )

    except pydantic.ValidationError as e:
        raise DomainError(e.errors()[0]["msg"].removeprefix("Value error, ")) from e

    if kind is not BaseKind.CUSTOM and not is_isoparametric(base, tol):
        raise DomainError(f"Catalog base {base.label()} violates Cartan's identity")

    log_utils.logger.debug(f"Built base {base.label()} in {sf.name}: {base.curvatures}")
    return base

def parallel_curvature(lam_g: float, sf: SpaceForm, s: float, tol: float = DEFAULT_TOL) -> float:
    """
    Principal curvature of the parallel g_s corresponding to the curvature lam_g of g
    """
    c, sn = eps_trig(sf, s)
    denominator = c - lam_g * sn
    if abs(denominator) < tol:
        raise FocalPointError(
            f"Focal point at s={s!r} for the principal curvature {lam_g!r}",
            s=s,
            curvature=lam_g
        )

    return (sf.epsilon * sn + lam_g * c) / denominator

def parallel_curvature_derivative(lam_s: float, sf: SpaceForm) -> float:
    """
    d(lam^s)/ds expressed through lam^s itself, the family obeys a Riccati equation
    """
    return sf.epsilon + lam_s * lam_s

def parallel_base(base: IsoparametricBase, s: float, tol: float = DEFAULT_TOL) -> list[tuple[float, int]]:
    """
    Returns the (curvature, multiplicity) list of the parallel g_s
    """
    return [
        (parallel_curvature(lam, base.sf, s, tol), m)
        for lam, m in base.curvatures
    ]

def cartan_residuals(base: IsoparametricBase, tol: float = DEFAULT_TOL) -> list[float]:
    """
    Evaluates the left side of Cartan's identity for each distinct curvature,
    vacuous (empty) for d=1
    """
    if base.d == 1:
        return []

    eps = base.sf.epsilon
    rv = []
    for i, (lam_i, _) in enumerate(base.curvatures):
        total = 0.0
        for j, (lam_j, m_j) in enumerate(base.curvatures):
            if i == j:
                continue

            if abs(lam_i - lam_j) < tol:
                raise DomainError(f"Distinct curvatures coincide: {lam_i} and {lam_j}")

            total += m_j * (eps + lam_i * lam_j) / (lam_i - lam_j)

        rv.append(total)

    return rv

def is_isoparametric(base: IsoparametricBase, tol: float = DEFAULT_TOL) -> bool:
    """
    Checks whether the curvature list is compatible with Cartan's identity
    """
    return all(abs(res) < tol for res in cartan_residuals(base, tol))

def mean_curvature_of_parallel(base: IsoparametricBase, s: float, tol: float = DEFAULT_TOL) -> float:
    """
    Mean curvature of g_s, depends on s only
    """
    total = sum(m * lam_s for lam_s, m in parallel_base(base, s, tol))
    return total / (base.sf.n - 1)

def cartan_product_invariant(base: IsoparametricBase, s: float, tol: float = DEFAULT_TOL) -> float:
    """
    Returns |lam_1^s lam_2^s + eps| for a two-curvature base,
    zero for every s once the base satisfies lam_1^g lam_2^g = -eps
    """
    if base.d != 2:
        raise DomainError(f"Expected two distinct curvatures, got {base.d}")

    (lam_1, _), (lam_2, _) = parallel_base(base, s, tol)
    return abs(lam_1 * lam_2 + base.sf.epsilon)
