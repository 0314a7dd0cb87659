"""
Module implements the space form Q^n(eps) and its eps-trigonometry
"""

from __future__ import annotations

import math

import numpy as np
import pydantic

from .errors import DomainError, InputShapeError


# Comparison tolerance shared by every module, overridable per call
DEFAULT_TOL = 1e-9


class SpaceForm(pydantic.BaseModel):
    """
    The ambient factor Q^n(eps): the unit sphere S^n for eps=+1,
    the hyperbolic space H^n for eps=-1
    """
    model_config = pydantic.ConfigDict(frozen=True)

    epsilon: int
    n: int

    @pydantic.field_validator("epsilon")
    @classmethod
    def _check_epsilon(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("epsilon must be ±1")
        return value

    @pydantic.field_validator("n")
    @classmethod
    def _check_n(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"n must be >= 2, got {value}")
        return value

    @classmethod
    def create(cls, epsilon: int, n: int) -> SpaceForm:
        """
        Builds a space form, raises DomainError instead of pydantic's errors
        """
        try:
            return cls(epsilon=epsilon, n=n)

        except pydantic.ValidationError as e:
            raise DomainError(e.errors()[0]["msg"].removeprefix("Value error, ")) from e

    @property
    def name(self) -> str:
        return f"{'S' if self.epsilon == 1 else 'H'}^{self.n}"

    @property
    def ambient_dim(self) -> int:
        """
        Dimension of E^{n+2} (resp. L^{n+2}) containing Q^n(eps) x R
        """
        return self.n + 2


def eps_trig(sf: SpaceForm, s: float) -> tuple[float, float]:
    """
    Returns (C_eps(s), S_eps(s)): (cos, sin) on the sphere, (cosh, sinh) on the hyperbolic space
    """
    if sf.epsilon == 1:
        return math.cos(s), math.sin(s)

    return math.cosh(s), math.sinh(s)

def _metric_signs(sf: SpaceForm, dim: int) -> np.ndarray:
    signs = np.ones(dim)
    if sf.epsilon == -1:
        signs[0] = -1.0
    return signs

def ambient_inner(sf: SpaceForm, u, v) -> float:
    """
    Inner product of E^{n+2} (eps=+1) or L^{n+2} (eps=-1)
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    dim = sf.ambient_dim
    if u.shape != (dim,) or v.shape != (dim,):
        raise InputShapeError(
            f"Expected vectors of length {dim}, got shapes {u.shape} and {v.shape}"
        )

    return float(np.sum(_metric_signs(sf, dim) * u * v))

def _pad(sf: SpaceForm, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape == (sf.n + 1,):
        return np.append(x, 0.0)

    if x.shape != (sf.ambient_dim,):
        raise InputShapeError(
            f"Expected a vector of length {sf.n + 1} or {sf.ambient_dim}, got shape {x.shape}"
        )
    return x

def on_space_form(sf: SpaceForm, x) -> float:
    """
    Returns |<x, x> - eps| over the Q^n(eps) coordinates of x
    """
    x = _pad(sf, x).copy()
    x[-1] = 0.0
    return abs(ambient_inner(sf, x, x) - sf.epsilon)

def parallel_point(sf: SpaceForm, x, normal, s: float) -> np.ndarray:
    """
    Point of the parallel hypersurface g_s = C_eps(s) g + S_eps(s) N

    IN:
        x - point of g in the coordinates of Q^n(eps)
        normal - unit normal of g at x, tangent to Q^n(eps)
        s - signed distance along the normal
    """
    c, sn = eps_trig(sf, s)
    return c * _pad(sf, x) + sn * _pad(sf, normal)

def product_point(sf: SpaceForm, x, normal, s: float, height: float) -> np.ndarray:
    """
    Point f(x, s) = g_s(x) + a(s) d_{n+2} of the hypersurface in Q^n(eps) x R
    """
    point = parallel_point(sf, x, normal, s)
    point[-1] = height
    return point
