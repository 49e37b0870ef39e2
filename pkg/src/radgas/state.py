"""Perturbation state (a, u, theta) around the constant background (1, 0, 1).

Density is 1 + a, temperature is 1 + theta, and u is the scalar radial
velocity component (the velocity vector is u(r) * x/|x|), so a and theta
extend evenly across the origin while u extends oddly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np

from .grid import RadialGrid

GAUSSIAN_BUMP = "gaussian-bump"
COMPACT_BUMP = "compact-bump"
ZERO = "zero"
INIT_FAMILIES = (GAUSSIAN_BUMP, COMPACT_BUMP, ZERO)

#: Radius of the polynomial bump used by the compact family.
BUMP_RADIUS = 4.0

#: Radius beyond which exp(-r^2) has decayed below 1e-14 of its peak; used
#: as the effective support radius of the Gaussian family.
GAUSSIAN_SUPPORT_RADIUS = math.sqrt(math.log(1e14))


class StateValidityError(ValueError):
    """Raised when an operation requires a valid state but got a breached one."""


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of the model.

    The gas constant and the specific heat are fixed to 1 (so the effective
    adiabatic index is 2 and the background sound speed is sqrt(2)); the heat
    conductivity kappa is the one exposed knob, kappa = 0 switching off
    conduction entirely.
    """

    kappa: float = 1.0

    R_GAS: ClassVar[float] = 1.0
    C_V: ClassVar[float] = 1.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.kappa) or self.kappa < 0.0:
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")


@dataclass(frozen=True)
class State:
    """Immutable snapshot of the three perturbation fields at time t.

    Construction only enforces shape and finite dtype handling; positivity
    of 1 + a and 1 + theta is reported by :func:`validate` so that a breached
    state can still be returned to the caller for inspection.
    """

    a: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    t: float
    params: PhysParams

    def __post_init__(self) -> None:
        for name in ("a", "u", "theta"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be a 1-D array, got ndim={arr.ndim}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.u.shape != self.a.shape or self.theta.shape != self.a.shape:
            raise ValueError(
                "field shapes differ: "
                f"a={self.a.shape}, u={self.u.shape}, theta={self.theta.shape}"
            )
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_cells(self) -> int:
        return self.a.shape[0]

    def with_fields(
        self,
        a: np.ndarray | None = None,
        u: np.ndarray | None = None,
        theta: np.ndarray | None = None,
        t: float | None = None,
    ) -> "State":
        """Return a copy with the given fields replaced."""
        return replace(
            self,
            a=self.a if a is None else a,
            u=self.u if u is None else u,
            theta=self.theta if theta is None else theta,
            t=self.t if t is None else t,
        )


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a positivity/finiteness check of a state.

    ``min_density`` and ``min_temperature`` are min(1 + a) and min(1 + theta).
    """

    ok: bool
    min_density: float
    min_temperature: float
    all_finite: bool


def validate(state: State) -> ValidityReport:
    """Check positivity of density and temperature and finiteness of fields."""
    finite = bool(
        np.isfinite(state.a).all()
        and np.isfinite(state.u).all()
        and np.isfinite(state.theta).all()
    )
    if finite:
        min_density = float(1.0 + state.a.min())
        min_temperature = float(1.0 + state.theta.min())
    else:
        min_density = float("nan")
        min_temperature = float("nan")
    ok = finite and min_density > 0.0 and min_temperature > 0.0
    return ValidityReport(
        ok=ok,
        min_density=min_density,
        min_temperature=min_temperature,
        all_finite=finite,
    )


def support_radius(family: str, eps: float = 0.0) -> float:
    """Effective support radius of an initial-data family.

    For the Gaussian family the cutoff is relative (where the profile drops
    to 1e-14 of its amplitude), so the radius does not depend on eps.
    """
    if family == GAUSSIAN_BUMP:
        return GAUSSIAN_SUPPORT_RADIUS
    if family == COMPACT_BUMP:
        return BUMP_RADIUS
    if family == ZERO:
        return 0.0
    raise ValueError(f"unknown init family {family!r}; expected one of {INIT_FAMILIES}")


def make_initial_state(
    grid: RadialGrid,
    family: str,
    eps: float,
    params: PhysParams | None = None,
) -> State:
    """Build initial data of the given family and amplitude at t = 0.

    Families
    --------
    gaussian-bump : a = theta = eps * exp(-r^2), u = eps * r * exp(-r^2)
    compact-bump  : same roles with a C^2 polynomial bump of radius BUMP_RADIUS
    zero          : all fields identically zero

    eps must lie in [0, 1) so the initial density and temperature stay
    positive with a uniform margin.
    """
    eps = float(eps)
    if not np.isfinite(eps) or eps < 0.0 or eps >= 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    if family not in INIT_FAMILIES:
        raise ValueError(
            f"unknown init family {family!r}; expected one of {INIT_FAMILIES}"
        )
    if params is None:
        params = PhysParams()

    r = grid.r
    if family == GAUSSIAN_BUMP:
        profile = np.exp(-(r**2))
        a = eps * profile
        u = eps * r * profile
        theta = eps * profile
    elif family == COMPACT_BUMP:
        s = r / BUMP_RADIUS
        shape = np.where(s < 1.0, (1.0 - np.minimum(s, 1.0) ** 2) ** 3, 0.0)
        a = eps * shape
        u = eps * s * shape
        theta = eps * shape
    else:
        a = np.zeros_like(r)
        u = np.zeros_like(r)
        theta = np.zeros_like(r)
    return State(a=a, u=u, theta=theta, t=0.0, params=params)
