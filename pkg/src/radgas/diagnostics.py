"""Run diagnostics: conserved integrals, entropy, Lyapunov functional,
shock indicator and Sobolev-type energy accumulators.

All integrals use the spherical volume weights of the grid, so a discrete
sum stands in for integration over R^3.  Derivative norms use repeated
radial derivatives with parity tracking; the Cartesian gradient norm of a
radial function is approximated by the radial-derivative norm under the
same 4 pi r^2 measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import RadialGrid
from .operators import EVEN, ODD, derivative_array, flip_parity
from .state import State, StateValidityError, validate

MAX_DIAG_ORDER = 6


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of run diagnostics at time t.

    e_k1[k] and e_k2[k-1] are the order-k energy accumulators; grad_theta_sq
    is the instantaneous squared gradient norm of theta (it feeds the
    dissipation accumulators and is not part of the CSV column set).
    """

    t: float
    mass: float
    momentum_scalar: float
    energy: float
    entropy_total: float
    entropy_dissipation: float
    lyapunov: float
    shock_indicator: float
    e_k1: tuple[float, ...]
    e_k2: tuple[float, ...]
    grad_theta_sq: float


class DiagnosticsSink:
    """Receiver of diagnostics records during a run.  Base class is a no-op."""

    def on_record(self, record: DiagnosticsRecord) -> None:
        pass

    def on_breach(self, state: State, report) -> None:
        pass


class ListSink(DiagnosticsSink):
    """Collect records in memory (used by tests and the sweep driver)."""

    def __init__(self) -> None:
        self.records: list[DiagnosticsRecord] = []
        self.breach_state: State | None = None

    def on_record(self, record: DiagnosticsRecord) -> None:
        self.records.append(record)

    def on_breach(self, state: State, report) -> None:
        self.breach_state = state


def conserved_quantities(state: State, grid: RadialGrid) -> tuple[float, float, float]:
    """(mass, momentum_scalar, energy) integrals of the perturbation.

    mass = int a dx and energy = int ((1+a) u^2 / 2 + a theta + theta) dx are
    conserved by the dynamics; momentum_scalar = int (1+a) u dx is the radial
    projection of the momentum density and genuinely evolves (the vector
    momentum vanishes by symmetry), so it serves as an accuracy probe rather
    than a conservation law.
    """
    w = grid.w
    a = state.a
    u = state.u
    theta = state.theta
    mass = float(w @ a)
    momentum = float(w @ ((1.0 + a) * u))
    energy = float(w @ ((1.0 + a) * (u**2) / 2.0 + a * theta + theta))
    return mass, momentum, energy


def entropy_functionals(state: State, grid: RadialGrid) -> tuple[float, float]:
    """(entropy_total, entropy_dissipation).

    entropy_total = int (1+a) ln((1+theta)/(1+a)) dx and
    entropy_dissipation = int |grad theta|^2 / (1+theta)^2 dx >= 0.
    With conduction switched on, entropy_total is nondecreasing and its
    production rate is kappa times the dissipation integral.
    """
    report = validate(state)
    if not report.ok:
        raise StateValidityError("entropy functionals require a valid state")
    w = grid.w
    s_total = float(w @ ((1.0 + state.a) * (np.log1p(state.theta) - np.log1p(state.a))))
    dtheta = derivative_array(state.theta, EVEN, grid.dr)
    dissipation = float(w @ (dtheta**2 / (1.0 + state.theta) ** 2))
    return s_total, dissipation


def lyapunov_functional(state: State, grid: RadialGrid) -> float:
    """Nonnegative combination of relative entropy and conserved integrals.

    L = int [(1+a) ln((1+a)/(1+theta)) + (1+a) u^2/2 - a + a theta + theta] dx
    decreases exactly at the entropy-dissipation rate, vanishes on the
    background, and is quadratic to leading order in the field amplitudes.
    """
    report = validate(state)
    if not report.ok:
        raise StateValidityError("the Lyapunov functional requires a valid state")
    a = state.a
    u = state.u
    theta = state.theta
    integrand = (
        (1.0 + a) * (np.log1p(a) - np.log1p(theta))
        + (1.0 + a) * u**2 / 2.0
        - a
        + a * theta
        + theta
    )
    return float(grid.w @ integrand)


def taylor_remainder(a, theta):
    """Cubic remainder of ln((1+a)/(1+theta)) after its quadratic expansion.

    r(a, theta) = ln((1+a)/(1+theta)) - (a - theta - a^2/2 + theta^2/2),
    computed as a difference of single-variable terms so that the exchange
    antisymmetry r(a, theta) = -r(theta, a) holds exactly in floating point.
    On |a|, |theta| <= 0.3 the remainder obeys |r| <= 2 (|a|^3 + |theta|^3).
    Accepts scalars or arrays elementwise.
    """
    a = np.asarray(a, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(1.0 + a <= 0.0) or np.any(1.0 + theta <= 0.0):
        raise ValueError("taylor_remainder requires 1 + a > 0 and 1 + theta > 0")
    diff = a - theta
    out = (np.log1p(a) - np.log1p(theta)) - diff + diff * (a + theta) / 2.0
    if out.ndim == 0:
        return float(out)
    return out


def shock_indicator(state: State, grid: RadialGrid) -> float:
    """Sup norm of the velocity gradient, max_i |du/dr|."""
    du = derivative_array(state.u, ODD, grid.dr)
    return float(np.max(np.abs(du)))


def _norm_sq(values: np.ndarray, w: np.ndarray) -> float:
    return float(w @ (values**2))


def _derivative_chain(
    values: np.ndarray, parity: str, grid: RadialGrid, orders: int
) -> list[np.ndarray]:
    """[f, f', f'', ...] up to the requested number of derivatives."""
    chain = [values]
    p = parity
    for _ in range(orders):
        chain.append(derivative_array(chain[-1], p, grid.dr))
        p = flip_parity(p)
    return chain


class SobolevAccumulator:
    """Running Sobolev-energy accumulators over the samples it is fed.

    For each derivative order j <= K the accumulator tracks

      sup_j:    running sup of |d^j a|^2 + |d^j u|^2 + |d^j theta|^2,
      int_th_j: trapezoid-in-time integral of |d^(j+1) theta|^2,
      int_au_j: trapezoid-in-time integral of |d^(j+1) a|^2 + |d^(j+1) u|^2
                (orders j <= K-1 only),

    from which e_k1[k] = sum_{j<=k} (sup_j + int_th_j) and
    e_k2[k] = sum_{j<k} int_au_j.  Samples must arrive in nondecreasing
    time order; all accumulators are nondecreasing in time.
    """

    def __init__(self, grid: RadialGrid, max_k: int) -> None:
        max_k = int(max_k)
        if max_k < 0 or max_k > MAX_DIAG_ORDER:
            raise ValueError(
                f"max_k must lie in [0, {MAX_DIAG_ORDER}], got {max_k}"
            )
        self.grid = grid
        self.max_k = max_k
        self._sup = np.zeros(max_k + 1)
        self._int_theta = np.zeros(max_k + 1)
        self._int_au = np.zeros(max_k) if max_k > 0 else np.zeros(0)
        self._prev_t: float | None = None
        self._prev_theta_rates = np.zeros(max_k + 1)
        self._prev_au_rates = np.zeros(max_k) if max_k > 0 else np.zeros(0)
        self.grad_theta_sq = 0.0

    def add(self, state: State) -> None:
        grid = self.grid
        w = grid.w
        k = self.max_k
        a_chain = _derivative_chain(state.a, EVEN, grid, k + 1)
        u_chain = _derivative_chain(state.u, ODD, grid, k + 1)
        th_chain = _derivative_chain(state.theta, EVEN, grid, k + 2)

        trip = np.array(
            [
                _norm_sq(a_chain[j], w)
                + _norm_sq(u_chain[j], w)
                + _norm_sq(th_chain[j], w)
                for j in range(k + 1)
            ]
        )
        theta_rates = np.array([_norm_sq(th_chain[j + 1], w) for j in range(k + 1)])
        au_rates = np.array(
            [_norm_sq(a_chain[j + 1], w) + _norm_sq(u_chain[j + 1], w) for j in range(k)]
        )

        t = float(state.t)
        if self._prev_t is None:
            self._sup = trip
        else:
            dt = t - self._prev_t
            if dt < 0.0:
                raise ValueError("samples must arrive in nondecreasing time order")
            np.maximum(self._sup, trip, out=self._sup)
            self._int_theta += 0.5 * dt * (self._prev_theta_rates + theta_rates)
            if k > 0:
                self._int_au += 0.5 * dt * (self._prev_au_rates + au_rates)
        self._prev_t = t
        self._prev_theta_rates = theta_rates
        self._prev_au_rates = au_rates
        self.grad_theta_sq = float(theta_rates[0])

    @property
    def e_k1(self) -> tuple[float, ...]:
        totals = np.cumsum(self._sup + self._int_theta)
        return tuple(float(v) for v in totals)

    @property
    def e_k2(self) -> tuple[float, ...]:
        totals = np.cumsum(self._int_au)
        return tuple(float(v) for v in totals)


def sobolev_energies(
    history: list[State] | tuple[State, ...],
    grid: RadialGrid,
    max_k: int,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Fold a time-ordered state history through a fresh accumulator.

    Returns (e_k1, e_k2) with e_k1 indexed by k = 0..max_k and e_k2 by
    k = 1..max_k.
    """
    acc = SobolevAccumulator(grid, max_k)
    for state in history:
        acc.add(state)
    return acc.e_k1, acc.e_k2


@dataclass
class DiagnosticsCollector:
    """Produce DiagnosticsRecord rows for a run, owning the accumulators."""

    grid: RadialGrid
    max_k: int
    _acc: SobolevAccumulator = field(init=False)

    def __post_init__(self) -> None:
        self._acc = SobolevAccumulator(self.grid, self.max_k)

    def update(self, state: State) -> DiagnosticsRecord:
        grid = self.grid
        self._acc.add(state)
        mass, momentum, energy = conserved_quantities(state, grid)
        s_total, dissipation = entropy_functionals(state, grid)
        lyap = lyapunov_functional(state, grid)
        indicator = shock_indicator(state, grid)
        return DiagnosticsRecord(
            t=float(state.t),
            mass=mass,
            momentum_scalar=momentum,
            energy=energy,
            entropy_total=s_total,
            entropy_dissipation=dissipation,
            lyapunov=lyap,
            shock_indicator=indicator,
            e_k1=self._acc.e_k1,
            e_k2=self._acc.e_k2,
            grad_theta_sq=self._acc.grad_theta_sq,
        )
