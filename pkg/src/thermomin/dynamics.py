"""Two atoms in independent thermal reservoirs.

Initial-state family, exact propagator, a fixed-step Runge-Kutta
integrator for the thermal master equation, and extraction of the
entanglement sudden-death time. All public time arguments are in scaled
units gamma*t; the decay rate gamma enters only the raw generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, sqrt

import numpy as np

from .qstate import ID2, hermitian_eigensystem, validate_state

INTEGRATOR_PSD_SLACK = -1e-8
DEFAULT_STEPS_PER_UNIT_TIME = 100
SUDDEN_DEATH_HORIZON = 50.0
SUDDEN_DEATH_XTOL = 1e-9

SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)

# Raising/lowering operators of each atom on the joint space.
_LADDERS = (
    (np.kron(SIGMA_PLUS, ID2), np.kron(SIGMA_MINUS, ID2)),
    (np.kron(ID2, SIGMA_PLUS), np.kron(ID2, SIGMA_MINUS)),
)


class StepTooLarge(RuntimeError):
    """An integration step produced a state outside the positivity slack."""


class NoBracket(RuntimeError):
    """Concurrence stays positive over the whole search horizon."""


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: both reservoirs share the same gamma and n.

    n is the mean thermal photon number (>= 0), r the weight of the
    maximally entangled component in the initial state (in [0, 1]), and
    gamma the spontaneous emission rate (> 0).
    """

    n: float
    r: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma > 0.0):
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not (self.n >= 0.0):
            raise ValueError(f"n must be >= 0, got {self.n}")
        if not (0.0 <= self.r <= 1.0):
            raise ValueError(f"r must lie in [0, 1], got {self.r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Scaled times gamma*t and the matching sequence of states."""

    times: np.ndarray
    states: list

    def __len__(self):
        return len(self.times)


def initial_state(p: ModelParams) -> np.ndarray:
    """(1-r)|11><11| + r|phi+><phi+| with |phi+> = (|01> + |10>)/sqrt(2)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0 - p.r
    rho[1, 1] = rho[2, 2] = p.r / 2.0
    rho[1, 2] = rho[2, 1] = p.r / 2.0
    return validate_state(rho)


def _analytic_elements(p: ModelParams, t: float):
    """Nonzero elements (rho11, rho22, rho44, rho23) at scaled time t."""
    n, r = p.n, p.r
    denom = 2.0 * (2.0 * n + 1.0) ** 2
    b = r * (2.0 * n + 1.0) - 2.0 * (n + 1.0)
    a = r * (n + 1.0) * (4.0 * n + 2.0) - 2.0 * (n + 1.0) ** 2
    e1 = exp(-(2.0 * n + 1.0) * t)
    e2 = e1 * e1
    rho11 = (2.0 * n * n - 2.0 * n * b * e1 - a * e2) / denom
    rho22 = (2.0 * n * (n + 1.0) - b * e1 + a * e2) / denom
    rho44 = (2.0 * (n + 1.0) ** 2 + 2.0 * (n + 1.0) * b * e1 - a * e2) / denom
    rho23 = 0.5 * r * e1
    return rho11, rho22, rho44, rho23


def analytic_state_at(p: ModelParams, t: float) -> np.ndarray:
    """Exact solution of the thermal master equation at scaled time t >= 0.

    The populations relax toward the thermal product values n^2/(2n+1)^2,
    n(n+1)/(2n+1)^2 (twice) and (n+1)^2/(2n+1)^2 while the single
    coherence decays as rho23(t) = (r/2) exp(-(2n+1) t).
    """
    if t < 0.0:
        raise ValueError(f"scaled time must be >= 0, got {t}")
    rho11, rho22, rho44, rho23 = _analytic_elements(p, t)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho11
    rho[1, 1] = rho[2, 2] = rho22
    rho[3, 3] = rho44
    rho[1, 2] = rho[2, 1] = rho23
    return validate_state(rho)


def lindblad_rhs(p: ModelParams, rho) -> np.ndarray:
    """Thermal generator: d(rho)/dt for two independent reservoirs.

    Each atom contributes a decay channel at rate gamma*(n+1) and an
    excitation channel at rate gamma*n, in Lindblad form; the result is
    Hermitian and traceless.
    """
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    down = 0.5 * p.gamma * (p.n + 1.0)
    up = 0.5 * p.gamma * p.n
    for raise_op, lower_op in _LADDERS:
        num = raise_op @ lower_op
        nlo = lower_op @ raise_op
        out += down * (2.0 * lower_op @ rho @ raise_op - num @ rho - rho @ num)
        out += up * (2.0 * raise_op @ rho @ lower_op - nlo @ rho - rho @ nlo)
    return out


def _rhs_superoperator(p: ModelParams) -> np.ndarray:
    """16x16 matrix acting on row-major vectorized states; built from lindblad_rhs by linearity."""
    sup = np.zeros((16, 16), dtype=complex)
    for k in range(16):
        basis = np.zeros((4, 4), dtype=complex)
        basis[k // 4, k % 4] = 1.0
        sup[:, k] = lindblad_rhs(p, basis).reshape(-1)
    return sup


def integrate(p: ModelParams, t_max: float, steps: int | None = None) -> Trajectory:
    """Classical fixed-step RK4 trajectory over scaled time [0, t_max].

    steps is the number of RK4 steps (default 100 per unit of scaled
    time). Every stored state is re-validated: symmetrized, trace
    renormalized, and checked against the integrator positivity slack
    (StepTooLarge beyond -1e-8).
    """
    if not (t_max > 0.0):
        raise ValueError(f"t_max must be > 0, got {t_max}")
    if steps is None:
        steps = max(1, round(DEFAULT_STEPS_PER_UNIT_TIME * t_max))
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    # Work in scaled time: d(rho)/d(gamma t) = rhs/gamma.
    sup = _rhs_superoperator(p) / p.gamma
    h = t_max / steps
    times = np.linspace(0.0, t_max, steps + 1)
    rho = initial_state(p)
    states = [rho]
    v = rho.reshape(-1).copy()
    for k in range(steps):
        k1 = sup @ v
        k2 = sup @ (v + 0.5 * h * k1)
        k3 = sup @ (v + 0.5 * h * k2)
        k4 = sup @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = v.reshape(4, 4)
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
        evals, _ = hermitian_eigensystem(rho)
        if evals[-1] < INTEGRATOR_PSD_SLACK:
            raise StepTooLarge(
                f"state at gamma*t = {times[k + 1]:.6f} has eigenvalue {evals[-1]:.3e} "
                f"below slack {INTEGRATOR_PSD_SLACK:.0e}; reduce the step size"
            )
        states.append(rho)
        v = rho.reshape(-1).copy()
    return Trajectory(times=times, states=states)


def _entanglement_gap(p: ModelParams, t: float) -> float:
    """|rho23| - sqrt(rho11 rho44); concurrence is positive iff this is."""
    rho11, _, rho44, rho23 = _analytic_elements(p, t)
    return abs(rho23) - sqrt(max(rho11 * rho44, 0.0))


def sudden_death_time(p: ModelParams, scan_step: float = 0.005):
    """Smallest scaled time where the concurrence of the exact solution hits zero.

    Returns None when the initial state is already unentangled (r = 0).
    Raises NoBracket when the concurrence stays positive over the whole
    search horizon (the vacuum-reservoir case n = 0, r near 1). The root
    is located by a linear scan followed by bisection to 1e-9.
    """
    if _entanglement_gap(p, 0.0) <= 0.0:
        return None
    lo = 0.0
    hi = None
    t = scan_step
    while t <= SUDDEN_DEATH_HORIZON + 1e-12:
        if _entanglement_gap(p, t) <= 0.0:
            hi = t
            break
        lo = t
        t += scan_step
    if hi is None:
        raise NoBracket(
            f"concurrence stays positive up to gamma*t = {SUDDEN_DEATH_HORIZON}; "
            "no sudden death for these parameters"
        )
    while hi - lo > SUDDEN_DEATH_XTOL:
        mid = 0.5 * (lo + hi)
        if _entanglement_gap(p, mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
