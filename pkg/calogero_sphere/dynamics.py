"""
Fixed-step trajectory integration of the full and reduced Calogero systems.

The Hamiltonians are kinetic-plus-potential separable, so the default integrator is
kick-drift-kick leapfrog. A classical RK4 integrator is kept as a non-symplectic
reference for drift comparisons.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from calogero_sphere.charts import polar_from_reduced
from calogero_sphere.errors import (
    IntegrationAbortedError,
    InvalidInputError,
    InvalidParameterError,
    SingularConfigurationError,
)
from calogero_sphere.geometry import ModelParams, com_split, root_system
from calogero_sphere.hamiltonians import angular_integral, energy_full, energy_reduced
from calogero_sphere.integrals import integral_F, integral_K
from calogero_sphere.states import PhaseState, ReducedPhaseState

logger = logging.getLogger(__name__)

Integrator = Literal["leapfrog", "rk4_reference"]
INTEGRATORS: Tuple[Integrator, ...] = ("leapfrog", "rk4_reference")

State = Union[PhaseState, ReducedPhaseState]

COLLISION_GUARD = 1e-8
REL_DRIFT_FLOOR = 1e-12

MONITORS: Tuple[str, ...] = (
    "h_reduced",
    "i_angular",
    "f_integral",
    "k_integral",
    "h_full",
    "kinetic",
)
N3_ONLY_MONITORS = ("f_integral", "k_integral")


@dataclass(frozen=True, eq=False)
class TrajectorySample:
    """One recorded point of a trajectory."""

    t: float
    step: int
    state: State
    observables: Dict[str, float]


@dataclass(eq=False)
class Trajectory:
    """
    Recorded samples of an integration run.

    Attributes:
        samples: Samples every record_stride steps, starting with the initial state
        dt: Time step
        integrator: "leapfrog" or "rk4_reference"
        record_stride: Steps between samples
        final_state: State after the last completed step
        final_time: Time of final_state
    """

    dt: float
    integrator: Integrator
    record_stride: int
    samples: List[TrajectorySample] = field(default_factory=list)
    final_state: Optional[State] = None
    final_time: float = 0.0

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def series(self, name: str) -> np.ndarray:
        """
        Values of one monitored observable across the samples.

        Raises:
            InvalidInputError: If a sample lacks the observable
        """
        try:
            return np.array([s.observables[name] for s in self.samples])
        except KeyError as e:
            raise InvalidInputError(f"Observable {name!r} was not monitored") from e

    def monitored(self) -> List[str]:
        if not self.samples:
            return []
        return list(self.samples[0].observables)


@dataclass(frozen=True)
class DriftStats:
    max_abs_drift: float
    max_rel_drift: float


class _CollisionHit(Exception):
    def __init__(self, pair: Tuple[int, int], value: float):
        super().__init__(pair, value)
        self.pair = pair
        self.value = value


class _SeparableSystem:
    """q'' = force(q) for the lab-frame or reduced Calogero Hamiltonian."""

    def __init__(self, state0: State, params: ModelParams):
        self.params = params
        self.g = params.coupling
        self.rs = root_system(params.n_particles)
        self.b = self.rs.matrix
        self.full = isinstance(state0, PhaseState)
        if self.full:
            size = state0.n_particles
            expected = params.n_particles
            self._pairs = np.triu_indices(expected, k=1)
        else:
            size = state0.dimension
            expected = params.n_particles - 1
        if size != expected:
            raise InvalidInputError(
                f"Initial state has size {size}, expected {expected} for N={params.n_particles}"
            )

    def projections(self, q: np.ndarray) -> np.ndarray:
        """b^a . y for every pair; in the lab frame (x_i - x_j)/sqrt(2)."""
        if self.full:
            return (q[self._pairs[0]] - q[self._pairs[1]]) / math.sqrt(2.0)
        return self.b @ q

    def guard(self, q: np.ndarray) -> Optional[Tuple[Tuple[int, int], float]]:
        if self.g == 0:
            return None
        s = self.projections(q)
        k = int(np.argmin(np.abs(s)))
        if abs(s[k]) < COLLISION_GUARD:
            return self.rs.entries[k].pair, float(s[k])
        return None

    def force(self, q: np.ndarray) -> np.ndarray:
        if self.g == 0:
            return np.zeros_like(q)
        if self.full:
            diff = q[:, None] - q[None, :]
            np.fill_diagonal(diff, np.inf)
            return 2.0 * self.g * np.sum(1.0 / diff**3, axis=1)
        s = self.b @ q
        return self.g * (self.b.T @ (1.0 / s**3))

    def checked_force(self, q: np.ndarray) -> np.ndarray:
        """Force at q, raising _CollisionHit first if q is inside the guard."""
        hit = self.guard(q)
        if hit is not None:
            raise _CollisionHit(*hit)
        return self.force(q)

    def make_state(self, q: np.ndarray, p: np.ndarray) -> State:
        if self.full:
            return PhaseState(x=q.copy(), p=p.copy())
        return ReducedPhaseState(y=q.copy(), py=p.copy())


def _split(state: State) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(state, PhaseState):
        return state.x.copy(), state.p.copy()
    return state.y.copy(), state.py.copy()


def leapfrog_step(
    q: np.ndarray,
    p: np.ndarray,
    dt: float,
    force: Callable[[np.ndarray], np.ndarray],
    f0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    One kick-drift-kick step.

    Returns:
        Tuple of (q, p, force at the new q) so the next step can reuse the force
    """
    f0 = force(q) if f0 is None else f0
    p_half = p + 0.5 * dt * f0
    q_new = q + dt * p_half
    f1 = force(q_new)
    return q_new, p_half + 0.5 * dt * f1, f1


def rk4_step(
    q: np.ndarray, p: np.ndarray, dt: float, force: Callable[[np.ndarray], np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """One classical Runge-Kutta step of q' = p, p' = force(q)."""
    k1q, k1p = p, force(q)
    k2q, k2p = p + 0.5 * dt * k1p, force(q + 0.5 * dt * k1q)
    k3q, k3p = p + 0.5 * dt * k2p, force(q + 0.5 * dt * k2q)
    k4q, k4p = p + dt * k3p, force(q + dt * k3q)
    q_new = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    p_new = p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    return q_new, p_new


def _reduced_of(state: State, params: ModelParams) -> ReducedPhaseState:
    if isinstance(state, PhaseState):
        _, _, reduced = com_split(state, params)
        return reduced
    return state


def evaluate_monitors(
    state: State, params: ModelParams, monitors: Sequence[str]
) -> Dict[str, float]:
    """
    Evaluate the named observables at a state.

    h_reduced, i_angular, f_integral and k_integral are computed on the reduced
    (center-of-mass free) part; f/k use the polar chart and need N=3.
    """
    g = params.coupling
    rs = root_system(params.n_particles)
    reduced = _reduced_of(state, params)
    values: Dict[str, float] = {}
    polar = None
    for name in monitors:
        if name == "h_reduced":
            values[name] = energy_reduced(reduced, rs, g)
        elif name == "i_angular":
            values[name] = angular_integral(reduced, rs, g)
        elif name in N3_ONLY_MONITORS:
            if polar is None:
                polar = polar_from_reduced(reduced)
            values[name] = integral_F(polar, g) if name == "f_integral" else integral_K(polar, g)
        elif name == "h_full":
            if isinstance(state, PhaseState):
                values[name] = energy_full(state, params)
            else:
                values[name] = energy_reduced(reduced, rs, g)
        elif name == "kinetic":
            _, p = _split(state)
            values[name] = 0.5 * float(p @ p)
    return values


def default_monitors(params: ModelParams) -> List[str]:
    """h_reduced and i_angular always, plus f_integral and k_integral for N=3."""
    names = ["h_reduced", "i_angular"]
    if params.n_particles == 3:
        names += list(N3_ONLY_MONITORS)
    return names


def _validate_run(
    dt: float, steps: int, record_stride: int, integrator: str, monitors: Sequence[str],
    params: ModelParams,
) -> None:
    if not (math.isfinite(dt) and dt > 0):
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    if int(steps) != steps or steps < 0:
        raise InvalidParameterError(f"steps must be a non-negative integer, got {steps}")
    if int(record_stride) != record_stride or record_stride < 1:
        raise InvalidParameterError(
            f"record_stride must be a positive integer, got {record_stride}"
        )
    if integrator not in INTEGRATORS:
        raise InvalidParameterError(f"Unknown integrator: {integrator}")
    for name in monitors:
        if name not in MONITORS:
            raise InvalidParameterError(f"Unknown monitor: {name}")
        if name in N3_ONLY_MONITORS and params.n_particles != 3:
            raise InvalidParameterError(f"Monitor {name} is only defined for N=3")


def check_run(
    state0: State,
    params: ModelParams,
    dt: float,
    steps: int,
    record_stride: int = 1,
    monitors: Optional[Sequence[str]] = None,
    integrator: Integrator = "leapfrog",
) -> None:
    """
    Check a run's arguments and starting state without taking a step.

    integrate() runs the same checks first, so callers that write output
    as samples arrive can reject a run before anything is written.

    Raises:
        InvalidParameterError: If dt, steps, stride, integrator or a monitor is invalid
        InvalidInputError: If the state size does not match params
        SingularConfigurationError: If state0 lies within the collision guard while g != 0
            or a monitor is undefined there
    """
    _preflight(state0, params, dt, steps, record_stride, monitors, integrator)


def _preflight(
    state0: State,
    params: ModelParams,
    dt: float,
    steps: int,
    record_stride: int,
    monitors: Optional[Sequence[str]],
    integrator: str,
) -> Tuple[List[str], _SeparableSystem]:
    monitors = list(default_monitors(params) if monitors is None else monitors)
    _validate_run(dt, steps, record_stride, integrator, monitors, params)
    system = _SeparableSystem(state0, params)
    hit = system.guard(_split(state0)[0])
    if hit is not None:
        pair, value = hit
        raise SingularConfigurationError(
            f"Initial state is within the collision guard of pair {pair} ({value:.3e})",
            pair=pair,
            value=value,
        )
    evaluate_monitors(state0, params, monitors)
    return monitors, system


def integrate(
    state0: State,
    params: ModelParams,
    dt: float,
    steps: int,
    record_stride: int = 1,
    monitors: Optional[Sequence[str]] = None,
    integrator: Integrator = "leapfrog",
    on_sample: Optional[Callable[[TrajectorySample], None]] = None,
) -> Trajectory:
    """
    Integrate a lab-frame or reduced state for a fixed number of steps.

    Args:
        state0: PhaseState (lab frame) or ReducedPhaseState
        params: Particle count and coupling
        dt: Time step (> 0)
        steps: Number of steps
        record_stride: Record a sample every record_stride steps
        monitors: Observable names (default: default_monitors(params))
        integrator: "leapfrog" (default) or "rk4_reference"
        on_sample: Optional callback invoked with each sample as it is recorded

    Returns:
        Trajectory: Samples at t = 0, stride*dt, 2*stride*dt, ...

    Raises:
        InvalidParameterError: If dt, steps, stride, integrator or a monitor is invalid
        InvalidInputError: If the state size does not match params
        SingularConfigurationError: If state0 lies within the collision guard while g != 0
        IntegrationAbortedError: If some |b^a . y| drops below 1e-8 while g != 0
    """
    monitors, system = _preflight(
        state0, params, dt, steps, record_stride, monitors, integrator
    )
    q, p = _split(state0)

    trajectory = Trajectory(dt=dt, integrator=integrator, record_stride=record_stride)

    def record(step: int, state: State) -> None:
        sample = TrajectorySample(
            t=step * dt,
            step=step,
            state=state,
            observables=evaluate_monitors(state, params, monitors),
        )
        trajectory.samples.append(sample)
        if on_sample is not None:
            on_sample(sample)

    record(0, state0)
    trajectory.final_state = state0

    report_every = max(steps // 10, 1)
    force = system.force(q) if integrator == "leapfrog" else None
    for step in range(1, steps + 1):
        try:
            if integrator == "leapfrog":
                q_new, p_new, force_new = leapfrog_step(
                    q, p, dt, system.checked_force, force
                )
            else:
                q_new, p_new = rk4_step(q, p, dt, system.checked_force)
                force_new = None
        except _CollisionHit as hit:
            pair, value = hit.pair, hit.value
            last = system.make_state(q, p)
            trajectory.final_state = last
            trajectory.final_time = (step - 1) * dt
            logger.warning(
                "Trajectory aborted at step %d (t=%g): pair %s at %.3e",
                step,
                step * dt,
                pair,
                value,
            )
            raise IntegrationAbortedError(
                f"Pair {pair} entered the collision guard at step {step}",
                last_state=last,
                time=(step - 1) * dt,
                step=step - 1,
                trajectory=trajectory,
            ) from None
        q, p, force = q_new, p_new, force_new
        if step % record_stride == 0:
            record(step, system.make_state(q, p))
        if step % report_every == 0:
            logger.debug("Integrated %d/%d steps (t=%g)", step, steps, step * dt)

    trajectory.final_state = system.make_state(q, p)
    trajectory.final_time = steps * dt
    return trajectory


def step_map(
    params: ModelParams, dt: float, integrator: Integrator = "leapfrog", full: bool = False
) -> Callable[[np.ndarray], np.ndarray]:
    """
    One integrator step as a map z = (q, p) -> z' on flat phase vectors.

    Used to check symplecticity through finite-difference Jacobians.
    """
    if integrator not in INTEGRATORS:
        raise InvalidParameterError(f"Unknown integrator: {integrator}")
    size = params.n_particles if full else params.n_particles - 1
    template: State = (
        PhaseState(x=np.zeros(size), p=np.zeros(size))
        if full
        else ReducedPhaseState(y=np.zeros(size), py=np.zeros(size))
    )
    system = _SeparableSystem(template, params)

    def apply(z: np.ndarray) -> np.ndarray:
        q, p = np.asarray(z[:size], dtype=float), np.asarray(z[size:], dtype=float)
        if integrator == "leapfrog":
            q, p, _ = leapfrog_step(q, p, dt, system.force)
        else:
            q, p = rk4_step(q, p, dt, system.force)
        return np.concatenate([q, p])

    return apply


def conservation_report(
    traj: Trajectory, names: Optional[Sequence[str]] = None
) -> Dict[str, DriftStats]:
    """
    Drift of each monitored observable against its initial value.

    Relative drift divides by max(|initial|, 1e-12).

    Raises:
        InvalidInputError: If the trajectory has fewer than 2 samples or lacks an observable
    """
    if len(traj.samples) < 2:
        raise InvalidInputError(
            f"Conservation report needs at least 2 samples, got {len(traj.samples)}"
        )
    names = traj.monitored() if names is None else list(names)
    report: Dict[str, DriftStats] = {}
    for name in names:
        values = traj.series(name)
        drift = np.abs(values - values[0])
        max_abs = float(np.max(drift))
        report[name] = DriftStats(
            max_abs_drift=max_abs,
            max_rel_drift=max_abs / max(abs(float(values[0])), REL_DRIFT_FLOOR),
        )
    return report
