"""Finite-difference gradients and the numerical Poisson bracket engine."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Tuple, Union

import numpy as np

from calogero_sphere.config import DEFAULT_FD_STEP, fd_step_from_env
from calogero_sphere.errors import InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)

BracketMode = Literal["finite_difference", "analytic_if_available"]
Normalization = Literal["absolute", "term_scaled"]
Convention = Literal["momentum_first", "position_first"]

ScalarFunction = Callable[[np.ndarray], float]
GradientFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BracketConfig:
    """
    Settings of the Poisson bracket engine.

    Attributes:
        mode: "finite_difference" always differentiates numerically;
            "analytic_if_available" uses PhaseField.gradient when present
        fd_step: Central-difference step h (> 0); defaults to CALOGERO_FD_STEP or 1e-5
        normalization: "absolute" returns the raw bracket; "term_scaled" divides it
            by max(sum of |product terms|, 1)
        convention: "momentum_first" gives {p, q} = 1,
            "position_first" gives {q, p} = 1
    """

    mode: BracketMode = "finite_difference"
    fd_step: float = field(default_factory=fd_step_from_env)
    normalization: Normalization = "absolute"
    convention: Convention = "momentum_first"

    def __post_init__(self):
        if self.mode not in ("finite_difference", "analytic_if_available"):
            raise InvalidParameterError(f"Unknown bracket mode: {self.mode}")
        if not (math.isfinite(self.fd_step) and self.fd_step > 0):
            raise InvalidParameterError(f"fd_step must be positive, got {self.fd_step}")
        if self.normalization not in ("absolute", "term_scaled"):
            raise InvalidParameterError(f"Unknown normalization: {self.normalization}")
        if self.convention not in ("momentum_first", "position_first"):
            raise InvalidParameterError(f"Unknown bracket convention: {self.convention}")


@dataclass(frozen=True)
class PhaseField:
    """
    Scalar function on a phase space z = (q_1..q_n, p_1..p_n).

    Attributes:
        value: z -> float
        gradient: Optional analytic z -> dvalue/dz
        name: Label used in logs and reports
    """

    value: ScalarFunction
    gradient: Optional[GradientFunction] = None
    name: str = "field"

    def __call__(self, z: np.ndarray) -> float:
        return self.value(z)


FieldLike = Union[PhaseField, ScalarFunction]


def as_field(f: FieldLike) -> PhaseField:
    """Wrap a plain callable as a PhaseField without analytic gradient."""
    if isinstance(f, PhaseField):
        return f
    return PhaseField(value=f, name=getattr(f, "__name__", "field"))


def _phase_point(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size % 2 != 0:
        raise InvalidInputError(f"Phase point must have even length, got {z.size}")
    return z


def grad_fd(f: FieldLike, z: np.ndarray, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """
    Central-difference gradient (f(z + h e_k) - f(z - h e_k)) / 2h.

    Args:
        f: Scalar field
        z: Evaluation point
        h: Step (> 0)

    Returns:
        np.ndarray: Gradient with the shape of z

    Raises:
        InvalidParameterError: If h <= 0
        SingularConfigurationError: Propagated from f when the stencil touches a singularity
    """
    if not h > 0:
        raise InvalidParameterError(f"Finite-difference step must be positive, got {h}")
    z = np.asarray(z, dtype=float).reshape(-1)
    grad = np.empty_like(z)
    for k in range(z.size):
        e = np.zeros_like(z)
        e[k] = h
        grad[k] = (f(z + e) - f(z - e)) / (2.0 * h)
    return grad


def field_gradient(f: FieldLike, z: np.ndarray, cfg: BracketConfig) -> np.ndarray:
    """Gradient of f at z, analytic when cfg allows and f provides one."""
    phase_field = as_field(f)
    if cfg.mode == "analytic_if_available" and phase_field.gradient is not None:
        return np.asarray(phase_field.gradient(z), dtype=float)
    return grad_fd(phase_field, z, cfg.fd_step)


def bracket_terms(
    f: FieldLike, g: FieldLike, z: np.ndarray, cfg: BracketConfig
) -> Tuple[float, float]:
    """
    Raw bracket value and the magnitude of its terms.

    Returns:
        Tuple of ({f, g} in cfg.convention, sum over k of |df/dp dg/dq| + |df/dq dg/dp|)
    """
    z = _phase_point(z)
    n = z.size // 2
    df = field_gradient(f, z, cfg)
    dg = field_gradient(g, z, cfg)
    pq = df[n:] * dg[:n]
    qp = df[:n] * dg[n:]
    value = float(np.sum(pq) - np.sum(qp))
    if cfg.convention == "position_first":
        value = -value
    scale = float(np.sum(np.abs(pq)) + np.sum(np.abs(qp)))
    return value, scale


def poisson_bracket(f: FieldLike, g: FieldLike, z: np.ndarray, cfg: BracketConfig) -> float:
    """
    Canonical Poisson bracket {f, g} at the phase point z = (q, p).

    With the default momentum_first convention
    {f, g} = sum_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k), so {p_i, q_j} = delta_ij.

    Raises:
        InvalidInputError: If z has odd length
        SingularConfigurationError: Propagated from the fields
    """
    value, scale = bracket_terms(f, g, z, cfg)
    if cfg.normalization == "term_scaled":
        return value / max(scale, 1.0)
    return value


def normalized_residual(value: float, expected: float, scale: float) -> float:
    """(value - expected) / max(scale, |expected|, 1)."""
    return (value - expected) / max(scale, abs(expected), 1.0)


def fd_jacobian(step: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Jacobian d step(z)_i / dz_j of a phase-space map."""
    if not h > 0:
        raise InvalidParameterError(f"Finite-difference step must be positive, got {h}")
    z = np.asarray(z, dtype=float).reshape(-1)
    columns = []
    for k in range(z.size):
        e = np.zeros_like(z)
        e[k] = h
        columns.append((np.asarray(step(z + e)) - np.asarray(step(z - e))) / (2.0 * h))
    return np.column_stack(columns)


def symplectic_form(n: int) -> np.ndarray:
    """Canonical two-form [[0, I], [-I, 0]] on R^(2n)."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplecticity_defect(jacobian: np.ndarray) -> float:
    """max |J^T Omega J - Omega| entrywise."""
    n = jacobian.shape[0] // 2
    omega = symplectic_form(n)
    return float(np.max(np.abs(jacobian.T @ omega @ jacobian - omega)))
