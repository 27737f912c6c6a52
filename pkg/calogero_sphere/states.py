"""Phase-space state containers shared by every module."""

from dataclasses import dataclass

import numpy as np

from calogero_sphere.errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class PhaseState:
    """Lab-frame positions x and conjugate momenta p of N particles."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if x.shape != p.shape:
            raise InvalidInputError(
                f"Position and momentum sizes differ: {x.size} vs {p.size}"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def n_particles(self) -> int:
        return self.x.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_vector(cls, z: np.ndarray) -> "PhaseState":
        n = len(z) // 2
        return cls(x=z[:n], p=z[n:])


@dataclass(frozen=True, eq=False)
class ReducedPhaseState:
    """Center-of-mass frame coordinates y and conjugate momenta py (dimension N-1)."""

    y: np.ndarray
    py: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).reshape(-1)
        py = np.asarray(self.py, dtype=float).reshape(-1)
        if y.shape != py.shape:
            raise InvalidInputError(
                f"Coordinate and momentum sizes differ: {y.size} vs {py.size}"
            )
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "py", py)

    @property
    def dimension(self) -> int:
        return self.y.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.y, self.py])

    @classmethod
    def from_vector(cls, z: np.ndarray) -> "ReducedPhaseState":
        n = len(z) // 2
        return cls(y=z[:n], py=z[n:])
