"""Center-of-mass transformation, A_{N-1} root vectors and the N=4 polyhedral structures."""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import numpy as np

from calogero_sphere.errors import InvalidInputError, InvalidParameterError
from calogero_sphere.states import PhaseState, ReducedPhaseState

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

ORTHOGONALITY_TOL = 1e-12
EDGE_COS_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """
    Particle count and coupling of the rational Calogero model.

    The coupling may be zero (free particles) or negative for evaluation purposes;
    conservation checks are only meaningful in the repulsive regime g > 0.

    Attributes:
        n_particles: Number of particles N (>= 2)
        coupling: Inverse-square coupling g
    """

    n_particles: int
    coupling: float

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 2:
            raise InvalidParameterError(
                f"n_particles must be an integer >= 2, got {self.n_particles}"
            )
        if not math.isfinite(self.coupling):
            raise InvalidParameterError(f"coupling must be finite, got {self.coupling}")

    @property
    def repulsive(self) -> bool:
        return self.coupling > 0

    @property
    def higgs_frequency(self) -> float:
        """Frequency omega = sqrt(g) of the Higgs oscillators on the sphere."""
        if self.coupling < 0:
            raise InvalidParameterError(
                f"Higgs frequency is undefined for attractive coupling {self.coupling}"
            )
        return math.sqrt(self.coupling)


@dataclass(frozen=True, eq=False)
class RootEntry:
    """A positive root b^{ij} with its 1-based particle pair (i < j)."""

    pair: Pair
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    The N(N-1)/2 unit root vectors of A_{N-1} in the center-of-mass frame.

    Attributes:
        n_particles: Particle count N the roots were built for
        entries: Roots ordered lexicographically by pair
    """

    n_particles: int
    entries: Tuple[RootEntry, ...]
    _index: Dict[Pair, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {entry.pair: k for k, entry in enumerate(self.entries)}
        )

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return self.n_particles - 1

    @property
    def pairs(self) -> List[Pair]:
        return [entry.pair for entry in self.entries]

    @property
    def matrix(self) -> np.ndarray:
        """Roots stacked as rows, shape (N(N-1)/2, N-1)."""
        return np.vstack([entry.vector for entry in self.entries])

    def index(self, pair: Sequence[int]) -> int:
        """
        Position of a pair in entries.

        Raises:
            InvalidInputError: If the pair is not a positive root of this system
        """
        key = (int(pair[0]), int(pair[1]))
        if key not in self._index:
            raise InvalidInputError(
                f"Unknown particle pair {key} for N={self.n_particles}"
            )
        return self._index[key]

    def vector(self, pair: Sequence[int]) -> np.ndarray:
        return self.entries[self.index(pair)].vector


@dataclass(frozen=True, eq=False)
class Frame3:
    """Orthonormal frame a_1, a_2, a_3 stored as rows of `axes`."""

    axes: np.ndarray


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """
    Vertices, edges and faces of a polyhedron inscribed in the unit sphere.

    Attributes:
        vertices: Array of shape (V, 3)
        labels: Provenance of each vertex as (pair, sign), vertex = sign * b^pair
        edges: 0-based vertex index pairs
        faces: 0-based vertex index tuples, counter-clockwise about the outward normal
    """

    vertices: np.ndarray
    labels: List[Tuple[Pair, int]]
    edges: List[Tuple[int, int]]
    faces: List[Tuple[int, ...]]

    @property
    def triangles(self) -> List[Tuple[int, ...]]:
        return [f for f in self.faces if len(f) == 3]

    @property
    def squares(self) -> List[Tuple[int, ...]]:
        return [f for f in self.faces if len(f) == 4]


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise InvalidParameterError(f"Particle count must be an integer >= 2, got {n}")
    return int(n)


@lru_cache(maxsize=None)
def _jacobi_matrix_cached(n: int) -> np.ndarray:
    a = np.zeros((n, n))
    a[:, 0] = 1.0 / math.sqrt(n)
    # Row k-1 holds particle k; column m is y_m.
    for k in range(1, n + 1):
        for m in range(1, n):
            if k > m:
                a[k - 1, m] = -1.0 / math.sqrt((n - m + 1) * (n - m))
            elif k == m:
                a[k - 1, m] = math.sqrt(n - k) / math.sqrt(n - k + 1)
    a.setflags(write=False)
    return a


def jacobi_matrix(n: int) -> np.ndarray:
    """
    Orthogonal matrix A with x = A y, column 0 being the center-of-mass direction.

    Args:
        n: Particle count

    Returns:
        np.ndarray: Read-only (n, n) matrix

    Raises:
        InvalidParameterError: If n < 2
    """
    return _jacobi_matrix_cached(_check_n(n))


@lru_cache(maxsize=None)
def _root_system_cached(n: int) -> RootSystem:
    a = jacobi_matrix(n)[:, 1:]
    entries = []
    for i, j in combinations(range(1, n + 1), 2):
        vector = (a[i - 1] - a[j - 1]) / math.sqrt(2.0)
        vector.setflags(write=False)
        entries.append(RootEntry(pair=(i, j), vector=vector))
    logger.debug("Built A_%d root system with %d roots", n - 1, len(entries))
    return RootSystem(n_particles=n, entries=tuple(entries))


def root_system(n: int) -> RootSystem:
    """
    Positive roots b^{ij}_k = (A_ik - A_jk)/sqrt(2), k = 1..n-1, for all i < j.

    Raises:
        InvalidParameterError: If n < 2
    """
    return _root_system_cached(_check_n(n))


def com_split(state: PhaseState, params: ModelParams) -> Tuple[float, float, ReducedPhaseState]:
    """
    Split a lab-frame state into center-of-mass and relative parts through y = A^T x.

    p0 is the momentum conjugate to y0, sum(p)/sqrt(N), so that
    H = p0^2/2 + H_reduced holds exactly.

    Returns:
        Tuple of (y0, p0, reduced state)

    Raises:
        InvalidInputError: If the state size differs from params.n_particles
    """
    if state.n_particles != params.n_particles:
        raise InvalidInputError(
            f"State has {state.n_particles} particles, expected {params.n_particles}"
        )
    a = jacobi_matrix(params.n_particles)
    y = a.T @ state.x
    py = a.T @ state.p
    return float(y[0]), float(py[0]), ReducedPhaseState(y=y[1:], py=py[1:])


def com_join(
    y0: float, p0: float, reduced: ReducedPhaseState, params: ModelParams
) -> PhaseState:
    """Inverse of com_split."""
    if reduced.dimension != params.n_particles - 1:
        raise InvalidInputError(
            f"Reduced state has dimension {reduced.dimension}, "
            f"expected {params.n_particles - 1}"
        )
    a = jacobi_matrix(params.n_particles)
    y = np.concatenate([[y0], reduced.y])
    py = np.concatenate([[p0], reduced.py])
    return PhaseState(x=a @ y, p=a @ py)


def pairwise_cosine(rs: RootSystem, a: Sequence[int], b: Sequence[int]) -> float:
    """
    Cosine of the angle between two roots.

    Raises:
        InvalidInputError: If either pair is unknown
    """
    return float(np.dot(rs.vector(a), rs.vector(b)))


def expected_cosine(a: Sequence[int], b: Sequence[int]) -> float:
    """Closed-form cosine (d_ii' + d_jj' - d_ij' - d_i'j)/2 between roots a and b."""
    i, j = a
    ip, jp = b
    return 0.5 * ((i == ip) + (j == jp) - (i == jp) - (ip == j))


def cosine_matrix(rs: RootSystem) -> np.ndarray:
    b = rs.matrix
    return b @ b.T


def force_centers(rs: RootSystem) -> Tuple[np.ndarray, List[Tuple[Pair, int]]]:
    """
    All N(N-1) force centers: the positive roots followed by their negatives.

    Returns:
        Tuple of the (N(N-1), N-1) array and the (pair, sign) label of each row
    """
    b = rs.matrix
    labels = [(pair, 1) for pair in rs.pairs] + [(pair, -1) for pair in rs.pairs]
    return np.vstack([b, -b]), labels


def hexagon_vertices() -> np.ndarray:
    """The six N=3 force centers +-b^{12}, +-b^{13}, +-b^{23}."""
    vertices, _ = force_centers(root_system(3))
    return vertices


def particle_permutation_matrix(n: int, perm: Sequence[int]) -> np.ndarray:
    """
    Action of a particle relabelling on the center-of-mass coordinates.

    Particle k is sent to position perm[k-1] (1-based), i.e. x'_{perm[k]} = x_k.

    Returns:
        np.ndarray: Orthogonal (n-1, n-1) matrix Q with y' = Q y

    Raises:
        InvalidInputError: If perm is not a permutation of 1..n
    """
    n = _check_n(n)
    if sorted(perm) != list(range(1, n + 1)):
        raise InvalidInputError(f"Not a permutation of 1..{n}: {list(perm)}")
    p = np.zeros((n, n))
    for k, target in enumerate(perm):
        p[target - 1, k] = 1.0
    a = jacobi_matrix(n)[:, 1:]
    return a.T @ p @ a


def permute_particles(rs: RootSystem, perm: Sequence[int]) -> np.ndarray:
    """Root vectors (as rows) after relabelling the particles by perm."""
    q = particle_permutation_matrix(rs.n_particles, perm)
    return rs.matrix @ q.T


def _require_n4(rs: RootSystem) -> None:
    if rs.n_particles != 4:
        raise InvalidInputError(
            f"Operation requires the N=4 root system, got N={rs.n_particles}"
        )


def orthogonal_frame(rs: RootSystem) -> Frame3:
    """
    Frame a_1 = b12 x b34, a_2 = b13 x b24, a_3 = b14 x b23 built from orthogonal root pairs.

    Raises:
        InvalidInputError: If rs is not the N=4 root system
    """
    _require_n4(rs)
    defining = [((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]
    axes = np.vstack([np.cross(rs.vector(p), rs.vector(q)) for p, q in defining])
    axes.setflags(write=False)
    return Frame3(axes=axes)


def equatorial_hexagon(rs: RootSystem) -> Tuple[List[Pair], float]:
    """
    Roots of the N=4 system orthogonal to the first lab axis, and the offset of the
    parallel triangle b^{12}, b^{13}, b^{14} along that axis.

    Returns:
        Tuple of the equatorial pairs and the plane distance sqrt(2/3)
    """
    _require_n4(rs)
    equatorial = [p for p in rs.pairs if abs(rs.vector(p)[0]) < ORTHOGONALITY_TOL]
    offsets = [rs.vector((1, j))[0] for j in (2, 3, 4)]
    return equatorial, float(np.mean(offsets))


def cuboctahedron_vertices() -> np.ndarray:
    """The six N=4 roots followed by their negatives, shape (12, 3)."""
    vertices, _ = force_centers(root_system(4))
    return vertices


def cuboctahedron_edges(vertices: np.ndarray) -> List[Tuple[int, int]]:
    """Vertex pairs at angular separation pi/3 (|cos - 1/2| < 1e-9)."""
    cos = vertices @ vertices.T
    return [
        (i, j)
        for i, j in combinations(range(len(vertices)), 2)
        if abs(cos[i, j] - 0.5) < EDGE_COS_TOL
    ]


def _order_face(vertices: np.ndarray, face: Sequence[int]) -> Tuple[int, ...]:
    pts = vertices[list(face)]
    center = pts.mean(axis=0)
    normal = center / np.linalg.norm(center)
    ref = pts[0] - center
    side = np.cross(normal, ref)
    angles = [math.atan2(np.dot(side, p - center), np.dot(ref, p - center)) for p in pts]
    return tuple(int(face[k]) for k in np.argsort(angles))


def cuboctahedron_faces(
    vertices: np.ndarray, edges: List[Tuple[int, int]], frame: Frame3
) -> List[Tuple[int, ...]]:
    """
    The 8 triangles (3-cliques of the edge graph) and the 6 squares (vertices at
    height +-1/sqrt(2) along a frame axis), each ordered counter-clockwise.
    """
    adjacent = set(edges)
    triangles = [
        t
        for t in combinations(range(len(vertices)), 3)
        if {(t[0], t[1]), (t[0], t[2]), (t[1], t[2])} <= adjacent
    ]
    squares = []
    height = 1.0 / math.sqrt(2.0)
    for axis in frame.axes:
        proj = vertices @ axis
        for sign in (1.0, -1.0):
            members = [k for k in range(len(vertices)) if abs(proj[k] - sign * height) < EDGE_COS_TOL]
            squares.append(tuple(members))
    return [_order_face(vertices, f) for f in triangles + squares]


def cuboctahedron() -> Polyhedron:
    """Cuboctahedron spanned by the N=4 force centers, with pair provenance."""
    rs = root_system(4)
    vertices, labels = force_centers(rs)
    edges = cuboctahedron_edges(vertices)
    faces = cuboctahedron_faces(vertices, edges, orthogonal_frame(rs))
    logger.debug(
        "Cuboctahedron: %d vertices, %d edges, %d faces",
        len(vertices),
        len(edges),
        len(faces),
    )
    return Polyhedron(vertices=vertices, labels=labels, edges=edges, faces=faces)
