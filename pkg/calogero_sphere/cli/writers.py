"""Readers and writers for the CLI file formats (CSV, JSON, OBJ, YAML init files)."""

import csv
import json
import math
import numbers
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

import yaml

from calogero_sphere.dynamics import TrajectorySample
from calogero_sphere.errors import IntegrationAbortedError, InvalidInputError
from calogero_sphere.geometry import Polyhedron, RootSystem, cosine_matrix
from calogero_sphere.states import PhaseState, ReducedPhaseState


def format_float(value: float) -> str:
    """Locale-independent repr with 17 significant digits."""
    return format(float(value), ".17g")


def _json_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format_float(value)
    # keep a float marker so readers do not turn 1.0 into an integer
    return text if any(c in text for c in ".en") else text + ".0"


def _encode(value: Any, indent: Optional[int], level: int) -> str:
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return _json_float(float(value))
    if isinstance(value, Mapping):
        items = [
            f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()
        ]
        return _join(items, "{", "}", indent, level)
    if isinstance(value, (list, tuple)):
        items = [_encode(v, indent, level + 1) for v in value]
        return _join(items, "[", "]", indent, level)
    raise InvalidInputError(f"Cannot write {type(value).__name__} as JSON")


def _join(items: List[str], open_: str, close: str, indent: Optional[int], level: int) -> str:
    if not items:
        return open_ + close
    if indent is None:
        return open_ + ", ".join(items) + close
    inner = "\n" + " " * (indent * (level + 1))
    outer = "\n" + " " * (indent * level)
    return open_ + inner + ("," + inner).join(items) + outer + close


def dumps_json(payload: Any, indent: Optional[int] = 2) -> str:
    """
    JSON text with every float written by format_float.

    Layout matches json.dumps with the same indent. Non-finite floats use
    json's NaN/Infinity spellings.

    Raises:
        InvalidInputError: If the payload holds a value JSON cannot represent
    """
    return _encode(payload, indent, 0)


def _float_list(values: Sequence[float]) -> List[float]:
    return [float(v) for v in values]


def roots_payload(rs: RootSystem) -> Dict[str, Any]:
    """Root vectors with pair labels and the full cosine matrix."""
    return {
        "n": rs.n_particles,
        "roots": [
            {"pair": list(entry.pair), "vector": _float_list(entry.vector)}
            for entry in rs.entries
        ],
        "cosine_matrix": [_float_list(row) for row in cosine_matrix(rs)],
    }


def write_roots_json(rs: RootSystem, stream: TextIO) -> None:
    stream.write(dumps_json(roots_payload(rs)))
    stream.write("\n")


def write_roots_csv(rs: RootSystem, stream: TextIO) -> None:
    """One row per root: pair, components b_1.., then its row of the cosine matrix."""
    writer = csv.writer(stream, lineterminator="\n")
    dims = [f"b_{k}" for k in range(1, rs.dimension + 1)]
    cos_cols = [f"cos_{i}-{j}" for i, j in rs.pairs]
    writer.writerow(["i", "j"] + dims + cos_cols)
    cos = cosine_matrix(rs)
    for k, entry in enumerate(rs.entries):
        writer.writerow(
            list(entry.pair)
            + [format_float(v) for v in entry.vector]
            + [format_float(v) for v in cos[k]]
        )


def polyhedron_payload(solid: Polyhedron) -> Dict[str, Any]:
    return {
        "vertices": [
            {"position": _float_list(v), "pair": list(pair), "sign": sign}
            for v, (pair, sign) in zip(solid.vertices, solid.labels)
        ],
        "edges": [list(e) for e in solid.edges],
        "faces": [list(f) for f in solid.faces],
    }


def write_polyhedron_json(solid: Polyhedron, stream: TextIO) -> None:
    stream.write(dumps_json(polyhedron_payload(solid)))
    stream.write("\n")


def write_polyhedron_obj(solid: Polyhedron, stream: TextIO) -> None:
    """ASCII OBJ with 'v' records, 'l' edge elements and 'f' faces (1-based)."""
    stream.write("# cuboctahedron of the N=4 force centers\n")
    for v, (pair, sign) in zip(solid.vertices, solid.labels):
        coords = " ".join(format_float(c) for c in v)
        stream.write(f"# {'+' if sign > 0 else '-'}b{pair[0]}{pair[1]}\n")
        stream.write(f"v {coords}\n")
    for i, j in solid.edges:
        stream.write(f"l {i + 1} {j + 1}\n")
    for face in solid.faces:
        stream.write("f " + " ".join(str(k + 1) for k in face) + "\n")


def write_report_json(report: Dict[str, Any], stream: TextIO) -> None:
    stream.write(dumps_json(report))
    stream.write("\n")


def state_columns(state: Union[PhaseState, ReducedPhaseState]) -> List[str]:
    if isinstance(state, PhaseState):
        n = state.n_particles
        return [f"x_{k}" for k in range(1, n + 1)] + [f"p_{k}" for k in range(1, n + 1)]
    n = state.dimension
    return [f"y_{k}" for k in range(1, n + 1)] + [f"py_{k}" for k in range(1, n + 1)]


class TrajectoryCsvWriter:
    """Streams trajectory samples as CSV rows: t, state components, observables."""

    def __init__(
        self,
        stream: TextIO,
        state0: Union[PhaseState, ReducedPhaseState],
        monitors: Sequence[str],
    ):
        self.stream = stream
        self.monitors = list(monitors)
        self._writer = csv.writer(stream, lineterminator="\n")
        self._writer.writerow(["t"] + state_columns(state0) + self.monitors)

    def write_sample(self, sample: TrajectorySample) -> None:
        row = [format_float(sample.t)]
        row += [format_float(v) for v in sample.state.as_vector()]
        row += [format_float(sample.observables[name]) for name in self.monitors]
        self._writer.writerow(row)

    def write_abort(self, error: IntegrationAbortedError) -> None:
        self.stream.write(
            f"# aborted at step {error.step} (t={format_float(error.time)}): {error}\n"
        )


def load_initial_state(path: Union[str, Path]) -> Union[PhaseState, ReducedPhaseState]:
    """
    Read an initial state from a YAML (or JSON) file.

    The file holds either {x: [...], p: [...]} or {y: [...], py: [...]}.

    Raises:
        FileNotFoundError: If the file does not exist
        InvalidInputError: If the content is not one of the two layouts
    """
    full_path = Path(path)
    if not full_path.exists():
        raise FileNotFoundError(f"Initial state file not found: {full_path}")
    with open(full_path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise InvalidInputError(f"Cannot parse initial state file {full_path}: {e}") from e
    return state_from_mapping(data, source=str(full_path))


def _number_list(values: Any, key: str, source: str) -> List[float]:
    if not isinstance(values, list) or not values:
        raise InvalidInputError(f"'{key}' in {source} must be a non-empty list of numbers")
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"'{key}' in {source} holds a non-numeric entry") from e


def state_from_mapping(
    data: Any, source: str = "input"
) -> Union[PhaseState, ReducedPhaseState]:
    """Build a lab-frame or reduced state from a parsed mapping."""
    if not isinstance(data, dict):
        raise InvalidInputError(f"{source} must contain a mapping")
    keys = set(data)
    if keys == {"x", "p"}:
        return PhaseState(
            x=_number_list(data["x"], "x", source), p=_number_list(data["p"], "p", source)
        )
    if keys == {"y", "py"}:
        return ReducedPhaseState(
            y=_number_list(data["y"], "y", source),
            py=_number_list(data["py"], "py", source),
        )
    raise InvalidInputError(
        f"{source} must hold exactly {{x, p}} or {{y, py}}, got {sorted(map(str, keys))}"
    )


def parse_inline_values(text: str, key: str) -> List[float]:
    """Comma-separated numbers from a command-line flag."""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise InvalidInputError(f"--{key} must be comma-separated numbers: {text!r}") from e
