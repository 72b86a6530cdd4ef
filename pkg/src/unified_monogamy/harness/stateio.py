"""JSON state files.

Schema::

    {"dims": [2, 2, 2], "kind": "pure" | "mixed", "data": [[re, im], ...]}

``data`` holds the amplitude vector for pure states and the row-major matrix
entries for mixed ones.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..states import DensityMatrix, PureState, State, StateError


class StateFileError(ValueError):
    pass


def _parse_complex(entry, where: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if (isinstance(entry, list) and len(entry) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
        return complex(entry[0], entry[1])
    raise StateFileError(f"{where}: expected [re, im], got {entry!r}")


def parse_state(obj, source: str = "<state>") -> State:
    if not isinstance(obj, dict):
        raise StateFileError(f"{source}: top level must be an object")
    for key in ("dims", "kind", "data"):
        if key not in obj:
            raise StateFileError(f"{source}: missing field '{key}'")
    dims = obj["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d > 0 for d in dims):
        raise StateFileError(f"{source}: field 'dims' must be a nonempty list of positive integers")
    kind = obj["kind"]
    if kind not in ("pure", "mixed"):
        raise StateFileError(f"{source}: field 'kind' must be 'pure' or 'mixed', got {kind!r}")
    data = obj["data"]
    if not isinstance(data, list):
        raise StateFileError(f"{source}: field 'data' must be a list")
    d = int(np.prod(dims))
    expected = d if kind == "pure" else d * d
    if len(data) != expected:
        raise StateFileError(f"{source}: field 'data' has {len(data)} entries, expected {expected}")
    values = np.array([_parse_complex(e, f"{source}: field 'data'[{i}]") for i, e in enumerate(data)])
    try:
        if kind == "pure":
            return PureState(tuple(dims), values)
        return DensityMatrix(tuple(dims), values.reshape(d, d))
    except StateError as exc:
        raise StateFileError(f"{source}: {exc}") from exc


def load_state(path) -> State:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_state(obj, str(path))


def state_to_dict(state: State) -> dict:
    if isinstance(state, PureState):
        data, kind = state.amplitudes, "pure"
    else:
        data, kind = np.asarray(state.matrix).reshape(-1), "mixed"
    return {"dims": list(state.dims), "kind": kind,
            "data": [[float(z.real), float(z.imag)] for z in data]}


def save_state(state: State, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=1) + "\n", encoding="utf-8")
