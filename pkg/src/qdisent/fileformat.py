"""JSON state-set files.

Layout::

    {
      "schema_version": "1.0",
      "name": "eq4",
      "dims": [2, 2],
      "states": [
        {"label": "psi0", "kind": "pure",  "data": [[1.0, 0.0], [0.0, 0.0], ...]},
        {"label": "mix",  "kind": "mixed", "data": [[[0.5, 0.0], ...], ...]}
      ]
    }

Every complex number is a two-element ``[re, im]`` array; bare numbers are
rejected.  Floats are written with ``repr`` precision so that a save/load
cycle is lossless.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .disentangle import StateSet
from .entanglement import BipartiteState, PureState
from .errors import DimensionError, InvalidStateError, ParseError

SCHEMA_VERSION = "1.0"
_SUPPORTED_MAJOR = "1"


def _encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _decode_complex(obj, where: str) -> complex:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)
    ):
        raise ParseError(f"expected a complex number [re, im], got {json.dumps(obj)[:40]}", where)
    z = complex(obj[0], obj[1])
    if not np.isfinite(z):
        raise ParseError("complex number is not finite", where)
    return z


def set_to_dict(states: StateSet) -> dict:
    out = []
    for label, st in states:
        if st.pure is not None:
            out.append({"label": label, "kind": "pure", "data": [_encode_complex(z) for z in st.pure]})
        else:
            out.append({
                "label": label,
                "kind": "mixed",
                "data": [[_encode_complex(z) for z in row] for row in st.rho],
            })
    return {
        "schema_version": SCHEMA_VERSION,
        "name": states.name,
        "dims": list(states.dims),
        "states": out,
    }


def dumps(states: StateSet) -> str:
    return json.dumps(set_to_dict(states), indent=2) + "\n"


def save(states: StateSet, path) -> None:
    Path(path).write_text(dumps(states))


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where or "<root>")
    return obj[key]


def set_from_dict(doc, tol=None) -> StateSet:
    """Build a :class:`StateSet` from a decoded JSON document.

    Raises:
        ParseError: structural problems, located by field path.
        InvalidStateError: a matrix that is not a density matrix, or a
            vector that cannot be normalized.
    """
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "<root>")
    version = str(_field(doc, "schema_version", ""))
    if version.split(".")[0] != _SUPPORTED_MAJOR:
        raise ParseError(f"unsupported schema_version {version!r}", "schema_version")
    name = _field(doc, "name", "")
    if not isinstance(name, str):
        raise ParseError("must be a string", "name")
    dims = _field(doc, "dims", "")
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)
    ):
        raise ParseError("must be a pair of positive integers", "dims")
    dims = (dims[0], dims[1])
    n = dims[0] * dims[1]
    raw = _field(doc, "states", "")
    if not isinstance(raw, list) or not raw:
        raise ParseError("must be a non-empty list", "states")

    members, notes, seen = [], [], set()
    for k, entry in enumerate(raw):
        where = f"states[{k}]"
        if not isinstance(entry, dict):
            raise ParseError("must be an object", where)
        label = _field(entry, "label", where)
        if not isinstance(label, str) or not label:
            raise ParseError("must be a non-empty string", f"{where}.label")
        if label in seen:
            raise ParseError(f"duplicate label {label!r}", f"{where}.label")
        seen.add(label)
        kind = _field(entry, "kind", where)
        data = _field(entry, "data", where)
        if kind == "pure":
            if not isinstance(data, list) or len(data) != n:
                raise ParseError(f"expected {n} amplitudes", f"{where}.data")
            vec = [_decode_complex(z, f"{where}.data[{i}]") for i, z in enumerate(data)]
            try:
                pure = PureState(vec, dims)
                state = pure.to_state(tol)
            except (InvalidStateError, DimensionError) as exc:
                raise InvalidStateError(f"{where} ({label}): {exc}") from exc
            notes.extend(f"{label}: {w}" for w in pure.warnings)
        elif kind == "mixed":
            if not isinstance(data, list) or len(data) != n:
                raise ParseError(f"expected {n} rows", f"{where}.data")
            rows = []
            for i, row in enumerate(data):
                if not isinstance(row, list) or len(row) != n:
                    raise ParseError(f"expected {n} entries", f"{where}.data[{i}]")
                rows.append([_decode_complex(z, f"{where}.data[{i}][{j}]") for j, z in enumerate(row)])
            try:
                state = BipartiteState(np.array(rows, dtype=np.complex128), dims, tol=tol)
            except (InvalidStateError, DimensionError) as exc:
                raise InvalidStateError(f"{where} ({label}): {exc}") from exc
        else:
            raise ParseError(f"kind must be 'pure' or 'mixed', got {kind!r}", f"{where}.kind")
        members.append((label, state))
    return StateSet(name, dims, tuple(members), tuple(notes))


def loads(text: str, tol=None) -> StateSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return set_from_dict(doc, tol)


def load(path, tol=None) -> StateSet:
    """Read a state-set file.  ``OSError`` propagates for unreadable paths."""
    return loads(Path(path).read_text(), tol)


def matrix_to_json(m) -> list:
    return [[_encode_complex(z) for z in row] for row in np.asarray(m)]
