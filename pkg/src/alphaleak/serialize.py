"""File formats for distributions, channels and joints, plus report schemas.

JSON schemas (the wire format batch tooling is expected to produce):

    pmf      {"alphabet": ["a", "b"], "mass": [0.5, 0.5]}
    channel  {"input": [...], "output": [...], "rows": [[...], [...]]}
    joint    {"x": [...], "y": [...], "mass": [[...], [...]]}

CSV is accepted as an alternative for the two matrix shapes: the header row
carries the output (resp. y) labels, the first column the input (resp. x)
labels.  All parsers reject NaN/Inf and entries below the -1e-12 negativity
clamp; loaders attach the offending file and field to every diagnostic.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .errors import InputValidationError
from .prob import Alphabet, Channel, Joint, Pmf

__all__ = [
    "pmf_from_dict",
    "channel_from_dict",
    "joint_from_dict",
    "pmf_to_dict",
    "channel_to_dict",
    "joint_to_dict",
    "channel_from_csv",
    "joint_from_csv",
    "load_pmf",
    "load_channel",
    "load_joint",
    "jsonify",
    "dumps_report",
    "PMF_SCHEMA",
    "CHANNEL_SCHEMA",
    "JOINT_SCHEMA",
    "REPORT_SCHEMAS",
]


def _reject_constant(token: str):
    raise InputValidationError(f"non-finite JSON constant {token!r} is not allowed")


def _loads(text: str, where: str) -> dict:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"{where}: invalid JSON ({e})") from None
    if not isinstance(data, dict):
        raise InputValidationError(f"{where}: expected a JSON object")
    return data


def _labels(data: dict, key: str, where: str) -> Alphabet:
    if key not in data:
        raise InputValidationError(f"{where}: missing key {key!r}")
    value = data[key]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise InputValidationError(f"{where}: {key!r} must be a list of strings")
    return Alphabet(tuple(value))


def _numbers(value, where: str):
    if not isinstance(value, list):
        raise InputValidationError(f"{where}: expected a list of numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InputValidationError(f"{where}[{i}]: expected a number, got {v!r}")
        if not math.isfinite(v):
            raise InputValidationError(f"{where}[{i}]: non-finite value {v!r}")
        out.append(float(v))
    return out


def pmf_from_dict(data: dict, where: str = "pmf") -> Pmf:
    alphabet = _labels(data, "alphabet", where)
    mass = _numbers(data.get("mass"), f"{where}.mass")
    return Pmf(alphabet, mass)


def channel_from_dict(data: dict, where: str = "channel") -> Channel:
    inp = _labels(data, "input", where)
    out = _labels(data, "output", where)
    rows = data.get("rows")
    if not isinstance(rows, list):
        raise InputValidationError(f"{where}: 'rows' must be a list of rows")
    matrix = [_numbers(row, f"{where}.rows[{i}]") for i, row in enumerate(rows)]
    return Channel(inp, out, matrix)


def joint_from_dict(data: dict, where: str = "joint") -> Joint:
    x = _labels(data, "x", where)
    y = _labels(data, "y", where)
    rows = data.get("mass")
    if not isinstance(rows, list):
        raise InputValidationError(f"{where}: 'mass' must be a list of rows")
    matrix = [_numbers(row, f"{where}.mass[{i}]") for i, row in enumerate(rows)]
    return Joint(x, y, matrix)


def pmf_to_dict(p: Pmf) -> dict:
    return {"alphabet": list(p.alphabet.labels), "mass": [float(v) for v in p.mass]}


def channel_to_dict(ch: Channel) -> dict:
    return {
        "input": list(ch.input_alphabet.labels),
        "output": list(ch.output_alphabet.labels),
        "rows": [[float(v) for v in row] for row in ch.matrix],
    }


def joint_to_dict(j: Joint) -> dict:
    return {
        "x": list(j.x_alphabet.labels),
        "y": list(j.y_alphabet.labels),
        "mass": [[float(v) for v in row] for row in j.mass],
    }


def _matrix_from_csv(text: str, where: str):
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if len(rows) < 2 or len(rows[0]) < 2:
        raise InputValidationError(
            f"{where}: CSV needs a header row of output labels and one labeled row per input"
        )
    out_labels = tuple(cell.strip() for cell in rows[0][1:])
    in_labels = []
    matrix = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(out_labels) + 1:
            raise InputValidationError(
                f"{where}: line {line_no} has {len(row)} cells, expected {len(out_labels) + 1}"
            )
        in_labels.append(row[0].strip())
        values = []
        for k, cell in enumerate(row[1:], start=1):
            try:
                v = float(cell)
            except ValueError:
                raise InputValidationError(
                    f"{where}: line {line_no}, column {k + 1}: not a number: {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise InputValidationError(
                    f"{where}: line {line_no}, column {k + 1}: non-finite value {cell!r}"
                )
            values.append(v)
        matrix.append(values)
    return Alphabet(tuple(in_labels)), Alphabet(out_labels), matrix


def channel_from_csv(text: str, where: str = "channel") -> Channel:
    inp, out, matrix = _matrix_from_csv(text, where)
    return Channel(inp, out, matrix)


def joint_from_csv(text: str, where: str = "joint") -> Joint:
    x, y, matrix = _matrix_from_csv(text, where)
    return Joint(x, y, matrix)


def _read(path) -> tuple[str, str]:
    p = Path(path)
    if not p.exists():
        raise InputValidationError(f"{p}: file does not exist")
    return p.read_text(), p.name


def _wrap(exc: InputValidationError, path) -> InputValidationError:
    return InputValidationError(f"{path}: {exc}")


def load_pmf(path) -> Pmf:
    text, _ = _read(path)
    if str(path).lower().endswith(".csv"):
        raise InputValidationError(f"{path}: pmfs are JSON-only; CSV covers matrices")
    try:
        return pmf_from_dict(_loads(text, "pmf"), "pmf")
    except InputValidationError as e:
        raise _wrap(e, path) from None


def load_channel(path) -> Channel:
    text, _ = _read(path)
    try:
        if str(path).lower().endswith(".csv"):
            return channel_from_csv(text)
        return channel_from_dict(_loads(text, "channel"), "channel")
    except InputValidationError as e:
        raise _wrap(e, path) from None


def load_joint(path) -> Joint:
    text, _ = _read(path)
    try:
        if str(path).lower().endswith(".csv"):
            return joint_from_csv(text)
        return joint_from_dict(_loads(text, "joint"), "joint")
    except InputValidationError as e:
        raise _wrap(e, path) from None


def jsonify(value):
    """Recursively convert a report payload into strict-JSON values
    (non-finite floats become the strings "inf" / "-inf")."""
    if isinstance(value, dict):
        return {k: jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            raise InputValidationError("refusing to serialize NaN in a report")
        return value
    return value


def dumps_report(payload: dict) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, strict values."""
    return json.dumps(jsonify(payload), sort_keys=True, indent=2)


_FINITE_NUMBER = {"type": "number"}
_BITS = {"oneOf": [{"type": "number"}, {"type": "string", "enum": ["inf", "-inf"]}]}

PMF_SCHEMA = {
    "type": "object",
    "required": ["alphabet", "mass"],
    "properties": {
        "alphabet": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "mass": {"type": "array", "items": _FINITE_NUMBER, "minItems": 1},
    },
}

CHANNEL_SCHEMA = {
    "type": "object",
    "required": ["input", "output", "rows"],
    "properties": {
        "input": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "output": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "rows": {"type": "array", "items": {"type": "array", "items": _FINITE_NUMBER}},
    },
}

JOINT_SCHEMA = {
    "type": "object",
    "required": ["x", "y", "mass"],
    "properties": {
        "x": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "y": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "mass": {"type": "array", "items": {"type": "array", "items": _FINITE_NUMBER}},
    },
}

_WITNESS_SCHEMA = {
    "type": "object",
    "required": ["gain", "kind", "m", "achieved_bits", "gap_bits"],
    "properties": {
        "gain": {"type": "string"},
        "kind": {"type": "string", "enum": ["shattered", "optimized"]},
        "m": {"type": "integer"},
        "achieved_bits": _BITS,
        "gap_bits": _BITS,
    },
}

REPORT_SCHEMAS = {
    "scalar": {
        "type": "object",
        "required": ["measure", "bits"],
        "properties": {
            "measure": {"type": "string"},
            "order": {},
            "bits": _BITS,
        },
    },
    "leakage": {
        "type": "object",
        "required": ["measure", "alpha", "bits", "closed_form"],
        "properties": {
            "measure": {"type": "string"},
            "alpha": {"oneOf": [{"type": "number"}, {"type": "string", "enum": ["inf"]}]},
            "bits": _BITS,
            "closed_form": {"type": "string"},
            "check": {
                "oneOf": [
                    {"type": "null"},
                    {
                        "type": "object",
                        "required": ["achieved_bits", "gap_bits"],
                        "properties": {
                            "achieved_bits": _BITS,
                            "gap_bits": _BITS,
                            "per_m": {"type": "array"},
                        },
                    },
                ]
            },
        },
    },
    "guessing": {
        "type": "object",
        "required": ["target_bits", "witnesses", "agnosticism_spread_bits"],
        "properties": {
            "target_bits": _BITS,
            "witnesses": {"type": "array", "items": _WITNESS_SCHEMA},
            "best_achieved_bits": {"type": "object"},
            "agnosticism_spread_bits": _BITS,
        },
    },
    "log-gain": {
        "type": "object",
        "required": ["target_bits", "target_ratio", "entries"],
        "properties": {
            "target_bits": _BITS,
            "target_ratio": _FINITE_NUMBER,
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["m_star", "ratio", "achieved_bits", "rel_error"],
                    "properties": {
                        "m_star": {"type": "integer"},
                        "ratio": _FINITE_NUMBER,
                        "achieved_bits": _BITS,
                        "rel_error": _FINITE_NUMBER,
                    },
                },
            },
        },
    },
    "variational": {
        "type": "object",
        "required": ["target_bits", "witnesses"],
        "properties": {
            "target_bits": _BITS,
            "witnesses": {"type": "object"},
        },
    },
    "sweep": {
        "type": "object",
        "required": ["reports"],
        "properties": {"reports": {"type": "array"}},
    },
}
