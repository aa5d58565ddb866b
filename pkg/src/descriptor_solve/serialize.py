"""System/result file formats and canonical serialisation.

System files are JSON objects with row-major nested arrays::

    {"F": [[...], ...], "G": [[...], ...],
     "Y0": [...],                 # optional
     "V": [[...], ...],           # optional, defaults to identically zero
     "horizon": 20}               # optional, defaults to 20

Result files are JSON with a fixed key order and every float printed with 17
significant digits, so serialise -> parse -> serialise is byte-identical.
Complex scalars are written as ``{"re": ..., "im": ...}`` objects.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import MissingInitialConditionError, ParseError
from .validation import REAL_DEMOTION_TOL

RESULT_KEYS = ("classification", "consistency", "trajectory", "residuals", "version", "tolerances")


# ---------------------------------------------------------------------------
# system files


def load_system(path) -> dict:
    """Parse and validate a system definition file.

    Returns a dict with keys ``F``, ``G`` (float arrays), ``Y0`` (array or
    None), ``V`` (array or None), ``horizon`` (int).

    Raises
    ------
    ParseError
        On unreadable JSON, missing keys, malformed numbers, or shape
        violations.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("F", "G"):
        if key not in raw:
            raise ParseError(f"{path}: missing required key {key!r}")
    F = _as_float_array(raw["F"], "F", ndim=2)
    G = _as_float_array(raw["G"], "G", ndim=2)
    if F.shape != G.shape:
        raise ParseError(f"F and G must share a shape, got {F.shape} and {G.shape}")
    rows, cols = F.shape
    y0 = None
    if raw.get("Y0") is not None:
        y0 = _as_float_array(raw["Y0"], "Y0", ndim=1)
        if y0.shape[0] != cols:
            raise ParseError(f"Y0 must have length {cols}, got {y0.shape[0]}")
    V = None
    if raw.get("V") is not None:
        V = _as_float_array(raw["V"], "V", ndim=2)
        if V.shape[1] != rows:
            raise ParseError(f"each V[k] must have length {rows}, got {V.shape[1]}")
    horizon = raw.get("horizon", 20)
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise ParseError(f"horizon must be a positive integer, got {horizon!r}")
    return {"F": F, "G": G, "Y0": y0, "V": V, "horizon": horizon}


def require_initial_condition(system: dict):
    if system["Y0"] is None:
        raise MissingInitialConditionError("this command requires Y0 in the system file")
    return system["Y0"]


def _as_float_array(data, name: str, ndim: int) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name} must be a numeric array: {exc}") from exc
    if arr.ndim != ndim:
        raise ParseError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ParseError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{name} contains non-finite entries")
    return arr


# ---------------------------------------------------------------------------
# canonical JSON


def format_float(x: float) -> str:
    """17-significant-digit decimal form; round-trips the double exactly."""
    if x != x or math.isinf(x):
        raise ValueError("non-finite floats are not serialisable")
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Deterministic JSON text: insertion-ordered keys, %.17g floats."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {dumps_canonical(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot canonically serialise {type(obj).__name__}")


def write_result(result: dict) -> str:
    """Render a result mapping with the fixed top-level key order."""
    ordered = {key: result.get(key) for key in RESULT_KEYS}
    return dumps_canonical(ordered) + "\n"


def parse_result(text: str) -> dict:
    return json.loads(text)


# ---------------------------------------------------------------------------
# value encoding helpers


def encode_complex(value) -> dict:
    value = complex(value)
    return {"re": float(value.real), "im": float(value.imag)}


def encode_vector(vec) -> list:
    """Vector as a list of floats, or {re, im} objects when truly complex."""
    arr = np.asarray(vec)
    if np.iscomplexobj(arr) and np.any(
        np.abs(arr.imag) > REAL_DEMOTION_TOL * (1.0 + np.abs(arr.real))
    ):
        return [encode_complex(x) for x in arr]
    return [float(x) for x in arr.real]


def encode_classification(classification, decomposition=None) -> dict:
    out = {"kind": classification.kind.value}
    if classification.is_regular:
        spectrum = classification.spectrum
        out["p"] = spectrum.n_finite
        out["q"] = spectrum.n_infinite
        out["q_star"] = decomposition.index if decomposition is not None else None
        out["eigenvalues"] = [
            {"re": float(val.real), "im": float(val.imag), "multiplicity": mult}
            for val, mult in spectrum.eigenvalues
        ]
    else:
        out["p"] = None
        out["q"] = None
        out["q_star"] = None
        out["eigenvalues"] = None
    return out


def encode_verdict(verdict) -> dict:
    return {
        "consistent": bool(verdict.consistent),
        "coefficient": encode_vector(verdict.coefficient),
        "distance": float(verdict.distance),
        "projected_initial": encode_vector(verdict.projected),
        "tolerance": float(verdict.tolerance),
    }


def encode_trajectory(trajectory) -> dict:
    return {
        "kind": trajectory.kind.value,
        "horizon": trajectory.horizon,
        "states": [encode_vector(row) for row in trajectory.states],
        "max_residual": float(trajectory.max_residual),
        "coefficient": encode_vector(trajectory.coefficient),
    }


def encode_residual_report(report) -> dict:
    return {
        "residuals": [float(r) for r in report.residuals],
        "max_residual": float(report.max_residual),
        "tolerance": float(report.tolerance),
        "passed": bool(report.passed),
    }


def trajectory_csv(trajectory) -> str:
    """Trajectory table ``k, y1, ..., ym``; real parts only.

    Raises
    ------
    ValueError
        If any state has an imaginary part above the demotion tolerance.
    """
    states = np.asarray(trajectory.states)
    if np.iscomplexobj(states) and np.any(
        np.abs(states.imag) > REAL_DEMOTION_TOL * (1.0 + np.abs(states.real))
    ):
        raise ValueError("trajectory has genuinely complex states; use the JSON format")
    m = states.shape[1]
    lines = ["k," + ",".join(f"y{i + 1}" for i in range(m))]
    for k, row in enumerate(states.real):
        lines.append(str(k) + "," + ",".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"
