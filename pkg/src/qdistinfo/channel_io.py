"""Channel files: UTF-8 JSON with explicit [re, im] pairs.

Schema: top-level ``dim`` (int), ``rho0`` and ``rho1`` (dim x dim arrays of
two-element [re, im] number rows, row-major), optional ``t`` in [0, 1]
defaulting to 0.5. The writer emits every float with 17 significant digits so
a save/load round trip is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .states import BinaryChannel, DensityMatrix


def fmt17(x: float) -> str:
    """17 significant digits, enough to reconstruct the double exactly."""
    return f"{float(x):.16e}"


def matrix_lines(mat: np.ndarray, indent: str) -> list[str]:
    """JSON rows of [re, im] pairs for a complex matrix, one line per row."""
    lines = []
    for i, row in enumerate(mat):
        pairs = ", ".join(f"[{fmt17(z.real)}, {fmt17(z.imag)}]" for z in row)
        comma = "," if i + 1 < mat.shape[0] else ""
        lines.append(f"{indent}[{pairs}]{comma}")
    return lines


def save_channel(channel: BinaryChannel, path) -> None:
    """Write a channel file (see module docstring for the schema)."""
    lines = ["{", f'  "dim": {channel.dim},', f'  "t": {fmt17(channel.t)},']
    for name, rho in (("rho0", channel.rho0), ("rho1", channel.rho1)):
        comma = "," if name == "rho0" else ""
        lines.append(f'  "{name}": [')
        lines.extend(matrix_lines(rho.mat, "    "))
        lines.append(f"  ]{comma}")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_channel(path) -> BinaryChannel:
    """Read and fully re-validate a channel file.

    Raises ValidationError for parse or schema problems (naming the offending
    field), FileNotFoundError if the file is missing.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"channel file does not parse as JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("channel file must contain a JSON object at top level")

    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"dim: expected a positive integer, got {dim!r}")

    t = doc.get("t", 0.5)
    if not isinstance(t, (int, float)) or isinstance(t, bool):
        raise ValidationError(f"t: expected a number, got {t!r}")
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"t: must lie in [0, 1], got {t}")

    states = {}
    for name in ("rho0", "rho1"):
        if name not in doc:
            raise ValidationError(f"{name}: missing required field")
        try:
            mat = _parse_matrix(doc[name], dim)
        except ValidationError as exc:
            raise ValidationError(f"{name}: {exc}") from exc
        try:
            states[name] = DensityMatrix(mat)
        except ValidationError as exc:
            raise ValidationError(f"{name}: {exc}") from exc

    return BinaryChannel(states["rho0"], states["rho1"], float(t))


def _parse_matrix(obj, dim: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ValidationError(f"expected {dim} rows")
    mat = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ValidationError(f"row {i}: expected {dim} entries")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise ValidationError(f"entry ({i},{j}): expected an [re, im] number pair")
            mat[i, j] = complex(pair[0], pair[1])
    return mat
