"""Sampled quaternion-valued functions on uniform centered 2D grids.

A :class:`Grid2D` places spatial nodes at (m - n/2) h per axis, so the origin
is always a node and the induced frequency lattice (m - n/2) / (n h) is
centered the same way. Norms are plain Riemann sums with cell weight h1 h2;
this is spectrally accurate for the rapidly decaying signals the library
targets, and it keeps every tolerance reproducible.

Fields travel as line-oriented text (QFLD1): a header, then one line of four
coefficients per node in row-major order. Coefficients are printed with 17
significant digits, which round-trips binary64 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternion import qmodulus

__all__ = [
    "Grid2D",
    "QField",
    "FieldFormatError",
    "lp_norm",
    "weighted_sup",
    "write_field",
    "read_field",
    "save_field",
    "load_field",
]

FIELD_TAG = "QFLD1"

# log(DBL_MAX); weights exp(rate * r^2) beyond this are not representable
_EXP_OVERFLOW = 709.0


class FieldFormatError(ValueError):
    """Malformed field text; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Grid2D:
    """Uniform centered sampling lattice.

    n1, n2: even sample counts >= 4 per axis. h1, h2: positive spacings.
    """

    n1: int
    n2: int
    h1: float
    h2: float

    def __post_init__(self) -> None:
        for name, n in (("n1", self.n1), ("n2", self.n2)):
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise ValueError(f"{name} must be an integer, got {n!r}")
            if n < 4 or n % 2 != 0:
                raise ValueError(f"{name} must be even and >= 4, got {n}")
            object.__setattr__(self, name, int(n))
        for name, h in (("h1", self.h1), ("h2", self.h2)):
            h = float(h)
            if not (math.isfinite(h) and h > 0.0):
                raise ValueError(f"{name} must be a positive finite real, got {h!r}")
            object.__setattr__(self, name, h)

    def x1(self) -> np.ndarray:
        """Spatial nodes along axis 1."""
        return (np.arange(self.n1) - self.n1 // 2) * self.h1

    def x2(self) -> np.ndarray:
        return (np.arange(self.n2) - self.n2 // 2) * self.h2

    def xi1(self) -> np.ndarray:
        """Frequency nodes along axis 1; spacing 1 / (n1 h1)."""
        return (np.arange(self.n1) - self.n1 // 2) / (self.n1 * self.h1)

    def xi2(self) -> np.ndarray:
        return (np.arange(self.n2) - self.n2 // 2) / (self.n2 * self.h2)

    @property
    def cell(self) -> float:
        """Spatial quadrature weight."""
        return self.h1 * self.h2

    @property
    def freq_cell(self) -> float:
        """Frequency quadrature weight."""
        return 1.0 / (self.n1 * self.h1 * self.n2 * self.h2)

    def spatial_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x1(), self.x2(), indexing="ij")

    def freq_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xi1(), self.xi2(), indexing="ij")


def _check_values(grid: Grid2D, values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape == (grid.n1 * grid.n2, 4):
        values = values.reshape(grid.n1, grid.n2, 4)
    if values.shape != (grid.n1, grid.n2, 4):
        raise ValueError(
            f"values shape {values.shape} does not match grid "
            f"({grid.n1}, {grid.n2}, 4)")
    if not np.isfinite(values).all():
        raise ValueError("field contains non-finite values")
    values = values.copy()
    values.flags.writeable = False
    return values


class QField:
    """Quaternion samples on a Grid2D; immutable after construction.

    values has shape (n1, n2, 4) with the coefficient axis last; the flat
    row-major index is m = m1 * n2 + m2.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid2D, values):
        self.grid = grid
        self.values = _check_values(grid, values)

    def modulus(self) -> np.ndarray:
        return qmodulus(self.values)

    def node_radius_sq(self) -> np.ndarray:
        """|x|^2 at every node."""
        X1, X2 = self.grid.spatial_mesh()
        return X1 * X1 + X2 * X2

    @property
    def cell(self) -> float:
        return self.grid.cell


def lp_norm(field, p: float) -> float:
    """L^p norm by Riemann sum; p = inf gives the grid max of the modulus.

    Accepts a QField (spatial cell weight) or any object exposing
    ``modulus()`` and ``cell`` the same way, such as a SpectrumField with
    its frequency cell.
    """
    p = float(p)
    if p < 1.0:
        raise ValueError("invalid exponent")
    mod = field.modulus()
    if math.isinf(p):
        return float(mod.max())
    s = float((mod ** p).sum() * field.cell)
    return s ** (1.0 / p)


def weighted_sup(field, rate: float) -> float:
    """Max over nodes of modulus * exp(rate * |node|^2).

    For a QField the nodes are spatial; for a SpectrumField they are the
    frequency nodes. Raises ValueError when the corner weight would overflow.
    """
    rate = float(rate)
    r2 = field.node_radius_sq()
    if rate * float(r2.max()) > _EXP_OVERFLOW:
        raise ValueError("weight overflow; shrink extent or rate")
    return float((field.modulus() * np.exp(rate * r2)).max())


# ---------------------------------------------------------------------------
# QFLD1 text format


def _format_float(v: float) -> str:
    return "%.17g" % v


def _lines(tag: str, grid: Grid2D, values: np.ndarray) -> list[str]:
    head = f"{tag} {grid.n1} {grid.n2} {_format_float(grid.h1)} {_format_float(grid.h2)}"
    flat = values.reshape(-1, 4)
    body = [" ".join(_format_float(c) for c in row) for row in flat]
    return [head] + body


def write_field(field: QField, tag: str = FIELD_TAG) -> str:
    """Serialize to QFLD1 text; bit-exact round trip with read_field."""
    return "\n".join(_lines(tag, field.grid, field.values)) + "\n"


def _parse(text: str, tag: str) -> tuple[Grid2D, np.ndarray]:
    lines = text.splitlines()
    if not lines:
        raise FieldFormatError(1, "empty input")
    head = lines[0].split()
    if len(head) != 5 or head[0] != tag:
        raise FieldFormatError(1, f"malformed header, expected '{tag} n1 n2 h1 h2'")
    try:
        n1, n2 = int(head[1]), int(head[2])
        h1, h2 = float(head[3]), float(head[4])
        grid = Grid2D(n1, n2, h1, h2)
    except ValueError as e:
        raise FieldFormatError(1, f"bad header: {e}") from e
    rows = [ln for ln in lines[1:] if ln.strip()]
    if len(rows) != n1 * n2:
        raise FieldFormatError(
            len(lines), f"sample count mismatch: header wants {n1 * n2} rows, got {len(rows)}")
    values = np.empty((n1 * n2, 4))
    for i, ln in enumerate(rows):
        parts = ln.split()
        if len(parts) != 4:
            raise FieldFormatError(i + 2, f"expected 4 coefficients, got {len(parts)}")
        try:
            row = [float(t) for t in parts]
        except ValueError as e:
            raise FieldFormatError(i + 2, f"bad coefficient: {e}") from e
        if not all(math.isfinite(c) for c in row):
            raise FieldFormatError(i + 2, "non-finite value")
        values[i] = row
    return grid, values.reshape(n1, n2, 4)


def read_field(text: str | bytes, tag: str = FIELD_TAG) -> QField:
    """Parse QFLD1 text; errors carry the offending line number."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    grid, values = _parse(text, tag)
    return QField(grid, values)


def save_field(field: QField, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_field(field))


def load_field(path) -> QField:
    with open(path, "r", encoding="utf-8") as fh:
        return read_field(fh.read())
