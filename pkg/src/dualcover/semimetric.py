"""Finite semimetric spaces and the semimetrics induced by a duality kernel.

A kernel ``h`` on ``A x B`` induces

    d_A(a1, a2) = max_b |h(a1, b) - h(a2, b)|
    d_B(b1, b2) = max_a |h(a, b1) - h(a, b2)|

Both are semimetrics: distinct points may sit at distance zero.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

from .errors import StructureError
from .exact import (
    ComplexPair,
    Scalar,
    Surd,
    format_scalar,
    le,
    parse_scalar,
    smax,
    sqrt,
)

__all__ = [
    "Field",
    "FiniteSemimetricSpace",
    "DualityKernel",
    "Violation",
    "validate_space",
    "induced_dA",
    "induced_dB",
    "space_from_points",
    "read_space_csv",
    "write_space_csv",
    "space_to_csv",
    "kernel_from_json",
    "kernel_to_json",
    "load_kernel",
]


class Field(str, Enum):
    """Scalar field of a kernel; selects the interval or the disk bound."""

    REAL = "real"
    COMPLEX = "complex"


def _check_finite(x, where: str) -> None:
    if isinstance(x, float) and not math.isfinite(x):
        raise StructureError(f"non-finite entry {x!r} at {where}")
    if isinstance(x, ComplexPair):
        _check_finite(x.re, where)
        _check_finite(x.im, where)


@dataclass(frozen=True)
class FiniteSemimetricSpace:
    """Labeled points with an explicit pairwise distance matrix.

    Construction only checks structure (square, finite). Use
    :func:`validate_space` to check the semimetric axioms.
    """

    labels: tuple
    dist: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        rows = tuple(tuple(r) for r in self.dist)
        if len(rows) != len(labels):
            raise StructureError(
                f"{len(labels)} labels but {len(rows)} distance rows"
            )
        for i, row in enumerate(rows):
            if len(row) != len(rows):
                raise StructureError(f"distance matrix is not square (row {i})")
            for j, x in enumerate(row):
                if isinstance(x, ComplexPair):
                    raise StructureError(f"complex distance at ({i}, {j})")
                _check_finite(x, f"({i}, {j})")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", rows)

    def __len__(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Scalar:
        return self.dist[i][j]

    def diameter(self) -> Scalar:
        if len(self) == 0:
            return Fraction(0)
        return smax(x for row in self.dist for x in row)

    def is_exact(self) -> bool:
        return not any(isinstance(x, float) for row in self.dist for x in row)

    def subspace(self, indices: Sequence[int]) -> "FiniteSemimetricSpace":
        return FiniteSemimetricSpace(
            [self.labels[i] for i in indices],
            [[self.dist[i][j] for j in indices] for i in indices],
        )

    def relabel(self, perm: Sequence[int]) -> "FiniteSemimetricSpace":
        """Space whose k-th point is this space's point ``perm[k]``."""
        return self.subspace(perm)


class Violation(NamedTuple):
    axiom: str
    indices: tuple
    detail: str


def validate_space(space: FiniteSemimetricSpace) -> list[Violation]:
    """Return every violated semimetric axiom; an empty list means valid."""
    n = len(space)
    D = space.dist
    out: list[Violation] = []
    for i in range(n):
        if D[i][i] != 0:
            out.append(Violation("zero-diagonal", (i,), f"d({i},{i}) = {D[i][i]}"))
        for j in range(n):
            if D[i][j] < 0:
                out.append(Violation("nonnegativity", (i, j), f"d = {D[i][j]}"))
            if j > i and not (le(D[i][j], D[j][i]) and le(D[j][i], D[i][j])):
                out.append(
                    Violation("symmetry", (i, j), f"{D[i][j]} != {D[j][i]}")
                )
    approx = [[float(x) for x in row] for row in D]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # float prefilter; exact check only near equality
                slack = approx[i][j] + approx[j][k] - approx[i][k]
                if slack > 1e-6 * (1 + abs(approx[i][k])):
                    continue
                if not le(D[i][k], D[i][j] + D[j][k]):
                    out.append(
                        Violation(
                            "triangle",
                            (i, j, k),
                            f"d({i},{k}) = {format_scalar(D[i][k])} > "
                            f"d({i},{j}) + d({j},{k})",
                        )
                    )
    return out


def _coerce_entry(x, field: Field):
    if field is Field.COMPLEX:
        if isinstance(x, ComplexPair):
            return x
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return ComplexPair(x[0], x[1])
        return ComplexPair(x, Fraction(0))
    if isinstance(x, ComplexPair):
        if x.im != 0:
            raise StructureError("real kernel has an entry with nonzero imaginary part")
        return x.re
    if isinstance(x, (tuple, list)):
        raise StructureError("real kernel has a pair-valued entry")
    return x


@dataclass(frozen=True)
class DualityKernel:
    """Matrix ``h[i][j] = h(a_i, b_j)`` over two non-empty labeled sets."""

    a_labels: tuple
    b_labels: tuple
    h: tuple
    field: Field = Field.REAL

    def __post_init__(self):
        field = Field(self.field)
        a = tuple(self.a_labels)
        b = tuple(self.b_labels)
        if not a or not b:
            raise StructureError("kernel index sets A and B must be non-empty")
        rows = []
        if len(self.h) != len(a):
            raise StructureError(f"h has {len(self.h)} rows, expected |A| = {len(a)}")
        for i, row in enumerate(self.h):
            if len(row) != len(b):
                raise StructureError(
                    f"h row {i} has {len(row)} entries, expected |B| = {len(b)}"
                )
            new = tuple(_coerce_entry(x, field) for x in row)
            for j, x in enumerate(new):
                _check_finite(x, f"h[{i}][{j}]")
            rows.append(new)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a_labels", a)
        object.__setattr__(self, "b_labels", b)
        object.__setattr__(self, "h", tuple(rows))
        # induced spaces are memoized; the kernel is immutable
        object.__setattr__(self, "_induced_cache", {})

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.a_labels), len(self.b_labels)

    def transpose(self) -> "DualityKernel":
        """Swap the roles of A and B."""
        return DualityKernel(
            self.b_labels,
            self.a_labels,
            [list(col) for col in zip(*self.h)],
            self.field,
        )

    def scale(self, lam) -> "DualityKernel":
        if self.field is Field.COMPLEX:
            rows = [[z.scale(lam) for z in row] for row in self.h]
        else:
            rows = [[x * lam for x in row] for row in self.h]
        return DualityKernel(self.a_labels, self.b_labels, rows, self.field)

    def is_exact(self) -> bool:
        def flt(x):
            if isinstance(x, ComplexPair):
                return isinstance(x.re, float) or isinstance(x.im, float)
            return isinstance(x, float)

        return not any(flt(x) for row in self.h for x in row)


def _row_distance(r1, r2, field: Field):
    if field is Field.COMPLEX:
        return sqrt(smax((x - y).abs2() for x, y in zip(r1, r2)))
    return smax(abs(x - y) for x, y in zip(r1, r2))


def _induced(labels, rows, field: Field) -> FiniteSemimetricSpace:
    n = len(rows)
    zero = Fraction(0)
    D = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            D[i][j] = D[j][i] = _row_distance(rows[i], rows[j], field)
    if any(isinstance(x, float) for row in rows for x in _flat(row)):
        D = [[float(x) for x in row] for row in D]
    return FiniteSemimetricSpace(labels, D)


def _flat(row):
    for x in row:
        if isinstance(x, ComplexPair):
            yield x.re
            yield x.im
        else:
            yield x


def induced_dA(kernel: DualityKernel) -> FiniteSemimetricSpace:
    """The semimetric d_A on the A-labels of ``kernel``."""
    cache = kernel._induced_cache
    if "A" not in cache:
        cache["A"] = _induced(kernel.a_labels, kernel.h, kernel.field)
    return cache["A"]


def induced_dB(kernel: DualityKernel) -> FiniteSemimetricSpace:
    """The semimetric d_B on the B-labels of ``kernel``."""
    cache = kernel._induced_cache
    if "B" not in cache:
        cache["B"] = _induced(kernel.b_labels, list(zip(*kernel.h)), kernel.field)
    return cache["B"]


def space_from_points(
    points: Sequence, distance: Callable, labels: Sequence | None = None
) -> FiniteSemimetricSpace:
    """Distance matrix of ``points`` under ``distance(p, q)``."""
    n = len(points)
    if labels is None:
        labels = list(range(n))
    zero = Fraction(0)
    D = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            D[i][j] = D[j][i] = distance(points[i], points[j])
    return FiniteSemimetricSpace(labels, D)


# --- serialization ---------------------------------------------------------


def space_to_csv(space: FiniteSemimetricSpace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([str(x) for x in space.labels])
    for row in space.dist:
        if any(isinstance(x, Surd) for x in row):
            raise StructureError("irrational distances have no CSV form")
        w.writerow([format_scalar(x) for x in row])
    return buf.getvalue()


def write_space_csv(space: FiniteSemimetricSpace, path) -> None:
    Path(path).write_text(space_to_csv(space), encoding="utf-8")


def read_space_csv(source, *, allow_float: bool = False) -> FiniteSemimetricSpace:
    """Read a distance matrix: header row of labels, then one row per point.

    ``source`` is a path or the CSV text itself.
    """
    if isinstance(source, Path) or (
        isinstance(source, str) and "\n" not in source and Path(source).exists()
    ):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise StructureError("empty CSV")
    labels = [c.strip() for c in rows[0]]
    try:
        dist = [[parse_scalar(c, allow_float=allow_float) for c in r] for r in rows[1:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"bad distance entry: {exc}") from None
    return FiniteSemimetricSpace(labels, dist)


def _parse_entry(x, field: Field, allow_float: bool):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise StructureError(f"complex entry must be [re, im], got {x!r}")
        return ComplexPair(
            parse_scalar(x[0], allow_float=allow_float),
            parse_scalar(x[1], allow_float=allow_float),
        )
    v = parse_scalar(x, allow_float=allow_float)
    return ComplexPair(v, v * 0) if field is Field.COMPLEX else v


def kernel_from_json(data, *, allow_float: bool = False) -> DualityKernel:
    """Build a kernel from the JSON instance format (dict or JSON text)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        field = Field(data.get("field", "real"))
        h = [[_parse_entry(x, field, allow_float) for x in row] for row in data["h"]]
        a_labels = data.get("a_labels") or [f"a{i}" for i in range(len(h))]
        b_labels = data.get("b_labels") or [
            f"b{j}" for j in range(len(h[0]) if h else 0)
        ]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise StructureError(f"malformed kernel JSON: {exc}") from None
    return DualityKernel(a_labels, b_labels, h, field)


def load_kernel(path, *, allow_float: bool = False) -> DualityKernel:
    return kernel_from_json(
        Path(path).read_text(encoding="utf-8"), allow_float=allow_float
    )


def kernel_to_json(kernel: DualityKernel) -> dict:
    return {
        "a_labels": list(kernel.a_labels),
        "b_labels": list(kernel.b_labels),
        "h": [[format_scalar(x) for x in row] for row in kernel.h],
        "field": kernel.field.value,
    }
