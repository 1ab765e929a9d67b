"""Finite-dimensional operators, adjoints and the covering bounds for T*(B_{Y*}).

An operator T: (R^dx, norm_x) -> (R^dy, norm_y) is a dy x dx rational matrix.
The dual of l1 is linf, of linf is l1, of l2 is l2. Unit balls of l1 and
linf are polytopes, so suprema of linear functionals (and hence operator
norms and dual-norm distances) are exact maxima over their vertices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .covering import exact_diameter_cover, exact_intrinsic_cover
from .duality import bound_complex, bound_real, sup_abs
from .errors import PreconditionError, SizeCapError, StructureError
from .exact import Scalar, format_scalar, le, parse_scalar, smax, sqrt
from .semimetric import (
    DualityKernel,
    Field,
    induced_dA,
    induced_dB,
    space_from_points,
)

__all__ = [
    "NormTag",
    "VERTEX_DIM_CAP",
    "NormedPoint",
    "OperatorInstance",
    "norm",
    "ball_vertices",
    "sphere_sample",
    "transpose",
    "apply",
    "adjoint",
    "operator_norm",
    "NormingReport",
    "norming_check",
    "schauder_kernel",
    "schauder_bound",
    "SideReport",
    "SchauderReport",
    "schauder_report",
    "instance_from_json",
    "instance_to_json",
    "load_instance",
]

VERTEX_DIM_CAP = 16


class NormTag(str, Enum):
    L1 = "l1"
    LINF = "linf"
    L2 = "l2"

    @property
    def dual(self) -> "NormTag":
        return {NormTag.L1: NormTag.LINF, NormTag.LINF: NormTag.L1}.get(self, NormTag.L2)

    @property
    def polyhedral(self) -> bool:
        return self is not NormTag.L2


def norm(v: Sequence, tag: NormTag) -> Scalar:
    tag = NormTag(tag)
    if tag is NormTag.L1:
        return sum((abs(x) for x in v), Fraction(0))
    if tag is NormTag.LINF:
        return smax([Fraction(0)] + [abs(x) for x in v])
    return sqrt(sum((x * x for x in v), Fraction(0)))


def _signs(dim: int):
    if dim > VERTEX_DIM_CAP:
        raise SizeCapError(f"vertex enumeration in dimension {dim} > {VERTEX_DIM_CAP}")
    one = Fraction(1)
    for s in itertools.product((one, -one), repeat=dim):
        yield s


def ball_vertices(tag: NormTag, dim: int, *, symmetric: bool = True) -> list[tuple]:
    """Extreme points of the closed unit ball of a polyhedral norm.

    With ``symmetric=False`` only one of each pair +-v is returned, which
    suffices wherever absolute values of linear functionals are maximized.
    """
    tag = NormTag(tag)
    if tag is NormTag.L1:
        out = []
        for j in range(dim):
            e = [Fraction(0)] * dim
            e[j] = Fraction(1)
            out.append(tuple(e))
            if symmetric:
                out.append(tuple(-x for x in e))
        return out
    if tag is NormTag.LINF:
        verts = list(_signs(dim))
        if not symmetric:
            verts = [v for v in verts if v[0] > 0]
        return verts
    raise PreconditionError("the l2 ball has no finite vertex set; use sphere_sample")


def sphere_sample(dim: int, density: int) -> list[tuple]:
    """Rational points on the Euclidean unit sphere (inverse stereographic map).

    Images of the grid {-density..density}/density in R^(dim-1); an
    approximation of the sphere whose quality improves with ``density``.
    """
    if dim == 1:
        return [(Fraction(1),), (Fraction(-1),)]
    pts = set()
    grid = [Fraction(k, density) for k in range(-density, density + 1)]
    for u in itertools.product(grid, repeat=dim - 1):
        s = sum(x * x for x in u)
        p = tuple([2 * x / (1 + s) for x in u] + [(s - 1) / (1 + s)])
        pts.add(p)
        pts.add(tuple(-x for x in p))
    return sorted(pts)


def transpose(matrix: Sequence[Sequence]) -> tuple:
    return tuple(tuple(col) for col in zip(*matrix))


def apply(matrix: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in matrix)


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class NormedPoint:
    """A point of T(B_X) (or T*(B_{Y*})) with the ball element mapping to it."""

    point: tuple
    preimage: tuple


def operator_norm(matrix: Sequence[Sequence], norm_x, norm_y) -> Scalar:
    """||T||_{X -> Y}.

    l1 domain: max column norm. linf codomain: max dual norm of rows.
    linf domain: max over cube vertices. l2 -> l1 by duality with linf -> l2.
    l2 -> l2: largest singular value (float).
    """
    norm_x, norm_y = NormTag(norm_x), NormTag(norm_y)
    rows = [tuple(r) for r in matrix]
    if not rows or not rows[0]:
        raise StructureError("empty matrix")
    cols = transpose(rows)
    if norm_x is NormTag.L1:
        return smax(norm(c, norm_y) for c in cols)
    if norm_y is NormTag.LINF:
        return smax(norm(r, norm_x.dual) for r in rows)
    if norm_x is NormTag.LINF:
        return smax(norm(apply(rows, s), norm_y) for s in _signs(len(cols)))
    if norm_y is NormTag.L1:
        return smax(norm(apply(cols, s), NormTag.L2) for s in _signs(len(rows)))
    arr = np.array([[float(x) for x in r] for r in rows])
    return float(np.linalg.norm(arr, 2))


@dataclass(frozen=True)
class OperatorInstance:
    """T with named norms and norming subsets K of T(B_X), K_star of T*(B_{Y*})."""

    matrix: tuple
    norm_x: NormTag
    norm_y: NormTag
    K: tuple = ()
    K_star: tuple = ()
    exact_checks: bool = field(default=True, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.matrix)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise StructureError("matrix must be a non-empty rectangle")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "norm_x", NormTag(self.norm_x))
        object.__setattr__(self, "norm_y", NormTag(self.norm_y))
        K = tuple(self._point(p) for p in self.K)
        K_star = tuple(self._point(p) for p in self.K_star)
        T, Tt = rows, transpose(rows)
        for i, p in enumerate(K):
            if len(p.preimage) != self.dim_x or apply(T, p.preimage) != p.point:
                raise StructureError(f"K[{i}] is not T applied to its preimage")
            if not le(norm(p.preimage, self.norm_x), 1):
                raise StructureError(f"K[{i}] preimage lies outside the unit ball of X")
        for i, p in enumerate(K_star):
            if len(p.preimage) != self.dim_y or apply(Tt, p.preimage) != p.point:
                raise StructureError(f"K_star[{i}] is not T* applied to its preimage")
            if not le(norm(p.preimage, self.norm_y.dual), 1):
                raise StructureError(
                    f"K_star[{i}] preimage lies outside the unit ball of Y*"
                )
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "K_star", K_star)

    @staticmethod
    def _point(p) -> NormedPoint:
        if isinstance(p, NormedPoint):
            return NormedPoint(
                tuple(Fraction(x) for x in p.point), tuple(Fraction(x) for x in p.preimage)
            )
        return NormedPoint(
            tuple(Fraction(x) for x in p["point"]),
            tuple(Fraction(x) for x in p["preimage"]),
        )

    @property
    def dim_x(self) -> int:
        return len(self.matrix[0])

    @property
    def dim_y(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_matrix(cls, matrix, norm_x, norm_y) -> "OperatorInstance":
        """Instance with K = T(ext B_X) and K* = T*(ext B_{Y*}), one of each +-pair.

        Both are norming for polyhedral norms since |<Tv, y>| is maximized
        over the ball at an extreme point. For l2 a sphere sample is used and
        the norming property only holds approximately.
        """
        rows = tuple(tuple(Fraction(x) for x in r) for r in matrix)
        norm_x, norm_y = NormTag(norm_x), NormTag(norm_y)
        dx, dy = len(rows[0]), len(rows)
        xs = _extreme_or_sample(norm_x, dx)
        ys = _extreme_or_sample(norm_y.dual, dy)
        Tt = transpose(rows)
        K = [NormedPoint(apply(rows, v), v) for v in xs]
        K_star = [NormedPoint(apply(Tt, y), y) for y in ys]
        return cls(rows, norm_x, norm_y, tuple(K), tuple(K_star))

    def transposed(self) -> "OperatorInstance":
        """The adjoint as an operator Y* -> X*, with K and K* exchanged."""
        return OperatorInstance(
            transpose(self.matrix),
            self.norm_y.dual,
            self.norm_x.dual,
            self.K_star,
            self.K,
        )


def _extreme_or_sample(tag: NormTag, dim: int) -> list[tuple]:
    if tag.polyhedral:
        return ball_vertices(tag, dim, symmetric=False)
    return [p for p in sphere_sample(dim, 2) if next((x for x in p if x != 0), 0) > 0]


def adjoint(instance_or_matrix) -> tuple:
    """Matrix of T* (the transpose, for real instances)."""
    m = instance_or_matrix.matrix if isinstance(instance_or_matrix, OperatorInstance) else instance_or_matrix
    return transpose(m)


# --- norming ---------------------------------------------------------------


@dataclass(frozen=True)
class NormingReport:
    functionals: tuple
    lhs: tuple
    rhs: tuple
    passed: tuple

    @property
    def ok(self) -> bool:
        return all(self.passed)


def _sup_over_image(instance: OperatorInstance, y) -> Scalar:
    """sup over x in B_X of |<Tx, y>| = ||T* y||_{X*}."""
    Tt = transpose(instance.matrix)
    if instance.norm_x.polyhedral:
        return smax(
            abs(_dot(apply(instance.matrix, v), y))
            for v in ball_vertices(instance.norm_x, instance.dim_x, symmetric=False)
        )
    return norm(apply(Tt, y), NormTag.L2)


def norming_check(instance: OperatorInstance, test_functionals: Sequence) -> NormingReport:
    """Compare sup over K of |<u, y>| with sup over T(B_X) for each functional y."""
    ys = [tuple(Fraction(x) for x in y) for y in test_functionals]
    lhs, rhs, passed = [], [], []
    for y in ys:
        if len(y) != instance.dim_y:
            raise StructureError(f"functional {y} has wrong dimension")
        left = smax([Fraction(0)] + [abs(_dot(u.point, y)) for u in instance.K])
        right = _sup_over_image(instance, y)
        lhs.append(left)
        rhs.append(right)
        passed.append(left == right)
    return NormingReport(tuple(ys), tuple(lhs), tuple(rhs), tuple(passed))


# --- kernel and bound ------------------------------------------------------


def schauder_kernel(instance: OperatorInstance, b_sample: Sequence) -> DualityKernel:
    """h(a, b) = <T a, b> with A the preimages of K and B a sample of B_{Y*}."""
    if not instance.K:
        raise PreconditionError("instance has an empty K")
    bs = [tuple(Fraction(x) for x in b) for b in b_sample]
    if not bs:
        raise PreconditionError("b_sample must be non-empty")
    dual = instance.norm_y.dual
    for b in bs:
        if len(b) != instance.dim_y:
            raise StructureError(f"sample point {b} has wrong dimension")
        if not le(norm(b, dual), 1):
            raise PreconditionError(f"sample point {b} lies outside the unit ball of Y*")
    h = [[_dot(k.point, b) for b in bs] for k in instance.K]
    return DualityKernel(
        [f"K{i}" for i in range(len(instance.K))],
        [f"b{j}" for j in range(len(bs))],
        h,
        Field.REAL,
    )


def schauder_bound(field: Field | str, op_norm, delta, n_cover: int) -> int:
    """ceil(||T||/delta)**N (real) or ceil(sqrt(2)||T||/delta)**(2N) (complex)."""
    if n_cover < 1:
        raise PreconditionError("n_cover must be >= 1")
    if Field(field) is Field.COMPLEX:
        return bound_complex(op_norm, delta, n_cover)
    return bound_real(op_norm, delta, n_cover)


@dataclass(frozen=True)
class SideReport:
    """One direction: cover K in the codomain norm, measure the dual image."""

    n_cover: int
    kernel_n_A: int
    op_norm: Scalar
    sup_abs: Scalar
    measured: int
    kernel_measured: int
    bound: int
    holds: bool
    distances_match: bool
    approximate: bool


@dataclass(frozen=True)
class SchauderReport:
    epsilon: Scalar
    delta: Scalar
    forward: SideReport
    backward: SideReport | None

    @property
    def holds(self) -> bool:
        return self.forward.holds and (self.backward is None or self.backward.holds)


def _side(instance: OperatorInstance, epsilon, delta) -> SideReport:
    T = instance.matrix
    Tt = transpose(T)
    norm_y, dual_x = instance.norm_y, instance.norm_x.dual
    K_space = space_from_points(
        [k.point for k in instance.K], lambda u, v: norm([a - b for a, b in zip(u, v)], norm_y)
    )
    n_cover = exact_intrinsic_cover(K_space, epsilon).count
    op = operator_norm(T, instance.norm_x, norm_y)
    approximate = not (instance.norm_x.polyhedral and norm_y.polyhedral)
    if norm_y.dual.polyhedral:
        sample = ball_vertices(norm_y.dual, instance.dim_y)
    else:
        sample = sphere_sample(instance.dim_y, 2)
    kernel = schauder_kernel(instance, sample)
    dA, dB = induced_dA(kernel), induced_dB(kernel)
    image = [apply(Tt, b) for b in sample]
    image_space = space_from_points(
        image, lambda u, v: norm([a - b for a, b in zip(u, v)], dual_x)
    )
    distances_match = all(
        dA.dist[i][j] == K_space.dist[i][j] for i in range(len(K_space)) for j in range(len(K_space))
    ) and all(
        dB.dist[i][j] == image_space.dist[i][j]
        for i in range(len(image_space))
        for j in range(len(image_space))
    )
    radius = epsilon + delta
    measured = exact_diameter_cover(image_space, radius).count
    kernel_measured = exact_diameter_cover(dB, radius).count
    kernel_n_A = exact_intrinsic_cover(dA, epsilon).count
    bound = schauder_bound(Field.REAL, op, delta, n_cover)
    return SideReport(
        n_cover=n_cover,
        kernel_n_A=kernel_n_A,
        op_norm=op,
        sup_abs=sup_abs(kernel),
        measured=measured,
        kernel_measured=kernel_measured,
        bound=bound,
        holds=measured <= bound,
        distances_match=distances_match,
        approximate=approximate,
    )


def schauder_report(instance: OperatorInstance, epsilon, delta) -> SchauderReport:
    """Measured N^Delta of T*(B_{Y*}) (and of T(B_X) when K* is given) vs the bound.

    The measurement runs on the full vertex set of the dual ball, where
    polyhedral norms make every distance exact.
    """
    if not epsilon >= 0 or not delta > 0:
        raise PreconditionError("need epsilon >= 0 and delta > 0")
    forward = _side(instance, epsilon, delta)
    backward = _side(instance.transposed(), epsilon, delta) if instance.K_star else None
    return SchauderReport(epsilon, delta, forward, backward)


# --- serialization ---------------------------------------------------------


def instance_from_json(data) -> OperatorInstance:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        matrix = [[parse_scalar(x) for x in row] for row in data["matrix"]]
        conv = lambda pts: [  # noqa: E731
            {
                "point": [parse_scalar(x) for x in p["point"]],
                "preimage": [parse_scalar(x) for x in p["preimage"]],
            }
            for p in pts
        ]
        norm_x, norm_y = data["norm_x"], data["norm_y"]
        if "K" not in data and "K_star" not in data:
            return OperatorInstance.from_matrix(matrix, norm_x, norm_y)
        return OperatorInstance(
            matrix, norm_x, norm_y, conv(data.get("K", [])), conv(data.get("K_star", []))
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise StructureError(f"malformed operator instance: {exc}") from None


def load_instance(path) -> OperatorInstance:
    return instance_from_json(Path(path).read_text(encoding="utf-8"))


def instance_to_json(instance: OperatorInstance) -> dict:
    fmt = lambda v: [format_scalar(x) for x in v]  # noqa: E731
    return {
        "matrix": [fmt(r) for r in instance.matrix],
        "norm_x": instance.norm_x.value,
        "norm_y": instance.norm_y.value,
        "K": [{"point": fmt(p.point), "preimage": fmt(p.preimage)} for p in instance.K],
        "K_star": [
            {"point": fmt(p.point), "preimage": fmt(p.preimage)} for p in instance.K_star
        ],
    }
