"""Dual covering: from an epsilon-net of (A, d_A) to a diameter cover of (B, d_B).

Given a net F = {a_1, ..., a_n} of A and a cover of the scalar range
{|z| <= C} by pieces of radius delta, every b is labelled with the
multi-index of pieces containing h(a_1, b), ..., h(a_n, b). Points sharing
a label are within 2*(epsilon + delta) of each other in d_B, which yields

    N_B^Delta(eps + delta) <= ceil(C/delta)^n              (real h)
    N_B^Delta(eps + delta) <= ceil(sqrt(2)*C/delta)^(2n)   (complex h)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .covering import covering_radius, exact_intrinsic_cover
from .errors import PreconditionError, StructureError
from .exact import ComplexPair, Scalar, ceil_ratio, le, smax, sqrt
from .semimetric import DualityKernel, Field, induced_dA, induced_dB

__all__ = [
    "ScalarCover",
    "DualCoverPartition",
    "ConvexCaseBounds",
    "ConvexBoundReport",
    "PolyhedralSeminorm",
    "sup_abs",
    "interval_cover",
    "disk_cover",
    "grid_partition",
    "bound_real",
    "bound_complex",
    "convex_case_bounds",
    "verify_convex_bound",
]


def sup_abs(kernel: DualityKernel) -> Scalar:
    """C = max |h(a, b)| over the whole kernel."""
    if kernel.field is Field.COMPLEX:
        return sqrt(smax(z.abs2() for row in kernel.h for z in row))
    return smax(abs(x) for row in kernel.h for x in row)


def _times_sqrt2(x):
    if isinstance(x, float):
        return x * math.sqrt(2.0)
    return x * sqrt(Fraction(2))


def _check_delta(delta) -> None:
    if not delta > 0:
        raise PreconditionError(f"delta must be > 0, got {delta}")


@dataclass(frozen=True)
class ScalarCover:
    """Closed intervals (real) or closed disks (complex) covering |z| <= C.

    Pieces sit on a grid centred at the origin: ``per_axis`` intervals of
    length 2*delta, or ``per_axis**2`` disks of radius delta whose centres
    have pitch sqrt(2)*delta (each disk contains its grid square).
    """

    kind: str
    radius: Scalar
    per_axis: int
    pieces: tuple

    @property
    def count(self) -> int:
        return len(self.pieces)

    def contains(self, q: int, value) -> bool:
        """Whether piece ``q`` (1-based) contains ``value``."""
        c = self.pieces[q - 1]
        if self.kind == "interval":
            return le(c - self.radius, value) and le(value, c + self.radius)
        z = value if isinstance(value, ComplexPair) else ComplexPair(value)
        # float filter; the exact test runs only near the boundary
        fx, fy = float(z.re) - float(c[0]), float(z.im) - float(c[1])
        gap = fx * fx + fy * fy - float(self.radius) ** 2
        if abs(gap) > 1e-9 * (1.0 + float(self.radius) ** 2 + fx * fx + fy * fy):
            return gap < 0
        dx, dy = z.re - c[0], z.im - c[1]
        return le(dx * dx + dy * dy, self.radius * self.radius)

    def first_piece(self, value) -> int:
        """Smallest 1-based index of a piece containing ``value``."""
        if self.kind == "interval":
            M, d = self.per_axis, self.radius
            q = max(1, ceil_ratio(value + M * d, 2 * d))
            if q <= M and self.contains(q, value):
                return q
            raise PreconditionError(f"value {value} lies outside the interval cover")
        z = value if isinstance(value, ComplexPair) else ComplexPair(value)
        k = self.per_axis
        half = float(self.radius) / math.sqrt(2.0)
        fi = (float(z.re) / half + k - 1) / 2
        fj = (float(z.im) / half + k - 1) / 2
        irange = range(max(0, math.floor(fi) - 2), min(k, math.ceil(fi) + 3))
        jrange = range(max(0, math.floor(fj) - 2), min(k, math.ceil(fj) + 3))
        for i in irange:
            for j in jrange:
                q = i * k + j + 1
                if self.contains(q, z):
                    return q
        raise PreconditionError(f"value {value} lies outside the disk cover")


def interval_cover(C, delta) -> ScalarCover:
    """max(1, ceil(C/delta)) closed intervals of length 2*delta covering [-C, C]."""
    _check_delta(delta)
    if C < 0:
        raise PreconditionError("C must be >= 0")
    M = max(1, ceil_ratio(C, delta))
    centers = tuple((2 * q - 1 - M) * delta for q in range(1, M + 1))
    return ScalarCover("interval", delta, M, centers)


def disk_cover(C, delta) -> ScalarCover:
    """k**2 closed disks of radius delta, k = max(1, ceil(sqrt(2)*C/delta))."""
    _check_delta(delta)
    if C < 0:
        raise PreconditionError("C must be >= 0")
    k = max(1, ceil_ratio(_times_sqrt2(C), delta))
    if isinstance(delta, float):
        half = delta / math.sqrt(2.0)
    else:
        half = delta * sqrt(Fraction(1, 2))
    axis = [(2 * i + 1 - k) * half for i in range(k)]
    centers = tuple((x, y) for x in axis for y in axis)
    return ScalarCover("disk", delta, k, centers)


def bound_real(C, delta, n: int) -> int:
    """ceil(C/delta)**n, with the degenerate base clamped to 1."""
    _check_delta(delta)
    if C < 0 or n < 0:
        raise PreconditionError("need C >= 0 and n >= 0")
    return max(1, ceil_ratio(C, delta)) ** n


def bound_complex(C, delta, n: int) -> int:
    """ceil(sqrt(2)*C/delta)**(2n), with the degenerate base clamped to 1."""
    _check_delta(delta)
    if C < 0 or n < 0:
        raise PreconditionError("need C >= 0 and n >= 0")
    return max(1, ceil_ratio(_times_sqrt2(C), delta)) ** (2 * n)


@dataclass(frozen=True)
class DualCoverPartition:
    """Classes B(mu) of the grid construction and their measured d_B diameters.

    ``classes`` maps each non-empty multi-index ``mu`` (1-based piece indices,
    one per net point) to the B-indices assigned to it, in lexicographic order.
    """

    epsilon: Scalar
    delta: Scalar
    net: tuple
    sup_abs: Scalar
    pieces_per_coordinate: int
    cell_count_bound: int
    classes: tuple
    measured_diameters: tuple
    field: Field

    @property
    def nonempty_count(self) -> int:
        return len(self.classes)

    @property
    def diameter_limit(self) -> Scalar:
        return 2 * (self.epsilon + self.delta)

    def assignment(self, n_b: int) -> list[int]:
        out = [-1] * n_b
        for c, (_, members) in enumerate(self.classes):
            for b in members:
                out[b] = c
        return out

    def violations(self) -> list[str]:
        """Invariant failures (empty when the construction behaved)."""
        issues = []
        limit = self.diameter_limit
        for (mu, _), diam in zip(self.classes, self.measured_diameters):
            if not le(diam, limit):
                issues.append(f"class {mu} has diameter {diam} > {limit}")
        if self.nonempty_count > self.cell_count_bound:
            issues.append(
                f"{self.nonempty_count} classes exceed the bound {self.cell_count_bound}"
            )
        return issues


def grid_partition(
    kernel: DualityKernel, net: Sequence[int], delta, epsilon=None
) -> DualCoverPartition:
    """Partition B by which scalar pieces contain h(a_j, b) for a_j in ``net``.

    ``net`` must be an epsilon-net of (A, d_A); this is checked. When
    ``epsilon`` is omitted the net's own covering radius is used. A value
    lying in several pieces goes to the lowest-indexed one, so the classes
    partition B.
    """
    _check_delta(delta)
    net = tuple(net)
    n_a, n_b = kernel.shape
    if not net:
        raise PreconditionError("net must be non-empty")
    if any(not 0 <= a < n_a for a in net) or len(set(net)) != len(net):
        raise PreconditionError(f"net {net} is not a set of A-indices")
    dA = induced_dA(kernel)
    radius = covering_radius(dA, net)
    if epsilon is None:
        epsilon = radius
    elif epsilon < 0 or not le(radius, epsilon):
        raise PreconditionError(
            f"net is not an epsilon-net: covering radius {radius} > epsilon {epsilon}"
        )
    C = sup_abs(kernel)
    if kernel.field is Field.COMPLEX:
        cover = disk_cover(C, delta)
    else:
        cover = interval_cover(C, delta)
    cells: dict[tuple, list[int]] = {}
    for b in range(n_b):
        mu = tuple(cover.first_piece(kernel.h[a][b]) for a in net)
        cells.setdefault(mu, []).append(b)
    dB = induced_dB(kernel)
    classes = tuple((mu, tuple(cells[mu])) for mu in sorted(cells))
    zero = Fraction(0) if dB.is_exact() else 0.0
    diameters = tuple(
        smax([zero] + [dB.dist[x][y] for x in members for y in members if x < y])
        for _, members in classes
    )
    return DualCoverPartition(
        epsilon=epsilon,
        delta=delta,
        net=net,
        sup_abs=C,
        pieces_per_coordinate=cover.count,
        cell_count_bound=cover.count ** len(net),
        classes=classes,
        measured_diameters=diameters,
        field=kernel.field,
    )


# --- absolutely convex case -------------------------------------------------


@dataclass(frozen=True)
class ConvexCaseBounds:
    """C <= epsilon*N_A(epsilon) substituted into the real and complex bounds."""

    epsilon: Scalar
    n_A: int
    c_bound: Scalar

    def real(self, delta) -> int:
        return bound_real(self.c_bound, delta, self.n_A)

    def complex(self, delta) -> int:
        return bound_complex(self.c_bound, delta, self.n_A)


def convex_case_bounds(epsilon, n_A: int) -> ConvexCaseBounds:
    if not epsilon > 0 or n_A < 1:
        raise PreconditionError("need epsilon > 0 and n_A >= 1")
    return ConvexCaseBounds(epsilon, n_A, epsilon * n_A)


class PolyhedralSeminorm:
    """p(v) = max_i |<w_i, v>| for a finite list of rows w_i.

    Rank-deficient row sets give seminorms that vanish on non-zero vectors.
    """

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(r) for r in rows)
        if not self.rows:
            raise StructureError("a seminorm needs at least one row")
        self.dim = len(self.rows[0])
        if any(len(r) != self.dim for r in self.rows):
            raise StructureError("seminorm rows have different lengths")

    def __call__(self, v) -> Scalar:
        return smax(abs(sum(w * x for w, x in zip(row, v))) for row in self.rows)

    def __repr__(self) -> str:
        return f"PolyhedralSeminorm({[list(map(str, r)) for r in self.rows]})"


@dataclass(frozen=True)
class ConvexBoundReport:
    epsilon: Scalar
    max_p: Scalar
    maximizer: int
    n_A: int
    centers: tuple
    bound: Scalar
    holds: bool
    segment_witness: bool


def verify_convex_bound(
    points: Sequence[Sequence],
    seminorm: PolyhedralSeminorm | Sequence[Sequence],
    epsilon,
    *,
    cap: int | None = None,
) -> ConvexBoundReport:
    """Check max p(a) <= epsilon * N_A(epsilon) on a symmetric sample.

    The sample is turned into the kernel h(a, w) = <w, a> over the seminorm
    rows, so d_A(a, a') = p(a - a'), h(0, .) = 0 and C = max p. N_A is computed
    exactly; ``cap`` limits the sample size (``None``: no limit).

    ``segment_witness`` reports whether the sample contains the points
    (1 - 2k/n) a* (k = 0..n) on the segment through the maximizer a*. When it
    does, the inequality is guaranteed by pigeonhole; sparse samples without
    it can legitimately violate the inequality.
    """
    if not isinstance(seminorm, PolyhedralSeminorm):
        seminorm = PolyhedralSeminorm(seminorm)
    if not epsilon > 0:
        raise PreconditionError("epsilon must be > 0")
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise PreconditionError("empty sample")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts) or dim != seminorm.dim:
        raise StructureError("sample points and seminorm rows disagree in dimension")
    present = set(pts)
    if tuple([Fraction(0)] * dim) not in present:
        raise PreconditionError("sample must contain the origin")
    for p in pts:
        if tuple(-x for x in p) not in present:
            raise PreconditionError(f"sample is not symmetric: -{p} missing")
    kernel = DualityKernel(
        list(range(len(pts))),
        list(range(len(seminorm.rows))),
        [[sum(w * x for w, x in zip(row, p)) for row in seminorm.rows] for p in pts],
    )
    C = sup_abs(kernel)
    maximizer = next(i for i, p in enumerate(pts) if seminorm(p) == C)
    cover = exact_intrinsic_cover(induced_dA(kernel), epsilon, cap=cap)
    n = cover.count
    a_star = pts[maximizer]
    segment = all(
        tuple((1 - Fraction(2 * k, n)) * x for x in a_star) in present
        for k in range(n + 1)
    )
    bound = epsilon * n
    return ConvexBoundReport(
        epsilon=epsilon,
        max_p=C,
        maximizer=maximizer,
        n_A=n,
        centers=cover.certificate,
        bound=bound,
        holds=le(C, bound),
        segment_witness=segment,
    )
