"""Seeded random instances for property suites and the ``generate`` subcommand.

Every generator takes a ``random.Random`` and produces exact rational data.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .duality import PolyhedralSeminorm, verify_convex_bound
from .errors import PreconditionError
from .exact import ComplexPair, smax
from .schauder import NormTag, OperatorInstance
from .semimetric import DualityKernel, Field, FiniteSemimetricSpace, induced_dA, space_from_points

__all__ = [
    "SPACE_KINDS",
    "rational",
    "random_space",
    "random_kernel",
    "random_operator",
    "random_convex_instance",
    "random_centers",
    "random_point_set",
]

SPACE_KINDS = ("graph", "linf", "seminorm", "kernel")


def rational(rng: random.Random, lo: int = -1, hi: int = 1, den: int = 6) -> Fraction:
    """Uniform-ish rational in [lo, hi] with denominator dividing ``den``."""
    return Fraction(rng.randint(lo * den, hi * den), den)


def _graph_space(rng, n):
    # shortest paths over a random connected graph with positive rational weights
    INF = None
    D = [[Fraction(0) if i == j else INF for j in range(n)] for i in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    edges += [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
    for i, j in edges:
        w = Fraction(rng.randint(1, 12), rng.choice((1, 2, 3, 4)))
        if D[i][j] is INF or w < D[i][j]:
            D[i][j] = D[j][i] = w
    for k in range(n):
        for i in range(n):
            if D[i][k] is INF:
                continue
            for j in range(n):
                if D[k][j] is INF:
                    continue
                via = D[i][k] + D[k][j]
                if D[i][j] is INF or via < D[i][j]:
                    D[i][j] = via
    return D


def random_space(
    rng: random.Random, n: int, kind: str | None = None
) -> FiniteSemimetricSpace:
    """A random semimetric space on n points with rational distances.

    ``graph``: shortest-path metric. ``linf``: points of a coarse grid under
    l-infinity, repeats allowed. ``seminorm``: max |<w, p - q>| over a few
    functionals, so distinct points may be at distance 0. ``kernel``: the
    induced d_A of a random real kernel.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    kind = kind or rng.choice(SPACE_KINDS)
    if kind == "graph":
        return FiniteSemimetricSpace(list(range(n)), _graph_space(rng, n))
    if kind == "linf":
        dim = rng.randint(1, 3)
        pts = [tuple(rational(rng, -2, 2, 2) for _ in range(dim)) for _ in range(n)]
        return space_from_points(
            pts, lambda p, q: smax([Fraction(0)] + [abs(a - b) for a, b in zip(p, q)])
        )
    if kind == "seminorm":
        dim = rng.randint(1, 3)
        rows = [
            tuple(rational(rng, -2, 2, 2) for _ in range(dim))
            for _ in range(rng.randint(1, dim))
        ]
        p = PolyhedralSeminorm(rows)
        pts = [tuple(rational(rng, -1, 1, 3) for _ in range(dim)) for _ in range(n)]
        return space_from_points(pts, lambda u, v: p([a - b for a, b in zip(u, v)]))
    if kind == "kernel":
        return induced_dA(random_kernel(rng, n, rng.randint(1, 6)))
    raise PreconditionError(f"unknown space kind {kind!r}")


def random_kernel(
    rng: random.Random, n_a: int, n_b: int, field: Field | str = Field.REAL, den: int = 4
) -> DualityKernel:
    """Kernel with entries in [-1,1] (real) or Gaussian rationals in the unit square."""
    field = Field(field)
    if field is Field.REAL:
        h = [[rational(rng, -1, 1, den) for _ in range(n_b)] for _ in range(n_a)]
    else:
        h = [
            [ComplexPair(rational(rng, -1, 1, den), rational(rng, -1, 1, den)) for _ in range(n_b)]
            for _ in range(n_a)
        ]
    return DualityKernel(list(range(n_a)), list(range(n_b)), h, field)


def random_operator(
    rng: random.Random, max_dim: int = 4, norms: Sequence[str] = ("l1", "linf")
) -> OperatorInstance:
    """Random small matrix with K = T(ext B_X) and K* = T*(ext B_Y*)."""
    dx, dy = rng.randint(1, max_dim), rng.randint(1, max_dim)
    matrix = [[rational(rng, -2, 2, 2) for _ in range(dx)] for _ in range(dy)]
    return OperatorInstance.from_matrix(
        matrix, NormTag(rng.choice(norms)), NormTag(rng.choice(norms))
    )


def random_convex_instance(
    rng: random.Random, n_points: int = 8, max_rounds: int = 12
) -> tuple[list[tuple], PolyhedralSeminorm, Fraction]:
    """A symmetric sample of a convex body in R^2, a seminorm and an epsilon.

    The sample is closed under negation, contains the origin, and is
    completed with the points (1 - 2k/n) a* for the maximizer a* of the
    seminorm, n being the current covering number N_A(epsilon). Completion
    repeats until n is stable, so the sample represents the segment through
    a* at the resolution the covering number requires.
    """
    rows = [
        (rational(rng, -3, 3, 2), rational(rng, -3, 3, 2)) for _ in range(rng.randint(1, 3))
    ]
    if all(r == (0, 0) for r in rows):
        rows[0] = (Fraction(1), Fraction(0))
    p = PolyhedralSeminorm(rows)
    zero = (Fraction(0), Fraction(0))
    pts = {zero}
    for _ in range(n_points):
        v = (rational(rng, -1, 1, 4), rational(rng, -1, 1, 4))
        pts.add(v)
        pts.add((-v[0], -v[1]))
    C = max(p(v) for v in pts)
    if C == 0:
        return sorted(pts), p, Fraction(1)
    epsilon = C * Fraction(rng.randint(2, 8), 16)
    for _ in range(max_rounds):
        report = verify_convex_bound(sorted(pts), p, epsilon)
        if report.segment_witness:
            return sorted(pts), p, epsilon
        a_star = sorted(pts)[report.maximizer]
        n = report.n_A
        for k in range(n + 1):
            s = 1 - Fraction(2 * k, n)
            pts.add((s * a_star[0], s * a_star[1]))
    raise RuntimeError("segment completion did not stabilize")


def random_centers(
    rng: random.Random, max_count: int = 6, max_support: int = 8
) -> list[tuple]:
    """Finitely supported sequences with l1 norm at most 1."""
    out = []
    for _ in range(rng.randint(0, max_count)):
        length = rng.randint(0, max_support)
        raw = [Fraction(rng.randint(-4, 4)) for _ in range(length)]
        total = sum(abs(x) for x in raw)
        scale = Fraction(rng.randint(0, 4), 4)
        out.append(tuple(x * scale / total for x in raw) if total else tuple(raw))
    return out


def random_point_set(rng: random.Random, dim: int, count: int) -> list[tuple]:
    return [tuple(rational(rng, -5, 5, rng.randint(1, 7)) for _ in range(dim)) for _ in range(count)]

