"""Worked examples: cube coverings, sharp instances, divergence witnesses, recentering.

Each builder returns a frozen report whose boolean fields are computed from
the exact solvers, never asserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .covering import DIAMETER_CAP, covering_radius, exact_diameter_cover, exact_intrinsic_cover
from .duality import bound_real, grid_partition, sup_abs
from .errors import PreconditionError, SizeCapError, StructureError
from .exact import Scalar, parse_scalar, smax, sqrt
from .schauder import (
    NormTag,
    OperatorInstance,
    ball_vertices,
    norming_check,
    operator_norm,
    schauder_bound,
)
from .semimetric import DualityKernel, induced_dA, induced_dB, space_from_points

__all__ = [
    "CubeCoverResult",
    "cube_cover_number",
    "cube_grid",
    "L1IdentityReport",
    "example_l1_identity",
    "Example31Report",
    "example_31",
    "ex32_distance",
    "Example32Report",
    "example_32_truncated",
    "WitnessReport",
    "adversary_witness",
    "RecenterResult",
    "linf_recenter",
    "CounterexampleReport",
    "recenter_counterexample_check",
    "GalleryItem",
    "GALLERY",
    "run_example",
]


def _linf(u, v) -> Scalar:
    return smax([Fraction(0)] + [abs(a - b) for a, b in zip(u, v)])


def _l1(u, v) -> Scalar:
    return sum((abs(a - b) for a, b in zip(u, v)), Fraction(0))


def _least_root_ceiling(t: Fraction, n: int) -> int:
    """Least positive integer k with k**n >= t."""
    k = 1
    while k**n < t:
        k += 1
    return k


# --- cubes -----------------------------------------------------------------


@dataclass(frozen=True)
class CubeCoverResult:
    """Bounds on the number of cubes of side 2*rho covering [-1,1]^n.

    ``inv_power`` is rho**(-n); ``value`` is set only when the bounds meet.
    """

    n: int
    inv_power: Fraction
    lower: int
    upper: int
    exact: bool
    value: int | None


def cube_cover_number(n: int, rho=None, *, inv_power=None) -> CubeCoverResult:
    """N^Delta(rho) of the l-infinity cube [-1,1]^n.

    Either ``rho`` (rational) or ``inv_power`` = rho**(-n) may be given; the
    latter lets irrational radii such as (m^n - theta)**(-1/n) be handled
    exactly. Lower bound from volume, upper bound from the product grid.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if (rho is None) == (inv_power is None):
        raise PreconditionError("give exactly one of rho and inv_power")
    if rho is not None:
        rho = Fraction(rho)
        if rho <= 0:
            raise PreconditionError("rho must be > 0")
        t = 1 / rho**n
    else:
        t = Fraction(inv_power)
        if t <= 0:
            raise PreconditionError("inv_power must be > 0")
    if t <= 1:
        return CubeCoverResult(n, t, 1, 1, True, 1)
    lower = -((-t.numerator) // t.denominator)
    upper = _least_root_ceiling(t, n) ** n
    exact = lower == upper
    return CubeCoverResult(n, t, lower, upper, exact, upper if exact else None)


def cube_grid(n: int, per_axis: int, *, endpoints: bool = False) -> list[tuple]:
    """Product grid in [-1,1]^n.

    Cell midpoints of ``per_axis`` equal cells by default; with
    ``endpoints`` the values are equally spaced from -1 to 1 inclusive.
    """
    if per_axis < 1:
        raise PreconditionError("per_axis must be >= 1")
    if endpoints:
        if per_axis == 1:
            axis = [Fraction(0)]
        else:
            axis = [Fraction(-1) + Fraction(2 * k, per_axis - 1) for k in range(per_axis)]
    else:
        axis = [Fraction(-1) + Fraction(2 * k + 1, per_axis) for k in range(per_axis)]
    return [tuple(p) for p in itertools.product(axis, repeat=n)]


# --- the l1 identity -------------------------------------------------------


@dataclass(frozen=True)
class L1IdentityReport:
    n: int
    m: int
    theta: Fraction
    inv_power: Fraction
    rho: Scalar | None
    epsilon: Fraction
    delta: Scalar | None
    n_cover: int
    op_norm: Scalar
    norming: bool
    lhs: int
    lhs_witness: int | None
    rhs: int
    rhs_via_delta: int | None
    target: int
    equality: bool


def _root_inverse(t: Fraction, n: int):
    """t**(-1/n) when it is representable exactly, else None."""
    if n == 1:
        return 1 / t
    if n == 2:
        return sqrt(1 / t)
    return None


def _identity_rhs(t: Fraction, n: int, epsilon: Fraction) -> int:
    """(ceil(1/delta))**n with delta = t**(-1/n) - epsilon, in rationals.

    k >= 1/delta  iff  k * t**(-1/n) >= 1 + k * epsilon  iff  k**n >= t (1 + k epsilon)**n.
    """
    k = 1
    while k**n < t * (1 + k * epsilon) ** n:
        k += 1
    return k**n


def example_l1_identity(n: int, m: int, theta, epsilon=None) -> L1IdentityReport:
    """Identity on (R^n, l1) with K = {e_j}: both sides of the adjoint bound equal m^n.

    rho = (m^n - theta)**(-1/n) and delta = rho - epsilon. When ``epsilon``
    is omitted it is halved from 1/2 until the right-hand side is forced to m^n.
    """
    theta = Fraction(theta)
    if n < 1 or m < 2:
        raise PreconditionError("need n >= 1 and m >= 2")
    if not 0 < theta < 1:
        raise PreconditionError("theta must lie in (0, 1)")
    t = Fraction(m**n) - theta
    if not (m - 1) ** n < t < m**n:
        raise PreconditionError(
            f"theta={theta} violates (m-1)^n < m^n - theta < m^n for m={m}, n={n}"
        )
    if epsilon is None:
        epsilon = Fraction(1, 2)
        while not (t * (1 + 2 * epsilon * m) ** n < m**n and epsilon**n * t < 1):
            epsilon /= 2
    epsilon = Fraction(epsilon)
    if not (0 < epsilon < 1 and epsilon**n * t < 1):
        raise PreconditionError("epsilon must lie in (0, min(1, rho))")

    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    K = [{"point": row, "preimage": row} for row in eye]
    inst = OperatorInstance(eye, NormTag.L1, NormTag.L1, K)
    K_space = space_from_points([k.point for k in inst.K], _l1)
    n_cover = exact_intrinsic_cover(K_space, epsilon).count
    op = operator_norm(inst.matrix, inst.norm_x, inst.norm_y)
    norming = norming_check(inst, ball_vertices(NormTag.LINF, n)).ok

    cube = cube_cover_number(n, inv_power=t)
    lhs = cube.value if cube.exact else cube.upper
    rho = _root_inverse(t, n)
    lhs_witness = None
    if rho is not None and m**n <= DIAMETER_CAP:
        # m points per axis at spacing 2/(m-1) > 2 rho: no two share a class
        witness = space_from_points(cube_grid(n, m, endpoints=True), _linf)
        lhs_witness = exact_diameter_cover(witness, rho).count

    rhs = _identity_rhs(t, n_cover, epsilon) if n_cover == n else None
    delta = None if rho is None else rho - epsilon
    rhs_via_delta = None if delta is None else schauder_bound("real", op, delta, n_cover)
    if rhs is None:
        rhs = rhs_via_delta
    target = m**n
    equality = (
        cube.exact
        and lhs == rhs == target
        and (lhs_witness is None or lhs_witness == target)
        and (rhs_via_delta is None or rhs_via_delta == target)
    )
    return L1IdentityReport(
        n=n,
        m=m,
        theta=theta,
        inv_power=t,
        rho=rho,
        epsilon=epsilon,
        delta=delta,
        n_cover=n_cover,
        op_norm=op,
        norming=norming,
        lhs=lhs,
        lhs_witness=lhs_witness,
        rhs=rhs,
        rhs_via_delta=rhs_via_delta,
        target=target,
        equality=equality,
    )


# --- canonical vectors against cube centers --------------------------------


@dataclass(frozen=True)
class Example31Report:
    m: int
    n: int
    epsilon: Fraction
    delta: Fraction
    C: Fraction
    n_A: int
    measured: int
    partition_classes: int
    bound: int
    target: int
    equality: bool


def example_31(m: int, n: int, *, cap: int | None = DIAMETER_CAP) -> Example31Report:
    """A = {e_j}, B = the m^n centers of the sub-cubes of side 2/m, h = inner product."""
    if m < 2 or n < 1:
        raise PreconditionError("need m >= 2 and n >= 1")
    if cap is not None and m**n > cap:
        raise SizeCapError(f"m^n = {m**n} exceeds the diameter cap of {cap}")
    eps = Fraction(1, 3 * m * m)
    delta = Fraction(1, m) - Fraction(1, 2 * m * m)
    A = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    B = cube_grid(n, m)
    h = [[sum((x * y for x, y in zip(a, b)), Fraction(0)) for b in B] for a in A]
    kernel = DualityKernel([f"e{i + 1}" for i in range(n)], list(range(len(B))), h)
    C = sup_abs(kernel)
    net = exact_intrinsic_cover(induced_dA(kernel), eps)
    measured = exact_diameter_cover(induced_dB(kernel), eps + delta, cap=cap).count
    part = grid_partition(kernel, net.certificate, delta, eps)
    bound = bound_real(C, delta, net.count)
    target = m**n
    return Example31Report(
        m=m,
        n=n,
        epsilon=eps,
        delta=delta,
        C=C,
        n_A=net.count,
        measured=measured,
        partition_classes=part.nonempty_count,
        bound=bound,
        target=target,
        equality=measured == bound == target,
    )


# --- finitely supported sequences ------------------------------------------


def _trim(b: Sequence) -> tuple:
    b = [Fraction(x) for x in b]
    while b and b[-1] == 0:
        b.pop()
    return tuple(b)


def ex32_distance(b: Sequence, c: Sequence) -> Fraction:
    """sup over a in [0,1]^N of |sum a_n (b_n - c_n)|: the larger of the positive and negative mass."""
    L = max(len(b), len(c))
    b = list(b) + [0] * (L - len(b))
    c = list(c) + [0] * (L - len(c))
    pos = sum((max(Fraction(x) - y, Fraction(0)) for x, y in zip(b, c)), Fraction(0))
    neg = sum((max(Fraction(y) - x, Fraction(0)) for x, y in zip(b, c)), Fraction(0))
    return max(pos, neg)


def _in_ball(b) -> bool:
    return sum((abs(Fraction(x)) for x in b), Fraction(0)) <= 1


@dataclass(frozen=True)
class WitnessReport:
    point: tuple
    q: int
    distances: tuple
    min_distance: Fraction | None
    ok: bool


def adversary_witness(centers: Sequence[Sequence], rho) -> WitnessReport:
    """The spike e_q just past every center's support; it is >= 1 away from all of them.

    Since rho < 1, no finite set of centers has covering radius rho.
    """
    rho = Fraction(rho)
    if not rho < 1:
        raise PreconditionError("rho must be < 1")
    trimmed = [_trim(c) for c in centers]
    for c in trimmed:
        if not _in_ball(c):
            raise PreconditionError(f"center {c} has l1 norm > 1")
    q = 1 + max((len(c) for c in trimmed), default=0)
    e_q = tuple(Fraction(int(i == q - 1)) for i in range(q))
    dists = tuple(ex32_distance(e_q, c) for c in trimmed)
    low = min(dists) if dists else None
    return WitnessReport(e_q, q, dists, low, all(d >= 1 and d > rho for d in dists))


@dataclass(frozen=True)
class Example32Report:
    D: int
    grid: int
    rho: Fraction
    center_radius_A: Fraction
    n_A_half: int
    n_B_one: int
    n_B_diam_one: int
    pairwise_min: Fraction
    lower_bound: int
    formula_checked: bool
    open_questions: tuple


_FORMULA_CHECK_DIM = 8


def example_32_truncated(D: int, grid: int = 2, rho=Fraction(2, 5)) -> Example32Report:
    """Sequences truncated to length D.

    A = [0,1]^D (sampled on a product grid), B = the l1 ball. Reports
    N_A(1/2) = 1 through the constant-1/2 center, N_B(1) = N_B^Delta(1) = 1 on the
    vertex sample {0, +-e_i}, and N_B(rho) >= D for rho < 1/2 from the
    family {e_1..e_D} whose pairwise distances are 1 > 2 rho.
    """
    rho = Fraction(rho)
    if D < 1 or grid < 2:
        raise PreconditionError("need D >= 1 and grid >= 2")
    if not 0 < rho < Fraction(1, 2):
        raise PreconditionError("rho must lie in (0, 1/2)")
    half = Fraction(1, 2)
    axis = [Fraction(k, grid - 1) for k in range(grid)]
    # the grid is a product, so the l-infinity radius around (1/2,...) is attained per axis
    center_radius = max(abs(x - half) for x in axis)
    n_A_half = 1 if center_radius <= half else 0

    e = [tuple(Fraction(int(i == j)) for j in range(D)) for i in range(D)]
    zero = tuple([Fraction(0)] * D)
    sample = [zero] + e + [tuple(-x for x in v) for v in e]
    B_space = space_from_points(sample, ex32_distance)
    n_B_one = 1 if covering_radius(B_space, [0]) <= 1 else exact_intrinsic_cover(
        B_space, Fraction(1), cap=None
    ).count
    n_B_diam_one = (
        exact_diameter_cover(B_space, Fraction(1)).count
        if len(sample) <= DIAMETER_CAP
        else (1 if B_space.diameter() <= 2 else 0)
    )

    W = space_from_points(e, ex32_distance)
    pairwise = min(
        (W.d(i, j) for i in range(D) for j in range(i + 1, D)), default=Fraction(1)
    )
    if not pairwise > 2 * rho:
        raise StructureError("witness family is not 2 rho separated")
    lower = exact_diameter_cover(W, rho).count

    checked = True
    if D <= _FORMULA_CHECK_DIM:
        # the supremum of a linear form over [0,1]^D is attained at a vertex
        verts = list(itertools.product((Fraction(0), Fraction(1)), repeat=D))
        h = [[sum((x * y for x, y in zip(a, b)), Fraction(0)) for b in sample] for a in verts]
        dB = induced_dB(DualityKernel(list(range(len(verts))), list(range(len(sample))), h))
        checked = dB.dist == B_space.dist
    return Example32Report(
        D=D,
        grid=grid,
        rho=rho,
        center_radius_A=center_radius,
        n_A_half=n_A_half,
        n_B_one=n_B_one,
        n_B_diam_one=n_B_diam_one,
        pairwise_min=pairwise,
        lower_bound=lower,
        formula_checked=checked,
        open_questions=(
            "is N_B^Delta(1/2) finite: unresolved",
            "can rho > 2 epsilon be relaxed to rho >= 2 epsilon: unresolved",
        ),
    )


# --- l-infinity recentering ------------------------------------------------


@dataclass(frozen=True)
class RecenterResult:
    center: tuple
    radius: Fraction
    diameter: Fraction
    ok: bool


def linf_recenter(points: Sequence[Sequence]) -> RecenterResult:
    """Midpoint of the bounding box; its l-infinity radius is half the diameter."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise PreconditionError("need at least one point")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise StructureError("points differ in dimension")
    lo = [min(p[k] for p in pts) for k in range(dim)]
    hi = [max(p[k] for p in pts) for k in range(dim)]
    x = tuple((a + b) / 2 for a, b in zip(lo, hi))
    radius = max(_linf(x, p) for p in pts)
    diam = max(_linf(p, q) for p in pts for q in pts)
    return RecenterResult(x, radius, diam, radius <= diam / 2)


_TRIANGLE = (
    (Fraction(-1), Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(-1), Fraction(1)),
    (Fraction(1), Fraction(1), Fraction(-1)),
)


@dataclass(frozen=True)
class CounterexampleReport:
    grid_step: Fraction
    candidates: int
    failing_candidates: int
    first_survivor: tuple | None
    centers_box: tuple
    box_center: tuple
    box_center_radius: Fraction
    box_center_in_plane: bool
    passed: bool


def recenter_counterexample_check(step=Fraction(1, 100)) -> CounterexampleReport:
    """No point of the triangle conv{(-1,1,1),(1,-1,1),(1,1,-1)} is within 1 of all of it.

    A convex set is covered by a ball iff its vertices are, so a candidate
    fails as soon as one vertex lies farther than 1. Every point of a
    barycentric grid is tested; analytically the valid centers form the
    intersection of the three unit boxes, which misses the plane x+y+z = 1.
    """
    step = Fraction(step)
    N = 1 / step
    if N.denominator != 1 or N < 1:
        raise PreconditionError("step must be 1/N for a positive integer N")
    N = int(N)
    survivors = []
    total = failing = 0
    for i in range(N + 1):
        for j in range(N + 1 - i):
            k = N - i - j
            x = tuple(
                (i * a + j * b + k * c) / N for a, b, c in zip(*_TRIANGLE)
            )
            total += 1
            if any(_linf(x, v) > 1 for v in _TRIANGLE):
                failing += 1
            else:
                survivors.append(x)
    box = tuple(
        (max(v[k] - 1 for v in _TRIANGLE), min(v[k] + 1 for v in _TRIANGLE)) for k in range(3)
    )
    box_center = tuple((lo + hi) / 2 for lo, hi in box)
    radius = max(_linf(box_center, v) for v in _TRIANGLE)
    in_plane = all(lo == hi for lo, hi in box) and sum(box_center) == 1
    passed = failing == total and radius <= 1 and not in_plane
    return CounterexampleReport(
        grid_step=step,
        candidates=total,
        failing_candidates=failing,
        first_survivor=survivors[0] if survivors else None,
        centers_box=box,
        box_center=box_center,
        box_center_radius=radius,
        box_center_in_plane=in_plane,
        passed=passed,
    )


# --- registry --------------------------------------------------------------


@dataclass(frozen=True)
class GalleryItem:
    name: str
    description: str
    params: dict
    runner: Callable


def _run_cube(p):
    return cube_cover_number(int(p["n"]), p["rho"])


GALLERY = {
    item.name: item
    for item in (
        GalleryItem(
            "l1-identity",
            "identity on (R^n, l1) with K = {e_j}: adjoint-side bound attained at m^n",
            {"n": "2", "m": "2", "theta": "1/2"},
            lambda p: example_l1_identity(
                int(p["n"]), int(p["m"]), p["theta"], p.get("epsilon")
            ),
        ),
        GalleryItem(
            "ex31",
            "canonical vectors against cube centers: grid bound attained at m^n",
            {"m": "2", "n": "2"},
            lambda p: example_31(int(p["m"]), int(p["n"])),
        ),
        GalleryItem(
            "ex32",
            "finitely supported sequences truncated to length D: N_A(1/2)=1, N_B(rho)>=D",
            {"D": "8", "grid": "2", "rho": "2/5"},
            lambda p: example_32_truncated(int(p["D"]), int(p["grid"]), p["rho"]),
        ),
        GalleryItem(
            "recenter-cx",
            "triangle in R^3 with no l-infinity center of radius 1 inside it",
            {"step": "1/100"},
            lambda p: recenter_counterexample_check(p["step"]),
        ),
        GalleryItem(
            "cube-cover",
            "cubes of side 2 rho covering [-1,1]^n: volume and grid bounds",
            {"n": "2", "rho": "1/2"},
            _run_cube,
        ),
    )
}


def run_example(name: str, params: dict | None = None):
    """Run a gallery item; string parameters are parsed as rationals."""
    if name not in GALLERY:
        raise PreconditionError(f"unknown example {name!r}; known: {', '.join(GALLERY)}")
    item = GALLERY[name]
    merged = dict(item.params)
    for key, value in (params or {}).items():
        if key not in merged and not (name == "l1-identity" and key == "epsilon"):
            raise PreconditionError(f"unknown parameter {key!r} for {name}")
        merged[key] = value
    parsed = {k: parse_scalar(v) if isinstance(v, str) else v for k, v in merged.items()}
    for key in ("n", "m", "D", "grid"):
        if key in parsed and Fraction(parsed[key]).denominator != 1:
            raise PreconditionError(f"{key} must be an integer")
    return item.runner(parsed)
