"""Covering numbers of finite semimetric spaces.

Two notions, both with closed balls / closed diameter bounds:

* intrinsic ``N_E(eps)``: fewest points of E whose radius-eps balls cover E;
  solved exactly as a minimum set cover over the balls.
* diameter ``N_E^Delta(eps)``: fewest subsets of diameter <= 2*eps covering E;
  a class is a clique of the threshold graph (edge iff d <= 2*eps), so this is
  the chromatic number of the complement, solved by DSATUR branch and bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError, SizeCapError
from .exact import Scalar, eq, le
from .semimetric import FiniteSemimetricSpace

__all__ = [
    "INTRINSIC_CAP",
    "DIAMETER_CAP",
    "CoverSolution",
    "CoveringProfile",
    "greedy_net",
    "exact_intrinsic_cover",
    "greedy_diameter_cover",
    "exact_diameter_cover",
    "critical_radii",
    "covering_profile",
    "certificate_holds",
    "covering_radius",
]

INTRINSIC_CAP = 24
DIAMETER_CAP = 20


@dataclass(frozen=True)
class CoverSolution:
    """Result of a covering computation.

    ``certificate`` holds center indices for ``kind == "intrinsic"`` and,
    for ``kind == "diameter"``, the class index of every point.
    """

    kind: str
    epsilon: Scalar
    count: int
    certificate: tuple
    optimal: bool

    def classes(self) -> list[list[int]]:
        if self.kind != "diameter":
            raise ValueError("only diameter covers have classes")
        out: list[list[int]] = [[] for _ in range(self.count)]
        for point, c in enumerate(self.certificate):
            out[c].append(point)
        return out


@dataclass(frozen=True)
class CoveringProfile:
    breakpoints: tuple
    intrinsic: tuple
    diameter: tuple

    def at(self, epsilon) -> tuple[int, int]:
        """(N_E, N_E^Delta) at any epsilon >= 0, by piecewise constancy."""
        k = None
        for i, bp in enumerate(self.breakpoints):
            if le(bp, epsilon):
                k = i
            else:
                break
        if k is None:
            raise ValueError("epsilon below the first breakpoint")
        return self.intrinsic[k], self.diameter[k]


def _check_eps(epsilon) -> None:
    if epsilon < 0:
        raise PreconditionError(f"epsilon must be >= 0, got {epsilon}")


def _ball_masks(space: FiniteSemimetricSpace, radius) -> list[int]:
    n = len(space)
    masks = []
    for i in range(n):
        row = space.dist[i]
        m = 0
        for j in range(n):
            if le(row[j], radius):
                m |= 1 << j
        masks.append(m)
    return masks


def covering_radius(space: FiniteSemimetricSpace, centers: Sequence[int]) -> Scalar:
    """max over points of the distance to the nearest center."""
    if not centers:
        raise PreconditionError("need at least one center")
    worst = None
    for x in range(len(space)):
        near = min(space.dist[x][c] for c in centers)
        if worst is None or near > worst:
            worst = near
    return worst if worst is not None else Fraction(0)


def greedy_net(space: FiniteSemimetricSpace, epsilon) -> CoverSolution:
    """Farthest-point-first epsilon-net (upper bound for N_E(epsilon)).

    Starts at point 0 and repeatedly adds the point farthest from the
    current centers, lowest index on ties, until every point is within
    epsilon of a center.
    """
    _check_eps(epsilon)
    n = len(space)
    if n == 0:
        raise PreconditionError("space is empty")
    centers = [0]
    nearest = list(space.dist[0])
    while True:
        far = 0
        for x in range(1, n):
            if nearest[x] > nearest[far]:
                far = x
        if le(nearest[far], epsilon):
            break
        centers.append(far)
        row = space.dist[far]
        for x in range(n):
            if row[x] < nearest[x]:
                nearest[x] = row[x]
    return CoverSolution("intrinsic", epsilon, len(centers), tuple(centers), False)


# --- minimum set cover ------------------------------------------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _min_set_cover(n: int, sets: list[int]) -> list[int]:
    """Indices of a minimum family of ``sets`` (bitmasks) covering range(n)."""
    full = (1 << n) - 1
    # which sets contain each element
    holders = [0] * n
    for s, mask in enumerate(sets):
        m = mask
        while m:
            low = m & -m
            holders[low.bit_length() - 1] |= 1 << s
            m ^= low

    # element reduction: if holders[e] is a subset of holders[f], covering e
    # covers f, so f imposes no extra constraint
    alive = list(range(n))
    keep = []
    for f in alive:
        redundant = False
        for e in alive:
            if e == f:
                continue
            he, hf = holders[e], holders[f]
            if he & ~hf == 0 and (he != hf or e < f):
                redundant = True
                break
        if not redundant:
            keep.append(f)
    elems_mask = 0
    for e in keep:
        elems_mask |= 1 << e

    # set reduction: drop sets dominated on the kept elements
    reduced = [mask & elems_mask for mask in sets]
    cand = []
    for s, ms in enumerate(reduced):
        if ms == 0:
            continue
        dominated = False
        for t, mt in enumerate(reduced):
            if t != s and ms & ~mt == 0 and (ms != mt or t < s):
                dominated = True
                break
        if not dominated:
            cand.append(s)
    cand_holders = {e: [s for s in cand if reduced[s] >> e & 1] for e in keep}
    cand_holder_mask = {e: sum(1 << s for s in cand_holders[e]) for e in keep}

    # greedy upper bound
    best: list[int] = []
    left = elems_mask
    while left:
        s = max(cand, key=lambda s: (_popcount(reduced[s] & left), -s))
        best.append(s)
        left &= ~reduced[s]
    best_box = [best]

    def lower_bound(uncovered: int) -> int:
        used = 0
        lb = 0
        order = sorted(
            (e for e in keep if uncovered >> e & 1),
            key=lambda e: (len(cand_holders[e]), e),
        )
        for e in order:
            if cand_holder_mask[e] & used == 0:
                used |= cand_holder_mask[e]
                lb += 1
        return lb

    def search(uncovered: int, chosen: list[int]) -> None:
        if not uncovered:
            if len(chosen) < len(best_box[0]):
                best_box[0] = list(chosen)
            return
        if len(chosen) + lower_bound(uncovered) >= len(best_box[0]):
            return
        e = min(
            (e for e in keep if uncovered >> e & 1),
            key=lambda e: (len(cand_holders[e]), e),
        )
        options = sorted(
            cand_holders[e], key=lambda s: (-_popcount(reduced[s] & uncovered), s)
        )
        for s in options:
            chosen.append(s)
            search(uncovered & ~reduced[s], chosen)
            chosen.pop()
            if len(chosen) + 1 >= len(best_box[0]):
                return

    if elems_mask and lower_bound(elems_mask) < len(best):
        search(elems_mask, [])
    result = best_box[0]
    covered = 0
    for s in result:
        covered |= sets[s]
    assert covered & full == full, "set cover lost coverage"
    return sorted(result)


def exact_intrinsic_cover(
    space: FiniteSemimetricSpace, epsilon, *, cap: int | None = INTRINSIC_CAP
) -> CoverSolution:
    """Exact N_E(epsilon) with a minimal list of centers.

    ``cap`` bounds the number of points (``None`` disables it); above the cap
    use :func:`greedy_net`.
    """
    _check_eps(epsilon)
    n = len(space)
    if n == 0:
        raise PreconditionError("space is empty")
    if cap is not None and n > cap:
        raise SizeCapError(
            f"{n} points exceed the exact intrinsic cap of {cap}; use greedy_net"
        )
    centers = _min_set_cover(n, _ball_masks(space, epsilon))
    return CoverSolution("intrinsic", epsilon, len(centers), tuple(centers), True)


# --- minimum clique cover via coloring of the complement ---------------------


def _conflicts(space: FiniteSemimetricSpace, epsilon) -> list[int]:
    n = len(space)
    limit = 2 * epsilon
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if not le(space.dist[i][j], limit):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def _dsatur_pick(n, adj, colors, uncolored):
    best = None
    best_key = None
    for v in range(n):
        if not uncolored >> v & 1:
            continue
        sat = set()
        m = adj[v]
        while m:
            low = m & -m
            c = colors[low.bit_length() - 1]
            if c >= 0:
                sat.add(c)
            m ^= low
        key = (len(sat), _popcount(adj[v] & uncolored))
        if best_key is None or key > best_key:
            best, best_key = v, key
    return best


def _greedy_coloring(n: int, adj: list[int]) -> list[int]:
    colors = [-1] * n
    uncolored = (1 << n) - 1
    while uncolored:
        v = _dsatur_pick(n, adj, colors, uncolored)
        used = {colors[u] for u in range(n) if adj[v] >> u & 1 and colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
        uncolored &= ~(1 << v)
    return colors


def _greedy_clique(n: int, adj: list[int]) -> list[int]:
    best: list[int] = []
    for start in range(n):
        clique = [start]
        cand = adj[start]
        while cand:
            v = max(
                (u for u in range(n) if cand >> u & 1),
                key=lambda u: (_popcount(adj[u] & cand), -u),
            )
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def _min_coloring(n: int, adj: list[int]) -> list[int]:
    best = _greedy_coloring(n, adj)
    best_k = [max(best) + 1 if n else 0]
    best_box = [best]
    clique = _greedy_clique(n, adj) if n else []
    lb = len(clique)
    if best_k[0] <= lb:
        return best

    colors = [-1] * n
    uncolored = (1 << n) - 1
    # the clique's vertices take distinct colors; fixing them breaks symmetry
    for c, v in enumerate(clique):
        colors[v] = c
        uncolored &= ~(1 << v)

    def rec(uncolored: int, k_used: int) -> bool:
        if k_used >= best_k[0]:
            return False
        if not uncolored:
            best_k[0] = k_used
            best_box[0] = list(colors)
            return best_k[0] <= lb
        v = _dsatur_pick(n, adj, colors, uncolored)
        forbidden = {colors[u] for u in range(n) if adj[v] >> u & 1 and colors[u] >= 0}
        rest = uncolored & ~(1 << v)
        for c in range(k_used):
            if c in forbidden:
                continue
            colors[v] = c
            if rec(rest, k_used):
                return True
        if k_used + 1 < best_k[0]:
            colors[v] = k_used
            if rec(rest, k_used + 1):
                return True
        colors[v] = -1
        return False

    rec(uncolored, len(clique))
    return best_box[0]


def _canonical_classes(colors: Sequence[int]) -> tuple[int, ...]:
    renum: dict[int, int] = {}
    out = []
    for c in colors:
        if c not in renum:
            renum[c] = len(renum)
        out.append(renum[c])
    return tuple(out)


def greedy_diameter_cover(space: FiniteSemimetricSpace, epsilon) -> CoverSolution:
    """DSATUR upper bound for N_E^Delta(epsilon); no size cap."""
    _check_eps(epsilon)
    n = len(space)
    if n == 0:
        raise PreconditionError("space is empty")
    cert = _canonical_classes(_greedy_coloring(n, _conflicts(space, epsilon)))
    return CoverSolution("diameter", epsilon, max(cert) + 1, cert, False)


def exact_diameter_cover(
    space: FiniteSemimetricSpace, epsilon, *, cap: int | None = DIAMETER_CAP
) -> CoverSolution:
    """Exact N_E^Delta(epsilon) with a class assignment achieving it."""
    _check_eps(epsilon)
    n = len(space)
    if n == 0:
        raise PreconditionError("space is empty")
    if cap is not None and n > cap:
        raise SizeCapError(
            f"{n} points exceed the exact diameter cap of {cap}; "
            "use greedy_diameter_cover"
        )
    cert = _canonical_classes(_min_coloring(n, _conflicts(space, epsilon)))
    return CoverSolution("diameter", epsilon, max(cert) + 1, cert, True)


# --- profiles and certificate checks ----------------------------------------


def critical_radii(space: FiniteSemimetricSpace) -> list:
    """Sorted distinct values among 0, all distances and all half-distances."""
    vals = [Fraction(0)]
    n = len(space)
    for i in range(n):
        for j in range(i + 1, n):
            d = space.dist[i][j]
            vals.append(d)
            vals.append(d / 2)
    vals.sort()
    out = []
    for v in vals:
        if not out or not eq(v, out[-1]):
            out.append(v)
    return out


def covering_profile(
    space: FiniteSemimetricSpace,
    *,
    intrinsic_cap: int | None = INTRINSIC_CAP,
    diameter_cap: int | None = DIAMETER_CAP,
) -> CoveringProfile:
    """N_E and N_E^Delta at every critical radius (constant in between)."""
    if len(space) == 0:
        raise PreconditionError("space is empty")
    if intrinsic_cap is not None and len(space) > intrinsic_cap:
        raise SizeCapError(f"{len(space)} points exceed the intrinsic cap")
    if diameter_cap is not None and len(space) > diameter_cap:
        raise SizeCapError(f"{len(space)} points exceed the diameter cap")
    bps = critical_radii(space)
    intr = tuple(exact_intrinsic_cover(space, e, cap=None).count for e in bps)
    diam = tuple(exact_diameter_cover(space, e, cap=None).count for e in bps)
    return CoveringProfile(tuple(bps), intr, diam)


def certificate_holds(space: FiniteSemimetricSpace, sol: CoverSolution) -> bool:
    """Re-check a certificate against the raw distance matrix."""
    n = len(space)
    if sol.kind == "intrinsic":
        centers = sol.certificate
        if len(set(centers)) != sol.count or not all(0 <= c < n for c in centers):
            return False
        return all(any(le(space.dist[x][c], sol.epsilon) for c in centers) for x in range(n))
    if sol.kind == "diameter":
        cls = sol.certificate
        if len(cls) != n or (n and set(cls) != set(range(sol.count))):
            return False
        limit = 2 * sol.epsilon
        return all(
            le(space.dist[i][j], limit)
            for i in range(n)
            for j in range(i + 1, n)
            if cls[i] == cls[j]
        )
    return False
