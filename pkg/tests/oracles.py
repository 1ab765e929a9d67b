"""Brute-force reference implementations, independent of the solvers under test."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def min_radius_by_size(dist):
    """r[k] = least covering radius of any k centers (k = 1..n), by subset enumeration."""
    n = len(dist)
    best = {}
    for k in range(1, n + 1):
        r_k = None
        for centers in itertools.combinations(range(n), k):
            r = max(min(dist[x][c] for c in centers) for x in range(n))
            if r_k is None or r < r_k:
                r_k = r
        best[k] = r_k
    return best


def intrinsic_number(radii_by_size, eps):
    return min(k for k, r in radii_by_size.items() if r <= eps)


def min_diameter_by_blocks(dist):
    """m[k] = least possible max block diameter over partitions into exactly k blocks."""
    n = len(dist)
    best: dict[int, Fraction] = {}
    blocks: list[list[int]] = []
    diams: list = []

    def rec(i, worst):
        if i == n:
            k = len(blocks)
            if k not in best or worst < best[k]:
                best[k] = worst
            return
        for b, members in enumerate(blocks):
            d = max([diams[b]] + [dist[i][j] for j in members])
            old = diams[b]
            members.append(i)
            diams[b] = d
            rec(i + 1, max(worst, d))
            members.pop()
            diams[b] = old
        blocks.append([i])
        diams.append(0)
        rec(i + 1, worst)
        blocks.pop()
        diams.pop()

    rec(0, 0)
    return best


def diameter_number(diam_by_blocks, eps):
    return min(k for k, m in diam_by_blocks.items() if m <= 2 * eps)


def induced_distances(h, rows: bool = True):
    """Direct double loop for d_A (rows=True) or d_B, entries as complex or real."""
    if not rows:
        h = [list(col) for col in zip(*h)]
    out = []
    for r1 in h:
        out.append([max(abs(complex(x) - complex(y)) for x, y in zip(r1, r2)) for r2 in h])
    return out


def linf(u, v):
    return max([Fraction(0)] + [abs(a - b) for a, b in zip(u, v)])


def vertex_operator_norm(matrix, norm_x, norm_y):
    """max over the extreme points of B_X of ||T v||_Y (polyhedral domains only)."""
    dx = len(matrix[0])
    if norm_x == "l1":
        verts = [[Fraction(int(i == j)) for j in range(dx)] for i in range(dx)]
    else:
        verts = [list(s) for s in itertools.product((Fraction(1), Fraction(-1)), repeat=dx)]
    best = Fraction(0)
    for v in verts:
        w = [sum(a * b for a, b in zip(row, v)) for row in matrix]
        if norm_y == "l1":
            val = sum(abs(x) for x in w)
        elif norm_y == "linf":
            val = max(abs(x) for x in w)
        else:
            val = float(np.sqrt(sum(float(x) ** 2 for x in w)))
        best = max(best, val)
    return best


def sampled_operator_norm(matrix, norm_x, norm_y, samples: int = 20000, seed: int = 0):
    """Lower estimate by random directions of the domain sphere."""
    rng = np.random.default_rng(seed)
    T = np.array([[float(x) for x in r] for r in matrix])
    X = rng.normal(size=(samples, T.shape[1]))
    ord_x = {"l1": 1, "linf": np.inf, "l2": 2}[norm_x]
    ord_y = {"l1": 1, "linf": np.inf, "l2": 2}[norm_y]
    X /= np.linalg.norm(X, ord=ord_x, axis=1)[:, None]
    return float(np.max(np.linalg.norm(X @ T.T, ord=ord_y, axis=1)))


def spectral_norm_eig(matrix):
    T = np.array([[float(x) for x in r] for r in matrix])
    return float(np.sqrt(max(np.linalg.eigvalsh(T.T @ T))))
