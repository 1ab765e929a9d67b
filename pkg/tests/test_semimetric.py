import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualcover.errors import StructureError
from dualcover.exact import ComplexPair, sqrt
from dualcover.gallery import cube_grid
from dualcover.instances import random_kernel, random_space
from dualcover.semimetric import (
    DualityKernel,
    Field,
    FiniteSemimetricSpace,
    induced_dA,
    induced_dB,
    kernel_from_json,
    kernel_to_json,
    read_space_csv,
    space_to_csv,
    validate_space,
)

from oracles import induced_distances

F = Fraction


def canonical_kernel(m, n):
    A = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    B = cube_grid(n, m)
    h = [[sum(x * y for x, y in zip(a, b)) for b in B] for a in A]
    return DualityKernel(list(range(n)), list(range(len(B))), h), B


def test_single_point_valid():
    assert validate_space(FiniteSemimetricSpace(["p"], [[F(0)]])) == []


def test_triangle_violation_reported():
    D = [[0, 1, 3], [1, 0, 1], [3, 1, 0]]
    v = validate_space(FiniteSemimetricSpace(["a", "b", "c"], D))
    assert {x.axiom for x in v} == {"triangle"}
    assert (0, 1, 2) in [x.indices for x in v]


def test_other_axioms_reported():
    D = [[1, 2], [3, 0]]
    axioms = {x.axiom for x in validate_space(FiniteSemimetricSpace([0, 1], D))}
    assert {"zero-diagonal", "symmetry"} <= axioms
    neg = validate_space(FiniteSemimetricSpace([0, 1], [[0, -1], [-1, 0]]))
    assert "nonnegativity" in {x.axiom for x in neg}


def test_structural_errors():
    with pytest.raises(StructureError):
        FiniteSemimetricSpace([0, 1], [[0, 1]])
    with pytest.raises(StructureError):
        FiniteSemimetricSpace([0, 1], [[0, float("nan")], [1, 0]])
    with pytest.raises(StructureError):
        FiniteSemimetricSpace([0, 1], [[0, float("inf")], [1, 0]])


def test_zero_distance_between_distinct_points_allowed():
    space = FiniteSemimetricSpace(["x", "y"], [[0, 0], [0, 0]])
    assert validate_space(space) == []


def test_canonical_vectors_space_m2_n3():
    k, _ = canonical_kernel(2, 3)
    dA = induced_dA(k)
    assert validate_space(dA) == []
    assert all(dA.d(i, j) == 1 for i in range(3) for j in range(3) if i != j)


def test_canonical_kernel_distances_m2_n2():
    k, B = canonical_kernel(2, 2)
    assert induced_dA(k).d(0, 1) == 1
    dB = induced_dB(k)
    i, j = B.index((F(1, 2), F(1, 2))), B.index((F(1, 2), F(-1, 2)))
    assert dB.d(i, j) == 1


def test_zero_kernel():
    k = DualityKernel([0, 1], [0, 1, 2], [[0] * 3, [0] * 3])
    assert all(x == 0 for row in induced_dA(k).dist for x in row)
    assert all(x == 0 for row in induced_dB(k).dist for x in row)


def test_kernel_rejections():
    with pytest.raises(StructureError):
        DualityKernel([], [0], [])
    with pytest.raises(StructureError):
        DualityKernel([0], [], [[]])
    with pytest.raises(StructureError):
        DualityKernel([0], [0], [[ComplexPair(F(1), F(1))]], Field.REAL)
    with pytest.raises(StructureError):
        DualityKernel([0, 1], [0], [[1]])


def test_complex_distances_are_exact():
    k = DualityKernel([0, 1], [0], [[ComplexPair(F(0), F(0))], [ComplexPair(F(1), F(1))]], "complex")
    assert induced_dA(k).d(0, 1) == sqrt(2)
    assert induced_dB(k).d(0, 0) == 0


@pytest.mark.parametrize("seed", range(10))
def test_random_kernel_matches_double_loop(seed):
    rng = random.Random(seed)
    field = "complex" if seed % 2 else "real"
    k = random_kernel(rng, 4, 5, field)
    raw = [[complex(float(x.re), float(x.im)) if isinstance(x, ComplexPair) else float(x) for x in row] for row in k.h]
    for rows, induced in ((True, induced_dA), (False, induced_dB)):
        ref = induced_distances(raw, rows)
        got = induced(k).dist
        for r1, r2 in zip(ref, got):
            for a, b in zip(r1, r2):
                assert abs(a - float(b)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["real", "complex"]))
def test_induced_spaces_are_semimetrics(seed, field):
    rng = random.Random(seed)
    k = random_kernel(rng, rng.randint(1, 6), rng.randint(1, 6), field)
    assert validate_space(induced_dA(k)) == []
    assert validate_space(induced_dB(k)) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_permutation_equivariance(seed):
    rng = random.Random(seed)
    k = random_kernel(rng, rng.randint(2, 6), rng.randint(1, 5))
    perm = list(range(len(k.a_labels)))
    rng.shuffle(perm)
    swapped = DualityKernel([k.a_labels[p] for p in perm], k.b_labels, [k.h[p] for p in perm])
    assert induced_dA(swapped) == induced_dA(k).relabel(perm)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=F(1, 10), max_value=10, max_denominator=10))
def test_scaling(seed, lam):
    rng = random.Random(seed)
    field = rng.choice(["real", "complex"])
    k = random_kernel(rng, rng.randint(1, 5), rng.randint(1, 5), field)
    scaled = induced_dA(k.scale(lam))
    base = induced_dA(k)
    assert all(
        scaled.dist[i][j] == lam * base.dist[i][j]
        for i in range(len(base))
        for j in range(len(base))
    )


def test_csv_round_trip():
    rng = random.Random(7)
    space = random_space(rng, 6, "graph")
    again = read_space_csv(space_to_csv(space))
    assert again.dist == space.dist
    assert [str(x) for x in space.labels] == list(again.labels)


def test_csv_rejects_floats_without_flag():
    with pytest.raises(StructureError):
        read_space_csv("a,b\n0,0.5\n0.5,0\n")
    assert read_space_csv("a,b\n0,0.5\n0.5,0\n", allow_float=True).d(0, 1) == 0.5


def test_kernel_json_round_trip():
    rng = random.Random(3)
    for field in ("real", "complex"):
        k = random_kernel(rng, 3, 4, field)
        again = kernel_from_json(kernel_to_json(k))
        assert again.h == k.h and again.field == k.field


def test_kernel_json_malformed():
    with pytest.raises(StructureError):
        kernel_from_json('{"h": [[1, 2], [3]]}')
    with pytest.raises(StructureError):
        kernel_from_json('{"a_labels": [0]}')
    with pytest.raises(StructureError):
        kernel_from_json('{"h": [[0.5]]}')
