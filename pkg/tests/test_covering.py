import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualcover.covering import (
    certificate_holds,
    covering_profile,
    covering_radius,
    critical_radii,
    exact_diameter_cover,
    exact_intrinsic_cover,
    greedy_diameter_cover,
    greedy_net,
)
from dualcover.errors import PreconditionError, SizeCapError
from dualcover.gallery import cube_grid
from dualcover.instances import random_space
from dualcover.semimetric import FiniteSemimetricSpace, space_from_points

from oracles import (
    diameter_number,
    intrinsic_number,
    linf,
    min_diameter_by_blocks,
    min_radius_by_size,
)

F = Fraction


def equidistant(n, d):
    return FiniteSemimetricSpace(list(range(n)), [[F(0) if i == j else F(d) for j in range(n)] for i in range(n)])


def cube_centers(m, n):
    return space_from_points(cube_grid(n, m), linf)


def test_single_point():
    p = FiniteSemimetricSpace(["x"], [[0]])
    assert greedy_net(p, 0).count == 1
    assert exact_intrinsic_cover(p, 0).count == 1
    assert exact_diameter_cover(p, 0).count == 1
    prof = covering_profile(p)
    assert set(prof.intrinsic) == {1} and set(prof.diameter) == {1}


def test_greedy_on_equidistant_points():
    # n points pairwise 2 - 2/m apart; any radius below that needs all of them
    assert greedy_net(equidistant(3, 1), F(2, 5)).count == 3
    assert greedy_net(equidistant(4, F(4, 3)), F(1)).count == 4


def test_exact_intrinsic_equidistant():
    assert exact_intrinsic_cover(equidistant(3, 1), F(2, 5)).count == 3
    assert exact_intrinsic_cover(equidistant(3, 1), F(1)).count == 1


def test_exact_diameter_cube_centers():
    space = cube_centers(2, 2)
    assert exact_diameter_cover(space, F(2, 5)).count == 4
    assert exact_diameter_cover(space, F(1, 2)).count == 1


def test_profile_cube_centers_jumps_at_half():
    prof = covering_profile(cube_centers(2, 2))
    assert prof.at(F(49, 100))[1] == 4
    assert prof.at(F(1, 2))[1] == 1


def test_radius_at_least_diameter_gives_one():
    rng = random.Random(11)
    for _ in range(20):
        s = random_space(rng, rng.randint(1, 10))
        diam = s.diameter()
        assert exact_intrinsic_cover(s, diam).count == 1
        assert exact_diameter_cover(s, diam / 2).count == 1


def test_zero_radius_collapses_duplicates():
    s = FiniteSemimetricSpace(list(range(4)), [[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]])
    assert exact_intrinsic_cover(s, 0).count == 2
    assert exact_diameter_cover(s, 0).count == 2


def test_caps_and_errors():
    big = equidistant(25, 1)
    with pytest.raises(SizeCapError):
        exact_intrinsic_cover(big, F(1, 2))
    assert exact_intrinsic_cover(big, F(1, 2), cap=None).count == 25
    with pytest.raises(SizeCapError):
        exact_diameter_cover(equidistant(21, 1), F(1, 2))
    assert greedy_diameter_cover(big, F(1, 2)).count == 1
    assert greedy_diameter_cover(big, F(1, 4)).count == 25
    with pytest.raises(PreconditionError):
        exact_intrinsic_cover(equidistant(2, 1), -1)


def test_greedy_is_deterministic_lowest_index():
    s = equidistant(4, 1)
    sol = greedy_net(s, F(1, 2))
    assert sol.certificate == (0, 1, 2, 3)
    assert not sol.optimal


def test_critical_radii():
    s = FiniteSemimetricSpace([0, 1], [[0, 3], [3, 0]])
    assert critical_radii(s) == [0, F(3, 2), 3]


@pytest.mark.parametrize("seed", range(25))
def test_against_oracles(seed):
    rng = random.Random(seed)
    s = random_space(rng, rng.randint(8, 9))
    radii = min_radius_by_size(s.dist)
    blocks = min_diameter_by_blocks(s.dist)
    for eps in critical_radii(s):
        a = exact_intrinsic_cover(s, eps)
        d = exact_diameter_cover(s, eps)
        assert a.count == intrinsic_number(radii, eps)
        assert d.count == diameter_number(blocks, eps)
        assert certificate_holds(s, a) and certificate_holds(s, d)
        assert greedy_net(s, eps).count >= a.count
        assert greedy_diameter_cover(s, eps).count >= d.count


@pytest.mark.parametrize("seed", range(5))
def test_larger_spaces_against_subset_oracle(seed):
    rng = random.Random(100 + seed)
    s = random_space(rng, 12)
    radii = min_radius_by_size(s.dist)
    for eps in critical_radii(s)[::3]:
        assert exact_intrinsic_cover(s, eps).count == intrinsic_number(radii, eps)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sandwich_and_monotonicity(seed):
    rng = random.Random(seed)
    s = random_space(rng, rng.randint(1, 10))
    prof = covering_profile(s)
    assert list(prof.intrinsic) == sorted(prof.intrinsic, reverse=True)
    assert list(prof.diameter) == sorted(prof.diameter, reverse=True)
    for eps, n_int, n_diam in zip(prof.breakpoints, prof.intrinsic, prof.diameter):
        assert prof.at(2 * eps)[0] <= n_diam <= n_int


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_profile_matches_single_calls(seed):
    rng = random.Random(seed)
    s = random_space(rng, rng.randint(1, 8))
    prof = covering_profile(s)
    for eps, a, d in zip(prof.breakpoints, prof.intrinsic, prof.diameter):
        assert exact_intrinsic_cover(s, eps).count == a
        assert exact_diameter_cover(s, eps).count == d
    # piecewise constant: values just past a breakpoint agree
    for lo, hi, a in zip(prof.breakpoints, prof.breakpoints[1:], prof.intrinsic):
        assert exact_intrinsic_cover(s, (lo + hi) / 2).count == a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_certificates_and_radius(seed):
    rng = random.Random(seed)
    s = random_space(rng, rng.randint(1, 12))
    eps = rng.choice(critical_radii(s))
    sol = exact_intrinsic_cover(s, eps)
    assert certificate_holds(s, sol)
    assert covering_radius(s, sol.certificate) <= eps
    g = greedy_net(s, eps)
    assert certificate_holds(s, g)
    assert certificate_holds(s, greedy_diameter_cover(s, eps))


def test_certificate_check_rejects_bad_claims():
    s = equidistant(3, 1)
    good = exact_intrinsic_cover(s, F(1, 2))
    bad = type(good)("intrinsic", F(1, 2), 2, (0, 1), True)
    assert not certificate_holds(s, bad)
    d = exact_diameter_cover(s, F(1, 4))
    merged = type(d)("diameter", F(1, 4), 1, (0, 0, 0), True)
    assert not certificate_holds(s, merged)
