"""Shared oracles for the test suite."""

from fractions import Fraction

from quasilines.divisors import SectionsPolyhedron
from quasilines.fans import find_containing_cone


def random_bounded_system(rng, dim):
    """Random inequality system with explicit box bounds, always bounded.

    Returns (polyhedron, lows, highs); the box is the independent scan
    region for the brute-force oracle.
    """
    lows = [-rng.randint(0, 6) for _ in range(dim)]
    highs = [rng.randint(0, 6) for _ in range(dim)]
    constraints = []
    for j in range(dim):
        axis = tuple(int(k == j) for k in range(dim))
        constraints.append((axis, lows[j]))
        constraints.append((tuple(-x for x in axis), -highs[j]))
    for _ in range(rng.randint(0, 4)):
        normal = tuple(rng.randint(-4, 4) for _ in range(dim))
        if all(x == 0 for x in normal):
            continue
        constraints.append((normal, rng.randint(-8, 2)))
    return SectionsPolyhedron(dim, tuple(constraints)), lows, highs


def rational_cone_points(fan, cone, rng, count):
    """Sample ``count`` rational points from the closed cone."""
    points = []
    for _ in range(count):
        coeffs = [Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in cone]
        point = tuple(
            sum(c * fan.rays[i][j] for c, i in zip(coeffs, cone))
            for j in range(fan.dim)
        )
        points.append(point)
    return points


def supports_agree(fan_a, fan_b, rng, per_cone):
    """Sampling oracle: points of each fan's cones lie in the other fan."""
    for src, dst in ((fan_a, fan_b), (fan_b, fan_a)):
        for cone in src.max_cones:
            for point in rational_cone_points(src, cone, rng, per_cone):
                if find_containing_cone(dst, point) is None:
                    return False
    return True


def brute_force_count(constraints, lows, highs):
    """Independent lattice-point count by scanning an explicit integer box."""
    import itertools

    count = 0
    points = []
    for candidate in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        if all(
            sum(n * x for n, x in zip(normal, candidate)) >= rhs
            for normal, rhs in constraints
        ):
            count += 1
            points.append(candidate)
    return count, points
