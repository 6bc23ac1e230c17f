"""Simplicial fans: validation, multiplicity, subdivision, toric morphisms.

Only simplicial fans are supported; every cone is stored as a sorted tuple of
ray indices and membership questions reduce to exact rational solves.  The
module also builds the fans of projective space and of its cyclic quotient of
order n+1, together with the lattice inclusion realising the quotient map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .lattice import (
    FracVec,
    InfiniteIndexError,
    Matrix,
    NoSolutionError,
    Vec,
    invariant_factors,
    mat_vec,
    primitive,
    rational_inverse,
    smith_normal_form,
    solve_rational_linear,
    transpose,
)

Cone = tuple[int, ...]
LatticeHom = Matrix


class BadDimensionError(ValueError):
    """The requested construction needs a larger ambient dimension."""


class OutsideSupportError(ValueError):
    """A point expected inside the support of a fan lies outside it."""


class NotMaximalError(ValueError):
    """Cone multiplicity is defined here only for full-dimensional cones."""


@dataclass(frozen=True)
class Fan:
    """Primitive ray generators plus maximal cones as sorted index tuples."""

    dim: int
    rays: tuple[Vec, ...]
    max_cones: tuple[Cone, ...]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]


def make_fan(dim: int, rays, cones) -> Fan:
    return Fan(
        dim,
        tuple(tuple(int(x) for x in ray) for ray in rays),
        tuple(tuple(sorted(int(i) for i in cone)) for cone in cones),
    )


@lru_cache(maxsize=None)
def _cone_inverse(rays: tuple[Vec, ...]):
    """Inverse of the column matrix of a full-dimensional simplicial cone."""
    return rational_inverse(transpose(rays))


def cone_coordinates(fan: Fan, cone: Cone, point) -> FracVec | None:
    """Coordinates of ``point`` in the ray basis of ``cone``, or None.

    Simplicial cones have linearly independent generators, so coordinates
    are unique whenever the point lies in their linear span.
    """
    rays = tuple(fan.rays[i] for i in cone)
    if len(cone) == fan.dim:
        inv = _cone_inverse(rays)
        return tuple(
            sum(inv[i][j] * Fraction(point[j]) for j in range(fan.dim))
            for i in range(fan.dim)
        )
    columns = transpose(rays)
    try:
        solution = solve_rational_linear(columns, tuple(point))
    except NoSolutionError:
        return None
    return solution.x


def cone_contains(fan: Fan, cone: Cone, point) -> bool:
    coords = cone_coordinates(fan, cone, point)
    return coords is not None and all(c >= 0 for c in coords)


def find_containing_cone(fan: Fan, point) -> Cone | None:
    for cone in fan.max_cones:
        if cone_contains(fan, cone, point):
            return cone
    return None


def cone_multiplicity(fan: Fan, cone: Cone) -> int:
    """Index of the sublattice spanned by the ray generators of ``cone``.

    Multiplicity 1 means the corresponding affine chart is smooth.  Only
    full-dimensional (maximal) cones are accepted.
    """
    if len(cone) != fan.dim:
        raise NotMaximalError(f"cone {cone} is not full-dimensional in dim {fan.dim}")
    return _general_multiplicity(tuple(fan.rays[i] for i in cone))


def _general_multiplicity(rays: tuple[Vec, ...]) -> int:
    """Product of the nonzero Smith invariant factors of the ray matrix."""
    factors = invariant_factors(rays)
    rank = sum(1 for f in factors if f != 0)
    if rank != len(rays):
        raise InfiniteIndexError("cone generators are linearly dependent")
    index = 1
    for f in factors:
        if f:
            index *= f
    return index


def is_smooth(fan: Fan) -> bool:
    return all(
        _general_multiplicity(tuple(fan.rays[i] for i in cone)) == 1
        for cone in fan.max_cones
    )


def _rank(rays: tuple[Vec, ...]) -> int:
    factors = invariant_factors(rays)
    return sum(1 for f in factors if f != 0)


def _normalize_row(row: tuple[int, ...]):
    """Reduce an inequality row (coeffs..., rhs); returns None (trivial),
    "infeasible", or the reduced row."""
    coeffs, rhs = row[:-1], row[-1]
    if all(c == 0 for c in coeffs):
        return "infeasible" if rhs > 0 else None
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    return tuple(x // g for x in row)


def _fm_feasible(rows: list[tuple[int, ...]], dim: int) -> bool:
    """Fourier-Motzkin feasibility for the system coeffs . u >= rhs.

    Rows are integer tuples (c_1, ..., c_dim, rhs).  Exact, no floating
    point; feasibility over the reals equals feasibility over the rationals.
    """
    system: set[tuple[int, ...]] = set()
    for row in rows:
        reduced = _normalize_row(row)
        if reduced == "infeasible":
            return False
        if reduced is not None:
            system.add(reduced)
    remaining = list(range(dim))
    while remaining:
        var = min(
            remaining,
            key=lambda k: sum(1 for r in system if r[k] > 0) * sum(1 for r in system if r[k] < 0),
        )
        remaining.remove(var)
        pos = [r for r in system if r[var] > 0]
        neg = [r for r in system if r[var] < 0]
        keep = {r for r in system if r[var] == 0}
        for p in pos:
            for q in neg:
                combo = tuple(-q[var] * p[k] + p[var] * q[k] for k in range(dim + 1))
                reduced = _normalize_row(combo)
                if reduced == "infeasible":
                    return False
                if reduced is not None:
                    keep.add(reduced)
        system = keep
        if len(system) > 200000:
            raise RuntimeError("Fourier-Motzkin blow-up; system too large")
    return True


def _meet_in_common_face(fan: Fan, a: Cone, b: Cone) -> bool:
    """Exact face test for two simplicial cones of a candidate fan.

    The cones intersect in the common face spanned by their shared rays if
    and only if some linear functional vanishes on the shared rays and is
    strictly positive on the remaining generators of one cone and strictly
    negative on those of the other.  Feasibility of that (strict, scaled to
    >= 1) system is decided by Fourier-Motzkin elimination.
    """
    shared = set(a) & set(b)
    rows: list[tuple[int, ...]] = []
    for i in set(a) - shared:
        rows.append(fan.rays[i] + (1,))
    for i in set(b) - shared:
        rows.append(tuple(-x for x in fan.rays[i]) + (1,))
    for i in shared:
        rows.append(fan.rays[i] + (0,))
        rows.append(tuple(-x for x in fan.rays[i]) + (0,))
    return _fm_feasible(rows, fan.dim)


def validate_fan(fan: Fan) -> ValidationReport:
    """Check all Fan invariants and list the violations found."""
    violations: list[str] = []
    if fan.dim < 1:
        violations.append("dimension must be positive")
        return ValidationReport(False, tuple(violations))
    for idx, ray in enumerate(fan.rays):
        if len(ray) != fan.dim:
            violations.append(f"ray {idx} has wrong dimension")
        elif all(x == 0 for x in ray):
            violations.append(f"ray {idx} is zero")
        elif primitive(ray) != ray:
            violations.append(f"ray {idx} is not primitive")
    seen: dict[Vec, int] = {}
    for idx, ray in enumerate(fan.rays):
        if ray in seen:
            violations.append(f"rays {seen[ray]} and {idx} coincide")
        else:
            seen[ray] = idx
    simplicial: list[bool] = []
    for cidx, cone in enumerate(fan.max_cones):
        ok = True
        if not cone:
            violations.append(f"cone {cidx} is empty")
            ok = False
        elif len(set(cone)) != len(cone):
            violations.append(f"cone {cidx} repeats a ray index")
            ok = False
        elif any(i < 0 or i >= len(fan.rays) for i in cone):
            violations.append(f"cone {cidx} references a missing ray")
            ok = False
        elif len(cone) > fan.dim:
            violations.append(f"cone {cidx} has more generators than the dimension")
            ok = False
        elif _rank(tuple(fan.rays[i] for i in cone)) != len(cone):
            violations.append(f"cone {cidx} is not simplicial")
            ok = False
        simplicial.append(ok)
    used = {i for cone in fan.max_cones for i in cone}
    for idx in range(len(fan.rays)):
        if idx not in used:
            violations.append(f"ray {idx} appears in no maximal cone")
    if not violations:
        for i, j in itertools.combinations(range(len(fan.max_cones)), 2):
            if not (simplicial[i] and simplicial[j]):
                continue
            if not _meet_in_common_face(fan, fan.max_cones[i], fan.max_cones[j]):
                violations.append(f"cones {i} and {j} do not meet in a common face")
    return ValidationReport(not violations, tuple(violations))


def stellar_subdivide(fan: Fan, w: Vec) -> Fan:
    """Star subdivision of ``fan`` at the primitive lattice point ``w``.

    Every maximal cone containing ``w`` is replaced by the joins of ``w``
    with its facets not containing ``w``; cones away from ``w`` survive
    unchanged.  Subdividing at an existing ray returns an equal fan.
    """
    w = tuple(int(x) for x in w)
    if all(x == 0 for x in w):
        raise ValueError("cannot subdivide at the zero vector")
    if primitive(w) != w:
        raise ValueError("subdivision point must be primitive")
    hit = {cone: cone_coordinates(fan, cone, w) for cone in fan.max_cones}
    containing = {
        cone for cone, coords in hit.items()
        if coords is not None and all(c >= 0 for c in coords)
    }
    if not containing:
        raise OutsideSupportError(f"{w} lies outside the support of the fan")
    if w in fan.rays:
        w_index = fan.rays.index(w)
        new_rays = fan.rays
    else:
        w_index = len(fan.rays)
        new_rays = fan.rays + (w,)
    new_cones: set[Cone] = set()
    for cone in fan.max_cones:
        if cone not in containing:
            new_cones.add(cone)
            continue
        coords = hit[cone]
        for ray_idx, coeff in zip(cone, coords):
            if coeff > 0:
                child = tuple(sorted(set(cone) - {ray_idx} | {w_index}))
                new_cones.add(child)
    return Fan(fan.dim, new_rays, tuple(sorted(new_cones)))


def _box_lattice_points(rays: tuple[Vec, ...]) -> set[Vec]:
    """Nonzero lattice points in the half-open parallelepiped of ``rays``.

    Enumerated through the Smith normal form of the generator matrix, so the
    cost is proportional to the cone multiplicity rather than to any
    coordinate bounding box.
    """
    k = len(rays)
    u, s, _ = smith_normal_form(rays)
    factors = [s[i][i] for i in range(k)]
    if any(f == 0 for f in factors):
        raise InfiniteIndexError("cone generators are linearly dependent")
    points: set[Vec] = set()
    for residues in itertools.product(*(range(f) for f in factors)):
        mu = [Fraction(z, f) for z, f in zip(residues, factors)]
        lam = [sum(mu[i] * u[i][j] for i in range(k)) for j in range(k)]
        frac = [c - (c.numerator // c.denominator) for c in lam]
        coords = [
            sum(frac[i] * rays[i][j] for i in range(k))
            for j in range(len(rays[0]))
        ]
        assert all(Fraction(c).denominator == 1 for c in coords)
        if any(c != 0 for c in coords):
            points.add(tuple(int(c) for c in coords))
    return points


def desingularize(fan: Fan) -> Fan:
    """Refine ``fan`` by stellar subdivisions until every cone is smooth.

    Strategy: take a maximal cone of largest multiplicity (ties broken by
    the lexicographically smallest index tuple), enumerate the lattice
    points of its half-open generator parallelepiped, and subdivide at the
    primitive candidate minimising the largest multiplicity among the cones
    the subdivision creates, ties again lexicographic.  Each child cone has
    strictly smaller multiplicity than its parent, so the procedure
    terminates; the support and the original rays are preserved.
    """
    current = fan
    while True:
        mults = {
            cone: _general_multiplicity(tuple(current.rays[i] for i in cone))
            for cone in current.max_cones
        }
        worst = max(mults.values())
        if worst == 1:
            return current
        target = min(cone for cone, m in mults.items() if m == worst)
        target_rays = tuple(current.rays[i] for i in target)
        candidates = sorted({primitive(p) for p in _box_lattice_points(target_rays)})
        best_w = None
        best_score = None
        for w in candidates:
            score = 0
            for cone in current.max_cones:
                coords = cone_coordinates(current, cone, w)
                if coords is None or any(c < 0 for c in coords):
                    continue
                rays = tuple(current.rays[i] for i in cone)
                for pos, coeff in enumerate(coords):
                    if coeff > 0:
                        child = rays[:pos] + (w,) + rays[pos + 1:]
                        score = max(score, _general_multiplicity(child))
            if best_score is None or score < best_score:
                best_score, best_w = score, w
        assert best_w is not None
        current = stellar_subdivide(current, best_w)


def is_toric_morphism(hom: LatticeHom, src: Fan, dst: Fan) -> bool:
    """True when the hom maps every cone of ``src`` into some cone of ``dst``."""
    if len(hom) != dst.dim or any(len(row) != src.dim for row in hom):
        raise ValueError("lattice hom dimensions do not match the fans")
    for cone in src.max_cones:
        images = [mat_vec(hom, src.rays[i]) for i in cone]
        if not any(
            all(cone_contains(dst, candidate, img) for img in images)
            for candidate in dst.max_cones
        ):
            return False
    return True


def cyclic_quotient_fans(n: int) -> tuple[Fan, Fan, LatticeHom]:
    """Fans of P^n and of its quotient by the cyclic group of order n+1.

    Rays in the ambient lattice are v1 = (n+1, -2, -3, ..., -n), vi = e_i
    for 2 <= i <= n, and v_{n+1} = (-(n+1), 1, 2, ..., n-1); maximal cones
    are all n-element subsets.  The first fan is written in the basis
    ((n+1)e1, e2, ..., en) of the index-(n+1) sublattice, where it is the
    smooth fan of projective space; the returned hom is the lattice
    inclusion, and the induced toric map is the quotient map.
    """
    if n < 2:
        raise BadDimensionError("the quotient construction needs n >= 2")
    v_first = (n + 1,) + tuple(-j for j in range(2, n + 1))
    v_last = (-(n + 1),) + tuple(j - 1 for j in range(2, n + 1))
    units = [tuple(int(k == i) for k in range(n)) for i in range(1, n)]
    rays_big = (v_first, *units, v_last)
    rays_sub = ((1,) + v_first[1:], *units, (-1,) + v_last[1:])
    cones = tuple(itertools.combinations(range(n + 1), n))
    inclusion = tuple(
        tuple((n + 1) if i == j == 0 else int(i == j) for j in range(n))
        for i in range(n)
    )
    assert all(sum(r[j] for r in rays_big) == 0 for j in range(n))
    fan_sub = Fan(n, rays_sub, cones)
    fan_big = Fan(n, rays_big, cones)
    return fan_sub, fan_big, inclusion
