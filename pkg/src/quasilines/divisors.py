"""Support functions, Cartier certificates and lattice-point section counts.

A toric divisor sum(a_i D_i) is carried as the ray-indexed value list of its
support function, with the convention value(v_i) = -a_i.  Sections are
counted exactly as the integer points of the polyhedron {u : <u, v_i> >=
value(v_i)}; boundedness is decided first by exact recession-cone analysis
and unbounded systems are a hard error, since an infinite count is
meaningless.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor

from .fans import Fan, cone_contains, desingularize, is_toric_morphism, _fm_feasible
from .lattice import FracVec, Vec, dot, mat_vec, rational_inverse, smith_normal_form


class NotMorphismError(ValueError):
    """The lattice hom does not define a toric morphism between the fans."""


class NotCartierError(ValueError):
    """The divisor being pulled back admits no Cartier certificate."""


class UnboundedPolyhedronError(Exception):
    """The sections polyhedron has a nontrivial recession cone."""


@dataclass(frozen=True)
class SupportFunction:
    """One integer value per ray of the fan, value(v_i) = -a_i."""

    fan: Fan
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.fan.rays):
            raise ValueError("one value per ray is required")


@dataclass(frozen=True)
class CartierCertificate:
    """Per-cone integral dual vectors, or the first failing cone with its
    rational-only solution as witness."""

    support: SupportFunction
    cone_duals: tuple[Vec, ...] | None
    failure_cone: int | None
    failure_solution: FracVec | None

    @property
    def cartier(self) -> bool:
        return self.cone_duals is not None

    def evaluate(self, point: Vec) -> int:
        """Value of the piecewise linear function at a lattice point."""
        if not self.cartier:
            raise NotCartierError("no certificate to evaluate")
        fan = self.support.fan
        for cone, dual in zip(fan.max_cones, self.cone_duals):
            if cone_contains(fan, cone, point):
                return int(dot(dual, point))
        raise ValueError(f"{point} lies outside the support of the fan")


@dataclass(frozen=True)
class SectionsPolyhedron:
    """Integer inequality system <u, normal> >= rhs, normals the fan rays."""

    dim: int
    constraints: tuple[tuple[Vec, int], ...]


@dataclass(frozen=True)
class LatticePointCount:
    count: int
    points: tuple[Vec, ...]


def _integral_cone_solution(rays: tuple[Vec, ...], rhs: tuple[int, ...]):
    """Solve <m, ray_i> = rhs_i; return (integral m or None, rational m).

    Uses the Smith normal form, so underdetermined (lower-dimensional)
    cones are handled the same way as full-dimensional ones.  Simplicial
    generators make the system consistent by construction.
    """
    k = len(rays)
    n = len(rays[0])
    u, s, v = smith_normal_form(rays)
    c = mat_vec(u, rhs)
    y: list[Fraction] = [Fraction(0)] * n
    for i in range(k):
        if s[i][i] == 0:
            raise ValueError("cone generators are linearly dependent")
        y[i] = Fraction(c[i], s[i][i])
    rational = tuple(
        sum(Fraction(v[i][j]) * y[j] for j in range(n)) for i in range(n)
    )
    if all(val.denominator == 1 for val in rational):
        return tuple(int(val) for val in rational), rational
    return None, rational


def cartier_certificate(psi: SupportFunction) -> CartierCertificate:
    """Certify psi as piecewise integral-linear, cone by cone.

    Failure is a certificate too: the first cone whose dual solve is
    rational but not integral is reported together with that solution.
    """
    fan = psi.fan
    duals: list[Vec] = []
    for index, cone in enumerate(fan.max_cones):
        rays = tuple(fan.rays[i] for i in cone)
        rhs = tuple(psi.values[i] for i in cone)
        integral, rational = _integral_cone_solution(rays, rhs)
        if integral is None:
            return CartierCertificate(psi, None, index, rational)
        assert all(dot(integral, ray) == val for ray, val in zip(rays, rhs))
        duals.append(integral)
    return CartierCertificate(psi, tuple(duals), None, None)


def pullback(psi: SupportFunction, hom, src: Fan) -> SupportFunction:
    """Pull a Cartier support function back along a toric morphism."""
    if not is_toric_morphism(hom, src, psi.fan):
        raise NotMorphismError("hom does not map the source fan into the target fan")
    certificate = cartier_certificate(psi)
    if not certificate.cartier:
        raise NotCartierError(
            f"no certificate: cone {certificate.failure_cone} has rational-only dual"
        )
    values = tuple(certificate.evaluate(mat_vec(hom, ray)) for ray in src.rays)
    return SupportFunction(src, values)


def sections_polyhedron(psi: SupportFunction) -> SectionsPolyhedron:
    """One constraint <u, v_i> >= value(v_i) per ray.

    Only the rays matter, so a support function on a union of rays (no
    common extension to the cones required) yields the same system.
    """
    return SectionsPolyhedron(
        psi.fan.dim,
        tuple((ray, val) for ray, val in zip(psi.fan.rays, psi.values)),
    )


@lru_cache(maxsize=None)
def _vertex_solvers(normals: tuple[Vec, ...], dim: int):
    """Invertible dim-subsets of the constraint normals with their inverses."""
    solvers = []
    for subset in itertools.combinations(range(len(normals)), dim):
        matrix = tuple(normals[i] for i in subset)
        try:
            inverse = rational_inverse(matrix)
        except ValueError:
            continue
        solvers.append((subset, inverse))
    return solvers


def count_lattice_points(polyhedron: SectionsPolyhedron) -> LatticePointCount:
    """Exact lattice-point count with the point list.

    Boundedness first: the recession cone {u : <u, normal> >= 0} must be
    trivial, decided by Fourier-Motzkin probes in each signed coordinate
    direction.  Vertices are then enumerated from all dim-sized constraint
    subsets and the integer bounding box of the vertex set is scanned.
    """
    dim = polyhedron.dim
    normals = tuple(normal for normal, _ in polyhedron.constraints)
    rhs = tuple(r for _, r in polyhedron.constraints)
    recession_rows = [normal + (0,) for normal in normals]
    for axis in range(dim):
        for sign in (1, -1):
            probe = tuple(sign * int(axis == j) for j in range(dim)) + (1,)
            if _fm_feasible(recession_rows + [probe], dim):
                raise UnboundedPolyhedronError(
                    f"recession direction exists along axis {axis}"
                )
    vertices: list[FracVec] = []
    for subset, inverse in _vertex_solvers(normals, dim):
        candidate = tuple(
            sum(inverse[i][j] * Fraction(rhs[s]) for j, s in enumerate(subset))
            for i in range(dim)
        )
        if all(
            sum(n * x for n, x in zip(normal, candidate)) >= r
            for normal, r in polyhedron.constraints
        ):
            vertices.append(candidate)
    if not vertices:
        return LatticePointCount(0, ())
    lows = [ceil(min(v[j] for v in vertices)) for j in range(dim)]
    highs = [floor(max(v[j] for v in vertices)) for j in range(dim)]
    points = []
    for candidate in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        if all(
            sum(n * x for n, x in zip(normal, candidate)) >= r
            for normal, r in polyhedron.constraints
        ):
            points.append(candidate)
    return LatticePointCount(len(points), tuple(points))


def h0(psi: SupportFunction) -> int:
    """Dimension of the section space, as a lattice-point count."""
    return count_lattice_points(sections_polyhedron(psi)).count


def quotient_hyperplane_support(fan: Fan) -> SupportFunction:
    """The hyperplane-image divisor of the cyclic quotient family: value -1
    on the second ray, 0 elsewhere."""
    values = tuple(-1 if i == 1 else 0 for i in range(len(fan.rays)))
    return SupportFunction(fan, values)


@dataclass(frozen=True)
class ExtensionSample:
    new_ray_values: tuple[int, ...]
    cartier: bool
    contained: bool | None
    count: int | None

    @property
    def ok(self) -> bool:
        return not self.cartier or (bool(self.contained) and self.count is not None)


@dataclass(frozen=True)
class ExtensionReport:
    """Outcome of sampling integral extensions of a support function to a
    refinement of its fan."""

    seed: int
    coeff_bound: int
    requested: int
    tested: int
    cartier_samples: int
    base_count: int
    counts: tuple[int, ...]
    containment_failures: int
    count_violations: int
    note: str

    @property
    def all_ok(self) -> bool:
        return self.containment_failures == 0 and self.count_violations == 0


_EXTENSION_NOTE = (
    "finitely many sampled extensions are probed; the section bound itself "
    "quantifies over every integral extension"
)


def sampled_extension_check(
    base: SupportFunction,
    refined: Fan,
    coeff_bound: int,
    samples: int,
    seed: int,
) -> ExtensionReport:
    """Sample integral extensions of ``base`` to ``refined`` and check that
    the extended sections polyhedron keeps every base constraint and never
    counts more lattice points than the base one.

    ``refined`` must keep the base rays as a prefix (stellar subdivisions
    do).  New-ray values are drawn uniformly from [-coeff_bound,
    coeff_bound]; extensions without a Cartier certificate are skipped, not
    counted as violations.
    """
    base_rays = base.fan.rays
    if refined.rays[: len(base_rays)] != base_rays:
        raise ValueError("refined fan must preserve the base rays as a prefix")
    base_polyhedron = sections_polyhedron(base)
    base_count = count_lattice_points(base_polyhedron).count
    base_constraints = set(base_polyhedron.constraints)
    new_rays = len(refined.rays) - len(base_rays)
    rng = random.Random(seed)
    counts: list[int] = []
    tested = 0
    cartier_samples = 0
    containment_failures = 0
    count_violations = 0
    attempts_cap = samples * 20 if samples else 0
    while cartier_samples < samples and tested < attempts_cap:
        tested += 1
        extra = tuple(rng.randint(-coeff_bound, coeff_bound) for _ in range(new_rays))
        psi = SupportFunction(refined, base.values + extra)
        certificate = cartier_certificate(psi)
        if not certificate.cartier:
            continue
        cartier_samples += 1
        extended = sections_polyhedron(psi)
        if not base_constraints <= set(extended.constraints):
            containment_failures += 1
        result = count_lattice_points(extended)
        counts.append(result.count)
        if result.count > base_count:
            count_violations += 1
    return ExtensionReport(
        seed=seed,
        coeff_bound=coeff_bound,
        requested=samples,
        tested=tested,
        cartier_samples=cartier_samples,
        base_count=base_count,
        counts=tuple(counts),
        containment_failures=containment_failures,
        count_violations=count_violations,
        note=_EXTENSION_NOTE,
    )


def quotient_extension_check(
    n: int, coeff_bound: int, samples: int, seed: int
) -> tuple[ExtensionReport, Fan, Fan]:
    """Run the sampled extension check on the desingularized quotient fan.

    Returns the report together with the quotient fan and its smooth
    refinement, for reporting.
    """
    from .fans import cyclic_quotient_fans

    _, quotient, _ = cyclic_quotient_fans(n)
    refined = desingularize(quotient)
    base = quotient_hyperplane_support(quotient)
    report = sampled_extension_check(base, refined, coeff_bound, samples, seed)
    return report, quotient, refined
