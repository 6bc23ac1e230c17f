"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion.  All numeric expectations are exact; the only
tolerances are wall-clock bounds, asserted where stated.
"""

import random
import time
from contextlib import contextmanager

import pytest

from conftest import brute_force_count, random_bounded_system, supports_agree
from quasilines.bundles import (
    SplittingType,
    codim2_blowup,
    elementary_transform,
    quasiline_plan,
    recover_splitting,
    self_intersections,
)
from quasilines.cli import run
from quasilines.cubic import conic_count_certificate
from quasilines.divisors import (
    cartier_certificate,
    count_lattice_points,
    quotient_extension_check,
    quotient_hyperplane_support,
)
from quasilines.fans import (
    cone_contains,
    cone_multiplicity,
    cyclic_quotient_fans,
    desingularize,
    is_smooth,
    validate_fan,
)
from quasilines.models import (
    ModelRecord,
    catalog,
    cubic_conic_record,
    propagate,
    toric_quotient_record,
)
from quasilines.report import parse


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"criterion {number:02d} FAIL: {description}")
        raise
    print(f"criterion {number:02d} PASS: {description}")


def structured(argv):
    code, text = run(list(argv) + ["--format", "structured"])
    assert code == 0, text
    return parse(text)


def test_criterion_01_quotient_divisor_has_exactly_one_section():
    with criterion(1, "quotient divisor: one section, lattice points {0}, n = 2..6, < 1 s each"):
        for n in range(2, 7):
            start = time.perf_counter()
            doc = structured(["appendix", "--n", str(n)])
            elapsed = time.perf_counter() - start
            assert doc["h0"] == 1
            assert doc["section-count"] == 1
            assert doc["lattice-points"] == [(0,) * n]
            assert elapsed < 1.0, f"n = {n} took {elapsed:.3f}s"


def test_criterion_02_cartier_dichotomy_with_witness():
    with criterion(2, "hyperplane divisor: Cartier upstairs, witness denominator divides n+1 downstairs"):
        for n in range(2, 7):
            start = time.perf_counter()
            sub, big, _ = cyclic_quotient_fans(n)
            upstairs = cartier_certificate(quotient_hyperplane_support(sub))
            assert upstairs.cartier
            assert len(upstairs.cone_duals) == n + 1
            downstairs = cartier_certificate(quotient_hyperplane_support(big))
            assert not downstairs.cartier
            witness = downstairs.failure_solution
            assert any(value.denominator > 1 for value in witness)
            assert all((n + 1) % value.denominator == 0 for value in witness)
            assert time.perf_counter() - start < 1.0
            doc = structured(["appendix", "--n", str(n)])
            assert doc["cartier-on-projective"] is True
            assert doc["cartier-on-quotient"] is False


def test_criterion_03_singular_point_count():
    with criterion(3, "every quotient cone has multiplicity n+1; the cover fan is smooth"):
        for n in range(2, 7):
            sub, big, _ = cyclic_quotient_fans(n)
            assert is_smooth(sub)
            for cone in big.max_cones:
                assert cone_multiplicity(big, cone) == n + 1
            assert len(big.max_cones) == n + 1


@pytest.mark.parametrize("n,limit,samples", [(2, 1.0, 1000), (3, 30.0, 1000)])
def test_criterion_04_desingularization(n, limit, samples):
    with criterion(4, f"desingularization for n = {n}: smooth refinement, support preserved, < {limit:g} s"):
        _, big, _ = cyclic_quotient_fans(n)
        start = time.perf_counter()
        smooth = desingularize(big)
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"desingularize took {elapsed:.3f}s"
        assert is_smooth(smooth)
        assert smooth.rays[: len(big.rays)] == big.rays
        assert validate_fan(smooth).valid
        for cone in smooth.max_cones:
            points = [smooth.rays[i] for i in cone]
            assert any(
                all(cone_contains(big, parent, p) for p in points)
                for parent in big.max_cones
            ), "output cone not contained in any input cone"
        assert supports_agree(big, smooth, random.Random(1000 + n), samples)


def test_criterion_05_sampled_extension_suite():
    with criterion(5, "100 sampled Cartier extensions per n in {2,3}: contained and count <= 1"):
        for n, bound in ((2, 5), (3, 3)):
            report, _, _ = quotient_extension_check(n, bound, 100, seed=0)
            assert report.cartier_samples >= 100
            assert report.base_count == 1
            assert report.containment_failures == 0
            assert report.count_violations == 0
            assert all(count <= 1 for count in report.counts)


def test_criterion_06_splitting_type_oracle_equivalence():
    with criterion(6, "1000 random types: round trip, shift relation, degree bookkeeping, < 5 s"):
        rng = random.Random(606)
        start = time.perf_counter()
        for _ in range(1000):
            k = rng.randint(2, 8)
            t = SplittingType(tuple(rng.randint(-10, 10) for _ in range(k)))
            intersections = self_intersections(t)
            assert recover_splitting(intersections, t.total) == t
            transformed = elementary_transform(t)
            assert transformed.total == t.total - 1
            shifted = tuple(x + 1 for x in intersections[:-1]) + (
                intersections[-1] - (k - 1),
            )
            assert recover_splitting(shifted, t.total - 1) == transformed
        assert time.perf_counter() - start < 5.0


def test_criterion_07_quasiline_planner():
    with criterion(7, "500 random ample types: plan length, legality, all-ones ending"):
        rng = random.Random(707)
        for _ in range(500):
            k = rng.randint(1, 8)
            t = SplittingType(tuple(rng.randint(1, 6) for _ in range(k)))
            plan = quasiline_plan(t)
            assert plan.steps == sum(a - 1 for a in t.exponents)
            assert plan.final.exponents == (1,) * k
            for before, after in zip(plan.types, plan.types[1:]):
                assert after == codim2_blowup(before)
                assert min(after.exponents) >= 1


def test_criterion_08_cubic_line_count():
    with criterion(8, "20 seeds: squarefree degree-6 resultant certifies e = 6, < 5 s per seed"):
        for seed in range(20):
            start = time.perf_counter()
            certificate = conic_count_certificate(seed)
            elapsed = time.perf_counter() - start
            assert elapsed < 5.0, f"seed {seed} took {elapsed:.3f}s"
            report = certificate.report
            assert certificate.e == 6
            assert report.generic
            assert report.resultant_degree == 6
            assert report.squarefree
            assert report.count == 6


def test_criterion_09_invariant_engine():
    with criterion(9, "catalog consistent; expected derivations; R2 contradiction; 500 random records"):
        for entry in catalog():
            assert propagate(entry).consistent, entry.name
        quotient = propagate(toric_quotient_record(3)).record
        assert quotient.etilde == 1
        assert quotient.g3 is False
        conic = propagate(cubic_conic_record()).record
        assert conic.b == 1
        assert conic.g3 is True
        bad = propagate(ModelRecord(name="bad", e0=2, e=1))
        assert bad.contradiction is not None
        assert bad.contradiction.rule == "R2"
        rng = random.Random(909)
        for _ in range(500):
            etilde = rng.randint(1, 6)
            b = rng.randint(1, 6)
            closure = propagate(
                ModelRecord(
                    name="r",
                    e=etilde * b,
                    etilde=etilde,
                    b=b,
                    e0=rng.randint(1, etilde),
                )
            )
            assert closure.consistent
            known = closure.record.known_fields()
            keep = {k for k in known if rng.random() < 0.6}
            partial = propagate(ModelRecord(name="r", **{k: known[k] for k in keep}))
            assert partial.consistent
            assert propagate(partial.record).record == partial.record
            for name, value in partial.record.known_fields().items():
                assert known[name] == value
            missing = sorted(set(known) - set(partial.record.known_fields()))
            if missing:
                extra = rng.choice(missing)
                grown = propagate(
                    ModelRecord(name="r", **{k: known[k] for k in keep | {extra}})
                )
                assert grown.consistent
                grown_known = grown.record.known_fields()
                for name, value in partial.record.known_fields().items():
                    assert grown_known[name] == value


def test_criterion_10_lattice_point_counting_oracle():
    with criterion(10, "100 random bounded systems in dims 2-3: count equals brute-force scan"):
        rng = random.Random(1010)
        for _ in range(100):
            dim = rng.choice([2, 3])
            polyhedron, lows, highs = random_bounded_system(rng, dim)
            volume = 1
            for lo, hi in zip(lows, highs):
                volume *= hi - lo + 1
            assert volume <= 10 ** 6
            expected, expected_points = brute_force_count(
                polyhedron.constraints, lows, highs
            )
            result = count_lattice_points(polyhedron)
            assert result.count == expected
            assert sorted(result.points) == sorted(expected_points)
