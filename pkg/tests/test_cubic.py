"""Tests for exact polynomials, resultants and the conic count pipeline."""

import random
from fractions import Fraction

import pytest

from quasilines.cubic import (
    DegenerateError,
    NotOnHypersurfaceError,
    Poly,
    SingularPointError,
    ZeroPolynomialError,
    conic_count_certificate,
    count_lines_through_point,
    gcd_univariate,
    line_pencil_expansion,
    reducible_demo_instance,
    sample_cubic_instance,
    sylvester_resultant,
)


def var(i, nvars):
    return Poly.variable(i, nvars)


class TestPolyArithmetic:
    def test_difference_of_squares(self):
        x, y = var(0, 2), var(1, 2)
        assert (x + y) * (x - y) == x * x - y * y

    def test_derivative(self):
        x = var(0, 1)
        assert (x ** 3).derivative(0) == 3 * x * x

    def test_gcd_univariate(self):
        x = var(0, 1)
        one = Poly.constant(1, 1)
        g = gcd_univariate(x * x - one, x * x - 2 * x + one)
        assert g == x - one
        assert (x * x - one).substitute(0, one) .is_zero

    def test_evaluate(self):
        x, y = var(0, 2), var(1, 2)
        p = 2 * x * x * y - y + Poly.constant(5, 2)
        assert p.evaluate((Fraction(1, 2), 3)) == Fraction(2 * 3, 4) - 3 + 5

    def test_substitute(self):
        x, y = var(0, 2), var(1, 2)
        p = x * x + y
        assert p.substitute(0, y) == y * y + y


class TestSylvesterResultant:
    def test_linear_pair(self):
        x, a, b = var(0, 3), var(1, 3), var(2, 3)
        res = sylvester_resultant(x - a, x - b, 0)
        assert res in (a - b, b - a)

    def test_coprime_quadratics(self):
        x = var(0, 1)
        res = sylvester_resultant(x * x - Poly.constant(2, 1), x * x - Poly.constant(3, 1), 0)
        assert res == Poly.constant(1, 1)

    def test_common_root_detected(self):
        x = var(0, 1)
        one = Poly.constant(1, 1)
        res = sylvester_resultant(x * x - one, x - one, 0)
        assert res.is_zero

    def test_generic_conic_cubic_degree(self):
        rng = random.Random(17)
        x, y = var(0, 2), var(1, 2)
        for _ in range(5):
            conic = Poly(2, {
                (2, 0): rng.randint(1, 5), (1, 1): rng.randint(-5, 5),
                (0, 2): rng.randint(1, 5), (1, 0): rng.randint(-5, 5),
                (0, 1): rng.randint(-5, 5), (0, 0): rng.randint(-5, 5),
            })
            cubic = Poly(2, {
                (3, 0): rng.randint(1, 5), (0, 3): rng.randint(1, 5),
                (2, 1): rng.randint(-5, 5), (1, 2): rng.randint(-5, 5),
                (2, 0): rng.randint(-5, 5), (0, 2): rng.randint(-5, 5),
                (1, 1): rng.randint(-5, 5), (1, 0): rng.randint(-5, 5),
                (0, 1): rng.randint(-5, 5), (0, 0): rng.randint(-5, 5),
            })
            res = sylvester_resultant(conic, cubic, 0)
            assert res.degree_in(1) <= 6

    def test_zero_rejected(self):
        x = var(0, 1)
        with pytest.raises(ZeroPolynomialError):
            sylvester_resultant(x, Poly.zero(1), 0)
        with pytest.raises(ZeroPolynomialError):
            sylvester_resultant(x, Poly.constant(4, 1), 0)


class TestLinePencilExpansion:
    def test_monomial_cubic(self):
        f = var(0, 5) ** 2 * var(1, 5) + var(0, 5) * var(2, 5) ** 2 + var(3, 5) ** 3
        expansion = line_pencil_expansion(f, (1, 0, 0, 0, 0))
        assert expansion.pivot == 0
        assert expansion.q1 == var(1, 5)
        assert expansion.q2 == var(2, 5) ** 2
        assert expansion.q3 == var(3, 5) ** 3

    def test_not_on_hypersurface(self):
        f = var(0, 5) ** 3
        with pytest.raises(NotOnHypersurfaceError):
            line_pencil_expansion(f, (1, 0, 0, 0, 0))

    def test_identity_by_substitution(self):
        rng = random.Random(8)
        for seed in range(4):
            f, point = sample_cubic_instance(seed)
            expansion = line_pencil_expansion(f, point)
            for _ in range(50):
                t = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                v = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(5)]
                v[expansion.pivot] = Fraction(0)
                shifted = tuple(pi + t * vi for pi, vi in zip(point, v))
                expected = (
                    t * expansion.q1.evaluate(v)
                    + t ** 2 * expansion.q2.evaluate(v)
                    + t ** 3 * expansion.q3.evaluate(v)
                )
                assert f.evaluate(shifted) == expected

    def test_gradient_pairing(self):
        f, point = sample_cubic_instance(11)
        expansion = line_pencil_expansion(f, point)
        rng = random.Random(0)
        for _ in range(20):
            v = [rng.randint(-5, 5) for _ in range(5)]
            v[expansion.pivot] = 0
            gradient = sum(
                f.derivative(i).evaluate(point) * v[i] for i in range(5)
            )
            assert expansion.q1.evaluate(v) == gradient


class TestCountLines:
    @pytest.mark.parametrize("seed", range(5))
    def test_seeded_cubics_have_six_lines(self, seed):
        certificate = conic_count_certificate(seed)
        assert certificate.e == 6
        report = certificate.report
        assert report.generic
        assert report.resultant_degree == 6
        assert report.squarefree
        assert not report.with_multiplicity
        assert len(report.resultant) == 7

    def test_reducible_cubic_is_degenerate(self):
        f, point = reducible_demo_instance()
        with pytest.raises(DegenerateError):
            count_lines_through_point(f, point)

    def test_singular_point(self):
        f = var(0, 5) * var(1, 5) ** 2 + var(2, 5) ** 3
        with pytest.raises(SingularPointError):
            count_lines_through_point(f, (1, 0, 0, 0, 0))

    def test_determinism(self):
        first = conic_count_certificate(3)
        second = conic_count_certificate(3)
        assert first.cubic == second.cubic
        assert first.report == second.report

    def test_bezout_bound(self):
        for seed in range(3):
            certificate = conic_count_certificate(seed)
            assert certificate.report.resultant_degree <= 2 * 3
