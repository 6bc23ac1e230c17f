"""Exact polynomial machinery and the conic count on cubic threefolds.

Lines on a cubic hypersurface through a smooth rational point are counted
by expanding the cubic along the pencil of lines through the point,
restricting the quadratic and cubic parts to the plane cut out by the
linear part, and certifying the count through a Sylvester resultant: a
squarefree resultant of degree 6 with no solutions escaping to infinity
certifies exactly six lines.  Through the classical two-points-on-a-secant
correspondence this number is the conic invariant e of the threefold.

Everything is computed over exact rationals; genericity is never assumed,
only detected, and failures trigger seeded resampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement


class DimensionMismatchError(ValueError):
    """Operands live in polynomial rings with different variable counts."""


class ZeroPolynomialError(ValueError):
    """A resultant operand is zero or constant in the elimination variable."""


class NotOnHypersurfaceError(ValueError):
    """The base point does not lie on the hypersurface."""


class SingularPointError(ValueError):
    """The hypersurface is singular at the base point."""


class DegenerateError(ValueError):
    """Infinitely many solutions: the count is not defined."""


class RetriesExhaustedError(RuntimeError):
    """No generic sample was found within the retry budget."""


class Poly:
    """Sparse multivariate polynomial over exact rationals.

    Terms map exponent tuples (one entry per variable) to nonzero
    Fraction coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff != 0:
                if len(exps) != nvars:
                    raise DimensionMismatchError("exponent tuple has wrong length")
                clean[tuple(exps)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, value, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Poly":
        exps = tuple(int(i == index) for i in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"{self.nvars} variables vs {other.nvars}"
            )

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return Poly(self.nvars, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Poly":
        if power < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(1, self.nvars)
        for _ in range(power):
            result = result * self
        return result

    def evaluate(self, point) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionMismatchError("evaluation point has wrong length")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, exps):
                if e:
                    value *= Fraction(x) ** e
            total += value
        return total

    def compose(self, replacements) -> "Poly":
        """Substitute replacement polynomials for every variable."""
        if len(replacements) != self.nvars:
            raise DimensionMismatchError("one replacement per variable is required")
        nvars = replacements[0].nvars
        if any(r.nvars != nvars for r in replacements):
            raise DimensionMismatchError("replacements live in different rings")
        result = Poly.zero(nvars)
        for exps, coeff in self.terms.items():
            term = Poly.constant(coeff, nvars)
            for repl, e in zip(replacements, exps):
                if e:
                    term = term * repl ** e
            result = result + term
        return result

    def substitute(self, var: int, replacement: "Poly") -> "Poly":
        """Replace a single variable by a polynomial of the same ring."""
        self._check(replacement)
        result = Poly.zero(self.nvars)
        for exps, coeff in self.terms.items():
            e = exps[var]
            base = Poly(self.nvars, {exps[:var] + (0,) + exps[var + 1:]: coeff})
            result = result + base * replacement ** e
        return result

    def derivative(self, var: int) -> "Poly":
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[var]
            if e:
                key = exps[:var] + (e - 1,) + exps[var + 1:]
                terms[key] = terms.get(key, Fraction(0)) + coeff * e
        return Poly(self.nvars, terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def coefficients_in(self, var: int) -> list["Poly"]:
        """Coefficient polynomials of var^0, var^1, ... (var eliminated)."""
        degree = self.degree_in(var)
        buckets: list[dict[tuple[int, ...], Fraction]] = [dict() for _ in range(degree + 1)]
        for exps, coeff in self.terms.items():
            stripped = exps[:var] + (0,) + exps[var + 1:]
            buckets[exps[var]][stripped] = coeff
        return [Poly(self.nvars, b) for b in buckets]

    def active_variables(self) -> tuple[int, ...]:
        return tuple(
            v for v in range(self.nvars) if any(e[v] for e in self.terms)
        )

    def as_univariate(self, var: int) -> list[Fraction]:
        """Ascending coefficient list; every other variable must be absent."""
        extra = [v for v in self.active_variables() if v != var]
        if extra:
            raise ValueError(f"polynomial also involves variables {extra}")
        coeffs = [Fraction(0)] * (max(self.degree_in(var), 0) + 1)
        for exps, coeff in self.terms.items():
            coeffs[exps[var]] = coeff
        return coeffs

    def __repr__(self) -> str:
        if self.is_zero:
            return "Poly(0)"
        parts = []
        for exps in sorted(self.terms):
            mono = "*".join(
                f"x{i}^{e}" if e > 1 else f"x{i}"
                for i, e in enumerate(exps) if e
            )
            coeff = self.terms[exps]
            parts.append(f"{coeff}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"


def _uni_trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _uni_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    quotient = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den) and _uni_trim(num):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        quotient[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
        _uni_trim(num)
    return quotient, num


def gcd_univariate(p: Poly, q: Poly) -> Poly:
    """Monic gcd of two univariate polynomials over the rationals."""
    active = sorted(set(p.active_variables()) | set(q.active_variables()))
    if len(active) > 1:
        raise ValueError("gcd_univariate needs polynomials in one shared variable")
    if p.nvars != q.nvars:
        raise DimensionMismatchError("operands live in different rings")
    var = active[0] if active else 0
    a = _uni_trim(p.as_univariate(var))
    b = _uni_trim(q.as_univariate(var))
    while b:
        _, r = _uni_divmod(a, b)
        a, b = b, _uni_trim(r)
    if not a:
        return Poly.zero(p.nvars)
    lead = a[-1]
    terms = {}
    for e, coeff in enumerate(a):
        if coeff:
            exps = tuple(e if i == var else 0 for i in range(p.nvars))
            terms[exps] = coeff / lead
    return Poly(p.nvars, terms)


def _poly_determinant(matrix: list[list[Poly]], nvars: int) -> Poly:
    """Determinant of a matrix of polynomials by column-subset expansion."""
    size = len(matrix)
    cache: dict[tuple[int, tuple[int, ...]], Poly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Poly:
        if row == size:
            return Poly.constant(1, nvars)
        key = (row, cols)
        if key in cache:
            return cache[key]
        total = Poly.zero(nvars)
        for position, col in enumerate(cols):
            entry = matrix[row][col]
            if entry.is_zero:
                continue
            sub = minor(row + 1, cols[:position] + cols[position + 1:])
            term = entry * sub
            total = total + (term if position % 2 == 0 else -term)
        cache[key] = total
        return total

    return minor(0, tuple(range(size)))


def sylvester_resultant(p: Poly, q: Poly, var: int) -> Poly:
    """Exact determinant of the Sylvester matrix of p and q w.r.t. ``var``."""
    if p.is_zero or q.is_zero:
        raise ZeroPolynomialError("resultant of a zero polynomial")
    p._check(q)
    m = p.degree_in(var)
    n = q.degree_in(var)
    if m < 1 or n < 1:
        raise ZeroPolynomialError("both operands need positive degree in the variable")
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    size = m + n
    zero = Poly.zero(p.nvars)
    matrix = [[zero] * size for _ in range(size)]
    for row in range(n):
        for k in range(m + 1):
            matrix[row][row + k] = pc[m - k]
    for row in range(m):
        for k in range(n + 1):
            matrix[n + row][row + k] = qc[n - k]
    return _poly_determinant(matrix, p.nvars)


@dataclass(frozen=True)
class PencilExpansion:
    """Graded pieces of a cubic along the pencil of lines through a point.

    With the direction representative fixed (the coordinate where the base
    point is nonzero is set to zero), f(p + t v) = t q1(v) + t^2 q2(v)
    + t^3 q3(v) identically.
    """

    point: tuple[Fraction, ...]
    pivot: int
    q1: Poly
    q2: Poly
    q3: Poly


@dataclass(frozen=True)
class LineCountReport:
    count: int
    with_multiplicity: bool
    generic: bool
    resultant_degree: int
    squarefree: bool
    no_loss_at_infinity: bool
    full_fibre_degrees: bool
    resultant: tuple[Fraction, ...]


def line_pencil_expansion(f: Poly, point) -> PencilExpansion:
    """Expand a cubic form along lines through a rational point of it."""
    if f.nvars != 5:
        raise DimensionMismatchError("a cubic form in five variables is required")
    if f.total_degree() > 3:
        raise ValueError("total degree must be at most 3")
    point = tuple(Fraction(x) for x in point)
    if len(point) != 5:
        raise DimensionMismatchError("the point needs five coordinates")
    if all(x == 0 for x in point):
        raise ValueError("the base point must be nonzero")
    if f.evaluate(point) != 0:
        raise NotOnHypersurfaceError("f does not vanish at the point")
    pivot = next(i for i, x in enumerate(point) if x != 0)
    # Ring with variable 0 = t and variables 1..5 the direction coordinates.
    replacements = []
    t = Poly.variable(0, 6)
    for i in range(5):
        repl = Poly.constant(point[i], 6)
        if i != pivot:
            repl = repl + t * Poly.variable(1 + i, 6)
        replacements.append(repl)
    expanded = f.compose(replacements)
    graded = [dict() for _ in range(4)]
    for exps, coeff in expanded.terms.items():
        graded[exps[0]][exps[1:]] = coeff
    parts = [Poly(5, g) for g in graded]
    assert parts[0].is_zero
    return PencilExpansion(point, pivot, parts[1], parts[2], parts[3])


def count_lines_through_point(f: Poly, point) -> LineCountReport:
    """Count the lines on the cubic through a smooth point of it.

    The linear part cuts a plane out of the direction space; the quadric
    and cubic parts restrict to a conic and a cubic there, and the count
    is certified by the degree and squarefreeness of their resultant.
    """
    expansion = line_pencil_expansion(f, point)
    if expansion.q1.is_zero:
        raise SingularPointError("the linear part vanishes: singular base point")
    linear = {exps.index(1): coeff for exps, coeff in expansion.q1.terms.items()}
    eliminated = min(linear)
    lead = linear[eliminated]
    solved = Poly.zero(5)
    for var, coeff in linear.items():
        if var != eliminated:
            solved = solved + Poly.variable(var, 5) * (-coeff / lead)
    conic = expansion.q2.substitute(eliminated, solved)
    cubic = expansion.q3.substitute(eliminated, solved)
    if conic.is_zero or cubic.is_zero:
        raise DegenerateError("a restricted form vanishes identically")
    active = sorted(
        set(range(5)) - {expansion.pivot, eliminated}
    )
    chart, survivor, resultant_var = active
    one = Poly.constant(1, 5)
    conic_affine = conic.substitute(chart, one)
    cubic_affine = cubic.substitute(chart, one)
    d_conic = conic_affine.degree_in(resultant_var)
    d_cubic = cubic_affine.degree_in(resultant_var)
    full_degrees = d_conic == 2 and d_cubic == 3
    if d_conic < 1 or d_cubic < 1:
        return LineCountReport(
            count=0,
            with_multiplicity=True,
            generic=False,
            resultant_degree=-1,
            squarefree=False,
            no_loss_at_infinity=False,
            full_fibre_degrees=full_degrees,
            resultant=(),
        )
    resultant = sylvester_resultant(conic_affine, cubic_affine, resultant_var)
    if resultant.is_zero:
        raise DegenerateError("resultant vanishes identically")
    degree = resultant.degree_in(survivor)
    derivative = resultant.derivative(survivor)
    squarefree = (
        degree >= 1 and gcd_univariate(resultant, derivative).total_degree() == 0
    )
    lc_conic = conic_affine.coefficients_in(resultant_var)[d_conic]
    lc_cubic = cubic_affine.coefficients_in(resultant_var)[d_cubic]
    if lc_conic.total_degree() == 0 or lc_cubic.total_degree() == 0:
        no_loss = True
    else:
        no_loss = gcd_univariate(lc_conic, lc_cubic).total_degree() == 0
    generic = full_degrees and degree == 6 and squarefree and no_loss
    return LineCountReport(
        count=degree,
        with_multiplicity=not squarefree,
        generic=generic,
        resultant_degree=degree,
        squarefree=squarefree,
        no_loss_at_infinity=no_loss,
        full_fibre_degrees=full_degrees,
        resultant=tuple(resultant.as_univariate(survivor)),
    )


BASE_POINT = (1, 0, 0, 0, 0)


def sample_cubic_instance(seed: int, bound: int = 9) -> tuple[Poly, tuple[int, ...]]:
    """Seeded random integer cubic through the base point (1,0,0,0,0).

    The coefficient of x0^3 is forced to zero so the base point lies on the
    hypersurface; everything stays in exact integers.
    """
    rng = random.Random(seed)
    terms = {}
    for combo in combinations_with_replacement(range(5), 3):
        exps = [0] * 5
        for i in combo:
            exps[i] += 1
        exps = tuple(exps)
        if exps == (3, 0, 0, 0, 0):
            continue
        coeff = rng.randint(-bound, bound)
        if coeff:
            terms[exps] = Fraction(coeff)
    return Poly(5, terms), BASE_POINT


def reducible_demo_instance() -> tuple[Poly, tuple[int, ...]]:
    """A cubic containing a plane through the base point; the count is
    degenerate by construction."""
    x1 = Poly.variable(1, 5)
    quadric = (
        Poly.variable(0, 5) ** 2
        + Poly.variable(2, 5) ** 2
        + Poly.variable(3, 5) ** 2
        + Poly.variable(4, 5) ** 2
    )
    return x1 * quadric, BASE_POINT


@dataclass(frozen=True)
class ConicCountCertificate:
    """Certified conic invariant e for a seeded cubic threefold sample."""

    seed: int
    attempt: int
    e: int
    cubic: Poly
    point: tuple[int, ...]
    report: LineCountReport


def conic_count_certificate(
    seed: int, bound: int = 9, max_attempts: int = 40
) -> ConicCountCertificate:
    """Count lines through a seeded smooth point, reported as the conic
    invariant e via the secant correspondence; resamples until generic."""
    for attempt in range(max_attempts):
        f, point = sample_cubic_instance(seed * 1000 + attempt, bound)
        try:
            report = count_lines_through_point(f, point)
        except (SingularPointError, DegenerateError):
            continue
        if report.generic:
            return ConicCountCertificate(
                seed=seed,
                attempt=attempt,
                e=report.count,
                cubic=f,
                point=point,
                report=report,
            )
    raise RetriesExhaustedError(f"no generic sample found for seed {seed}")
