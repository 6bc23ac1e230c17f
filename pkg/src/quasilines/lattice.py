"""Exact integer and rational linear algebra.

Vectors are tuples of Python ints, matrices are tuples of row tuples, and
rationals are ``fractions.Fraction`` (always reduced, positive denominator).
Everything here is immutable and every operation is pure, so values can be
shared across threads without coordination.  No floating point is used
anywhere: lattice indices, Cartier certificates and lattice-point counts are
integer-exact claims and are computed as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Vec = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]
FracVec = tuple[Fraction, ...]
FracMatrix = tuple[tuple[Fraction, ...], ...]


class ZeroVectorError(ValueError):
    """An operation that needs a nonzero vector received the zero vector."""


class InfiniteIndexError(ValueError):
    """A sublattice spanned by dependent generators has infinite index."""


class NoSolutionError(ValueError):
    """The linear system A x = b is inconsistent."""


def _dims(a: Matrix) -> tuple[int, int]:
    if not a or not a[0]:
        raise ValueError("matrix must have at least one row and one column")
    cols = len(a[0])
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    return len(a), cols


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    rows, cols = _dims(a)
    return tuple(tuple(a[i][j] for i in range(rows)) for j in range(cols))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = _dims(a)
    rb, cb = _dims(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(ca)) for j in range(cb))
        for i in range(ra)
    )


def mat_vec(a: Matrix, v: Vec) -> Vec:
    rows, cols = _dims(a)
    if len(v) != cols:
        raise ValueError(f"cannot apply {rows}x{cols} matrix to vector of length {len(v)}")
    return tuple(sum(a[i][k] * v[k] for k in range(cols)) for i in range(rows))


def dot(u, v) -> int | Fraction:
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return sum(x * y for x, y in zip(u, v))


def determinant(a: Matrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    rows, cols = _dims(a)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(rows - 1):
        if m[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, rows) if m[i][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, rows):
            for j in range(k + 1, rows):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[rows - 1][rows - 1]


def smith_normal_form(a: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with U*a*V = S, S diagonal and s1 | s2 | ...

    U and V are unimodular (determinant +1 or -1) and the diagonal entries
    of S are nonnegative, with the zero entries trailing.
    """
    rows, cols = _dims(a)
    m = [list(row) for row in a]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_sub(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j, mirrored on U
        mi, mj = m[i], m[j]
        for k in range(cols):
            mi[k] -= q * mj[k]
        ui, uj = u[i], u[j]
        for k in range(rows):
            ui[k] -= q * uj[k]

    def col_sub(i: int, j: int, q: int) -> None:
        # col_i -= q * col_j, mirrored on V
        for r in m:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            m[i], m[j] = m[j], m[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for r in m:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    row_sub(i, t, m[i][t] // p)
                    if m[i][t] != 0:
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    col_sub(j, t, m[t][j] // p)
                    if m[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # Pull the offending row into the pivot row; the next pass
            # produces a remainder strictly smaller than |p|.
            row_sub(t, offender, -1)
        if t < rows and t < cols and m[t][t] < 0:
            for k in range(cols):
                m[t][k] = -m[t][k]
            for k in range(rows):
                u[t][k] = -u[t][k]

    to_matrix = lambda lst: tuple(tuple(row) for row in lst)
    return to_matrix(u), to_matrix(m), to_matrix(v)


def invariant_factors(a: Matrix) -> tuple[int, ...]:
    """Diagonal of the Smith normal form of ``a`` (zeros included)."""
    _, s, _ = smith_normal_form(a)
    rows, cols = _dims(s)
    return tuple(s[i][i] for i in range(min(rows, cols)))


def sublattice_index(basis: Matrix) -> int:
    """Index in Z^n of the sublattice spanned by the rows of ``basis``.

    Computed as the product of the Smith invariant factors.  Raises
    ``InfiniteIndexError`` when the rows are linearly dependent (index
    infinite, determinant zero).
    """
    rows, cols = _dims(basis)
    if rows != cols:
        raise ValueError("sublattice_index expects a square basis matrix")
    index = 1
    for factor in invariant_factors(basis):
        if factor == 0:
            raise InfiniteIndexError("generators are linearly dependent")
        index *= factor
    return index


def primitive(v: Vec) -> Vec:
    """Divide a nonzero integer vector by the gcd of its coordinates."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise ZeroVectorError("the zero vector has no primitive representative")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class LinearSolution:
    """Exact solution of A x = b; ``unique`` means A had full column rank."""

    x: FracVec
    unique: bool


def solve_rational_linear(a: Matrix, b: Vec) -> LinearSolution:
    """Solve A x = b exactly over the rationals.

    Returns one solution (free variables set to zero) and a uniqueness flag.
    Raises ``NoSolutionError`` when the system is inconsistent.
    """
    rows, cols = _dims(a)
    if len(b) != rows:
        raise ValueError("right-hand side length does not match the matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols] != 0:
            raise NoSolutionError("inconsistent linear system")
    x = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivot_cols):
        x[c] = aug[row_idx][cols]
    return LinearSolution(tuple(x), unique=(len(pivot_cols) == cols))


def rational_inverse(a: Matrix | FracMatrix) -> FracMatrix:
    """Exact inverse of a square nonsingular matrix, over the rationals."""
    rows, cols = _dims(a)  # type: ignore[arg-type]
    if rows != cols:
        raise ValueError("inverse of a non-square matrix")
    n = rows
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)
