"""
Small dense linear algebra over a generic ring.

Determinants are written out by cofactor expansion so they can run over
`Interval` as well as `Fraction`. The exact solvers use Gaussian
elimination over `Fraction` and describe rank-deficient systems by a
particular solution plus a null-space basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

Vector3 = tuple[Fraction, Fraction, Fraction]


def det2(a: Any, b: Any, c: Any, d: Any) -> Any:
    """| a b ; c d |"""
    return a * d - b * c


def det3(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant of a 3x3 matrix given as rows."""
    return (
        m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2])
        - m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2])
        + m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1])
    )


def det4(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant of a 4x4 matrix given as rows (expansion on row 0)."""
    total = None
    for col in range(4):
        minor = [[row[k] for k in range(4) if k != col] for row in m[1:]]
        term = m[0][col] * det3(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    return total


def det(m: Sequence[Sequence[Any]]) -> Any:
    """Determinant of a 0x0 .. 4x4 matrix (the empty determinant is 1)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return det2(m[0][0], m[0][1], m[1][0], m[1][1])
    if n == 3:
        return det3(m)
    if n == 4:
        return det4(m)
    raise ValueError(f"unsupported matrix size {n}")


# ---------------- vector helpers (generic ring) ----------------

def sub(a: Sequence[Any], b: Sequence[Any]) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[Any], b: Sequence[Any]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(s: Any, a: Sequence[Any]) -> tuple:
    return tuple(s * x for x in a)


def dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    total = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        total = total + x * y
    return total


def norm2(a: Sequence[Any]) -> Any:
    return dot(a, a)


def cross(a: Sequence[Any], b: Sequence[Any]) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


# ---------------- exact solvers ----------------

@dataclass(frozen=True)
class AffineSolution:
    """Solution set x0 + span(null_basis) of a linear system."""

    particular: tuple[Fraction, ...]
    null_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def rank_deficiency(self) -> int:
        return len(self.null_basis)

    def least_norm_point(self) -> tuple[Fraction, ...]:
        """Point of the solution set closest to the origin (exact)."""
        x0 = list(self.particular)
        basis = self.null_basis
        if not basis:
            return tuple(x0)
        k = len(basis)
        gram = [[dot(basis[a], basis[b]) for b in range(k)] for a in range(k)]
        rhs = [dot(basis[a], x0) for a in range(k)]
        coeffs = solve_exact(gram, rhs)
        if coeffs is None or coeffs.null_basis:
            raise ArithmeticError("null-space basis is not independent")
        t = coeffs.particular
        return tuple(x0[i] - sum(t[a] * basis[a][i] for a in range(k)) for i in range(len(x0)))


def solve_exact(matrix: Sequence[Sequence[Any]], rhs: Sequence[Any]) -> AffineSolution | None:
    """
    Solve A x = b over the rationals.

    Returns:
        The affine solution set, or None when the system is inconsistent.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Fraction(v) for v in matrix[r]] + [Fraction(rhs[r])] for r in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    # inconsistent rows: 0 = nonzero
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    particular = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        particular[c] = aug[i][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -aug[i][f]
        basis.append(tuple(v))
    return AffineSolution(tuple(particular), tuple(basis))
