"""Structured symbolic matrices and exact determinants.

Matrix formulas use 1-based (alpha, beta) indices; the conversion to
0-based storage happens in :meth:`SymMatrix.__getitem__` and the builders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .poly import GREVLEX, ZZ, MonomialOrder, Poly, PolyRing, Scalar, a_var, ring, substitute

LAPLACE_MAX_DIM = 8

M_MINUS_VI = "M-vI"
I_MINUS_MV = "I-Mv"


@dataclass(frozen=True)
class SymMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")
        rings = {e.ring for r in self.entries for e in r}
        if len(rings) > 1:
            raise ValueError("entries live in different variable tables")

    @classmethod
    def from_function(cls, rows: int, cols: int, fn: Callable[[int, int], Poly]) -> "SymMatrix":
        """Build from ``fn(alpha, beta)`` with 1-based indices."""
        return cls(rows, cols, tuple(tuple(fn(a, b) for b in range(1, cols + 1)) for a in range(1, rows + 1)))

    @property
    def ring(self) -> PolyRing:
        return self.entries[0][0].ring

    def __getitem__(self, ab: tuple[int, int]) -> Poly:
        alpha, beta = ab
        if not (1 <= alpha <= self.rows and 1 <= beta <= self.cols):
            raise IndexError(f"({alpha}, {beta}) outside {self.rows}x{self.cols}")
        return self.entries[alpha - 1][beta - 1]

    def map(self, fn: Callable[[Poly], Poly]) -> "SymMatrix":
        return SymMatrix(self.rows, self.cols, tuple(tuple(fn(e) for e in r) for r in self.entries))

    def specialize(self, values: Mapping[str, Scalar]) -> "SymMatrix":
        return self.map(lambda e: substitute(e, values))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for r in self.entries:
            for e in r:
                out |= e.variables()
        return out

    def to_text(self) -> list[list[str]]:
        from .poly import LEX, format_poly

        return [[format_poly(e, LEX) for e in r] for r in self.entries]


def _ring_for(m: int, R: PolyRing | None) -> PolyRing:
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if R is None:
        return ring(m)
    if R.m != m:
        raise ValueError(f"ring has m={R.m}, asked for m={m}")
    return R


def build_M(m: int, R: PolyRing | None = None) -> SymMatrix:
    """The (m-1)x(m-1) matrix with entry (alpha, beta) = a_{2 beta - alpha}."""
    R = _ring_for(m, R)
    return SymMatrix.from_function(m - 1, m - 1, lambda al, be: a_var(R, 2 * be - al))


def build_Mt(m: int, R: PolyRing | None = None) -> SymMatrix:
    """The m x m matrix with entry (alpha, beta) = a_{2 beta - alpha} t - a_{2 beta - alpha - 1}."""
    R = _ring_for(m, R)
    t = Poly.var(R, "t")
    return SymMatrix.from_function(m, m, lambda al, be: a_var(R, 2 * be - al) * t - a_var(R, 2 * be - al - 1))


def det_bareiss(M: SymMatrix) -> Poly:
    """Fraction-free one-step Bareiss elimination; every division is exact."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    A = [list(r) for r in M.entries]
    R = M.ring
    domain = A[0][0].domain
    one = Poly.const(R, 1, domain)
    prev = one
    sign = 1
    for k in range(n - 1):
        if A[k][k].is_zero:
            for i in range(k + 1, n):
                if not A[i][k].is_zero:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(R, domain)
        piv = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                num = piv * row_i[j]
                if not aik.is_zero and not row_k[j].is_zero:
                    num = num - aik * row_k[j]
                row_i[j] = num if prev is one else num.exact_div(prev)
            row_i[k] = Poly.zero(R, domain)
        prev = piv
    det = A[n - 1][n - 1]
    return -det if sign < 0 else det


def det_laplace(M: SymMatrix) -> Poly:
    """Cofactor expansion along successive rows (memoized on column sets)."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n > LAPLACE_MAX_DIM:
        raise ValueError(f"Laplace oracle limited to dimension {LAPLACE_MAX_DIM}, got {n}")
    A = M.entries
    zero = Poly.zero(M.ring, A[0][0].domain)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> Poly:
        if row == n:
            return Poly.const(M.ring, 1, A[0][0].domain)
        acc = zero
        sign = 1
        for c in range(n):
            if not (cols >> c) & 1:
                continue
            e = A[row][c]
            if not e.is_zero:
                term = e * minor(row + 1, cols & ~(1 << c))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        return acc

    return minor(0, (1 << n) - 1)


def charpoly_in(M: SymMatrix, v: str, convention: str = M_MINUS_VI, det: Callable[[SymMatrix], Poly] = det_bareiss) -> Poly:
    """det(M - v I) or det(I - M v) for a variable ``v`` absent from ``M``."""
    if M.rows != M.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    if v in M.variables():
        raise ValueError(f"variable {v} already occurs in the matrix")
    R = M.ring
    domain = M.entries[0][0].domain
    x = Poly.var(R, v, domain)
    one = Poly.const(R, 1, domain)
    if convention == M_MINUS_VI:
        P = SymMatrix.from_function(M.rows, M.cols, lambda a, b: M[a, b] - x if a == b else M[a, b])
    elif convention == I_MINUS_MV:
        P = SymMatrix.from_function(M.rows, M.cols, lambda a, b: (one if a == b else 0) - M[a, b] * x)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return det(P)
