"""Exact arithmetic and linear algebra over prime fields GF(p).

Matrices are small and dense; everything is plain Python integers, so
results are exact and independent of any floating point behaviour.
Entries are always stored fully reduced into ``[0, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class FieldError(ArithmeticError):
    pass


class ZeroInverse(FieldError):
    pass


class Singular(FieldError):
    pass


class NoSolution(FieldError):
    pass


class ModulusMismatch(FieldError):
    pass


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be a prime integer, got {p!r}")
    return p


def inv(a: int, p: int) -> int:
    """Inverse of the integer ``a`` modulo the prime ``p``."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        check_modulus(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value + b, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value - b, self.p)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(b - self.value, self.p)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * b, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * inv(b, self.p), self.p)

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return field_inverse(self) ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def field_inverse(a: FieldElement) -> FieldElement:
    return FieldElement(inv(a.value, a.p), a.p)


@dataclass(frozen=True)
class FieldMatrix:
    """Immutable dense matrix over GF(p), stored row-major as tuples."""

    entries: tuple
    p: int
    cols: int = -1

    def __post_init__(self):
        check_modulus(self.p)
        rows = tuple(tuple(int(x) % self.p for x in row) for row in self.entries)
        cols = self.cols
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ValueError("ragged matrix rows")
            width = widths.pop()
            if cols >= 0 and cols != width:
                raise ValueError(f"declared {cols} columns, rows have {width}")
            cols = width
        elif cols < 0:
            cols = 0
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int, cols: int = -1) -> "FieldMatrix":
        return cls(tuple(tuple(r) for r in rows), p, cols)

    @classmethod
    def identity(cls, n: int, p: int) -> "FieldMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), p, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FieldMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), p, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.entries[i][j], self.p)

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(tuple(zip(*self.entries)) if self.rows else (), self.p, self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), self.p, len(cols))

    def hstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return FieldMatrix(tuple(a + b for a, b in zip(self.entries, other.entries)),
                           self.p, self.cols + other.cols)

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return FieldMatrix(self.entries + other.entries, self.p, self.cols)

    def _same_field(self, other: "FieldMatrix"):
        if self.p != other.p:
            raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.p
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in ocols) for r in self.entries)
        return FieldMatrix(out, p, other.cols)

    def apply(self, vec: Sequence[int]) -> tuple:
        """Matrix-vector product ``M @ vec``."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, vec)) % self.p for r in self.entries)

    def left_apply(self, vec: Sequence[int]) -> tuple:
        """Row-vector product ``vec @ M``."""
        if len(vec) != self.rows:
            raise ValueError("vector length does not match row count")
        p = self.p
        out = [0] * self.cols
        for x, r in zip(vec, self.entries):
            if x:
                for j, a in enumerate(r):
                    out[j] += x * a
        return tuple(v % p for v in out)

    def __str__(self):
        return "\n".join(" ".join(f"{x:>{len(str(self.p - 1))}}" for x in r) for r in self.entries)


def rref(rows: Sequence[Sequence[int]], p: int, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a list of rows.

    Pivots are taken as the first nonzero entry in column order.
    Returns the nonzero rows and their pivot columns.
    """
    m = [[x % p for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv(m[r][c], p)
        m[r] = [x * s % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(M: FieldMatrix) -> int:
    return len(rref(M.entries, M.p, M.cols)[1])


def matrix_det(M: FieldMatrix) -> FieldElement:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    p = M.p
    m = [list(r) for r in M.entries]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return FieldElement(0, p)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        s = inv(m[c][c], p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * s % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[c])]
    return FieldElement(det, p)


def matrix_inverse(M: FieldMatrix) -> FieldMatrix:
    if M.rows != M.cols:
        raise Singular("non-square matrix has no inverse")
    n, p = M.rows, M.p
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.entries)]
    red, pivots = rref(aug, p, n)
    if pivots != list(range(n)):
        raise Singular(f"matrix has rank {len(pivots)} < {n}")
    return FieldMatrix(tuple(tuple(r[n:]) for r in red), p, n)


def solve_linear(M: FieldMatrix, b: Sequence[int]) -> tuple:
    """Some ``x`` with ``M x = b``; free variables are set to 0."""
    if len(b) != M.rows:
        raise ValueError("right-hand side length does not match row count")
    p, n = M.p, M.cols
    aug = [list(r) + [int(v)] for r, v in zip(M.entries, b)]
    red, pivots = rref(aug, p, n + 1)
    if pivots and pivots[-1] == n:
        raise NoSolution("right-hand side is outside the column space")
    x = [0] * n
    for r, c in zip(red, pivots):
        x[c] = r[n]
    return tuple(x)


def nullspace(M: FieldMatrix) -> list[tuple]:
    """Basis of ``{x : M x = 0}``, one vector per free column in order."""
    p, n = M.p, M.cols
    red, pivots = rref(M.entries, p, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for r, c in zip(red, pivots):
            x[c] = -r[f] % p
        basis.append(tuple(x))
    return basis
