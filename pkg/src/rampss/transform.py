"""Turning a partially decryptable ramp scheme into a strong one.

The secret is re-parametrised as ``S = S' T`` for a public non-singular
``T``.  A coalition that used to decrypt ``S_{I(A)}`` now only learns
combinations of ``S'``; the scheme is strong exactly when, for every
non-qualified coalition, the rows of ``T^-1`` outside ``I(A)`` restricted
to any ``L - l`` columns have full rank.  Taking ``T^-1`` superregular
(every square submatrix non-singular), e.g. a Hilbert matrix
``1/(x_i + y_j)``, satisfies this for all coalitions at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .access import AccessStructure, format_set
from .analysis import ClassificationReport, classify
from .gf import FieldElement, FieldMatrix, Singular, check_modulus, inv, matrix_det, matrix_inverse, matrix_rank
from .schemes import LinearScheme


class TransformError(ValueError):
    pass


class SpecViolation(TransformError):
    pass


class FieldTooSmall(TransformError):
    pass


class ConditionFailed(TransformError):
    pass


class NotPD(TransformError):
    pass


@dataclass(frozen=True)
class HilbertSpec:
    xs: tuple
    ys: tuple
    p: int

    def __post_init__(self):
        check_modulus(self.p)
        xs = tuple(int(x) % self.p for x in self.xs)
        ys = tuple(int(y) % self.p for y in self.ys)
        if len(xs) != len(ys):
            raise SpecViolation("xs and ys must have the same length")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def L(self) -> int:
        return len(self.xs)

    def violation(self) -> str | None:
        xs, ys, p = self.xs, self.ys, self.p
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                if (x + y) % p == 0:
                    return f"x_{i + 1} + y_{j + 1} = 0 mod {p}"
        for i, j in combinations(range(len(xs)), 2):
            if xs[i] == xs[j]:
                return f"x_{i + 1} = x_{j + 1} mod {p}"
            if ys[i] == ys[j]:
                return f"y_{i + 1} = y_{j + 1} mod {p}"
        return None


def hilbert_matrix(spec: HilbertSpec) -> FieldMatrix:
    problem = spec.violation()
    if problem is not None:
        raise SpecViolation(problem)
    p = spec.p
    return FieldMatrix(tuple(tuple(inv(x + y, p) for y in spec.ys) for x in spec.xs), p, spec.L)


def hilbert_det(spec: HilbertSpec) -> FieldElement:
    """Closed-form determinant: prod(x_i - x_j) prod(y_i - y_j) / prod(x_i + y_j)."""
    p, xs, ys = spec.p, spec.xs, spec.ys
    num = 1
    for i, j in combinations(range(spec.L), 2):
        num = num * (xs[i] - xs[j]) * (ys[i] - ys[j]) % p
    den = 1
    for x in xs:
        for y in ys:
            den = den * (x + y) % p
    if den == 0:
        raise SpecViolation("some x_i + y_j vanishes; the matrix is undefined")
    return FieldElement(num * inv(den, p), p)


def canonical_spec(L: int, p: int) -> HilbertSpec:
    """xs = 1..L, ys = 0, L+1, ..., 2L-1, or the lexicographically first valid spec.

    Raises :class:`FieldTooSmall` when GF(p) admits no valid spec.
    """
    check_modulus(p)
    if L < 1:
        raise ValueError("L must be positive")
    spec = HilbertSpec(tuple(range(1, L + 1)), (0,) + tuple(range(L + 1, 2 * L)), p)
    if spec.violation() is None:
        return spec
    found = _search_spec(L, p)
    if found is None:
        raise FieldTooSmall(f"GF({p}) has no {L}x{L} Hilbert matrix with distinct x's, "
                            f"distinct y's and nonzero sums")
    return found


def _search_spec(L: int, p: int) -> HilbertSpec | None:
    # Lexicographic over (x_1..x_L, y_1..y_L); backtracking prunes on each constraint.
    chosen: list[int] = []

    def ok(v: int) -> bool:
        k = len(chosen)
        if k < L:
            return v not in chosen
        xs, ys = chosen[:L], chosen[L:]
        return v not in ys and all((x + v) % p for x in xs)

    def rec() -> bool:
        if len(chosen) == 2 * L:
            return True
        for v in range(p):
            if ok(v):
                chosen.append(v)
                if rec():
                    return True
                chosen.pop()
        return False

    if rec():
        return HilbertSpec(tuple(chosen[:L]), tuple(chosen[L:]), p)
    return None


def default_T(L: int, p: int) -> FieldMatrix:
    """Public transform whose inverse is the canonical Hilbert matrix."""
    return matrix_inverse(hilbert_matrix(canonical_spec(L, p)))


def superregular_check(M: FieldMatrix) -> tuple | None:
    """``None`` if every square submatrix is non-singular, else ``(rows, cols)`` of the first failure.

    Failures are reported smallest size first, then lexicographically.
    """
    if M.rows != M.cols:
        raise ValueError("superregularity is checked on square matrices")
    if M.rows > 8:
        raise ValueError("submatrix enumeration limited to L <= 8")
    n = M.rows
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                if matrix_rank(M.submatrix(rows, cols)) < k:
                    return rows, cols
    return None


@dataclass(frozen=True)
class Eq22Violation:
    subset: int
    rows: tuple
    columns: tuple
    rank: int

    def describe(self, names=None) -> str:
        return (f"coalition {format_set(self.subset, names)}: rows {[r + 1 for r in self.rows]}, "
                f"columns {[c + 1 for c in self.columns]} of T^-1 have rank {self.rank} < {len(self.columns)}")


def _require_pd(scheme: LinearScheme, structure: AccessStructure, report: ClassificationReport | None):
    if report is None:
        report = classify(scheme, structure)
    if not report.pd:
        if not report.ramp_valid:
            m, level, h = report.ramp_violations[0]
            why = f"ramp condition fails at {format_set(m, scheme.names)} (level {level}, H(S|A)={h})"
        else:
            why = f"no explicit part of the secret at {format_set(report.pd_failures[0], scheme.names)}"
        raise NotPD(f"scheme is not partially decryptable for this structure: {why}")
    return report


def _check_T(T: FieldMatrix, L: int, p: int) -> FieldMatrix:
    if T.p != p:
        raise ConditionFailed(f"T is over GF({T.p}), scheme over GF({p})")
    if T.shape != (L, L):
        raise ConditionFailed(f"T must be {L}x{L}, got {T.rows}x{T.cols}")
    try:
        return matrix_inverse(T)
    except Singular:
        raise ConditionFailed(f"T is singular over GF({p})") from None


def eq22_check(T: FieldMatrix, scheme: LinearScheme, structure: AccessStructure,
               strict: bool = False, report: ClassificationReport | None = None) -> Eq22Violation | None:
    """Rank condition on ``T^-1`` that decides whether ``apply_T`` yields a strong scheme.

    For every coalition at level ``l < L`` with decrypted indices
    ``I(A)``, each ``(L-l) x (L-l)`` submatrix of ``T^-1`` on rows outside
    ``I(A)`` must be non-singular.  ``strict`` checks every PD witness of
    a coalition instead of the first.  Returns the first violation in
    (coalition, columns) order, or ``None``.
    """
    Tinv = _check_T(T, scheme.L, scheme.p)
    report = _require_pd(scheme, structure, report)
    L = scheme.L
    for mask in sorted(report.pd_witnesses):
        level = report.levels[mask]
        if level >= L:
            continue
        ws = report.pd_witnesses[mask]
        for I in (ws if strict else ws[:1]):
            rows = tuple(r for r in range(L) if r not in I)
            for cols in combinations(range(L), L - level):
                rk = matrix_rank(Tinv.submatrix(rows, cols))
                if rk < L - level:
                    return Eq22Violation(mask, rows, cols, rk)
    return None


def apply_T(scheme: LinearScheme, T: FieldMatrix) -> LinearScheme:
    """Scheme encoding ``S'`` as the old scheme encodes ``S' T``: ``G' = diag(T, I_m) G``."""
    _check_T(T, scheme.L, scheme.p)
    L, m, p = scheme.L, scheme.m, scheme.p
    rows = [list(T.row(i)) + [0] * m for i in range(L)]
    rows += [[0] * L + [int(i == j) for j in range(m)] for i in range(m)]
    block = FieldMatrix.from_rows(rows, p, L + m)
    return LinearScheme(p, L, m, scheme.n, scheme.symbol_owner, block @ scheme.G, scheme.names)


def strengthen(scheme: LinearScheme, structure: AccessStructure, T: FieldMatrix | None = None,
               strict: bool = False) -> tuple[LinearScheme, FieldMatrix, ClassificationReport]:
    """PD scheme in, strong scheme out, together with the public ``T`` and the new report.

    ``T`` defaults to the inverse of the canonical Hilbert matrix over the
    scheme's field.
    """
    # a malformed supplied T is reported before the PD check; the default is only built for PD input
    if T is not None:
        _check_T(T, scheme.L, scheme.p)
    before = _require_pd(scheme, structure, None)
    if T is None:
        T = default_T(scheme.L, scheme.p)
    bad = eq22_check(T, scheme, structure, strict=strict, report=before)
    if bad is not None:
        raise ConditionFailed(bad.describe(scheme.names))
    out = apply_T(scheme, T)
    report = classify(out, structure)
    if not report.strong:
        raise ConditionFailed("transformed scheme is not strong")  # unreachable if the rank condition is exact
    return out, T, report


def all_T(L: int, p: int):
    """Every non-singular L x L matrix over GF(p) (small L and p only)."""
    for flat in product(range(p), repeat=L * L):
        M = FieldMatrix.from_rows([flat[i * L:(i + 1) * L] for i in range(L)], p, L)
        if matrix_det(M).value:
            yield M
