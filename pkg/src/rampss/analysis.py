"""Exact entropy accounting and classification of linear schemes.

All entropies are measured in symbols, i.e. in units of ``log p``.  For a
linear scheme with independent uniform inputs the conditional entropy of
secret components ``S_J`` given coalition ``A`` is

    H(S_J | A) = rank([E_J | G_A]) - rank(G_A)

where ``E_J`` holds the unit columns of the secrets in ``J``.  Everything a
coalition learns about the secret is captured by its *decryptable
subspace* ``D(A) = {c : (c || 0) in colspace(G_A)}``: the secret
functionals ``c . S`` it can compute.  :func:`brute_entropy` is an
independent check that counts outcomes over every input instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import access
from .access import AccessStructure, format_set, members
from .gf import FieldMatrix, inv, matrix_rank, nullspace, rref
from .schemes import LinearScheme

BRUTE_FORCE_LIMIT = 10**7


class DimensionMismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class EntropyFact:
    subset: int
    secrets: tuple
    value: int

    def __post_init__(self):
        assert 0 <= self.value <= len(self.secrets)


@dataclass(frozen=True)
class Leak:
    """A secret functional ``c . S`` that coalition ``subset`` can compute.

    ``c . S = sum(coefficients[k] * share[symbols[k]])`` for every input.
    """

    subset: int
    functional: tuple
    coefficients: tuple
    symbols: tuple

    def scaled(self, s: int, p: int) -> "Leak":
        return Leak(self.subset, tuple(x * s % p for x in self.functional),
                    tuple(a * s % p for a in self.coefficients), self.symbols)


def _secret_set(J: Iterable[int], L: int) -> tuple:
    J = tuple(sorted(set(int(j) for j in J)))
    if any(not 0 <= j < L for j in J):
        raise DimensionMismatch(f"secret indices must lie in 0..{L - 1}")
    return J


def cond_entropy(scheme: LinearScheme, J: Iterable[int], A) -> int:
    """H(S_J | A) in symbols; ``J`` holds 0-based secret indices."""
    J = _secret_set(J, scheme.L)
    GA = scheme.restrict(A)
    E = FieldMatrix(tuple(tuple(int(r == j) for j in J) for r in range(scheme.L + scheme.m)),
                    scheme.p, len(J))
    return matrix_rank(E.hstack(GA)) - matrix_rank(GA)


def decryptable_subspace(scheme: LinearScheme, A) -> list[Leak]:
    """Basis of the secret functionals coalition ``A`` determines.

    Each basis functional is in reduced echelon form (leading coefficient
    1) and carries recombination coefficients over ``A``'s share symbols.
    """
    mask = access.as_mask(A)
    cols = scheme.columns(mask)
    if not cols:
        return []
    L, p = scheme.L, scheme.p
    GA = scheme.restrict(mask)
    rand_part = GA.submatrix(range(L, L + scheme.m), range(len(cols)))
    kernel = nullspace(rand_part)
    rows = []
    for alpha in kernel:
        c = [sum(g * a for g, a in zip(GA.row(r), alpha)) % p for r in range(L)]
        rows.append(c + list(alpha))
    red, _ = rref(rows, p, L) if rows else ([], [])
    return [Leak(mask, tuple(r[:L]), tuple(r[L:]), tuple(cols)) for r in red]


def verify_leak(scheme: LinearScheme, leak: Leak) -> bool:
    """Check ``c . S = alpha . v_A`` as an identity of generator-matrix rows."""
    p = scheme.p
    combo = [0] * (scheme.L + scheme.m)
    for a, c in zip(leak.coefficients, leak.symbols):
        for r in range(scheme.L + scheme.m):
            combo[r] += a * scheme.G[r, c]
    target = list(leak.functional) + [0] * scheme.m
    return [x % p for x in combo] == target


def brute_entropy(scheme: LinearScheme, J: Iterable[int], A) -> Fraction | float:
    """H(S_J | A) in symbols by enumerating every input (S, R).

    Tabulates joint and marginal outcome counts and evaluates Shannon
    entropy base ``p`` directly.  Terms whose probability ratio is an
    exact power of ``p`` are summed as a Fraction; if any term is not,
    the result degrades to a float.
    """
    J = _secret_set(J, scheme.L)
    p, k = scheme.p, scheme.L + scheme.m
    total = p ** k
    if total > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"p^(L+m) = {p}^{k} exceeds {BRUTE_FORCE_LIMIT}")
    cols = scheme.columns(A)
    idx = np.arange(total, dtype=np.int64)
    inputs = np.empty((total, k), dtype=np.int64)
    for t in range(k):
        inputs[:, t] = idx // p**t % p
    G = np.array(scheme.G.entries, dtype=np.int64).reshape(k, scheme.G.cols)
    shares = inputs @ G[:, cols] % p if cols else np.zeros((total, 0), dtype=np.int64)
    joint = np.concatenate([inputs[:, list(J)], shares], axis=1)
    return _entropy(joint, p, total) - _entropy(shares, p, total)


def _entropy(outcomes: np.ndarray, p: int, total: int) -> Fraction | float:
    if outcomes.shape[1] == 0:
        return Fraction(0)
    _, counts = np.unique(outcomes, axis=0, return_counts=True)
    exact = Fraction(0)
    approx = 0.0
    inexact = False
    for c in counts.tolist():
        e = _log_exact(Fraction(total, c), p)
        if e is None:
            inexact = True
            approx += c / total * math.log(total / c, p)
        else:
            exact += Fraction(c, total) * e
    return float(exact) + approx if inexact else exact


def _log_exact(x: Fraction, p: int) -> int | None:
    if x.denominator != 1:
        return None
    v, e = x.numerator, 0
    while v % p == 0:
        v //= p
        e += 1
    return e if v == 1 else None


def coding_rates(scheme: LinearScheme) -> tuple:
    """rho_i = H(V_i) / H(S) with H(V_i) the rank of participant i's columns."""
    return tuple(Fraction(matrix_rank(scheme.restrict(1 << i)), scheme.L) for i in range(scheme.n))


# -- enumeration of all coalitions -----------------------------------------

def _columns_rand_first(scheme: LinearScheme) -> list[list[tuple]]:
    """Per participant, its columns with coordinates reordered (R..., S...)."""
    L, m = scheme.L, scheme.m
    out = []
    for i in range(scheme.n):
        vecs = []
        for c in scheme.symbols_of(i):
            col = scheme.G.column(c)
            vecs.append(tuple(col[L:]) + tuple(col[:L]))
        out.append(vecs)
    return out


def _insert(basis: dict, vec: tuple, p: int) -> dict | None:
    """Add ``vec`` to an echelon basis {pivot: row}; ``None`` if dependent."""
    v = list(vec)
    for piv in sorted(basis):
        if v[piv]:
            f = v[piv]
            b = basis[piv]
            for t in range(piv, len(v)):
                if b[t]:
                    v[t] = (v[t] - f * b[t]) % p
    lead = next((t for t, x in enumerate(v) if x), None)
    if lead is None:
        return None
    s = inv(v[lead], p)
    out = dict(basis)
    out[lead] = tuple(x * s % p for x in v)
    return out


def _walk(scheme: LinearScheme):
    """Yield ``(mask, D)`` for every coalition, ``D`` a basis of its decryptable subspace.

    Coordinates are ordered randoms-first, so echelon rows whose pivot
    falls in the secret block have no random component: exactly these
    rows span D(A).
    """
    n, m, p = scheme.n, scheme.m, scheme.p
    full = scheme.L + m
    per = _columns_rand_first(scheme)

    def d_of(basis):
        return tuple(basis[piv][m:] for piv in sorted(basis) if piv >= m)

    yield 0, ()
    stack = [(0, {}, 0)]
    while stack:
        mask, basis, start = stack.pop()
        for i in range(n - 1, start - 1, -1):
            b = basis
            if len(b) < full:
                for vec in per[i]:
                    nb = _insert(b, vec, p)
                    if nb is not None:
                        b = nb
            new = mask | 1 << i
            yield new, d_of(b)
            if i + 1 < n:
                stack.append((new, b, i + 1))


def _project_rank(D: Sequence[tuple], keep: Sequence[int], p: int) -> int:
    if not D or not keep:
        return 0
    return len(rref([[v[j] for j in keep] for v in D], p, len(keep))[1])


class _SubspaceFacts:
    """Entropy queries against one decryptable subspace."""

    def __init__(self, D: tuple, L: int, p: int):
        self.D, self.L, self.p = D, L, p
        self.dim = len(D)

    def h(self, J: tuple) -> int:
        # dim(D & span(e_J)) = dim D - rank(D projected off J)
        rest = [j for j in range(self.L) if j not in J]
        return len(J) - (self.dim - _project_rank(self.D, rest, self.p))


def _level_facts(D: tuple, level: int, L: int, p: int):
    f = _SubspaceFacts(D, L, p)
    h_full = L - f.dim
    ramp_ok = h_full == L - level
    everything = tuple(range(L))
    witnesses = []
    for J in combinations(everything, level):
        comp = tuple(j for j in everything if j not in J)
        if f.h(J) == 0 and f.h(comp) == L - level:
            witnesses.append(J)
    strong_bad = []
    if level < L:
        for J in combinations(everything, L - level):
            if f.h(J) != len(J):
                strong_bad.append(J)
    return h_full, ramp_ok, tuple(witnesses), tuple(strong_bad)


def entropy_map(scheme: LinearScheme) -> np.ndarray:
    """H(S | A) in symbols for every coalition, indexed by bitmask."""
    out = np.zeros(1 << scheme.n, dtype=np.int64)
    for mask, D in _walk(scheme):
        out[mask] = scheme.L - len(D)
    return out


def realized_structure(scheme: LinearScheme) -> AccessStructure:
    """The ramp structure whose levels are the amounts each coalition learns."""
    lv = scheme.L - entropy_map(scheme)
    return AccessStructure.from_level_map(scheme.n, scheme.L, lv)


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    L: int
    p: int
    ramp_valid: bool
    ramp_violations: tuple  # (mask, level, H(S|A))
    pd: bool
    pd_witnesses: dict  # mask -> all witness index sets, lexicographic
    pd_failures: tuple
    strong: bool
    strong_violations: tuple  # (mask, J)
    leaks: tuple
    coding_rates: tuple
    entropies: tuple = field(repr=False)
    levels: tuple = field(repr=False)

    def __post_init__(self):
        if self.strong and not self.ramp_valid:
            raise AssertionError("strong scheme must satisfy the ramp condition")
        if self.pd and not self.ramp_valid:
            raise AssertionError("PD scheme must satisfy the ramp condition")

    def witness(self, A) -> tuple | None:
        ws = self.pd_witnesses.get(access.as_mask(A))
        return ws[0] if ws else None

    def decrypted_indices(self, A) -> tuple | None:
        return self.witness(A)

    @property
    def verdict(self) -> str:
        if not self.ramp_valid:
            return "invalid"
        return "strong" if self.strong else "weak"


def _check_dims(scheme: LinearScheme, structure: AccessStructure):
    if scheme.n != structure.n or scheme.L != structure.L:
        raise DimensionMismatch(f"scheme has n={scheme.n}, L={scheme.L}; "
                                f"structure has n={structure.n}, L={structure.L}")


def classify(scheme: LinearScheme, structure: AccessStructure) -> ClassificationReport:
    """Check the ramp condition, partial decryptability and strongness at every coalition."""
    _check_dims(scheme, structure)
    L, p = scheme.L, scheme.p
    levels = structure.level_map()
    cache: dict = {}
    entropies = [0] * (1 << scheme.n)
    ramp_bad, pd_bad, strong_bad = [], [], []
    witnesses = {}
    for mask, D in _walk(scheme):
        level = int(levels[mask])
        key = (D, level)
        facts = cache.get(key)
        if facts is None:
            facts = cache[key] = _level_facts(D, level, L, p)
        h_full, ramp_ok, ws, sbad = facts
        entropies[mask] = h_full
        if not ramp_ok:
            ramp_bad.append((mask, level, h_full))
        if ws:
            witnesses[mask] = ws
        else:
            pd_bad.append(mask)
        for J in sbad:
            strong_bad.append((mask, J))

    ramp_bad.sort()
    pd_bad.sort()
    strong_bad.sort()
    leaky = sorted({m for m, _ in strong_bad})
    leaks = tuple(lk for m in leaky for lk in decryptable_subspace(scheme, m))
    ramp_valid = not ramp_bad
    return ClassificationReport(
        n=scheme.n, L=L, p=p,
        ramp_valid=ramp_valid,
        ramp_violations=tuple(ramp_bad),
        pd=ramp_valid and not pd_bad,
        pd_witnesses=dict(sorted(witnesses.items())),
        pd_failures=tuple(pd_bad),
        strong=ramp_valid and not strong_bad,
        strong_violations=tuple(strong_bad),
        leaks=leaks,
        coding_rates=coding_rates(scheme),
        entropies=tuple(entropies),
        levels=tuple(int(x) for x in levels),
    )


# -- presentation -----------------------------------------------------------

def symbol_labels(scheme: LinearScheme) -> list[str]:
    labels = [""] * scheme.G.cols
    for i in range(scheme.n):
        own = scheme.symbols_of(i)
        for k, c in enumerate(own):
            labels[c] = scheme.names[i] if len(own) == 1 else f"{scheme.names[i]}.{k + 1}"
    return labels


def format_leak(scheme: LinearScheme, leak: Leak, style: str = "monic") -> str:
    """Render a leak as ``c1*S1 + ... = a1*V3 + ...``.

    ``monic`` keeps the leading secret coefficient at 1; ``unit_last``
    rescales so the last recombination coefficient is 1.
    """
    p = scheme.p
    if style == "unit_last":
        last = next((a for a in reversed(leak.coefficients) if a), None)
        if last is not None:
            leak = leak.scaled(inv(last, p), p)
    elif style != "monic":
        raise ValueError(f"unknown style {style!r}")
    labels = symbol_labels(scheme)
    lhs = " + ".join(f"{c}*S{j + 1}" for j, c in enumerate(leak.functional) if c)
    rhs = " + ".join(f"{a}*{labels[c]}" for a, c in zip(leak.coefficients, leak.symbols) if a)
    return f"{lhs} = {rhs or '0'}"


def report_text(scheme: LinearScheme, report: ClassificationReport, limit: int = 20) -> str:
    names = scheme.names
    lines = [
        f"field GF({report.p}), n={report.n}, L={report.L}, m={scheme.m}",
        f"ramp_valid: {report.ramp_valid}",
    ]
    for mask, level, h in report.ramp_violations[:limit]:
        lines.append(f"  {format_set(mask, names)} at level {level}: H(S|A) = {h}, expected {report.L - level}")
    lines.append(f"pd: {report.pd}")
    for mask in report.pd_failures[:limit] if report.ramp_valid else ():
        lines.append(f"  no explicit part of the secret matches the leakage of {format_set(mask, names)}")
    lines.append(f"strong: {report.strong}")
    for mask, J in report.strong_violations[:limit]:
        js = "".join(f"S{j + 1}" for j in J)
        lines.append(f"  {format_set(mask, names)} learns about {js}")
    if report.leaks:
        lines.append("leaked functionals:")
        for lk in report.leaks[:limit]:
            lines.append(f"  {format_set(lk.subset, names)}: {format_leak(scheme, lk)}"
                         f"   (equivalently {format_leak(scheme, lk, 'unit_last')})")
        if len(report.leaks) > limit:
            lines.append(f"  ... {len(report.leaks) - limit} more")
    rates = ", ".join(f"{names[i]}={r}" for i, r in enumerate(report.coding_rates))
    lines.append(f"coding rates: {rates}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


def report_dict(report: ClassificationReport) -> dict:
    """JSON-ready summary; participant and secret indices are 1-based."""
    def ps(mask):
        return [i + 1 for i in members(mask)]

    return {
        "p": report.p, "n": report.n, "L": report.L,
        "verdict": report.verdict,
        "ramp_valid": report.ramp_valid,
        "ramp_violations": [{"subset": ps(m), "level": l, "entropy": h} for m, l, h in report.ramp_violations],
        "pd": report.pd,
        "pd_witnesses": {",".join(map(str, ps(m))): [j + 1 for j in ws[0]] for m, ws in report.pd_witnesses.items()},
        "pd_failures": [ps(m) for m in report.pd_failures],
        "strong": report.strong,
        "strong_violations": [{"subset": ps(m), "secrets": [j + 1 for j in J]} for m, J in report.strong_violations],
        "leaks": [{"subset": ps(lk.subset), "functional": list(lk.functional),
                   "coefficients": list(lk.coefficients), "symbols": list(lk.symbols)} for lk in report.leaks],
        "coding_rates": [str(r) for r in report.coding_rates],
    }
