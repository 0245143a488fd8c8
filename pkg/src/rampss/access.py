"""L-level general access structures and plural-secret access structures.

Subsets of participants are bitmasks: bit ``i`` set means participant
``i`` (0-based, printed as ``V{i+1}``) is in the coalition.

An :class:`AccessStructure` stores, for every level ``l = 1..L``, the
minimal sets of the cumulative family ``A~_l`` (all coalitions that learn
at least ``l`` secret symbols).  Each cumulative family is therefore the
upward closure of its minimal sets and monotone by construction; what
remains to be checked is that the lists are antichains and that the
families are nested, ``A~_{l+1} <= A~_l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

MAX_PARTICIPANTS = 20


class BadParameters(ValueError):
    pass


class InvalidStructure(ValueError):
    pass


class NotRampCompatible(InvalidStructure):
    pass


def mask_of(participants: Iterable[int]) -> int:
    m = 0
    for i in participants:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def as_mask(A) -> int:
    """Accept a bitmask or an iterable of 0-based participant indices."""
    if isinstance(A, (int, np.integer)):
        return int(A)
    return mask_of(A)


def format_set(mask: int, names: Sequence[str] | None = None) -> str:
    idx = members(mask)
    if names is None:
        return "{" + ",".join(f"V{i + 1}" for i in idx) + "}"
    return "{" + ",".join(names[i] for i in idx) + "}"


def minimize(masks: Iterable[int]) -> tuple[int, ...]:
    """Minimal elements of a family of sets, sorted by (size, value)."""
    ms = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    out: list[int] = []
    for m in ms:
        if not any(b & m == b for b in out):
            out.append(m)
    return tuple(out)


def upward_closure(n: int, minimal: Iterable[int]) -> np.ndarray:
    """Boolean indicator over all ``2**n`` subsets of the up-closure."""
    ind = np.zeros(1 << n, dtype=bool)
    for b in minimal:
        ind[b] = True
    for v in range(n):
        view = ind.reshape(-1, 2, 1 << v)
        view[:, 1, :] |= view[:, 0, :]
    return ind


def is_up_closed(n: int, ind: np.ndarray) -> bool:
    for v in range(n):
        view = ind.reshape(-1, 2, 1 << v)
        if np.any(view[:, 0, :] & ~view[:, 1, :]):
            return False
    return True


def minimal_of_indicator(n: int, ind: np.ndarray) -> tuple[int, ...]:
    """Minimal members of an up-closed family given as an indicator."""
    minimal = ind.copy()
    for v in range(n):
        view = ind.reshape(-1, 2, 1 << v)
        mview = minimal.reshape(-1, 2, 1 << v)
        mview[:, 1, :] &= ~view[:, 0, :]
    return minimize(int(m) for m in np.flatnonzero(minimal))


def _check_n(n: int):
    if not 0 <= n <= MAX_PARTICIPANTS:
        raise BadParameters(f"participant count must be in [0, {MAX_PARTICIPANTS}], got {n}")


@dataclass(frozen=True)
class AccessStructure:
    n: int
    L: int
    cumulative_minimal: tuple  # cumulative_minimal[l-1] = minimal sets of A~_l

    def __post_init__(self):
        _check_n(self.n)
        if self.L < 1:
            raise BadParameters("an access structure needs L >= 1")
        levels = tuple(tuple(int(m) for m in lvl) for lvl in self.cumulative_minimal)
        if len(levels) != self.L:
            raise BadParameters(f"expected {self.L} levels of minimal sets, got {len(levels)}")
        full = (1 << self.n) - 1
        for lvl in levels:
            for m in lvl:
                if m & ~full:
                    raise BadParameters(f"set {m:#b} names a participant outside 1..{self.n}")
        object.__setattr__(self, "cumulative_minimal", levels)

    @classmethod
    def from_sets(cls, n: int, levels: Sequence[Iterable[Iterable[int]]], one_based: bool = True):
        """Build from per-level lists of participant index lists."""
        off = 1 if one_based else 0
        return cls(n, len(levels), tuple(tuple(mask_of(i - off for i in s) for s in lvl) for lvl in levels))

    @classmethod
    def from_level_map(cls, n: int, L: int, levels: Sequence[int]):
        """Build from an explicit level for each of the ``2**n`` subsets.

        Raises :class:`InvalidStructure` if some cumulative family is not
        monotone, i.e. the assignment cannot come from any ramp scheme.
        """
        _check_n(n)
        lv = np.asarray(levels, dtype=np.int64)
        if lv.shape != (1 << n,):
            raise BadParameters(f"need {1 << n} levels, got {lv.shape}")
        if lv.min(initial=0) < 0 or lv.max(initial=0) > L:
            raise BadParameters(f"levels must lie in 0..{L}")
        cum = []
        for l in range(1, L + 1):
            ind = lv >= l
            if not is_up_closed(n, ind):
                bad = _first_monotonicity_break(n, ind)
                raise InvalidStructure(
                    f"level {l}: {format_set(bad[0])} reaches level {l} but its superset "
                    f"{format_set(bad[1])} does not")
            cum.append(minimal_of_indicator(n, ind))
        return cls(n, L, tuple(cum))

    def sets(self, level: int, one_based: bool = True) -> list[list[int]]:
        off = 1 if one_based else 0
        return [[i + off for i in members(m)] for m in self.cumulative_minimal[level - 1]]

    def level_map(self) -> np.ndarray:
        """Level of every subset, indexed by bitmask."""
        return _level_map(self)

    def level_of(self, A) -> int:
        mask = as_mask(A)
        for l in range(self.L, 0, -1):
            if any(b & mask == b for b in self.cumulative_minimal[l - 1]):
                return l
        return 0

    def cumulative_family(self, level: int) -> np.ndarray:
        return upward_closure(self.n, self.cumulative_minimal[level - 1])


def _first_monotonicity_break(n: int, ind: np.ndarray) -> tuple[int, int]:
    for m in np.flatnonzero(ind):
        m = int(m)
        for v in range(n):
            if not m >> v & 1 and not ind[m | 1 << v]:
                return m, m | 1 << v
    raise AssertionError("family is monotone")


def _level_map(s: AccessStructure) -> np.ndarray:
    # Valid structures are nested, so summing indicators gives max level.
    # For invalid ones we still want max{l : A in A~_l}.
    lv = np.zeros(1 << s.n, dtype=np.int64)
    for l in range(1, s.L + 1):
        ind = upward_closure(s.n, s.cumulative_minimal[l - 1])
        lv[ind] = l
    return lv


def validate(structure: AccessStructure) -> str | None:
    """``None`` if the structure is well formed, else a description of the problem."""
    s = structure
    for l, lvl in enumerate(s.cumulative_minimal, start=1):
        for m in lvl:
            if m == 0:
                return f"level {l}: the empty set is listed as qualified"
        for a, b in combinations(lvl, 2):
            if a & b in (a, b):
                small, big = (a, b) if a & b == a else (b, a)
                return (f"level {l}: minimal sets are not an antichain, "
                        f"{format_set(small)} is contained in {format_set(big)}")
    for l in range(1, s.L):
        lower = s.cumulative_minimal[l - 1]
        for m in s.cumulative_minimal[l]:
            if not any(b & m == b for b in lower):
                return (f"nesting broken: {format_set(m)} is in A~_{l + 1} "
                        f"but not in A~_{l}")
    return None


def check(structure: AccessStructure) -> AccessStructure:
    problem = validate(structure)
    if problem is not None:
        raise InvalidStructure(problem)
    return structure


def level_of(structure: AccessStructure, A) -> int:
    return structure.level_of(A)


def minimal_sets(structure: AccessStructure, level: int) -> list[int]:
    """Minimal sets of the level family ``A_l`` (not the cumulative one).

    A set at level ``l`` is minimal when dropping any single participant
    takes it out of ``A_l``.  Computed by enumerating all subsets.
    """
    if not 1 <= level <= structure.L:
        raise BadParameters(f"level must be in 1..{structure.L}")
    lv = structure.level_map()
    out = []
    for m in np.flatnonzero(lv == level):
        m = int(m)
        if all(lv[m & ~(1 << v)] != level for v in members(m)):
            out.append(m)
    return sorted(out, key=lambda m: (bin(m).count("1"), m))


def threshold_structure(k: int, L: int, n: int) -> AccessStructure:
    """(k, L, n) ramp threshold structure: level of A is clamp(|A| - (k-L), 0, L)."""
    if not 1 <= L <= k <= n:
        raise BadParameters(f"need 1 <= L <= k <= n, got k={k}, L={L}, n={n}")
    _check_n(n)
    levels = tuple(tuple(mask_of(c) for c in combinations(range(n), k - L + l)) for l in range(1, L + 1))
    return AccessStructure(n, L, levels)


@dataclass(frozen=True)
class PluralAccessStructure:
    """One monotone family per secret; ``families[l-1]`` decrypts secret ``l``."""

    n: int
    L: int
    families: tuple

    def __post_init__(self):
        _check_n(self.n)
        fams = tuple(minimize(int(m) for m in f) for f in self.families)
        if len(fams) != self.L:
            raise BadParameters(f"expected {self.L} families, got {len(fams)}")
        object.__setattr__(self, "families", fams)

    def count_map(self) -> np.ndarray:
        cnt = np.zeros(1 << self.n, dtype=np.int64)
        for f in self.families:
            cnt += upward_closure(self.n, f)
        return cnt


def plural_to_ramp(plural: PluralAccessStructure) -> AccessStructure:
    """Ramp structure where each coalition's level counts the secrets it decrypts."""
    cnt = plural.count_map()
    try:
        s = AccessStructure.from_level_map(plural.n, plural.L, cnt)
    except InvalidStructure as e:
        raise NotRampCompatible(str(e)) from None
    problem = validate(s)
    if problem is not None:
        raise NotRampCompatible(problem)
    return s


def ramp_to_plural(structure: AccessStructure) -> PluralAccessStructure:
    """Plural-secret structure where secret ``l`` is decrypted by ``A~_l``."""
    return PluralAccessStructure(structure.n, structure.L, structure.cumulative_minimal)
