"""Linear secret-sharing schemes and their constructors.

A scheme is a generator matrix ``G`` over GF(p) with ``L + m`` rows
(secret symbols first, then random symbols) and one column per share
symbol.  Feeding the input row ``(S || R)`` through ``G`` gives every
share symbol; ``symbol_owner[c]`` says which participant holds column
``c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import access
from .access import AccessStructure, BadParameters, members, threshold_structure
from .gf import FieldMatrix, NoSolution, check_modulus, solve_linear


class Insufficient(Exception):
    """The coalition cannot decrypt the whole secret.

    ``recoverable`` lists ``(c, value)`` pairs: each secret functional
    ``c`` in a basis of what the coalition does learn, with ``c . S``.
    """

    def __init__(self, recoverable):
        self.recoverable = recoverable
        super().__init__(f"only a {len(recoverable)}-dimensional part of the secret is recoverable")


@dataclass(frozen=True)
class LinearScheme:
    p: int
    L: int
    m: int
    n: int
    symbol_owner: tuple
    G: FieldMatrix
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        check_modulus(self.p)
        owner = tuple(int(o) for o in self.symbol_owner)
        object.__setattr__(self, "symbol_owner", owner)
        if self.G.p != self.p:
            raise BadParameters("generator matrix lives in a different field")
        if self.G.rows != self.L + self.m:
            raise BadParameters(f"G has {self.G.rows} rows, expected L+m = {self.L + self.m}")
        if self.G.cols != len(owner):
            raise BadParameters(f"G has {self.G.cols} columns but {len(owner)} symbols are owned")
        if any(not 0 <= o < self.n for o in owner):
            raise BadParameters("symbol owned by a participant outside 0..n-1")
        if self.L < 1 or self.m < 0:
            raise BadParameters("need L >= 1 and m >= 0")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"V{i + 1}" for i in range(self.n)))
        elif len(self.names) != self.n:
            raise BadParameters("one name per participant required")

    def symbols_of(self, i: int) -> list[int]:
        return [c for c, o in enumerate(self.symbol_owner) if o == i]

    def columns(self, A) -> list[int]:
        """Share-symbol columns held by the coalition ``A``, in column order."""
        mask = access.as_mask(A)
        return [c for c, o in enumerate(self.symbol_owner) if mask >> o & 1]

    def restrict(self, A) -> FieldMatrix:
        return self.G.submatrix(range(self.G.rows), self.columns(A))

    def layout(self) -> list[list[int]]:
        return [self.symbols_of(i) for i in range(self.n)]


@dataclass(frozen=True)
class ShareBundle:
    """Share values of a coalition: ``values[k]`` belongs to ``participants[k]``."""

    participants: tuple
    values: tuple

    def subset(self, keep) -> "ShareBundle":
        keep = set(access.members(access.as_mask(keep)))
        pairs = [(i, v) for i, v in zip(self.participants, self.values) if i in keep]
        return ShareBundle(tuple(i for i, _ in pairs), tuple(v for _, v in pairs))

    @property
    def mask(self) -> int:
        return access.mask_of(self.participants)


def encode(scheme: LinearScheme, secrets: Sequence[int], randoms: Sequence[int]) -> ShareBundle:
    if len(secrets) != scheme.L or len(randoms) != scheme.m:
        raise BadParameters(f"need {scheme.L} secrets and {scheme.m} randoms, "
                            f"got {len(secrets)} and {len(randoms)}")
    vals = scheme.G.left_apply([int(x) for x in secrets] + [int(r) for r in randoms])
    per = tuple(tuple(vals[c] for c in scheme.symbols_of(i)) for i in range(scheme.n))
    return ShareBundle(tuple(range(scheme.n)), per)


def _bundle_vector(scheme: LinearScheme, bundle: ShareBundle) -> tuple[list[int], list[int]]:
    """Columns of the bundle's coalition and the matching share values."""
    by_owner = dict(zip(bundle.participants, bundle.values))
    cols, vals = [], []
    for i in sorted(by_owner):
        own = scheme.symbols_of(i)
        if len(own) != len(by_owner[i]):
            raise BadParameters(f"participant {scheme.names[i]} owns {len(own)} symbols, "
                                f"bundle has {len(by_owner[i])}")
        cols.extend(own)
        vals.extend(int(v) % scheme.p for v in by_owner[i])
    return cols, vals


def reconstruct(scheme: LinearScheme, bundle: ShareBundle) -> tuple:
    """Recover the secret from a bundle, or raise :class:`Insufficient`."""
    cols, vals = _bundle_vector(scheme, bundle)
    p = scheme.p
    GA = scheme.G.submatrix(range(scheme.G.rows), cols)
    out = []
    try:
        for j in range(scheme.L):
            target = [0] * (scheme.L + scheme.m)
            target[j] = 1
            alpha = solve_linear(GA, target)
            out.append(sum(a * v for a, v in zip(alpha, vals)) % p)
        return tuple(out)
    except NoSolution:
        pass
    from .analysis import decryptable_subspace

    rec = []
    for leak in decryptable_subspace(scheme, bundle.mask):
        val_of = dict(zip(cols, vals))
        rec.append((leak.functional, sum(a * val_of[c] for a, c in zip(leak.coefficients, leak.symbols)) % p))
    raise Insufficient(rec)


def isn_perfect(family: Sequence[int], n: int, p: int) -> LinearScheme:
    """Perfect one-secret scheme for a monotone family (additive multiple assignment).

    Every minimal set ``{i_1 < ... < i_t}`` gets its own additive split
    of ``S``: ``i_j`` receives a fresh random ``r_j`` for ``j < t`` and
    ``i_t`` receives ``S - sum(r_j)``.
    """
    return _stack([family], n, p)


def _stack(families: Sequence[Sequence[int]], n: int, p: int) -> LinearScheme:
    check_modulus(p)
    L = len(families)
    fams = []
    for f in families:
        f = [access.as_mask(b) for b in f]
        if not f:
            raise BadParameters("family must have at least one minimal set")
        if any(b == 0 for b in f):
            raise BadParameters("the empty set cannot be a minimal qualified set")
        if len(access.minimize(f)) != len(f):
            raise BadParameters("minimal sets must form an antichain")
        if any(b >> n for b in f):
            raise BadParameters("minimal set names a participant outside 0..n-1")
        fams.append(list(f))

    # pieces[(l, b_idx, member)] = (secret row or None, random rows with signs)
    m = 0
    pieces: dict = {}
    for l, f in enumerate(fams):
        for bi, b in enumerate(f):
            mem = members(b)
            rs = list(range(m, m + len(mem) - 1))
            m += len(mem) - 1
            for j, i in enumerate(mem[:-1]):
                pieces[(l, bi, i)] = (None, [(rs[j], 1)])
            pieces[(l, bi, mem[-1])] = (l, [(r, -1) for r in rs])

    columns, owner = [], []
    for i in range(n):
        for l, f in enumerate(fams):
            for bi, b in enumerate(f):
                if not b >> i & 1:
                    continue
                sec, rnd = pieces[(l, bi, i)]
                col = [0] * (L + m)
                if sec is not None:
                    col[sec] = 1
                for r, sgn in rnd:
                    col[L + r] = sgn
                columns.append(col)
                owner.append(i)
    G = FieldMatrix.from_rows(zip(*columns), p, len(columns)) if columns \
        else FieldMatrix.zeros(L + m, 0, p)
    return LinearScheme(p, L, m, n, tuple(owner), G)


def pd_concat(structure: AccessStructure, p: int) -> LinearScheme:
    """PD ramp scheme: one perfect scheme per cumulative family, share-wise stacked.

    Secret ``S_l`` is shared with :func:`isn_perfect` over ``A~_l`` using
    its own random pool, so a coalition at level ``l`` decrypts exactly
    ``S_1..S_l`` and nothing about the rest.
    """
    access.check(structure)
    return _stack(structure.cumulative_minimal, structure.n, p)


def shamir_ramp(k: int, L: int, n: int, p: int, points: Sequence[int] | None = None) -> LinearScheme:
    """(k, L, n) ramp scheme from f(x) = sum S_l x^(l-1) + sum R_j x^(L+j-1).

    Participant ``i`` holds ``f(points[i])``; points default to 1..n.
    """
    check_modulus(p)
    if not 1 <= L <= k <= n:
        raise BadParameters(f"need 1 <= L <= k <= n, got k={k}, L={L}, n={n}")
    if n >= p:
        raise BadParameters(f"need n < p for distinct nonzero points, got n={n}, p={p}")
    pts = list(range(1, n + 1)) if points is None else [int(x) for x in points]
    if len(pts) != n:
        raise BadParameters(f"need {n} evaluation points, got {len(pts)}")
    red = [x % p for x in pts]
    if 0 in red:
        raise BadParameters("evaluation points must be nonzero mod p")
    if len(set(red)) != n:
        raise BadParameters("evaluation points must be distinct mod p")
    G = FieldMatrix.from_rows(([pow(x, e, p) for x in red] for e in range(k)), p, n)
    return LinearScheme(p, L, k - L, n, tuple(range(n)), G)


def _example1(p: int) -> tuple[LinearScheme, AccessStructure]:
    #          V1      V2      V3      V4
    # rows: S1 S2 R1 R2 R3 R4
    cols = [
        (0, 0, 1, 0, 0, 0), (0, 0, 0, 0, 1, 0),   # V1 = {R1, R3}
        (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1),   # V2 = {R2, R4}
        (1, 0, 1, 0, 0, 1), (0, 1, 0, 1, 1, 0),   # V3 = {R1+R4+S1, R2+R3+S2}
        (1, 0, 1, 0, 0, 0), (1, 0, 0, 1, 0, 0),   # V4 = {R1+S1, R2+S1}
    ]
    G = FieldMatrix.from_rows(zip(*cols), p, len(cols))
    scheme = LinearScheme(p, 2, 4, 4, (0, 0, 1, 1, 2, 2, 3, 3), G)
    structure = AccessStructure.from_sets(4, [[[1, 4], [2, 4], [1, 2, 3]], [[1, 2, 3]]])
    return scheme, structure


def _remark3(p: int) -> tuple[LinearScheme, AccessStructure]:
    # rows: S1 S2 R;  V1 = S1+R, V2 = S1+S2+R, V3 = R
    G = FieldMatrix.from_rows([(1, 1, 0), (0, 1, 0), (1, 1, 1)], p, 3)
    return LinearScheme(p, 2, 1, 3, (0, 1, 2), G), threshold_structure(3, 2, 3)


def _remark1(p: int) -> tuple[LinearScheme, AccessStructure]:
    return shamir_ramp(4, 2, 15, p), threshold_structure(4, 2, 15)


FIXTURES = {
    "example1": (_example1, 3),
    "remark3": (_remark3, 3),
    "remark1": (_remark1, 17),
}


def builtin_fixture(name: str, p: int | None = None) -> tuple[LinearScheme, AccessStructure]:
    """Worked schemes exactly as printed: ``example1``, ``remark3``, ``remark1``.

    Default fields are GF(3), GF(3) and GF(17) respectively.
    """
    try:
        build, default_p = FIXTURES[name]
    except KeyError:
        raise BadParameters(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return build(default_p if p is None else p)
