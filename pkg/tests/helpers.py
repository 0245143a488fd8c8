import random
from itertools import permutations

from rampss.access import AccessStructure, minimize
from rampss.gf import FieldMatrix
from rampss.schemes import LinearScheme


def random_structure(rng: random.Random, n: int, L: int) -> AccessStructure:
    """Valid structure: top family first, then each lower level adds sets."""
    full = (1 << n) - 1

    def some_sets(k):
        return [rng.randint(1, full) for _ in range(k)]

    levels = [None] * L
    levels[L - 1] = list(minimize(some_sets(rng.randint(1, 3))))
    for l in range(L - 2, -1, -1):
        levels[l] = list(minimize(levels[l + 1] + some_sets(rng.randint(0, 3))))
    return AccessStructure(n, L, tuple(tuple(x) for x in levels))


def random_scheme(rng: random.Random, p: int, L: int, m: int, n: int, max_symbols: int = 2) -> LinearScheme:
    owner = []
    for i in range(n):
        owner += [i] * rng.randint(0, max_symbols)
    rng.shuffle(owner)
    G = FieldMatrix.from_rows([[rng.randrange(p) for _ in owner] for _ in range(L + m)], p, len(owner))
    return LinearScheme(p, L, m, n, tuple(owner), G)


def random_invertible(rng: random.Random, L: int, p: int) -> FieldMatrix:
    from rampss.gf import matrix_rank
    while True:
        M = FieldMatrix.from_rows([[rng.randrange(p) for _ in range(L)] for _ in range(L)], p)
        if matrix_rank(M) == L:
            return M


def leibniz_det(rows, p):
    """Determinant by the permutation expansion; independent of elimination."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % p
