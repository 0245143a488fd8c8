import random
from itertools import combinations

import numpy as np
import pytest

from helpers import random_structure
from rampss.access import (AccessStructure, BadParameters, InvalidStructure, PluralAccessStructure, check,
                           level_of, mask_of, members, minimal_sets, plural_to_ramp, ramp_to_plural,
                           threshold_structure, upward_closure, validate)
from rampss.schemes import builtin_fixture


def S(*idx):
    """Mask from 1-based participant indices."""
    return mask_of(i - 1 for i in idx)


@pytest.fixture
def example1():
    return builtin_fixture("example1")[1]


def test_validate_examples(example1):
    assert validate(threshold_structure(4, 2, 5)) is None
    assert validate(example1) is None
    broken = AccessStructure.from_sets(2, [[[1, 2]], [[1]]])
    problem = validate(broken)
    assert problem is not None and "nesting" in problem and "{V1}" in problem
    with pytest.raises(InvalidStructure):
        check(broken)


def test_validate_rejects_non_antichain_and_empty_set():
    assert "antichain" in validate(AccessStructure(3, 1, ((S(1), S(1, 2)),)))
    assert "empty" in validate(AccessStructure(3, 1, ((0,),)))


def test_example1_cumulative_form(example1):
    assert example1.sets(1) == [[1, 4], [2, 4], [1, 2, 3]]
    assert example1.sets(2) == [[1, 2, 3]]


def test_level_of_examples(example1):
    assert level_of(example1, 0) == 0
    assert level_of(example1, S(1, 4)) == 1
    assert level_of(example1, [0, 3]) == 1
    assert level_of(example1, S(1, 2, 3)) == 2
    t = threshold_structure(4, 2, 6)
    assert level_of(t, S(1, 2, 3)) == 1
    assert level_of(t, S(1, 2)) == 0
    assert level_of(t, S(1, 2, 3, 5, 6)) == 2


def test_minimal_sets_examples(example1):
    assert minimal_sets(example1, 2) == [S(1, 2, 3)]
    assert minimal_sets(example1, 1) == [S(1, 4), S(2, 4)]
    assert sorted(minimal_sets(threshold_structure(3, 1, 5), 1)) == sorted(mask_of(c) for c in combinations(range(5), 3))
    with pytest.raises(BadParameters):
        minimal_sets(example1, 3)


def test_threshold_examples():
    t = threshold_structure(4, 2, 15)
    assert t.n == 15 and t.L == 2
    assert len(t.cumulative_minimal[0]) == 455 and len(t.cumulative_minimal[1]) == 1365
    t = threshold_structure(3, 2, 3)
    assert t.sets(1) == [[1, 2], [1, 3], [2, 3]] and t.sets(2) == [[1, 2, 3]]
    t = threshold_structure(1, 1, 1)
    assert level_of(t, S(1)) == 1 and level_of(t, 0) == 0
    for bad in [(0, 1, 3), (2, 3, 4), (5, 1, 4), (2, 0, 3)]:
        with pytest.raises(BadParameters):
            threshold_structure(*bad)


def test_level_map_matches_level_of(example1):
    lv = example1.level_map()
    assert [level_of(example1, m) for m in range(16)] == lv.tolist()


def test_plural_examples():
    perfect = PluralAccessStructure(3, 1, ((S(1, 2), S(3)),))
    assert plural_to_ramp(perfect) == AccessStructure(3, 1, ((S(3), S(1, 2)),))
    same = plural_to_ramp(PluralAccessStructure(2, 2, ((S(1, 2),), (S(1, 2),))))
    assert same.cumulative_minimal == ((S(1, 2),), (S(1, 2),))


def test_plural_decomposition_of_example1(example1):
    plural = ramp_to_plural(example1)
    ramp = plural_to_ramp(plural)
    # oracle: count, for each of the 16 subsets, the plural families it contains a minimal set of
    for A in range(16):
        count = sum(any(b & A == b for b in fam) for fam in plural.families)
        assert ramp.level_of(A) == count == example1.level_of(A)
    assert ramp == example1


def test_from_level_map_rejects_non_monotone():
    # {V1} at level 1, {V1,V2} at level 0
    with pytest.raises(InvalidStructure):
        AccessStructure.from_level_map(2, 1, [0, 1, 0, 0])
    s = AccessStructure.from_level_map(2, 2, [0, 1, 0, 2])
    assert s.sets(1) == [[1]] and s.sets(2) == [[1, 2]]


def brute_monotone(n, levels):
    return all(levels[A] <= levels[A | 1 << v] for A in range(1 << n) for v in range(n))


def test_from_level_map_decides_monotonicity_exhaustively():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for _ in range(400):
        n, L = rng.randint(1, 3), rng.randint(1, 3)
        lv = [rng.randint(0, L) for _ in range(1 << n)]
        lv[0] = rng.choice([0, lv[0]])
        mono = brute_monotone(n, lv)
        seen[mono] += 1
        if mono:
            s = AccessStructure.from_level_map(n, L, lv)
            if lv[0] == 0:
                assert validate(s) is None
            assert s.level_map().tolist() == lv
        else:
            with pytest.raises(InvalidStructure):
                AccessStructure.from_level_map(n, L, lv)
    assert seen[True] and seen[False]


def _structures(count, seed=3):
    rng = random.Random(seed)
    return [random_structure(rng, rng.randint(1, 6), rng.randint(1, 3)) for _ in range(count)]


STRUCTURES = _structures(60)


@pytest.mark.parametrize("s", STRUCTURES)
def test_level_of_monotone(s):
    assert validate(s) is None
    lv = s.level_map()
    for A in range(1 << s.n):
        for v in range(s.n):
            assert lv[A] <= lv[A | 1 << v]


@pytest.mark.parametrize("s", STRUCTURES)
def test_minimal_sets_reexpand(s):
    lv = s.level_map()
    for l in range(1, s.L + 1):
        up = upward_closure(s.n, minimal_sets(s, l))
        cum = lv >= l
        assert np.array_equal(up | (lv >= l + 1), cum)
        for A in minimal_sets(s, l):
            assert lv[A] == l
            assert all(lv[A & ~(1 << v)] != l for v in members(A))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 7) for k in range(1, n + 1)])
def test_perfect_threshold_levels(n, k):
    s = threshold_structure(k, 1, n)
    assert validate(s) is None
    for A in range(1 << n):
        assert (s.level_of(A) == 1) == (bin(A).count("1") >= k)


def test_plural_roundtrip_many_structures():
    rng = random.Random(11)
    for _ in range(300):
        s = random_structure(rng, rng.randint(1, 5), rng.randint(1, 3))
        assert plural_to_ramp(ramp_to_plural(s)) == s


def test_bitmask_helpers():
    assert members(S(1, 3, 5)) == [0, 2, 4]
    assert mask_of([]) == 0
    with pytest.raises(BadParameters):
        AccessStructure(21, 1, ((1,),))
    with pytest.raises(BadParameters):
        AccessStructure(2, 1, ((S(3),),))
