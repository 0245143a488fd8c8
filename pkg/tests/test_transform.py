import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import leibniz_det, random_invertible, random_scheme, random_structure
from rampss.access import mask_of, threshold_structure
from rampss.analysis import classify, coding_rates, realized_structure
from rampss.gf import FieldMatrix, matrix_det, matrix_inverse, matrix_rank
from rampss.schemes import builtin_fixture, pd_concat
from rampss.transform import (ConditionFailed, FieldTooSmall, HilbertSpec, NotPD, SpecViolation, all_T, apply_T,
                              canonical_spec, default_T, eq22_check, hilbert_det, hilbert_matrix, strengthen,
                              superregular_check)


def S(*idx):
    return mask_of(i - 1 for i in idx)


def T_ex(p):
    return FieldMatrix.from_rows([[1, 1], [1, -1]], p)


def scan_inv(a, p):
    return next(b for b in range(1, p) if a * b % p == 1)


def test_hilbert_matrix_examples():
    assert hilbert_matrix(HilbertSpec((1,), (0,), 17)).tolist() == [[1]]
    # 1/(1+0), 1/(1+3), 1/(2+0), 1/(2+3) by scanning for inverses
    expected = [[scan_inv(x + y, 17) for y in (0, 3)] for x in (1, 2)]
    assert expected == [[1, 13], [9, 7]]
    assert hilbert_matrix(HilbertSpec((1, 2), (0, 3), 17)).tolist() == expected


def test_hilbert_spec_violations():
    with pytest.raises(SpecViolation):
        hilbert_matrix(HilbertSpec((1, 16), (0, 1), 17))  # 16 + 1 = 0
    with pytest.raises(SpecViolation):
        hilbert_matrix(HilbertSpec((1, 1), (0, 3), 17))
    with pytest.raises(SpecViolation):
        HilbertSpec((1, 2), (0,), 17)


def test_hilbert_det_examples():
    spec = HilbertSpec((1, 2), (0, 3), 17)
    assert hilbert_det(spec).value == (1 * 7 - 13 * 9) % 17
    spec = HilbertSpec((1, 2, 3), (0, 4, 5), 17)
    rows = hilbert_matrix(spec).tolist()
    assert hilbert_det(spec).value == leibniz_det(rows, 17) == matrix_det(hilbert_matrix(spec)).value
    assert hilbert_det(HilbertSpec((1, 1), (0, 3), 17)).value == 0


def test_default_T_examples():
    assert default_T(1, 17).tolist() == [[1]]
    T = default_T(2, 17)
    assert matrix_inverse(T).tolist() == [[1, 13], [9, 7]]
    with pytest.raises(FieldTooSmall):
        default_T(2, 2)
    with pytest.raises(FieldTooSmall):
        default_T(2, 3)
    # GF(5), L = 2: the canonical ys (0, 3) work; L = 3 needs a searched spec
    assert superregular_check(matrix_inverse(default_T(2, 5))) is None
    assert canonical_spec(3, 7).violation() is None
    assert superregular_check(matrix_inverse(default_T(3, 7))) is None


@pytest.mark.parametrize("L,p", [(1, 2), (2, 2), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)])
def test_field_too_small_matches_enumeration(L, p):
    # oracle: try every (xs, ys) in GF(p)
    from itertools import product
    exists = any(len(set(v[:L])) == L and len(set(v[L:])) == L and all((x + y) % p for x in v[:L] for y in v[L:])
                 for v in product(range(p), repeat=2 * L))
    if exists:
        assert canonical_spec(L, p).violation() is None
    else:
        with pytest.raises(FieldTooSmall):
            canonical_spec(L, p)


def test_canonical_spec_is_deterministic():
    assert canonical_spec(3, 17) == HilbertSpec((1, 2, 3), (0, 4, 5), 17)
    assert canonical_spec(2, 5) == canonical_spec(2, 5)


def test_superregular_examples():
    assert superregular_check(FieldMatrix.identity(2, 17)) == ((0,), (1,))
    assert superregular_check(FieldMatrix.from_rows([[1, 1], [1, 2]], 5)) is None
    assert superregular_check(T_ex(3)) is None
    # [[1,1],[1,-1]] is singular over GF(2)
    assert superregular_check(T_ex(2)) == ((0, 1), (0, 1))


def test_eq22_examples():
    scheme, printed = builtin_fixture("example1")
    realized = realized_structure(scheme)
    assert eq22_check(T_ex(3), scheme, realized) is None
    bad = eq22_check(FieldMatrix.identity(2, 3), scheme, realized)
    # I({V1,V4}) = {S1}; row 2, column 1 of the identity is [0]
    assert bad is not None and bad.rows == (1,) and bad.columns == (0,) and bad.rank == 0
    assert bad.subset == S(1, 4) or classify(scheme, realized).witness(bad.subset) == (0,)
    assert "rank 0" in bad.describe(scheme.names)
    with pytest.raises(NotPD):
        eq22_check(T_ex(3), scheme, printed)


def test_eq22_single_level():
    st_ = threshold_structure(2, 1, 3)
    s = pd_concat(st_, 5)
    assert eq22_check(FieldMatrix.from_rows([[3]], 5), s, st_) is None
    with pytest.raises(ConditionFailed):
        eq22_check(FieldMatrix.from_rows([[0]], 5), s, st_)


def test_apply_T_examples():
    scheme, _ = builtin_fixture("example1")
    assert apply_T(scheme, FieldMatrix.identity(2, 3)) == scheme
    out = apply_T(scheme, T_ex(3))
    # rows S'1 S'2 R1..R4; -1 = 2 in GF(3)
    V3 = [out.G.column(c) for c in out.symbols_of(2)]
    V4 = [out.G.column(c) for c in out.symbols_of(3)]
    assert V3 == [(1, 1, 1, 0, 0, 1), (1, 2, 0, 1, 1, 0)]
    assert V4 == [(1, 1, 1, 0, 0, 0), (1, 1, 0, 1, 0, 0)]
    assert [out.G.column(c) for c in out.symbols_of(0)] == [scheme.G.column(c) for c in scheme.symbols_of(0)]

    r3, _ = builtin_fixture("remark3")
    out = apply_T(r3, T_ex(3))
    assert [out.G.column(c) for c in range(3)] == [(1, 1, 1), (2, 0, 1), (0, 0, 1)]


def test_apply_T_rejects_singular():
    with pytest.raises(ConditionFailed):
        apply_T(builtin_fixture("example1", p=2)[0], T_ex(2))


def test_strengthen_examples():
    _, printed = builtin_fixture("example1")
    out, T, report = strengthen(pd_concat(printed, 17), printed)
    assert report.strong and T == default_T(2, 17)
    with pytest.raises(NotPD):
        strengthen(*builtin_fixture("remark3"))
    s2, _ = builtin_fixture("example1", p=2)
    with pytest.raises(ConditionFailed):
        strengthen(s2, realized_structure(s2), T_ex(2))


def test_strengthen_example1_realized():
    scheme, _ = builtin_fixture("example1")
    realized = realized_structure(scheme)
    out, _, report = strengthen(scheme, realized, T_ex(3))
    assert report.strong and out == apply_T(scheme, T_ex(3))
    with pytest.raises(ConditionFailed):
        strengthen(scheme, realized, FieldMatrix.identity(2, 3))


def test_remark4_forced_is_not_strong():
    s, st_ = builtin_fixture("remark3")
    r = classify(apply_T(s, T_ex(3)), st_)
    assert not r.strong
    assert any(m == S(2, 3) for m, _ in r.strong_violations)


def test_all_T_counts():
    # |GL(2, 2)| = 6, |GL(2, 3)| = 48
    assert sum(1 for _ in all_T(2, 2)) == 6
    assert sum(1 for _ in all_T(2, 3)) == 48


# -- properties --------------------------------------------------------------

@st.composite
def hilbert_specs(draw, max_L=5, primes=(17, 101)):
    p = draw(st.sampled_from(primes))
    L = draw(st.integers(1, max_L))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=2 * L, max_size=2 * L))
    spec = HilbertSpec(tuple(vals[:L]), tuple(vals[L:]), p)
    assume(spec.violation() is None)
    return spec


@settings(max_examples=200, deadline=None)
@given(hilbert_specs())
def test_closed_form_det_matches_elimination(spec):
    assert hilbert_det(spec) == matrix_det(hilbert_matrix(spec))
    assert hilbert_det(spec).value != 0


@settings(max_examples=60, deadline=None)
@given(hilbert_specs(max_L=4, primes=(17,)))
def test_hilbert_superregular(spec):
    assert superregular_check(hilbert_matrix(spec)) is None


@pytest.mark.parametrize("seed", range(25))
def test_apply_T_preserves_ranks_and_inverts(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5, 17])
    L = rng.randint(1, 3)
    s = random_scheme(rng, p, L, rng.randint(0, 3), rng.randint(1, 5))
    T = random_invertible(rng, L, p)
    out = apply_T(s, T)
    assert out.symbol_owner == s.symbol_owner
    for i in range(s.n):
        assert matrix_rank(out.restrict(1 << i)) == matrix_rank(s.restrict(1 << i))
    assert coding_rates(out) == coding_rates(s)
    assert apply_T(out, matrix_inverse(T)) == s


def random_structures(count, seed, Ls=(2, 3)):
    rng = random.Random(seed)
    return [random_structure(rng, rng.randint(1, 5), rng.choice(Ls)) for _ in range(count)]


@pytest.mark.parametrize("st_", random_structures(100, 77))
def test_soundness_default_T(st_):
    out, T, report = strengthen(pd_concat(st_, 17), st_)
    assert report.strong and classify(out, st_).strong
    assert superregular_check(matrix_inverse(T)) is None


def violating_cases(count, seed):
    """(scheme, structure, T) with a rank-condition violation, from random T over GF(5)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        st_ = random_structure(rng, rng.randint(2, 5), rng.choice([2, 3]))
        s = pd_concat(st_, 5)
        T = random_invertible(rng, st_.L, 5)
        if eq22_check(T, s, st_) is not None:
            out.append((s, st_, T))
    return out


@pytest.mark.parametrize("case", violating_cases(50, 12))
def test_necessity_random_T(case):
    s, st_, T = case
    assert not classify(apply_T(s, T), st_).strong
    with pytest.raises(ConditionFailed):
        strengthen(s, st_, T)


@pytest.mark.parametrize("seed", range(30))
def test_condition_decides_strongness(seed):
    # exhaustive over GL(L, p) for a small structure: the rank condition holds exactly when the result is strong
    rng = random.Random(900 + seed)
    st_ = random_structure(rng, rng.randint(2, 4), 2)
    p = rng.choice([2, 3])
    s = pd_concat(st_, p)
    report = classify(s, st_)
    for T in all_T(2, p):
        ok = eq22_check(T, s, st_, report=report) is None
        assert ok == classify(apply_T(s, T), st_).strong


def test_necessity_identity_example1():
    scheme, _ = builtin_fixture("example1")
    realized = realized_structure(scheme)
    assert not classify(apply_T(scheme, FieldMatrix.identity(2, 3)), realized).strong


def test_strict_mode_agrees():
    for st_ in random_structures(20, 5):
        s = pd_concat(st_, 17)
        T = default_T(st_.L, 17)
        assert eq22_check(T, s, st_) == eq22_check(T, s, st_, strict=True)
