import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import perm_s_count_oracle, t_count_oracle
from rigidity_forge.fields import cyclotomic, primitive_root_of_unity
from rigidity_forge.tuples import (
    all_tuples,
    build_s_plan,
    classes,
    count_perm_s,
    eval_pf,
    index_tuple,
    perm_class,
    perm_s_mask,
    t_mask,
    tuple_index,
)


@pytest.mark.parametrize("d,n,m,expected", [(2, 8, 3, 182), (3, 4, 1, 36)])
def test_perm_s_counts(d, n, m, expected):
    plan = build_s_plan(d, n, m)
    assert count_perm_s(plan) == expected == perm_s_count_oracle(d, n, m)
    assert int(perm_s_mask(plan).sum()) == expected


@pytest.mark.parametrize("d,n,m,expected", [(2, 8, 3, 37), (3, 4, 1, 9)])
def test_t_counts(d, n, m, expected):
    plan = build_s_plan(d, n, m)
    assert plan.t_size == expected == t_count_oracle(d, n, m)
    assert int(t_mask(plan).sum()) == expected


@given(st.integers(2, 4), st.integers(1, 5), st.integers(1, 2))
def test_plan_counts_match_enumeration(d, n, m):
    if d * m > n:
        with pytest.raises(ValueError):
            build_s_plan(d, n, m)
        return
    plan = build_s_plan(d, n, m)
    assert count_perm_s(plan) == perm_s_count_oracle(d, n, m)
    assert plan.t_size == t_count_oracle(d, n, m)
    assert len(plan.S) == d ** plan.free
    tup = [tuple(t) for t in all_tuples(d, n)]
    for t, flag in zip(tup, perm_s_mask(plan)):
        assert bool(flag) == plan.in_perm_s(t)


@given(st.integers(2, 5), st.integers(1, 5), st.data())
def test_tuple_index_round_trip(d, n, data):
    k = data.draw(st.integers(0, d ** n - 1))
    t = index_tuple(k, d, n)
    assert tuple_index(t, d) == k
    assert tuple(all_tuples(d, n)[k]) == t


def test_classes_cover_everything():
    for d, n in ((2, 5), (3, 3), (4, 2)):
        total = sum(perm_class(c)[1] for c in classes(d, n))
        assert total == d ** n
        assert len(classes(d, n)) == len(set(tuple(sorted(t)) for t in itertools.product(range(d), repeat=n)))


def test_eval_pf_against_direct_sum():
    d, n = 3, 2
    F = cyclotomic(3)
    om = primitive_root_of_unity(F, 3)
    f = [1, 0, 2, -1, 0, 0, 3, 1, 0]
    for J in itertools.product(range(d), repeat=n):
        direct = F.zero
        for k, I in enumerate(itertools.product(range(d), repeat=n)):
            direct = direct + F.element(f[k]) * om.element ** (sum(a * b for a, b in zip(I, J)))
        assert eval_pf(f, om, J) == direct
    with pytest.raises(ValueError):
        eval_pf(f, om, (3, 0))
