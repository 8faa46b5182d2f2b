import pytest
from math import comb

from doldring.gf2 import TruncatedSeries, VariableTable
from doldring.swclass import (
    ConjugateBundle,
    bundle_from_variables,
    chern_from_sw,
    chern_in_sw_variables,
    direct_sum,
    odd_class_factor,
    sw_class,
    sw_vector,
    total_sw,
    trivial_bundle,
    whitney_sum,
)


def table_for(rank, prefix="c", extra=()):
    pairs = [(f"{prefix}{j}", 2 * j) for j in range(1, rank + 1)]
    for name, r in extra:
        pairs += [(f"{name}{j}", 2 * j) for j in range(1, r + 1)]
    return VariableTable.from_pairs(pairs + [("y", 1)])


def bundle(rank):
    T = table_for(rank)
    return bundle_from_variables(T, "omega", [f"c{j}" for j in range(1, rank + 1)])


def naive_sw(b, i):
    """Integer binomials reduced afterwards, independently of the Lucas rule."""
    acc = b.table.zero()
    for j in range(b.rank + 1):
        k = i - 2 * j
        if 0 <= k <= b.rank - j and comb(b.rank - j, k) % 2:
            acc = acc + b.y ** k * b.c(j)
    return acc


@pytest.mark.parametrize("r", range(1, 7))
def test_low_classes(r):
    b = bundle(r)
    y, c1 = b.y, b.c(1)
    assert sw_class(b, 0) == 1
    assert sw_class(b, 1) == (y if r % 2 else b.table.zero())
    assert sw_class(b, 2) == c1 + (y ** 2 if comb(r, 2) % 2 else b.table.zero())


@pytest.mark.parametrize("r", range(1, 9))
def test_closed_form_matches_formula(r):
    b = bundle(r)
    W = total_sw(b, 2 * r + 2)
    for i in range(2 * r + 3):
        assert W[i] == sw_class(b, i) == naive_sw(b, i)


def test_total_examples():
    b = bundle(1)
    W = total_sw(b, 2)
    assert [W[i] for i in range(3)] == [b.table.one(), b.y, b.c(1)]
    W2 = total_sw(bundle(2), 1)
    assert W2[1] == 0 and W2.bound == 1


def test_out_of_range():
    b = bundle(2)
    assert sw_class(b, 7) == 0
    with pytest.raises(ValueError):
        sw_class(b, 7, strict=True)
    with pytest.raises(ValueError):
        sw_class(b, -1)


@pytest.mark.parametrize("r", range(1, 7))
def test_chern_roundtrip(r):
    b = bundle(r)
    assert chern_from_sw(sw_vector(b), r, b.y) == list(b.chern)


@pytest.mark.parametrize("r", range(1, 7))
def test_sw_roundtrip_through_w_variables(r):
    # formal w_2i variables; the Q_j must map back onto them
    T = VariableTable.from_pairs([(f"w{2 * i}", 2 * i) for i in range(1, r + 1)] + [("y", 1)])
    b = bundle(r)
    ws = {i: T.var(f"w{2 * i}") for i in range(1, r + 1)}
    Q = chern_in_sw_variables(b, ws)
    symbolic = ConjugateBundle("q", r, tuple(Q[j] for j in range(1, r + 1)), T.var("y"))
    for i in range(1, r + 1):
        assert sw_class(symbolic, 2 * i) == ws[i]


def test_first_chern_in_w():
    for r in range(1, 7):
        b = bundle(r)
        correction = b.y ** 2 if comb(r, 2) % 2 else b.table.zero()
        assert chern_from_sw(sw_vector(b), r, b.y)[0] == sw_class(b, 2) + correction
    b1 = bundle(1)
    assert chern_from_sw(sw_vector(b1), 1, b1.y) == [sw_class(b1, 2)]


@pytest.mark.parametrize("r", range(1, 7))
def test_odd_classes_divisible_by_y(r):
    b = bundle(r)
    y_index = b.table.index("y")
    for j in range(r):
        w = sw_class(b, 2 * j + 1)
        assert all(m[y_index] >= 1 for m in w.terms)
        assert b.y * odd_class_factor(b, j) == w
    assert odd_class_factor(b, 0) == (b.table.one() if r % 2 else b.table.zero())


def test_odd_factor_rank3():
    b = bundle(3)
    assert odd_class_factor(b, 1) == b.y ** 2


@pytest.mark.parametrize("r", range(1, 9))
def test_orientability_parity(r):
    assert (sw_class(bundle(r), 1) == 0) == (r % 2 == 0)


@pytest.mark.parametrize("r1,r2", [(a, b) for a in range(1, 5) for b in range(1, 5)])
def test_whitney_multiplicativity(r1, r2):
    T = table_for(r1, "a", [("b", r2)])
    b1 = bundle_from_variables(T, "b1", [f"a{j}" for j in range(1, r1 + 1)])
    b2 = bundle_from_variables(T, "b2", [f"b{j}" for j in range(1, r2 + 1)])
    D = 2 * (r1 + r2)
    s = whitney_sum(b1, b2, D)
    assert s == total_sw(b1, D) * total_sw(b2, D)
    assert s[1] == (b1.y if (r1 + r2) % 2 else T.zero())


def test_whitney_with_trivial_line():
    b = bundle(3)
    triv = trivial_bundle(b.table, 1)
    D = 8
    assert whitney_sum(b, triv, D) == total_sw(b, D) * TruncatedSeries.linear(b.table, b.y, D)


def test_rank_one_sum_t2():
    T = VariableTable.from_pairs([("a1", 2), ("b1", 2), ("y", 1)])
    b1 = bundle_from_variables(T, "b1", ["a1"])
    b2 = bundle_from_variables(T, "b2", ["b1"])
    s = direct_sum(b1, b2)
    # (1 + yt + a t^2)(1 + yt + b t^2) at t^2
    assert total_sw(s, 4)[2] == T.var("a1") + T.var("b1") + T.var("y") ** 2
