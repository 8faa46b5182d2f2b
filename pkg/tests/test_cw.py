import pytest
from hypothesis import given, settings, strategies as st

from doldring.cw import (
    FIXED,
    FREE,
    ChainComplexError,
    EquivariantCW,
    Z2ChainComplex,
    antipodal_sphere,
    betti_numbers,
    complex_projective_space,
    dold_complex,
    euler_characteristic,
    even_cell_complex,
    flag_schubert_counts,
    gf2_rank,
    grassmann_schubert_counts,
    involution_quotient,
    perfectness_check,
    product_complex,
    real_projective_space,
    two_cell_sphere,
)
from doldring.grassmann import grassmann_presentation, sphere_bundle_presentation, tensor_dims
from doldring.groebner import hilbert_function

POINT = complex_projective_space(0)


def dense_rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                rows[i] = [(a ^ b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                    min_size=1, max_size=7)))
def test_rank_matches_dense_elimination(rows):
    cols = [sum(row[j] << i for i, row in enumerate(rows)) for j in range(len(rows[0]))]
    assert gf2_rank(cols) == dense_rank(rows)


def test_circle_times_point():
    s1 = antipodal_sphere(1)
    prod = product_complex(s1, POINT)
    assert prod.complex.counts() == [2, 2]
    assert prod.involution == s1.involution
    assert [sorted(prod.complex.boundary_of(1, c)) for c in prod.complex.cells[1]] == [["e0+*d0", "e0-*d0"]] * 2


def test_rp1_quotient():
    q = involution_quotient(product_complex(antipodal_sphere(1), POINT))
    assert q.counts() == [1, 1]
    assert q.boundary[1] == (0,)


def test_s1_times_s2():
    prod = product_complex(antipodal_sphere(1), two_cell_sphere(2))
    assert prod.complex.counts() == [2, 2, 2, 2]
    q = involution_quotient(prod)
    assert q.counts() == [1, 1, 1, 1]
    assert perfectness_check(q).perfect
    assert betti_numbers(q) == [1, 1, 1, 1]


def test_betti_examples():
    assert betti_numbers(real_projective_space(3)) == [1, 1, 1, 1]
    assert betti_numbers(two_cell_sphere(2).complex) == [1, 0, 1]
    assert perfectness_check(real_projective_space(5)).perfect


def test_interval_is_not_perfect():
    interval = Z2ChainComplex.from_matrices([["a", "b"], ["e"]], {1: [[1], [1]]})
    res = perfectness_check(interval)
    assert not res.perfect and res.cell == "e" and res.dimension == 1
    assert betti_numbers(interval) == [1, 0]


def test_boundary_squared_checked():
    with pytest.raises(ChainComplexError):
        Z2ChainComplex.from_matrices([["v"], ["e"], ["f"]], {1: [[1]], 2: [[1]]})


def test_involution_checks():
    cx = Z2ChainComplex.from_matrices([["a", "b"]], {})
    with pytest.raises(ChainComplexError):
        EquivariantCW(cx, ((0, 1),), FREE)
    with pytest.raises(ChainComplexError):
        EquivariantCW(cx, ((1, 0),), FIXED)
    with pytest.raises(ChainComplexError):
        product_complex(EquivariantCW.fixed(cx), POINT)
    with pytest.raises(ChainComplexError):
        involution_quotient(EquivariantCW.fixed(cx))
    # an involution that does not commute with the boundary
    cx2 = Z2ChainComplex.from_matrices([["a", "b"], ["e", "f"]], {1: [[1, 0], [1, 0]]})
    with pytest.raises(ChainComplexError):
        EquivariantCW(cx2, ((1, 0), (1, 0)), FREE)


def test_json_schema_example():
    doc = {"cells": {"0": ["a", "b"], "1": ["e", "f"]}, "boundary": {"1": [[1, 1], [1, 1]]},
           "involution": {"0": [1, 0], "1": [1, 0]}, "mode": "free"}
    c = EquivariantCW.from_json(doc)
    assert c.to_json() == doc
    assert betti_numbers(involution_quotient(product_complex(c, POINT))) == [1, 1]


def test_malformed_json():
    with pytest.raises(ChainComplexError):
        EquivariantCW.from_json({"boundary": {}})
    with pytest.raises(ChainComplexError):
        EquivariantCW.from_json({"cells": {"0": ["a"], "1": ["e"]}, "boundary": {"1": [[1, 1]]}})


def test_schubert_counts():
    assert grassmann_schubert_counts(4, 2) == [1, 1, 2, 1, 1]
    assert flag_schubert_counts((1, 1, 1)) == [1, 2, 2, 1]


FIBERS = {
    "point": POINT,
    "S1": two_cell_sphere(1),
    "S2": two_cell_sphere(2),
    "S3": two_cell_sphere(3),
    "CP1": complex_projective_space(1),
    "CP2": complex_projective_space(2),
    "G42": EquivariantCW.fixed(even_cell_complex(grassmann_schubert_counts(4, 2))),
}


@pytest.mark.parametrize("fiber", FIBERS)
@pytest.mark.parametrize("m", range(0, 5))
def test_perfect_quotients(fiber, m):
    x = FIBERS[fiber]
    prod = product_complex(antipodal_sphere(m), x)
    q = involution_quotient(prod)
    assert perfectness_check(q).perfect
    base = betti_numbers(real_projective_space(m))
    fib = betti_numbers(x.complex)
    assert betti_numbers(q) == tensor_dims(base, fib, m + x.complex.dim)
    assert euler_characteristic(betti_numbers(q)) == euler_characteristic(base) * euler_characteristic(fib)
    assert sum(q.counts()) * 2 == sum(prod.complex.counts())


@pytest.mark.parametrize("m", [1, 2, 3])
def test_quotient_matches_rings(m):
    cases = [
        (two_cell_sphere(2), sphere_bundle_presentation(2, m)),
        (two_cell_sphere(1), sphere_bundle_presentation(1, m)),
        (complex_projective_space(1), grassmann_presentation(2, 1, m)[0]),
        (complex_projective_space(2), grassmann_presentation(3, 1, m)[0]),
    ]
    for x, alg in cases:
        betti = betti_numbers(dold_complex(m, x))
        assert hilbert_function(alg, len(betti) + 1) == betti + [0, 0]


def test_non_perfect_fiber_still_computes():
    interval = EquivariantCW.fixed(Z2ChainComplex.from_matrices([["a", "b"], ["e"]], {1: [[1], [1]]}))
    q = dold_complex(2, interval)
    assert not perfectness_check(q).perfect
    assert betti_numbers(q) == [1, 1, 1, 0]
