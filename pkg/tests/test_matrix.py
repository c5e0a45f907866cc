from __future__ import annotations

import random

import pytest

from resconj.matrix import (
    I_MINUS_MV,
    LAPLACE_MAX_DIM,
    M_MINUS_VI,
    SymMatrix,
    build_M,
    build_Mt,
    charpoly_in,
    det_bareiss,
    det_laplace,
)
from resconj.poly import Poly, coeff_of, parse, ring, substitute


def texts(M: SymMatrix) -> list[list[str]]:
    return M.to_text()


def test_build_M_4_layout():
    assert texts(build_M(4)) == [["a1", "a3", "0"], ["a0", "a2", "a4"], ["0", "a1", "a3"]]


def test_build_M_2_is_a1():
    assert texts(build_M(2)) == [["a1"]]


def test_build_M_5_band_pattern():
    assert texts(build_M(5)) == [
        ["a1", "a3", "a5", "0"],
        ["a0", "a2", "a4", "0"],
        ["0", "a1", "a3", "a5"],
        ["0", "a0", "a2", "a4"],
    ]


def test_build_M_6_layout():
    assert texts(build_M(6)) == [
        ["a1", "a3", "a5", "0", "0"],
        ["a0", "a2", "a4", "a6", "0"],
        ["0", "a1", "a3", "a5", "0"],
        ["0", "a0", "a2", "a4", "a6"],
        ["0", "0", "a1", "a3", "a5"],
    ]


def test_build_M_7_band_pattern():
    rows = texts(build_M(7))
    assert rows[0] == ["a1", "a3", "a5", "a7", "0", "0"]
    assert rows[5] == ["0", "0", "a0", "a2", "a4", "a6"]


def test_build_Mt_4_layout():
    R = ring(4)
    want = [
        ["a1*t - a0", "a3*t - a2", "-a4", "0"],
        ["a0*t", "a2*t - a1", "a4*t - a3", "0"],
        ["0", "a1*t - a0", "a3*t - a2", "-a4"],
        ["0", "a0*t", "a2*t - a1", "a4*t - a3"],
    ]
    M = build_Mt(4)
    for a in range(4):
        for b in range(4):
            assert M[a + 1, b + 1] == parse(want[a][b], R)


def test_build_Mt_small_entries():
    assert build_Mt(2)[2, 1] == parse("a0*t", 2)
    assert build_Mt(4)[1, 4].is_zero


def test_builders_reject_small_m():
    with pytest.raises(ValueError):
        build_M(1)
    with pytest.raises(ValueError):
        build_Mt(0)


def test_one_based_indexing_guard():
    M = build_M(4)
    assert M[1, 1] == parse("a1", 4)
    with pytest.raises(IndexError):
        M[0, 1]
    with pytest.raises(IndexError):
        M[4, 1]


@pytest.mark.parametrize("m", range(2, 10))
def test_banded_support(m):
    M = build_M(m)
    for a in range(1, m):
        for b in range(1, m):
            if not 0 <= 2 * b - a <= m:
                assert M[a, b].is_zero
            else:
                assert M[a, b] == Poly.var(M.ring, f"a{2 * b - a}")


def test_determinant_of_M4():
    want = parse("-a0*a3^2 - a1^2*a4 + a1*a2*a3", 4)
    assert det_bareiss(build_M(4)) == want
    assert det_laplace(build_M(4)) == want


def test_one_by_one_determinants():
    M = build_M(2)
    assert det_bareiss(M) == parse("a1", 2)
    assert det_laplace(M) == parse("a1", 2)


def test_bareiss_matches_laplace_on_M5():
    assert det_bareiss(build_M(5)) == det_laplace(build_M(5))


@pytest.mark.parametrize("m", range(2, 7))
def test_bareiss_matches_laplace_on_pencils(m):
    for M, v, conv in ((build_M(m), "U", M_MINUS_VI), (build_Mt(m), "T", I_MINUS_MV)):
        assert charpoly_in(M, v, conv) == charpoly_in(M, v, conv, det=det_laplace)


@pytest.mark.parametrize("m", [7, 8])
def test_bareiss_matches_laplace_under_random_specialization(m):
    rng = random.Random(m)
    for _ in range(20):
        point = {f"a{k}": rng.randint(-20, 20) for k in range(m + 1)}
        S = build_Mt(m).specialize(point)
        assert charpoly_in(S, "T", I_MINUS_MV) == charpoly_in(S, "T", I_MINUS_MV, det=det_laplace)


def test_laplace_dimension_guard():
    n = LAPLACE_MAX_DIM + 1
    R = ring(n + 1)
    M = SymMatrix.from_function(n, n, lambda a, b: Poly.const(R, int(a == b)))
    with pytest.raises(ValueError):
        det_laplace(M)
    assert det_bareiss(M) == Poly.const(R, 1)


def test_bareiss_handles_zero_pivot_and_singular():
    R = ring(3)
    x = lambda s: parse(s, R)
    M = SymMatrix(2, 2, ((x("0"), x("a1")), (x("a2"), x("a3"))))
    assert det_bareiss(M) == x("-a1*a2")
    Z = SymMatrix(2, 2, ((x("a1"), x("a2")), (x("2*a1"), x("2*a2"))))
    assert det_bareiss(Z).is_zero


def test_specialization_commutes_with_determinant():
    rng = random.Random(5)
    M = build_Mt(5)
    full = charpoly_in(M, "T", I_MINUS_MV)
    for _ in range(10):
        point = {f"a{k}": rng.randint(-9, 9) for k in range(6)}
        assert substitute(full, point) == charpoly_in(M.specialize(point), "T", I_MINUS_MV)


def test_charpoly_shape_for_M4():
    ch = charpoly_in(build_M(4), "U", M_MINUS_VI)
    R = ring(4)
    U = Poly.var(R, "U")
    d0 = parse("-a0*a3^2 - a1^2*a4 + a1*a2*a3", R)
    d1 = parse("a0*a3 - a1*a2 - a1*a3 + a1*a4 - a2*a3", R)
    d2 = parse("a1 + a2 + a3", R)
    assert ch == d0 + d1 * U + d2 * U**2 - U**3


def test_charpoly_of_Mt_at_T_zero_is_one():
    for m in (2, 3, 4, 5):
        ch = charpoly_in(build_Mt(m), "T", I_MINUS_MV)
        assert coeff_of(ch, "T", 0) == Poly.const(ch.ring, 1)


def test_charpoly_1x1():
    assert charpoly_in(build_M(2), "U") == parse("a1 - U", 2)


def test_charpoly_rejects_occurring_variable():
    with pytest.raises(ValueError):
        charpoly_in(build_Mt(3), "t", I_MINUS_MV)
    with pytest.raises(ValueError):
        charpoly_in(build_M(3), "U", "sideways")


@pytest.mark.parametrize("m", range(2, 8))
def test_charpoly_degree_and_leading_coefficient(m):
    ch = charpoly_in(build_M(m), "U")
    assert ch.degree_in("U") == m - 1
    assert coeff_of(ch, "U", m - 1) == Poly.const(ch.ring, (-1) ** (m - 1))
