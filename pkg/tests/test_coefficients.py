from __future__ import annotations

import pytest

from resconj.coefficients import (
    LITERAL,
    REFLECTED,
    AnchorError,
    anchor_failures,
    check_symmetry,
    compute_D,
    compute_H,
    family,
    validate,
)
from resconj.matrix import I_MINUS_MV, build_Mt, charpoly_in
from resconj.poly import Poly, a_var, is_homogeneous, parse, ring

# det(I - Mt(4)*T) expanded independently (sympy, Berkowitz), read with the
# orientation H_ij = coefficient of t^(4-i-j) T^(4-i).
H4_FROZEN = {
    (0, 0): "-1*a0*a3^2*a4 - 1*a1^2*a4^2 + 1*a1*a2*a3*a4",
    (0, 1): "1*a0*a3^3 + 1*a1^2*a3*a4 - 1*a1*a2*a3^2",
    (0, 2): "-1*a0*a2*a3^2 - 1*a1^2*a2*a4 + 1*a1*a2^2*a3",
    (0, 3): "1*a0*a1*a3^2 + 1*a1^3*a4 - 1*a1^2*a2*a3",
    (0, 4): "-1*a0^2*a3^2 - 1*a0*a1^2*a4 + 1*a0*a1*a2*a3",
    (1, 0): "1*a0*a3^2 + 1*a0*a3*a4 + 1*a1^2*a4 - 1*a1*a2*a3 - 1*a1*a2*a4 - 1*a1*a3*a4 + 1*a1*a4^2 - 1*a2*a3*a4",
    (1, 1): "-1*a0*a1*a4 - 1*a0*a2*a3 - 1*a0*a3^2 + 1*a0*a3*a4 + 1*a1^2*a4 + 1*a1*a2^2 + 1*a1*a2*a3 + 1*a1*a3^2 - 1*a1*a3*a4 + 1*a2*a3^2",
    (1, 2): "1*a0*a1*a3 - 1*a0*a1*a4 - 1*a0*a3^2 + 1*a0*a3*a4 - 1*a1^2*a2 - 1*a1^2*a3 + 1*a1^2*a4 - 1*a1*a2*a3 + 1*a1*a2*a4 - 1*a2^2*a3",
    (1, 3): "-1*a0^2*a3 + 1*a0*a1*a2 + 1*a0*a1*a3 - 1*a0*a1*a4 + 1*a0*a2*a3 - 1*a0*a3^2 - 1*a1^2*a4 + 1*a1*a2*a3",
    (2, 0): "-1*a0*a3 + 1*a1*a2 + 1*a1*a3 + 1*a2*a3 + 1*a2*a4 + 1*a3*a4",
    (2, 1): "-1*a0*a3 - 1*a1^2 - 1*a1*a2 - 1*a1*a3 - 1*a1*a4 - 1*a2^2 - 1*a2*a3 - 1*a3^2",
    (2, 2): "1*a0*a1 + 1*a0*a2 + 1*a1*a2 + 1*a1*a3 - 1*a1*a4 + 1*a2*a3",
    (3, 0): "-1*a1 - 1*a2 - 1*a3 - 1*a4",
    (3, 1): "1*a0 + 1*a1 + 1*a2 + 1*a3",
    (4, 0): "1",
}


def a_sum(R, lo, hi):
    acc = Poly.zero(R)
    for k in range(lo, hi + 1):
        acc = acc + a_var(R, k)
    return acc


def test_first_determinants_m4():
    D = compute_D(4)
    assert D[0] == parse("-a0*a3^2 - a1^2*a4 + a1*a2*a3", 4)
    assert D[1] == parse("a0*a3 - a1*a2 - a1*a3 + a1*a4 - a2*a3", 4)
    assert D[2] == parse("a1 + a2 + a3", 4)
    assert D[3] == parse("-1", 4)


def test_m2_family():
    D = compute_D(2)
    assert D == [parse("a1", 2), parse("-1", 2)]


@pytest.mark.parametrize("m", [4, 5, 6])
def test_trace_coefficient(m):
    R = ring(m)
    assert compute_D(m)[m - 2] == (-1) ** m * a_sum(R, 1, m - 1)


@pytest.mark.parametrize("m", [4, 5, 6])
def test_H_anchors(m):
    fam = family(m)
    R = fam.ring
    assert fam.H[m, 0] == Poly.const(R, 1)
    assert fam.H[m - 1, 0] == -a_sum(R, 1, m)
    assert fam.H[m - 1, 1] == a_sum(R, 0, m - 1)


def test_full_H_table_m4_against_independent_expansion():
    fam = family(4)
    assert len(fam.H) == 15
    for key, text in H4_FROZEN.items():
        assert fam.H[key] == parse(text, 4), key


def test_orientation_is_reflected_and_literal_fails_anchors():
    for m in range(2, 7):
        assert family(m).orientation == REFLECTED
    with pytest.raises(AnchorError):
        compute_H(4, orientation=LITERAL)


def test_anchor_failures_are_named():
    H, _, _ = compute_H(4, orientation=REFLECTED)
    H = dict(H)
    H[3, 0] = H[3, 1]
    assert anchor_failures(H, 4) == ["H_{3,0}"]


@pytest.mark.parametrize("m", range(2, 8))
def test_homogeneity_and_counts(m):
    fam = family(m)
    assert validate(fam) == []
    for i, d in enumerate(fam.D):
        assert is_homogeneous(d) == m - 1 - i
    for (i, j), h in fam.H.items():
        assert is_homogeneous(h) == m - i
    assert len(fam.H) == (m + 1) * (m + 2) // 2
    assert [len(row) for row in fam.triangle()] == list(range(1, m + 2))


@pytest.mark.parametrize("m", range(2, 7))
def test_reconstruction(m):
    fam = family(m)
    R = fam.ring
    U, t, T = (Poly.var(R, v) for v in ("U", "t", "T"))
    acc = Poly.zero(R)
    for i, d in enumerate(fam.D):
        acc = acc + d * U**i
    assert acc == fam.charpoly_M
    acc = Poly.zero(R)
    for (i, j), h in fam.H.items():
        acc = acc + h * t ** fam.t_exponent(i, j) * T ** (m - i)
    assert acc == charpoly_in(build_Mt(m), "T", I_MINUS_MV)


def test_symmetry_examples():
    assert check_symmetry(4, 3, 0) == -1
    assert check_symmetry(4, 4, 0) == 1
    for i in range(5):
        if (4 - i) % 2 == 0:
            assert check_symmetry(4, i, (4 - i) // 2) in (1, -1)


@pytest.mark.parametrize("m", range(2, 7))
def test_symmetry_sign_exists_everywhere(m):
    fam = family(m)
    for i, j in fam.H:
        assert check_symmetry(m, i, j, fam) in (1, -1)


def test_symmetry_rejects_cells_outside_triangle():
    with pytest.raises(ValueError):
        check_symmetry(4, 2, 3)


def test_generators_slice():
    fam = family(5)
    assert fam.generators(2) == list(fam.D[:3])
    with pytest.raises(ValueError):
        fam.generators(5)
