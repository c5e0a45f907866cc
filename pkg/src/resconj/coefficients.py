"""The coefficient families D(m, i) and H_ij(m).

D(m, i) is the coefficient of U^i in det(M(m) - U I).  H_ij(m) is read off
det(I - Mt(m) T) at T^(m-i); the t-exponent is either j ("literal") or
m - i - j ("reflected").  The orientation is chosen by the printed anchors
H_{m0} = 1, H_{m-1,0} = -(a1 + ... + am), H_{m-1,1} = a0 + ... + a_{m-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from .matrix import I_MINUS_MV, M_MINUS_VI, build_M, build_Mt, charpoly_in
from .poly import Poly, PolyRing, a_involution, a_var, coeff_of, is_homogeneous, ring, substitute

LITERAL = "literal"
REFLECTED = "reflected"


class AnchorError(AssertionError):
    """A printed anchor value does not hold for the computed family."""


@dataclass(frozen=True)
class DHFamily:
    m: int
    D: tuple[Poly, ...]
    H: Mapping[tuple[int, int], Poly]
    orientation: str
    charpoly_M: Poly = field(repr=False)
    charpoly_Mt: Poly = field(repr=False)

    @property
    def ring(self) -> PolyRing:
        return self.D[0].ring

    def generators(self, i: int) -> list[Poly]:
        """D(m,0), ..., D(m,i)."""
        if not 0 <= i <= self.m - 1:
            raise ValueError(f"i must lie in [0, {self.m - 1}], got {i}")
        return list(self.D[: i + 1])

    def triangle(self) -> list[list[tuple[int, int]]]:
        """Rows of the (i, j) triangle, apex H_{m0} first."""
        return [[(i, j) for j in range(self.m - i + 1)] for i in range(self.m, -1, -1)]

    def t_exponent(self, i: int, j: int) -> int:
        return j if self.orientation == LITERAL else self.m - i - j


def _a_sum(R: PolyRing, lo: int, hi: int) -> Poly:
    acc = Poly.zero(R)
    for k in range(lo, hi + 1):
        acc = acc + a_var(R, k)
    return acc


def compute_D(m: int, R: PolyRing | None = None) -> list[Poly]:
    R = R or ring(m)
    ch = charpoly_in(build_M(m, R), "U", M_MINUS_VI)
    return [coeff_of(ch, "U", i) for i in range(m)]


def _raw_H(m: int, R: PolyRing) -> tuple[Poly, dict[tuple[int, int], Poly]]:
    ch = charpoly_in(build_Mt(m, R), "T", I_MINUS_MV)
    raw = {}
    for i in range(m + 1):
        in_T = coeff_of(ch, "T", m - i)
        for e in range(m - i + 1):
            raw[i, e] = coeff_of(in_T, "t", e)
    return ch, raw


def _orient(raw: dict[tuple[int, int], Poly], m: int, orientation: str) -> dict[tuple[int, int], Poly]:
    if orientation == LITERAL:
        return dict(raw)
    return {(i, j): raw[i, m - i - j] for (i, j) in raw}


def anchor_failures(H: Mapping[tuple[int, int], Poly], m: int) -> list[str]:
    R = H[m, 0].ring
    expected = {
        (m, 0): Poly.const(R, 1),
        (m - 1, 0): -_a_sum(R, 1, m),
        (m - 1, 1): _a_sum(R, 0, m - 1),
    }
    return [f"H_{{{i},{j}}}" for (i, j), want in expected.items() if H[i, j] != want]


def compute_H(m: int, R: PolyRing | None = None, orientation: str | None = None) -> tuple[dict[tuple[int, int], Poly], str, Poly]:
    """All H_ij(m) with the orientation that satisfies the anchors.

    Passing ``orientation`` forces a reading; anchors are still enforced.
    """
    R = R or ring(m)
    ch, raw = _raw_H(m, R)
    candidates = [orientation] if orientation else [LITERAL, REFLECTED]
    report = {}
    for o in candidates:
        H = _orient(raw, m, o)
        bad = anchor_failures(H, m)
        if not bad:
            return H, o, ch
        report[o] = bad
    raise AnchorError(f"m={m}: no orientation satisfies the anchors: {report}")


@lru_cache(maxsize=None)
def family(m: int) -> DHFamily:
    """Validated D/H family for ``m`` in the default grevlex ring."""
    R = ring(m)
    D = compute_D(m, R)
    H, orientation, ch_mt = compute_H(m, R)
    ch_m = charpoly_in(build_M(m, R), "U", M_MINUS_VI)
    fam = DHFamily(m, tuple(D), MappingProxyType(H), orientation, ch_m, ch_mt)
    bad = validate(fam)
    if bad:
        raise AnchorError(f"m={m}: " + "; ".join(bad))
    return fam


def validate(fam: DHFamily) -> list[str]:
    """Degree and anchor invariants; returns the list of violations."""
    m, R = fam.m, fam.ring
    bad = []
    for i, d in enumerate(fam.D):
        if is_homogeneous(d) != m - 1 - i:
            bad.append(f"D({m},{i}) not homogeneous of degree {m - 1 - i}")
    if fam.D[m - 1] != Poly.const(R, (-1) ** (m - 1)):
        bad.append(f"D({m},{m - 1}) != (-1)^{m - 1}")
    for (i, j), h in fam.H.items():
        if is_homogeneous(h) != m - i:
            bad.append(f"H_{{{i},{j}}} not homogeneous of degree {m - i}")
    bad.extend(f"anchor {a} fails" for a in anchor_failures(fam.H, m))
    return bad


def check_symmetry(m: int, i: int, j: int, fam: DHFamily | None = None) -> int | None:
    """Sign eps with H_ij(a_k -> a_{m-k}) = eps * H_{i, m-i-j}, or None if neither sign works."""
    fam = fam or family(m)
    if not (0 <= i <= m and 0 <= j <= m - i):
        raise ValueError(f"({i}, {j}) is outside the triangle for m={m}")
    image = substitute(fam.H[i, j], a_involution(fam.ring))
    partner = fam.H[i, m - i - j]
    if image == partner:
        return 1
    if image == -partner:
        return -1
    return None
