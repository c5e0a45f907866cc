"""Published constants: the m=4 cofactors C1, C2 and the table of minimal kappa."""

from __future__ import annotations

from .poly import Poly, parse, ring

# Transcribed term by term, in the printed order.
C1_TEXT = (
    "2*a0*a1*a2*a4 + a0*a1*a3*a4 - a0*a1*a4^2 + a0*a2^2*a3 + 2*a0*a2*a3^2 - 3*a0*a2*a3*a4 + a0*a3^3"
    " - 2*a0*a3^2*a4 + a0*a3*a4^2 - a1^2*a2*a4 - a1^2*a3*a4 - a1*a2^3 - a1*a2^2*a3 - a1*a2*a3^2 + a1*a2*a3*a4"
    " - a1*a3^3 + a1*a3^2*a4 + a2^3*a3 - a2*a3^3"
)
C2_TEXT = "a0^2*a4 - 2*a0*a1*a4 - 3*a0*a2*a4 + a0*a4^2 + a1^2*a4 + a1*a2^2 + a1*a2*a4 + a2^3"

# Term counts claimed alongside the identity (C1 as stated, C2 as printed).
C1_CLAIMED_TERMS = 20
C2_CLAIMED_TERMS = 8
C1_TERMS_AFTER_A3_ZERO = 4

# (m, i) -> minimal kappa for interior j; None marks a cell published as open.
KAPPA_TABLE: dict[tuple[int, int], int | None] = {
    (4, 1): 2,
    (5, 1): 2,
    (5, 2): 3,
    (6, 1): 2,
    (6, 2): 4,
    (6, 3): 6,
    (7, 1): 2,
    (7, 2): 4,
    (7, 3): None,
    (7, 4): None,
}
# published lower bounds for the open cells
KAPPA_LOWER_BOUNDS: dict[tuple[int, int], int] = {(7, 3): 6}

# rows the acceptance runs must certify; the rest are best effort
GATING_ROWS = ((4, 1), (5, 1), (5, 2), (6, 1))
STRETCH_ROWS = ((6, 2), (6, 3), (7, 1), (7, 2))
OPEN_ROWS = ((7, 3), (7, 4))


def c1() -> Poly:
    return parse(C1_TEXT, ring(4))


def c2() -> Poly:
    return parse(C2_TEXT, ring(4))


def published_kappa(m: int, i: int) -> int | None:
    """Published interior kappa; i = m-2 is 1 for every m, other cells absent from the table give None."""
    if i == m - 2 and m >= 3:
        return 1
    return KAPPA_TABLE.get((m, i))
