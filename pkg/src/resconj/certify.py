"""Membership certificates and their stand-alone verification.

The verifier re-parses the canonical polynomial text with its own tiny
tokenizer and multiplies with plain ``{exponent tuple: Fraction}`` dicts.
It shares no code with ``poly``, ``groebner`` or ``macaulay`` on purpose:
a bug in the engines cannot also hide in the check.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .poly import LEX, Poly, format_poly, is_homogeneous

SCHEMA = 1

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_FACTOR = re.compile(r"^([A-Za-z]\d*)(?:\^(\d+))?$")


def _plain_parse(text: str) -> dict[tuple[tuple[str, int], ...], Fraction]:
    text = text.strip()
    out: dict[tuple[tuple[str, int], ...], Fraction] = {}
    if text == "0":
        return out
    pos = 0
    while pos < len(text):
        mo = _TERM.match(text, pos)
        if not mo or mo.end() == pos:
            raise ValueError(f"cannot read term at {pos} in {text!r}")
        pos = mo.end()
        sign = -1 if mo.group(1) == "-" else 1
        coeff = Fraction(sign)
        exps: dict[str, int] = {}
        for piece in mo.group(2).strip().split("*"):
            piece = piece.strip()
            if re.fullmatch(r"\d+(/\d+)?", piece):
                coeff *= Fraction(piece)
                continue
            fm = _FACTOR.match(piece)
            if not fm:
                raise ValueError(f"bad factor {piece!r} in {text!r}")
            exps[fm.group(1)] = exps.get(fm.group(1), 0) + int(fm.group(2) or 1)
        key = tuple(sorted(exps.items()))
        out[key] = out.get(key, 0) + coeff
    return {k: c for k, c in out.items() if c}


def _plain_mul(f, g):
    out: dict = {}
    for k1, c1 in f.items():
        d1 = dict(k1)
        for k2, c2 in g.items():
            d = dict(d1)
            for v, e in k2:
                d[v] = d.get(v, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def _plain_add(f, g):
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _plain_pow(f, n: int):
    out = {(): Fraction(1)}
    for _ in range(n):
        out = _plain_mul(out, f)
    return out


def verify_identity(target: str, kappa: int, generators: list[str], cofactors: list[str]) -> bool:
    """True iff target^kappa == sum cofactor_l * generator_l, checked from the text alone."""
    if len(generators) != len(cofactors):
        return False
    lhs = _plain_pow(_plain_parse(target), kappa)
    rhs: dict = {}
    for g, c in zip(generators, cofactors):
        rhs = _plain_add(rhs, _plain_mul(_plain_parse(c), _plain_parse(g)))
    return lhs == rhs


@dataclass
class MembershipCertificate:
    """Cofactors g_l with target^kappa = sum g_l * generators[l]."""

    target: Poly
    kappa: int
    generators: list[Poly]
    cofactors: list[Poly]
    engine: str = ""
    m: int | None = None
    i: int | None = None
    j: int | None = None
    orientation: str | None = None
    verified: bool = field(default=False)

    def texts(self) -> tuple[str, list[str], list[str]]:
        return (
            format_poly(self.target, LEX),
            [format_poly(g, LEX) for g in self.generators],
            [format_poly(c, LEX) for c in self.cofactors],
        )

    def verify(self) -> bool:
        target, gens, cofs = self.texts()
        self.verified = verify_identity(target, self.kappa, gens, cofs)
        return self.verified

    def homogeneity_ok(self) -> bool:
        """With homogeneous inputs each nonzero cofactor has the forced degree."""
        dt = is_homogeneous(self.target)
        if not isinstance(dt, int):
            return True
        for g, c in zip(self.generators, self.cofactors):
            dg = is_homogeneous(g)
            if c.is_zero or not isinstance(dg, int):
                continue
            if is_homogeneous(c) != self.kappa * dt - dg:
                return False
        return True

    def to_json(self) -> dict:
        target, gens, cofs = self.texts()
        return {
            "schema": SCHEMA,
            "m": self.m,
            "i": self.i,
            "j": self.j,
            "kappa": self.kappa,
            "target": target,
            "generators": gens,
            "cofactors": cofs,
            "orientation": self.orientation,
            "engine": self.engine,
            "verified": self.verified,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


def verify_certificate_file(path: str | Path) -> tuple[bool, str]:
    """Check a certificate JSON by pure arithmetic on its text fields."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        ok = verify_identity(data["target"], int(data["kappa"]), list(data["generators"]), list(data["cofactors"]))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return False, f"unreadable certificate: {exc}"
    if not ok:
        return False, "identity target^kappa = sum cofactor*generator does not hold"
    return True, "identity holds"
