"""Homogeneous ideal membership by linear algebra in one degree.

For homogeneous f and generators g_l, f lies in <g_0, ..., g_i> iff f is a
linear combination of the products mu * g_l with mu running over monomials
of degree deg f - deg g_l.  The slice matrix has one row per monomial of
degree deg f and one column per such product; membership is solvability
of slice * x = f.

The code here works on plain exponent tuples and does its own elimination;
it shares nothing with the Groebner engine, so the two can check each other.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

import gmpy2

from .budget import Budget, Exhausted
from .certify import MembershipCertificate
from .modular import crt_pair, random_primes, rational_reconstruction
from .poly import QQ, Poly, PolyRing, is_homogeneous

MPQ = gmpy2.mpq
MAX_ENTRIES = 5_000_000
MAX_PRIMES = 12


class SliceTooLarge(Exception):
    """The degree slice would exceed the entry guard."""


class NotHomogeneous(ValueError):
    pass


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of length n and total degree d, in descending grevlex order.

    Grevlex rows keep the echelon fill-in several times smaller than lex.
    """
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=lambda e: tuple(-v for v in reversed(e)), reverse=True)
    return out


def _a_terms(f: Poly) -> dict[tuple[int, ...], Fraction]:
    R = f.ring
    lo = R.n_aux
    out = {}
    for k, c in f.terms_dict.items():
        e = R.exponents(k)
        if any(e[:lo]):
            raise NotHomogeneous("auxiliary variables are not allowed in a slice")
        out[e[lo:]] = Fraction(c)
    return out


def _degree(f: Poly) -> int:
    d = is_homogeneous(f)
    if not isinstance(d, int):
        raise NotHomogeneous(f"{f} is not homogeneous in the a-variables")
    return d


@dataclass
class DegreeSlice:
    degree: int
    nvars: int
    rows: list[tuple[int, ...]]
    blocks: list[tuple[int, list[tuple[int, ...]]]]  # (generator index, multipliers)
    columns: list[dict[int, Fraction]] = field(repr=False)
    target: dict[int, Fraction] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    @property
    def nonzeros(self) -> int:
        return sum(len(c) for c in self.columns)

    def expected_rows(self) -> int:
        return comb(self.degree + self.nvars - 1, self.nvars - 1)

    def expected_block(self, gen_degree: int) -> int:
        return comb(self.degree - gen_degree + self.nvars - 1, self.nvars - 1)

    def column_owner(self, c: int) -> tuple[int, tuple[int, ...]]:
        for l, mus in self.blocks:
            if c < len(mus):
                return l, mus[c]
            c -= len(mus)
        raise IndexError(c)


def slice_size(degree: int, nvars: int, gen_degrees: Sequence[int], gen_terms: Sequence[int]) -> tuple[int, int, int]:
    """(rows, columns, stored nonzeros) without building anything."""
    rows = comb(degree + nvars - 1, nvars - 1)
    cols = nnz = 0
    for dg, t in zip(gen_degrees, gen_terms):
        if dg <= degree:
            b = comb(degree - dg + nvars - 1, nvars - 1)
            cols += b
            nnz += b * t
    return rows, cols, nnz


def build_slice(f: Poly, gens: Sequence[Poly], max_entries: int = MAX_ENTRIES) -> DegreeSlice:
    d = _degree(f) if not f.is_zero else 0
    gdeg = [_degree(g) for g in gens]
    nvars = f.ring.m + 1
    _, _, nnz = slice_size(d, nvars, gdeg, [len(g) for g in gens])
    if nnz > max_entries:
        raise SliceTooLarge(f"degree-{d} slice needs {nnz} entries (guard {max_entries})")
    rows = monomials(nvars, d)
    index = {e: r for r, e in enumerate(rows)}
    blocks, columns = [], []
    for l, (g, dg) in enumerate(zip(gens, gdeg)):
        if dg > d or g.is_zero:
            continue
        gt = list(_a_terms(g).items())
        mus = monomials(nvars, d - dg)
        blocks.append((l, mus))
        for mu in mus:
            columns.append({index[tuple(a + b for a, b in zip(mu, e))]: c for e, c in gt})
    target = {index[e]: c for e, c in _a_terms(f).items()}
    return DegreeSlice(d, nvars, rows, blocks, columns, target)


# ---------------------------------------------------------------------------
# column echelon form over GF(p) or QQ


class _Echelon:
    """Columns reduced against earlier ones; pivots keyed by their lowest row.

    Pivot k came from original column src[k] and equals
    scale[k] * (column - sum_j r * pivot_j) over the recorded (j, r) steps.
    """

    def __init__(self, p: int | None):
        self.p = p
        self.lead: dict[int, int] = {}
        self.vecs: list[dict[int, object]] = []
        self.src: list[int] = []
        self.steps: list[list[tuple[int, object]]] = []
        self.scale: list[object] = []

    def _conv(self, c):
        if self.p:
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{self.p} divides a denominator")
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        return MPQ(c.numerator, c.denominator) if isinstance(c, Fraction) else MPQ(c)

    def reduce(self, v: dict, record: list | None) -> dict:
        """Eliminate pivot rows from ``v`` (consumed) until its lowest row is free."""
        p = self.p
        heap = list(v)
        heapq.heapify(heap)
        lead, vecs = self.lead, self.vecs
        while heap:
            r = heapq.heappop(heap)
            c = v.get(r)
            if c is None:
                continue
            k = lead.get(r)
            if k is None:
                return v
            if record is not None:
                record.append((k, c))
            for rr, pc in vecs[k].items():
                x = v.get(rr)
                if x is None:
                    v[rr] = (-c * pc) % p if p else -c * pc
                    heapq.heappush(heap, rr)
                else:
                    x -= c * pc
                    if p:
                        x %= p
                    if x:
                        v[rr] = x
                    else:
                        del v[rr]
        return v

    def add_column(self, idx: int, col: dict) -> bool:
        v = {r: self._conv(c) for r, c in col.items()}
        v = {r: c for r, c in v.items() if c}
        steps: list = []
        v = self.reduce(v, steps)
        if not v:
            return False
        r0 = min(v)
        inv = pow(v[r0], -1, self.p) if self.p else 1 / v[r0]
        v = {r: (c * inv) % self.p if self.p else c * inv for r, c in v.items()}
        self.lead[r0] = len(self.vecs)
        self.vecs.append(v)
        self.src.append(idx)
        self.steps.append(steps)
        self.scale.append(inv)
        return True

    @property
    def rank(self) -> int:
        return len(self.vecs)

    def solve(self, target: dict) -> dict[int, object] | None:
        """x with sum x_c column_c = target, zero off the pivot columns; None if unsolvable."""
        v = {r: self._conv(c) for r, c in target.items()}
        v = {r: c for r, c in v.items() if c}
        y: list = []
        rest = self.reduce(v, y)
        if rest:
            return None
        p = self.p
        coef: dict[int, object] = {}
        for k, c in y:
            coef[k] = coef.get(k, 0) + c
        x: dict[int, object] = {}
        for k in range(len(self.vecs) - 1, -1, -1):
            yk = coef.get(k)
            if not yk or (p and yk % p == 0):
                continue
            w = yk * self.scale[k]
            if p:
                w %= p
            x[self.src[k]] = w
            for j, r in self.steps[k]:
                z = coef.get(j, 0) - w * r
                coef[j] = z % p if p else z
        return x


def _eliminate(S: DegreeSlice, p: int | None, budget: Budget | None) -> _Echelon:
    ech = _Echelon(p)
    # columns with the smallest leading monomial first: far less fill-in
    order = sorted(range(len(S.columns)), key=lambda c: (-min(S.columns[c]), c))
    for n, c in enumerate(order):
        if budget and n % 256 == 0:
            budget.check()
        ech.add_column(c, S.columns[c])
    return ech


def rank_mod_p(S: DegreeSlice, p: int) -> int:
    return _eliminate(S, p, None).rank


# ---------------------------------------------------------------------------
# membership


@dataclass
class SliceVerdict:
    member: bool | None
    certified: bool
    certificate: MembershipCertificate | None = None
    shape: tuple[int, int] = (0, 0)
    rank: int | None = None
    primes: list[int] = field(default_factory=list)
    route: str = ""
    note: str = ""
    engine: str = "macaulay"


def _residual_ok(S: DegreeSlice, x: dict[int, Fraction]) -> bool:
    acc: dict[int, Fraction] = {}
    for c, v in x.items():
        for r, a in S.columns[c].items():
            acc[r] = acc.get(r, 0) + v * a
    acc = {r: v for r, v in acc.items() if v}
    return acc == {r: v for r, v in S.target.items() if v}


def _cofactors(S: DegreeSlice, x: dict[int, Fraction], gens: Sequence[Poly], R: PolyRing) -> list[Poly]:
    terms: list[dict] = [{} for _ in gens]
    pad = (0,) * R.n_aux
    for c, v in x.items():
        l, mu = S.column_owner(c)
        k = R.key(pad + mu)
        terms[l][k] = terms[l].get(k, 0) + v
    return [Poly(R, QQ, t) for t in terms]


def _modular_solution(S: DegreeSlice, primes: list[int], budget: Budget | None):
    """Combine mod-p solutions until the reconstruction satisfies the slice exactly."""
    best_rank = -1
    residues: dict[int, int] = {}
    support: tuple | None = None
    modulus = 1
    previous = None
    for p in primes:
        try:
            ech = _eliminate(S, p, budget)
        except ZeroDivisionError:
            continue
        x = ech.solve(S.target)
        if x is None:
            return "unsolvable", p, ech.rank
        key = tuple(ech.src)
        if ech.rank < best_rank:
            continue
        if ech.rank > best_rank or key != support:
            best_rank, support, residues, modulus = ech.rank, key, {}, 1
        for c in support:
            r = int(x.get(c, 0))
            residues[c] = r if modulus == 1 else crt_pair(residues[c], modulus, r, p)[0]
        modulus *= p
        cand = {}
        for c, r in residues.items():
            q = rational_reconstruction(r, modulus)
            if q is None:
                cand = None
                break
            if q:
                cand[c] = q
        if cand is not None and cand != previous and _residual_ok(S, cand):
            return "solved", cand, best_rank
        previous = cand
    return "undecided", None, best_rank


def homogeneous_member(
    f: Poly,
    gens: Sequence[Poly],
    certificate: bool = True,
    primes: Sequence[int] | None = None,
    max_entries: int = MAX_ENTRIES,
    budget: Budget | None = None,
) -> SliceVerdict:
    """Decide f in <gens> for homogeneous input from the degree-deg(f) slice alone.

    Positives come from a multi-prime solve checked by exact residual; a
    negative is only returned after exact rational elimination.
    """
    R = f.ring
    S = build_slice(f, gens, max_entries)
    shape = S.shape
    if not S.target:
        return SliceVerdict(True, True, _certificate(f, gens, S, {}, R) if certificate else None, shape, 0, route="zero")
    pool = list(primes) if primes else random_primes(MAX_PRIMES)
    try:
        status, data, rank = _modular_solution(S, pool, budget)
        used = pool if status != "unsolvable" else pool[: pool.index(data) + 1]
        if status == "solved":
            cert = _certificate(f, gens, S, data, R) if certificate else None
            return SliceVerdict(True, True, cert, shape, rank, used, route="modular+reconstruction")
        ech = _eliminate(S, None, budget)
        x = ech.solve(S.target)
    except Exhausted as exc:
        return SliceVerdict(None, False, None, shape, note=str(exc))
    if x is None:
        return SliceVerdict(False, True, None, shape, ech.rank, used, route="exact elimination")
    xq = {c: Fraction(int(v.numerator), int(v.denominator)) for c, v in x.items()}
    if not _residual_ok(S, xq):
        raise AssertionError("exact slice solution fails its residual check")
    cert = _certificate(f, gens, S, xq, R) if certificate else None
    return SliceVerdict(True, True, cert, shape, ech.rank, used, route="exact elimination")


def _certificate(f: Poly, gens: Sequence[Poly], S: DegreeSlice, x: dict, R: PolyRing) -> MembershipCertificate:
    cof = _cofactors(S, x, gens, R)
    cert = MembershipCertificate(f, 1, [g.to_domain(QQ) for g in gens], cof, engine="macaulay")
    if not cert.verify():
        raise AssertionError("macaulay certificate does not verify")
    return cert


@dataclass
class SliceKappa:
    status: str  # "kappa" | "exhausted"
    kappa: int | None = None
    certificate: MembershipCertificate | None = None
    refuted: list[int] = field(default_factory=list)
    engine: str = "macaulay"
    note: str = ""


def minimal_kappa_homogeneous(
    f: Poly,
    gens: Sequence[Poly],
    kappa_max: int = 8,
    certificate: bool = True,
    max_entries: int = MAX_ENTRIES,
    budget: Budget | None = None,
) -> SliceKappa:
    """Smallest kappa with f^kappa in the slice span; every smaller kappa is refuted exactly."""
    if kappa_max < 1:
        raise ValueError("kappa_max must be >= 1")
    refuted: list[int] = []
    for kappa in range(1, kappa_max + 1):
        try:
            v = homogeneous_member(f**kappa, gens, certificate, max_entries=max_entries, budget=budget)
        except SliceTooLarge as exc:
            return SliceKappa("exhausted", refuted=refuted, note=str(exc))
        if v.member is None:
            return SliceKappa("exhausted", refuted=refuted, note=v.note)
        if v.member:
            cert = v.certificate
            if cert is not None:
                cert.target, cert.kappa = f, kappa
                cert.verify()
            return SliceKappa("kappa", kappa, cert, refuted)
        refuted.append(kappa)
    return SliceKappa("exhausted", refuted=refuted, note=f"no kappa <= {kappa_max}")
