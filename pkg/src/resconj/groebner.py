"""Buchberger completion with optional cofactor tracking.

Working polynomials are plain ``{packed monomial: coefficient}`` dicts kept
monic; rational coefficients are ``gmpy2.mpq``, prime-field coefficients
are ints in ``[0, p)``.  Pair selection is by sugar (equal to the degree for
homogeneous input), with Gebauer-Moeller pruning, which covers Buchberger's
coprime and chain criteria.

For homogeneous ideals completion can stop at a degree bound; the result is
a truncated basis that decides membership for homogeneous polynomials up to
that degree, and it can be extended later without redoing work.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2

from .budget import Budget, Exhausted
from .certify import MembershipCertificate
from .modular import random_primes
from .poly import GREVLEX, MAX_DEGREE, QQ, Domain, ExponentOverflow, GF, MonomialOrder, Poly, PolyRing, ZZ, is_homogeneous, ring

MPQ = gmpy2.mpq


# ---------------------------------------------------------------------------
# coefficient arithmetic


class _Arith:
    def __init__(self, domain: Domain):
        if domain.kind == "ZZ":
            domain = QQ
        self.domain = domain
        self.p = domain.p

    def inp(self, c):
        if self.p:
            return self.domain.convert(c)
        if isinstance(c, Fraction):
            return MPQ(c.numerator, c.denominator)
        return MPQ(c)

    def out(self, c):
        if self.p:
            return int(c)
        return Fraction(int(c.numerator), int(c.denominator))

    def inv(self, c):
        if self.p:
            return pow(c, -1, self.p)
        return 1 / c


def _scale(f: dict, c, p) -> dict:
    if p:
        return {k: v * c % p for k, v in f.items()}
    return {k: v * c for k, v in f.items()}


def _mul(f: dict, g: dict, p) -> dict:
    out: dict = {}
    get = out.get
    for k1, c1 in f.items():
        for k2, c2 in g.items():
            k = k1 + k2
            out[k] = get(k, 0) + c1 * c2
    if p:
        return {k: c % p for k, c in out.items() if c % p}
    return {k: c for k, c in out.items() if c}


def _add_into(acc: dict, f: dict, p, sign: int = 1) -> None:
    for k, c in f.items():
        v = acc.get(k, 0) + (c if sign > 0 else -c)
        if p:
            v %= p
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


# ---------------------------------------------------------------------------
# reduction


class _Elem:
    __slots__ = ("lm", "fld", "terms", "tail", "sugar", "row")

    def __init__(self, R: PolyRing, terms: dict, sugar: int, row: dict | None):
        self.lm = max(terms)
        self.fld = R.field(self.lm)
        self.terms = terms
        self.tail = [(k - self.lm, c) for k, c in terms.items() if k != self.lm]
        self.sugar = sugar
        self.row = row  # generator index -> cofactor dict, or None


class _Reducer:
    def __init__(self, R: PolyRing, p):
        self.R = R
        self.p = p
        self.elems: list[_Elem] = []
        self._memo: dict[int, int] = {}
        self.budget: Budget | None = None  # polled during long reductions

    def add(self, e: _Elem) -> int:
        self.elems.append(e)
        return len(self.elems) - 1

    def divisor(self, k: int) -> int | None:
        memo = self._memo.get(k)
        if memo is not None and memo >= 0:
            return memo
        start = 0 if memo is None else -memo - 1
        guard = self.R.guard
        fk = self.R.field(k) | guard
        elems = self.elems
        for idx in range(start, len(elems)):
            if (fk - elems[idx].fld) & guard == guard:
                self._memo[k] = idx
                return idx
        self._memo[k] = -len(elems) - 1
        return None

    def reduce(self, f: dict, quot: dict | None = None, full: bool = True) -> dict:
        """Reduce ``f`` (consumed) and return the remainder.

        ``quot`` collects {element index: {shift: coefficient}} so that
        f_in = sum x^shift * coefficient * elem + remainder.
        """
        p = self.p
        heap = [-k for k in f]
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        rem: dict = {}
        elems = self.elems
        divisor = self.divisor
        budget, steps = self.budget, 0
        while heap:
            k = -pop(heap)
            c = f.get(k)
            if c is None:
                continue
            idx = divisor(k)
            if idx is None:
                rem[k] = f.pop(k)
                if not full:
                    rem.update(f)
                    return rem
                continue
            g = elems[idx]
            shift = k - g.lm
            del f[k]
            steps += 1
            if budget is not None and not steps & 0x3FF:
                budget.check()
            if quot is not None:
                q = quot.setdefault(idx, {})
                v = q.get(shift, 0) + c
                if p:
                    v %= p
                q[shift] = v
            for gk, gc in g.tail:
                kk = gk + k
                v = f.get(kk)
                if v is None:
                    f[kk] = (-c * gc) % p if p else -c * gc
                    push(heap, -kk)
                else:
                    v -= c * gc
                    if p:
                        v %= p
                    if v:
                        f[kk] = v
                    else:
                        del f[kk]
        return rem


def _combine_rows(base: dict, quot: dict, elems: Sequence[_Elem], p) -> dict:
    """base - sum_k quot[k] * row_k."""
    out = {l: dict(v) for l, v in base.items()}
    for idx, q in quot.items():
        row = elems[idx].row
        for l, r in row.items():
            acc = out.setdefault(l, {})
            _add_into(acc, _mul(q, r, p), p, sign=-1)
    return {l: v for l, v in out.items() if v}


# ---------------------------------------------------------------------------
# Buchberger


class _Engine:
    def __init__(self, R: PolyRing, ar: _Arith, gens: list[dict], track: bool, homogeneous: bool):
        self.R = R
        self.ar = ar
        self.p = ar.p
        self.track = track
        self.homogeneous = homogeneous
        self.red = _Reducer(R, self.p)
        self.active: list[int] = []
        self.pairs: dict[tuple[int, int], tuple[int, int]] = {}
        self.queue: list = []
        self.gens = gens
        self.unit = False
        self.done_degree: float = -1  # every pair with sugar <= done_degree is processed
        self.stats = {"pairs_processed": 0, "pairs_discarded": 0, "zero_reductions": 0, "basis_elements": 0}
        for l, g in enumerate(gens):
            if g:
                heapq.heappush(self.queue, (self._degree(g), max(g), 0, l, -1))

    def _degree(self, f: dict) -> int:
        deg = self.R.degree_of_key
        if self.R.order.kind == "lex":
            return max(deg(k) for k in f)
        return deg(max(f))

    @property
    def elems(self) -> list[_Elem]:
        return self.red.elems

    def pending_min(self) -> int | None:
        while self.queue:
            sugar, _, tag, a, b = self.queue[0]
            if tag == 1 and (a, b) not in self.pairs:
                heapq.heappop(self.queue)
                continue
            return sugar
        return None

    def run(self, bound: int | None, budget: Budget | None = None) -> None:
        if bound is not None and not self.homogeneous:
            raise ValueError("degree truncation needs homogeneous generators")
        self.red.budget = budget
        try:
            self._run(bound, budget)
        finally:
            self.red.budget = None
        if self.unit or self.pending_min() is None:
            self.done_degree = math.inf
        elif bound is not None:
            self.done_degree = max(self.done_degree, bound)

    def _run(self, bound: int | None, budget: Budget | None) -> None:
        while not self.unit:
            s = self.pending_min()
            if s is None or (bound is not None and s > bound):
                break
            if self.queue[0][0] > MAX_DEGREE:
                raise ExponentOverflow(f"completion reached degree {s}, above the packed limit {MAX_DEGREE}")
            if budget:
                budget.check(self.stats["pairs_processed"])
            entry = heapq.heappop(self.queue)
            sugar, _, tag, a, b = entry
            record = self.pairs.get((a, b)) if tag else None
            try:
                self._process(sugar, tag, a, b)
            except Exhausted:
                # leave the engine resumable: the interrupted task goes back on the queue
                heapq.heappush(self.queue, entry)
                if tag:
                    self.pairs[a, b] = record
                    self.stats["pairs_processed"] -= 1
                raise

    def _process(self, sugar: int, tag: int, a: int, b: int) -> None:
        R, p = self.R, self.p
        quot: dict | None = {} if self.track else None
        if tag == 0:
            f = dict(self.gens[a])
            base = {a: {0: 1 if p else MPQ(1)}} if self.track else None
        else:
            del self.pairs[a, b]
            self.stats["pairs_processed"] += 1
            ea, eb = self.elems[a], self.elems[b]
            lcm = R.lcm(ea.lm, eb.lm)
            sa, sb = lcm - ea.lm, lcm - eb.lm
            f = {}
            for k, c in ea.tail:
                f[k + lcm] = c
            for k, c in eb.tail:
                kk = k + lcm
                v = f.get(kk, 0) - c
                if p:
                    v %= p
                if v:
                    f[kk] = v
                else:
                    f.pop(kk, None)
            if self.track:
                base = {}
                for l, r in ea.row.items():
                    _add_into(base.setdefault(l, {}), {k + sa: c for k, c in r.items()}, p)
                for l, r in eb.row.items():
                    _add_into(base.setdefault(l, {}), {k + sb: c for k, c in r.items()}, p, sign=-1)
            else:
                base = None
        h = self.red.reduce(f, quot) if f else {}
        if not h:
            self.stats["zero_reductions"] += 1
            return
        lc = h[max(h)]
        inv = self.ar.inv(lc)
        h = _scale(h, inv, p)
        row = None
        if self.track:
            row = _combine_rows(base, quot, self.elems, p)
            row = {l: _scale(r, inv, p) for l, r in row.items()}
        self._insert(_Elem(R, h, sugar, row))

    @property
    def complete(self) -> bool:
        return self.unit or self.pending_min() is None

    def _insert(self, e: _Elem) -> None:
        R = self.R
        h = self.red.add(e)
        self.stats["basis_elements"] += 1
        if e.lm == 0:
            self.unit = True
            self.active = [h]
            self.pairs.clear()
            return
        elems = self.elems
        lm_h = e.lm
        cand = [(g, R.lcm(elems[g].lm, lm_h)) for g in self.active]
        kept: list[tuple[int, int]] = []
        for n, (g1, l1) in enumerate(cand):
            coprime = l1 == elems[g1].lm + lm_h
            if coprime:
                kept.append((g1, l1))
                continue
            dominated = any(R.divides(l2, l1) for g2, l2 in cand[n + 1:]) or any(R.divides(l2, l1) for g2, l2 in kept)
            if not dominated:
                kept.append((g1, l1))
            else:
                self.stats["pairs_discarded"] += 1
        for (a, b), (sug, lab) in list(self.pairs.items()):
            if R.divides(lm_h, lab) and R.lcm(elems[a].lm, lm_h) != lab and R.lcm(elems[b].lm, lm_h) != lab:
                del self.pairs[a, b]
                self.stats["pairs_discarded"] += 1
        for g, l in kept:
            if l == elems[g].lm + lm_h:
                self.stats["pairs_discarded"] += 1
                continue
            eg = elems[g]
            deg_l = R.degree_of_key(l)
            sugar = max(eg.sugar + deg_l - R.degree_of_key(eg.lm), e.sugar + deg_l - R.degree_of_key(lm_h))
            self.pairs[g, h] = (sugar, l)
            heapq.heappush(self.queue, (sugar, l, 1, g, h))
        self.active = [g for g in self.active if not R.divides(lm_h, elems[g].lm)] + [h]

    def export(self) -> tuple[list[dict], list[dict] | None]:
        """Reduced (interreduced, monic) basis and its transformation rows."""
        elems = self.elems
        act = sorted(self.active, key=lambda i: elems[i].lm)
        red = _Reducer(self.R, self.p)
        for i in act:
            red.add(elems[i])
        polys, rows = [], []
        for i in act:
            e = elems[i]
            tail = {k + e.lm: c for k, c in e.tail}
            quot = {} if self.track else None
            rt = red.reduce(tail, quot) if tail else {}
            rt[e.lm] = 1 if self.p else MPQ(1)
            polys.append(rt)
            if self.track:
                rows.append(_combine_rows(e.row, quot, red.elems, self.p))
        return polys, (rows if self.track else None)


# ---------------------------------------------------------------------------
# public types


@dataclass
class IdealPresentation:
    generators: tuple[Poly, ...]
    order: MonomialOrder = GREVLEX
    domain: Domain = QQ
    _engines: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero)
        if not gens:
            raise ValueError("ideal needs at least one nonzero generator")
        self.generators = gens

    @property
    def ring(self) -> PolyRing:
        return ring(self.generators[0].ring.m, self.order)

    @property
    def homogeneous(self) -> bool:
        names = self.generators[0].ring.names
        return all(isinstance(is_homogeneous(g, names), int) for g in self.generators)

    def with_domain(self, domain: Domain) -> "IdealPresentation":
        return IdealPresentation(self.generators, self.order, domain)


@dataclass
class GroebnerBasis:
    ring: PolyRing
    domain: Domain
    generators: tuple[Poly, ...]
    basis: tuple[Poly, ...]
    rows: tuple[tuple[Poly, ...], ...] | None
    truncated_at: int | None
    stats: dict
    _reducer: _Reducer | None = field(default=None, repr=False, compare=False)

    @property
    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_keys(self) -> list[int]:
        return [b.leading_key() for b in self.basis]

    def reducer(self) -> _Reducer:
        if self._reducer is None:
            ar = _Arith(self.domain)
            red = _Reducer(self.ring, ar.p)
            for b in self.basis:
                terms = {k: ar.inp(c) for k, c in b.terms_dict.items()}
                red.add(_Elem(self.ring, terms, b.degree(), None))
            self._reducer = red
        return self._reducer


def _to_internal(f: Poly, R: PolyRing, ar: _Arith) -> dict:
    if f.ring.m != R.m:
        raise ValueError("polynomial and ideal live in different variable tables")
    f = f.reorder(R)
    return {k: ar.inp(c) for k, c in f.terms_dict.items()}


def _to_poly(f: dict, R: PolyRing, ar: _Arith) -> Poly:
    return Poly(R, ar.domain, {k: ar.out(c) for k, c in f.items()}, _raw=True)


def _engine(I: IdealPresentation, track: bool) -> _Engine:
    key = (I.domain, track)
    eng = I._engines.get(key)
    if eng is None and not track:
        eng = I._engines.get((I.domain, True))
    if eng is None:
        R = I.ring
        ar = _Arith(I.domain)
        gens, scales = [], []
        for g in I.generators:
            d = _to_internal(g, R, ar)
            inv = ar.inv(d[max(d)])
            gens.append(_scale(d, inv, ar.p))
            scales.append(inv)
        eng = _Engine(R, ar, gens, track, I.homogeneous)
        # generators enter monic, so rows are rescaled by these on export
        eng.gen_scale = scales
        I._engines[key] = eng
    return eng


def buchberger(I: IdealPresentation, track: bool = False, degree_bound: int | None = None, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` (truncated at ``degree_bound`` if given)."""
    eng = _engine(I, track)
    if degree_bound is None or not eng.homogeneous:
        degree_bound = None
    eng.run(degree_bound, budget)
    return _export(I, eng)


def _export(I: IdealPresentation, eng: _Engine) -> GroebnerBasis:
    R, ar = eng.R, eng.ar
    polys, rows = eng.export()
    basis = tuple(_to_poly(f, R, ar) for f in polys)
    out_rows = None
    if rows is not None:
        out_rows = tuple(
            tuple(_to_poly(_scale(r.get(l, {}), eng.gen_scale[l], ar.p), R, ar) for l in range(len(I.generators)))
            for r in rows
        )
    truncated = None if eng.done_degree == math.inf else int(max(eng.done_degree, 0))
    return GroebnerBasis(R, ar.domain, I.generators, basis, out_rows, truncated, dict(eng.stats))


def normal_form(f: Poly, G: GroebnerBasis) -> tuple[Poly, list[Poly]]:
    """Remainder and per-basis-element cofactors: f = sum c_k G_k + remainder."""
    red = G.reducer()
    ar = _Arith(G.domain)
    quot: dict = {}
    rem = red.reduce(_to_internal(f, G.ring, ar), quot)
    cof = [_to_poly(quot.get(k, {}), G.ring, ar) for k in range(len(G.basis))]
    return _to_poly(rem, G.ring, ar), cof


def s_polynomial(f: Poly, g: Poly) -> Poly:
    R = f.ring
    lf, lg = f.leading_key(), g.leading_key()
    lcm = R.lcm(lf, lg)
    cf, cg = f.terms_dict[lf], g.terms_dict[lg]
    a = Poly(R, f.domain, {lcm - lf: cg}, _raw=True)
    b = Poly(R, g.domain, {lcm - lg: cf}, _raw=True)
    return a * f - b * g


def s_pairs_closed(G: GroebnerBasis) -> bool:
    """Every S-polynomial (within the truncation degree) reduces to zero."""
    B = G.basis
    for x in range(len(B)):
        for y in range(x + 1, len(B)):
            s = s_polynomial(B[x], B[y])
            if G.truncated_at is not None and s.degree() > G.truncated_at:
                continue
            if not s.is_zero and not normal_form(s, G)[0].is_zero:
                return False
    return True


# ---------------------------------------------------------------------------
# membership


@dataclass
class MembershipVerdict:
    member: bool | None  # None: budget exhausted
    certified: bool
    engine: str = "groebner"
    certificate: MembershipCertificate | None = None
    primes: list[int] = field(default_factory=list)
    modular_evidence: bool = False
    note: str = ""

    @property
    def exhausted(self) -> bool:
        return self.member is None


def covers(G: GroebnerBasis, f: Poly) -> bool:
    """True when ``G`` decides membership of ``f`` (complete, or truncated at or above deg f)."""
    if G.truncated_at is None:
        return True
    return isinstance(is_homogeneous(f, f.ring.names), int) and f.degree() <= G.truncated_at


def current_basis(I: IdealPresentation, track: bool = True) -> GroebnerBasis | None:
    """Export whatever completion state ``I`` already holds, without further work."""
    eng = I._engines.get((I.domain, track))
    if eng is None or eng.done_degree < 0:
        return None
    return _export(I, eng)


def _member_in(f: Poly, I: IdealPresentation, track: bool, budget: Budget | None, basis: GroebnerBasis | None = None):
    if basis is not None and covers(basis, f) and (basis.rows is not None or not track):
        rem, cof = normal_form(f, basis)
        return basis, rem, cof
    eng = _engine(I, track)
    hom = eng.homogeneous and isinstance(is_homogeneous(f, f.ring.names), int)
    bound = f.degree() if hom else math.inf
    if eng.done_degree < bound:
        eng.run(None if bound == math.inf else bound, budget)
    G = _export(I, eng)
    rem, cof = normal_form(f, G)
    return G, rem, cof


def is_member(
    f: Poly,
    I: IdealPresentation,
    certificate: bool = False,
    certify_negative: bool = True,
    prefilter: bool = True,
    primes: Sequence[int] | None = None,
    budget: Budget | None = None,
    basis: GroebnerBasis | None = None,
) -> MembershipVerdict:
    """Decide f in I; positives are always confirmed over the rationals.

    A previously computed (and checked) ``basis`` of I is used when it covers f.
    """
    used: list[int] = []
    try:
        if prefilter and I.domain.kind != "GF":
            for p in ([] if basis is not None and covers(basis, f) else primes or random_primes()):
                used.append(p)
                Ip = _modular_twin(I, p)
                _, rem, _ = _member_in(f.to_domain(GF(p)), Ip, False, budget)
                if not rem.is_zero and not certify_negative:
                    return MembershipVerdict(False, False, primes=used, modular_evidence=True, note=f"nonzero remainder mod {p}")
                if not rem.is_zero:
                    break
        G, rem, cof = _member_in(f, I, certificate, budget, basis)
    except Exhausted as exc:
        return MembershipVerdict(None, False, primes=used, note=str(exc))
    if I.domain.kind == "GF":
        return MembershipVerdict(rem.is_zero, False, primes=[I.domain.p], modular_evidence=True)
    if not rem.is_zero:
        return MembershipVerdict(False, True, primes=used)
    cert = None
    if certificate:
        cofactors = _compose(cof, G)
        gens = [g.to_domain(QQ) if g.domain.kind == "ZZ" else g for g in I.generators]
        cert = MembershipCertificate(f, 1, [g.reorder(f.ring) for g in gens], [c.reorder(f.ring) for c in cofactors], engine="groebner")
        cert.verify()
        if not cert.verified:
            raise AssertionError("groebner produced a certificate that does not verify")
    return MembershipVerdict(True, True, certificate=cert, primes=used)


def _modular_twin(I: IdealPresentation, p: int) -> IdealPresentation:
    key = ("twin", p)
    twin = I._engines.get(key)
    if twin is None:
        twin = IdealPresentation(tuple(g.to_domain(GF(p)) for g in I.generators), I.order, GF(p))
        I._engines[key] = twin
    return twin


def _compose(cof: list[Poly], G: GroebnerBasis) -> list[Poly]:
    """Cofactors against the original generators from basis cofactors and rows."""
    if G.rows is None:
        raise ValueError("basis was computed without cofactor tracking")
    out = []
    for l in range(len(G.generators)):
        acc = Poly.zero(G.ring, G.domain)
        for k, c in enumerate(cof):
            if not c.is_zero:
                acc = acc + c * G.rows[k][l]
        out.append(acc)
    return out


def is_radical_member(f: Poly, I: IdealPresentation, budget: Budget | None = None) -> bool:
    """f in sqrt(I) iff 1 in I + <1 - y f>.  Raises :class:`Exhausted` on budget."""
    R = f.ring
    if "y" in f.variables() or any("y" in g.variables() for g in I.generators):
        raise ValueError("the auxiliary y must not occur in the input")
    y = Poly.var(R, "y", f.domain)
    rab = 1 - y * f
    gens = tuple(g if g.domain == f.domain else g.to_domain(f.domain) for g in I.generators) + (rab,)
    J = IdealPresentation(gens, I.order, I.domain)
    eng = _engine(J, False)
    eng.run(None, budget)
    return eng.unit


@dataclass
class KappaVerdict:
    status: str  # "kappa" | "not_in_radical" | "exhausted"
    kappa: int | None = None
    certificate: MembershipCertificate | None = None
    refuted: list[int] = field(default_factory=list)  # kappas with certified non-membership
    engine: str = "groebner"
    note: str = ""


# fraction of a time budget the radical pre-test may spend
RADICAL_SHARE = 0.25


def minimal_kappa(
    f: Poly,
    I: IdealPresentation,
    kappa_max: int = 8,
    certificate: bool = True,
    radical_first: bool = True,
    budget: Budget | None = None,
    basis: GroebnerBasis | None = None,
    primes: Sequence[int] | None = None,
) -> KappaVerdict:
    """Smallest kappa <= kappa_max with f^kappa in I, certified both ways."""
    if kappa_max < 1:
        raise ValueError("kappa_max must be >= 1")
    note = ""
    if radical_first:
        # under a budget the radical test only gets a share; running out leaves it undecided
        try:
            if not is_radical_member(f, I, budget.share(RADICAL_SHARE) if budget else None):
                return KappaVerdict("not_in_radical")
        except Exhausted as exc:
            note = f"radical test undecided ({exc}); "
    refuted: list[int] = []
    for kappa in range(1, kappa_max + 1):
        v = is_member(f**kappa, I, certificate=certificate, certify_negative=True, primes=primes, budget=budget, basis=basis)
        if v.member is None:
            return KappaVerdict("exhausted", refuted=refuted, note=note + v.note)
        if v.member:
            cert = v.certificate
            if cert is not None:
                cert.target, cert.kappa = f, kappa
                cert.verify()
            return KappaVerdict("kappa", kappa, cert, refuted, note=note.rstrip("; "))
        refuted.append(kappa)
    return KappaVerdict("exhausted", refuted=refuted, note=note + f"no kappa <= {kappa_max}")


def heuristic_kappa(
    f: Poly,
    I: IdealPresentation,
    kappa_max: int = 8,
    primes: Sequence[int] | None = None,
    budget: Budget | None = None,
) -> KappaVerdict:
    """Smallest kappa whose power reduces to zero modulo every prime; evidence only, never certified."""
    primes = list(primes or random_primes())
    for kappa in range(1, kappa_max + 1):
        g = f**kappa
        try:
            zero = all(_member_in(g.to_domain(GF(p)), _modular_twin(I, p), False, budget)[1].is_zero for p in primes)
        except Exhausted as exc:
            return KappaVerdict("exhausted", note=str(exc), engine="groebner-modular")
        if zero:
            return KappaVerdict("heuristic", kappa, engine="groebner-modular", note="primes " + ",".join(map(str, primes)))
    return KappaVerdict("exhausted", engine="groebner-modular", note=f"no kappa <= {kappa_max} modulo the primes")
