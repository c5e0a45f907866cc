"""Sparse multivariate polynomials with exact coefficients.

Monomials are packed into a single Python int (8-bit exponent fields) whose
integer order *is* the active monomial order, so monomial multiplication is
addition and the leading monomial of a term dict is ``max(terms)``.

Every polynomial lives in a :class:`PolyRing` (a :class:`VarTable` plus a
:class:`MonomialOrder`) and carries a coefficient :class:`Domain`.  Mixing
rings or domains is a usage error and raises :class:`DomainMismatch`.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

import gmpy2

WIDTH = 8
FIELD = (1 << WIDTH) - 1
MAX_DEGREE = 127  # total degree bound; keeps every exponent field below its guard bit

AUXILIARIES = ("y", "t", "T", "U")
ZERO_DEGREE = "zero"


class PolyError(Exception):
    pass


class DomainMismatch(PolyError, TypeError):
    pass


class NonExactDivision(PolyError, ArithmeticError):
    pass


class ExponentOverflow(PolyError, OverflowError):
    pass


class ParseError(PolyError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


# ---------------------------------------------------------------------------
# coefficient domains


@dataclass(frozen=True)
class Domain:
    kind: str  # "ZZ" | "QQ" | "GF"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise ValueError(f"unknown domain {self.kind!r}")
        if self.kind == "GF" and (self.p is None or not gmpy2.is_prime(self.p)):
            raise ValueError(f"GF needs a prime modulus, got {self.p!r}")

    def __str__(self) -> str:
        return f"GF({self.p})" if self.kind == "GF" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    def convert(self, c):
        """Bring a scalar into this domain, refusing lossy coercions."""
        if self.kind == "ZZ":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise DomainMismatch(f"{c} is not an integer")
                return c.numerator
            return int(c)
        if self.kind == "QQ":
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise ZeroDivisionError(f"{self.p} divides the denominator of {c}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p


ZZ = Domain("ZZ")
QQ = Domain("QQ")


def GF(p: int) -> Domain:
    return Domain("GF", p)


Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# variables and orders


@dataclass(frozen=True)
class VarTable:
    """Variables y, t, T, U, a0 .. am with a fixed total indexing."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")

    @property
    def names(self) -> tuple[str, ...]:
        return AUXILIARIES + tuple(f"a{k}" for k in range(self.m + 1))

    @property
    def a_names(self) -> tuple[str, ...]:
        return tuple(f"a{k}" for k in range(self.m + 1))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} for m={self.m}") from None


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"  # "grevlex" | "grlex" | "lex"
    priority: tuple[str, ...] | None = None  # highest variable first; None = table order

    def __post_init__(self):
        if self.kind not in ("grevlex", "grlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class PolyRing:
    """Packed-monomial encoding for one (VarTable, MonomialOrder) pair.

    Use :func:`ring` to obtain instances; they are interned so identity
    comparison is equality.
    """

    def __init__(self, vt: VarTable, order: MonomialOrder):
        self.vars = vt
        self.order = order
        self.m = vt.m
        names = vt.names
        self.names = names
        self.n = n = len(names)
        priority = order.priority or names
        if sorted(priority) != sorted(names):
            raise ValueError("priority must be a permutation of the ring variables")
        rank = {v: r for r, v in enumerate(priority)}
        self.mask = (1 << (WIDTH * n)) - 1
        self.guard = sum(1 << (WIDTH * k + WIDTH - 1) for k in range(n))
        top = 1 << (WIDTH * n)
        shifts = []
        keys = []
        for v in names:
            r = rank[v]
            if order.kind == "grevlex":
                s = WIDTH * r
                keys.append(top - (1 << s))
            elif order.kind == "grlex":
                s = WIDTH * (n - 1 - r)
                keys.append(top + (1 << s))
            else:
                s = WIDTH * (n - 1 - r)
                keys.append(1 << s)
            shifts.append(s)
        self.shifts = tuple(shifts)
        self.var_keys = tuple(keys)
        self.n_aux = len(AUXILIARIES)
        self.a_indices = tuple(range(self.n_aux, n))
        self._top_shift = WIDTH * n
        kind = order.kind
        mask = self.mask
        if kind == "grevlex":
            self.field = lambda k: (-k) & mask
        elif kind == "grlex":
            self.field = lambda k: k & mask
        else:
            self.field = lambda k: k

    def __repr__(self) -> str:
        return f"PolyRing(m={self.m}, order={self.order.kind})"

    def __reduce__(self):
        return (ring, (self.m, self.order))

    # -- monomial helpers -------------------------------------------------
    def degree_of_key(self, k: int) -> int:
        kind = self.order.kind
        if kind == "grevlex":
            return (k + ((-k) & self.mask)) >> self._top_shift
        if kind == "grlex":
            return k >> self._top_shift
        return k % FIELD

    def exponent(self, k: int, v: int) -> int:
        return (self.field(k) >> self.shifts[v]) & FIELD

    def exponents(self, k: int) -> tuple[int, ...]:
        f = self.field(k)
        return tuple((f >> s) & FIELD for s in self.shifts)

    def key(self, exps: Iterable[int]) -> int:
        k = 0
        total = 0
        for e, vk in zip(exps, self.var_keys):
            if e < 0:
                raise ValueError("negative exponent")
            total += e
            k += e * vk
        if total > MAX_DEGREE:
            raise ExponentOverflow(f"monomial degree {total} exceeds {MAX_DEGREE}")
        return k

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial ``a`` divides monomial ``b``."""
        g = self.guard
        return ((self.field(b) | g) - self.field(a)) & g == g

    def lcm(self, a: int, b: int) -> int:
        fa, fb = self.field(a), self.field(b)
        g = self.guard
        ge = ((fa | g) - fb) & g  # guard bits of fields where a >= b
        sel = (ge >> (WIDTH - 1)) * FIELD
        f = (fa & sel) | (fb & ~sel & self.mask)
        return self._key_from_field(f)

    def _key_from_field(self, f: int) -> int:
        kind = self.order.kind
        if kind == "lex":
            return f
        deg = f % FIELD
        if kind == "grevlex":
            return (deg << self._top_shift) - f
        return (deg << self._top_shift) + f

    def var(self, name: str) -> int:
        return self.var_keys[self.vars.index(name)]

    def monomial_text(self, k: int) -> str:
        parts = []
        for name, e in zip(self.names, self.exponents(k)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def a_degree(self, k: int) -> int:
        f = self.field(k)
        return sum((f >> self.shifts[v]) & FIELD for v in self.a_indices)


def ring(m: int, order: MonomialOrder = GREVLEX) -> PolyRing:
    return _ring(m, order)


@lru_cache(maxsize=None)
def _ring(m: int, order: MonomialOrder) -> PolyRing:
    return PolyRing(VarTable(m), order)


# ---------------------------------------------------------------------------
# polynomials


def _normalize(domain: Domain, terms: dict) -> dict:
    if domain.kind == "GF":
        p = domain.p
        out = {}
        for k, c in terms.items():
            c = domain.convert(c) if isinstance(c, Fraction) else c % p
            if c:
                out[k] = c
        return out
    conv = domain.convert
    return {k: conv(c) for k, c in terms.items() if c}


class Poly:
    """Immutable sparse polynomial.  ``terms`` maps packed monomial -> coefficient."""

    __slots__ = ("ring", "domain", "_t", "_hash")

    def __init__(self, R: PolyRing, domain: Domain, terms: Mapping[int, Scalar] | None = None, *, _raw: bool = False):
        self.ring = R
        self.domain = domain
        if terms is None:
            terms = {}
        self._t = dict(terms) if _raw else _normalize(domain, dict(terms))
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, R: PolyRing, domain: Domain = ZZ) -> "Poly":
        return cls(R, domain, {}, _raw=True)

    @classmethod
    def const(cls, R: PolyRing, c: Scalar, domain: Domain = ZZ) -> "Poly":
        return cls(R, domain, {0: c})

    @classmethod
    def var(cls, R: PolyRing, name: str, domain: Domain = ZZ) -> "Poly":
        return cls(R, domain, {R.var(name): 1}, _raw=True)

    @classmethod
    def from_terms(cls, R: PolyRing, pairs: Iterable[tuple[Scalar, Iterable[int]]], domain: Domain = ZZ) -> "Poly":
        acc: dict[int, Scalar] = {}
        for c, exps in pairs:
            k = R.key(exps)
            acc[k] = acc.get(k, 0) + c
        return cls(R, domain, acc)

    def _new(self, terms: dict) -> "Poly":
        return Poly(self.ring, self.domain, terms, _raw=True)

    # -- inspection -------------------------------------------------------
    @property
    def terms_dict(self) -> Mapping[int, Scalar]:
        return self._t

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    def terms(self) -> list[tuple[Scalar, tuple[int, ...]]]:
        """(coefficient, exponent vector) pairs, descending in the ring order."""
        R = self.ring
        return [(self._t[k], R.exponents(k)) for k in sorted(self._t, reverse=True)]

    def leading_key(self) -> int:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return max(self._t)

    def leading_coefficient(self):
        return self._t[self.leading_key()] if self._t else 0

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._t:
            return -1
        R = self.ring
        if R.order.kind == "lex":
            return max(R.degree_of_key(k) for k in self._t)
        return R.degree_of_key(max(self._t))

    def degree_in(self, name: str) -> int:
        v = self.ring.vars.index(name)
        return max((self.ring.exponent(k, v) for k in self._t), default=-1)

    def variables(self) -> set[str]:
        R = self.ring
        used = 0
        for k in self._t:
            used |= R.field(k)
        return {name for name, s in zip(R.names, R.shifts) if (used >> s) & FIELD}

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self):
        return self._t.get(0, 0)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if other.ring is not self.ring:
            raise DomainMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.domain != self.domain:
            raise DomainMismatch(f"domain mismatch: {self.domain} vs {other.domain}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.ring, other, self.domain)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        p = self.domain.p
        for k, c in b.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if p:
                    v %= p
                if v:
                    out[k] = v
                else:
                    del out[k]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = self.domain.p
        if p:
            return self._new({k: (-c) % p for k, c in self._t.items()})
        return self._new({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Poly":
        c = self.domain.convert(c)
        if not c:
            return self._new({})
        p = self.domain.p
        if p:
            return self._new({k: v * c % p for k, v in self._t.items()})
        return self._new({k: v * c for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self._t or not other._t:
            return self._new({})
        if self.degree() + other.degree() > MAX_DEGREE:
            raise ExponentOverflow(f"product degree exceeds {MAX_DEGREE}")
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, Scalar] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        p = self.domain.p
        if p:
            return self._new({k: c % p for k, c in out.items() if c % p})
        return self._new({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if k and self.degree() * k > MAX_DEGREE:
            raise ExponentOverflow(f"power degree exceeds {MAX_DEGREE}")
        result = Poly.const(self.ring, 1, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring is other.ring and self.domain == other.domain and self._t == other._t
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.m, self.ring.order, self.domain, frozenset(self._t.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, m={self.ring.m}, {self.domain})"

    def __str__(self) -> str:
        return format_poly(self)

    def __reduce__(self):
        return (_rebuild, (self.ring, self.domain, self._t))

    # -- algebra ----------------------------------------------------------
    def exact_div(self, g: "Poly") -> "Poly":
        return exact_div(self, g)

    def coeff_of(self, name: str, k: int) -> "Poly":
        return coeff_of(self, name, k)

    def substitute(self, assignments: Mapping) -> "Poly":
        return substitute(self, assignments)

    def content(self) -> int:
        """gcd of the integer coefficients."""
        g = 0
        for c in self._t.values():
            g = gmpy2.gcd(g, int(c))
            if g == 1:
                break
        return int(g)

    def to_domain(self, domain: Domain) -> "Poly":
        if domain.kind == "GF":
            return reduce_mod_p(self, domain.p)
        if domain.kind == "ZZ" and self.domain.kind == "GF":
            return Poly(self.ring, domain, dict(self._t))
        return Poly(self.ring, domain, dict(self._t))

    def reorder(self, R: PolyRing) -> "Poly":
        """Re-encode in another ring with the same variables (different order)."""
        if R is self.ring:
            return self
        if R.m != self.ring.m:
            raise DomainMismatch("reorder needs the same variable table")
        src = self.ring
        return Poly(R, self.domain, {R.key(src.exponents(k)): c for k, c in self._t.items()}, _raw=True)

    def evaluate(self, values: Mapping[str, Scalar]):
        """Substitute scalars for every variable that occurs and return the scalar."""
        out = substitute(self, values)
        if not out.is_constant():
            raise ValueError(f"variables left after evaluation: {sorted(out.variables())}")
        return out.constant_value()


def _rebuild(R, domain, terms):
    return Poly(R, domain, terms, _raw=True)


# ---------------------------------------------------------------------------
# operations


def exact_div(f: Poly, g: Poly) -> Poly:
    """Quotient ``q`` with ``q*g == f``; :class:`NonExactDivision` otherwise."""
    f._check(g)
    if not g._t:
        raise ZeroDivisionError("division by the zero polynomial")
    R = f.ring
    domain = f.domain
    p = domain.p
    glm = max(g._t)
    glc = g._t[glm]
    gtail = [(k - glm, c) for k, c in g._t.items() if k != glm]
    if p:
        ginv = pow(glc, -1, p)
    r = dict(f._t)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q: dict[int, Scalar] = {}
    field_g = R.field(glm)
    guard = R.guard
    field = R.field
    while r:
        k = -heapq.heappop(heap)
        c = r.get(k)
        if c is None:
            continue
        if ((field(k) | guard) - field_g) & guard != guard:
            raise NonExactDivision(f"{R.monomial_text(k) or '1'} not divisible by {R.monomial_text(glm) or '1'}")
        if p:
            qc = c * ginv % p
        elif domain.kind == "ZZ":
            qc, rem = divmod(c, glc)
            if rem:
                raise NonExactDivision(f"coefficient {c} not divisible by {glc}")
        else:
            qc = c / glc
        shift = k - glm
        q[shift] = qc
        del r[k]
        for dk, gc in gtail:
            kk = dk + k
            v = r.get(kk)
            if v is None:
                r[kk] = (-qc * gc) % p if p else -qc * gc
                heapq.heappush(heap, -kk)
            else:
                v = v - qc * gc
                if p:
                    v %= p
                if v:
                    r[kk] = v
                else:
                    del r[kk]
    return f._new(q)


def coeff_of(f: Poly, name: str, k: int) -> Poly:
    """Coefficient of ``name**k`` viewing ``f`` as a polynomial in ``name``."""
    R = f.ring
    v = R.vars.index(name)
    if k < 0:
        return f._new({})
    s = R.shifts[v]
    drop = k * R.var_keys[v]
    field = R.field
    return f._new({key - drop: c for key, c in f._t.items() if (field(key) >> s) & FIELD == k})


def substitute(f: Poly, assignments: Mapping) -> Poly:
    """Simultaneous substitution; values are Polys of the same ring or scalars."""
    R = f.ring
    todo: dict[int, Poly] = {}
    for name, value in assignments.items():
        v = R.vars.index(name) if isinstance(name, str) else int(name)
        if not isinstance(value, Poly):
            value = Poly.const(R, value, f.domain)
        else:
            f._check(value)
        todo[v] = value
    if not todo:
        return f
    monomial_images = all(len(val._t) == 1 and next(iter(val._t.values())) == 1 for val in todo.values())
    powers: dict[tuple[int, int], Poly] = {}

    def power(v: int, e: int) -> Poly:
        key = (v, e)
        if key not in powers:
            powers[key] = todo[v] ** e
        return powers[key]

    out: dict[int, Scalar] = {}
    p = f.domain.p
    for key, c in f._t.items():
        exps = R.exponents(key)
        rest = key
        img_keys = 0
        images: list[Poly] = []
        for v, val in todo.items():
            e = exps[v]
            if e:
                rest -= e * R.var_keys[v]
                if monomial_images:
                    img_keys += e * next(iter(val._t))
                else:
                    images.append(power(v, e))
        if monomial_images:
            k2 = rest + img_keys
            out[k2] = out.get(k2, 0) + c
            continue
        term = Poly(R, f.domain, {rest: c}, _raw=True)
        for img in images:
            term = term * img
        for k2, c2 in term._t.items():
            out[k2] = out.get(k2, 0) + c2
    if monomial_images and R.degree_of_key(max(out, default=0)) > MAX_DEGREE:
        raise ExponentOverflow("substitution result degree too large")
    if p:
        return f._new({k: c % p for k, c in out.items() if c % p})
    return f._new({k: c for k, c in out.items() if c})


def is_homogeneous(f: Poly, in_vars: Iterable[str] | None = None):
    """Common degree of all terms in ``in_vars`` (default: the a-variables).

    Returns ``ZERO_DEGREE`` for the zero polynomial and ``None`` when mixed.
    """
    if not f._t:
        return ZERO_DEGREE
    R = f.ring
    if in_vars is None:
        idx = R.a_indices
    else:
        idx = tuple(R.vars.index(v) for v in in_vars)
    shifts = [R.shifts[v] for v in idx]
    degs = set()
    for k in f._t:
        fk = R.field(k)
        degs.add(sum((fk >> s) & FIELD for s in shifts))
        if len(degs) > 1:
            return None
    return degs.pop()


def reduce_mod_p(f: Poly, p: int) -> Poly:
    """Coefficientwise image in GF(p); rational denominators must be prime to p."""
    target = GF(p)
    if f.domain.kind == "GF":
        if f.domain.p != p:
            raise DomainMismatch(f"cannot map {f.domain} to {target}")
        return f
    out = {}
    for k, c in f._t.items():
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"{p} divides a denominator of the polynomial")
            c = c.numerator * pow(c.denominator, -1, p)
        c %= p
        if c:
            out[k] = c
    return Poly(f.ring, target, out, _raw=True)


def variables(R: PolyRing, domain: Domain = ZZ) -> dict[str, Poly]:
    return {name: Poly.var(R, name, domain) for name in R.names}


def a_var(R: PolyRing, k: int, domain: Domain = ZZ) -> Poly:
    """``a_k``, or zero when ``k`` is outside 0..m."""
    if 0 <= k <= R.m:
        return Poly.var(R, f"a{k}", domain)
    return Poly.zero(R, domain)


def a_involution(R: PolyRing) -> dict[str, Poly]:
    """The substitution a_k -> a_{m-k}."""
    return {f"a{k}": Poly.var(R, f"a{R.m - k}") for k in range(R.m + 1)}


# ---------------------------------------------------------------------------
# text


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>a\d+|[UtTy])|(?P<op>[-+*^()]))")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            return
        mo = _TOKEN.match(text, pos)
        if not mo:
            while text[pos].isspace():
                pos += 1
            raise ParseError("unexpected character", text, pos)
        kind = mo.lastgroup
        yield kind, mo.group(kind), mo.start(kind)
        pos = mo.end()


def parse(text: str, R: PolyRing | int, domain: Domain | None = None) -> Poly:
    """Parse the canonical text grammar (also accepts parentheses and ``**``)."""
    if isinstance(R, int):
        R = ring(R)
    text = text.replace("**", "^")
    toks = list(_tokens(text))
    if domain is None:
        domain = QQ if any(kind == "num" and "/" in val for kind, val, _ in toks) else ZZ
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "", len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr() -> Poly:
        sign = 1
        kind, val, at = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val, at = peek()
            if kind == "op" and val in "+-":
                take()
                t = term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term() -> Poly:
        acc = factor()
        while True:
            kind, val, at = peek()
            if kind == "op" and val == "*":
                take()
                acc = acc * factor()
            else:
                return acc

    def factor() -> Poly:
        base = atom()
        kind, val, at = peek()
        if kind == "op" and val == "^":
            take()
            kind, val, at = take()
            if kind != "num" or "/" in val:
                raise ParseError("expected integer exponent", text, at)
            return base ** int(val)
        return base

    def atom() -> Poly:
        kind, val, at = take()
        if kind == "num":
            c = Fraction(val)
            if domain.kind == "ZZ" and c.denominator != 1:
                raise ParseError("rational coefficient in ZZ", text, at)
            return Poly.const(R, c, domain)
        if kind == "name":
            try:
                return Poly.var(R, val, domain)
            except KeyError:
                raise ParseError(f"unknown variable {val}", text, at) from None
        if kind == "op" and val == "(":
            inner = expr()
            k2, v2, at2 = take()
            if v2 != ")":
                raise ParseError("expected ')'", text, at2)
            return inner
        if kind == "op" and val == "-":
            return -atom()
        raise ParseError(f"unexpected {val or 'end of input'!r}", text, at)

    if not toks:
        raise ParseError("empty input", text, 0)
    out = expr()
    if pos != len(toks):
        raise ParseError("trailing input", text, peek()[2])
    return out


def format_poly(f: Poly, order: MonomialOrder | None = None) -> str:
    """Canonical text: terms descending in ``order`` (default: the ring's own)."""
    if not f._t:
        return "0"
    R = f.ring
    if order is not None and order != R.order:
        target = ring(R.m, order)
        keys = sorted(f._t, key=lambda k: target.key(R.exponents(k)), reverse=True)
    else:
        keys = sorted(f._t, reverse=True)
    out = []
    for n, k in enumerate(keys):
        c = f._t[k]
        neg = c < 0 and f.domain.kind != "GF"
        mag = -c if neg else c
        mono = R.monomial_text(k)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
