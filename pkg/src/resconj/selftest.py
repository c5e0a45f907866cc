"""Invariant suites behind ``resconj selftest``; all randomness comes from one seed."""

from __future__ import annotations

import random
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cache import Cache, basis_key
from .certify import verify_identity
from .coefficients import check_symmetry, family
from .groebner import IdealPresentation, buchberger, is_member, normal_form, s_pairs_closed
from .macaulay import build_slice
from .matrix import I_MINUS_MV, M_MINUS_VI, build_M, build_Mt, charpoly_in, det_bareiss, det_laplace
from .modular import session_seed
from .poly import QQ, Poly, a_involution, coeff_of, exact_div, format_poly, parse, ring, substitute


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def random_poly(rng: random.Random, m: int, nterms: int, max_deg: int = 4, coeff: int = 9, homogeneous: int | None = None, aux: bool = False) -> Poly:
    R = ring(m)
    names = R.names
    terms = []
    lo = 0 if aux else R.n_aux
    for _ in range(nterms):
        e = [0] * len(names)
        d = homogeneous if homogeneous is not None else rng.randint(0, max_deg)
        for _ in range(d):
            e[rng.randrange(lo, len(names))] += 1
        terms.append((rng.randint(-coeff, coeff), e))
    return Poly.from_terms(R, terms)


def check_ring_axioms(rng: random.Random, trials: int = 25) -> str:
    for _ in range(trials):
        f, g, h = (random_poly(rng, 4, rng.randint(0, 50), aux=True) for _ in range(3))
        assert (f + g) + h == f + (g + h), "addition is not associative"
        assert f + g == g + f, "addition is not commutative"
        assert (f * g) * h == f * (g * h), "multiplication is not associative"
        assert f * g == g * f, "multiplication is not commutative"
        assert f * (g + h) == f * g + f * h, "distributivity fails"
        if not g.is_zero:
            assert exact_div(f * g, g) == f, "exact_div(f*g, g) != f"
        for v in ("U", "t", "T", "y", "a2"):
            x = Poly.var(f.ring, v)
            acc = Poly.zero(f.ring)
            for k in range(f.degree_in(v) + 1):
                acc = acc + coeff_of(f, v, k) * x**k
            assert acc == f, f"coefficient reconstruction in {v} fails"
        ident = {n: Poly.var(f.ring, n) for n in f.ring.names}
        assert substitute(f, ident) == f, "identity substitution changes f"
        assert parse(format_poly(f), f.ring) == f, "format/parse round trip fails"
    return f"{trials} random triples"


def _bases():
    out = []
    for i in range(4):
        out.append((4, i, None))
    out.append((5, 1, 8))
    out.append((5, 2, 9))
    return out


def check_groebner(rng: random.Random) -> str:
    n = 0
    for m, i, bound in _bases():
        fam = family(m)
        G = buchberger(IdealPresentation(tuple(fam.generators(i))), track=True, degree_bound=bound)
        assert s_pairs_closed(G), f"S-pairs do not close for m={m}, i={i}"
        for b, row in zip(G.basis, G.rows):
            acc = Poly.zero(G.ring, QQ)
            for c, g in zip(row, G.generators):
                acc = acc + c * g.to_domain(QQ)
            assert acc == b, "transformation row does not reproduce its basis element"
        deg = bound if bound is not None else 6
        for _ in range(4):
            d = rng.randint(1, deg)
            f = random_poly(rng, m, 12, homogeneous=d).to_domain(QQ)
            g = random_poly(rng, m, 12, homogeneous=d).to_domain(QQ)
            al, be = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            nf = lambda p: normal_form(p, G)[0]
            assert nf(f.scale(al) + g.scale(be)) == nf(f).scale(al) + nf(g).scale(be), "normal form is not linear"
            assert nf(nf(f)) == nf(f), "normal form is not idempotent"
            rem, cof = normal_form(f, G)
            back = rem
            for c, b in zip(cof, G.basis):
                back = back + c * b
            assert back == f, "division identity fails"
            n += 1
    return f"{len(_bases())} bases, {n} normal-form probes"


def check_determinants(rng: random.Random, specializations: int = 20) -> str:
    for m in range(2, 6):
        for M, v, conv in ((build_M(m), "U", M_MINUS_VI), (build_Mt(m), "T", I_MINUS_MV)):
            a = charpoly_in(M, v, conv, det=det_bareiss)
            b = charpoly_in(M, v, conv, det=det_laplace)
            assert a == b, f"Bareiss and Laplace disagree symbolically at m={m}"
        assert det_bareiss(build_M(m)) == det_laplace(build_M(m))
    for m in (6, 7):
        fam = family(m)
        R = ring(m)
        for _ in range(specializations):
            point = {f"a{k}": rng.randint(-9, 9) for k in range(m + 1)}
            for M, v, conv, full in ((build_M(m), "U", M_MINUS_VI, fam.charpoly_M), (build_Mt(m), "T", I_MINUS_MV, fam.charpoly_Mt)):
                S = M.specialize(point)
                a = charpoly_in(S, v, conv, det=det_bareiss)
                b = charpoly_in(S, v, conv, det=det_laplace)
                assert a == b, f"Bareiss and Laplace disagree at m={m}, point {point}"
                assert substitute(full, point) == a, f"specialization does not commute with det at m={m}"
    return f"symbolic m<=5, {specializations} specializations for m=6,7"


def check_symmetry_signs(max_m: int = 6) -> str:
    cells = 0
    for m in range(2, max_m + 1):
        fam = family(m)
        inv = a_involution(fam.ring)
        for (i, j) in fam.H:
            assert check_symmetry(m, i, j, fam) is not None, f"no symmetry sign for H_{{{i},{j}}}({m})"
            assert substitute(substitute(fam.H[i, j], inv), inv) == fam.H[i, j]
            cells += 1
        for d in fam.D:
            assert substitute(substitute(d, inv), inv) == d
    return f"{cells} triangle cells"


def check_slice_dimensions() -> str:
    fam = family(4)
    cases = [(fam.H[1, 2] ** 2, fam.generators(1)), (fam.H[0, 1], fam.generators(0))]
    fam5 = family(5)
    cases.append((fam5.H[2, 1] ** 2, fam5.generators(2)))
    cases.append((fam5.H[1, 1] ** 2, fam5.generators(1)))
    for f, gens in cases:
        S = build_slice(f, gens)
        assert len(S.rows) == S.expected_rows(), "row count differs from the binomial count"
        for l, mus in S.blocks:
            assert len(mus) == S.expected_block(gens[l].degree()), "column block differs from the binomial count"
    return f"{len(cases)} slices"


def check_certificates() -> str:
    fam = family(4)
    v = is_member(fam.H[1, 2] ** 2, IdealPresentation(tuple(fam.generators(1))), certificate=True)
    t, g, c = v.certificate.texts()
    assert verify_identity(t, 1, g, c), "engine certificate does not verify"
    assert v.certificate.homogeneity_ok(), "certificate cofactors have the wrong degrees"
    bad = list(c)
    bad[0] = format_poly(parse(bad[0], 4, QQ) + Poly.var(ring(4), "a0", QQ) ** 4)
    assert not verify_identity(t, 1, g, bad), "verifier accepted a corrupted cofactor"
    return "m=4 certificate verified, corrupted copy rejected"


def check_cache_corruption() -> str:
    fam = family(4)
    gens = tuple(fam.generators(1))
    with tempfile.TemporaryDirectory() as tmp:
        cache = Cache(tmp)
        G = buchberger(IdealPresentation(gens), track=True)
        cache.store_basis(4, 1, G)
        assert cache.load_basis(4, 1, gens) is not None, "fresh entry rejected"
        path = cache.path(basis_key(4, 1))
        text = path.read_text()
        path.write_text(text.replace("a1*a2", "a1*a3", 1))
        assert cache.load_basis(4, 1, gens) is None, "corrupted entry accepted"
        assert not path.exists(), "corrupted entry left behind"
        G2 = buchberger(IdealPresentation(gens), track=True)
        cache.store_basis(4, 1, G2)
        again = cache.load_basis(4, 1, gens)
        assert again is not None and again.basis == G.basis, "recomputed entry differs"
        path.write_text("{not json")
        assert cache.load_basis(4, 1, gens) is None, "unreadable entry accepted"
    return "corrupted and unreadable entries detected and replaced"


def suites(seed: int | None = None) -> list[tuple[str, Callable[[], str]]]:
    rng = random.Random(session_seed(seed))
    return [
        ("ring axioms", lambda: check_ring_axioms(rng)),
        ("normal forms and S-pair closure", lambda: check_groebner(rng)),
        ("determinant oracle agreement", lambda: check_determinants(rng)),
        ("symmetry signs m<=6", check_symmetry_signs),
        ("slice dimensions", check_slice_dimensions),
        ("certificate soundness", check_certificates),
        ("cache corruption", check_cache_corruption),
    ]


def run_selftest(seed: int | None = None, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in suites(seed):
        t0 = time.monotonic()
        try:
            detail, ok = fn(), True
        except AssertionError as exc:
            detail, ok = str(exc) or "assertion failed", False
        except Exception as exc:  # a crash in a suite is a failure, not an abort
            detail, ok = f"{type(exc).__name__}: {exc}", False
        res = CheckResult(name, ok, detail, round(time.monotonic() - t0, 2))
        results.append(res)
        if echo:
            echo(f"{'PASS' if ok else 'FAIL'}  {name}: {detail} ({res.seconds}s)")
    return results
