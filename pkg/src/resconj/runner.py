"""Orchestration: per-cell kappa searches, the kappa table, dumps and the m=4 identity."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .budget import Budget
from .cache import Cache
from .certify import MembershipCertificate, verify_certificate_file, verify_identity
from .coefficients import check_symmetry, family
from .data import C1_CLAIMED_TERMS, C1_TERMS_AFTER_A3_ZERO, C2_CLAIMED_TERMS, KAPPA_LOWER_BOUNDS, c1, c2, published_kappa
from .groebner import IdealPresentation, current_basis, heuristic_kappa, minimal_kappa
from .macaulay import minimal_kappa_homogeneous
from .matrix import build_M, build_Mt
from .poly import LEX, Poly, a_var, format_poly, substitute

SCHEMA = 1

KAPPA = "kappa"
NOT_IN_RADICAL = "not_in_radical"
EXHAUSTED = "exhausted"
HEURISTIC = "heuristic_only"
DISAGREEMENT = "disagreement"

EXIT_OK = 0
EXIT_HEURISTIC = 10
EXIT_OPEN = 20
EXIT_INTERNAL = 1
EXIT_CHECK_FAILED = 3

ENGINES = ("groebner", "macaulay", "both")


@dataclass
class ConjectureReport:
    m: int
    i: int
    j: int
    engines: list[str]
    verdict: str
    kappa: int | None = None
    lower_bound: int | None = None
    certificate: str | None = None
    certificate_verified: bool = False
    refuted: list[int] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    primes: list[int] = field(default_factory=list)
    cache_hits: int = 0
    orientation: str = ""
    modular_evidence: bool = False
    note: str = ""

    def to_json(self) -> dict:
        return dict(asdict(self), schema=SCHEMA, version=__version__)

    @property
    def closed(self) -> bool:
        return self.verdict in (KAPPA, NOT_IN_RADICAL)

    def invariant_ok(self) -> bool:
        """kappa verdicts carry a verified certificate and a refutation one step below."""
        if self.verdict == KAPPA:
            if not self.certificate_verified:
                return False
            return self.kappa == 1 or (self.kappa - 1) in self.refuted
        if self.verdict == HEURISTIC:
            return self.modular_evidence
        return True


def exit_code(reports: Iterable[ConjectureReport]) -> int:
    reports = list(reports)
    if any(r.verdict == DISAGREEMENT or not r.invariant_ok() for r in reports):
        return EXIT_INTERNAL
    if any(r.verdict == EXHAUSTED for r in reports):
        return EXIT_OPEN
    if any(r.verdict == HEURISTIC for r in reports):
        return EXIT_HEURISTIC
    return EXIT_OK


# ---------------------------------------------------------------------------
# one cell


_IDEALS: dict[tuple[int, int], IdealPresentation] = {}


def ideal(m: int, i: int) -> IdealPresentation:
    """<D(m,0), ..., D(m,i)>, shared within a process so completions are reused across j."""
    I = _IDEALS.get((m, i))
    if I is None:
        I = _IDEALS[m, i] = IdealPresentation(tuple(family(m).generators(i)))
    return I


def _check_cell(m: int, i: int, j: int | None) -> None:
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if not 0 <= i <= m - 1:
        raise ValueError(f"i must lie in [0, {m - 1}] for m={m}, got {i}")
    if j is not None and not 0 <= j <= m - i:
        raise ValueError(f"j must lie in [0, {m - i}] for m={m}, i={i}, got {j}")


def _save_certificate(cert: MembershipCertificate, m: int, i: int, j: int, orientation: str, engine: str, cert_dir: Path) -> tuple[str, bool]:
    cert.m, cert.i, cert.j, cert.orientation = m, i, j, orientation
    cert.engine = engine
    cert.verify()
    cert_dir.mkdir(parents=True, exist_ok=True)
    path = cert_dir / f"m{m}_i{i}_j{j}_{engine}.json"
    cert.save(path)
    ok, _ = verify_certificate_file(path)
    return str(path), ok and cert.verified


def run_cell(
    m: int,
    i: int,
    j: int,
    kappa_max: int = 8,
    engine: str = "groebner",
    primes: Sequence[int] | None = None,
    heuristic: bool = False,
    budget_seconds: float | None = None,
    cache: Cache | None = None,
    cert_dir: str | Path | None = None,
) -> ConjectureReport:
    """Minimal kappa for H_ij(m) against <D(m,0..i)> with the chosen engine(s)."""
    _check_cell(m, i, j)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    fam = family(m)
    f = fam.H[i, j]
    cache = cache or Cache(enabled=False)
    cert_dir = Path(cert_dir) if cert_dir else cache.root / "certificates"
    report = ConjectureReport(m, i, j, [], EXHAUSTED, orientation=fam.orientation, primes=list(primes or []))

    if heuristic:
        t0 = time.monotonic()
        v = heuristic_kappa(f, ideal(m, i), kappa_max, primes, Budget(budget_seconds))
        report.engines = [v.engine]
        report.timings["groebner-modular"] = round(time.monotonic() - t0, 3)
        if v.status == "heuristic":
            report.verdict, report.kappa, report.modular_evidence = HEURISTIC, v.kappa, True
        report.note = v.note
        return report

    results = {}
    if engine in ("groebner", "both"):
        I = ideal(m, i)
        hits_before = cache.hits
        basis = cache.load_basis(m, i, I.generators) if cache.enabled else None
        t0 = time.monotonic()
        v = minimal_kappa(f, I, kappa_max, certificate=True, budget=Budget(budget_seconds), basis=basis, primes=primes)
        report.timings["groebner"] = round(time.monotonic() - t0, 3)
        report.cache_hits += cache.hits - hits_before
        results["groebner"] = v
        G = current_basis(I)
        if cache.enabled and G is not None and (basis is None or _deeper(G, basis)):
            cache.store_basis(m, i, G)
    if engine in ("macaulay", "both"):
        t0 = time.monotonic()
        v = minimal_kappa_homogeneous(f, list(fam.generators(i)), kappa_max, certificate=True, budget=Budget(budget_seconds))
        report.timings["macaulay"] = round(time.monotonic() - t0, 3)
        results["macaulay"] = v
    report.engines = list(results)

    statuses = {name: (v.status, v.kappa) for name, v in results.items()}
    decided = {name: s for name, s in statuses.items() if s[0] in ("kappa", "not_in_radical")}
    if len(set(decided.values())) > 1:
        report.verdict = DISAGREEMENT
        report.note = f"engines disagree: {statuses}"
        return report
    refuted = sorted({k for v in results.values() for k in v.refuted})
    report.refuted = refuted
    notes = [f"{name}: {v.note}" for name, v in results.items() if v.note]
    report.note = "; ".join(notes)
    if decided:
        name = next(iter(decided))
        status, kappa = decided[name]
        if status == "not_in_radical":
            report.verdict = NOT_IN_RADICAL
            return report
        report.verdict, report.kappa = KAPPA, kappa
        paths, oks = [], []
        for nm, v in results.items():
            if v.status == "kappa" and v.certificate is not None:
                p, ok = _save_certificate(v.certificate, m, i, j, fam.orientation, nm, cert_dir)
                paths.append(p)
                oks.append(ok)
        report.certificate = paths[0] if paths else None
        report.certificate_verified = bool(oks) and all(oks)
        return report
    report.verdict = EXHAUSTED
    report.lower_bound = (max(refuted) + 1) if refuted else None
    return report


def _deeper(G, old) -> bool:
    if old.truncated_at is None:
        return False
    return G.truncated_at is None or G.truncated_at > old.truncated_at


def _run_cell_args(args: tuple) -> ConjectureReport:
    m, i, j, kw = args
    cache_root, cache_on = kw.pop("cache_spec")
    return run_cell(m, i, j, cache=Cache(cache_root, cache_on), **kw)


def run_cells(cells: Sequence[tuple[int, int, int]], jobs: int = 1, cache: Cache | None = None, **kw) -> list[ConjectureReport]:
    """Run cells in order (jobs=1) or spread over worker processes; output order follows ``cells``."""
    cache = cache or Cache(enabled=False)
    for m, i, j in cells:
        _check_cell(m, i, j)
    if jobs <= 1 or len(cells) <= 1:
        return [run_cell(m, i, j, cache=cache, **kw) for m, i, j in cells]
    tasks = [(m, i, j, dict(kw, cache_spec=(str(cache.root), cache.enabled))) for m, i, j in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_cell_args, tasks))


def default_jobs() -> int:
    return os.cpu_count() or 1


def cmd_kappa(m: int, i: int, j: int | None = None, jobs: int = 1, cache: Cache | None = None, **kw) -> list[ConjectureReport]:
    _check_cell(m, i, j)
    js = [j] if j is not None else list(range(m - i + 1))
    return run_cells([(m, i, jj) for jj in js], jobs=jobs, cache=cache, **kw)


# ---------------------------------------------------------------------------
# table


@dataclass
class TableRow:
    m: int
    i: int
    kappa: int | None
    status: str  # "certified" | "open" | "heuristic"
    per_j: dict[int, int | None]
    lower_bound: int | None
    published: int | str | None
    matches_published: bool | None
    j_independent: bool | None
    note: str = ""

    def kappa_text(self) -> str:
        if self.status == "certified":
            return str(self.kappa)
        if self.status == "heuristic":
            return f"{self.kappa} (heuristic)"
        return f"open (>= {self.lower_bound})" if self.lower_bound else "open"


def _published_text(m: int, i: int) -> int | str | None:
    p = published_kappa(m, i)
    if p is None and (m, i) in KAPPA_LOWER_BOUNDS:
        return f"? (>= {KAPPA_LOWER_BOUNDS[m, i]})"
    if p is None and (m, i) in ((7, 4),):
        return "?"
    return p


def table_cells(ms: Iterable[int]) -> list[tuple[int, int, int]]:
    """Interior cells (0 < j < m-i) for 1 <= i <= m-2."""
    return [(m, i, j) for m in ms for i in range(1, m - 1) for j in range(1, m - i)]


def summarize(reports: Sequence[ConjectureReport]) -> list[TableRow]:
    rows: list[TableRow] = []
    by_mi: dict[tuple[int, int], list[ConjectureReport]] = {}
    for r in reports:
        by_mi.setdefault((r.m, r.i), []).append(r)
    for (m, i), rs in sorted(by_mi.items()):
        per_j = {r.j: r.kappa for r in rs}
        if all(r.verdict == KAPPA for r in rs):
            status = "certified"
        elif all(r.verdict in (KAPPA, HEURISTIC) for r in rs):
            status = "heuristic"
        else:
            status = "open"
        values = {r.kappa for r in rs if r.kappa is not None}
        lower = None
        if status == "open":
            bounds = [r.kappa if r.kappa is not None else (r.lower_bound or 1) for r in rs]
            lower = min(bounds)
        j_indep = None if status == "open" else len(values) == 1
        kappa = values.pop() if len(values) == 1 and status != "open" else None
        pub = _published_text(m, i)
        match = None
        if isinstance(pub, int) and kappa is not None:
            match = pub == kappa
        note = ""
        if j_indep is False:
            note = "COUNTEREXAMPLE to j-independence of kappa: interior cells differ " + str(per_j)
        elif i == 1 and kappa is not None and kappa != 2:
            note = f"COUNTEREXAMPLE to kappa = 2 for i = 1 (found {kappa})"
        rows.append(TableRow(m, i, kappa, status, per_j, lower, pub, match, j_indep, note))
    return rows


def cmd_table(ms: Iterable[int], jobs: int = 1, cache: Cache | None = None, **kw) -> tuple[list[TableRow], list[ConjectureReport]]:
    reports = run_cells(table_cells(ms), jobs=jobs, cache=cache, **kw)
    return summarize(reports), reports


def format_table(rows: Sequence[TableRow]) -> str:
    out = [f"{'m':>2} {'i':>2}  {'kappa':<18} {'published':<12} per-j"]
    for r in rows:
        pub = "" if r.published is None else str(r.published)
        per = " ".join(f"{j}:{'?' if k is None else k}" for j, k in sorted(r.per_j.items()))
        line = f"{r.m:>2} {r.i:>2}  {r.kappa_text():<18} {pub:<12} {per}"
        if r.matches_published is False:
            line += "  DIFFERS FROM PUBLISHED"
        if r.note:
            line += "  " + r.note
        out.append(line)
    return "\n".join(out)


# ---------------------------------------------------------------------------
# dump


def cmd_dump(m: int) -> dict:
    if not 2 <= m <= 9:
        raise ValueError(f"dump supports 2 <= m <= 9, got {m}")
    fam = family(m)
    fmt = lambda f: format_poly(f, LEX)
    H = {f"{i},{j}": fmt(h) for (i, j), h in sorted(fam.H.items())}
    sym = {f"{i},{j}": check_symmetry(m, i, j, fam) for (i, j) in sorted(fam.H)}
    return {
        "schema": SCHEMA,
        "m": m,
        "M": build_M(m).to_text(),
        "Mt": build_Mt(m).to_text(),
        "D": [fmt(d) for d in fam.D],
        "H": H,
        "orientation": fam.orientation,
        "orientation_note": (
            "H_ij is the coefficient of t^(m-i-j) T^(m-i) in det(I - Mt*T)"
            if fam.orientation == "reflected"
            else "H_ij is the coefficient of t^j T^(m-i) in det(I - Mt*T)"
        ),
        "symmetry_signs": sym,
        "triangle": [[f"{i},{j}" for i, j in row] for row in fam.triangle()],
    }


def format_dump(d: dict) -> str:
    m = d["m"]
    lines = [f"m = {m}", "", f"M({m}):"]
    lines += ["  [" + ", ".join(r) + "]" for r in d["M"]]
    lines += ["", f"Mt({m}):"]
    lines += ["  [" + ", ".join(r) + "]" for r in d["Mt"]]
    lines.append("")
    lines += [f"D({m},{i}) = {t}" for i, t in enumerate(d["D"])]
    lines += ["", f"orientation: {d['orientation']} ({d['orientation_note']})"]
    for key, t in d["H"].items():
        sign = d["symmetry_signs"][key]
        s = "none" if sign is None else f"{sign:+d}"
        lines.append(f"H_{{{key}}} = {t}    [symmetry sign {s}]")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# the m = 4 identity


@dataclass
class Clause:
    name: str
    ok: bool
    detail: str
    gating: bool = True


def _identity_rhs(C1: Poly, C2: Poly, sign: int) -> Poly:
    fam = family(4)
    a3 = a_var(C1.ring, 3)
    return (C1 + sign * a3 * C2) * fam.D[1] - C2 * fam.D[0]


def cmd_verify_result12(C1: Poly | None = None, C2: Poly | None = None, engines: bool = True) -> list[Clause]:
    """Check the printed m=4 identity and its term-count claims; one Clause per check."""
    C1 = c1() if C1 is None else C1
    C2 = c2() if C2 is None else C2
    fam = family(4)
    H12 = fam.H[1, 2]
    clauses = []

    printed = _identity_rhs(C1, C2, +1)
    holds = printed == H12**2
    others = [f"H_{{1,{j}}}" for j in range(4) if printed == fam.H[1, j] ** 2]
    clauses.append(Clause(
        "a: H_12^2 = (C1 + a3*C2)*D(4,1) - C2*D(4,0)",
        holds,
        "holds" if holds else "fails; " + ("holds instead for " + ", ".join(others) if others else "no H_1j of either orientation satisfies it"),
    ))
    n1, n2 = len(C1), len(C2)
    clauses.append(Clause("a: C1 has the stated 20 terms", n1 == C1_CLAIMED_TERMS, f"C1 has {n1} terms"))
    clauses.append(Clause("a: C2 has 8 terms", n2 == C2_CLAIMED_TERMS, f"C2 has {n2} terms"))

    corrected = _identity_rhs(C1, C2, -1)
    fits = [f"H_{{1,{j}}}" for j in range(4) if corrected == fam.H[1, j] ** 2]
    clauses.append(Clause(
        "a': H_1j^2 = (C1 - a3*C2)*D(4,1) - C2*D(4,0) for some j (sign-corrected reading)",
        bool(fits),
        ("holds for " + ", ".join(fits) + f" ({fam.orientation} orientation)") if fits else "fails",
        gating=False,
    ))

    free = "a3" not in C2.variables()
    clauses.append(Clause("b: C2 does not contain a3", free, "a3-free" if free else "a3 occurs in C2"))
    spec = substitute(C1, {"a3": 0})
    clauses.append(Clause(
        "c: C1 has 4 terms after a3 -> 0",
        len(spec) == C1_TERMS_AFTER_A3_ZERO,
        f"{len(spec)} terms: {format_poly(spec, LEX)}",
    ))

    if engines:
        from .groebner import is_member
        from .macaulay import homogeneous_member

        gens = list(fam.generators(1))
        target = H12**2
        vg = is_member(target, IdealPresentation(tuple(gens)), certificate=True)
        vm = homogeneous_member(target, gens)
        for name, v in (("groebner", vg), ("macaulay", vm)):
            cert = v.certificate
            ok = bool(v.member and cert is not None and verify_identity(*_cert_texts(cert)))
            clauses.append(Clause(f"d: {name} derives a verified certificate for H_12^2", ok, "verified" if ok else "no verified certificate"))

    # the checker must reject a perturbed cofactor
    flipped = dict(C1.terms_dict)
    k0 = next(iter(sorted(flipped)))
    flipped[k0] = -flipped[k0]
    C1f = Poly(C1.ring, C1.domain, flipped)
    rejects = all(_identity_rhs(C1f, C2, s) != fam.H[1, j] ** 2 for s in (1, -1) for j in range(4))
    clauses.append(Clause("mutation: one flipped sign in C1 is rejected", rejects, "rejected" if rejects else "accepted a mutated C1"))
    return clauses


def _cert_texts(cert: MembershipCertificate) -> tuple[str, int, list[str], list[str]]:
    t, g, c = cert.texts()
    return t, cert.kappa, g, c


def result12_ok(clauses: Sequence[Clause]) -> bool:
    return all(c.ok for c in clauses if c.gating)
