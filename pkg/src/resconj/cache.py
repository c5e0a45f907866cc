"""Content-addressed on-disk cache for Groebner bases.

Entries are advisory: every hit is re-checked (transformation rows,
generator reduction, S-pair closure) before use, and anything that fails
the check is deleted and recomputed.  Writes go through a temporary file
and an atomic rename so concurrent writers cannot leave a torn entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .groebner import GroebnerBasis, normal_form, s_pairs_closed
from .poly import GREVLEX, QQ, MonomialOrder, Poly, PolyError, format_poly, parse, ring

CACHE_ENV = "RESCONJ_CACHE_DIR"
SCHEMA = 1


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "resconj"


def key_digest(key: tuple) -> str:
    text = json.dumps(list(key), separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def basis_key(m: int, i: int, order: MonomialOrder = GREVLEX, domain: str = "QQ") -> tuple:
    return ("groebner", m, i, order.kind, domain, __version__)


class Cache:
    def __init__(self, root: str | Path | None = None, enabled: bool = True):
        self.root = Path(root) if root else cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.rejected = 0

    def path(self, key: tuple) -> Path:
        return self.root / f"{key_digest(key)}.json"

    def read(self, key: tuple) -> dict | None:
        if not self.enabled:
            return None
        p = self.path(key)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            self.discard(key)
            return None
        if not isinstance(data, dict) or data.get("key") != list(key):
            self.discard(key)
            return None
        return data

    def write(self, key: tuple, payload: dict) -> None:
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        body = dict(payload, key=list(key), schema=SCHEMA)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(body, fh)
            os.replace(tmp, self.path(key))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def discard(self, key: tuple) -> None:
        self.rejected += 1
        self.path(key).unlink(missing_ok=True)

    # -- Groebner bases ----------------------------------------------------

    def store_basis(self, m: int, i: int, G: GroebnerBasis) -> None:
        if G.rows is None:
            raise ValueError("only bases with transformation rows are cached")
        fmt = lambda f: format_poly(f)
        self.write(
            basis_key(m, i, G.ring.order),
            {
                "m": m,
                "i": i,
                "generators": [fmt(g) for g in G.generators],
                "basis": [fmt(b) for b in G.basis],
                "rows": [[fmt(c) for c in r] for r in G.rows],
                "truncated_at": G.truncated_at,
                "stats": G.stats,
            },
        )

    def load_basis(self, m: int, i: int, generators: tuple[Poly, ...], order: MonomialOrder = GREVLEX) -> GroebnerBasis | None:
        """A cached basis of <generators>, or None if absent or failing its checks."""
        key = basis_key(m, i, order)
        data = self.read(key)
        if data is None:
            return None
        try:
            G = _decode(data, generators, order)
        except (PolyError, ValueError, KeyError, TypeError):
            G = None
        if G is None or not verify_basis(G):
            self.discard(key)
            return None
        self.hits += 1
        return G


def _decode(data: dict, generators: tuple[Poly, ...], order: MonomialOrder) -> GroebnerBasis | None:
    R = ring(generators[0].ring.m, order)
    gens = tuple(g.reorder(R) for g in generators)
    if [format_poly(g) for g in gens] != data["generators"]:
        return None
    basis = tuple(parse(t, R, QQ) for t in data["basis"])
    rows = tuple(tuple(parse(t, R, QQ) for t in r) for r in data["rows"])
    if len(rows) != len(basis) or any(len(r) != len(gens) for r in rows):
        return None
    t = data["truncated_at"]
    return GroebnerBasis(R, QQ, gens, basis, rows, None if t is None else int(t), dict(data.get("stats", {})))


def verify_basis(G: GroebnerBasis) -> bool:
    """Rows reproduce the basis, generators reduce to zero, S-pairs close (within the truncation)."""
    if not G.basis or G.rows is None:
        return False
    for b, row in zip(G.basis, G.rows):
        acc = Poly.zero(G.ring, QQ)
        for c, g in zip(row, G.generators):
            if not c.is_zero:
                acc = acc + c * g.to_domain(QQ)
        if acc != b or b.leading_coefficient() != 1:
            return False
    for g in G.generators:
        if (G.truncated_at is None or g.degree() <= G.truncated_at) and not normal_form(g, G)[0].is_zero:
            return False
    return s_pairs_closed(G)
