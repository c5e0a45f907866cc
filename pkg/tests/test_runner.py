from __future__ import annotations

import json

import pytest

from resconj.cache import Cache
from resconj.certify import verify_certificate_file
from resconj.data import c1, c2
from resconj.poly import Poly
from resconj.runner import (
    DISAGREEMENT,
    EXHAUSTED,
    EXIT_HEURISTIC,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_OPEN,
    HEURISTIC,
    KAPPA,
    ConjectureReport,
    cmd_dump,
    cmd_kappa,
    cmd_table,
    cmd_verify_result12,
    exit_code,
    format_table,
    result12_ok,
    run_cell,
    summarize,
    table_cells,
)


# -- dump -----------------------------------------------------------------------


def test_dump_m4_contains_first_determinant():
    d = cmd_dump(4)
    assert d["D"][0] == "-a0*a3^2 - a1^2*a4 + a1*a2*a3"
    assert d["orientation"] == "reflected"
    assert len(d["H"]) == 15 and set(d["symmetry_signs"].values()) <= {1, -1}
    json.dumps(d)


def test_dump_m2():
    d = cmd_dump(2)
    assert d["M"] == [["a1"]]
    assert len(d["D"]) == 2


def test_dump_m5_matrix_pattern():
    assert cmd_dump(5)["M"] == [
        ["a1", "a3", "a5", "0"],
        ["a0", "a2", "a4", "0"],
        ["0", "a1", "a3", "a5"],
        ["0", "a0", "a2", "a4"],
    ]


@pytest.mark.parametrize("m", [1, 10])
def test_dump_range_guard(m):
    with pytest.raises(ValueError):
        cmd_dump(m)


# -- kappa ------------------------------------------------------------------------


def test_kappa_m4_i1(tmp_path):
    reports = cmd_kappa(4, 1, cert_dir=tmp_path)
    assert [(r.j, r.verdict, r.kappa) for r in reports] == [(0, KAPPA, 1), (1, KAPPA, 2), (2, KAPPA, 2), (3, KAPPA, 1)]
    for r in reports:
        assert r.invariant_ok()
        assert verify_certificate_file(r.certificate)[0]
    assert exit_code(reports) == EXIT_OK


@pytest.mark.parametrize("m", [3, 4, 5])
def test_kappa_unit_row(m, tmp_path):
    reports = cmd_kappa(m, m - 1, cert_dir=tmp_path)
    assert len(reports) == 2
    assert all(r.kappa == 1 for r in reports)


def test_kappa_both_engines_agree(tmp_path):
    r = run_cell(4, 1, 2, engine="both", cert_dir=tmp_path)
    assert r.engines == ["groebner", "macaulay"] and r.kappa == 2 and r.refuted == [1]
    assert {p.name for p in tmp_path.iterdir()} == {"m4_i1_j2_groebner.json", "m4_i1_j2_macaulay.json"}


def test_kappa_m5_i2(tmp_path):
    reports = cmd_kappa(5, 2, kappa_max=4, cert_dir=tmp_path)
    assert [r.kappa for r in reports] == [1, 3, 3, 1]


def test_kappa_bad_cells_rejected():
    with pytest.raises(ValueError):
        cmd_kappa(4, 4)
    with pytest.raises(ValueError):
        cmd_kappa(4, 1, 4)
    with pytest.raises(ValueError):
        run_cell(4, 1, 1, engine="magic")


def test_small_kappa_max_leaves_cell_open_with_lower_bound(tmp_path):
    r = run_cell(5, 2, 1, kappa_max=2, cert_dir=tmp_path)
    assert r.verdict == EXHAUSTED and r.lower_bound == 3 and r.refuted == [1, 2]
    assert exit_code([r]) == EXIT_OPEN


def test_heuristic_mode(tmp_path):
    r = run_cell(4, 1, 1, heuristic=True, cert_dir=tmp_path)
    assert r.verdict == HEURISTIC and r.kappa == 2 and r.modular_evidence
    assert r.certificate is None
    assert exit_code([r]) == EXIT_HEURISTIC


def test_report_json_is_versioned(tmp_path):
    r = run_cell(4, 1, 0, cert_dir=tmp_path)
    data = r.to_json()
    assert data["schema"] == 1 and data["verdict"] == KAPPA
    json.dumps(data)


def test_exit_code_classes():
    ok = ConjectureReport(4, 1, 0, ["groebner"], KAPPA, kappa=1, certificate_verified=True)
    bad = ConjectureReport(4, 1, 1, ["groebner"], KAPPA, kappa=2, certificate_verified=True)  # no refutation at 1
    dis = ConjectureReport(4, 1, 1, ["groebner", "macaulay"], DISAGREEMENT)
    heur_no_flag = ConjectureReport(4, 1, 1, ["groebner-modular"], HEURISTIC, kappa=2)
    assert exit_code([ok]) == EXIT_OK
    assert exit_code([ok, bad]) == EXIT_INTERNAL
    assert exit_code([ok, dis]) == EXIT_INTERNAL
    assert exit_code([heur_no_flag]) == EXIT_INTERNAL


def test_cache_does_not_change_verdicts(tmp_path):
    strip = lambda rs: [(r.j, r.verdict, r.kappa, r.refuted) for r in rs]
    off = cmd_kappa(5, 1, cache=Cache(tmp_path / "c", enabled=False), cert_dir=tmp_path / "a")
    c = Cache(tmp_path / "c")
    first = cmd_kappa(5, 1, cache=c, cert_dir=tmp_path / "b")
    from resconj import runner

    runner._IDEALS.clear()  # force the cached basis to be read back
    c2_ = Cache(tmp_path / "c")
    second = cmd_kappa(5, 1, cache=c2_, cert_dir=tmp_path / "b")
    assert strip(off) == strip(first) == strip(second)
    assert sum(r.cache_hits for r in second) >= 1


def test_corrupted_cache_entry_is_recomputed(tmp_path):
    from resconj import runner

    c = Cache(tmp_path / "c")
    cmd_kappa(4, 1, cache=c, cert_dir=tmp_path)
    for p in (tmp_path / "c").glob("*.json"):
        p.write_text(p.read_text().replace("a1", "a2", 3))
    runner._IDEALS.clear()
    c = Cache(tmp_path / "c")
    reports = cmd_kappa(4, 1, cache=c, cert_dir=tmp_path)
    assert [r.kappa for r in reports] == [1, 2, 2, 1]
    assert c.rejected >= 1


def test_parallel_jobs_match_serial(tmp_path):
    serial = cmd_kappa(4, 1, jobs=1, cert_dir=tmp_path / "s")
    par = cmd_kappa(4, 1, jobs=2, cert_dir=tmp_path / "p")
    assert [(r.j, r.kappa) for r in serial] == [(r.j, r.kappa) for r in par]


# -- table ------------------------------------------------------------------------


def test_table_cells_are_interior():
    assert table_cells([4]) == [(4, 1, 1), (4, 1, 2), (4, 2, 1)]


def test_table_m4_to_5(tmp_path):
    rows, reports = cmd_table(range(4, 6), kappa_max=4, cert_dir=tmp_path)
    got = {(r.m, r.i): r.kappa for r in rows}
    assert got == {(4, 1): 2, (4, 2): 1, (5, 1): 2, (5, 2): 3, (5, 3): 1}
    assert all(r.status == "certified" and r.j_independent for r in rows)
    assert all(r.matches_published is not False for r in rows)
    assert not any(r.note for r in rows)
    text = format_table(rows)
    assert "DIFFERS" not in text and "COUNTEREXAMPLE" not in text


def test_open_cell_under_small_budget(tmp_path):
    reports = [run_cell(7, 3, j, budget_seconds=1.0, cert_dir=tmp_path) for j in (1, 2, 3)]
    rows = summarize(reports)
    assert len(rows) == 1
    row = rows[0]
    assert row.status == "open" and row.kappa is None
    assert row.kappa_text().startswith("open (>= ")
    assert row.published == "? (>= 6)"


def test_counterexample_is_flagged_not_raised():
    mk = lambda j, k: ConjectureReport(6, 2, j, ["groebner"], KAPPA, kappa=k, refuted=list(range(1, k)), certificate_verified=True)
    (row,) = summarize([mk(1, 4), mk(2, 3), mk(3, 4)])
    assert row.j_independent is False and "COUNTEREXAMPLE" in row.note


# -- verify-result12 --------------------------------------------------------------


def clause(clauses, prefix):
    (c,) = [c for c in clauses if c.name.startswith(prefix)]
    return c


def test_identity_clauses():
    clauses = cmd_verify_result12()
    assert not clause(clauses, "a: H_12^2").ok
    assert not clause(clauses, "a: C1 has").ok
    assert clause(clauses, "a: C2 has").ok
    assert clause(clauses, "a'").ok and not clause(clauses, "a'").gating
    assert "H_{1,1}" in clause(clauses, "a'").detail
    assert clause(clauses, "b:").ok
    c = clause(clauses, "c:")
    assert c.ok and c.detail.startswith("4 terms")
    assert clause(clauses, "d: groebner").ok and clause(clauses, "d: macaulay").ok
    assert clause(clauses, "mutation").ok
    assert not result12_ok(clauses)


def test_identity_mutation_fails_clause_a():
    C1 = c1()
    terms = dict(C1.terms_dict)
    k = next(iter(sorted(terms)))
    terms[k] = -terms[k]
    clauses = cmd_verify_result12(Poly(C1.ring, C1.domain, terms), c2(), engines=False)
    assert not clause(clauses, "a: H_12^2").ok
    assert not clause(clauses, "a'").ok
