from __future__ import annotations

import random
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resconj.budget import Budget, Exhausted
from resconj.certify import verify_identity
from resconj.coefficients import family
from resconj.groebner import (
    IdealPresentation,
    buchberger,
    current_basis,
    heuristic_kappa,
    is_member,
    is_radical_member,
    minimal_kappa,
    normal_form,
    s_pairs_closed,
)
from resconj.modular import random_primes
from resconj.poly import GF, LEX, QQ, Poly, parse, reduce_mod_p, ring
from resconj.selftest import random_poly


def P(text: str, m: int = 4) -> Poly:
    return parse(text, m)


def ideal(m: int, i: int) -> IdealPresentation:
    return IdealPresentation(tuple(family(m).generators(i)))


def expand_rows(G) -> None:
    for b, row in zip(G.basis, G.rows):
        acc = Poly.zero(G.ring, QQ)
        for c, g in zip(row, G.generators):
            acc = acc + c * g.to_domain(QQ).reorder(G.ring)
        assert acc == b


def is_reduced(G) -> bool:
    R = G.ring
    lms = G.leading_keys()
    for x, b in enumerate(G.basis):
        if b.leading_coefficient() != 1:
            return False
        for k in b.terms_dict:
            if any(R.divides(l, k) for y, l in enumerate(lms) if y != x):
                return False
    return True


def test_single_generator():
    G = buchberger(IdealPresentation((P("a0"),)))
    assert G.basis == (P("a0").to_domain(QQ),)


def test_coprime_generators():
    G = buchberger(IdealPresentation((P("a0"), P("a1"))))
    assert set(G.basis) == {P("a0").to_domain(QQ), P("a1").to_domain(QQ)}
    assert G.stats["pairs_processed"] == 0


def test_basis_of_first_two_determinants():
    G = buchberger(ideal(4, 1), track=True)
    assert G.truncated_at is None
    assert s_pairs_closed(G)
    assert is_reduced(G)
    expand_rows(G)


@pytest.mark.parametrize("i", range(4))
def test_bases_m4(i):
    G = buchberger(ideal(4, i), track=True)
    assert s_pairs_closed(G) and is_reduced(G)
    expand_rows(G)
    if i == 3:
        assert G.is_unit


def test_truncated_bases_extend_without_restarting():
    I = ideal(5, 2)
    G6 = buchberger(I, track=True, degree_bound=6)
    assert G6.truncated_at == 6
    n6 = G6.stats["pairs_processed"]
    G9 = buchberger(I, track=True, degree_bound=9)
    assert G9.truncated_at in (9, None)  # None: no pairs left at any degree
    assert G9.stats["pairs_processed"] >= n6
    assert s_pairs_closed(G9)
    expand_rows(G9)
    assert current_basis(I).truncated_at == G9.truncated_at


def test_interrupted_engine_resumes_to_same_basis():
    fresh = buchberger(ideal(5, 2), track=True)
    I = ideal(5, 2)
    stops, cap = 0, 2
    while True:
        try:
            G = buchberger(I, track=True, budget=Budget(max_pairs=cap))
            break
        except Exhausted:
            stops += 1
            cap += 3
    assert stops > 1
    assert G.basis == fresh.basis and G.truncated_at is None
    expand_rows(G)


def test_lex_order_basis():
    I = IdealPresentation(tuple(family(4).generators(1)), order=LEX)
    G = buchberger(I, track=True)
    assert G.ring.order == LEX
    assert s_pairs_closed(G)
    expand_rows(G)


def test_nonhomogeneous_rejects_truncation_silently_completes():
    I = IdealPresentation((P("a0^2 - a1"), P("a0*a1 - 1")))
    G = buchberger(I, degree_bound=2)
    assert G.truncated_at is None
    assert s_pairs_closed(G)


def test_prime_field_basis_is_monic():
    I = IdealPresentation(tuple(g.to_domain(GF(101)) for g in family(4).generators(1)), domain=GF(101))
    G = buchberger(I)
    assert all(b.leading_coefficient() == 1 for b in G.basis)
    assert s_pairs_closed(G)


# -- normal forms -------------------------------------------------------------


def test_normal_form_examples():
    fam = family(4)
    G0 = buchberger(ideal(4, 0))
    assert normal_form(fam.D[0], G0)[0].is_zero
    G = buchberger(ideal(4, 1))
    assert normal_form(fam.H[1, 2] ** 2, G)[0].is_zero
    assert not normal_form(fam.H[1, 2], G)[0].is_zero


def test_remainder_is_irreducible_and_division_identity_holds():
    G = buchberger(ideal(4, 1))
    rng = random.Random(3)
    for _ in range(10):
        f = random_poly(rng, 4, 20).to_domain(QQ)
        rem, cof = normal_form(f, G)
        for k in rem.terms_dict:
            assert not any(G.ring.divides(l, k) for l in G.leading_keys())
        back = rem
        for c, b in zip(cof, G.basis):
            back = back + c * b
        assert back == f


@given(st.integers(0, 10**6), st.fractions(max_denominator=7), st.fractions(max_denominator=7))
def test_normal_form_linear_and_idempotent(seed, al, be):
    G = buchberger(ideal(4, 1))
    rng = random.Random(seed)
    f = random_poly(rng, 4, 15).to_domain(QQ)
    g = random_poly(rng, 4, 15).to_domain(QQ)
    nf = lambda p: normal_form(p, G)[0]
    assert nf(f.scale(al) + g.scale(be)) == nf(f).scale(al) + nf(g).scale(be)
    assert nf(nf(f)) == nf(f)


def test_modular_consistency():
    G = buchberger(ideal(4, 1))
    fam = family(4)
    targets = [fam.H[1, 2] ** 2, fam.H[1, 0], fam.D[0] * P("a2 + a3")]
    for p in random_primes(3):
        Ip = IdealPresentation(tuple(g.to_domain(GF(p)) for g in fam.generators(1)), domain=GF(p))
        Gp = buchberger(Ip)
        for f in targets:
            if normal_form(f, G)[0].is_zero:
                assert normal_form(reduce_mod_p(f, p), Gp)[0].is_zero


# -- membership ------------------------------------------------------------------


def test_is_member_squared_target():
    fam = family(4)
    v = is_member(fam.H[1, 2] ** 2, ideal(4, 1), certificate=True)
    assert v.member and v.certified
    cert = v.certificate
    assert cert.verified and cert.homogeneity_ok()
    t, g, c = cert.texts()
    assert verify_identity(t, 1, g, c)


def test_unit_not_in_proper_ideal():
    v = is_member(Poly.const(ring(4), 1), ideal(4, 0))
    assert v.member is False and v.certified


def test_multiple_of_generator():
    d = family(5).D[0]
    a0 = parse("a0", 5)
    v = is_member(d * a0, IdealPresentation((d,)), certificate=True)
    assert v.member
    assert v.certificate.cofactors == [a0.to_domain(QQ)]


def test_prefilter_can_skip_exact_negative():
    v = is_member(family(4).H[1, 2], ideal(4, 1), certify_negative=False)
    assert v.member is False and not v.certified and v.modular_evidence


def test_negative_is_certified_by_default():
    v = is_member(family(4).H[1, 2], ideal(4, 1))
    assert v.member is False and v.certified


def test_budget_exhaustion_is_a_verdict():
    v = is_member(family(6).H[2, 2] ** 3, ideal(6, 2), budget=Budget(max_pairs=1), prefilter=False)
    assert v.member is None and v.exhausted


def test_radical_membership():
    a0, a1 = P("a0"), P("a1")
    assert is_radical_member(a0, IdealPresentation((a0**2,)))
    assert not is_radical_member(a0, IdealPresentation((a1,)))
    assert is_radical_member(family(4).H[1, 2], ideal(4, 1))


def test_radical_rejects_y():
    with pytest.raises(ValueError):
        is_radical_member(P("y"), IdealPresentation((P("a0"),)))


def test_minimal_kappa_squared_target():
    v = minimal_kappa(family(4).H[1, 2], ideal(4, 1), 4)
    assert (v.status, v.kappa, v.refuted) == ("kappa", 2, [1])
    assert v.certificate.verified and v.certificate.kappa == 2


@pytest.mark.parametrize("m", [4, 5])
def test_minimal_kappa_sides(m):
    fam = family(m)
    for i in range(m):
        I = ideal(m, i)
        for j in {0, m - i}:
            v = minimal_kappa(fam.H[i, j], I, 1)
            assert (v.status, v.kappa) == ("kappa", 1), (m, i, j)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_unit_ideal_gives_kappa_one(m):
    fam = family(m)
    I = ideal(m, m - 1)
    for j in range(2):
        assert minimal_kappa(fam.H[m - 1, j], I, 1).kappa == 1


def test_not_in_radical():
    v = minimal_kappa(P("a0"), IdealPresentation((P("a1"),)), 3)
    assert v.status == "not_in_radical"


def test_kappa_search_without_radical_test_records_refutations():
    v = minimal_kappa(P("a0"), IdealPresentation((P("a1"),)), 3, radical_first=False)
    assert v.status == "exhausted" and v.refuted == [1, 2, 3]


def test_undecided_radical_test_falls_through_to_search(monkeypatch):
    from resconj import groebner

    def give_up(f, I, budget=None):
        raise Exhausted("time budget of 0s exceeded")

    monkeypatch.setattr(groebner, "is_radical_member", give_up)
    v = minimal_kappa(family(4).H[1, 2], ideal(4, 1), 4, budget=Budget(seconds=60))
    assert (v.status, v.kappa) == ("kappa", 2)
    assert "radical test undecided" in v.note


def test_budget_share():
    b = Budget(seconds=100, max_pairs=7)
    s = b.share(0.25)
    assert s.seconds <= 25 and s.max_pairs == 7
    assert Budget().share(0.5).seconds is None


def test_minimal_kappa_rejects_bad_bound():
    with pytest.raises(ValueError):
        minimal_kappa(P("a0"), IdealPresentation((P("a1"),)), 0)


def test_heuristic_kappa_matches_certified():
    v = heuristic_kappa(family(5).H[2, 1], ideal(5, 2), 4)
    assert v.status == "heuristic" and v.kappa == 3


def test_random_primes_are_reproducible():
    assert random_primes(3, seed=7) == random_primes(3, seed=7)
    ps = random_primes(3, seed=7)
    assert len(set(ps)) == 3 and all(2**30 <= p < 2**31 for p in ps)
