import random

import pytest

from formalis.coxeter import CoxeterSystem, parse_parabolic
from formalis.kl import (
    CuratedParity,
    UNKNOWN_PARITY_MESSAGE,
    bgs_parity_verdict,
    curated_parity,
    full_stalk_table,
    graded_multiplicity,
    kl_polynomial,
    kl_polynomial_via_r,
    load_parity_table,
    parabolic_stalk_table,
    r_polynomial,
)
from formalis.qpoly import QPoly


def test_kl_diagonal_is_one():
    sys = CoxeterSystem.from_type("A", 3)
    for w in list(sys.elements())[::5]:
        assert kl_polynomial(sys, w, w) == QPoly.one()


def test_kl_all_trivial_in_s3():
    sys = CoxeterSystem.from_type("A", 2)
    for w in sys.elements():
        for x in sys.elements():
            p = kl_polynomial(sys, x, w)
            if sys.bruhat_leq(w, x):
                assert p == QPoly.one()
            else:
                assert p.is_zero()


def test_kl_famous_pair_in_s4():
    sys = CoxeterSystem.from_type("A", 3)
    w = sys.element_from_word("s2 s1 s3 s2")
    x = sys.element_from_word("s2")
    assert str(kl_polynomial(sys, x, w)) == "1+q"
    assert str(kl_polynomial_via_r(sys, x, w)) == "1+q"
    e = sys.identity
    assert str(kl_polynomial(sys, e, w)) == "1+q"


def test_r_polynomial_basics():
    sys = CoxeterSystem.from_type("A", 2)
    s1 = sys.element_from_word("s1")
    w0 = sys.longest_element()
    assert r_polynomial(sys, s1, s1) == QPoly.one()
    # R_{x,w} has degree l(w) - l(x) and constant term (-1)^(l(w)-l(x))
    r = r_polynomial(sys, s1, w0)
    assert r.degree == sys.length(w0) - 1
    assert r.coeff(0) == (-1) ** (sys.length(w0) - 1)


def test_recursion_agrees_with_inversion_s3_s4():
    for rank in (2, 3):
        sys = CoxeterSystem.from_type("A", rank)
        for w in sys.elements():
            for x in sys.elements():
                assert kl_polynomial(sys, x, w) == kl_polynomial_via_r(sys, x, w)


def test_recursion_agrees_with_inversion_b2_g2():
    for args in (("B", 2), ("G", 2)):
        sys = CoxeterSystem.from_type(*args)
        for w in sys.elements():
            for x in sys.elements():
                assert kl_polynomial(sys, x, w) == kl_polynomial_via_r(sys, x, w)


def test_degree_bound_and_constant_term_s4():
    sys = CoxeterSystem.from_type("A", 3)
    for w in sys.elements():
        for x in sys.elements():
            p = kl_polynomial(sys, x, w)
            if not sys.bruhat_leq(w, x):
                assert p.is_zero()
                continue
            assert p.coeff(0) == 1
            if x != w:
                assert p.degree <= (sys.length(w) - sys.length(x) - 1) // 2


def test_vanishing_matches_bruhat():
    sys = CoxeterSystem.from_type("B", 2)
    for w in sys.elements():
        for x in sys.elements():
            assert kl_polynomial(sys, x, w).is_zero() == (
                not sys.bruhat_leq(w, x)
            )


# -- stalk tables ---------------------------------------------------------


def test_stalk_table_open_stratum():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    lam = sys.coset_minimal(sys.longest_element(), j)
    rows = parabolic_stalk_table(sys, j, lam, lam)
    assert rows == (
        __import__("formalis.kl", fromlist=["StalkEntry"]).StalkEntry(
            degree=-sys.length(lam), rank=1, weight_exponent=0
        ),
    )


def test_stalk_table_gr24_singular_pair():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    reps = sys.minimal_representatives(j)
    lam3 = next(w for w in reps if sys.length(w) == 3)
    e = sys.identity
    assert str(graded_multiplicity(sys, j, lam3, e)) == "1+q"
    rows = parabolic_stalk_table(sys, j, lam3, e)
    assert [(r.degree, r.rank, r.weight_exponent) for r in rows] == [
        (-3, 1, 0), (-1, 1, 1),
    ]
    # the top cell is the whole smooth quotient: every stalk has rank one
    top = next(w for w in reps if sys.length(w) == 4)
    for mu in reps:
        rows = parabolic_stalk_table(sys, j, top, mu)
        assert [r.rank for r in rows] == [1]


def test_stalk_table_full_flag_sl3():
    sys = CoxeterSystem.from_type("A", 2)
    table = full_stalk_table(sys, frozenset())
    for (lam, mu), rows in table.items():
        assert len(rows) == 1 and rows[0].rank == 1
        assert rows[0].degree == -sys.length(lam)
        assert rows[0].weight_exponent == 0


def test_stalk_table_projective_plane_smooth():
    sys = CoxeterSystem.from_type("A", 2)
    j = parse_parabolic("s2", sys.rank)
    reps = sys.minimal_representatives(j)
    assert len(reps) == 3
    for lam in reps:
        for mu in reps:
            for r in parabolic_stalk_table(sys, j, lam, mu):
                assert r.rank == 1 and r.weight_exponent == 0


def test_stalk_rejects_non_minimal():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    with pytest.raises(ValueError):
        parabolic_stalk_table(sys, j, sys.element_from_word("s1"), sys.identity)


def test_stalk_degrees_single_parity_and_exponent_arithmetic():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    for (lam, _mu), rows in full_stalk_table(sys, j).items():
        d = sys.length(lam)
        for r in rows:
            assert (r.degree + d) % 2 == 0
            assert r.weight_exponent == (r.degree + d) // 2


def test_multiplicity_product_rule_sample():
    a = CoxeterSystem.from_type("A", 2)
    b = CoxeterSystem.from_type("A", 3)
    prod = CoxeterSystem.product(a, b)
    rng = random.Random(7)
    for _ in range(10):
        wa, xa = rng.randrange(a.size), rng.randrange(a.size)
        wb, xb = rng.randrange(b.size), rng.randrange(b.size)
        pa = graded_multiplicity(a, frozenset(), wa, xa)
        pb = graded_multiplicity(b, frozenset(), wb, xb)
        wp = prod.element_from_word(
            a.word(wa) + tuple(g + a.rank for g in b.word(wb))
        )
        xp = prod.element_from_word(
            a.word(xa) + tuple(g + a.rank for g in b.word(xb))
        )
        assert graded_multiplicity(prod, frozenset(), wp, xp) == pa * pb


# -- curated parity ----------------------------------------------------------


def test_parity_table_loads_and_lookup():
    rows = load_parity_table()
    assert any(r.cartan_type == "A" and r.rank == 7 for r in rows)
    a7 = curated_parity("A", 7)
    assert a7 is not None and not a7.holds_at(2) and a7.holds_at(3)
    assert curated_parity("B", 2).excluded_primes == frozenset({2})
    assert curated_parity("E", 8) is None


def test_parity_table_env_override(tmp_path, monkeypatch):
    alt = tmp_path / "parity.json"
    alt.write_text(
        '[{"cartanType":"A","rank":1,"excludedPrimes":[13],"source":"paper-table"}]'
    )
    monkeypatch.setenv("FORMALIS_PARITY_TABLE", str(alt))
    rows = load_parity_table()
    assert len(rows) == 1 and rows[0].excluded_primes == frozenset({13})


def test_bgs_parity_verdict_grassmannian_any_l():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    table = full_stalk_table(sys, j)
    gr_row = CuratedParity("A", 3, frozenset(), "paper-table")
    for l in (2, 3, 5, 7, 11):
        verdict = bgs_parity_verdict(table, l, gr_row)
        assert verdict.status == "parity-true" and verdict.holds


def test_bgs_parity_verdict_a7_excludes_two():
    sys = CoxeterSystem.from_type("A", 2)  # any even table will do
    table = full_stalk_table(sys, frozenset())
    a7 = curated_parity("A", 7)
    assert bgs_parity_verdict(table, 2, a7).status == "parity-false"
    assert bgs_parity_verdict(table, 3, a7).status == "parity-true"


def test_bgs_parity_verdict_b2_at_three():
    sys = CoxeterSystem.from_type("B", 2)
    table = full_stalk_table(sys, frozenset())
    b2 = curated_parity("B", 2)
    assert bgs_parity_verdict(table, 3, b2).status == "parity-true"
    assert bgs_parity_verdict(table, 2, b2).status == "parity-false"


def test_bgs_parity_verdict_unknown_without_curated_row():
    sys = CoxeterSystem.from_type("A", 2)
    table = full_stalk_table(sys, frozenset())
    verdict = bgs_parity_verdict(table, 5, None)
    assert verdict.status == "unknown"
    assert verdict.detail == UNKNOWN_PARITY_MESSAGE
    assert verdict.holds is None
