from itertools import combinations

import pytest

from formalis.coxeter import CoxeterSystem, parse_parabolic


def subword_oracle(sys: CoxeterSystem, w: int, x: int) -> bool:
    """Brute-force Bruhat test: x <= w iff some subword of a reduced word
    of w is a reduced expression of x."""
    word = sys.word(w)
    lx = sys.length(x)
    for picks in combinations(range(len(word)), lx):
        cand = sys.element_from_word([word[i] for i in picks])
        if cand == x and sys.length(cand) == lx:
            return True
    return lx == 0 and x == sys.identity


def test_sizes_and_longest_lengths():
    for args, size, top in (
        (("A", 2), 6, 3),
        (("A", 3), 24, 6),
        (("B", 2), 8, 4),
        (("G", 2), 12, 6),
        (("D", 4), 192, 12),
    ):
        sys = CoxeterSystem.from_type(*args)
        assert sys.size == size
        assert sys.length(sys.longest_element()) == top


def test_shortlex_words_are_reduced():
    sys = CoxeterSystem.from_type("B", 2)
    for w in sys.elements():
        assert len(sys.word(w)) == sys.length(w)
        assert sys.element_from_word(sys.word(w)) == w


def test_element_from_tokens():
    sys = CoxeterSystem.from_type("A", 3)
    w = sys.element_from_word("s2 s1 s3 s2")
    assert sys.length(w) == 4
    assert sys.element_from_word("") == sys.identity
    with pytest.raises(ValueError):
        sys.element_from_word("t1")


def test_multiply_and_inverse():
    sys = CoxeterSystem.from_type("A", 3)
    for a in list(sys.elements())[:12]:
        assert sys.multiply(a, sys.inverse(a)) == sys.identity
        for b in list(sys.elements())[:12]:
            word = sys.word(a) + sys.word(b)
            assert sys.multiply(a, b) == sys.element_from_word(word)


def test_bruhat_identity_and_reflexive():
    sys = CoxeterSystem.from_type("A", 2)
    for w in sys.elements():
        assert sys.bruhat_leq(w, sys.identity)
        assert sys.bruhat_leq(w, w)


def test_bruhat_s3_examples():
    sys = CoxeterSystem.from_type("A", 2)
    s1 = sys.element_from_word("s1")
    s1s2 = sys.element_from_word("s1 s2")
    s2s1 = sys.element_from_word("s2 s1")
    assert sys.bruhat_leq(s1s2, s1)
    assert not sys.bruhat_leq(s1s2, s2s1)


def test_bruhat_matches_subword_oracle_exhaustively():
    for args in (("A", 2), ("A", 3), ("B", 2), ("G", 2)):
        sys = CoxeterSystem.from_type(*args)
        for w in sys.elements():
            for x in sys.elements():
                assert sys.bruhat_leq(w, x) == subword_oracle(sys, w, x), (
                    args, sys.word_str(w), sys.word_str(x),
                )


def test_matrix_model_matches_permutation_model_for_type_a():
    perm = CoxeterSystem.from_type("A", 3)
    mat = CoxeterSystem.from_matrix(
        [[1, 3, 2], [3, 1, 3], [2, 3, 1]]
    )
    assert mat.size == perm.size == 24
    by_len = lambda s: sorted(
        (s.length(w) for w in s.elements())
    )
    assert by_len(mat) == by_len(perm)


def test_product_system():
    a = CoxeterSystem.from_type("A", 2)
    b = CoxeterSystem.from_type("B", 2)
    prod = CoxeterSystem.product(a, b)
    assert prod.size == a.size * b.size
    # cross generators commute
    g = prod.element_from_word([0, a.rank])
    h = prod.element_from_word([a.rank, 0])
    assert g == h


def test_minimal_representatives_gr24():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    reps = sys.minimal_representatives(j)
    assert len(reps) == 6
    assert sorted(sys.length(w) for w in reps) == [0, 1, 2, 2, 3, 4]


def test_coset_minimal():
    sys = CoxeterSystem.from_type("A", 3)
    j = parse_parabolic("s1 s3", sys.rank)
    for w in sys.elements():
        m = sys.coset_minimal(w, j)
        assert sys.is_minimal_in_coset(m, j)


def test_size_cap():
    with pytest.raises(ValueError):
        # affine triangle group: all bonds 3 on rank 3 is infinite
        CoxeterSystem.from_matrix([[1, 3, 3], [3, 1, 3], [3, 3, 1]])


def test_rejects_bad_bond_orders():
    with pytest.raises(ValueError):
        CoxeterSystem.from_matrix([[1, 5], [5, 1]])


def test_json_round_trip():
    sys = CoxeterSystem.from_json({"type": "B", "rank": 2})
    assert sys.size == 8
    again = CoxeterSystem.from_json(sys.to_json())
    assert again.coxeter_matrix == sys.coxeter_matrix
