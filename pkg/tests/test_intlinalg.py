import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formalis.intlinalg import (
    IntMatrix,
    is_prime,
    kernel_basis,
    kernel_basis_mod,
    l_local_torsion,
    rank,
    rank_mod,
    smith_normal_form,
    solve_exact,
    solve_mod,
)


# ---- independent oracles (no calls into the Smith engine) ----------


def fraction_rank(m: IntMatrix) -> int:
    a = [[Fraction(e) for e in m.row(i)] for i in range(m.rows)]
    r = 0
    for j in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][j]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][j]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def fraction_det(m: IntMatrix) -> Fraction:
    assert m.rows == m.cols
    a = [[Fraction(e) for e in m.row(i)] for i in range(m.rows)]
    det = Fraction(1)
    for j in range(m.cols):
        p = next((i for i in range(j, m.rows) if a[i][j]), None)
        if p is None:
            return Fraction(0)
        if p != j:
            a[j], a[p] = a[p], a[j]
            det = -det
        det *= a[j][j]
        inv = 1 / a[j][j]
        a[j] = [x * inv for x in a[j]]
        for i in range(j + 1, m.rows):
            if a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[j])]
    return det


def random_matrix(rng: random.Random, max_dim: int = 8, span: int = 9) -> IntMatrix:
    r = rng.randint(1, max_dim)
    c = rng.randint(1, max_dim)
    return IntMatrix(r, c, [rng.randint(-span, span) for _ in range(r * c)])


def check_smith_invariants(m: IntMatrix):
    snf = smith_normal_form(m)
    # divisibility chain
    for a, b in zip(snf.diagonal, snf.diagonal[1:]):
        assert a >= 1 and b % a == 0
    # witnesses reconstruct the diagonal form exactly
    assert snf.left_transform @ m @ snf.right_transform == snf.diagonal_matrix()
    # witnesses are unimodular
    assert abs(fraction_det(snf.left_transform)) == 1
    assert abs(fraction_det(snf.right_transform)) == 1


# ---- smith_normal_form ----------------------------------------------


def test_snf_identity_3x3():
    assert smith_normal_form(IntMatrix.identity(3)).diagonal == (1, 1, 1)


def test_snf_zero_2x2():
    assert smith_normal_form(IntMatrix.zero(2, 2)).diagonal == ()


def test_snf_diag_2_3():
    m = IntMatrix.from_rows([[2, 0], [0, 3]])
    snf = smith_normal_form(m)
    # oracle for the 2x2 diagonal case: gcd and det/gcd
    import math

    g = math.gcd(2, 3)
    assert snf.diagonal == (g, 6 // g) == (1, 6)
    check_smith_invariants(m)


def test_snf_empty_matrix():
    m = IntMatrix(0, 3, [])
    assert smith_normal_form(m).diagonal == ()
    m = IntMatrix(3, 0, [])
    assert smith_normal_form(m).diagonal == ()


def test_snf_deterministic():
    m = IntMatrix.from_rows([[6, 4, 2], [4, 8, 0], [2, 0, 10]])
    a = smith_normal_form(m)
    b = smith_normal_form(m)
    assert a == b
    check_smith_invariants(m)


# ---- kernel_basis ----------------------------------------------------


def test_kernel_identity_empty():
    assert kernel_basis(IntMatrix.identity(2)) == ()


def test_kernel_zero_standard_basis():
    basis = kernel_basis(IntMatrix.zero(2, 2))
    assert sorted(basis) == [(0, 1), (1, 0)]


def test_kernel_saturated_2_4():
    m = IntMatrix.from_rows([[2, 4]])
    basis = kernel_basis(m)
    assert basis == ((2, -1),)
    # brute-force enumeration confirms saturation: every small integer
    # kernel vector is an integer multiple of the basis vector
    for a in range(-6, 7):
        for b in range(-6, 7):
            if 2 * a + 4 * b == 0 and (a, b) != (0, 0):
                assert a % 2 == 0 and a // 2 == -b


def test_kernel_vectors_annihilate_and_saturate():
    rng = random.Random(7)
    for _ in range(60):
        m = random_matrix(rng, max_dim=5, span=6)
        basis = kernel_basis(m)
        assert len(basis) == m.cols - rank(m)
        for v in basis:
            assert all(e == 0 for e in m.apply(v))
        if basis:
            stacked = IntMatrix.from_columns(basis, m.cols)
            divisors = smith_normal_form(stacked).diagonal
            assert all(d == 1 for d in divisors)


# ---- l_local_torsion -------------------------------------------------


def test_l_local_torsion_examples():
    m = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert l_local_torsion(m, 5) is False
    assert l_local_torsion(m, 3) is True
    assert l_local_torsion(m, 2) is True
    for l in (2, 3, 5, 7):
        assert l_local_torsion(IntMatrix.identity(3), l) is False


def test_l_local_torsion_rejects_composite():
    with pytest.raises(ValueError):
        l_local_torsion(IntMatrix.identity(2), 6)


# ---- solving ----------------------------------------------------------


def test_solve_exact_roundtrip():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 5)
        k = rng.randint(1, n)
        a = IntMatrix(n, k, [rng.randint(-4, 4) for _ in range(n * k)])
        if rank(a) < k:
            continue
        x = IntMatrix(k, 2, [rng.randint(-4, 4) for _ in range(2 * k)])
        b = a @ x
        assert solve_exact(a, b) == x


def test_solve_exact_detects_nonintegral():
    a = IntMatrix.from_rows([[2]])
    b = IntMatrix.from_rows([[3]])
    with pytest.raises(ValueError):
        solve_exact(a, b)


def test_solve_mod():
    a = IntMatrix.from_rows([[2, 1], [0, 3]])
    b = IntMatrix.from_rows([[1], [1]])
    for l in (5, 7, 11):
        x = solve_mod(a, b, l)
        assert (a @ x).eq_mod(b, l)


# ---- mod-l reinterpretations ------------------------------------------


def test_rank_mod_matches_brute_force():
    rng = random.Random(3)
    for _ in range(40):
        m = random_matrix(rng, max_dim=4, span=5)
        for l in (2, 3, 5):
            # brute force: Gaussian elimination over F_l
            a = [[e % l for e in m.row(i)] for i in range(m.rows)]
            r = 0
            for j in range(m.cols):
                p = next((i for i in range(r, m.rows) if a[i][j] % l), None)
                if p is None:
                    continue
                a[r], a[p] = a[p], a[r]
                inv = pow(a[r][j], -1, l)
                a[r] = [(x * inv) % l for x in a[r]]
                for i in range(m.rows):
                    if i != r and a[i][j]:
                        c = a[i][j]
                        a[i] = [(x - c * y) % l for x, y in zip(a[i], a[r])]
                r += 1
            assert rank_mod(m, l) == r


def test_kernel_basis_mod():
    m = IntMatrix.from_rows([[2]])
    assert kernel_basis_mod(m, 2) == ((1,),)
    assert kernel_basis_mod(m, 3) == ()
    rng = random.Random(5)
    for _ in range(30):
        mm = random_matrix(rng, max_dim=4, span=5)
        for l in (2, 3):
            basis = kernel_basis_mod(mm, l)
            assert len(basis) == mm.cols - rank_mod(mm, l)
            for v in basis:
                assert all(e % l == 0 for e in mm.apply(v))
            # mod-l independence
            if basis:
                stacked = IntMatrix.from_columns(basis, mm.cols)
                assert rank_mod(stacked, l) == len(basis)


# ---- rank vs rational elimination (module invariant) -------------------


def test_rank_matches_rational_elimination():
    rng = random.Random(17)
    for _ in range(80):
        m = random_matrix(rng, max_dim=8, span=9)
        assert rank(m) == fraction_rank(m)


# ---- hypothesis property: SNF invariants on arbitrary small matrices ---


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_snf_invariants_property(r, c, data):
    entries = data.draw(
        st.lists(st.integers(-30, 30), min_size=r * c, max_size=r * c)
    )
    m = IntMatrix(r, c, entries)
    check_smith_invariants(m)
    assert rank(m) == fraction_rank(m)


# ---- primality ----------------------------------------------------------


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in primes)
    assert is_prime(2**31 - 1)
    assert not is_prime(2**31)
