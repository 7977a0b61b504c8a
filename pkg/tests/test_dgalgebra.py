import pytest

from formalis.bigraded import NotPureError, cohomology
from formalis.constructions import (
    acyclic_augmentation,
    contractible_pair,
    exterior_generator,
    tensor_algebra,
    trivial_algebra,
    truncated_polynomial,
)
from formalis.dgalgebra import (
    DggAlgebra,
    algebra_from_dict,
    algebra_to_dict,
    check_dgg_axioms,
    s_subalgebra,
    verify_formality_roof,
)
from formalis.intlinalg import IntMatrix

from gens import random_pure_algebra


# -- axiom checker -------------------------------------------------------


def test_axioms_truncated_polynomial():
    assert check_dgg_axioms(truncated_polynomial("x", (1, 1), 3)).ok


def test_axioms_exterior_generator():
    # the four products 1*1, 1*y, y*1, y*y all check out by hand
    assert check_dgg_axioms(exterior_generator("y", (1, 1))).ok


def test_axioms_degree_violation_witness():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 1): ("x",)},
        {},
        {
            ("1", "1"): {"1": 1},
            ("1", "x"): {"x": 1},
            ("x", "1"): {"x": 1},
            ("x", "x"): {"x": 2},  # lands at (1,1) instead of (2,2)
        },
        "1",
    )
    report = check_dgg_axioms(a)
    assert not report.ok
    assert any(v.witness == ("x", "x") for v in report.by_rule("degree-additivity"))


def test_axioms_leibniz_violation():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 0): ("y",), (1, 1): ("z",),
         (2, 0): ("w",), (2, 1): ("v",)},
        {(1, 0): IntMatrix.from_rows([[1]]),
         (2, 0): IntMatrix.from_rows([[1]])},
        {
            ("1", "1"): {"1": 1},
            ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1},
            ("1", "z"): {"z": 1}, ("z", "1"): {"z": 1},
            ("1", "w"): {"w": 1}, ("w", "1"): {"w": 1},
            ("1", "v"): {"v": 1}, ("v", "1"): {"v": 1},
            ("y", "y"): {"w": 1},  # d(w) = v but d(y)y - y d(y) = 0
        },
        "1",
    )
    report = check_dgg_axioms(a)
    assert any(v.witness == ("y", "y") for v in report.by_rule("leibniz"))


def test_axioms_unit_violation():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 1): ("x",)},
        {},
        {("1", "1"): {"1": 1}, ("1", "x"): {"x": 2}, ("x", "1"): {"x": 1}},
        "1",
    )
    report = check_dgg_axioms(a)
    assert report.by_rule("unit-left")


# -- diagonal subalgebra ---------------------------------------------------


def test_s_subalgebra_of_diagonal_algebra_is_identity():
    a = truncated_polynomial("x", (1, 1), 4)
    s = s_subalgebra(a)
    assert s.module.components == a.module.components
    assert s.product == a.product
    assert s.unit == a.unit


def test_s_subalgebra_strictly_smaller_and_closed():
    # unit, one diagonal class g, one contractible pair leaving the diagonal
    a = tensor_algebra(exterior_generator("g", (1, 1)), contractible_pair(2))
    assert a.total_dimension() == 6
    s = s_subalgebra(a)
    assert s.total_dimension() < a.total_dimension()
    assert check_dgg_axioms(s).ok


def test_s_subalgebra_drops_contractible_pair():
    a = contractible_pair(1)
    s = s_subalgebra(a)
    assert s.total_dimension() == 1
    assert s.module.components == {(0, 0): 1}


def test_s_subalgebra_rejects_impure():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 0): ("y",)},
        {},
        {("1", "1"): {"1": 1}, ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}},
        "1",
    )
    with pytest.raises(NotPureError):
        s_subalgebra(a)


def test_s_subalgebra_unit_survives_proper_kernel():
    # second basis vector of the (0,0) component is killed by d, so the
    # kernel there is a proper sublattice containing the unit
    a = DggAlgebra.build(
        {(0, 0): ("1", "a"), (0, 1): ("b",)},
        {(0, 0): IntMatrix.from_rows([[0, 1]])},
        {
            ("1", "1"): {"1": 1},
            ("1", "a"): {"a": 1}, ("a", "1"): {"a": 1},
            ("1", "b"): {"b": 1}, ("b", "1"): {"b": 1},
        },
        "1",
    )
    assert check_dgg_axioms(a).ok
    s = s_subalgebra(a)
    assert s.module.components == {(0, 0): 1}
    assert s.unit == "1"
    assert s.multiply({"1": 1}, {"1": 1}) == {"1": 1}


# -- formality roof ----------------------------------------------------------


def assert_certified(a: DggAlgebra):
    report = verify_formality_roof(a)
    assert report.pure
    assert report.inclusion_certificate.ok and report.inclusion_multiplicative
    assert report.certified, report.notes
    return report


def test_roof_trivial_algebra():
    report = assert_certified(trivial_algebra())
    assert report.h_algebra is not None


def test_roof_diagonal_identity_maps():
    report = assert_certified(truncated_polynomial("x", (1, 1), 3))
    # inclusion of a diagonal algebra is the identity
    for bd, block in report.inclusion.blocks.items():
        assert block == IntMatrix.identity(report.s_algebra.module.rank_at(bd))


def test_roof_acyclic_augmentation():
    report = assert_certified(acyclic_augmentation(1))
    assert report.h_table.bidegrees() == [(0, 0)]


def test_roof_mixed_six_dimensional():
    a = tensor_algebra(
        exterior_generator("g", (1, 1)),
        tensor_algebra(truncated_polynomial("x", (1, 1), 2), contractible_pair(2)),
    )
    report = assert_certified(a)
    assert report.projection_certificate is not None


def test_roof_h_algebra_products_match_truncated_polynomial():
    report = assert_certified(truncated_polynomial("x", (1, 1), 3))
    h = report.h_algebra
    assert h is not None
    assert h.module.components == {(0, 0): 1, (1, 1): 1, (2, 2): 1}
    x1 = h.basis_at((1, 1))[0]
    x2 = h.basis_at((2, 2))[0]
    assert h.multiply({x1: 1}, {x1: 1}) in ({x2: 1}, {x2: -1})


def test_roof_not_pure_below_diagonal_projection_fails():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 0): ("y",)},
        {},
        {("1", "1"): {"1": 1}, ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}},
        "1",
    )
    report = verify_formality_roof(a)
    assert not report.pure and not report.certified
    # the truncation keeps everything below the diagonal, so the
    # inclusion happens to be a quasi-isomorphism and is reported as such
    assert report.inclusion_certificate.ok
    assert report.projection_certificate is not None
    assert not report.projection_certificate.ok


def test_roof_not_pure_above_diagonal_inclusion_fails():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (0, 1): ("y",)},
        {},
        {("1", "1"): {"1": 1}, ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1}},
        "1",
    )
    report = verify_formality_roof(a)
    assert not report.pure
    assert not report.inclusion_certificate.ok


def test_roof_with_integer_torsion_certified_at_table_level():
    a = DggAlgebra.build(
        {(0, 0): ("1",), (1, 0): ("y",), (1, 1): ("z",)},
        {(1, 0): IntMatrix.from_rows([[2]])},
        {
            ("1", "1"): {"1": 1},
            ("1", "y"): {"y": 1}, ("y", "1"): {"y": 1},
            ("1", "z"): {"z": 1}, ("z", "1"): {"z": 1},
        },
        "1",
    )
    assert check_dgg_axioms(a).ok
    report = verify_formality_roof(a)
    assert report.pure and not report.h_torsion_free
    assert report.h_algebra is None and report.projection is None
    assert report.h_tables_match and report.certified


def test_roof_field_mode():
    assert_certified(truncated_polynomial("x", (1, 1), 3, mode="Fl", l=3))
    assert_certified(acyclic_augmentation(1, mode="Fl", l=2))


def test_roof_random_pure_algebras():
    for seed in range(25):
        a = random_pure_algebra(seed)
        report = assert_certified(a)
        assert cohomology(report.s_algebra.module) == report.h_table


# -- JSON -------------------------------------------------------------------


def test_algebra_json_round_trip():
    a = tensor_algebra(exterior_generator("g", (1, 1)), acyclic_augmentation(1))
    data = algebra_to_dict(a)
    back = algebra_from_dict(data)
    assert back.module.components == a.module.components
    assert back.product == a.product
    assert back.unit == a.unit
    assert algebra_to_dict(back) == data
