import json

import pytest

from formalis.cli import main
from formalis.constructions import truncated_polynomial
from formalis.dgalgebra import algebra_to_dict


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_snf_inline_matrix(capsys):
    code, report = run_cli(capsys, "snf", "--matrix", "[[2,0],[0,3]]")
    assert code == 0
    assert report["diagonal"] == [1, 6]
    assert report["rank"] == 2


def test_snf_malformed_matrix_exit_two(capsys):
    code, report = run_cli(capsys, "snf", "--matrix", "[[2,0],[0")
    assert code == 2
    assert report["error"]["type"] == "malformed-input"


def test_cohomology_and_purity_files(tmp_path, capsys):
    module = {
        "components": [{"i": 0, "j": 0, "rank": 1}, {"i": 0, "j": 1, "rank": 1}],
        "differentials": [{"i": 0, "j": 0, "matrix": [[2]]}],
        "mode": "Z",
    }
    path = tmp_path / "module.json"
    path.write_text(json.dumps(module))
    code, report = run_cli(capsys, "cohomology", "--in", str(path))
    assert code == 0
    assert report["cohomology"] == [
        {"i": 0, "j": 1, "freeRank": 0, "torsionDivisors": [2]}
    ]
    # this module is pure, but of weight -1
    code, report = run_cli(capsys, "purity", "--in", str(path))
    assert code == 0
    assert report["pure"] is True and report["weight"] == -1

    mixed = {
        "components": [{"i": 0, "j": 0, "rank": 1}, {"i": 2, "j": 1, "rank": 1}],
        "differentials": [],
        "mode": "Z",
    }
    path2 = tmp_path / "mixed.json"
    path2.write_text(json.dumps(mixed))
    code, report = run_cli(capsys, "purity", "--in", str(path2))
    assert code == 0
    assert report["pure"] is False and report["weight"] is None
    assert report["offDiagonal"] == [{"i": 2, "j": 1, "weight": 1}]


def test_truncate_rejects_impure_with_exit_one(tmp_path, capsys):
    module = {
        "components": [{"i": 0, "j": 0, "rank": 1}, {"i": 0, "j": 1, "rank": 1}],
        "differentials": [{"i": 0, "j": 0, "matrix": [[2]]}],
        "mode": "Z",
    }
    path = tmp_path / "module.json"
    path.write_text(json.dumps(module))
    code, report = run_cli(capsys, "truncate", "--in", str(path))
    assert code == 1
    assert report["error"]["type"] == "NotPureError"


def test_roof_on_diagonal_algebra(tmp_path, capsys):
    alg = truncated_polynomial("x", (1, 1), 3)
    path = tmp_path / "algebra.json"
    path.write_text(json.dumps(algebra_to_dict(alg)))
    code, report = run_cli(capsys, "roof", "--in", str(path))
    assert code == 0
    assert report["pure"] is True
    assert report["inclusionQuasiIso"] is True
    assert report["projectionQuasiIso"] is True
    assert report["certified"] is True


def test_kl_command(capsys):
    code, report = run_cli(
        capsys, "kl", "--type", "A", "--rank", "3", "--x", "s2",
        "--w", "s2 s1 s3 s2",
    )
    assert code == 0
    assert report == "1+q"


def test_stalks_command(capsys):
    code, report = run_cli(
        capsys, "stalks", "--type", "A", "--rank", "3", "--parabolic", "s1 s3",
        "--lam", "s2 s1 s3", "--mu", "",
    )
    assert code == 0
    assert report["rows"] == [
        {"degree": -3, "rank": 1, "weightExponent": 0},
        {"degree": -1, "rank": 1, "weightExponent": 1},
    ]


def test_stalks_rejects_non_minimal(capsys):
    code, report = run_cli(
        capsys, "stalks", "--type", "A", "--rank", "3", "--parabolic", "s1 s3",
        "--lam", "s1", "--mu", "",
    )
    assert code == 1


def test_wt_command(capsys):
    code, report = run_cli(
        capsys, "wt", "--space", "grassmannian", "--k", "2", "--n", "4",
        "--group", "borel",
    )
    assert code == 0
    assert report["wt"] == [0, 1, 2, 3, 4, 5, 6] and report["wr"] == 7


def test_separated_command(capsys):
    code, report = run_cli(
        capsys, "separated", "--exponents", "0,1,2,3,4,5,6", "--q", "2", "--l", "11",
    )
    assert code == 0
    assert report["separated"] is True and report["lExceedsWr"] is True


def test_verdict_command_matches_spec_example(capsys):
    code, report = run_cli(
        capsys, "verdict", "--space", "grassmannian", "--k", "2", "--n", "4",
        "--group", "borel", "--l", "11", "--q", "2",
    )
    assert code == 0
    assert report["applicable"] == "yes"
    assert report["wt"] == [0, 1, 2, 3, 4, 5, 6]
    assert report["wr"] == 7


def test_verdict_from_spec_file(tmp_path, capsys):
    spec = {
        "space": {"kind": "fullflag", "type": "A", "rank": 7},
        "group": {"kind": "borel", "type": "A", "rank": 7},
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, report = run_cli(
        capsys, "verdict", "--in", str(path), "--l", "2", "--q", "3"
    )
    assert code == 0
    assert report["applicable"] == "no"


def test_table_command_deterministic(capsys):
    code1, report1 = run_cli(capsys, "table")
    code2, report2 = run_cli(capsys, "table")
    assert code1 == code2 == 0
    assert report1 == report2
    ids = [r["id"] for r in report1["rows"]]
    assert "flag-A7" in ids and "grassmannian-borel" in ids


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["snf", "--matrix", "[[1]]", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["diagonal"] == [1]
