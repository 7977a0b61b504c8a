"""Command-line front end.

Each subcommand maps to one library operation and writes a JSON report
to stdout (or ``--out``). Exit codes: 0 on success, 1 on a domain error
(reported as a machine-readable error object), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bigraded, bimodule, dgalgebra, tablegen, tower
from .coxeter import CoxeterSystem, parse_parabolic
from .intlinalg import IntMatrix, smith_normal_form
from .kl import kl_polynomial, parabolic_stalk_table
from .resolution import ResolutionBoundError
from .spaces import (
    Borel,
    FullFlag,
    GL,
    Gm,
    Grassmannian,
    ParabolicInGL,
    PartialFlag,
    Point,
    Solvable,
    SpaceSpec,
    Torus,
    formality_verdict,
    spec_from_dict,
    weight_data,
)
from .weights import WeightSet, separated


class MalformedInput(Exception):
    pass


def _load_json(args) -> dict:
    try:
        if args.infile == "-":
            return json.load(sys.stdin)
        with open(args.infile, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(str(exc)) from exc


def _matrix_from_args(args) -> IntMatrix:
    if args.matrix is not None:
        try:
            rows = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad --matrix: {exc}") from exc
    else:
        data = _load_json(args)
        rows = data["matrix"] if isinstance(data, dict) else data
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("matrix must be a list of rows")
    return IntMatrix.from_rows(rows)


def _system_from_args(args) -> CoxeterSystem:
    if getattr(args, "coxeter_matrix", None):
        try:
            rows = json.loads(args.coxeter_matrix)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"bad --coxeter-matrix: {exc}") from exc
        return CoxeterSystem.from_matrix(rows)
    if args.type is None or args.rank is None:
        raise MalformedInput("need --type and --rank (or --coxeter-matrix)")
    return CoxeterSystem.from_type(args.type, args.rank)


def _spec_from_args(args) -> SpaceSpec:
    if getattr(args, "infile", None):
        return spec_from_dict(_load_json(args))
    kind = args.space
    if kind is None:
        raise MalformedInput("need --space or --in")
    if kind == "point":
        space = Point()
    elif kind == "grassmannian":
        if args.k is None or args.n is None:
            raise MalformedInput("grassmannian needs --k and --n")
        space = Grassmannian(args.k, args.n)
    elif kind == "fullflag":
        if args.type is None or args.rank is None:
            raise MalformedInput("fullflag needs --type and --rank")
        space = FullFlag(args.type.upper(), args.rank)
    elif kind == "partialflag":
        if args.type is None or args.rank is None or args.parabolic is None:
            raise MalformedInput("partialflag needs --type, --rank, --parabolic")
        gens = parse_parabolic(args.parabolic, args.rank)
        space = PartialFlag(args.type.upper(), args.rank, tuple(sorted(gens)))
    else:
        raise MalformedInput(f"unknown space {kind!r}")

    group = None
    gkind = args.group
    if gkind in (None, "none"):
        group = None
    elif gkind == "gm":
        group = Gm()
    elif gkind == "torus":
        if args.group_rank is None:
            raise MalformedInput("torus needs --group-rank")
        group = Torus(args.group_rank)
    elif gkind == "gl":
        if args.group_k is None:
            raise MalformedInput("gl needs --group-k")
        group = GL(args.group_k)
    elif gkind == "parabolic-gl":
        if args.group_n is None or args.blocks is None:
            raise MalformedInput("parabolic-gl needs --group-n and --blocks")
        blocks = tuple(int(b) for b in args.blocks.split(","))
        group = ParabolicInGL(args.group_n, blocks)
    elif gkind == "solvable":
        if args.group_rank is None:
            raise MalformedInput("solvable needs --group-rank")
        group = Solvable(args.group_rank)
    elif gkind == "borel":
        if args.ambient is not None:
            if args.group_n is None:
                raise MalformedInput("borel with --ambient needs --group-n")
            group = Borel(args.ambient.upper(), args.group_n)
        elif isinstance(space, Grassmannian):
            group = Borel("GL", space.n)
        elif isinstance(space, (FullFlag, PartialFlag)):
            group = Borel(space.cartan_type, space.rank)
        else:
            raise MalformedInput("cannot infer the Borel's ambient group")
    else:
        raise MalformedInput(f"unknown group {gkind!r}")
    return SpaceSpec(space, group)


# -- command handlers --------------------------------------------------------


def cmd_snf(args):
    m = _matrix_from_args(args)
    snf = smith_normal_form(m)
    return {
        "diagonal": list(snf.diagonal),
        "rank": snf.rank,
        "leftTransform": snf.left_transform.to_lists(),
        "rightTransform": snf.right_transform.to_lists(),
    }


def cmd_cohomology(args):
    m = bigraded.module_from_dict(_load_json(args))
    return {"cohomology": bigraded.cohomology(m).to_json()}


def cmd_purity(args):
    m = bigraded.module_from_dict(_load_json(args))
    w = bigraded.purity_weight(m)
    return {
        "pure": w is not None,
        "weight": w,
        "offDiagonal": [
            {"i": i, "j": j, "weight": wt}
            for ((i, j), wt) in bigraded.purity_violations(m)
        ],
    }


def cmd_truncate(args):
    m = bigraded.module_from_dict(_load_json(args))
    tr = bigraded.s_truncation(m)
    return {
        "module": bigraded.module_to_dict(tr.module),
        "inclusion": [
            {"i": i, "j": j, "matrix": mat.to_lists()}
            for (i, j), mat in sorted(tr.inclusion.blocks.items())
        ],
        "hTorsionFree": tr.h_torsion_free,
        "hModule": (
            None if tr.h_module is None else bigraded.module_to_dict(tr.h_module)
        ),
        "projection": (
            None
            if tr.projection is None
            else [
                {"i": i, "j": j, "matrix": mat.to_lists()}
                for (i, j), mat in sorted(tr.projection.blocks.items())
            ]
        ),
        "cohomology": tr.h_table.to_json(),
    }


def cmd_roof(args):
    a = dgalgebra.algebra_from_dict(_load_json(args))
    return dgalgebra.verify_formality_roof(a).to_json()


def cmd_bimodule_roof(args):
    m = bimodule.bimodule_from_dict(_load_json(args))
    return bimodule.verify_bimodule_roof(m).to_json()


def cmd_limit(args):
    t = tower.tower_from_dict(_load_json(args))
    lim = tower.graded_limit(t, args.degree)
    return {
        "throughDegree": lim.through_degree,
        "witnessIndex": lim.witness_index,
        "stable": lim.stable,
        "stabilization": [
            {"term": k, "ok": ok, "detail": detail}
            for k, ok, detail in lim.stabilization
        ],
        "algebra": dgalgebra.algebra_to_dict(lim.algebra),
    }


def cmd_kl(args):
    sys_ = _system_from_args(args)
    x = sys_.element_from_word(args.x or "")
    w = sys_.element_from_word(args.w or "")
    return str(kl_polynomial(sys_, x, w))


def cmd_stalks(args):
    sys_ = _system_from_args(args)
    gens = parse_parabolic(args.parabolic or "", sys_.rank)
    lam = sys_.element_from_word(args.lam or "")
    mu = sys_.element_from_word(args.mu or "")
    rows = parabolic_stalk_table(sys_, gens, lam, mu)
    return {
        "rows": [
            {"degree": r.degree, "rank": r.rank, "weightExponent": r.weight_exponent}
            for r in rows
        ]
    }


def cmd_wt(args):
    return weight_data(_spec_from_args(args))


def cmd_separated(args):
    if args.exponents is not None:
        wt = WeightSet.of(int(e) for e in args.exponents.split(","))
    else:
        data = weight_data(_spec_from_args(args))
        if data["wt"] is None:
            raise ValueError("weight set unknown for this space")
        wt = WeightSet.of(data["wt"])
    out = separated(wt, args.q, args.l)
    return {
        "separated": out,
        "wt": wt.sorted(),
        "wr": wt.wr,
        "q": args.q,
        "l": args.l,
        "lExceedsWr": args.l > wt.wr,
    }


def cmd_verdict(args):
    spec = _spec_from_args(args)
    return formality_verdict(spec, l=args.l, q=args.q).to_json()


def cmd_table(args):
    return tablegen.emit_table(args.parity_table)


def _space_flags(p: argparse.ArgumentParser):
    p.add_argument("--in", dest="infile", help="space-spec JSON file")
    p.add_argument(
        "--space",
        choices=["point", "grassmannian", "fullflag", "partialflag"],
    )
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--parabolic", help='generator subset, e.g. "s1 s3"')
    p.add_argument(
        "--group",
        choices=["none", "gm", "torus", "gl", "parabolic-gl", "solvable", "borel"],
    )
    p.add_argument("--group-rank", type=int)
    p.add_argument("--group-k", type=int)
    p.add_argument("--group-n", type=int)
    p.add_argument("--blocks", help="comma-separated block sizes")
    p.add_argument("--ambient", help='ambient of a Borel, e.g. "GL"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formalis",
        description="Exact checks for bigraded formality, Kazhdan-Lusztig "
        "combinatorics and weight-set separatedness.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to a file")
    common.add_argument(
        "--seed", type=int, default=0,
        help="seed for any sampled verification (deterministic default)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form with transforms")
    p.add_argument("--in", dest="infile", help="JSON file with a matrix")
    p.add_argument("--matrix", help="inline JSON matrix")
    p.set_defaults(fn=cmd_snf)

    for name, fn, help_ in (
        ("cohomology", cmd_cohomology, "cohomology table of a bigraded module"),
        ("purity", cmd_purity, "purity weight of a bigraded module"),
        ("truncate", cmd_truncate, "diagonal truncation with roof maps"),
        ("roof", cmd_roof, "certify the formality roof of an algebra"),
        ("bimodule-roof", cmd_bimodule_roof, "certify the bimodule roof"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--in", dest="infile", required=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("limit", parents=[common], help="limit of a graded algebra tower")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=cmd_limit)

    p = sub.add_parser("kl", parents=[common], help="Kazhdan-Lusztig polynomial")
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--coxeter-matrix")
    p.add_argument("--x", required=True, help='reduced word, e.g. "s2"')
    p.add_argument("--w", required=True, help='reduced word, e.g. "s2 s1 s3 s2"')
    p.set_defaults(fn=cmd_kl)

    p = sub.add_parser(
        "stalks", parents=[common], help="stalk rows of one intersection complex"
    )
    p.add_argument("--type")
    p.add_argument("--rank", type=int)
    p.add_argument("--coxeter-matrix")
    p.add_argument("--parabolic", default="", help='e.g. "s1 s3"')
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(fn=cmd_stalks)

    p = sub.add_parser("wt", parents=[common], help="weight set of a space spec")
    _space_flags(p)
    p.set_defaults(fn=cmd_wt)

    p = sub.add_parser(
        "separated", parents=[common], help="residue injectivity of a weight set"
    )
    _space_flags(p)
    p.add_argument("--exponents", help="comma-separated exponents")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(fn=cmd_separated)

    p = sub.add_parser("verdict", parents=[common], help="equivariant formality verdict")
    _space_flags(p)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(fn=cmd_verdict)

    p = sub.add_parser("table", parents=[common], help="regenerate the summary table")
    p.add_argument("--parity-table", help="override the curated parity file")
    p.set_defaults(fn=cmd_table)

    return parser


DOMAIN_ERRORS = (
    ValueError,
    bigraded.NotPureError,
    ResolutionBoundError,
    tablegen.TableMismatchError,
    RuntimeError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except MalformedInput as exc:
        _emit({"error": {"type": "malformed-input", "message": str(exc)}}, args.out)
        return 2
    except KeyError as exc:
        _emit(
            {"error": {"type": "schema-violation", "message": f"missing {exc}"}},
            args.out,
        )
        return 2
    except DOMAIN_ERRORS as exc:
        _emit(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out
        )
        return 1
    _emit(report, args.out)
    return 0


def _emit(report, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    sys.exit(main())
