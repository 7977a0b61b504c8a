"""Symbolic spaces, group actions and approximation certificates.

The grammar describes (space, group) pairs for which approximation
towers are known to exist: points, Grassmannians, full and partial flag
varieties, and products, acted on by multiplicative groups, tori,
general linear groups, their parabolics, solvable groups and Borels.
Certificates propagate weight sets, acyclicity levels, the Tate-stalk
condition and curated modular parity along three constructor rules:
products, split extensions with acyclic kernel, and balanced products
of a space with a group certificate. :func:`formality_verdict`
evaluates every hypothesis of the equivariance criterion for a concrete
prime pair and reports them row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .intlinalg import is_prime
from .kl import CuratedParity, curated_parity, load_parity_table
from .weights import AdmissibleQ, WeightSet, admissible_q, separated

# -- the space grammar ---------------------------------------------------


@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class Grassmannian:
    k: int
    n: int

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ValueError("need 0 < k < n")


@dataclass(frozen=True)
class FullFlag:
    cartan_type: str
    rank: int


@dataclass(frozen=True)
class PartialFlag:
    cartan_type: str
    rank: int
    parabolic: tuple[int, ...]


@dataclass(frozen=True)
class ProductSpace:
    left: "Space"
    right: "Space"


Space = Union[Point, Grassmannian, FullFlag, PartialFlag, ProductSpace]


@dataclass(frozen=True)
class Gm:
    pass


@dataclass(frozen=True)
class Torus:
    rank: int


@dataclass(frozen=True)
class GL:
    k: int


@dataclass(frozen=True)
class ParabolicInGL:
    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        if sum(self.blocks) != self.n or not all(b > 0 for b in self.blocks):
            raise ValueError("block sizes must be positive and sum to n")


@dataclass(frozen=True)
class Solvable:
    torus_rank: int


@dataclass(frozen=True)
class Borel:
    ambient: str      # "GL" or a Cartan letter
    n_or_rank: int

    @property
    def torus_rank(self) -> int:
        # the maximal torus of GL_n has rank n; in the semisimple types
        # the rank of the group is the rank of the torus
        return self.n_or_rank


GroupAction = Union[Gm, Torus, GL, ParabolicInGL, Solvable, Borel]


@dataclass(frozen=True)
class SpaceSpec:
    space: Space
    group: GroupAction | None = None


# -- dimensions of full flag varieties ------------------------------------

_POSITIVE_ROOTS = {
    "A": lambda k: k * (k + 1) // 2,
    "B": lambda k: k * k,
    "C": lambda k: k * k,
    "D": lambda k: k * (k - 1),
    "G": lambda k: 6,
    "F": lambda k: 24,
    "E": lambda k: {6: 36, 7: 63, 8: 120}[k],
}

# dimensions used by the summary table; the A7 entry follows the curated
# table verbatim (56), which differs from the positive-root count (28)
_CURATED_FLAG_DIMS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 3): 6, ("A", 4): 10,
    ("A", 5): 15, ("A", 6): 21, ("A", 7): 56,
    ("B", 2): 4, ("D", 4): 12, ("G", 2): 6,
}


def positive_root_count(cartan_type: str, rank: int) -> int:
    t = cartan_type.upper()
    if t not in _POSITIVE_ROOTS:
        raise ValueError(f"unsupported type {cartan_type!r}")
    return _POSITIVE_ROOTS[t](rank)


def flag_dimension(cartan_type: str, rank: int) -> int:
    """Dimension of the full flag variety as tabulated; curated values
    take precedence over the positive-root formula."""
    key = (cartan_type.upper(), rank)
    if key in _CURATED_FLAG_DIMS:
        return _CURATED_FLAG_DIMS[key]
    return positive_root_count(cartan_type, rank)


# -- certificates -------------------------------------------------------------

TOWER_DEPTH = 8


@dataclass(frozen=True)
class ApproximationCert:
    """Everything the calculus tracks about one approximation tower.

    ``acyclicity_levels`` is the per-index guaranteed acyclicity of the
    tower (None means a constant tower, acyclic at every level);
    ``parity_known`` records whether every ingredient carried a curated
    modular-parity row, and ``parity_excluded`` collects the primes any
    ingredient is known to exclude.
    """

    description: str
    acyclicity_levels: tuple[int, ...] | None
    wt: WeightSet | None
    bgs: bool | None
    parity_known: bool
    parity_excluded: frozenset[int]
    citations: tuple[str, ...] = ()

    @property
    def wr(self) -> int | None:
        return None if self.wt is None else self.wt.wr

    def parity_at(self, l: int) -> bool | None:
        if l in self.parity_excluded:
            return False
        return True if self.parity_known else None


def _combine_levels(a, b):
    if a is None:
        return b
    if b is None:
        return a
    n = min(len(a), len(b))
    return tuple(min(a[i], b[i]) for i in range(n))


def stiefel_levels(depth: int = TOWER_DEPTH) -> tuple[int, ...]:
    # index j of the frame tower is 2j-connected, hence 2j-acyclic,
    # comfortably above the j-acyclicity an approximation requires
    return tuple(2 * j for j in range(depth))


def cert_point_gm() -> ApproximationCert:
    return ApproximationCert(
        description="pt/Gm",
        acyclicity_levels=stiefel_levels(),
        wt=WeightSet.interval(1),
        bgs=True,
        parity_known=True,
        parity_excluded=frozenset(),
        citations=("projective-space-tower",),
    )


def cert_point_gl(k: int) -> ApproximationCert:
    if k < 1:
        raise ValueError("GL rank must be positive")
    return ApproximationCert(
        description=f"pt/GL{k}",
        acyclicity_levels=stiefel_levels(),
        wt=WeightSet.interval(k),
        bgs=True,
        parity_known=True,
        parity_excluded=frozenset(),
        citations=("stiefel-grassmannian-tower",),
    )


def approx_product(a: ApproximationCert, b: ApproximationCert) -> ApproximationCert:
    """Product of approximations: weights multiply as sumsets, flags
    combine conjunctively, acyclicity is the weaker of the two."""
    wt = None if (a.wt is None or b.wt is None) else a.wt * b.wt
    bgs = None if (a.bgs is None or b.bgs is None) else (a.bgs and b.bgs)
    return ApproximationCert(
        description=f"({a.description} x {b.description})",
        acyclicity_levels=_combine_levels(a.acyclicity_levels, b.acyclicity_levels),
        wt=wt,
        bgs=bgs,
        parity_known=a.parity_known and b.parity_known,
        parity_excluded=a.parity_excluded | b.parity_excluded,
        citations=a.citations + b.citations + ("product-rule",),
    )


def approx_split_extension(
    levi: ApproximationCert, acyclic_kernel: bool, label: str = "extension"
) -> ApproximationCert:
    """Split extension with acyclic kernel inherits everything from the
    Levi; declaring the kernel acyclic is the caller's responsibility."""
    if not acyclic_kernel:
        raise ValueError("split extensions require an acyclic kernel")
    return ApproximationCert(
        description=f"{label}({levi.description})",
        acyclicity_levels=levi.acyclicity_levels,
        wt=levi.wt,
        bgs=levi.bgs,
        parity_known=levi.parity_known,
        parity_excluded=levi.parity_excluded,
        citations=levi.citations + ("split-extension-rule",),
    )


def approx_balanced(
    space: ApproximationCert, group: ApproximationCert
) -> ApproximationCert:
    """Balanced product of a stratified space with a point approximation."""
    if space.bgs is None:
        raise ValueError("balanced products need the space's Tate-stalk flag")
    wt = None if (space.wt is None or group.wt is None) else space.wt * group.wt
    bgs = None if group.bgs is None else (space.bgs and group.bgs)
    return ApproximationCert(
        description=f"({group.description} ** {space.description})",
        acyclicity_levels=group.acyclicity_levels,
        wt=wt,
        bgs=bgs,
        parity_known=space.parity_known and group.parity_known,
        parity_excluded=space.parity_excluded | group.parity_excluded,
        citations=space.citations + group.citations + ("balanced-product-rule",),
    )


# -- certificates of the grammar atoms -----------------------------------------


def group_cert(group: GroupAction) -> ApproximationCert:
    if isinstance(group, Gm):
        return cert_point_gm()
    if isinstance(group, Torus):
        cert = cert_point_gm()
        for _ in range(group.rank - 1):
            cert = approx_product(cert, cert_point_gm())
        return ApproximationCert(
            description=f"pt/T{group.rank}",
            acyclicity_levels=cert.acyclicity_levels,
            wt=cert.wt,
            bgs=cert.bgs,
            parity_known=cert.parity_known,
            parity_excluded=cert.parity_excluded,
            citations=cert.citations,
        )
    if isinstance(group, GL):
        return cert_point_gl(group.k)
    if isinstance(group, ParabolicInGL):
        cert = cert_point_gl(group.blocks[0])
        for b in group.blocks[1:]:
            cert = approx_product(cert, cert_point_gl(b))
        return approx_split_extension(
            cert, acyclic_kernel=True, label=f"parabolic-GL{group.n}"
        )
    if isinstance(group, Solvable):
        return approx_split_extension(
            group_cert(Torus(group.torus_rank)),
            acyclic_kernel=True,
            label="solvable",
        )
    if isinstance(group, Borel):
        return approx_split_extension(
            group_cert(Torus(group.torus_rank)),
            acyclic_kernel=True,
            label=f"borel-{group.ambient}{group.n_or_rank}",
        )
    raise ValueError(f"unsupported group action {group!r}")


def space_cert(space: Space, parity_table=None) -> ApproximationCert:
    if parity_table is None:
        parity_table = load_parity_table()
    if isinstance(space, Point):
        return ApproximationCert(
            description="pt",
            acyclicity_levels=None,
            wt=WeightSet.point(),
            bgs=True,
            parity_known=True,
            parity_excluded=frozenset(),
            citations=("point",),
        )
    if isinstance(space, Grassmannian):
        top = min(space.k, space.n - space.k)
        return ApproximationCert(
            description=f"Gr({space.k},{space.n})",
            acyclicity_levels=None,
            wt=WeightSet.interval(top),
            bgs=True,
            parity_known=True,
            parity_excluded=frozenset(),
            citations=("closed-form-weights[grassmannian]",
                       "curated-parity[grassmannian]"),
        )
    if isinstance(space, FullFlag):
        dim = flag_dimension(space.cartan_type, space.rank)
        row = curated_parity(space.cartan_type, space.rank, parity_table)
        return ApproximationCert(
            description=f"G/B[{space.cartan_type}{space.rank}]",
            acyclicity_levels=None,
            wt=WeightSet.interval(dim),
            bgs=True,
            parity_known=row is not None,
            parity_excluded=row.excluded_primes if row else frozenset(),
            citations=(
                "closed-form-weights[full-flag]",
                f"curated-parity[{space.cartan_type}{space.rank}]"
                if row
                else "curated-parity[missing]",
            ),
        )
    if isinstance(space, PartialFlag):
        return ApproximationCert(
            description=(
                f"G/P[{space.cartan_type}{space.rank};"
                f"{','.join(map(str, space.parabolic))}]"
            ),
            acyclicity_levels=None,
            wt=None,  # no tabulated closed form for general parabolics
            bgs=True,
            parity_known=False,
            parity_excluded=frozenset(),
            citations=("partial-flag[no-closed-form]",),
        )
    if isinstance(space, ProductSpace):
        return approx_product(
            space_cert(space.left, parity_table),
            space_cert(space.right, parity_table),
        )
    raise ValueError(f"unsupported space {space!r}")


def build_certificate(spec: SpaceSpec, parity_table=None) -> ApproximationCert:
    s = space_cert(spec.space, parity_table)
    if spec.group is None:
        return s
    return approx_balanced(s, group_cert(spec.group))


# -- the verdict -----------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisRow:
    hypothesis: str
    status: str  # "yes" | "no" | "unknown"
    citation: str


@dataclass(frozen=True)
class Verdict:
    applicable: str  # "yes" | "no" | "unknown"
    wt: WeightSet | None
    wr: int | None
    reasons: tuple[HypothesisRow, ...]
    l: int
    q: int
    is_separated: bool | None
    l_exceeds_wr: bool | None
    certificate: ApproximationCert

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "wt": None if self.wt is None else self.wt.sorted(),
            "wr": self.wr,
            "reasons": [
                {"hypothesis": r.hypothesis, "status": r.status, "citation": r.citation}
                for r in self.reasons
            ],
            "l": self.l,
            "q": self.q,
            "separated": self.is_separated,
            "lExceedsWr": self.l_exceeds_wr,
            "tower": self.certificate.description,
        }


def formality_verdict(spec: SpaceSpec, l: int, q: int, parity_table=None) -> Verdict:
    """Evaluate every hypothesis of the equivariant formality criterion.

    The answer is "yes" only when the approximation exists, satisfies
    the Tate-stalk condition, has curated modular parity at l, and the
    weight set is separated for (q, l); any known failure gives "no",
    missing curated data gives "unknown". Whether l exceeds the wr bound
    is reported alongside, not conflated with separatedness.
    """
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if q < 2:
        raise ValueError("q must be at least 2")
    if q % l == 0:
        raise ValueError("q divisible by l is rejected")
    cert = build_certificate(spec, parity_table)

    rows: list[HypothesisRow] = []
    rows.append(
        HypothesisRow(
            "approximation-exists",
            "yes",
            cert.description,
        )
    )
    bgs_status = "yes" if cert.bgs else ("unknown" if cert.bgs is None else "no")
    rows.append(HypothesisRow("tate-stalk-condition", bgs_status, "constructor-rules"))
    parity = cert.parity_at(l)
    parity_status = "yes" if parity else ("no" if parity is False else "unknown")
    parity_cite = next(
        (c for c in cert.citations if c.startswith("curated-parity")),
        "curated-parity-table",
    )
    rows.append(HypothesisRow(f"modular-parity(l={l})", parity_status, parity_cite))

    if cert.wt is None:
        sep = None
        flag = None
        rows.append(
            HypothesisRow(
                f"weights-separated(q={q},l={l})",
                "unknown",
                "weight-set-unknown",
            )
        )
    else:
        sep = separated(cert.wt, q, l)
        flag = l > cert.wt.wr
        rows.append(
            HypothesisRow(
                f"weights-separated(q={q},l={l})",
                "yes" if sep else "no",
                f"residue-injectivity[{len(cert.wt)} exponents]",
            )
        )

    statuses = [r.status for r in rows]
    if all(s == "yes" for s in statuses):
        applicable = "yes"
    elif any(s == "no" for s in statuses):
        applicable = "no"
    else:
        applicable = "unknown"

    return Verdict(
        applicable=applicable,
        wt=cert.wt,
        wr=cert.wr,
        reasons=tuple(rows),
        l=l,
        q=q,
        is_separated=sep,
        l_exceeds_wr=flag,
        certificate=cert,
    )


def weight_data(spec: SpaceSpec, parity_table=None) -> dict:
    cert = build_certificate(spec, parity_table)
    return {
        "wt": None if cert.wt is None else cert.wt.sorted(),
        "wr": cert.wr,
        "tower": cert.description,
    }


def admissible_q_for(spec: SpaceSpec, l: int, search_bound: int = 200) -> AdmissibleQ:
    cert = build_certificate(spec)
    if cert.wt is None:
        raise ValueError("weight set unknown for this space")
    return admissible_q(cert.wt, l, search_bound)


# -- JSON grammar -----------------------------------------------------------------


def space_from_dict(data: dict) -> Space:
    kind = data["kind"]
    if kind == "point":
        return Point()
    if kind == "grassmannian":
        return Grassmannian(data["k"], data["n"])
    if kind == "fullflag":
        return FullFlag(data["type"].upper(), data["rank"])
    if kind == "partialflag":
        return PartialFlag(
            data["type"].upper(), data["rank"], tuple(data["parabolic"])
        )
    if kind == "product":
        return ProductSpace(space_from_dict(data["left"]), space_from_dict(data["right"]))
    raise ValueError(f"unknown space kind {kind!r}")


def group_from_dict(data: dict | None) -> GroupAction | None:
    if data is None or data.get("kind") in (None, "none"):
        return None
    kind = data["kind"]
    if kind == "gm":
        return Gm()
    if kind == "torus":
        return Torus(data["rank"])
    if kind == "gl":
        return GL(data["k"])
    if kind == "parabolic-gl":
        return ParabolicInGL(data["n"], tuple(data["blocks"]))
    if kind == "solvable":
        return Solvable(data["torusRank"])
    if kind == "borel":
        if "ambient" in data:
            return Borel(data["ambient"].upper(), data["n"])
        return Borel(data["type"].upper(), data["rank"])
    raise ValueError(f"unknown group kind {kind!r}")


def spec_from_dict(data: dict) -> SpaceSpec:
    return SpaceSpec(
        space=space_from_dict(data["space"]),
        group=group_from_dict(data.get("group")),
    )
