"""Bigraded differential modules.

A :class:`BigradedModule` is a finite collection of free components
indexed by (internal degree i, cohomological degree j) together with
differentials that fix i and raise j by one. Coefficients are either the
integers (``mode="Z"``) or the prime field F_l (``mode="Fl"``); in both
cases matrices carry integer entries and the mode decides how they are
interpreted.

The module computes cohomology with torsion bookkeeping, detects purity
(cohomology concentrated on a shifted diagonal), builds the diagonal
truncation of a pure module together with its inclusion and projection
chain maps, and certifies quasi-isomorphisms exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .intlinalg import (
    IntMatrix,
    SmithForm,
    is_prime,
    kernel_basis,
    kernel_basis_mod,
    rank_mod,
    smith_normal_form,
    solve_exact,
    solve_mod,
)

Bidegree = tuple[int, int]


class NotPureError(ValueError):
    """Raised when an operation requires a pure module of weight zero."""


def _check_mode(mode: str, l: int | None):
    if mode == "Z":
        if l is not None:
            raise ValueError("mode Z takes no prime")
    elif mode == "Fl":
        if l is None or not is_prime(l):
            raise ValueError("mode Fl requires a prime l")
    else:
        raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class BigradedModule:
    """Finitely supported bigraded module with explicit differentials.

    ``components`` maps (i, j) to a free rank; ``differentials`` maps
    (i, j) to the matrix of d: M^(i,j) -> M^(i,j+1), acting on column
    coordinates. Validation enforces matching shapes and d o d = 0.
    """

    components: dict[Bidegree, int]
    differentials: dict[Bidegree, IntMatrix] = field(default_factory=dict)
    mode: str = "Z"
    l: int | None = None

    def __post_init__(self):
        _check_mode(self.mode, self.l)
        comps = {
            tuple(k): int(v) for k, v in self.components.items() if int(v) != 0
        }
        if any(v < 0 for v in comps.values()):
            raise ValueError("component ranks must be non-negative")
        diffs = {}
        for key, mat in self.differentials.items():
            i, j = key
            src = comps.get((i, j), 0)
            tgt = comps.get((i, j + 1), 0)
            if src == 0 or tgt == 0:
                if not (mat.rows == tgt and mat.cols == src) and not mat.is_zero():
                    raise ValueError(f"differential at {key} touches empty component")
                continue
            if mat.shape != (tgt, src):
                raise ValueError(
                    f"differential at {key} has shape {mat.shape}, expected {(tgt, src)}"
                )
            diffs[(i, j)] = mat
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "differentials", diffs)
        for (i, j), mat in diffs.items():
            nxt = diffs.get((i, j + 1))
            if nxt is not None:
                comp = nxt @ mat
                if not self._is_zero(comp):
                    raise ValueError(f"d o d != 0 starting at bidegree ({i}, {j})")

    # -- mode-aware primitives ----------------------------------------

    def _is_zero(self, m: IntMatrix) -> bool:
        return m.is_zero() if self.mode == "Z" else m.is_zero_mod(self.l)

    def _eq(self, a: IntMatrix, b: IntMatrix) -> bool:
        return a == b if self.mode == "Z" else a.eq_mod(b, self.l)

    def _kernel_cols(self, m: IntMatrix | None, n: int) -> IntMatrix:
        if m is None:
            return IntMatrix.identity(n)
        vecs = kernel_basis(m) if self.mode == "Z" else kernel_basis_mod(m, self.l)
        return IntMatrix.from_columns(vecs, n) if vecs else IntMatrix(n, 0, [])

    def _solve(self, a: IntMatrix, b: IntMatrix) -> IntMatrix:
        if a.cols == 0:
            if not self._is_zero(b):
                raise ValueError("inconsistent system")
            return IntMatrix(0, b.cols, [])
        return solve_exact(a, b) if self.mode == "Z" else solve_mod(a, b, self.l)

    def rank_at(self, bidegree: Bidegree) -> int:
        return self.components.get(tuple(bidegree), 0)

    def differential_at(self, bidegree: Bidegree) -> IntMatrix | None:
        return self.differentials.get(tuple(bidegree))

    def total_dimension(self) -> int:
        return sum(self.components.values())

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.components)

    def same_mode(self, other: "BigradedModule") -> bool:
        return self.mode == other.mode and self.l == other.l


@dataclass(frozen=True)
class CohomologyTable:
    """Free rank and torsion divisors of cohomology, per bidegree."""

    entries: dict[Bidegree, tuple[int, tuple[int, ...]]]

    def __post_init__(self):
        cleaned = {
            tuple(k): (int(f), tuple(int(t) for t in tors))
            for k, (f, tors) in self.entries.items()
            if int(f) != 0 or tors
        }
        object.__setattr__(self, "entries", cleaned)

    def free_rank(self, bidegree: Bidegree) -> int:
        return self.entries.get(tuple(bidegree), (0, ()))[0]

    def torsion(self, bidegree: Bidegree) -> tuple[int, ...]:
        return self.entries.get(tuple(bidegree), (0, ()))[1]

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def torsion_free(self) -> bool:
        return all(not tors for _, tors in self.entries.values())

    def torsion_free_at(self, l: int) -> bool:
        return all(
            all(d % l for d in tors) for _, tors in self.entries.values()
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, CohomologyTable) and self.entries == other.entries

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "j": j, "freeRank": f, "torsionDivisors": list(tors)}
            for (i, j), (f, tors) in sorted(self.entries.items())
        ]


@dataclass(frozen=True)
class _Presentation:
    # H at one bidegree as cokernel of `boundaries` inside the kernel lattice
    kernel: IntMatrix        # ambient x z
    boundaries: IntMatrix    # z x b
    free_rank: int
    torsion: tuple[int, ...]


def _presentation(m: BigradedModule, bidegree: Bidegree) -> _Presentation:
    i, j = bidegree
    n = m.rank_at(bidegree)
    k = m._kernel_cols(m.differential_at(bidegree), n)
    z = k.cols
    d_in = m.differential_at((i, j - 1))
    if d_in is None or d_in.cols == 0:
        x = IntMatrix(z, 0, [])
    else:
        x = m._solve(k, d_in)
    if m.mode == "Z":
        snf = smith_normal_form(x)
        torsion = tuple(d for d in snf.diagonal if d > 1)
        free = z - snf.rank
    else:
        torsion = ()
        free = z - rank_mod(x, m.l)
    return _Presentation(kernel=k, boundaries=x, free_rank=free, torsion=torsion)


def cohomology(m: BigradedModule) -> CohomologyTable:
    """Cohomology H^(i,j) = ker d / im d with torsion divisors.

    In F_l mode the table lists F_l-dimensions as free ranks; torsion is
    always empty there.
    """
    out = {}
    for bidegree in m.components:
        pres = _presentation(m, bidegree)
        if pres.free_rank or pres.torsion:
            out[bidegree] = (pres.free_rank, pres.torsion)
    return CohomologyTable(out)


def purity_weight(m: BigradedModule) -> int | None:
    """The unique n with H^(i,j) != 0 => i = j + n, or None if mixed.

    The zero module is pure of every weight; weight 0 is reported then.
    """
    weights = {i - j for (i, j) in cohomology(m).entries}
    if not weights:
        return 0
    if len(weights) == 1:
        return weights.pop()
    return None


def purity_violations(m: BigradedModule) -> list[tuple[Bidegree, int]]:
    """Nonzero cohomology bidegrees off weight zero, for diagnostics."""
    return sorted(
        ((i, j), i - j) for (i, j) in cohomology(m).entries if i != j
    )


@dataclass(frozen=True)
class ChainMap:
    """Degreewise map of bigraded modules; missing blocks are zero."""

    source: BigradedModule
    target: BigradedModule
    blocks: dict[Bidegree, IntMatrix]

    def __post_init__(self):
        if not self.source.same_mode(self.target):
            raise ValueError("chain map across coefficient modes")
        blocks = {}
        for key, mat in self.blocks.items():
            want = (self.target.rank_at(key), self.source.rank_at(key))
            if mat.shape != want:
                raise ValueError(f"block at {key} has shape {mat.shape}, expected {want}")
            blocks[tuple(key)] = mat
        object.__setattr__(self, "blocks", blocks)

    def block(self, bidegree: Bidegree) -> IntMatrix:
        b = self.blocks.get(tuple(bidegree))
        if b is None:
            b = IntMatrix.zero(
                self.target.rank_at(bidegree), self.source.rank_at(bidegree)
            )
        return b

    def apply(self, bidegree: Bidegree, vector):
        return self.block(bidegree).apply(vector)

    def is_chain_map(self) -> bool:
        m, n = self.source, self.target
        for (i, j), src_rank in m.components.items():
            f_here = self.block((i, j))
            d_tgt = n.differential_at((i, j))
            d_src = m.differential_at((i, j))
            lhs = (
                d_tgt @ f_here
                if d_tgt is not None
                else IntMatrix.zero(n.rank_at((i, j + 1)), src_rank)
            )
            f_next = self.block((i, j + 1))
            rhs = (
                f_next @ d_src
                if d_src is not None
                else IntMatrix.zero(n.rank_at((i, j + 1)), src_rank)
            )
            if not m._is_zero(lhs - rhs):
                return False
        return True


@dataclass(frozen=True)
class QuasiIsoCertificate:
    """Exact per-bidegree evidence that a chain map is a quasi-isomorphism."""

    ok: bool
    chain_map_ok: bool
    rows: tuple[tuple[Bidegree, bool, str], ...]

    def failures(self) -> list[tuple[Bidegree, str]]:
        return [(b, why) for b, good, why in self.rows if not good]


def certify_quasi_iso(f: ChainMap) -> QuasiIsoCertificate:
    """Certify that ``f`` induces isomorphisms on all cohomology.

    The certificate checks, per bidegree, that source and target have
    equal invariants (free rank plus torsion divisors) and that the
    induced map on cohomology is surjective; a surjection between
    finitely generated groups with equal invariants is an isomorphism.
    """
    if not f.is_chain_map():
        return QuasiIsoCertificate(ok=False, chain_map_ok=False, rows=())
    m, n = f.source, f.target
    rows = []
    ok = True
    for bidegree in sorted(set(m.components) | set(n.components)):
        ps = _presentation(m, bidegree)
        pt = _presentation(n, bidegree)
        if (ps.free_rank, ps.torsion) != (pt.free_rank, pt.torsion):
            rows.append(
                (
                    bidegree,
                    False,
                    f"invariants differ: {(ps.free_rank, ps.torsion)} vs "
                    f"{(pt.free_rank, pt.torsion)}",
                )
            )
            ok = False
            continue
        if pt.free_rank == 0 and not pt.torsion:
            rows.append((bidegree, True, "zero cohomology"))
            continue
        # cycles map to cycles because f is a chain map
        y = m._solve(pt.kernel, f.block(bidegree) @ ps.kernel)
        stacked = y.hstack(pt.boundaries)
        z_t = pt.kernel.cols
        if m.mode == "Z":
            snf = smith_normal_form(stacked)
            surj = snf.rank == z_t and all(d == 1 for d in snf.diagonal)
        else:
            surj = rank_mod(stacked, m.l) == z_t
        if surj:
            rows.append((bidegree, True, "induced map surjective, invariants equal"))
        else:
            rows.append((bidegree, False, "induced map not surjective"))
            ok = False
    return QuasiIsoCertificate(ok=ok, chain_map_ok=True, rows=tuple(rows))


# -- diagonal truncation ------------------------------------------------


def _s_complex(m: BigradedModule):
    """Diagonal truncation as a subcomplex, without any purity check.

    Returns (S, inclusion blocks, kernel matrices keyed by diagonal i).
    Components strictly above the diagonal (i < j) are dropped, diagonal
    components are replaced by the kernel of the outgoing differential,
    everything below survives unchanged.
    """
    comps: dict[Bidegree, int] = {}
    incl: dict[Bidegree, IntMatrix] = {}
    kernels: dict[int, IntMatrix] = {}
    for (i, j), n in m.components.items():
        if i < j:
            continue
        if i == j:
            k = m._kernel_cols(m.differential_at((i, j)), n)
            kernels[i] = k
            if k.cols:
                comps[(i, j)] = k.cols
                incl[(i, j)] = k
        else:
            comps[(i, j)] = n
            incl[(i, j)] = IntMatrix.identity(n)
    diffs: dict[Bidegree, IntMatrix] = {}
    for (i, j), mat in m.differentials.items():
        if (i, j) not in comps:
            continue
        if i == j:
            continue  # source is the kernel, restriction vanishes
        if i > j + 1:
            if (i, j + 1) in comps:
                diffs[(i, j)] = mat
        elif i == j + 1:
            k = kernels.get(i)
            if k is not None and k.cols:
                diffs[(i, j)] = m._solve(k, mat)
    s = BigradedModule(comps, diffs, mode=m.mode, l=m.l)
    inclusion = ChainMap(source=s, target=m, blocks=incl)
    return s, inclusion, kernels


def _quotient_data(x: IntMatrix, mode: str, l: int | None):
    """Projection/section pair for the quotient of a free module by im(x).

    Returns (P, T, free_rank, torsion) with P @ x = 0, P surjective onto
    the free quotient and P @ T the identity. In Z mode with torsion the
    pair describes the free part only.
    """
    z = x.rows
    snf = smith_normal_form(x)
    if mode == "Z":
        torsion = tuple(d for d in snf.diagonal if d > 1)
        keep = list(range(snf.rank, z))
    else:
        torsion = ()
        keep = [
            j for j in range(z) if j >= snf.rank or snf.diagonal[j] % l == 0
        ]
    lt = snf.left_transform
    p = (
        IntMatrix.from_rows([lt.row(j) for j in keep])
        if keep
        else IntMatrix(0, z, [])
    )
    lt_inv = solve_exact(lt, IntMatrix.identity(z)) if z else IntMatrix(0, 0, [])
    t = (
        IntMatrix.from_columns([lt_inv.column(j) for j in keep], z)
        if keep
        else IntMatrix(z, 0, [])
    )
    if mode == "Fl" and keep:
        p = IntMatrix(p.rows, p.cols, [e % l for e in p.entries])
        t = IntMatrix(t.rows, t.cols, [e % l for e in t.entries])
    return p, t, len(keep), torsion


@dataclass(frozen=True)
class Truncation:
    """Diagonal truncation of a pure weight-zero module with its roof maps."""

    module: BigradedModule            # S(M)
    inclusion: ChainMap               # S(M) -> M
    h_table: CohomologyTable          # cohomology of M
    h_torsion_free: bool
    h_module: BigradedModule | None   # cohomology with zero differential
    projection: ChainMap | None       # S(M) -> H(M), when representable
    kernels: dict[int, IntMatrix]     # diagonal kernel bases
    sections: dict[int, IntMatrix]    # kernel-coordinate sections of projection


def s_truncation(m: BigradedModule) -> Truncation:
    """Diagonal truncation of a pure weight-zero module.

    Rejects impure input naming a violating bidegree. The projection to
    cohomology is materialized whenever cohomology is free (always, in
    field mode); with integer torsion the free components cannot carry
    the quotient and only the inclusion is produced as an explicit map.
    """
    w = purity_weight(m)
    if w != 0:
        bad = purity_violations(m)
        where = bad[0][0] if bad else "(mixed diagonal weights)"
        raise NotPureError(
            f"module is not pure of weight 0; offending bidegree {where}"
        )
    s, inclusion, kernels = _s_complex(m)
    table = cohomology(m)
    torsion_free = table.torsion_free()
    h_comps: dict[Bidegree, int] = {}
    proj_blocks: dict[Bidegree, IntMatrix] = {}
    sections: dict[int, IntMatrix] = {}
    representable = torsion_free
    if representable:
        for i, k in kernels.items():
            d_in = m.differential_at((i, i - 1))
            if d_in is None or d_in.cols == 0:
                x = IntMatrix(k.cols, 0, [])
            else:
                x = m._solve(k, d_in)
            p, t, free, _ = _quotient_data(x, m.mode, m.l)
            if free:
                h_comps[(i, i)] = free
                proj_blocks[(i, i)] = p
                sections[i] = t
        h_module = BigradedModule(h_comps, {}, mode=m.mode, l=m.l)
        projection = ChainMap(source=s, target=h_module, blocks=proj_blocks)
    else:
        h_module = None
        projection = None
    return Truncation(
        module=s,
        inclusion=inclusion,
        h_table=table,
        h_torsion_free=torsion_free,
        h_module=h_module,
        projection=projection,
        kernels=kernels,
        sections=sections,
    )


# -- parity ---------------------------------------------------------------


def parity_check(stalk_tables: Mapping[object, CohomologyTable], l: int) -> bool:
    """True iff every table is l-torsion-free and of a single degree parity.

    Each table is tested on its own: its nonzero entries must sit in
    cohomological degrees of one parity, and no torsion divisor may be
    divisible by l.
    """
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    for table in stalk_tables.values():
        if not table.torsion_free_at(l):
            return False
        parities = {j % 2 for (_, j) in table.entries}
        if len(parities) > 1:
            return False
    return True


# -- direct sums ------------------------------------------------------------


def direct_sum(a: BigradedModule, b: BigradedModule) -> BigradedModule:
    if not a.same_mode(b):
        raise ValueError("direct sum across coefficient modes")
    comps: dict[Bidegree, int] = dict(a.components)
    for k, v in b.components.items():
        comps[k] = comps.get(k, 0) + v
    diffs: dict[Bidegree, IntMatrix] = {}
    keys = set(a.differentials) | set(b.differentials)
    for (i, j) in keys:
        sa, sb = a.rank_at((i, j)), b.rank_at((i, j))
        ta, tb = a.rank_at((i, j + 1)), b.rank_at((i, j + 1))
        da = a.differential_at((i, j)) or IntMatrix.zero(ta, sa)
        db = b.differential_at((i, j)) or IntMatrix.zero(tb, sb)
        rows = []
        for r in range(ta):
            rows.append(list(da.row(r)) + [0] * sb)
        for r in range(tb):
            rows.append([0] * sa + list(db.row(r)))
        diffs[(i, j)] = IntMatrix.from_rows(rows) if rows else IntMatrix(0, sa + sb, [])
    return BigradedModule(comps, diffs, mode=a.mode, l=a.l)


# -- JSON round trip ---------------------------------------------------------


def module_to_dict(m: BigradedModule) -> dict:
    out = {
        "components": [
            {"i": i, "j": j, "rank": r}
            for (i, j), r in sorted(m.components.items())
        ],
        "differentials": [
            {"i": i, "j": j, "matrix": mat.to_lists()}
            for (i, j), mat in sorted(m.differentials.items())
        ],
        "mode": m.mode,
    }
    if m.mode == "Fl":
        out["l"] = m.l
    return out


def module_from_dict(data: dict) -> BigradedModule:
    comps = {(c["i"], c["j"]): c["rank"] for c in data["components"]}
    diffs = {}
    for d in data.get("differentials", []):
        i, j = d["i"], d["j"]
        tgt = comps.get((i, j + 1), 0)
        src = comps.get((i, j), 0)
        mat = d["matrix"]
        diffs[(i, j)] = IntMatrix.from_rows(mat) if mat else IntMatrix(tgt, src, [0] * (tgt * src))
    return BigradedModule(
        comps, diffs, mode=data.get("mode", "Z"), l=data.get("l")
    )


def module_to_json(m: BigradedModule) -> str:
    return json.dumps(module_to_dict(m), sort_keys=True)


def module_from_json(text: str) -> BigradedModule:
    return module_from_dict(json.loads(text))
