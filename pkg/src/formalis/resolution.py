"""Projective resolutions over finite-dimensional graded algebras and
the derived tensor product of bimodules. Field coefficients only.

The engine assumes a "semisimple plus nilpotent" shape for the base
algebra B: its bidegree-(0, 0) part is spanned by orthogonal idempotents
and everything else generates a nilpotent ideal. Minimal covers are then
direct sums of the projectives e_k B, found by lifting generators of
M / (M * rad B), and resolutions of bounded complexes are built level by
level from fiber products of cycles with the complex itself. Minimality
makes termination equivalent to finite projective dimension, so a hard
length cap turns "no finite resolution found" into an explicit error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .bigraded import Bidegree, BigradedModule, CohomologyTable, cohomology
from .bimodule import DggBimodule
from .dgalgebra import DggAlgebra, Element
from .intlinalg import IntMatrix, kernel_basis_mod, rank_mod, solve_mod


class ResolutionBoundError(RuntimeError):
    """No finite projective resolution within the configured bound."""


def _mod(m: IntMatrix, l: int) -> IntMatrix:
    return IntMatrix(m.rows, m.cols, [e % l for e in m.entries])


def _reduce_columns(cols: list[tuple[int, ...]], dim: int, l: int) -> list[tuple[int, ...]]:
    """Deterministic independent subset spanning the same space mod l."""
    rows: list[list[int]] = []
    keep: list[tuple[int, ...]] = []
    pivots: dict[int, list[int]] = {}
    for v in cols:
        w = [e % l for e in v]
        for p, r in pivots.items():
            if w[p]:
                c = w[p]
                w = [(x - c * y) % l for x, y in zip(w, r)]
        p = next((i for i, e in enumerate(w) if e), None)
        if p is None:
            continue
        inv = pow(w[p], -1, l)
        r = [(x * inv) % l for x in w]
        pivots[p] = r
        keep.append(tuple(e % l for e in v))
    return keep


@dataclass(frozen=True)
class RightModule:
    """Finite-dimensional graded right module over a field-mode algebra.

    ``action[b]`` is the matrix of right multiplication by the algebra
    basis element ``b`` on column coordinates; slots carry bidegrees and
    every action matrix must be homogeneous of that element's degree.
    """

    algebra: DggAlgebra
    bidegrees: tuple[Bidegree, ...]
    action: dict[str, IntMatrix]

    def __post_init__(self):
        b = self.algebra
        if b.module.mode != "Fl":
            raise ValueError("right modules require field coefficients")
        l = b.module.l
        n = len(self.bidegrees)
        object.__setattr__(
            self, "bidegrees", tuple(tuple(d) for d in self.bidegrees)
        )
        act = {}
        for lab in b.labels():
            mat = self.action.get(lab)
            if mat is None:
                mat = IntMatrix.zero(n, n)
            if mat.shape != (n, n):
                raise ValueError(f"action of {lab!r} has shape {mat.shape}")
            act[lab] = _mod(mat, l)
        object.__setattr__(self, "action", act)
        # unit acts as the identity
        if not act[b.unit].eq_mod(IntMatrix.identity(n), l):
            raise ValueError("unit does not act as the identity")
        # homogeneity
        for lab, mat in act.items():
            di, dj = b.degree(lab)
            for r in range(n):
                for c in range(n):
                    if mat.entry(r, c) % l:
                        si, sj = self.bidegrees[c]
                        if self.bidegrees[r] != (si + di, sj + dj):
                            raise ValueError(
                                f"action of {lab!r} is not homogeneous"
                            )
        # multiplicativity against the full product table
        for x in b.labels():
            for y in b.labels():
                out = b.product.get((x, y), {})
                lhs = IntMatrix.zero(n, n)
                for z, c in out.items():
                    lhs = lhs + act[z].scale(c)
                rhs = act[y] @ act[x]
                if not lhs.eq_mod(rhs, l):
                    raise ValueError(
                        f"action is not multiplicative on ({x!r}, {y!r})"
                    )

    @property
    def dim(self) -> int:
        return len(self.bidegrees)

    def act_matrix(self, elem: Mapping[str, int]) -> IntMatrix:
        n = self.dim
        out = IntMatrix.zero(n, n)
        for lab, c in elem.items():
            out = out + self.action[lab].scale(c)
        return _mod(out, self.algebra.module.l)


def zero_module(b: DggAlgebra) -> RightModule:
    return RightModule(b, (), {})


def regular_right_module(b: DggAlgebra) -> RightModule:
    labels = b.labels()
    degs = tuple(b.degree(lab) for lab in labels)
    action = {}
    for lab in labels:
        cols = []
        for src in labels:
            out = b.multiply({src: 1}, {lab: 1})
            cols.append(tuple(out.get(t, 0) for t in labels))
        action[lab] = IntMatrix.from_columns(cols, len(labels))
    return RightModule(b, degs, action)


def right_module_of(m: DggBimodule) -> RightModule:
    """The underlying right module of a bimodule (left action forgotten)."""
    labels = m.labels()
    degs = tuple(m.degree(lab) for lab in labels)
    action = {}
    for lab in m.right.labels():
        cols = []
        for src in labels:
            out = m.act_right({src: 1}, {lab: 1})
            cols.append(tuple(out.get(t, 0) for t in labels))
        action[lab] = IntMatrix.from_columns(cols, len(labels))
    return RightModule(m.right, degs, action)


def shift_module(m: RightModule, di: int, dj: int) -> RightModule:
    return RightModule(
        m.algebra,
        tuple((i + di, j + dj) for (i, j) in m.bidegrees),
        dict(m.action),
    )


def direct_sum_modules(a: RightModule, b: RightModule) -> RightModule:
    if a.algebra is not b.algebra and a.algebra != b.algebra:
        raise ValueError("direct sum over different algebras")
    n, m = a.dim, b.dim
    action = {}
    for lab in a.algebra.labels():
        rows = []
        for r in range(n):
            rows.append(list(a.action[lab].row(r)) + [0] * m)
        for r in range(m):
            rows.append([0] * n + list(b.action[lab].row(r)))
        action[lab] = IntMatrix.from_rows(rows) if rows else IntMatrix.zero(0, 0)
    return RightModule(a.algebra, a.bidegrees + b.bidegrees, action)


def submodule(parent: RightModule, vectors: list[tuple[int, ...]]):
    """Submodule spanned by homogeneous vectors; returns (module, inclusion)."""
    l = parent.algebra.module.l
    basis = _reduce_columns(vectors, parent.dim, l)
    if not basis:
        return zero_module(parent.algebra), IntMatrix(parent.dim, 0, [])
    degs = []
    for v in basis:
        support = {parent.bidegrees[i] for i, e in enumerate(v) if e % l}
        if len(support) != 1:
            raise ValueError("submodule generator is not homogeneous")
        degs.append(support.pop())
    k = IntMatrix.from_columns(basis, parent.dim)
    action = {
        lab: solve_mod(k, _mod(parent.action[lab] @ k, l), l)
        for lab in parent.algebra.labels()
    }
    return RightModule(parent.algebra, tuple(degs), action), k


def graded_kernel(
    f: IntMatrix,
    src: RightModule,
    tgt_bidegrees: tuple[Bidegree, ...],
    shift: Bidegree = (0, 0),
):
    """Kernel of a homogeneous module map as a submodule of the source."""
    l = src.algebra.module.l
    vectors: list[tuple[int, ...]] = []
    for beta in sorted(set(src.bidegrees)):
        cols = [c for c, d in enumerate(src.bidegrees) if d == beta]
        target = (beta[0] + shift[0], beta[1] + shift[1])
        rows = [r for r, d in enumerate(tgt_bidegrees) if d == target]
        other = [r for r in range(len(tgt_bidegrees)) if r not in rows]
        for c in cols:
            for r in other:
                if f.entry(r, c) % l:
                    raise ValueError("map is not homogeneous of the given shift")
        block = IntMatrix.from_rows(
            [[f.entry(r, c) for c in cols] for r in rows]
        ) if rows else IntMatrix(0, len(cols), [])
        for v in kernel_basis_mod(block, l):
            full = [0] * src.dim
            for c, e in zip(cols, v):
                full[c] = e
            vectors.append(tuple(full))
    return submodule(src, vectors)


# -- semisimple-plus-radical data ------------------------------------------


@dataclass(frozen=True)
class SemiperfectData:
    idempotents: tuple[Element, ...]
    radical: tuple[str, ...]  # labels spanning the radical


def semiperfect_data(b: DggAlgebra) -> SemiperfectData:
    """Orthogonal idempotents spanning the (0, 0) part plus the nilpotent
    complement. Raises if the algebra does not have this shape."""
    if b.module.mode != "Fl":
        raise ValueError("resolutions require field coefficients")
    l = b.module.l
    for mat in b.module.differentials.values():
        if not mat.is_zero_mod(l):
            raise ValueError("resolutions require a zero differential on the algebra")
    zero_part = list(b.basis_at((0, 0)))
    others = [lab for lab in zero_part if lab != b.unit]
    if not others:
        idems: list[Element] = [b.unit_element()]
    else:
        for e in others:
            if not b.elements_equal(b.multiply({e: 1}, {e: 1}), {e: 1}):
                raise ValueError(f"(0,0) basis element {e!r} is not idempotent")
        for x in others:
            for y in others:
                if x != y and b.reduce(b.multiply({x: 1}, {y: 1})):
                    raise ValueError(f"idempotents {x!r}, {y!r} are not orthogonal")
        rest = b.unit_element()
        for e in others:
            rest = {k: v for k, v in
                    {**rest, e: rest.get(e, 0) - 1}.items() if v}
        rest = b.reduce(rest)
        idems = [{lab: 1} for lab in others]
        if rest:
            if not b.elements_equal(b.multiply(rest, rest), rest):
                raise ValueError("complementary (0,0) element is not idempotent")
            for e in others:
                if b.reduce(b.multiply(rest, {e: 1})) or b.reduce(
                    b.multiply({e: 1}, rest)
                ):
                    raise ValueError("complementary idempotent is not orthogonal")
            idems.append(rest)

    radical = [lab for lab in b.labels() if b.degree(lab) != (0, 0)]
    # the span of the radical labels must be an ideal missing (0, 0) ...
    for x in radical:
        for y in radical:
            out = b.product.get((x, y), {})
            if any(b.degree(z) == (0, 0) and (c % l) for z, c in out.items()):
                raise ValueError(
                    "products of positive-degree elements reach degree (0,0); "
                    "the algebra is outside the supported shape"
                )
    # ... and nilpotent
    layer = [{lab: 1} for lab in radical]
    for _ in range(b.total_dimension() + 1):
        if not layer:
            break
        nxt = []
        for elem in layer:
            for r in radical:
                prod = b.reduce(b.multiply(elem, {r: 1}))
                if prod:
                    nxt.append(prod)
        # prune to an independent set to keep the iteration small
        labels = b.labels()
        vecs = [tuple(e.get(lab, 0) for lab in labels) for e in nxt]
        basis = _reduce_columns(vecs, len(labels), l)
        layer = [
            {lab: c for lab, c in zip(labels, v) if c} for v in basis
        ]
    if layer:
        raise ValueError("radical candidate is not nilpotent")
    return SemiperfectData(tuple(idems), tuple(radical))


@dataclass(frozen=True)
class _Ideal:
    module: RightModule       # e_k B as a right module
    embed: IntMatrix          # into the regular module
    gen: tuple[int, ...]      # coordinates of e_k in the ideal basis


def _ideals(b: DggAlgebra, sp: SemiperfectData) -> list[_Ideal]:
    reg = regular_right_module(b)
    labels = b.labels()
    out = []
    for e in sp.idempotents:
        vecs = []
        for lab in labels:
            prod = b.reduce(b.multiply(e, {lab: 1}))
            vecs.append(tuple(prod.get(t, 0) for t in labels))
        mod, embed = submodule(reg, vecs)
        e_vec = tuple(e.get(t, 0) for t in labels)
        gen = solve_mod(
            embed, IntMatrix.from_columns([e_vec], len(labels)), b.module.l
        ).column(0)
        out.append(_Ideal(mod, embed, gen))
    return out


# -- minimal covers -----------------------------------------------------------


@dataclass(frozen=True)
class Cover:
    module: RightModule
    summands: tuple[tuple[int, Bidegree], ...]  # (idempotent index, shift)
    layout: tuple[tuple[int, int], ...]         # slot -> (summand, ideal slot)
    map: IntMatrix                              # cover -> target


def minimal_cover(
    w: RightModule, sp: SemiperfectData, ideals: list[_Ideal]
) -> Cover:
    b = w.algebra
    l = b.module.l
    if w.dim == 0:
        return Cover(zero_module(b), (), (), IntMatrix(0, 0, []))

    # radical layer: W * rad
    rad_cols: list[tuple[int, ...]] = []
    for lab in sp.radical:
        mat = w.action[lab]
        for c in range(w.dim):
            col = mat.column(c)
            if any(e % l for e in col):
                rad_cols.append(col)
    rad_basis = _reduce_columns(rad_cols, w.dim, l)

    # per-bidegree complement coordinates of W / W*rad
    pivots_by_deg: dict[Bidegree, dict[int, list[int]]] = {}
    for v in rad_basis:
        deg = next(
            w.bidegrees[i] for i, e in enumerate(v) if e % l
        )
        piv = pivots_by_deg.setdefault(deg, {})
        vec = [e % l for e in v]
        for p, r in piv.items():
            if vec[p]:
                c = vec[p]
                vec = [(x - c * y) % l for x, y in zip(vec, r)]
        p = next(i for i, e in enumerate(vec) if e)
        inv = pow(vec[p], -1, l)
        piv[p] = [(x * inv) % l for x in vec]

    def reduce_vec(vec: list[int]) -> list[int]:
        vec = [e % l for e in vec]
        support = {w.bidegrees[i] for i, e in enumerate(vec) if e}
        for deg in support:
            for p, r in pivots_by_deg.get(deg, {}).items():
                if vec[p]:
                    c = vec[p]
                    vec = [(x - c * y) % l for x, y in zip(vec, r)]
        return vec

    pivot_slots = {p for piv in pivots_by_deg.values() for p in piv}
    free_slots = [i for i in range(w.dim) if i not in pivot_slots]

    # generators: a basis of (W / W rad) e_k for each idempotent e_k
    gens: list[tuple[int, tuple[int, ...]]] = []  # (idempotent index, lift in W)
    for k, e in enumerate(sp.idempotents):
        mat = w.act_matrix(e)
        cols = []
        for c in free_slots:
            img = reduce_vec(list(mat.column(c)))
            cols.append(tuple(img))
        quot_basis = _reduce_columns(cols, w.dim, l)
        for q in quot_basis:
            lift = mat.apply(q)  # multiply the lift by e_k on the right
            gens.append((k, tuple(e2 % l for e2 in lift)))

    summands = []
    layout = []
    cover_cols: list[tuple[int, ...]] = []
    degs: list[Bidegree] = []
    for k, g in gens:
        support = {w.bidegrees[i] for i, e in enumerate(g) if e % l}
        if len(support) != 1:
            raise ValueError("cover generator is not homogeneous")
        beta = support.pop()
        s_idx = len(summands)
        summands.append((k, beta))
        ideal = ideals[k]
        for t in range(ideal.module.dim):
            bi, bj = ideal.module.bidegrees[t]
            degs.append((beta[0] + bi, beta[1] + bj))
            layout.append((s_idx, t))
            # image of ideal slot t: g * u_t where u_t is the t-th basis
            # vector of e_k B, i.e. apply the corresponding algebra element
            u = ideal.embed.column(t)
            elem = {lab: c for lab, c in zip(w.algebra.labels(), u) if c}
            cover_cols.append(w.act_matrix(elem).apply(g))

    # assemble the cover module as the direct sum of the shifted ideals
    action: dict[str, IntMatrix] = {}
    n = len(degs)
    for lab in b.labels():
        rows = [[0] * n for _ in range(n)]
        offset = 0
        for (k, _beta) in summands:
            ideal = ideals[k]
            m = ideal.module.action[lab]
            d = ideal.module.dim
            for r in range(d):
                for c in range(d):
                    rows[offset + r][offset + c] = m.entry(r, c)
            offset += d
        action[lab] = IntMatrix.from_rows(rows) if n else IntMatrix.zero(0, 0)
    cover_mod = RightModule(b, tuple(degs), action)
    cover_map = (
        IntMatrix.from_columns(cover_cols, w.dim) if n else IntMatrix(w.dim, 0, [])
    )

    # Nakayama: the lifted generators must cover W
    if rank_mod(cover_map, l) != w.dim:
        raise RuntimeError("minimal cover failed to surject")
    return Cover(cover_mod, tuple(summands), tuple(layout), cover_map)


# -- resolutions of bounded complexes ----------------------------------------


@dataclass(frozen=True)
class ModuleComplex:
    """Bounded complex of right modules; differentials raise the level."""

    algebra: DggAlgebra
    levels: dict[int, RightModule]
    diffs: dict[int, IntMatrix]

    def __post_init__(self):
        levels = {int(j): m for j, m in self.levels.items() if m.dim}
        diffs = {}
        for j, mat in self.diffs.items():
            src = levels.get(j)
            tgt = levels.get(j + 1)
            if src is None or tgt is None:
                continue
            if mat.shape != (tgt.dim, src.dim):
                raise ValueError(f"differential at level {j} has wrong shape")
            diffs[int(j)] = mat
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "diffs", diffs)

    def level(self, j: int) -> RightModule:
        return self.levels.get(j, zero_module(self.algebra))

    def diff(self, j: int) -> IntMatrix:
        d = self.diffs.get(j)
        if d is None:
            return IntMatrix.zero(self.level(j + 1).dim, self.level(j).dim)
        return d


def complex_of_bimodule(m: DggBimodule) -> ModuleComplex:
    """Slice a bimodule into a complex of right modules over its right
    algebra, which must be concentrated in cohomological degree zero."""
    b = m.right
    if any(j != 0 for (_, j) in b.module.components):
        raise ValueError(
            "slicing requires the acting algebra concentrated in "
            "cohomological degree zero"
        )
    labels_by_level: dict[int, list[str]] = {}
    for bd in sorted(m.component_basis):
        for lab in m.component_basis[bd]:
            labels_by_level.setdefault(bd[1], []).append(lab)
    levels = {}
    index_of: dict[str, tuple[int, int]] = {}
    for j, labs in labels_by_level.items():
        degs = tuple(m.degree(lab) for lab in labs)
        action = {}
        for blab in b.labels():
            cols = []
            for src in labs:
                out = m.act_right({src: 1}, {blab: 1})
                cols.append(tuple(out.get(t, 0) for t in labs))
            action[blab] = IntMatrix.from_columns(cols, len(labs))
        levels[j] = RightModule(b, degs, action)
        for s, lab in enumerate(labs):
            index_of[lab] = (j, s)
    diffs = {}
    for j, labs in labels_by_level.items():
        tgt = labels_by_level.get(j + 1)
        if not tgt:
            continue
        cols = []
        for lab in labs:
            img = m.differential({lab: 1})
            cols.append(tuple(img.get(t, 0) for t in tgt))
        diffs[j] = IntMatrix.from_columns(cols, len(tgt))
    return ModuleComplex(b, levels, diffs)


@dataclass(frozen=True)
class Resolution:
    """Levelwise minimal projective resolution P -> M of a bounded complex."""

    algebra: DggAlgebra
    covers: dict[int, Cover]
    d: dict[int, IntMatrix]        # P^j -> P^{j+1}
    augment: dict[int, IntMatrix]  # P^j -> M^j
    length: int                    # levels below the lowest level of M

    def level(self, j: int) -> RightModule:
        c = self.covers.get(j)
        return c.module if c else zero_module(self.algebra)


def resolve_complex(mc: ModuleComplex, max_length: int = 12) -> Resolution:
    """Resolve a bounded complex by projectives, building downward.

    At each level the next projective covers the fiber product of the
    complex with the cycles of the part already built; with minimal
    covers the construction stops exactly when the complex has a finite
    resolution. Raises :class:`ResolutionBoundError` past the cap.
    """
    b = mc.algebra
    sp = semiperfect_data(b)
    ideals = _ideals(b, sp)
    if not mc.levels:
        return Resolution(b, {}, {}, {}, 0)
    jmax, jmin = max(mc.levels), min(mc.levels)
    covers: dict[int, Cover] = {}
    d_p: dict[int, IntMatrix] = {}
    augment: dict[int, IntMatrix] = {}
    j = jmax
    while True:
        p_next = covers.get(j + 1)
        p_next_mod = p_next.module if p_next else zero_module(b)
        d_next = d_p.get(j + 1, IntMatrix.zero(
            covers[j + 2].module.dim if (j + 2) in covers else 0, p_next_mod.dim
        ))
        z_mod, z_incl = graded_kernel(
            d_next,
            p_next_mod,
            covers[j + 2].module.bidegrees if (j + 2) in covers else (),
            shift=(0, 1),
        )
        m_j = mc.level(j)
        m_next = mc.level(j + 1)
        # fiber product of d: M^j -> M^{j+1} with f^{j+1} on cycles
        z_virtual = shift_module(z_mod, 0, -1)
        dsum = direct_sum_modules(m_j, z_virtual)
        f_next = augment.get(j + 1, IntMatrix.zero(m_next.dim, p_next_mod.dim))
        left = mc.diff(j)
        right = _mod((f_next @ z_incl).scale(-1), b.module.l)
        g = left.hstack(right) if dsum.dim else IntMatrix(m_next.dim, 0, [])
        w_mod, w_incl = graded_kernel(g, dsum, m_next.bidegrees, shift=(0, 1))
        if w_mod.dim == 0 and j <= jmin:
            break
        cover = minimal_cover(w_mod, sp, ideals)
        covers[j] = cover
        into_dsum = w_incl @ cover.map
        # split the composite into its M^j and Z parts
        aug_rows = [into_dsum.row(r) for r in range(m_j.dim)]
        z_rows = [into_dsum.row(r) for r in range(m_j.dim, dsum.dim)]
        augment[j] = (
            IntMatrix.from_rows(aug_rows)
            if aug_rows
            else IntMatrix(0, cover.module.dim, [])
        )
        z_part = (
            IntMatrix.from_rows(z_rows)
            if z_rows
            else IntMatrix(0, cover.module.dim, [])
        )
        d_p[j] = _mod(z_incl @ z_part, b.module.l)
        j -= 1
        if j < jmin - max_length:
            raise ResolutionBoundError(
                f"no projective resolution within {max_length} steps below "
                f"level {jmin}"
            )
    return Resolution(b, covers, d_p, augment, jmin - (j + 1) if covers else 0)


# -- generator check -----------------------------------------------------------


@dataclass(frozen=True)
class GeneratorCheck:
    status: str                 # "generates" | "inconclusive"
    resolution_length: int | None
    bound: int

    @property
    def conclusive(self) -> bool:
        return self.status == "generates"


def generator_check(a: DggAlgebra, m: RightModule, bound: int = 12) -> GeneratorCheck:
    """Bounded test that ``m`` lies in the thick closure of the free module.

    A finite resolution by finitely generated projectives witnesses
    membership; if none appears within ``bound`` steps the check reports
    "inconclusive" rather than failure.
    """
    if m.algebra != a:
        raise ValueError("module is not over the given algebra")
    mc = ModuleComplex(a, {0: m}, {})
    try:
        res = resolve_complex(mc, max_length=bound)
    except ResolutionBoundError:
        return GeneratorCheck("inconclusive", None, bound)
    length = 0 if not res.covers else max(0, -min(res.covers))
    return GeneratorCheck("generates", length, bound)


# -- derived tensor product ---------------------------------------------------


def _left_matrices(n: DggBimodule) -> dict[str, IntMatrix]:
    labels = n.labels()
    out = {}
    for blab in n.left.labels():
        cols = []
        for src in labels:
            img = n.act_left({blab: 1}, {src: 1})
            cols.append(tuple(img.get(t, 0) for t in labels))
        out[blab] = IntMatrix.from_columns(cols, len(labels))
    return out


def _flat_differential(n: DggBimodule) -> IntMatrix:
    labels = n.labels()
    cols = []
    for src in labels:
        img = n.differential({src: 1})
        cols.append(tuple(img.get(t, 0) for t in labels))
    return IntMatrix.from_columns(cols, len(labels))


def tensor_with_resolution(res: Resolution, n: DggBimodule) -> ModuleComplex:
    """Total complex of P (x)_B n as a complex of right modules over the
    right algebra of ``n``."""
    b = res.algebra
    if n.left != b:
        raise ValueError("middle algebras do not match")
    c_alg = n.right
    if any(j != 0 for (_, j) in c_alg.module.components):
        raise ValueError(
            "chained tensors require the outer algebra concentrated in "
            "cohomological degree zero"
        )
    l = b.module.l
    sp = semiperfect_data(b)
    ideals = _ideals(b, sp)
    left_mats = _left_matrices(n)
    d_n = _flat_differential(n)
    n_labels = n.labels()
    n_dim = len(n_labels)
    n_degs = [n.degree(lab) for lab in n_labels]

    def left_matrix(elem: Element) -> IntMatrix:
        out = IntMatrix.zero(n_dim, n_dim)
        for lab, c in elem.items():
            out = out + left_mats[lab].scale(c)
        return _mod(out, l)

    # e_k * n for each idempotent: basis plus degree data
    slices = []
    for e in sp.idempotents:
        mat = left_matrix(e)
        cols = [mat.column(c) for c in range(n_dim)]
        basis = _reduce_columns([c for c in cols if any(x % l for x in c)], n_dim, l)
        degs = []
        for v in basis:
            support = {n_degs[i] for i, x in enumerate(v) if x % l}
            if len(support) != 1:
                raise ValueError("idempotent slice of n is not homogeneous")
            degs.append(support.pop())
        k = IntMatrix.from_columns(basis, n_dim) if basis else IntMatrix(n_dim, 0, [])
        slices.append((k, tuple(degs)))

    # slots of the tensor complex: (resolution level, summand, slice slot);
    # a summand generator's bidegree already carries its level in the
    # cohomological component, so the total degree is a plain sum
    slots: list[tuple[int, int, int]] = []
    slot_deg: dict[tuple[int, int, int], Bidegree] = {}
    for j, cover in res.covers.items():
        for s, (k_idx, beta) in enumerate(cover.summands):
            if beta[1] != j:
                raise RuntimeError("summand level bookkeeping is inconsistent")
            _, degs = slices[k_idx]
            for t, (di, dj) in enumerate(degs):
                slots.append((j, s, t))
                slot_deg[(j, s, t)] = (beta[0] + di, beta[1] + dj)

    # decompose the resolution differential into B-elements per summand pair
    def summand_elements(j: int) -> dict[tuple[int, int], Element]:
        """For d: P^j -> P^{j+1}: (target summand, source summand) -> element."""
        out: dict[tuple[int, int], Element] = {}
        cover = res.covers[j]
        nxt = res.covers.get(j + 1)
        if nxt is None:
            return out
        d = res.d[j]
        labels = b.labels()
        for s, (k_idx, _beta) in enumerate(cover.summands):
            ideal = ideals[k_idx]
            # column of the generator e_k inside summand s
            gen_full = [0] * cover.module.dim
            for slot, (s_idx, t_idx) in enumerate(cover.layout):
                if s_idx == s:
                    gen_full[slot] = ideal.gen[t_idx]
            img = d.apply(gen_full)
            for s2, (k2, _beta2) in enumerate(nxt.summands):
                ideal2 = ideals[k2]
                coords = [0] * ideal2.module.dim
                for slot, (s_idx, t_idx) in enumerate(nxt.layout):
                    if s_idx == s2:
                        coords[t_idx] = img[slot] % l
                if not any(coords):
                    continue
                amb = ideal2.embed.apply(coords)
                elem = {lab: c % l for lab, c in zip(labels, amb) if c % l}
                if elem:
                    out[(s2, s)] = elem
        return out

    # assemble the bigraded total complex entries
    index_of = {key: idx for idx, key in enumerate(slots)}
    entries: dict[tuple[int, int], int] = {}

    for j, cover in res.covers.items():
        elems = summand_elements(j)
        nxt = res.covers.get(j + 1)
        for s, (k_idx, _beta) in enumerate(cover.summands):
            k_mat, k_degs = slices[k_idx]
            # internal differential of n, with the Koszul sign of level j
            sign = -1 if j % 2 else 1
            if k_mat.cols:
                inner = solve_mod(k_mat, _mod(d_n @ k_mat, l), l)
                for t_src in range(len(k_degs)):
                    for t_tgt in range(len(k_degs)):
                        c = inner.entry(t_tgt, t_src) % l
                        if c:
                            r = index_of[(j, s, t_tgt)]
                            cc = index_of[(j, s, t_src)]
                            entries[(r, cc)] = (entries.get((r, cc), 0) + sign * c) % l
            if nxt is None:
                continue
            for (s2, s_src), elem in elems.items():
                if s_src != s:
                    continue
                k2_idx = nxt.summands[s2][0]
                k2_mat, k2_degs = slices[k2_idx]
                if not (k_mat.cols and k2_mat.cols):
                    continue
                mapped = solve_mod(k2_mat, _mod(left_matrix(elem) @ k_mat, l), l)
                for t_src in range(len(k_degs)):
                    for t_tgt in range(len(k2_degs)):
                        c = mapped.entry(t_tgt, t_src) % l
                        if c:
                            r = index_of[(j + 1, s2, t_tgt)]
                            cc = index_of[(j, s, t_src)]
                            entries[(r, cc)] = (entries.get((r, cc), 0) + c) % l

    # regroup by total cohomological degree into a ModuleComplex over C
    by_level: dict[int, list[int]] = {}
    for idx, key in enumerate(slots):
        by_level.setdefault(slot_deg[key][1], []).append(idx)

    levels: dict[int, RightModule] = {}
    for lev, idxs in by_level.items():
        degs = tuple(slot_deg[slots[i]] for i in idxs)
        action: dict[str, IntMatrix] = {}
        for clab in c_alg.labels():
            rows = [[0] * len(idxs) for _ in range(len(idxs))]
            # C acts inside each slice summand
            for col_pos, idx in enumerate(idxs):
                j, s, t = slots[idx]
                k_idx = res.covers[j].summands[s][0]
                k_mat, _ = slices[k_idx]
                # right action of c on e_k n in slice coordinates
                rc = _right_matrix_on_slice(n, k_mat, clab, l)
                for row_pos, idx2 in enumerate(idxs):
                    j2, s2, t2 = slots[idx2]
                    if (j2, s2) == (j, s):
                        rows[row_pos][col_pos] = rc.entry(t2, t)
            action[clab] = (
                IntMatrix.from_rows(rows) if idxs else IntMatrix.zero(0, 0)
            )
        levels[lev] = RightModule(c_alg, degs, action)

    position = {
        idx: (lev, pos)
        for lev, idxs in by_level.items()
        for pos, idx in enumerate(idxs)
    }
    diffs: dict[int, IntMatrix] = {}
    for lev, idxs in by_level.items():
        tgt = by_level.get(lev + 1)
        if tgt:
            diffs[lev] = IntMatrix.zero(len(tgt), len(idxs)).to_lists()
    for (r, c), v in entries.items():
        lev_c, pos_c = position[c]
        lev_r, pos_r = position[r]
        if lev_r != lev_c + 1:
            raise RuntimeError("tensor differential is not homogeneous in degree")
        diffs[lev_c][pos_r][pos_c] = v
    return ModuleComplex(
        c_alg,
        levels,
        {lev: IntMatrix.from_rows(rows) for lev, rows in diffs.items()},
    )


def _right_matrix_on_slice(
    n: DggBimodule, k_mat: IntMatrix, clab: str, l: int
) -> IntMatrix:
    labels = n.labels()
    cols = []
    for t in range(k_mat.cols):
        vec = k_mat.column(t)
        elem = {lab: c for lab, c in zip(labels, vec) if c}
        img = n.act_right(elem, {clab: 1})
        cols.append(tuple(img.get(lab2, 0) for lab2 in labels))
    img_mat = IntMatrix.from_columns(cols, len(labels))
    return solve_mod(k_mat, _mod(img_mat, l), l)


def complex_cohomology(mc: ModuleComplex) -> CohomologyTable:
    """Cohomology of a complex of graded modules, as a bigraded table."""
    l = mc.algebra.module.l
    comps: dict[Bidegree, int] = {}
    slot_index: dict[tuple[int, int], tuple[Bidegree, int]] = {}
    for j, mod in mc.levels.items():
        for s, deg in enumerate(mod.bidegrees):
            comps[deg] = comps.get(deg, 0) + 1
            slot_index[(j, s)] = (deg, comps[deg] - 1)
    diffs: dict[Bidegree, list[list[int]]] = {}
    for j, mat in mc.diffs.items():
        src = mc.levels[j]
        tgt = mc.levels[j + 1]
        for c in range(src.dim):
            for r in range(tgt.dim):
                v = mat.entry(r, c) % l
                if not v:
                    continue
                bd_src, c_idx = slot_index[(j, c)]
                bd_tgt, r_idx = slot_index[(j + 1, r)]
                if bd_tgt != (bd_src[0], bd_src[1] + 1):
                    raise ValueError("complex differential is not homogeneous")
                block = diffs.setdefault(
                    bd_src,
                    [[0] * comps[bd_src] for _ in range(comps.get(bd_tgt, 0))],
                )
                block[r_idx][c_idx] = v
    module = BigradedModule(
        comps,
        {
            bd: IntMatrix.from_rows(rows)
            for bd, rows in diffs.items()
            if rows
        },
        mode="Fl",
        l=l,
    )
    return cohomology(module)


def derived_tensor_complex(
    mc: ModuleComplex, n: DggBimodule, max_length: int = 12
) -> ModuleComplex:
    """Resolve ``mc`` over its algebra and tensor with ``n``; chainable."""
    res = resolve_complex(mc, max_length=max_length)
    return tensor_with_resolution(res, n)


def derived_tensor(
    m: DggBimodule, n: DggBimodule, max_length: int = 12
) -> CohomologyTable:
    """Cohomology of the derived tensor product m (x)^L_B n.

    Field coefficients; the shared middle algebra must have zero
    differential and sit in cohomological degree zero, and a finite
    projective resolution of ``m`` must exist within ``max_length``
    steps (otherwise :class:`ResolutionBoundError`).
    """
    if m.right != n.left:
        raise ValueError("bimodules do not share their middle algebra")
    mc = complex_of_bimodule(m)
    return complex_cohomology(derived_tensor_complex(mc, n, max_length))
