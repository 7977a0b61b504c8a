"""Multiplicative structure on bigraded complexes.

A :class:`DggAlgebra` wraps a :class:`~formalis.bigraded.BigradedModule`
with named basis elements, sparse structure constants and a unit. The
module provides an exhaustive axiom checker (degree additivity,
associativity, unit, Leibniz), the diagonal subalgebra of a pure
algebra, and the two-sided verification of the formality roof

    A  <-  S(A)  ->  H(A)

where both maps are produced as explicit chain maps and certified to be
multiplicative quasi-isomorphisms.

Sign convention, fixed throughout the package: the Leibniz rule is
d(ab) = d(a) b + (-1)^{|a|} a d(b) with |a| the cohomological degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .bigraded import (
    Bidegree,
    BigradedModule,
    ChainMap,
    CohomologyTable,
    NotPureError,
    QuasiIsoCertificate,
    _quotient_data,
    _s_complex,
    certify_quasi_iso,
    cohomology,
    purity_violations,
    purity_weight,
)
from .intlinalg import IntMatrix, smith_normal_form, solve_exact, solve_mod

Element = dict[str, int]


def _clean(elem: Mapping[str, int]) -> Element:
    return {k: int(v) for k, v in elem.items() if int(v) != 0}


def add_elements(a: Mapping[str, int], b: Mapping[str, int]) -> Element:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return _clean(out)


def scale_element(c: int, a: Mapping[str, int]) -> Element:
    return _clean({k: c * v for k, v in a.items()})


@dataclass(frozen=True)
class DggAlgebra:
    """Bigraded differential algebra with explicit structure constants.

    ``component_basis`` assigns ordered labels to each component of the
    underlying module; ``product`` maps pairs of labels to sparse
    integer combinations of labels (missing pairs multiply to zero).
    """

    module: BigradedModule
    component_basis: dict[Bidegree, tuple[str, ...]]
    product: dict[tuple[str, str], Element]
    unit: str

    def __post_init__(self):
        comp_basis = {
            tuple(k): tuple(v) for k, v in self.component_basis.items() if v
        }
        degree_of: dict[str, Bidegree] = {}
        slot_of: dict[str, int] = {}
        for bd, labels in comp_basis.items():
            if self.module.rank_at(bd) != len(labels):
                raise ValueError(
                    f"component {bd}: {len(labels)} labels for rank "
                    f"{self.module.rank_at(bd)}"
                )
            for s, lab in enumerate(labels):
                if lab in degree_of:
                    raise ValueError(f"duplicate basis label {lab!r}")
                degree_of[lab] = bd
                slot_of[lab] = s
        if set(comp_basis) != set(self.module.components):
            raise ValueError("basis does not cover every component")
        if self.unit not in degree_of:
            raise ValueError(f"unit label {self.unit!r} unknown")
        prod = {}
        for (a, b), out in self.product.items():
            if a not in degree_of or b not in degree_of:
                raise ValueError(f"product entry ({a!r}, {b!r}) uses unknown label")
            cleaned = _clean(out)
            for c in cleaned:
                if c not in degree_of:
                    raise ValueError(f"product output label {c!r} unknown")
            if cleaned:
                prod[(a, b)] = cleaned
        object.__setattr__(self, "component_basis", comp_basis)
        object.__setattr__(self, "product", prod)
        object.__setattr__(self, "_degree_of", degree_of)
        object.__setattr__(self, "_slot_of", slot_of)

    # -- construction helpers -----------------------------------------

    @classmethod
    def build(
        cls,
        basis: Mapping[Bidegree, Iterable[str]],
        differentials: Mapping[Bidegree, IntMatrix],
        product: Mapping[tuple[str, str], Mapping[str, int]],
        unit: str,
        mode: str = "Z",
        l: int | None = None,
    ) -> "DggAlgebra":
        comp_basis = {tuple(k): tuple(v) for k, v in basis.items()}
        module = BigradedModule(
            {k: len(v) for k, v in comp_basis.items()},
            dict(differentials),
            mode=mode,
            l=l,
        )
        return cls(module, comp_basis, {k: dict(v) for k, v in product.items()}, unit)

    # -- basic queries --------------------------------------------------

    def degree(self, label: str) -> Bidegree:
        return self._degree_of[label]

    def labels(self) -> list[str]:
        return [lab for bd in sorted(self.component_basis) for lab in self.component_basis[bd]]

    def basis_at(self, bidegree: Bidegree) -> tuple[str, ...]:
        return self.component_basis.get(tuple(bidegree), ())

    def total_dimension(self) -> int:
        return self.module.total_dimension()

    # -- element arithmetic ----------------------------------------------

    def reduce(self, elem: Mapping[str, int]) -> Element:
        if self.module.mode == "Fl":
            return _clean({k: v % self.module.l for k, v in elem.items()})
        return _clean(elem)

    def elements_equal(self, a: Mapping[str, int], b: Mapping[str, int]) -> bool:
        diff = add_elements(a, scale_element(-1, b))
        return not self.reduce(diff)

    def multiply(self, a: Mapping[str, int], b: Mapping[str, int]) -> Element:
        out: Element = {}
        for x, cx in a.items():
            for y, cy in b.items():
                entry = self.product.get((x, y))
                if entry:
                    for z, cz in entry.items():
                        out[z] = out.get(z, 0) + cx * cy * cz
        return self.reduce(out)

    def differential(self, elem: Mapping[str, int]) -> Element:
        out: Element = {}
        for lab, c in elem.items():
            bd = self._degree_of[lab]
            mat = self.module.differential_at(bd)
            if mat is None:
                continue
            col = mat.column(self._slot_of[lab])
            i, j = bd
            targets = self.basis_at((i, j + 1))
            for t, coeff in zip(targets, col):
                if coeff:
                    out[t] = out.get(t, 0) + c * coeff
        return self.reduce(out)

    def component_vector(self, elem: Mapping[str, int], bidegree: Bidegree) -> tuple[int, ...]:
        labels = self.basis_at(bidegree)
        return tuple(elem.get(lab, 0) for lab in labels)

    def element_from_vector(self, bidegree: Bidegree, vector) -> Element:
        labels = self.basis_at(bidegree)
        return self.reduce({lab: v for lab, v in zip(labels, vector)})

    def unit_element(self) -> Element:
        return {self.unit: 1}


# -- axiom checking ----------------------------------------------------


@dataclass(frozen=True)
class AxiomViolation:
    rule: str
    witness: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[AxiomViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_rule(self, rule: str) -> list[AxiomViolation]:
        return [v for v in self.violations if v.rule == rule]


def check_dgg_axioms(a: DggAlgebra) -> AxiomReport:
    """Verify degree additivity, unit, associativity and Leibniz.

    Every check is exact and exhaustive over the basis; the report lists
    each violation with the witnessing labels.
    """
    bad: list[AxiomViolation] = []
    labels = a.labels()

    if a.degree(a.unit) != (0, 0):
        bad.append(
            AxiomViolation("unit-degree", (a.unit,), f"unit sits at {a.degree(a.unit)}")
        )

    for (x, y), out in a.product.items():
        dx, dy = a.degree(x), a.degree(y)
        want = (dx[0] + dy[0], dx[1] + dy[1])
        for z in out:
            if a.degree(z) != want:
                bad.append(
                    AxiomViolation(
                        "degree-additivity",
                        (x, y),
                        f"{x}*{y} hits {z} at {a.degree(z)}, expected {want}",
                    )
                )
                break

    one = a.unit_element()
    for x in labels:
        ex = {x: 1}
        if not a.elements_equal(a.multiply(one, ex), ex):
            bad.append(AxiomViolation("unit-left", (x,), f"1*{x} != {x}"))
        if not a.elements_equal(a.multiply(ex, one), ex):
            bad.append(AxiomViolation("unit-right", (x,), f"{x}*1 != {x}"))

    for x in labels:
        for y in labels:
            xy = a.multiply({x: 1}, {y: 1})
            for z in labels:
                lhs = a.multiply(xy, {z: 1})
                rhs = a.multiply({x: 1}, a.multiply({y: 1}, {z: 1}))
                if not a.elements_equal(lhs, rhs):
                    bad.append(
                        AxiomViolation(
                            "associativity", (x, y, z), f"({x}{y}){z} != {x}({y}{z})"
                        )
                    )

    for x in labels:
        sign = -1 if a.degree(x)[1] % 2 else 1
        for y in labels:
            lhs = a.differential(a.multiply({x: 1}, {y: 1}))
            rhs = add_elements(
                a.multiply(a.differential({x: 1}), {y: 1}),
                scale_element(sign, a.multiply({x: 1}, a.differential({y: 1}))),
            )
            if not a.elements_equal(lhs, rhs):
                bad.append(
                    AxiomViolation("leibniz", (x, y), f"d({x}*{y}) fails Leibniz")
                )

    return AxiomReport(tuple(bad))


# -- diagonal subalgebra ------------------------------------------------


def _basis_with_first(u: tuple[int, ...], mode: str, l: int | None) -> IntMatrix:
    """Invertible matrix whose first column is ``u``.

    Over Z requires ``u`` primitive; over F_l requires ``u`` nonzero.
    The remaining columns come from the inverse left Smith transform of
    ``u`` seen as a single column, which completes it to a basis.
    """
    z = len(u)
    col = IntMatrix.from_columns([u], z)
    snf = smith_normal_form(col)
    lt_inv = solve_exact(snf.left_transform, IntMatrix.identity(z))
    cols = [lt_inv.column(j) for j in range(z)]
    first = cols[0]  # equals u up to the sign and the content of u
    if mode == "Z":
        if snf.diagonal != (1,):
            raise ValueError("vector is not primitive")
        if first != tuple(u):
            first = tuple(-e for e in first)
        if first != tuple(u):
            raise ValueError("basis completion failed")
        cols[0] = first
    else:
        idx = next((i for i, e in enumerate(first) if e % l), None)
        if idx is None:
            raise ValueError("cannot complete the zero vector")
        alpha = (u[idx] % l) * pow(first[idx] % l, -1, l) % l
        if alpha == 0:
            raise ValueError("cannot complete the zero vector")
        scaled = tuple((alpha * e) % l for e in first)
        if scaled != tuple(e % l for e in u):
            raise ValueError("basis completion failed mod l")
        cols[0] = scaled
    return IntMatrix.from_columns(cols, z)


def _invert(u: IntMatrix, mode: str, l: int | None) -> IntMatrix:
    if mode == "Z":
        return solve_exact(u, IntMatrix.identity(u.rows))
    return solve_mod(u, IntMatrix.identity(u.rows), l)


def _s_algebra_parts(a: DggAlgebra):
    """Diagonal truncation of the underlying module, algebra structure on
    top. Returns (S(A), inclusion chain map). No purity check here."""
    mode, l = a.module.mode, a.module.l
    unit_bd = a.degree(a.unit)
    unit_slot = a._slot_of[a.unit]
    if unit_bd != (0, 0):
        raise ValueError("unit must sit in bidegree (0, 0)")
    # the unit must be a cycle for the truncation to keep it addressable
    if a.differential(a.unit_element()):
        raise ValueError("unit is not a cycle")

    s_mod, inclusion, kernels = _s_complex(a.module)

    # re-route the kernel basis at (0, 0) through the unit vector, so the
    # unit survives as an addressable basis label of the truncation
    needs_unit_reroute = (
        (0, 0) in s_mod.components
        and 0 in kernels
        and kernels[0].cols
        and kernels[0] != IntMatrix.identity(a.module.rank_at((0, 0)))
    )
    if needs_unit_reroute:
        k0 = kernels[0]
        n0 = a.module.rank_at((0, 0))
        e_unit = tuple(1 if t == unit_slot else 0 for t in range(n0))
        solver = solve_exact if mode == "Z" else (lambda m, b: solve_mod(m, b, l))
        coords = solver(k0, IntMatrix.from_columns([e_unit], n0))
        u = coords.column(0)
        through = _basis_with_first(u, mode, l)
        k0_new = k0 @ through
        if mode == "Fl":
            k0_new = IntMatrix(
                k0_new.rows, k0_new.cols, [e % l for e in k0_new.entries]
            )
        kernels[0] = k0_new
        blocks = dict(inclusion.blocks)
        blocks[(0, 0)] = k0_new
        # transport the incoming differential to the new coordinates
        diffs = dict(s_mod.differentials)
        d_in = diffs.get((0, -1))
        if d_in is not None:
            diffs[(0, -1)] = _invert(through, mode, l) @ d_in
        s_mod = BigradedModule(dict(s_mod.components), diffs, mode=mode, l=l)
        inclusion = ChainMap(source=s_mod, target=a.module, blocks=blocks)

    # labels: reuse the ambient labels off the diagonal and wherever the
    # kernel is the identity; otherwise synthesize
    s_basis: dict[Bidegree, tuple[str, ...]] = {}
    for bd, rank in s_mod.components.items():
        i, j = bd
        if i > j or (
            i == j and kernels.get(i) is not None
            and kernels[i] == IntMatrix.identity(a.module.rank_at(bd))
        ):
            s_basis[bd] = a.basis_at(bd)
        else:
            base = [f"z{i}_{t}" for t in range(rank)]
            if bd == (0, 0):
                base[0] = a.unit
            taken = set(a._degree_of)
            fixed = []
            for lab in base:
                while lab in taken and lab != a.unit:
                    lab += "'"
                fixed.append(lab)
            s_basis[bd] = tuple(fixed)

    def include(label: str, bd: Bidegree) -> Element:
        block = inclusion.blocks.get(bd)
        slot = s_basis[bd].index(label)
        if block is None:
            return {}
        return a.element_from_vector(bd, block.column(slot))

    solver = solve_exact if mode == "Z" else (lambda m, b: solve_mod(m, b, l))
    product: dict[tuple[str, str], Element] = {}
    flat = [(lab, bd) for bd in sorted(s_basis) for lab in s_basis[bd]]
    for la, bda in flat:
        ea = include(la, bda)
        for lb, bdb in flat:
            eb = include(lb, bdb)
            target = (bda[0] + bdb[0], bda[1] + bdb[1])
            prod = a.multiply(ea, eb)
            vec = a.component_vector(prod, target)
            if target not in s_mod.components:
                if any(v != 0 for v in a.reduce(prod).values()):
                    raise RuntimeError(
                        "diagonal truncation is not closed under multiplication"
                    )
                continue
            if target[0] == target[1]:
                k = kernels[target[0]]
                try:
                    coords = solver(
                        k, IntMatrix.from_columns([vec], len(vec))
                    ).column(0)
                except ValueError as exc:
                    raise RuntimeError(
                        "product of cycles left the kernel lattice; input "
                        "violates the algebra axioms"
                    ) from exc
            else:
                coords = vec
            entry = {
                lab: c for lab, c in zip(s_basis[target], coords) if c
            }
            if entry:
                product[(la, lb)] = entry

    s_alg = DggAlgebra(s_mod, s_basis, product, a.unit)
    return s_alg, inclusion


def s_subalgebra(a: DggAlgebra) -> DggAlgebra:
    """Diagonal subalgebra S(A) of a pure weight-zero algebra.

    Closure under multiplication is verified while the structure
    constants are assembled; failure raises, since it would contradict
    the algebra axioms.
    """
    w = purity_weight(a.module)
    if w != 0:
        bad = purity_violations(a.module)
        where = bad[0][0] if bad else "(mixed diagonal weights)"
        raise NotPureError(
            f"algebra is not pure of weight 0; offending bidegree {where}"
        )
    return _s_algebra_parts(a)[0]


# -- cohomology algebra and the roof --------------------------------------


def _map_is_multiplicative(
    f: ChainMap,
    src: DggAlgebra,
    tgt: DggAlgebra,
) -> bool:
    def push(elem: Element) -> Element:
        out: Element = {}
        for lab, c in elem.items():
            bd = src.degree(lab)
            vec = f.block(bd).column(src._slot_of[lab])
            for t, coeff in zip(tgt.basis_at(bd), vec):
                if coeff:
                    out[t] = out.get(t, 0) + c * coeff
        return tgt.reduce(out)

    if not tgt.elements_equal(push(src.unit_element()), tgt.unit_element()):
        return False
    for x in src.labels():
        for y in src.labels():
            lhs = push(src.multiply({x: 1}, {y: 1}))
            rhs = tgt.multiply(push({x: 1}), push({y: 1}))
            if not tgt.elements_equal(lhs, rhs):
                return False
    return True


def _h_quotients(a: DggAlgebra, kernels: dict[int, IntMatrix]):
    """Per-diagonal-degree quotient projections of cycles by boundaries."""
    mode, l = a.module.mode, a.module.l
    solver = solve_exact if mode == "Z" else (lambda m, b: solve_mod(m, b, l))
    data = {}
    torsion_free = True
    for i, k in kernels.items():
        d_in = a.module.differential_at((i, i - 1))
        if d_in is None or d_in.cols == 0 or k.cols == 0:
            x = IntMatrix(k.cols, 0, [])
        else:
            x = solver(k, d_in)
        p, t, free, torsion = _quotient_data(x, mode, l)
        if torsion:
            torsion_free = False
        data[i] = (p, t, free)
    return data, torsion_free


def _build_h_algebra(a: DggAlgebra, s_alg: DggAlgebra, kernels, quotients):
    """Cohomology of a pure algebra as an honest algebra, plus the
    projection chain map S(A) -> H(A)."""
    mode, l = a.module.mode, a.module.l
    solver = solve_exact if mode == "Z" else (lambda m, b: solve_mod(m, b, l))

    # normalize the degree-0 quotient so the unit class is a basis vector
    p0, t0, free0 = quotients.get(0, (None, None, 0))
    unit_label = None
    if free0:
        u_s = s_alg.component_vector(s_alg.unit_element(), (0, 0))
        u_h = (p0 @ IntMatrix.from_columns([u_s], len(u_s))).column(0)
        nonzero = (
            any(e for e in u_h) if mode == "Z" else any(e % l for e in u_h)
        )
        if nonzero:
            through = _basis_with_first(u_h, mode, l)
            p0 = _invert(through, mode, l) @ p0
            t0 = t0 @ through
            if mode == "Fl":
                p0 = IntMatrix(p0.rows, p0.cols, [e % l for e in p0.entries])
                t0 = IntMatrix(t0.rows, t0.cols, [e % l for e in t0.entries])
            quotients = dict(quotients)
            quotients[0] = (p0, t0, free0)
            unit_label = "h0_0"

    h_comps = {(i, i): free for i, (_, _, free) in quotients.items() if free}
    if not h_comps or unit_label is None:
        return None, quotients  # zero cohomology ring, nothing to carry a unit

    h_basis = {
        (i, i): tuple(f"h{i}_{t}" for t in range(free))
        for (i, i), free in h_comps.items()
    }
    h_mod = BigradedModule(h_comps, {}, mode=mode, l=l)

    def lift(i: int, t: int) -> Element:
        _, sec, _ = quotients[i]
        coords = sec.column(t)
        amb = kernels[i] @ IntMatrix.from_columns([coords], len(coords))
        return a.element_from_vector((i, i), amb.column(0))

    product: dict[tuple[str, str], Element] = {}
    degrees = sorted(h_comps)
    for (i1, _) in degrees:
        for t1 in range(h_comps[(i1, i1)]):
            x = lift(i1, t1)
            for (i2, _) in degrees:
                for t2 in range(h_comps[(i2, i2)]):
                    y = lift(i2, t2)
                    i = i1 + i2
                    if (i, i) not in h_comps:
                        continue
                    prod = a.multiply(x, y)
                    vec = a.component_vector(prod, (i, i))
                    coords = solver(
                        kernels[i], IntMatrix.from_columns([vec], len(vec))
                    ).column(0)
                    p, _, _ = quotients[i]
                    h_vec = (p @ IntMatrix.from_columns([coords], len(coords))).column(0)
                    entry = {
                        lab: c
                        for lab, c in zip(h_basis[(i, i)], h_vec)
                        if (c if mode == "Z" else c % l)
                    }
                    if entry:
                        product[(f"h{i1}_{t1}", f"h{i2}_{t2}")] = entry

    h_alg = DggAlgebra(h_mod, h_basis, product, unit_label)
    return h_alg, quotients


@dataclass(frozen=True)
class RoofReport:
    """Outcome of verifying A <- S(A) -> H(A)."""

    pure: bool
    weight: int | None
    impurity: tuple
    s_algebra: DggAlgebra
    inclusion: ChainMap
    inclusion_multiplicative: bool
    inclusion_certificate: QuasiIsoCertificate
    h_table: CohomologyTable
    h_torsion_free: bool
    h_tables_match: bool
    h_algebra: DggAlgebra | None
    projection: ChainMap | None
    projection_multiplicative: bool | None
    projection_certificate: QuasiIsoCertificate | None
    notes: tuple[str, ...]

    @property
    def certified(self) -> bool:
        """Both roof maps are multiplicative quasi-isomorphisms."""
        if not (self.pure and self.inclusion_certificate.ok and self.inclusion_multiplicative):
            return False
        if self.projection_certificate is not None:
            good = self.projection_certificate.ok
            if self.projection_multiplicative is not None:
                good = good and self.projection_multiplicative
            return good
        # with integer torsion the projection is certified at table level
        return self.h_tables_match

    def to_json(self) -> dict:
        return {
            "pure": self.pure,
            "weight": self.weight,
            "inclusionQuasiIso": self.inclusion_certificate.ok,
            "inclusionMultiplicative": self.inclusion_multiplicative,
            "projectionQuasiIso": (
                None
                if self.projection_certificate is None
                else self.projection_certificate.ok
            ),
            "projectionMultiplicative": self.projection_multiplicative,
            "hTorsionFree": self.h_torsion_free,
            "certified": self.certified,
            "cohomology": self.h_table.to_json(),
            "notes": list(self.notes),
        }


def verify_formality_roof(a: DggAlgebra) -> RoofReport:
    """Build and certify the formality roof of ``a``.

    For pure input both maps are constructed as explicit chain algebra
    maps and certified to be multiplicative quasi-isomorphisms. Impure
    input is reported as such; the truncation still exists as a
    subalgebra and whichever roof leg happens to survive is reported
    for diagnosis.
    """
    notes: list[str] = []
    w = purity_weight(a.module)
    pure = w == 0
    impurity = tuple(purity_violations(a.module)) if not pure else ()
    if not pure:
        notes.append(f"not pure: weight would have to be 0, found {w}")

    s_alg, inclusion = _s_algebra_parts(a)
    incl_mult = _map_is_multiplicative(inclusion, s_alg, a)
    incl_cert = certify_quasi_iso(inclusion)

    table = cohomology(a.module)
    torsion_free = table.torsion_free()
    # diagonal inclusion blocks are exactly the (unit-adjusted) kernel bases
    kernels = {
        bd[0]: block
        for bd, block in inclusion.blocks.items()
        if bd[0] == bd[1]
    }

    s_table = cohomology(s_alg.module)
    tables_match = s_table == table

    h_algebra = None
    projection = None
    proj_mult = None
    proj_cert = None

    if torsion_free:
        quotients, _ = _h_quotients(a, kernels)
        if pure:
            h_algebra, quotients = _build_h_algebra(a, s_alg, kernels, quotients)
            if h_algebra is None:
                notes.append("cohomology vanishes; projection targets the zero module")
        # projection to the diagonal free quotient exists in either case
        h_comps = {
            (i, i): free for i, (_, _, free) in quotients.items() if free
        }
        h_mod = (
            h_algebra.module
            if h_algebra is not None
            else BigradedModule(h_comps, {}, mode=a.module.mode, l=a.module.l)
        )
        blocks = {
            (i, i): quotients[i][0]
            for i in quotients
            if quotients[i][2]
        }
        projection = ChainMap(source=s_alg.module, target=h_mod, blocks=blocks)
        proj_cert = certify_quasi_iso(projection)
        if h_algebra is not None:
            proj_mult = _map_is_multiplicative(projection, s_alg, h_algebra)
    else:
        notes.append(
            "cohomology has integer torsion; free components cannot carry "
            "the quotient, projection certified at table level"
        )

    return RoofReport(
        pure=pure,
        weight=w,
        impurity=impurity,
        s_algebra=s_alg,
        inclusion=inclusion,
        inclusion_multiplicative=incl_mult,
        inclusion_certificate=incl_cert,
        h_table=table,
        h_torsion_free=torsion_free,
        h_tables_match=tables_match,
        h_algebra=h_algebra,
        projection=projection,
        projection_multiplicative=proj_mult,
        projection_certificate=proj_cert,
        notes=tuple(notes),
    )


# -- JSON ------------------------------------------------------------------


def algebra_to_dict(a: DggAlgebra) -> dict:
    from .bigraded import module_to_dict

    out = module_to_dict(a.module)
    out["basis"] = [lab for bd in sorted(a.component_basis) for lab in a.component_basis[bd]]
    out["product"] = [
        {
            "a": x,
            "b": y,
            "out": [{"c": c, "coeff": v} for c, v in sorted(entry.items())],
        }
        for (x, y), entry in sorted(a.product.items())
    ]
    out["unit"] = a.unit
    return out


def algebra_from_dict(data: dict) -> DggAlgebra:
    from .bigraded import module_from_dict

    module = module_from_dict(data)
    names = list(data["basis"])
    comp_basis: dict[Bidegree, tuple[str, ...]] = {}
    pos = 0
    for bd in sorted(module.components):
        r = module.components[bd]
        comp_basis[bd] = tuple(names[pos : pos + r])
        pos += r
    if pos != len(names):
        raise ValueError("basis length does not match total rank")
    product = {
        (e["a"], e["b"]): {o["c"]: o["coeff"] for o in e["out"]}
        for e in data.get("product", [])
    }
    return DggAlgebra(module, comp_basis, product, data["unit"])
