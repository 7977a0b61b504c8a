"""Towers of graded algebras and their limits through a degree bound.

A tower is a sequence H_0 <- H_1 <- H_2 <- ... of non-negatively graded
algebras (encoded as bigraded algebras concentrated in cohomological
degree zero) whose connecting maps are algebra morphisms and become
isomorphisms in low degrees: the map into H_i must be an isomorphism in
all degrees below i. Under that hypothesis the limit stabilizes
degreewise, and its degree-<=d part can be read off any term of index
at least d+1. :func:`graded_limit` materializes exactly that truncation
and certifies the stabilization against every deeper term available.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraded import BigradedModule
from .dgalgebra import DggAlgebra
from .intlinalg import IntMatrix, rank_mod, smith_normal_form


def _check_graded_term(alg: DggAlgebra, index: int):
    for (i, j) in alg.module.components:
        if j != 0:
            raise ValueError(
                f"tower term {index} has a component in cohomological degree {j}"
            )
        if i < 0:
            raise ValueError(f"tower term {index} has a negative degree {i}")
    if alg.module.differentials:
        raise ValueError(f"tower term {index} carries a differential")
    # degree-0 part must be spanned by orthogonal idempotents
    zero = alg.basis_at((0, 0))
    if alg.unit not in zero:
        raise ValueError(f"tower term {index}: unit missing from degree 0")
    others = [lab for lab in zero if lab != alg.unit]
    for e in others:
        if not alg.elements_equal(alg.multiply({e: 1}, {e: 1}), {e: 1}):
            raise ValueError(
                f"tower term {index}: degree-0 element {e!r} is not idempotent"
            )
    for x in others:
        for y in others:
            if x != y and alg.reduce(alg.multiply({x: 1}, {y: 1})):
                raise ValueError(
                    f"tower term {index}: degree-0 idempotents not orthogonal"
                )


def _degree_dim(alg: DggAlgebra, degree: int) -> int:
    return alg.module.rank_at((degree, 0))


def _is_iso(mat: IntMatrix, mode: str, l: int | None) -> bool:
    if mat.rows != mat.cols:
        return False
    if mat.rows == 0:
        return True
    if mode == "Z":
        snf = smith_normal_form(mat)
        return snf.rank == mat.rows and all(d == 1 for d in snf.diagonal)
    return rank_mod(mat, l) == mat.rows


@dataclass(frozen=True)
class GradedAlgebraTower:
    """Tower H_0 <- H_1 <- ... with maps[i] : terms[i+1] -> terms[i].

    Each connecting map is given by one matrix per degree and must be a
    unit-preserving algebra morphism that is an isomorphism in degrees
    strictly below its target index i.
    """

    terms: tuple[DggAlgebra, ...]
    maps: tuple[dict[int, IntMatrix], ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        maps = tuple({int(k): v for k, v in m.items()} for m in self.maps)
        if len(maps) != max(len(terms) - 1, 0):
            raise ValueError("need exactly one connecting map per adjacent pair")
        for idx, alg in enumerate(terms):
            _check_graded_term(alg, idx)
            if idx and not alg.module.same_mode(terms[0].module):
                raise ValueError("tower terms over different coefficients")
        mode = terms[0].module.mode if terms else "Z"
        l = terms[0].module.l if terms else None
        for i, blocks in enumerate(maps):
            src, tgt = terms[i + 1], terms[i]
            self._check_morphism(src, tgt, blocks, i)
            top = max(
                [d for (d, _) in src.module.components]
                + [d for (d, _) in tgt.module.components]
                + [0]
            )
            for d in range(min(i, top + 1)):
                mat = self._block(src, tgt, blocks, d)
                if not _is_iso(mat, mode, l):
                    raise ValueError(
                        f"connecting map into term {i} is not an isomorphism "
                        f"in degree {d}"
                    )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "maps", maps)

    @staticmethod
    def _block(src: DggAlgebra, tgt: DggAlgebra, blocks: dict, degree: int) -> IntMatrix:
        mat = blocks.get(degree)
        if mat is None:
            mat = IntMatrix.zero(_degree_dim(tgt, degree), _degree_dim(src, degree))
        want = (_degree_dim(tgt, degree), _degree_dim(src, degree))
        if mat.shape != want:
            raise ValueError(f"connecting block in degree {degree} has wrong shape")
        return mat

    def _check_morphism(self, src, tgt, blocks, i):
        def push(elem):
            out = {}
            for lab, c in elem.items():
                d = src.degree(lab)[0]
                mat = self._block(src, tgt, blocks, d)
                vec = mat.column(src._slot_of[lab])
                for t, coeff in zip(tgt.basis_at((d, 0)), vec):
                    if coeff:
                        out[t] = out.get(t, 0) + c * coeff
            return tgt.reduce(out)

        if not tgt.elements_equal(push(src.unit_element()), tgt.unit_element()):
            raise ValueError(f"connecting map into term {i} does not preserve the unit")
        for x in src.labels():
            for y in src.labels():
                lhs = push(src.multiply({x: 1}, {y: 1}))
                rhs = tgt.multiply(push({x: 1}), push({y: 1}))
                if not tgt.elements_equal(lhs, rhs):
                    raise ValueError(
                        f"connecting map into term {i} is not multiplicative "
                        f"on ({x!r}, {y!r})"
                    )

    def composite(self, upper: int, lower: int) -> dict[int, IntMatrix]:
        """Blockwise composite terms[upper] -> terms[lower]."""
        if not lower <= upper <= len(self.terms) - 1:
            raise ValueError("composite indices out of range")
        degrees = set()
        for t in self.terms:
            degrees.update(d for (d, _) in t.module.components)
        out = {
            d: IntMatrix.identity(_degree_dim(self.terms[upper], d))
            for d in degrees
        }
        for i in range(upper - 1, lower - 1, -1):
            blocks = self.maps[i]
            out = {
                d: self._block(self.terms[i + 1], self.terms[i], blocks, d) @ out[d]
                for d in degrees
            }
        return out


def truncate_graded(alg: DggAlgebra, degree: int) -> DggAlgebra:
    """Quotient by everything above the given degree."""
    basis = {
        bd: labs
        for bd, labs in alg.component_basis.items()
        if bd[0] <= degree
    }
    keep = {lab for labs in basis.values() for lab in labs}
    product = {}
    for (x, y), out in alg.product.items():
        if x in keep and y in keep:
            entry = {z: c for z, c in out.items() if z in keep}
            if entry:
                product[(x, y)] = entry
    module = BigradedModule(
        {bd: len(v) for bd, v in basis.items()}, {},
        mode=alg.module.mode, l=alg.module.l,
    )
    return DggAlgebra(module, basis, product, alg.unit)


@dataclass(frozen=True)
class GradedLimit:
    algebra: DggAlgebra
    through_degree: int
    witness_index: int
    stabilization: tuple[tuple[int, bool, str], ...]

    @property
    def stable(self) -> bool:
        return all(ok for _, ok, _ in self.stabilization)


def graded_limit(tower: GradedAlgebraTower, through_degree: int) -> GradedLimit:
    """Limit of the tower, truncated at the requested degree.

    Requires at least ``through_degree + 2`` terms. The connecting maps
    are isomorphisms below their index, so in degrees <= d the system is
    constant from term d+1 onward; the limit is the degree-<=d part of
    that term. Every deeper term available is checked to transport
    isomorphically onto the witness, and the certificate records it.
    """
    d = through_degree
    if d < 0:
        raise ValueError("through_degree must be non-negative")
    if len(tower.terms) < d + 2:
        raise ValueError(
            f"tower too short: need at least {d + 2} terms for degree {d}"
        )
    witness = d + 1
    algebra = truncate_graded(tower.terms[witness], d)
    mode, l = algebra.module.mode, algebra.module.l
    rows = []
    for k in range(witness + 1, len(tower.terms)):
        comp = tower.composite(k, witness)
        ok = True
        detail = []
        for deg in range(d + 1):
            mat = comp.get(
                deg, IntMatrix.zero(_degree_dim(tower.terms[witness], deg),
                                    _degree_dim(tower.terms[k], deg))
            )
            if not _is_iso(mat, mode, l):
                ok = False
                detail.append(f"degree {deg} not transported isomorphically")
        rows.append((k, ok, "; ".join(detail) if detail else "stable"))
    return GradedLimit(
        algebra=algebra,
        through_degree=d,
        witness_index=witness,
        stabilization=tuple(rows),
    )


# -- JSON ---------------------------------------------------------------------


def tower_to_dict(tower: GradedAlgebraTower) -> dict:
    from .dgalgebra import algebra_to_dict

    return {
        "terms": [algebra_to_dict(t) for t in tower.terms],
        "maps": [
            [
                {"degree": d, "matrix": mat.to_lists()}
                for d, mat in sorted(blocks.items())
            ]
            for blocks in tower.maps
        ],
    }


def tower_from_dict(data: dict) -> GradedAlgebraTower:
    from .dgalgebra import algebra_from_dict

    terms = tuple(algebra_from_dict(t) for t in data["terms"])
    maps = tuple(
        {e["degree"]: IntMatrix.from_rows(e["matrix"]) for e in blocks}
        for blocks in data.get("maps", [])
    )
    return GradedAlgebraTower(terms, maps)
