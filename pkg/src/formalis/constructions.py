"""Stock bigraded algebras and combination rules.

Small factory functions for the algebras that show up again and again
when exercising the formality machinery: truncated polynomial algebras,
exterior generators, square-zero acyclic augmentations, and the tensor
product (with Koszul signs) that combines them.
"""

from __future__ import annotations

from .bigraded import Bidegree, BigradedModule
from .dgalgebra import DggAlgebra
from .intlinalg import IntMatrix


def trivial_algebra(mode: str = "Z", l: int | None = None) -> DggAlgebra:
    """The ground ring, concentrated in bidegree (0, 0)."""
    return DggAlgebra.build(
        {(0, 0): ("1",)}, {}, {("1", "1"): {"1": 1}}, "1", mode=mode, l=l
    )


def truncated_polynomial(
    name: str = "x",
    bidegree: Bidegree = (1, 1),
    power: int = 3,
    mode: str = "Z",
    l: int | None = None,
) -> DggAlgebra:
    """k[x]/(x^power) with x in the given bidegree and zero differential.

    With even cohomological degree this is the usual truncated polynomial
    algebra; with ``power=2`` and odd degree it is the exterior algebra
    on one generator.
    """
    if power < 2:
        raise ValueError("power must be at least 2")
    di, dj = bidegree
    labels = {(0, 0): ("1",)}
    names = {0: "1"}
    for k in range(1, power):
        lab = name if k == 1 else f"{name}^{k}"
        labels[(k * di, k * dj)] = (lab,)
        names[k] = lab
    product = {}
    for p in range(power):
        for q in range(power):
            if p + q < power:
                product[(names[p], names[q])] = {names[p + q]: 1}
    return DggAlgebra.build(labels, {}, product, "1", mode=mode, l=l)


def exterior_generator(
    name: str = "y",
    bidegree: Bidegree = (1, 1),
    mode: str = "Z",
    l: int | None = None,
) -> DggAlgebra:
    """Exterior algebra on one generator: 1 and y with y*y = 0."""
    return truncated_polynomial(name, bidegree, power=2, mode=mode, l=l)


def acyclic_augmentation(
    internal_degree: int = 1,
    names: tuple[str, str] = ("y", "z"),
    mode: str = "Z",
    l: int | None = None,
) -> DggAlgebra:
    """Unit plus a square-zero acyclic pair d(y) = z just below/on the diagonal.

    y sits at (i, i-1), z at (i, i); all products involving y or z vanish,
    so the result is a pure algebra whose cohomology is the ground ring.
    """
    i = internal_degree
    y, z = names
    basis = {(0, 0): ("1",), (i, i - 1): (y,), (i, i): (z,)}
    diffs = {(i, i - 1): IntMatrix.from_rows([[1]])}
    product = {
        ("1", "1"): {"1": 1},
        ("1", y): {y: 1},
        (y, "1"): {y: 1},
        ("1", z): {z: 1},
        (z, "1"): {z: 1},
    }
    return DggAlgebra.build(basis, diffs, product, "1", mode=mode, l=l)


def contractible_pair(
    internal_degree: int = 1,
    names: tuple[str, str] = ("v", "w"),
    mode: str = "Z",
    l: int | None = None,
) -> DggAlgebra:
    """Unit plus a square-zero acyclic pair d(v) = w leaving the diagonal.

    v sits at (i, i) and w at (i, i + 1); the diagonal truncation drops
    both, so this is the smallest example where S(A) is strictly smaller
    than A.
    """
    i = internal_degree
    v, w = names
    basis = {(0, 0): ("1",), (i, i): (v,), (i, i + 1): (w,)}
    diffs = {(i, i): IntMatrix.from_rows([[1]])}
    product = {
        ("1", "1"): {"1": 1},
        ("1", v): {v: 1},
        (v, "1"): {v: 1},
        ("1", w): {w: 1},
        (w, "1"): {w: 1},
    }
    return DggAlgebra.build(basis, diffs, product, "1", mode=mode, l=l)


def tensor_algebra(a: DggAlgebra, b: DggAlgebra, sep: str = ".") -> DggAlgebra:
    """Tensor product of bigraded algebras with Koszul signs.

    Products follow (p1.q1)(p2.q2) = (-1)^{|q1| |p2|} (p1 p2).(q1 q2) and
    the differential is d(p.q) = d(p).q + (-1)^{|p|} p.d(q), with |.| the
    cohomological degree.
    """
    if not a.module.same_mode(b.module):
        raise ValueError("tensor factors live over different coefficients")
    mode, l = a.module.mode, a.module.l

    def pair(x: str, y: str) -> str:
        return f"{x}{sep}{y}"

    basis: dict[Bidegree, list[str]] = {}
    factors: dict[str, tuple[str, str]] = {}
    for bd_a in sorted(a.component_basis):
        for bd_b in sorted(b.component_basis):
            bd = (bd_a[0] + bd_b[0], bd_a[1] + bd_b[1])
            for x in a.component_basis[bd_a]:
                for y in b.component_basis[bd_b]:
                    basis.setdefault(bd, []).append(pair(x, y))
                    factors[pair(x, y)] = (x, y)

    slot: dict[str, tuple[Bidegree, int]] = {}
    for bd, labs in basis.items():
        for s, lab in enumerate(labs):
            slot[lab] = (bd, s)

    def tensor_elem(ea: dict, eb: dict, sign: int = 1) -> dict:
        out: dict[str, int] = {}
        for x, cx in ea.items():
            for y, cy in eb.items():
                lab = pair(x, y)
                out[lab] = out.get(lab, 0) + sign * cx * cy
        return out

    diffs: dict[Bidegree, IntMatrix] = {}
    for bd, labs in basis.items():
        i, j = bd
        tgt = basis.get((i, j + 1))
        if not tgt:
            continue
        cols = []
        for lab in labs:
            x, y = factors[lab]
            sgn = -1 if a.degree(x)[1] % 2 else 1
            image = tensor_elem(a.differential({x: 1}), {y: 1})
            for k, v in tensor_elem({x: 1}, b.differential({y: 1}), sgn).items():
                image[k] = image.get(k, 0) + v
            cols.append([image.get(t, 0) for t in tgt])
        mat = IntMatrix.from_columns(cols, len(tgt))
        if not (mat.is_zero() if mode == "Z" else mat.is_zero_mod(l)):
            diffs[bd] = mat

    product: dict[tuple[str, str], dict[str, int]] = {}
    for lab1, (x1, y1) in factors.items():
        for lab2, (x2, y2) in factors.items():
            sgn = -1 if (b.degree(y1)[1] % 2 and a.degree(x2)[1] % 2) else 1
            out = tensor_elem(a.multiply({x1: 1}, {x2: 1}),
                              b.multiply({y1: 1}, {y2: 1}), sgn)
            out = {k: v for k, v in out.items() if v}
            if out:
                product[(lab1, lab2)] = out

    module = BigradedModule(
        {bd: len(labs) for bd, labs in basis.items()}, diffs, mode=mode, l=l
    )
    return DggAlgebra(
        module,
        {bd: tuple(labs) for bd, labs in basis.items()},
        product,
        pair(a.unit, b.unit),
    )
