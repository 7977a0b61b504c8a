"""Exact linear algebra over the integers.

Everything in this module works with Python's arbitrary-precision ints;
no floating point is used anywhere. The central routine is
:func:`smith_normal_form`, which diagonalizes an integer matrix by
unimodular row and column transforms and returns the transforms as
witnesses. Kernels, ranks and torsion queries are all derived from it,
so the module has a single arithmetic code path.

A handful of mod-l helpers (``rank_mod``, ``kernel_basis_mod``,
``solve_mod``) reinterpret the same Smith data over the prime field F_l;
they exist so that higher layers can switch between integer and
finite-field coefficients without a second elimination engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix, entries stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(
            self,
            "_data",
            tuple(entries[r * cols : (r + 1) * cols] for r in range(rows)),
        )

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = len(columns)
        return cls(rows, cols, [columns[j][i] for i in range(rows) for j in range(cols)])

    # -- access ------------------------------------------------------

    @property
    def entries(self) -> tuple[int, ...]:
        """Flat row-major entry tuple."""
        return tuple(e for row in self._data for e in row)

    def entry(self, i: int, j: int) -> int:
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self._data[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def is_zero(self) -> bool:
        return all(e == 0 for row in self._data for e in row)

    def is_zero_mod(self, l: int) -> bool:
        return all(e % l == 0 for row in self._data for e in row)

    # -- arithmetic ----------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            ri = self._data[i]
            for c in ocols:
                out.append(sum(a * b for a, b in zip(ri, c)))
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            self.rows, self.cols,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [-e for e in self.entries])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            [self._data[i][j] for j in range(self.cols) for i in range(self.rows)],
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        out = []
        for i in range(self.rows):
            out.extend(self._data[i])
            out.extend(other._data[i])
        return IntMatrix(self.rows, self.cols + other.cols, out)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self._data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.shape == other.shape
            and self._data == other._data
        )

    def eq_mod(self, other: "IntMatrix", l: int) -> bool:
        return self.shape == other.shape and all(
            (a - b) % l == 0 for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_lists()!r})"


@dataclass(frozen=True)
class SmithForm:
    """Smith normal form of an integer matrix.

    ``diagonal`` lists the nonzero elementary divisors d_1 | d_2 | ...;
    zero diagonal entries are dropped, so ``len(diagonal)`` equals the
    rank. The unimodular witnesses satisfy

        left_transform @ original @ right_transform == diagonal matrix.
    """

    diagonal: tuple[int, ...]
    left_transform: IntMatrix
    right_transform: IntMatrix
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diagonal_matrix(self) -> IntMatrix:
        rows, cols = self.shape
        out = [[0] * cols for _ in range(rows)]
        for k, d in enumerate(self.diagonal):
            out[k][k] = d
        return IntMatrix.from_rows(out) if rows else IntMatrix(0, cols, [])


def _pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    """Deterministic pivot: smallest |entry| != 0, ties broken row-major."""
    best = None
    best_abs = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            e = row[j]
            if e:
                ae = abs(e)
                if best_abs is None or ae < best_abs:
                    best, best_abs = (i, j), ae
                    if ae == 1:
                        return best
    return best


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """Diagonalize ``m`` by unimodular transforms.

    Deterministic for identical input: pivots are chosen by smallest
    absolute value, then lowest row-major position. Empty or zero
    matrices yield an empty diagonal.
    """
    rows, cols = m.rows, m.cols
    a = m.to_lists()
    left = IntMatrix.identity(rows).to_lists()
    right = IntMatrix.identity(cols).to_lists()

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        left[i], left[k] = left[k], left[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in right:
            row[j], row[k] = row[k], row[j]

    def addmul_row(i, k, c):
        # row_i += c * row_k
        ai, ak = a[i], a[k]
        for j in range(cols):
            ai[j] += c * ak[j]
        li, lk = left[i], left[k]
        for j in range(rows):
            li[j] += c * lk[j]

    def addmul_col(j, k, c):
        # col_j += c * col_k
        for row in a:
            row[j] += c * row[k]
        for row in right:
            row[j] += c * row[k]

    def negate_row(i):
        a[i] = [-e for e in a[i]]
        left[i] = [-e for e in left[i]]

    t = 0
    while t < rows and t < cols:
        piv = _pivot(a, t)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        if a[t][t] < 0:
            negate_row(t)

        # One clearing sweep with symmetric remainders. If any remainder
        # survives it is strictly smaller than the pivot, so re-running
        # the pivot search makes progress; this keeps intermediate growth
        # in check (min-abs pivoting) and guarantees termination.
        p = a[t][t]
        cleared = True
        for i in range(t + 1, rows):
            if a[i][t]:
                q = (a[i][t] + (p >> 1)) // p
                if q:
                    addmul_row(i, t, -q)
                if a[i][t]:
                    cleared = False
        for j in range(t + 1, cols):
            if a[t][j]:
                q = (a[t][j] + (p >> 1)) // p
                if q:
                    addmul_col(j, t, -q)
                if a[t][j]:
                    cleared = False
        if not cleared:
            continue

        # force the pivot to divide the remaining block (divisibility chain)
        d = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            if any(a[i][j] % d for j in range(t + 1, cols)):
                bad = i
                break
        if bad is not None:
            addmul_row(t, bad, 1)
            continue
        t += 1

    diagonal = tuple(a[k][k] for k in range(t))
    return SmithForm(
        diagonal=diagonal,
        left_transform=IntMatrix.from_rows(left) if rows else IntMatrix(0, 0, []),
        right_transform=IntMatrix.from_rows(right) if cols else IntMatrix(0, 0, []),
        shape=(rows, cols),
    )


def rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def _normalize_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for e in v:
        if e:
            return v if e > 0 else tuple(-x for x in v)
    return v


def kernel_basis(m: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Basis of the saturated integer kernel of ``m``.

    The returned vectors span ker(m) over Q intersected with the integer
    lattice; they are columns of the right Smith transform, so the basis
    is automatically saturated. Each vector is sign-normalized to make
    its first nonzero entry positive.
    """
    snf = smith_normal_form(m)
    r = snf.rank
    cols = [snf.right_transform.column(j) for j in range(r, m.cols)]
    return tuple(_normalize_sign(c) for c in cols)


def l_local_torsion(m: IntMatrix, l: int) -> bool:
    """Whether the cokernel of ``m`` has l-torsion (l prime)."""
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    return any(d % l == 0 for d in smith_normal_form(m).diagonal)


# -- exact solving ---------------------------------------------------


def solve_exact(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Solve a @ X = b over Z for ``a`` of full column rank.

    Raises ValueError if the system is inconsistent over Q or the unique
    rational solution is not integral.
    """
    n, k = a.rows, a.cols
    if b.rows != n:
        raise ValueError("row mismatch")
    w = b.cols
    aug = [[Fraction(a.entry(i, j)) for j in range(k)]
           + [Fraction(b.entry(i, j)) for j in range(w)]
           for i in range(n)]
    pivots = []
    r = 0
    for j in range(k):
        p = next((i for i in range(r, n) if aug[i][j]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][j]
        aug[r] = [e * inv for e in aug[r]]
        for i in range(n):
            if i != r and aug[i][j]:
                c = aug[i][j]
                aug[i] = [e - c * f for e, f in zip(aug[i], aug[r])]
        pivots.append(j)
        r += 1
    if r < k:
        raise ValueError("matrix does not have full column rank")
    for i in range(r, n):
        if any(aug[i][k:]):
            raise ValueError("inconsistent system")
    out = []
    for i in range(k):
        for j in range(w):
            e = aug[i][k + j]
            if e.denominator != 1:
                raise ValueError("no integral solution")
            out.append(int(e))
    return IntMatrix(k, w, out)


# -- mod-l reinterpretations -----------------------------------------


def rank_mod(m: IntMatrix, l: int) -> int:
    """Rank of ``m`` over F_l, read off the integer Smith form."""
    return sum(1 for d in smith_normal_form(m).diagonal if d % l)


def kernel_basis_mod(m: IntMatrix, l: int) -> tuple[tuple[int, ...], ...]:
    """Basis (lifted to 0..l-1 ints) of the kernel of ``m`` over F_l."""
    snf = smith_normal_form(m)
    out = []
    for j in range(m.cols):
        if j >= snf.rank or snf.diagonal[j] % l == 0:
            col = snf.right_transform.column(j)
            out.append(tuple(e % l for e in col))
    return tuple(out)


def solve_mod(a: IntMatrix, b: IntMatrix, l: int) -> IntMatrix:
    """Solve a @ X = b over F_l (particular solution, free coords zero)."""
    if a.cols == 0:
        if not b.is_zero_mod(l):
            raise ValueError("inconsistent system mod l")
        return IntMatrix(0, b.cols, [])
    snf = smith_normal_form(a)
    lb = snf.left_transform @ b
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        d = snf.diagonal[i] if i < snf.rank else 0
        if d % l:
            inv = pow(d % l, -1, l)
            for j in range(b.cols):
                y[i][j] = (lb.entry(i, j) * inv) % l
        else:
            for j in range(b.cols):
                if lb.entry(i, j) % l:
                    raise ValueError("inconsistent system mod l")
    x = snf.right_transform @ IntMatrix.from_rows(y)
    return IntMatrix(x.rows, x.cols, [e % l for e in x.entries])


# -- primality --------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid well beyond desk scale."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n
