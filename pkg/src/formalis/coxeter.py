"""Finite Coxeter groups with exact Bruhat-order combinatorics.

Elements are enumerated once at construction by breadth-first search
over the Cayley graph, which yields ShortLex normal forms and lengths
for free. Type A uses the permutation model; every other type runs on
integer matrices of the reflection representation in the root basis, so
all arithmetic stays exact. Groups are capped at 100,000 elements;
matrices whose group is larger (or infinite) are rejected.
"""

from __future__ import annotations

import json
import threading
from typing import Iterable, Sequence

SIZE_CAP = 100_000

_ALLOWED_ORDERS = {2, 3, 4, 6}

# off-diagonal Cartan integer pairs realizing each bond order
_CARTAN_PAIR = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}


def coxeter_matrix_for_type(cartan_type: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Bond-order matrix of the classical types A, B, D and G2."""
    t = cartan_type.upper()
    if rank < 1:
        raise ValueError("rank must be positive")
    m = [[2] * rank for _ in range(rank)]
    for i in range(rank):
        m[i][i] = 1

    def bond(i, j, order):
        m[i][j] = m[j][i] = order

    if t == "A":
        for i in range(rank - 1):
            bond(i, i + 1, 3)
    elif t == "B" or t == "C":
        if rank < 2:
            raise ValueError("type B needs rank >= 2")
        for i in range(rank - 1):
            bond(i, i + 1, 3)
        bond(rank - 2, rank - 1, 4)
    elif t == "D":
        if rank < 3:
            raise ValueError("type D needs rank >= 3")
        for i in range(rank - 2):
            bond(i, i + 1, 3)
        bond(rank - 3, rank - 1, 3)
    elif t == "G":
        if rank != 2:
            raise ValueError("type G is rank 2 only")
        bond(0, 1, 6)
    else:
        raise ValueError(f"unsupported type {cartan_type!r}")
    return tuple(tuple(r) for r in m)


class CoxeterSystem:
    """Finite Coxeter group with precomputed multiplication tables.

    Elements are integers indexing the BFS enumeration; index 0 is the
    identity. Words are tuples of 0-based generator indices.
    """

    def __init__(self, matrix: Sequence[Sequence[int]], cartan_type: str | None = None):
        matrix = tuple(tuple(int(e) for e in row) for row in matrix)
        rank = len(matrix)
        for i in range(rank):
            if len(matrix[i]) != rank or matrix[i][i] != 1:
                raise ValueError("bond matrix must be square with 1 on the diagonal")
            for j in range(rank):
                if matrix[i][j] != matrix[j][i]:
                    raise ValueError("bond matrix must be symmetric")
                if i != j and matrix[i][j] not in _ALLOWED_ORDERS:
                    raise ValueError(
                        f"bond order {matrix[i][j]} not in {sorted(_ALLOWED_ORDERS)}"
                    )
        self.coxeter_matrix = matrix
        self.rank = rank
        self.cartan_type = cartan_type

        if cartan_type == "A":
            self._init_permutation_model()
        else:
            self._init_matrix_model()
        self._build_left_table()
        self._by_length: dict[int, list[int]] = {}
        for idx, ln in enumerate(self._length):
            self._by_length.setdefault(ln, []).append(idx)
        self._bruhat: dict[tuple[int, int], bool] = {}
        self._lock = threading.RLock()
        self._kl_table = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_type(cls, cartan_type: str, rank: int) -> "CoxeterSystem":
        t = cartan_type.upper()
        return cls(coxeter_matrix_for_type(t, rank), cartan_type=t)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "CoxeterSystem":
        return cls(matrix)

    @classmethod
    def product(cls, a: "CoxeterSystem", b: "CoxeterSystem") -> "CoxeterSystem":
        """Block-sum system; generators of ``b`` come after those of ``a``."""
        n, m = a.rank, b.rank
        mat = [[2] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                mat[i][j] = a.coxeter_matrix[i][j]
        for i in range(m):
            for j in range(m):
                mat[n + i][n + j] = b.coxeter_matrix[i][j]
        for i in range(n + m):
            mat[i][i] = 1
        return cls(mat)

    @classmethod
    def from_json(cls, data: dict | str) -> "CoxeterSystem":
        if isinstance(data, str):
            data = json.loads(data)
        if "matrix" in data:
            return cls.from_matrix(data["matrix"])
        return cls.from_type(data["type"], data["rank"])

    def to_json(self) -> dict:
        if self.cartan_type is not None:
            return {"type": self.cartan_type, "rank": self.rank}
        return {"matrix": [list(r) for r in self.coxeter_matrix]}

    # -- model-specific setup ----------------------------------------------

    def _init_permutation_model(self):
        n = self.rank + 1
        identity = tuple(range(n))

        def right(key, g):
            key = list(key)
            key[g], key[g + 1] = key[g + 1], key[g]
            return tuple(key)

        self._right_key = right
        self._left_key = lambda key, g: tuple(
            g + 1 if v == g else g if v == g + 1 else v for v in key
        )
        self._enumerate(identity)

    def _init_matrix_model(self):
        rank = self.rank
        cartan = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            cartan[i][i] = 2
        for i in range(rank):
            for j in range(i + 1, rank):
                aij, aji = _CARTAN_PAIR[self.coxeter_matrix[i][j]]
                cartan[i][j] = aij
                cartan[j][i] = aji
        gens = []
        for s in range(rank):
            cols = []
            for t in range(rank):
                col = [0] * rank
                if t == s:
                    col[s] = -1
                else:
                    col[t] = 1
                    col[s] = -cartan[s][t]
                cols.append(tuple(col))
            # store row-major flattened matrix
            gens.append(
                tuple(cols[j][i] for i in range(rank) for j in range(rank))
            )
        self._gen_mats = gens

        def matmul(a, b):
            n = rank
            return tuple(
                sum(a[i * n + k] * b[k * n + j] for k in range(n))
                for i in range(n)
                for j in range(n)
            )

        identity = tuple(
            1 if i == j else 0 for i in range(rank) for j in range(rank)
        )
        self._right_key = lambda key, g: matmul(key, gens[g])
        self._left_key = lambda key, g: matmul(gens[g], key)
        self._enumerate(identity)

    def _enumerate(self, identity_key):
        index = {identity_key: 0}
        keys = [identity_key]
        self._length = [0]
        self._word: list[tuple[int, ...]] = [()]
        right: list[list[int]] = [[-1] * self.rank]
        head = 0
        while head < len(keys):
            cur = keys[head]
            for g in range(self.rank):
                nxt = self._right_key(cur, g)
                idx = index.get(nxt)
                if idx is None:
                    idx = len(keys)
                    if idx >= SIZE_CAP:
                        raise ValueError(
                            f"group exceeds the {SIZE_CAP}-element cap"
                        )
                    index[nxt] = idx
                    keys.append(nxt)
                    self._length.append(self._length[head] + 1)
                    self._word.append(self._word[head] + (g,))
                    right.append([-1] * self.rank)
                right[head][g] = idx
            head += 1
        self._keys = keys
        self._index = index
        self._right = right
        self.size = len(keys)

    def _build_left_table(self):
        left = []
        for key in self._keys:
            row = []
            for g in range(self.rank):
                row.append(self._index[self._left_key(key, g)])
            left.append(row)
        self._left = left

    # -- queries ----------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.size)

    def elements_of_length(self, ln: int) -> list[int]:
        return self._by_length.get(ln, [])

    def length(self, w: int) -> int:
        return self._length[w]

    def word(self, w: int) -> tuple[int, ...]:
        """ShortLex-minimal reduced word (0-based generators)."""
        return self._word[w]

    def right_mult(self, w: int, g: int) -> int:
        return self._right[w][g]

    def left_mult(self, g: int, w: int) -> int:
        return self._left[w][g]

    def multiply(self, a: int, b: int) -> int:
        out = a
        for g in self._word[b]:
            out = self._right[out][g]
        return out

    def inverse(self, w: int) -> int:
        out = 0
        for g in reversed(self._word[w]):
            out = self._right[out][g]
        return out

    def element_from_word(self, word: Iterable[int] | str) -> int:
        """Build an element from generator indices or tokens like "s1 s2".

        Tokens are 1-based; integer iterables are 0-based.
        """
        if isinstance(word, str):
            gens = []
            for tok in word.split():
                if not tok.startswith("s"):
                    raise ValueError(f"bad generator token {tok!r}")
                gens.append(int(tok[1:]) - 1)
        else:
            gens = list(word)
        out = 0
        for g in gens:
            if not 0 <= g < self.rank:
                raise ValueError(f"generator index {g} out of range")
            out = self._right[out][g]
        return out

    def word_str(self, w: int) -> str:
        return " ".join(f"s{g + 1}" for g in self._word[w]) or "e"

    def right_descents(self, w: int) -> list[int]:
        lw = self._length[w]
        return [g for g in range(self.rank) if self._length[self._right[w][g]] < lw]

    def left_descents(self, w: int) -> list[int]:
        lw = self._length[w]
        return [g for g in range(self.rank) if self._length[self._left[w][g]] < lw]

    def longest_element(self, generators: Iterable[int] | None = None) -> int:
        """Longest element of the standard parabolic on the given generators."""
        gens = sorted(set(generators)) if generators is not None else list(range(self.rank))
        w = 0
        while True:
            g = next(
                (g for g in gens if self._length[self._right[w][g]] > self._length[w]),
                None,
            )
            if g is None:
                return w
            w = self._right[w][g]

    # -- Bruhat order -----------------------------------------------------

    def bruhat_leq(self, w: int, x: int) -> bool:
        """Whether x lies below w in Bruhat order (x <= w)."""
        if x == w:
            return True
        if self._length[x] >= self._length[w]:
            return False
        with self._lock:
            return self._bruhat_rec(w, x)

    def _bruhat_rec(self, w: int, x: int) -> bool:
        # lifting property: for s a right descent of w,
        # x <= w  iff  (xs <= ws when xs < x, else x <= ws)
        if x == w:
            return True
        lw, lx = self._length[w], self._length[x]
        if lx >= lw:
            return False
        if lx == 0:
            return True
        key = (w, x)
        hit = self._bruhat.get(key)
        if hit is not None:
            return hit
        s = self.right_descents(w)[0]
        ws = self._right[w][s]
        xs = self._right[x][s]
        if self._length[xs] < lx:
            out = self._bruhat_rec(ws, xs)
        else:
            out = self._bruhat_rec(ws, x)
        self._bruhat[key] = out
        return out

    # -- parabolic quotients ------------------------------------------------

    def is_minimal_in_coset(self, w: int, parabolic: Iterable[int]) -> bool:
        """Minimal-length representative of w W_J for J = ``parabolic``."""
        lw = self._length[w]
        return all(self._length[self._right[w][g]] > lw for g in set(parabolic))

    def coset_minimal(self, w: int, parabolic: Iterable[int]) -> int:
        gens = set(parabolic)
        while True:
            g = next(
                (g for g in gens if self._length[self._right[w][g]] < self._length[w]),
                None,
            )
            if g is None:
                return w
            w = self._right[w][g]

    def minimal_representatives(self, parabolic: Iterable[int]) -> list[int]:
        gens = set(parabolic)
        return [w for w in range(self.size) if self.is_minimal_in_coset(w, gens)]

    def kl_table(self):
        """Shared memoized Kazhdan-Lusztig table for this system."""
        from .kl import KLTable

        with self._lock:
            if self._kl_table is None:
                self._kl_table = KLTable(self)
            return self._kl_table


def parse_parabolic(tokens: str | Iterable[int], rank: int) -> frozenset[int]:
    """Parse "s1 s3"-style generator subsets (1-based) or 0-based ints."""
    if isinstance(tokens, str):
        gens = []
        for tok in tokens.split():
            if not tok.startswith("s"):
                raise ValueError(f"bad generator token {tok!r}")
            gens.append(int(tok[1:]) - 1)
    else:
        gens = list(tokens)
    out = frozenset(gens)
    if any(not 0 <= g < rank for g in out):
        raise ValueError("parabolic generator out of range")
    return out
