"""Kazhdan-Lusztig polynomials, stalk tables and parity verdicts.

Two genuinely independent computations of the polynomials live here:
the usual descent recursion with its mu-correction term, and an
inversion of R-polynomials through the defining functional equation,
which never looks at mu. Agreement of the two is one of the package's
standing test surfaces.

Stalk tables for partial flag quotients place the coefficients of the
polynomial attached to the *longest* coset representatives in evenly
spaced cohomological degrees, with the weight exponent growing linearly
along them; combinatorial evenness is therefore built in, and the
modular side of any parity verdict comes from curated data keyed by
Cartan type and rank.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

from .coxeter import CoxeterSystem
from .qpoly import QPoly

PARITY_TABLE_ENV = "FORMALIS_PARITY_TABLE"


class KLTable:
    """Memoized Kazhdan-Lusztig data for one Coxeter system."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._P: dict[tuple[int, int], QPoly] = {}
        self._R: dict[tuple[int, int], QPoly] = {}
        self._P_via_R: dict[tuple[int, int], QPoly] = {}
        self._lock = threading.RLock()

    # -- the standard recursion -----------------------------------------

    def polynomial(self, x: int, w: int) -> QPoly:
        with self._lock:
            return self._poly(x, w)

    def _poly(self, x: int, w: int) -> QPoly:
        sys = self.system
        if x == w:
            return QPoly.one()
        if not sys.bruhat_leq(w, x):
            return QPoly.zero()
        key = (x, w)
        hit = self._P.get(key)
        if hit is not None:
            return hit
        s = sys.right_descents(w)[0]
        v = sys.right_mult(w, s)
        xs = sys.right_mult(x, s)
        if sys.length(xs) > sys.length(x):
            # standard reduction: P_{x,w} = P_{xs,w} when xs > x, ws < w
            out = self._poly(xs, w)
        else:
            out = self._poly(xs, v) + QPoly.q() * self._poly(x, v)
            lw = sys.length(w)
            for lz in range(sys.length(x), sys.length(v) + 1):
                for z in sys.elements_of_length(lz):
                    if sys.length(sys.right_mult(z, s)) >= lz:
                        continue
                    if not (sys.bruhat_leq(z, x) and sys.bruhat_leq(v, z)):
                        continue
                    mu = self._mu(z, v)
                    if mu:
                        out = out - mu * self._poly(x, z).shift((lw - lz) // 2)
        bound = (sys.length(w) - sys.length(x) - 1) // 2
        if out.degree > bound:
            raise RuntimeError(
                f"degree bound violated at ({sys.word_str(x)}, {sys.word_str(w)})"
            )
        self._P[key] = out
        return out

    def _mu(self, z: int, v: int) -> int:
        gap = self.system.length(v) - self.system.length(z)
        if gap % 2 == 0:
            return 0
        return self._poly(z, v).coeff((gap - 1) // 2)

    def mu(self, z: int, v: int) -> int:
        with self._lock:
            return self._mu(z, v)

    # -- R-polynomials and the inversion oracle -----------------------------

    def r_polynomial(self, x: int, w: int) -> QPoly:
        with self._lock:
            return self._r(x, w)

    def _r(self, x: int, w: int) -> QPoly:
        sys = self.system
        if x == w:
            return QPoly.one()
        if not sys.bruhat_leq(w, x):
            return QPoly.zero()
        key = (x, w)
        hit = self._R.get(key)
        if hit is not None:
            return hit
        s = sys.right_descents(w)[0]
        v = sys.right_mult(w, s)
        xs = sys.right_mult(x, s)
        if sys.length(xs) < sys.length(x):
            out = self._r(xs, v)
        else:
            q = QPoly.q()
            out = (q - QPoly.one()) * self._r(x, v) + q * self._r(xs, v)
        self._R[key] = out
        return out

    def polynomial_via_r(self, x: int, w: int) -> QPoly:
        """Independent implementation through the functional equation.

        q^(l(w)-l(x)) P(1/q) - P(q) equals the sum of R_{x,z} P_{z,w}
        over x < z <= w; the degree bound splits the two sides by
        degree, so P can be read off the top half and the bottom half
        yields a consistency check, which is asserted.
        """
        with self._lock:
            return self._poly_via_r(x, w)

    def _poly_via_r(self, x: int, w: int) -> QPoly:
        sys = self.system
        if x == w:
            return QPoly.one()
        if not sys.bruhat_leq(w, x):
            return QPoly.zero()
        key = (x, w)
        hit = self._P_via_R.get(key)
        if hit is not None:
            return hit
        gap = sys.length(w) - sys.length(x)
        total = QPoly.zero()
        for lz in range(sys.length(x) + 1, sys.length(w) + 1):
            for z in sys.elements_of_length(lz):
                if sys.bruhat_leq(z, x) and sys.bruhat_leq(w, z):
                    rzx = self._r(x, z)
                    if not rzx.is_zero():
                        total = total + rzx * self._poly_via_r(z, w)
        coeffs = [total.coeff(gap - k) for k in range((gap - 1) // 2 + 1)]
        out = QPoly(coeffs)
        if out.reciprocal(gap) - out != total:
            raise RuntimeError(
                "functional equation inconsistent at "
                f"({sys.word_str(x)}, {sys.word_str(w)})"
            )
        if out.coeff(0) != 1:
            raise RuntimeError("constant term of an inverted polynomial is not 1")
        self._P_via_R[key] = out
        return out


def kl_polynomial(sys: CoxeterSystem, x: int, w: int) -> QPoly:
    """P_{x,w} via the shared memoized table of the system."""
    return sys.kl_table().polynomial(x, w)


def kl_polynomial_via_r(sys: CoxeterSystem, x: int, w: int) -> QPoly:
    return sys.kl_table().polynomial_via_r(x, w)


def r_polynomial(sys: CoxeterSystem, x: int, w: int) -> QPoly:
    return sys.kl_table().r_polynomial(x, w)


# -- stalk tables -------------------------------------------------------------


@dataclass(frozen=True)
class StalkEntry:
    degree: int
    rank: int
    weight_exponent: int


def parabolic_stalk_table(
    sys: CoxeterSystem,
    parabolic: Iterable[int],
    lam: int,
    mu: int,
) -> tuple[StalkEntry, ...]:
    """Stalk rows of one intersection complex restricted to one cell.

    Both arguments must be minimal-length coset representatives for the
    standard parabolic; the polynomial of the longest representatives
    places rank c_k in degree -l(lam) + 2k with weight exponent k.
    """
    gens = frozenset(parabolic)
    for name, w in (("lam", lam), ("mu", mu)):
        if not sys.is_minimal_in_coset(w, gens):
            raise ValueError(
                f"{name} = {sys.word_str(w)} is not a minimal coset representative"
            )
    poly = graded_multiplicity(sys, gens, lam, mu)
    d_lam = sys.length(lam)
    return tuple(
        StalkEntry(degree=-d_lam + 2 * k, rank=c, weight_exponent=k)
        for k, c in enumerate(poly.coeffs)
        if c
    )


def graded_multiplicity(
    sys: CoxeterSystem,
    parabolic: Iterable[int],
    lam: int,
    mu: int,
) -> QPoly:
    """Graded multiplicity of the mu-simple inside the lam-standard.

    Computed as the Kazhdan-Lusztig polynomial of the longest coset
    representatives, which also gives the stalk ranks of the
    intersection complexes on the corresponding partial flag quotient.
    """
    gens = frozenset(parabolic)
    w0j = sys.longest_element(gens)
    lam_max = sys.multiply(lam, w0j)
    mu_max = sys.multiply(mu, w0j)
    return kl_polynomial(sys, mu_max, lam_max)


def full_stalk_table(
    sys: CoxeterSystem, parabolic: Iterable[int]
) -> dict[tuple[int, int], tuple[StalkEntry, ...]]:
    """All stalk rows of the quotient, keyed by (lam, mu)."""
    gens = frozenset(parabolic)
    reps = sys.minimal_representatives(gens)
    out = {}
    for lam in reps:
        for mu in reps:
            rows = parabolic_stalk_table(sys, gens, lam, mu)
            if rows:
                out[(lam, mu)] = rows
    return out


# -- curated modular parity -----------------------------------------------------


@dataclass(frozen=True)
class CuratedParity:
    cartan_type: str
    rank: int
    excluded_primes: frozenset[int]
    source: str

    def holds_at(self, l: int) -> bool:
        return l not in self.excluded_primes


def load_parity_table(path: str | None = None) -> list[CuratedParity]:
    """Curated modular-parity rows, from ``path``, the environment
    override, or the packaged data file."""
    if path is None:
        path = os.environ.get(PARITY_TABLE_ENV)
    if path is None:
        text = (
            resources.files("formalis")
            .joinpath("data/parity-table.json")
            .read_text(encoding="utf-8")
        )
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    rows = json.loads(text)
    return [
        CuratedParity(
            cartan_type=r["cartanType"],
            rank=r["rank"],
            excluded_primes=frozenset(r["excludedPrimes"]),
            source=r.get("source", "unknown"),
        )
        for r in rows
    ]


def curated_parity(
    cartan_type: str, rank: int, table: list[CuratedParity] | None = None
) -> CuratedParity | None:
    if table is None:
        table = load_parity_table()
    for row in table:
        if row.cartan_type == cartan_type.upper() and row.rank == rank:
            return row
    return None


@dataclass(frozen=True)
class ParityVerdict:
    combinatorially_even: bool
    modular: bool | None
    status: str
    detail: str

    @property
    def holds(self) -> bool | None:
        if not self.combinatorially_even:
            return False
        return self.modular


UNKNOWN_PARITY_MESSAGE = "combinatorial evenness only - modular parity unknown"


def bgs_parity_verdict(
    table: Mapping[tuple[int, int], tuple[StalkEntry, ...]] | Iterable[StalkEntry],
    l: int,
    curated: CuratedParity | None = None,
) -> ParityVerdict:
    """Combine combinatorial evenness of stalks with curated modular data.

    The stalk rows decide evenness: for each intersection complex all
    degrees must share one parity. Whether modular parity actually holds
    at ``l`` cannot be recomputed at desk scale, so it is read off the
    curated row when one is supplied; otherwise the verdict reports the
    combinatorial half only.
    """
    if isinstance(table, Mapping):
        groups: dict[int, list[StalkEntry]] = {}
        for (lam, _mu), rows in table.items():
            groups.setdefault(lam, []).extend(rows)
    else:
        groups = {0: list(table)}
    even = True
    for rows in groups.values():
        parities = {e.degree % 2 for e in rows}
        if len(parities) > 1:
            even = False
    if not even:
        return ParityVerdict(False, False, "parity-false", "stalk degrees of mixed parity")
    if curated is None:
        return ParityVerdict(True, None, "unknown", UNKNOWN_PARITY_MESSAGE)
    if curated.holds_at(l):
        return ParityVerdict(
            True, True, "parity-true",
            f"curated row {curated.cartan_type}{curated.rank} admits l = {l}",
        )
    return ParityVerdict(
        True, False, "parity-false",
        f"curated row {curated.cartan_type}{curated.rank} excludes l = {l}",
    )
