"""Polynomials in q with integer coefficients.

Dense immutable representation, trailing zeros stripped. Used for
Kazhdan-Lusztig polynomials, R-polynomials and graded multiplicities,
so only ring operations and a couple of shape queries are needed.
"""

from __future__ import annotations

from typing import Iterable


class QPoly:
    """Integer polynomial in the variable q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = list(int(x) for x in coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def zero(cls) -> "QPoly":
        return cls(())

    @classmethod
    def one(cls) -> "QPoly":
        return cls((1,))

    @classmethod
    def q(cls, exponent: int = 1) -> "QPoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        return cls([0] * exponent + [1])

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, value: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * value + c
        return out

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return QPoly(out)

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __neg__(self) -> "QPoly":
        return QPoly([-c for c in self.coeffs])

    def __mul__(self, other) -> "QPoly":
        if isinstance(other, int):
            return QPoly([other * c for c in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k."""
        if self.is_zero():
            return self
        return QPoly([0] * k + list(self.coeffs))

    def reciprocal(self, degree: int) -> "QPoly":
        """q^degree * p(1/q); requires degree >= deg p."""
        if degree < self.degree:
            raise ValueError("degree too small for reciprocal")
        out = [0] * (degree + 1)
        for k, c in enumerate(self.coeffs):
            out[degree - k] = c
        return QPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QPoly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}q" if k == 1 else f"{mag}q^{k}"
                if c < 0:
                    term = "-" + term
                parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out
