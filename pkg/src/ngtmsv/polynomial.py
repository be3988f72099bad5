"""Sparse multivariate polynomials with complex coefficients.

Used as the coefficient ring when a truncated series must carry phase-space
variables symbolically (the Wigner kernel is a polynomial in the four
quadratures). Exponent tuples key a dict of coefficients; variables are
anonymous positions 0..nvars-1.
"""

from __future__ import annotations

from .errors import ConstructionError

_NUM = (int, float, complex)


class Polynomial:
    """Polynomial in ``nvars`` variables over the complex numbers."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for expo, coeff in terms.items():
                if len(expo) != nvars:
                    raise ConstructionError(
                        f"exponent {expo} does not have {nvars} entries")
                if coeff != 0:
                    self.terms[tuple(expo)] = coeff

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value} if value != 0 else None)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Polynomial":
        expo = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {expo: 1.0})

    def _like(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ConstructionError("polynomials over different variable counts")
            return other
        if isinstance(other, _NUM):
            return Polynomial.constant(self.nvars, other)
        return None

    def __add__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for expo, c in o.terms.items():
            s = out.get(expo, 0) + c
            if s == 0:
                out.pop(expo, None)
            else:
                out[expo] = s
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _NUM):
            if other == 0:
                return Polynomial(self.nvars)
            return Polynomial(self.nvars,
                              {e: c * other for e, c in self.terms.items()})
        o = self._like(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expo, 0) + c1 * c2
                if s == 0:
                    out.pop(expo, None)
                else:
                    out[expo] = s
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, _NUM):
            if not self.terms:
                return other == 0
            return self.terms == {(0,) * self.nvars: other}
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, point) -> complex:
        """Evaluate at a numeric point (sequence of nvars numbers)."""
        if len(point) != self.nvars:
            raise ConstructionError(
                f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0j
        for expo, coeff in self.terms.items():
            term = coeff
            for x, k in zip(point, expo):
                for _ in range(k):
                    term = term * x
            total += term
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.terms!r})"
