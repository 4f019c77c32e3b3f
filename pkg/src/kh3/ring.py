"""Exact coefficient arithmetic: Z[h] and Laurent polynomials in q."""

from __future__ import annotations

from typing import Iterable


class ZPoly:
    """Dense polynomial in h with integer coefficients.

    Immutable; ``coeffs[k]`` is the coefficient of h^k, trailing zeros
    stripped so equality and hashing are canonical.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors ------------------------------------------------
    @staticmethod
    def const(c: int) -> "ZPoly":
        return ZPoly((c,))

    @staticmethod
    def monomial(c: int, k: int) -> "ZPoly":
        return ZPoly((0,) * k + (c,))

    # -- structure ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree in h; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def constant(self) -> int:
        """Coefficient of h^0."""
        return self.coeffs[0] if self.coeffs else 0

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def __call__(self, x: int) -> int:
        """Evaluate at an integer (h -> x)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic --------------------------------------------------
    def __add__(self, other: "ZPoly") -> "ZPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] += c
        return ZPoly(cs)

    def __neg__(self) -> "ZPoly":
        return ZPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + (-other)

    def __mul__(self, other) -> "ZPoly":
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return ZPoly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        cs = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        cs[i + j] += ca * cb
        return ZPoly(cs)

    __rmul__ = __mul__

    def shift(self, k: int) -> "ZPoly":
        """Multiply by h^k."""
        if not self.coeffs:
            return self
        return ZPoly((0,) * k + self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, ZPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"ZPoly({self.coeffs})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                hp = "h" if k == 1 else f"h^{k}"
                if c == 1:
                    parts.append(hp)
                elif c == -1:
                    parts.append(f"-{hp}")
                else:
                    parts.append(f"{c}{hp}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


ZERO = ZPoly()
ONE = ZPoly((1,))
MINUS_ONE = ZPoly((-1,))
H = ZPoly((0, 1))


class Laurent:
    """Laurent polynomial in q over Z, as a map exponent -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for e, c in dict(terms).items():
                if c:
                    cleaned[e] = c
        object.__setattr__(self, "terms", cleaned)

    @staticmethod
    def monomial(c: int, e: int) -> "Laurent":
        return Laurent({e: c})

    def __add__(self, other: "Laurent") -> "Laurent":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Laurent(terms)

    def __neg__(self) -> "Laurent":
        return Laurent({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, int):
            return Laurent({e: c * other for e, c in self.terms.items()})
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                terms[e] = terms.get(e, 0) + c1 * c2
        return Laurent(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        out = Laurent({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if e == 0:
                base = str(c)
            else:
                qp = "q" if e == 1 else f"q^{e}"
                base = qp if c == 1 else (f"-{qp}" if c == -1 else f"{c}{qp}")
            parts.append(base)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"Laurent({self.terms!r})"


Q_PLUS_QINV = Laurent({1: 1, -1: 1})
