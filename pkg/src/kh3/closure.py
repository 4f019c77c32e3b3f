"""Closure of tangle complexes and the word-to-A-complex pipeline.

Closing the left pair of boundary points takes a three-strand complex to a
two-strand one; closing the right pair afterwards lands on one strand,
where the cobordism category is equivalent to free graded modules over
A = Z[X,h]/(X^2 - Xh).  The strand surviving both closures is the middle
strand of the braid, which therefore carries the module action (and the
basepoint of the reduced theory).
"""

from __future__ import annotations

from .braid import BraidWord
from .cobordism import ARC, Cob, FlatTangle, close_cob, close_tangle, cycles
from .complexes import TangleComplex, deloop_all, scan_word, simplify
from .ring import ONE, ZERO, ZPoly


class AElem:
    """p(h) + q(h)X in A = Z[X,h]/(X^2 - Xh)."""

    __slots__ = ("p", "q")

    def __init__(self, p: ZPoly = ZERO, q: ZPoly = ZERO):
        self.p = p
        self.q = q

    @staticmethod
    def const(c: int) -> "AElem":
        return AElem(ZPoly.const(c), ZERO)

    def __add__(self, other: "AElem") -> "AElem":
        return AElem(self.p + other.p, self.q + other.q)

    def __neg__(self) -> "AElem":
        return AElem(-self.p, -self.q)

    def __sub__(self, other: "AElem") -> "AElem":
        return AElem(self.p - other.p, self.q - other.q)

    def __mul__(self, other) -> "AElem":
        if isinstance(other, int):
            return AElem(self.p * other, self.q * other)
        # (p1 + q1 X)(p2 + q2 X), X^2 = Xh
        p = self.p * other.p
        q = self.p * other.q + self.q * other.p + (self.q * other.q).shift(1)
        return AElem(p, q)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AElem":
        out = AElem.const(1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def is_unit(self) -> tuple[bool, int]:
        """Units of A are exactly +-1."""
        if self.q.is_zero() and self.p.coeffs in ((1,), (-1,)):
            return (True, self.p.coeffs[0])
        return (False, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, AElem) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return f"AElem({self.p!r}, {self.q!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        if self.p:
            parts.append(str(self.p))
        if self.q:
            qs = str(self.q)
            if qs == "1":
                parts.append("X")
            elif qs == "-1":
                parts.append("-X")
            elif ("+" in qs) or (" - " in qs):
                parts.append(f"({qs})X")
            else:
                parts.append(f"{qs}X")
        out = parts[0]
        for piece in parts[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out


X = AElem(ZERO, ONE)
H_A = AElem(ZPoly((0, 1)), ZERO)
TWO_X_MINUS_H = AElem(ZPoly((0, -1)), ZPoly((2,)))


class AComplex:
    """A bounded complex of free graded A-modules.

    ``gens[i]`` lists generator q-degrees in degree i; ``diffs[i]`` the
    sparse matrix {(row, col): AElem} into degree i+1.
    """

    def __init__(self, gens=None, diffs=None):
        self.gens: dict[int, list[int]] = gens or {}
        self.diffs: dict[int, dict[tuple[int, int], AElem]] = diffs or {}

    def copy(self) -> "AComplex":
        return AComplex({i: list(v) for i, v in self.gens.items()},
                        {i: dict(m) for i, m in self.diffs.items()})

    def degrees(self) -> list[int]:
        return sorted(i for i, v in self.gens.items() if v)

    def generator_count(self) -> int:
        return sum(len(v) for v in self.gens.values())

    def generator_multiset(self) -> list[tuple[int, int]]:
        return sorted((i, q) for i, v in self.gens.items() for q in v)

    def shifted(self, du: int, dq: int) -> "AComplex":
        return AComplex({i + du: [q + dq for q in v] for i, v in self.gens.items()},
                        {i + du: dict(m) for i, m in self.diffs.items()})

    def direct_sum(self, other: "AComplex") -> "AComplex":
        out = self.copy()
        offsets = {}
        for i, v in other.gens.items():
            cur = out.gens.setdefault(i, [])
            offsets[i] = len(cur)
            cur.extend(v)
        for i, m in other.diffs.items():
            tgt = out.diffs.setdefault(i, {})
            ro, co = offsets.get(i + 1, len(out.gens.get(i + 1, []))), offsets.get(i, 0)
            for (r, c), a in m.items():
                tgt[(r + ro, c + co)] = a
        return out

    def check_d2(self) -> None:
        for i in sorted(self.diffs):
            d1 = self.diffs.get(i, {})
            d2 = self.diffs.get(i + 1, {})
            if not d1 or not d2:
                continue
            acc: dict[tuple[int, int], AElem] = {}
            for (r, c), a in d1.items():
                for (r2, c2), b in d2.items():
                    if c2 == r:
                        key = (r2, c)
                        prod = a * b
                        acc[key] = prod if key not in acc else acc[key] + prod
            for key, val in acc.items():
                if not val.is_zero():
                    raise AssertionError(f"d^2 != 0 over A at level {i}, {key}")

    def check_gradings(self) -> None:
        """Entries p + qX from degree j to j' need h-powers (j'-j)/2 in p and
        (j'-j-2)/2 in the X part."""
        for i, m in self.diffs.items():
            for (r, c), a in m.items():
                j = self.gens[i][c]
                j2 = self.gens[i + 1][r]
                for k, coef in enumerate(a.p.coeffs):
                    if coef and 2 * k != j2 - j:
                        raise AssertionError(f"inhomogeneous entry at ({i},{r},{c})")
                for k, coef in enumerate(a.q.coeffs):
                    if coef and 2 * k + 2 != j2 - j:
                        raise AssertionError(f"inhomogeneous entry at ({i},{r},{c})")


def build_Aj(j: int, shift: tuple[int, int] = (0, 0)) -> AComplex:
    """The two-term complex A -> q^{2j} A with differential (2X-h)^j."""
    if j < 1:
        raise ValueError("j must be >= 1")
    i0, q0 = shift
    return AComplex({i0: [q0], i0 + 1: [q0 + 2 * j]},
                    {i0: {(0, 0): TWO_X_MINUS_H ** j}})


def free_A(shift: tuple[int, int] = (0, 0)) -> AComplex:
    i0, q0 = shift
    return AComplex({i0: [q0]}, {})


# ---------------------------------------------------------------------------
# closure functors


def close_left(C: TangleComplex) -> TangleComplex:
    """Join the two leftmost boundary points and deloop the results."""
    objs = {}
    for i, v in C.objs.items():
        objs[i] = [(close_tangle(t, "left")[0], q) for t, q in v]
    diffs = {}
    for i, m in C.diffs.items():
        diffs[i] = {rc: close_cob(f, "left") for rc, f in m.items()}
        diffs[i] = {rc: f for rc, f in diffs[i].items() if not f.is_zero()}
    return deloop_all(TangleComplex(objs, diffs))


def cob_to_A(f: Cob) -> AElem:
    """Identify a cobordism between single circle-free arcs with an element
    of A: the undotted disc is 1, the dotted disc is X."""
    if f.source.narcs != 1 or f.source.circles or f.target.circles:
        raise ValueError("not a one-arc to one-arc cobordism")
    assert cycles(f.source, f.target).n == 1
    p = f.terms.get(0, ZERO)
    q = f.terms.get(1, ZERO)
    return AElem(p, q)


def close_right_to_A(C: TangleComplex) -> AComplex:
    """Join the two rightmost points of a two-strand complex, deloop, and
    read the result as a complex of free graded A-modules."""
    objs = {}
    for i, v in C.objs.items():
        objs[i] = [(close_tangle(t, "right")[0], q) for t, q in v]
    diffs = {}
    for i, m in C.diffs.items():
        entries = {rc: close_cob(f, "right") for rc, f in m.items()}
        diffs[i] = {rc: f for rc, f in entries.items() if not f.is_zero()}
    D = deloop_all(TangleComplex(objs, diffs))
    gens = {}
    for i, v in D.objs.items():
        for t, _q in v:
            if t.arcs != ARC.arcs or t.circles:
                raise AssertionError("closure did not land on single arcs")
        gens[i] = [q for _t, q in v]
    adiffs = {}
    for i, m in D.diffs.items():
        out = {}
        for rc, f in m.items():
            a = cob_to_A(f)
            if not a.is_zero():
                out[rc] = a
        if out:
            adiffs[i] = out
    return AComplex(gens, adiffs)


def _unit_entries_A(C: AComplex, n: int):
    out = []
    for (r, c), a in C.diffs.get(n, {}).items():
        if C.gens[n][c] == C.gens[n + 1][r]:
            ok, sign = a.is_unit()
            if ok:
                out.append((C.gens[n][c], c, r, sign))
    out.sort()
    return out


def gauss_eliminate_A(C: AComplex, at: tuple[int, int, int]) -> AComplex:
    n, r, c = at
    mat = C.diffs.get(n, {})
    phi = mat[(r, c)]
    ok, sign = phi.is_unit()
    if not ok:
        raise ValueError("entry is not a unit of A")
    gammas = [(i, g) for (i, cc), g in mat.items() if cc == c and i != r]
    deltas = [(j, d) for (i, j), d in mat.items() if i == r and j != c]
    new_mat = {k: v for k, v in mat.items() if k[0] != r and k[1] != c}
    for j, dlt in deltas:
        for i, gma in gammas:
            corr = (dlt * gma) * (-sign)
            prev = new_mat.get((i, j))
            total = corr if prev is None else prev + corr
            if total.is_zero():
                new_mat.pop((i, j), None)
            else:
                new_mat[(i, j)] = total

    def drop(lst, k):
        return lst[:k] + lst[k + 1:]

    C.gens[n] = drop(C.gens[n], c)
    C.gens[n + 1] = drop(C.gens[n + 1], r)

    def srow(i):
        return i if i < r else i - 1

    def scol(j):
        return j if j < c else j - 1

    C.diffs[n] = {(srow(i), scol(j)): a for (i, j), a in new_mat.items()}
    if n - 1 in C.diffs:
        C.diffs[n - 1] = {(scol(i), j): a for (i, j), a in C.diffs[n - 1].items() if i != c}
    if n + 1 in C.diffs:
        C.diffs[n + 1] = {(i, srow(j)): a for (i, j), a in C.diffs[n + 1].items() if j != r}
    return C


def simplify_A(C: AComplex) -> AComplex:
    """Cancel +-1 entries until the differential lies in the ideal (X, h)."""
    C = C.copy()
    while True:
        progress = False
        for n in sorted(C.diffs):
            units = _unit_entries_A(C, n)
            if units:
                _q, c, r, _sign = units[0]
                gauss_eliminate_A(C, (n, r, c))
                progress = True
                break
        if not progress:
            break
    C.gens = {i: v for i, v in C.gens.items() if v}
    C.diffs = {i: m for i, m in C.diffs.items() if m}
    return C


def close_complex(C: TangleComplex) -> AComplex:
    """Closure pipeline for an already-built three-strand complex."""
    C2 = simplify(close_left(C))
    return simplify_A(close_right_to_A(C2))


def full_pipeline(w: BraidWord) -> AComplex:
    """Braid word to simplified A-complex of its closure.

    The module action lives on the middle strand, so reduced invariants
    computed from the result use a basepoint on that strand's component.
    """
    return close_complex(scan_word(w))
