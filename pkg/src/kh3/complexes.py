"""Bounded cochain complexes over the cobordism category and their
simplification by delooping and Gaussian elimination."""

from __future__ import annotations

from typing import Optional

from .braid import BraidLetter, BraidWord
from .cobordism import (
    ALPHA, BETA, OMEGA, Cob, FlatTangle, birth, compose, death,
    glue_horizontal, identity_cob, identity_tangle, stack_tangles, tangle_name,
)
from .ring import H, ONE, ZPoly


class TangleComplex:
    """A bounded cochain complex of q-shifted flat tangles.

    ``objs[i]`` lists the objects (tangle, qshift) in homological degree i;
    ``diffs[i]`` holds the degree-(i -> i+1) differential as a sparse matrix
    {(row, col): Cob} with col indexing objs[i] and row indexing objs[i+1].
    """

    def __init__(self, objs=None, diffs=None):
        self.objs: dict[int, list[tuple[FlatTangle, int]]] = objs or {}
        self.diffs: dict[int, dict[tuple[int, int], Cob]] = diffs or {}

    # -- bookkeeping ---------------------------------------------------------
    def copy(self) -> "TangleComplex":
        return TangleComplex(
            {i: list(v) for i, v in self.objs.items()},
            {i: dict(v) for i, v in self.diffs.items()},
        )

    def degrees(self) -> list[int]:
        return sorted(i for i, v in self.objs.items() if v)

    def object_count(self) -> int:
        return sum(len(v) for v in self.objs.values())

    def object_multiset(self) -> list[tuple[int, int, Optional[str]]]:
        """Sorted (homdeg, qshift, smoothing-name) triples."""
        out = []
        for i, v in self.objs.items():
            for t, q in v:
                out.append((i, q, tangle_name(t) or repr(t)))
        return sorted(out)

    def shifted(self, du: int, dq: int) -> "TangleComplex":
        return TangleComplex(
            {i + du: [(t, q + dq) for t, q in v] for i, v in self.objs.items()},
            {i + du: dict(m) for i, m in self.diffs.items()},
        )

    def has_circles(self) -> bool:
        return any(t.circles for v in self.objs.values() for t, _ in v)

    # -- validation ----------------------------------------------------------
    def check_d2(self) -> None:
        """Assert exactly that consecutive differentials compose to zero."""
        for i in sorted(self.diffs):
            d1 = self.diffs.get(i, {})
            d2 = self.diffs.get(i + 1, {})
            if not d1 or not d2:
                continue
            by_col: dict[int, list[tuple[int, Cob]]] = {}
            for (r, c), f in d1.items():
                by_col.setdefault(c, []).append((r, f))
            by_src: dict[int, list[tuple[int, Cob]]] = {}
            for (r, c), g in d2.items():
                by_src.setdefault(c, []).append((r, g))
            for c, col in by_col.items():
                acc: dict[int, Cob] = {}
                for mid, f in col:
                    for r2, g in by_src.get(mid, []):
                        h = compose(f, g)
                        acc[r2] = h if r2 not in acc else acc[r2] + h
                for r2, total in acc.items():
                    if not total.is_zero():
                        raise AssertionError(
                            f"d^2 != 0 at level {i}, col {c}, row {r2}: {total!r}")

    def check_gradings(self) -> None:
        """Every differential entry is homogeneous and q-degree preserving."""
        for i, mat in self.diffs.items():
            for (r, c), f in mat.items():
                _, qs = self.objs[i][c]
                _, qt = self.objs[i + 1][r]
                if f.q_degree() != qs - qt:
                    raise AssertionError(
                        f"entry ({i},{r},{c}) has degree {f.q_degree()}, expected {qs - qt}")

    # -- debug dump ------------------------------------------------------
    def dump(self) -> str:
        lines = []
        for i in self.degrees():
            for t, q in self.objs[i]:
                lines.append(f"i={i} q={q} {tangle_name(t) or repr(t)}")
            mat = self.diffs.get(i)
            if mat:
                for (r, c) in sorted(mat):
                    f = mat[(r, c)]
                    parts = []
                    for mask in sorted(f.terms):
                        dots = [b for b in range(32) if mask >> b & 1]
                        desc = "id" if not dots else "dots" + "".join(str(d) for d in dots)
                        parts.append(f"({f.terms[mask]})*{desc}")
                    lines.append(f"({r},{c}): " + " + ".join(parts))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# building blocks


def empty_word_complex(strands: int = 3) -> TangleComplex:
    return TangleComplex({0: [(identity_tangle(strands), 0)]}, {})


def letter_complex(letter: BraidLetter) -> TangleComplex:
    """The two-object complex of one crossing on three strands."""
    smoothing = ALPHA if letter.gen == "a" else BETA
    saddle_up = Cob(OMEGA, smoothing, {0: ONE})
    saddle_down = Cob(smoothing, OMEGA, {0: ONE})
    if letter.sign == 1:
        return TangleComplex(
            {0: [(OMEGA, 1)], 1: [(smoothing, 2)]},
            {0: {(0, 0): saddle_up}},
        )
    return TangleComplex(
        {-1: [(smoothing, -2)], 0: [(OMEGA, -1)]},
        {-1: {(0, 0): saddle_down}},
    )


def stack(bottom: TangleComplex, top: TangleComplex) -> TangleComplex:
    """Total complex of the horizontal gluing, top over bottom.

    The differential on the (p, q) summand is (d_bottom ⊗ id) plus
    (-1)^p (id ⊗ d_top).
    """
    objs: dict[int, list[tuple[FlatTangle, int]]] = {}
    index: dict[tuple[int, int, int, int], int] = {}
    pdegs = sorted(bottom.objs)
    qdegs = sorted(top.objs)
    for p in pdegs:
        for qd in qdegs:
            n = p + qd
            lst = objs.setdefault(n, [])
            for ic, (tb, qb) in enumerate(bottom.objs[p]):
                for id_, (tt, qt) in enumerate(top.objs[qd]):
                    tangle, _ = stack_tangles(tb, tt)
                    index[(p, qd, ic, id_)] = len(lst)
                    lst.append((tangle, qb + qt))
    diffs: dict[int, dict[tuple[int, int], Cob]] = {}
    for p in pdegs:
        for qd in qdegs:
            n = p + qd
            mat = diffs.setdefault(n, {})
            # bottom differential, identity on top factor
            for (r, c), f in bottom.diffs.get(p, {}).items():
                for id_, (tt, _) in enumerate(top.objs[qd]):
                    src = index[(p, qd, c, id_)]
                    tgt = index[(p + 1, qd, r, id_)]
                    mat[(tgt, src)] = glue_horizontal(f, identity_cob(tt))
            # top differential, identity on bottom factor, Koszul sign (-1)^p
            sign = -1 if p % 2 else 1
            for (r, c), g in top.diffs.get(qd, {}).items():
                for ic, (tb, _) in enumerate(bottom.objs[p]):
                    src = index[(p, qd, ic, c)]
                    tgt = index[(p, qd + 1, ic, r)]
                    cob = glue_horizontal(identity_cob(tb), g)
                    mat[(tgt, src)] = cob.scale(sign) if sign < 0 else cob
    return TangleComplex(objs, {i: m for i, m in diffs.items() if m})


# ---------------------------------------------------------------------------
# delooping


def _find_circle(C: TangleComplex) -> Optional[tuple[int, int]]:
    for i in sorted(C.objs):
        for idx, (t, _) in enumerate(C.objs[i]):
            if t.circles:
                return (i, idx)
    return None


def deloop_once(C: TangleComplex, at: tuple[int, int]) -> TangleComplex:
    """Replace one circle-carrying object X by the two shifted circle-free
    objects, conjugating all differentials by the delooping isomorphism."""
    n, idx = at
    C = C.copy()
    S, q = C.objs[n][idx]
    phi_minus = death(S)
    phi_plus = death(S, dotted=True) - phi_minus.scale(H)
    inv_plus = birth(S)            # q+1 summand -> X
    inv_minus = birth(S, dotted=True)
    new_objs = list(C.objs[n])
    new_objs[idx: idx + 1] = [(S.drop_last_circle(), q + 1), (S.drop_last_circle(), q - 1)]
    C.objs[n] = new_objs

    def col_shift(c):
        return c if c < idx else c + 1

    # incoming entries f: W -> X become (phi+ o f, phi- o f)
    if n - 1 in C.diffs:
        mat = {}
        for (r, c), f in C.diffs[n - 1].items():
            if r == idx:
                g1 = compose(f, phi_plus)
                g2 = compose(f, phi_minus)
                if not g1.is_zero():
                    mat[(idx, c)] = g1
                if not g2.is_zero():
                    mat[(idx + 1, c)] = g2
            else:
                mat[(col_shift(r) if r >= idx else r, c)] = f
        C.diffs[n - 1] = mat
    # outgoing entries g: X -> Z become (g o birth, g o dotted birth)
    if n in C.diffs:
        mat = {}
        for (r, c), g in C.diffs[n].items():
            if c == idx:
                g1 = compose(inv_plus, g)
                g2 = compose(inv_minus, g)
                if not g1.is_zero():
                    mat[(r, idx)] = g1
                if not g2.is_zero():
                    mat[(r, idx + 1)] = g2
            else:
                mat[(r, col_shift(c) if c >= idx else c)] = g
        C.diffs[n] = mat
    return C


def deloop_all(C: TangleComplex) -> TangleComplex:
    while True:
        at = _find_circle(C)
        if at is None:
            return C
        C = deloop_once(C, at)


# ---------------------------------------------------------------------------
# Gaussian elimination


def _unit_entries(C: TangleComplex, n: int):
    """Cancellable entries at level n, in deterministic scan order."""
    out = []
    for (r, c), f in C.diffs.get(n, {}).items():
        ts, qs = C.objs[n][c]
        tt, qt = C.objs[n + 1][r]
        if ts is tt and qs == qt:
            ok, sign = f.is_unit()
            if ok:
                out.append((qs, c, r, sign))
    out.sort()
    return out


def gauss_eliminate_once(C: TangleComplex, at: tuple[int, int, int]) -> TangleComplex:
    """Cancel the invertible entry at (homdeg, row, col), in place.

    The new differential on the remaining objects is eps - gamma phi^{-1} delta.
    """
    n, r, c = at
    mat = C.diffs.get(n, {})
    phi = mat.get((r, c))
    if phi is None:
        raise ValueError("no such entry")
    ok, sign = phi.is_unit()
    ts, qs = C.objs[n][c]
    tt, qt = C.objs[n + 1][r]
    if not ok or ts is not tt or qs != qt:
        raise ValueError("entry is not invertible")
    gammas = [(i, g) for (i, cc), g in mat.items() if cc == c and i != r]
    deltas = [(j, d) for (i, j), d in mat.items() if i == r and j != c]
    new_mat = {}
    for (i, j), f in mat.items():
        if i == r or j == c:
            continue
        new_mat[(i, j)] = f
    for j, dlt in deltas:
        for i, gma in gammas:
            corr = compose(dlt, gma).scale(-sign)
            prev = new_mat.get((i, j))
            total = corr if prev is None else prev + corr
            if total.is_zero():
                new_mat.pop((i, j), None)
            else:
                new_mat[(i, j)] = total
    # drop the two objects and reindex everything touching levels n, n+1
    def drop(lst, k):
        return lst[:k] + lst[k + 1:]

    C.objs[n] = drop(C.objs[n], c)
    C.objs[n + 1] = drop(C.objs[n + 1], r)

    def shift_row(i):
        return i if i < r else i - 1

    def shift_col(j):
        return j if j < c else j - 1

    C.diffs[n] = {(shift_row(i), shift_col(j)): f for (i, j), f in new_mat.items()}
    if n - 1 in C.diffs:
        C.diffs[n - 1] = {
            (shift_col(i), j): f for (i, j), f in C.diffs[n - 1].items() if i != c
        }
    if n + 1 in C.diffs:
        C.diffs[n + 1] = {
            (i, shift_row(j)): f for (i, j), f in C.diffs[n + 1].items() if j != r
        }
    return C


def simplify(C: TangleComplex, check: bool = False) -> TangleComplex:
    """Deloop every circle, then cancel +-identity entries until none remain.

    Scan order: lowest homological degree, then smallest q-shift of the
    source object, then matrix position, so runs are reproducible.
    """
    C = deloop_all(C.copy())
    while True:
        progress = False
        for n in sorted(C.diffs):
            units = _unit_entries(C, n)
            if units:
                _q, c, r, _sign = units[0]
                gauss_eliminate_once(C, (n, r, c))
                progress = True
                break
        if not progress:
            break
    if check:
        C.check_d2()
    # drop empty levels
    C.objs = {i: v for i, v in C.objs.items() if v}
    C.diffs = {i: m for i, m in C.diffs.items() if m}
    return C


def scan_word(w: BraidWord, check: bool = False) -> TangleComplex:
    """Fold the word letter by letter, simplifying after every stacking."""
    C = empty_word_complex(3)
    for k, letter in enumerate(w):
        C = simplify(stack(C, letter_complex(letter)), check=check)
        limit = 40 * max(1, len(w))
        if C.object_count() > limit:  # regression tripwire, see module docs
            raise AssertionError(
                f"simplified complex has {C.object_count()} objects after "
                f"{k + 1} letters; expected at most {limit}")
    return C
