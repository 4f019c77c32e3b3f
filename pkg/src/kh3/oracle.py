"""Brute-force ground truth: Khovanov homology of 3-braid closures via the
full cube of resolutions, plus the Kauffman-bracket state sum.

Independent of the tangle pipeline: works directly on the closed diagram
with the rank-two Frobenius algebra Z[X]/(X^2).  The reduced variant places
the basepoint on the middle strand, matching the closure pipeline.
"""

from __future__ import annotations

from .algebra import BigradedGroups, IntComplex, homology
from .braid import BraidWord, closure_meta
from .ring import Laurent

MAX_ORACLE_LENGTH = 12


class ClosedDiagram:
    """The braid closure as crossings acting on 3*n strand segments.

    Segment (strand s, level l) has id 3*l + s; the closure identifies
    level n with level 0.  Crossing l involves strands (i, i+1) between
    levels l and l+1 and carries the sign of its braid letter.
    """

    def __init__(self, w: BraidWord):
        if len(w) > MAX_ORACLE_LENGTH:
            raise ValueError(f"oracle capped at {MAX_ORACLE_LENGTH} crossings")
        self.word = w
        self.n = len(w)
        self.crossings = []
        for l, letter in enumerate(w):
            i = 0 if letter.gen == "a" else 1
            self.crossings.append((l, i, letter.sign))
        meta = closure_meta(w)
        self.n_plus = meta.n_plus
        self.n_minus = meta.n_minus
        self.components = meta.components

    def resolve(self, state: int) -> tuple[list[int], int]:
        """Union-find circles for a resolution bitmask.

        Bit l = 1 means the 1-smoothing of crossing l.  For a positive
        crossing the 0-smoothing is the identity, for a negative crossing
        the cap-cup.  Returns (root per segment, circle count).
        """
        n = self.n
        if n == 0:
            return ([0, 1, 2], 3)
        nseg = 3 * n
        parent = list(range(nseg))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for l, i, sign in self.crossings:
            lo = 3 * l
            hi = 3 * ((l + 1) % n)
            third = 3 - i - (i + 1)
            union(lo + third, hi + third)
            bit = state >> l & 1
            identity = (bit == 0) if sign == 1 else (bit == 1)
            if identity:
                union(lo + i, hi + i)
                union(lo + i + 1, hi + i + 1)
            else:
                union(lo + i, lo + i + 1)
                union(hi + i, hi + i + 1)
        roots = [find(x) for x in range(nseg)]
        circles = len(set(roots))
        return roots, circles


def _circle_index(roots: list[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for r in roots:
        if r not in out:
            out[r] = len(out)
    return out


def cube_khovanov(w: BraidWord, reduced: bool = False) -> BigradedGroups:
    """Integral Khovanov homology of the braid closure by the full cube.

    With ``reduced`` the basepoint sits on the middle strand (segment
    (1, 0)); the reduced complex is the quotient with X at the basepoint
    set to zero, shifted by q^{-1}.
    """
    diag = ClosedDiagram(w)
    n = diag.n
    npos, nneg = diag.n_plus, diag.n_minus
    shift_u = -nneg
    shift_q = npos - 2 * nneg
    red_shift = -1 if reduced else 0

    if n == 0:
        free_circles = 2 if reduced else 3
        gens: dict[tuple[int, int], int] = {}
        for xmask in range(1 << free_circles):
            q = 3 - 2 * bin(xmask).count("1") + red_shift
            key = (0, q)
            gens[key] = gens.get(key, 0) + 1
        return homology(IntComplex(gens, {}))

    # resolve every vertex once
    vertex_roots = []
    vertex_circidx = []
    vertex_ncirc = []
    for state in range(1 << n):
        roots, _c = diag.resolve(state)
        cidx = _circle_index(roots)
        vertex_roots.append(roots)
        vertex_circidx.append(cidx)
        vertex_ncirc.append(len(cidx))

    base_seg = 1  # segment (strand 1, level 0): the middle strand
    popcount = [bin(s).count("1") for s in range(1 << n)]

    # enumerate generators bucketed by (homological degree, q-degree)
    gens: dict[tuple[int, int], int] = {}
    index: dict[tuple[int, int], int] = {}  # (state, xmask) -> index in bucket
    bucket_of: dict[tuple[int, int], tuple[int, int]] = {}
    for state in range(1 << n):
        c = vertex_ncirc[state]
        hdeg = popcount[state] + shift_u
        qbase = popcount[state] + shift_q + red_shift
        basefree = vertex_circidx[state][vertex_roots[state][base_seg]] if reduced else -1
        for xmask in range(1 << c):
            if reduced and (xmask >> basefree & 1):
                continue
            q = qbase + c - 2 * bin(xmask).count("1")
            key = (hdeg, q)
            pos = gens.get(key, 0)
            gens[key] = pos + 1
            index[(state, xmask)] = pos
            bucket_of[(state, xmask)] = key

    entries: dict[tuple[int, int], list[tuple[int, int, int]]] = {}

    def add_entry(src_key, row, col, val):
        entries.setdefault(src_key, []).append((row, col, val))

    for state in range(1 << n):
        c = vertex_ncirc[state]
        cidx = vertex_circidx[state]
        roots = vertex_roots[state]
        basefree = cidx[roots[base_seg]] if reduced else -1
        for l in range(n):
            if state >> l & 1:
                continue
            nstate = state | (1 << l)
            sign = -1 if (popcount[state & ((1 << l) - 1)] % 2) else 1
            nroots = vertex_roots[nstate]
            ncidx = vertex_circidx[nstate]
            nc = vertex_ncirc[nstate]
            nbase = ncidx[nroots[base_seg]] if reduced else -1
            # map old circles to new ones via any shared segment
            old_to_new = [0] * c
            seen = [False] * c
            for seg in range(3 * n):
                oi = cidx[roots[seg]]
                if not seen[oi]:
                    seen[oi] = True
                    old_to_new[oi] = ncidx[nroots[seg]]
            if nc == c - 1:
                # merge: two old circles hit the same new circle
                pre = {}
                pair = None
                for oi, ni in enumerate(old_to_new):
                    if ni in pre:
                        pair = (pre[ni], oi, ni)
                    pre[ni] = oi
                a_c, b_c, tgt = pair
                for xmask in range(1 << c):
                    if reduced and (xmask >> basefree & 1):
                        continue
                    xa = xmask >> a_c & 1
                    xb = xmask >> b_c & 1
                    if xa and xb:
                        continue  # X*X = 0
                    nmask = 0
                    for oi in range(c):
                        if oi in (a_c, b_c):
                            continue
                        if xmask >> oi & 1:
                            nmask |= 1 << old_to_new[oi]
                    if xa or xb:
                        nmask |= 1 << tgt
                    if reduced and (nmask >> nbase & 1):
                        continue
                    add_entry(bucket_of[(state, xmask)],
                              index[(nstate, nmask)], index[(state, xmask)], sign)
            else:
                # split: one old circle maps onto two new ones
                assert nc == c + 1
                cover = [False] * nc
                for oi, ni in enumerate(old_to_new):
                    cover[ni] = True
                extra = cover.index(False)
                # the split source: the old circle sharing a segment with `extra`
                src_circle = None
                for seg in range(3 * n):
                    if ncidx[nroots[seg]] == extra:
                        src_circle = cidx[roots[seg]]
                        break
                other = old_to_new[src_circle]
                for xmask in range(1 << c):
                    if reduced and (xmask >> basefree & 1):
                        continue
                    nmask_base = 0
                    for oi in range(c):
                        if oi != src_circle and (xmask >> oi & 1):
                            nmask_base |= 1 << old_to_new[oi]
                    if xmask >> src_circle & 1:
                        outs = [nmask_base | (1 << other) | (1 << extra)]  # X -> XX
                    else:
                        outs = [nmask_base | (1 << other), nmask_base | (1 << extra)]
                    for nmask in outs:
                        if reduced and (nmask >> nbase & 1):
                            continue
                        add_entry(bucket_of[(state, xmask)],
                                  index[(nstate, nmask)], index[(state, xmask)], sign)

    from .algebra import BigradedGroups, snf_profile_triples

    profiles = {key: snf_profile_triples(triples) for key, triples in entries.items()}
    out = {}
    for (i, q), n in gens.items():
        pout = profiles.get((i, q))
        pin = profiles.get((i - 1, q))
        free = n - (pout.rank if pout else 0) - (pin.rank if pin else 0)
        tors = pin.torsion() if pin else ()
        if free or tors:
            out[(i, q)] = (free, tors)
    return BigradedGroups(out)


def kauffman_bracket(w: BraidWord) -> Laurent:
    """Graded Euler characteristic of the unreduced theory by state sum:
    sum over resolutions of (-1)^{|v| - n_-} q^{|v| + n_+ - 2 n_-} (q + 1/q)^{circles}."""
    diag = ClosedDiagram.__new__(ClosedDiagram)
    diag.word = w
    diag.n = len(w)
    diag.crossings = []
    for l, letter in enumerate(w):
        i = 0 if letter.gen == "a" else 1
        diag.crossings.append((l, i, letter.sign))
    meta = closure_meta(w)
    npos, nneg = meta.n_plus, meta.n_minus
    n = len(w)
    total = Laurent()
    qplus = Laurent({1: 1, -1: 1})
    powers = [Laurent({0: 1})]
    for _ in range(n + 3):
        powers.append(powers[-1] * qplus)
    for state in range(1 << n):
        _roots, c = diag.resolve(state)
        weight = bin(state).count("1")
        sign = -1 if (weight - nneg) % 2 else 1
        mono = Laurent({weight + npos - 2 * nneg: sign})
        total = total + mono * powers[c]
    return total
