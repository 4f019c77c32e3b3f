"""Dotted cobordisms between crossingless tangles in a rectangle.

Objects are flat tangles: a planar perfect matching of the boundary points
of a rectangle (m points on the bottom, n on top) together with some closed
circles.  Morphisms are Z[h]-linear combinations of canonical cobordisms.
A canonical cobordism puts a genus-zero disc with zero or one dot on every
boundary cycle of the (source, target) pair, so it is just a dot pattern;
arbitrary surfaces reduce to such combinations via

    sphere = 0,   dotted sphere = 1,   two dots = h * (one dot),
    handle = 2*dot - h,
    neck cut: piece = (dot one side)(other) + (one side)(dot other) - h(both).

Composition, horizontal gluing (stacking rectangles) and the two closure
operations share one mechanism: merge the disc pieces along the glued
curves with Euler-characteristic bookkeeping, then reduce.  The merge
combinatorics depend only on the tangles involved, so they are computed
once per tangle tuple and cached as a "plan".
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Optional

from .ring import H, MINUS_ONE, ONE, ZERO, ZPoly

# ---------------------------------------------------------------------------
# flat tangles


class FlatTangle:
    """A crossingless tangle: nb bottom points, nt top points, planar arcs,
    and a number of anonymous closed circles.

    Boundary points are encoded as integers: bottom i -> i for i < nb,
    top j -> nb + j.  Instances are interned, so identity comparison works.
    """

    __slots__ = ("nb", "nt", "arcs", "circles", "_hash")

    _intern: dict = {}

    def __new__(cls, nb: int, nt: int, arcs: Iterable[tuple[int, int]], circles: int = 0):
        arcs = tuple(sorted(tuple(sorted(a)) for a in arcs))
        key = (nb, nt, arcs, circles)
        cached = cls._intern.get(key)
        if cached is not None:
            return cached
        self = object.__new__(cls)
        object.__setattr__(self, "nb", nb)
        object.__setattr__(self, "nt", nt)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "circles", circles)
        object.__setattr__(self, "_hash", hash(key))
        _validate_tangle(self)
        cls._intern[key] = self
        return self

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("FlatTangle is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    @property
    def npoints(self) -> int:
        return self.nb + self.nt

    @property
    def narcs(self) -> int:
        return len(self.arcs)

    @property
    def ncurves(self) -> int:
        return len(self.arcs) + self.circles

    def arc_at(self) -> dict[int, int]:
        """point -> index of the arc through it."""
        out = {}
        for i, (p, q) in enumerate(self.arcs):
            out[p] = i
            out[q] = i
        return out

    def drop_last_circle(self) -> "FlatTangle":
        if self.circles < 1:
            raise ValueError("no circle to drop")
        return FlatTangle(self.nb, self.nt, self.arcs, self.circles - 1)

    def add_circle(self) -> "FlatTangle":
        return FlatTangle(self.nb, self.nt, self.arcs, self.circles + 1)

    def __repr__(self):
        return f"FlatTangle({self.nb},{self.nt},{self.arcs},{self.circles})"

    def __str__(self):
        name = tangle_name(self)
        return name if name else repr(self)


def _boundary_position(t: FlatTangle, p: int) -> int:
    # position along the rectangle boundary circle, counterclockwise
    if p < t.nb:
        return p
    return t.nb + (t.nt - 1 - (p - t.nb))


def _validate_tangle(t: FlatTangle) -> None:
    if (t.nb + t.nt) % 2 != 0:
        raise ValueError("nb + nt must be even")
    pts = [p for a in t.arcs for p in a]
    if sorted(pts) != list(range(t.nb + t.nt)):
        raise ValueError("arcs must form a perfect matching of the boundary points")
    pos = [tuple(sorted((_boundary_position(t, p), _boundary_position(t, q)))) for p, q in t.arcs]
    for i, (a1, b1) in enumerate(pos):
        for a2, b2 in pos[i + 1:]:
            if (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1):
                raise ValueError("matching is not planar")


def identity_tangle(n: int) -> FlatTangle:
    return FlatTangle(n, n, [(i, n + i) for i in range(n)])


# the named smoothings on three strands (D^3_3)
OMEGA = identity_tangle(3)
ALPHA = FlatTangle(3, 3, [(0, 1), (3, 4), (2, 5)])
BETA = FlatTangle(3, 3, [(0, 3), (1, 2), (4, 5)])
GAMMA = FlatTangle(3, 3, [(0, 1), (4, 5), (2, 3)])
DELTA = FlatTangle(3, 3, [(1, 2), (3, 4), (0, 5)])

# two-strand smoothings (D^2_2)
OMEGA2 = identity_tangle(2)
ALPHA2 = FlatTangle(2, 2, [(0, 1), (2, 3)])

# the (3,1)- and (1,3)-rectangle objects
EPS = FlatTangle(3, 1, [(0, 1), (2, 3)])
ZETA = FlatTangle(3, 1, [(1, 2), (0, 3)])
EPS_STAR = FlatTangle(1, 3, [(1, 2), (0, 3)])
ZETA_STAR = FlatTangle(1, 3, [(2, 3), (0, 1)])

ARC = identity_tangle(1)

_NAMES = {
    OMEGA: "omega", ALPHA: "alpha", BETA: "beta", GAMMA: "gamma", DELTA: "delta",
    OMEGA2: "omega~", ALPHA2: "alpha~",
    EPS: "eps", ZETA: "zeta", EPS_STAR: "eps*", ZETA_STAR: "zeta*",
    ARC: "arc",
}


def tangle_name(t: FlatTangle) -> Optional[str]:
    base = FlatTangle(t.nb, t.nt, t.arcs, 0)
    name = _NAMES.get(base)
    if name is None:
        return None
    if t.circles:
        name += f"+{t.circles}o"
    return name


# ---------------------------------------------------------------------------
# boundary cycles of a (source, target) pair


class CycleData:
    """Boundary cycles of the cobordism cylinder over (source, target).

    A cycle is a closed curve alternating between source and target arcs
    through shared boundary points, or a lone circle of either tangle.
    ``of_scurve[k]`` / ``of_tcurve[k]`` give the cycle index of curve k of
    the source / target; ``of_point[p]`` the cycle through boundary point p.
    """

    __slots__ = ("n", "of_scurve", "of_tcurve", "of_point")

    def __init__(self, n, of_scurve, of_tcurve, of_point):
        self.n = n
        self.of_scurve = of_scurve
        self.of_tcurve = of_tcurve
        self.of_point = of_point


_CYCLES: dict = {}


def cycles(source: FlatTangle, target: FlatTangle) -> CycleData:
    key = (source, target)
    data = _CYCLES.get(key)
    if data is not None:
        return data
    if (source.nb, source.nt) != (target.nb, target.nt):
        raise ValueError("source and target live in different rectangles")
    s_at = source.arc_at()
    t_at = target.arc_at()
    of_s = [-1] * source.ncurves
    of_t = [-1] * target.ncurves
    of_p = [-1] * source.npoints
    n = 0
    for start in range(source.npoints):
        if of_p[start] >= 0:
            continue
        idx = n
        n += 1
        p = start
        while True:
            of_p[p] = idx
            sa = s_at[p]
            of_s[sa] = idx
            p2 = sum(source.arcs[sa]) - p
            of_p[p2] = idx
            ta = t_at[p2]
            of_t[ta] = idx
            p = sum(target.arcs[ta]) - p2
            if p == start:
                break
    for j in range(source.circles):
        of_s[source.narcs + j] = n
        n += 1
    for j in range(target.circles):
        of_t[target.narcs + j] = n
        n += 1
    data = CycleData(n, of_s, of_t, of_p)
    _CYCLES[key] = data
    return data


# ---------------------------------------------------------------------------
# canonical linear combinations


class Cob:
    """A Z[h]-linear combination of canonical cobordisms source -> target.

    ``terms`` maps a dot mask (bit i set <=> the disc on boundary cycle i
    carries a dot) to a nonzero coefficient.
    """

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: FlatTangle, target: FlatTangle, terms: dict):
        self.source = source
        self.target = target
        self.terms = {m: p for m, p in terms.items() if p}

    # -- linear structure ---------------------------------------------------
    def __add__(self, other: "Cob") -> "Cob":
        assert self.source is other.source and self.target is other.target
        terms = dict(self.terms)
        for m, p in other.terms.items():
            q = terms.get(m)
            terms[m] = p if q is None else q + p
        return Cob(self.source, self.target, terms)

    def __neg__(self) -> "Cob":
        return Cob(self.source, self.target, {m: -p for m, p in self.terms.items()})

    def __sub__(self, other: "Cob") -> "Cob":
        return self + (-other)

    def scale(self, c) -> "Cob":
        if isinstance(c, int):
            c = ZPoly.const(c)
        return Cob(self.source, self.target, {m: p * c for m, p in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cob)
            and self.source is other.source
            and self.target is other.target
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    # -- grading -------------------------------------------------------------
    def q_degrees(self) -> set[int]:
        """Degrees chi(C) - chi(source) - 2*dots - 2*(h power), one per monomial."""
        nc = cycles(self.source, self.target).n
        chi_s = self.source.narcs
        out = set()
        for mask, poly in self.terms.items():
            dots = bin(mask).count("1")
            base = nc - chi_s - 2 * dots
            for k, c in enumerate(poly.coeffs):
                if c:
                    out.add(base - 2 * k)
        return out

    def q_degree(self) -> int:
        """The common homogeneous degree; raises if mixed or zero."""
        degs = self.q_degrees()
        if len(degs) != 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def is_unit(self) -> tuple[bool, int]:
        """(is +-identity, sign).  Requires source is target as tangles."""
        if self.source is not self.target or len(self.terms) != 1:
            return (False, 0)
        mask, poly = next(iter(self.terms.items()))
        if mask != 0 or len(poly.coeffs) != 1 or poly.coeffs[0] not in (1, -1):
            return (False, 0)
        return (True, poly.coeffs[0])

    def __repr__(self):
        bits = []
        for m in sorted(self.terms):
            dots = [i for i in range(32) if m >> i & 1]
            bits.append(f"({self.terms[m]})*dots{dots}")
        return f"Cob({self.source}->{self.target}: {' + '.join(bits) or '0'})"


def zero_cob(source: FlatTangle, target: FlatTangle) -> Cob:
    return Cob(source, target, {})


# ---------------------------------------------------------------------------
# reduction of raw pieces to canonical form

_PIECE_CACHE: dict = {}


def _expand_piece(cyc_mask: int, genus: int, dots: int) -> list[tuple[int, ZPoly]]:
    """Canonical expansion of one connected piece with the given boundary
    cycles, genus and dot count.  Closed pieces (mask 0) return scalars on
    mask 0."""
    key = (cyc_mask, genus, dots)
    cached = _PIECE_CACHE.get(key)
    if cached is not None:
        return cached
    acc: dict[int, ZPoly] = {}

    def add(mask: int, poly: ZPoly):
        if poly:
            prev = acc.get(mask)
            acc[mask] = poly if prev is None else prev + poly

    # handles each contribute (2*dot - h)
    for j in range(genus + 1):
        coeff = ZPoly.monomial(comb(genus, j) * (2 ** j) * ((-1) ** (genus - j)), genus - j)
        m = dots + j
        if cyc_mask == 0:
            # closed component: sphere with m dots
            if m >= 1:
                add(0, coeff.shift(m - 1))
            continue
        if m >= 1:
            add(cyc_mask, coeff.shift(m - 1))
        else:
            bits = [1 << i for i in range(cyc_mask.bit_length()) if cyc_mask >> i & 1]
            b = len(bits)
            for sub in range(1 << b):
                if sub == (1 << b) - 1:
                    continue  # proper subsets only
                smask = 0
                size = 0
                for i, bit in enumerate(bits):
                    if sub >> i & 1:
                        smask |= bit
                        size += 1
                sign_pow = b - 1 - size
                add(smask, coeff * ZPoly.monomial((-1) ** sign_pow, sign_pow))
    out = [(m, p) for m, p in acc.items() if p]
    _PIECE_CACHE[key] = out
    return out


def from_pieces(source: FlatTangle, target: FlatTangle,
                pieces: list[tuple[int, int, int]]) -> Cob:
    """Build a Cob from raw pieces (cycle mask, genus, dots) covering every
    boundary cycle of (source, target) exactly once."""
    cyc = cycles(source, target)
    covered = 0
    partials: list[tuple[int, ZPoly]] = [(0, ONE)]
    for mask, genus, dots in pieces:
        assert covered & mask == 0
        covered |= mask
        exp = _expand_piece(mask, genus, dots)
        partials = [(m | em, p * ep) for m, p in partials for em, ep in exp if p]
    assert covered == (1 << cyc.n) - 1
    terms: dict[int, ZPoly] = {}
    for m, p in partials:
        prev = terms.get(m)
        terms[m] = p if prev is None else prev + p
    return Cob(source, target, terms)


# ---------------------------------------------------------------------------
# elementary cobordisms


def identity_cob(t: FlatTangle) -> Cob:
    cyc = cycles(t, t)
    if t.circles == 0:
        return Cob(t, t, {0: ONE})
    pieces = []
    seen = 0
    for a in range(t.narcs):
        m = 1 << cyc.of_scurve[a]
        if not seen & m:
            pieces.append((m, 0, 0))
            seen |= m
    for j in range(t.circles):
        m = (1 << cyc.of_scurve[t.narcs + j]) | (1 << cyc.of_tcurve[t.narcs + j])
        pieces.append((m, 0, 0))
    return from_pieces(t, t, pieces)


def dot_identity(t: FlatTangle, curve: int = 0) -> Cob:
    """Identity with one dot on the piece containing the given curve index."""
    cyc = cycles(t, t)
    target_cycle = cyc.of_scurve[curve]
    pieces = []
    done = 0
    for a in range(t.narcs):
        m = 1 << cyc.of_scurve[a]
        if not done & m:
            pieces.append((m, 0, 1 if cyc.of_scurve[a] == target_cycle else 0))
            done |= m
    for j in range(t.circles):
        cidx = t.narcs + j
        m = (1 << cyc.of_scurve[cidx]) | (1 << cyc.of_tcurve[cidx])
        pieces.append((m, 0, 1 if cyc.of_scurve[cidx] == target_cycle else 0))
    return from_pieces(t, t, pieces)


def elementary(source: FlatTangle, target: FlatTangle) -> Cob:
    """The undotted canonical cobordism (all discs, no dots): identities,
    surgeries and multiple surgeries, depending on the pair."""
    if source.circles or target.circles:
        raise ValueError("elementary cobordisms are between circle-free tangles")
    return Cob(source, target, {0: ONE})


def dotted_on_arc(source: FlatTangle, target: FlatTangle, arc: tuple[int, int],
                  side: str = "s") -> Cob:
    """Undotted cobordism with one dot added on the piece through the given
    arc (a sorted endpoint pair of the source if side='s', target if 't')."""
    cyc = cycles(source, target)
    t = source if side == "s" else target
    idx = t.arcs.index(tuple(sorted(arc)))
    c = (cyc.of_scurve if side == "s" else cyc.of_tcurve)[idx]
    return Cob(source, target, {1 << c: ONE})


def _circle_pair_pieces(source, target, cyc, skip_source_last=False,
                        skip_target_last=False):
    pieces = []
    seen = 0
    for a in range(source.narcs):
        m = 1 << cyc.of_scurve[a]
        if not seen & m:
            pieces.append([m, 0, 0])
            seen |= m
    ns = source.circles - (1 if skip_source_last else 0)
    nt = target.circles - (1 if skip_target_last else 0)
    assert ns == nt
    for j in range(ns):
        m = (1 << cyc.of_scurve[source.narcs + j]) | (1 << cyc.of_tcurve[target.narcs + j])
        pieces.append([m, 0, 0])
    return pieces


def death(source: FlatTangle, dotted: bool = False) -> Cob:
    """Cap off the last circle of the source."""
    target = source.drop_last_circle()
    cyc = cycles(source, target)
    pieces = _circle_pair_pieces(source, target, cyc, skip_source_last=True)
    cap = [1 << cyc.of_scurve[source.narcs + source.circles - 1], 0, 1 if dotted else 0]
    return from_pieces(source, target, [tuple(p) for p in pieces] + [tuple(cap)])


def birth(target: FlatTangle, dotted: bool = False) -> Cob:
    """Create the last circle of the target."""
    source = target.drop_last_circle()
    cyc = cycles(source, target)
    pieces = _circle_pair_pieces(source, target, cyc, skip_target_last=True)
    cup = [1 << cyc.of_tcurve[target.narcs + target.circles - 1], 0, 1 if dotted else 0]
    return from_pieces(source, target, [tuple(p) for p in pieces] + [tuple(cup)])


# ---------------------------------------------------------------------------
# gluing plans

class _Plan:
    """Merge combinatorics for one composition/gluing of canonical discs.

    groups: per merged piece, (mask over f-cycles, mask over g-cycles,
    mask over new cycles, genus).  Dot counts vary per term; everything
    else is fixed by the tangles.
    """

    __slots__ = ("groups", "new_source", "new_target", "ncyc_new")

    def __init__(self, groups, new_source, new_target, ncyc_new):
        self.groups = groups
        self.new_source = new_source
        self.new_target = new_target
        self.ncyc_new = ncyc_new


def _build_plan(nf: int, ng: int, unions, chi_deltas, new_assign, ncyc_new,
                new_source, new_target) -> _Plan:
    """unions: (f-cycle, g-cycle) pairs to merge (g may be None for unary ops
    where both entries refer to f-cycles); chi_deltas: (node, delta) with node
    an f-node index or ng-offset; new_assign: for each new cycle, a node."""
    parent = list(range(nf + ng))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for x, y in unions:
        union(x, y)
    chi: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    for node in range(nf + ng):
        r = find(node)
        chi[r] = chi.get(r, 0) + 1  # each canonical piece is a disc
        members.setdefault(r, []).append(node)
    for node, delta in chi_deltas:
        chi[find(node)] += delta
    newmask: dict[int, int] = {}
    for cyc_idx, node in enumerate(new_assign):
        newmask[find(node)] = newmask.get(find(node), 0) | (1 << cyc_idx)
    groups = []
    for r, mem in members.items():
        fmask = gmask = 0
        for node in mem:
            if node < nf:
                fmask |= 1 << node
            else:
                gmask |= 1 << (node - nf)
        nm = newmask.get(r, 0)
        b = bin(nm).count("1")
        twice_genus = 2 - chi[r] - b
        assert twice_genus >= 0 and twice_genus % 2 == 0, "bad Euler bookkeeping"
        groups.append((fmask, gmask, nm, twice_genus // 2))
    groups.sort(key=lambda g: (g[2], g[0], g[1]))
    return _Plan(groups, new_source, new_target, ncyc_new)


def _apply_plan(plan: _Plan, fterms: dict, gterms: dict) -> dict:
    out: dict[int, ZPoly] = {}
    groups = plan.groups
    for mf, pf in fterms.items():
        for mg, pg in gterms.items():
            coeff = pf * pg
            partials = [(0, coeff)]
            for fmask, gmask, nm, genus in groups:
                dots = bin(mf & fmask).count("1") + bin(mg & gmask).count("1")
                exp = _expand_piece(nm, genus, dots)
                if not exp:
                    partials = []
                    break
                if len(exp) == 1:
                    em, ep = exp[0]
                    if ep.coeffs == (1,):
                        if em:
                            partials = [(m | em, p) for m, p in partials]
                        continue
                    partials = [(m | em, p * ep) for m, p in partials]
                else:
                    partials = [(m | em, p * ep) for m, p in partials for em, ep in exp]
            for m, p in partials:
                prev = out.get(m)
                out[m] = p if prev is None else prev + p
    return {m: p for m, p in out.items() if p}


# -- composition -------------------------------------------------------------

_COMPOSE_PLANS: dict = {}


def _compose_plan(S: FlatTangle, T: FlatTangle, U: FlatTangle) -> _Plan:
    key = (S, T, U)
    plan = _COMPOSE_PLANS.get(key)
    if plan is not None:
        return plan
    cf = cycles(S, T)
    cg = cycles(T, U)
    ch = cycles(S, U)
    nf, ng = cf.n, cg.n
    unions = []
    chi_deltas = []
    for k in range(T.ncurves):
        fnode = cf.of_tcurve[k]
        gnode = nf + cg.of_scurve[k]
        unions.append((fnode, gnode))
        if k < T.narcs:  # gluing along an interval costs one
            chi_deltas.append((fnode, -1))
    new_assign = [None] * ch.n
    for k in range(S.ncurves):
        new_assign[ch.of_scurve[k]] = cf.of_scurve[k]
    for k in range(U.ncurves):
        new_assign[ch.of_tcurve[k]] = nf + cg.of_tcurve[k]
    plan = _build_plan(nf, ng, unions, chi_deltas, new_assign, ch.n, S, U)
    _COMPOSE_PLANS[key] = plan
    return plan


def compose(f: Cob, g: Cob) -> Cob:
    """g after f: the composite S -> T -> U."""
    if f.target is not g.source:
        raise ValueError("middle tangles do not match")
    plan = _compose_plan(f.source, f.target, g.target)
    return Cob(f.source, g.target, _apply_plan(plan, f.terms, g.terms))


# -- horizontal gluing (stacking rectangles) ---------------------------------


_STACK_TANGLES: dict = {}


def stack_tangles(bottom: FlatTangle, top: FlatTangle):
    """Glue top onto bottom along the shared interface points.

    Returns (tangle, curve_origins) where curve_origins[k] lists the
    constituent old curves of new curve k as ('b'|'t', old curve index).
    """
    key = (bottom, top)
    cached = _STACK_TANGLES.get(key)
    if cached is not None:
        return cached
    if bottom.nt != top.nb:
        raise ValueError("interface arity mismatch")
    m, n, p = bottom.nb, bottom.nt, top.nt
    b_at = bottom.arc_at()
    t_at = top.arc_at()

    def is_outer_bottom(pt):  # point of the bottom tangle on the new boundary
        return pt < m

    def is_outer_top(pt):
        return pt >= n

    arcs = []  # (new pair, origins)
    used_b: set[int] = set()
    used_t: set[int] = set()

    def trace(side, pt):
        origins = []
        while True:
            if side == "b":
                a = b_at[pt]
                used_b.add(a)
                origins.append(("b", a))
                pt2 = sum(bottom.arcs[a]) - pt
                if is_outer_bottom(pt2):
                    return pt2, origins  # new point = pt2 (bottom label kept)
                side, pt = "t", pt2 - m  # interface: bottom top-point j=pt2-m -> top bottom-point j
            else:
                a = t_at[pt]
                used_t.add(a)
                origins.append(("t", a))
                pt2 = sum(top.arcs[a]) - pt
                if is_outer_top(pt2):
                    return m + (pt2 - n), origins  # new top point index
                side, pt = "b", m + pt2  # top bottom-point j -> bottom top-point

    done_pts = set()
    for start in range(m):
        if start in done_pts:
            continue
        end, origins = trace("b", start)
        done_pts.add(start)
        done_pts.add(end)
        arcs.append(((start, end), origins))
    for j in range(p):
        newpt = m + j
        if newpt in done_pts:
            continue
        end, origins = trace("t", n + j)
        done_pts.add(newpt)
        done_pts.add(end)
        arcs.append((tuple(sorted((newpt, end))), origins))

    # leftover chains close into circles
    circles = []
    for a0 in range(bottom.narcs):
        if a0 in used_b:
            continue
        origins = []
        side, a = "b", a0
        pt = bottom.arcs[a0][0]
        while True:
            if side == "b":
                used_b.add(a)
                origins.append(("b", a))
                pt2 = sum(bottom.arcs[a]) - pt
                side, pt = "t", pt2 - m
                a = t_at[pt]
            else:
                used_t.add(a)
                origins.append(("t", a))
                pt2 = sum(top.arcs[a]) - pt
                side, pt = "b", m + pt2
                a = b_at[pt]
            if side == "b" and a == a0:
                break
        circles.append(origins)
    circles.sort(key=lambda org: org[0][1])

    old_circles = ([("b", bottom.narcs + j) for j in range(bottom.circles)]
                   + [("t", top.narcs + j) for j in range(top.circles)])

    arcs.sort(key=lambda ae: tuple(sorted(ae[0])))
    tangle = FlatTangle(m, p, [a for a, _ in arcs],
                        len(circles) + bottom.circles + top.circles)
    origins_list = [org for _, org in arcs]
    origins_list += [[oc] for oc in old_circles]
    origins_list += circles
    result = (tangle, origins_list)
    _STACK_TANGLES[key] = result
    return result


_GLUE_PLANS: dict = {}


def _glue_plan(Sb, Tb, St, Tt) -> _Plan:
    key = (Sb, Tb, St, Tt)
    plan = _GLUE_PLANS.get(key)
    if plan is not None:
        return plan
    cf = cycles(Sb, Tb)
    cg = cycles(St, Tt)
    nf = cf.n
    S_new, s_orig = stack_tangles(Sb, St)
    T_new, t_orig = stack_tangles(Tb, Tt)
    ch = cycles(S_new, T_new)
    unions = []
    chi_deltas = []
    m = Sb.nb
    for j in range(Sb.nt):  # interface points
        fnode = cf.of_point[m + j]
        gnode = nf + cg.of_point[j]
        unions.append((fnode, gnode))
        chi_deltas.append((fnode, -1))

    def node_of(side, old_curve, src: bool):
        if side == "b":
            return (cf.of_scurve if src else cf.of_tcurve)[old_curve]
        return nf + (cg.of_scurve if src else cg.of_tcurve)[old_curve]

    new_assign = [None] * ch.n
    for k in range(S_new.ncurves):
        side, oc = s_orig[k][0]
        new_assign[ch.of_scurve[k]] = node_of(side, oc, True)
    for k in range(T_new.ncurves):
        side, oc = t_orig[k][0]
        new_assign[ch.of_tcurve[k]] = node_of(side, oc, False)
    plan = _build_plan(nf, cg.n, unions, chi_deltas, new_assign, ch.n, S_new, T_new)
    _GLUE_PLANS[key] = plan
    return plan


def glue_horizontal(bottom: Cob, top: Cob) -> Cob:
    """Stack two cobordisms, top rectangle over bottom rectangle."""
    plan = _glue_plan(bottom.source, bottom.target, top.source, top.target)
    return Cob(plan.new_source, plan.new_target,
               _apply_plan(plan, bottom.terms, top.terms))


# -- closures ----------------------------------------------------------------

_CLOSE_TANGLES: dict = {}


def close_tangle(t: FlatTangle, side: str):
    """Join the outermost bottom and top points by an outside arc.

    Returns (tangle, curve_origins); origins are ('o', old curve) entries,
    with the closing arc absorbed into whichever new curve contains it.
    """
    key = (t, side)
    cached = _CLOSE_TANGLES.get(key)
    if cached is not None:
        return cached
    if side == "left":
        pb, pt = 0, t.nb
        keep = [i for i in range(t.npoints) if i not in (pb, pt)]
    else:
        pb, pt = t.nb - 1, t.npoints - 1
        keep = [i for i in range(t.npoints) if i not in (pb, pt)]
    relabel = {old: new for new, old in enumerate(keep)}
    at = t.arc_at()
    a1, a2 = at[pb], at[pt]
    arcs = []
    origins = []
    if a1 == a2:
        # the arc joins the two closed points: a new circle appears
        for i, a in enumerate(t.arcs):
            if i != a1:
                arcs.append(((relabel[a[0]], relabel[a[1]]), [("o", i)]))
        new_circle = [("o", a1)]
    else:
        e1 = sum(t.arcs[a1]) - pb
        e2 = sum(t.arcs[a2]) - pt
        arcs.append((tuple(sorted((relabel[e1], relabel[e2]))), [("o", a1), ("o", a2)]))
        for i, a in enumerate(t.arcs):
            if i not in (a1, a2):
                arcs.append(((relabel[a[0]], relabel[a[1]]), [("o", i)]))
        new_circle = None
    arcs.sort(key=lambda ae: tuple(sorted(ae[0])))
    n_circ = t.circles + (1 if new_circle else 0)
    tangle = FlatTangle(t.nb - 1, t.nt - 1, [a for a, _ in arcs], n_circ)
    origins_list = [org for _, org in arcs]
    origins_list += [[("o", t.narcs + j)] for j in range(t.circles)]
    if new_circle:
        origins_list.append(new_circle)
    result = (tangle, origins_list)
    _CLOSE_TANGLES[key] = result
    return result


_CLOSE_PLANS: dict = {}


def _close_plan(S, T, side) -> _Plan:
    key = (S, T, side)
    plan = _CLOSE_PLANS.get(key)
    if plan is not None:
        return plan
    cf = cycles(S, T)
    S_new, s_orig = close_tangle(S, side)
    T_new, t_orig = close_tangle(T, side)
    ch = cycles(S_new, T_new)
    pb = 0 if side == "left" else S.nb - 1
    pt = S.nb if side == "left" else S.npoints - 1
    unions = [(cf.of_point[pb], cf.of_point[pt])]
    chi_deltas = [(cf.of_point[pb], -1)]  # new sheet (+1) glued along 2 lines (-2)
    new_assign = [None] * ch.n
    for k in range(S_new.ncurves):
        _, oc = s_orig[k][0]
        new_assign[ch.of_scurve[k]] = cf.of_scurve[oc]
    for k in range(T_new.ncurves):
        _, oc = t_orig[k][0]
        new_assign[ch.of_tcurve[k]] = cf.of_tcurve[oc]
    plan = _build_plan(cf.n, 0, unions, chi_deltas, new_assign, ch.n, S_new, T_new)
    _CLOSE_PLANS[key] = plan
    return plan


def close_cob(f: Cob, side: str) -> Cob:
    plan = _close_plan(f.source, f.target, side)
    return Cob(plan.new_source, plan.new_target, _apply_plan(plan, f.terms, {0: ONE}))
