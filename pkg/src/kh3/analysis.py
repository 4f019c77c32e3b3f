"""Verification layer: closed-form summand predictions for the Murasugi
families, structural checks, the knight-move cover search, and builders for
the reference complexes used to cross-check the scanner."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    BigradedGroups, field_dims, homology, spectral_pages, specialize_blt,
    specialize_reduced, specialize_unreduced, total_homology_ranks,
)
from .braid import BraidWord, MurasugiSpec, alt_exponents_nm, closure_meta, murasugi_word
from .closure import full_pipeline
from .cobordism import (
    ALPHA, ALPHA2, BETA, Cob, DELTA, GAMMA, OMEGA, OMEGA2, dotted_on_arc,
    elementary, identity_cob,
)
from .complexes import TangleComplex
from .ring import H, ONE


# ---------------------------------------------------------------------------
# predicted decompositions


@dataclass(frozen=True)
class Summand:
    """One direct summand: a copy of A (aj = 0) or of A(aj), shifted."""

    aj: int
    ishift: int
    qshift: int

    def __str__(self):
        kind = "A" if self.aj == 0 else f"A({self.aj})"
        return f"u^{self.ishift} q^{self.qshift} {kind}"


SummandList = list


def unreduced_groups(summands: SummandList) -> BigradedGroups:
    data: dict = {}

    def add(i, j, free=0, tors=()):
        f, t = data.get((i, j), (0, ()))
        data[(i, j)] = (f + free, tuple(sorted(t + tors)))

    for s in summands:
        i, c = s.ishift, s.qshift
        if s.aj == 0:
            add(i, c + 1, 1)
            add(i, c - 1, 1)
        elif s.aj % 2 == 1:
            add(i, c - 1, 1)
            add(i + 1, c + 2 * s.aj + 1, 1)
            add(i + 1, c + 2 * s.aj - 1, 0, (2,))
        else:
            add(i, c + 1, 1)
            add(i, c - 1, 1)
            add(i + 1, c + 2 * s.aj + 1, 1)
            add(i + 1, c + 2 * s.aj - 1, 1)
    return BigradedGroups(data)


def reduced_groups(summands: SummandList) -> BigradedGroups:
    data: dict = {}

    def add(i, j):
        f, t = data.get((i, j), (0, ()))
        data[(i, j)] = (f + 1, t)

    for s in summands:
        add(s.ishift, s.qshift)
        if s.aj >= 1:
            add(s.ishift + 1, s.qshift + 2 * s.aj)
    return BigradedGroups(data)


def field_dim_table(summands: SummandList, p: int) -> dict[tuple[int, int], int]:
    """Unreduced homology dimensions over Q (p=0) or F_p."""
    out: dict[tuple[int, int], int] = {}

    def add(i, j, n=1):
        out[(i, j)] = out.get((i, j), 0) + n

    for s in summands:
        i, c = s.ishift, s.qshift
        if s.aj == 0:
            add(i, c + 1)
            add(i, c - 1)
        elif s.aj % 2 == 1:
            # differential is 2 X h^{aj-1}: invertible over Q-free part? no:
            # over Q two generators die, over F_2 all four survive
            add(i, c - 1)
            add(i + 1, c + 2 * s.aj + 1)
            if p == 2:
                add(i, c + 1)
                add(i + 1, c + 2 * s.aj - 1)
        else:
            add(i, c + 1)
            add(i, c - 1)
            add(i + 1, c + 2 * s.aj + 1)
            add(i + 1, c + 2 * s.aj - 1)
    return out


def _torus_summands(residue: int, k: int, with_extra_a: bool = False) -> SummandList:
    """The closed-form summand lists for (ab)^m and (ab)^{3k+1} a."""
    out: SummandList = []
    if with_extra_a:
        # (ab)^{3k+1} a, k >= 0
        out.append(Summand(0, 0, 6 * k + 1))
        out.append(Summand(0, 4 * k + 2, 12 * k + 5))
        out += [Summand(1, 4 * m + 2, 6 * (k + m) + 5) for m in range(k)]
        out += [Summand(2, 4 * m, 6 * (k + m) + 1) for m in range(1, k + 1)]
        return out
    if residue == 0:
        if k < 1:
            raise ValueError("the (ab)^{3k} formula needs k >= 1")
        out.append(Summand(0, 0, 6 * k - 2))
        out.append(Summand(0, 4 * k, 12 * k))
        out.append(Summand(0, 4 * k, 12 * k))
        out.append(Summand(0, 4 * k, 12 * k - 2))
        out += [Summand(1, 4 * m + 2, 6 * (k + m) + 2) for m in range(k)]
        out += [Summand(2, 4 * m, 6 * (k + m) - 2) for m in range(1, k)]
    elif residue == 1:
        out.append(Summand(0, 0, 6 * k))
        out += [Summand(1, 4 * m + 2, 6 * (k + m) + 4) for m in range(k)]
        out += [Summand(2, 4 * m, 6 * (k + m)) for m in range(1, k + 1)]
    else:
        out.append(Summand(0, 0, 6 * k + 2))
        out += [Summand(1, 4 * m + 2, 6 * (k + m + 1)) for m in range(k + 1)]
        out += [Summand(2, 4 * m, 6 * (k + m) + 2) for m in range(1, k + 1)]
    return out


def _omega5_summands(k: int, exponent: int) -> SummandList:
    """(ab)^{3k} b^exponent for k, exponent >= 1, both parities."""
    if exponent % 2 == 1:
        l = (exponent + 1) // 2
        out = [Summand(0, 0, 6 * k + 2 * l - 3), Summand(0, 4 * k, 12 * k + 2 * l - 3)]
        out += [Summand(1, 4 * m + 2, 6 * (k + m) + 2 * l + 1) for m in range(k)]
        out += [Summand(2, 4 * m, 6 * (k + m) + 2 * l - 3) for m in range(1, k)]
        out += [Summand(1, 4 * k + 2 * m, 12 * k + 2 * l + 4 * m - 1) for m in range(l)]
        out += [Summand(1, 4 * k + 2 * m, 12 * k + 2 * l + 4 * m - 3) for m in range(1, l)]
        return out
    # even exponent 2l: shift the odd case by q and add two free summands at
    # the top homological degree (settled against the pipeline; the two
    # extra generators close the final column of the two-strand tail)
    l = exponent // 2
    base = _omega5_summands(k, 2 * l - 1)
    out = [Summand(s.aj, s.ishift, s.qshift + 1) for s in base]
    out.append(Summand(0, 4 * k + 2 * l, 12 * k + 6 * l))
    out.append(Summand(0, 4 * k + 2 * l, 12 * k + 6 * l - 2))
    return out


def predicted_summands(spec: MurasugiSpec) -> SummandList:
    """Literal summand lists for the families with closed-form answers."""
    if spec.cls == "omega0":
        return _torus_summands(0, spec.k)
    if spec.cls == "omega1":
        return _torus_summands(1, spec.k)
    if spec.cls == "omega2":
        return _torus_summands(2, spec.k)
    if spec.cls == "omega3":
        return _torus_summands(0, spec.k, with_extra_a=True)
    if spec.cls == "omega5":
        if spec.k < 1:
            raise ValueError("omega5 formula needs k >= 1")
        return _omega5_summands(spec.k, spec.l)
    raise ValueError(f"no closed-form summand list for {spec.cls}")


def verify_summands(w: BraidWord, predicted: SummandList) -> dict:
    """Expand the predicted summands through all three specializations and
    compare with the pipeline homology of the braid closure."""
    A = full_pipeline(w)
    checks = []
    got_z = homology(specialize_unreduced(A))
    want_z = unreduced_groups(predicted)
    checks.append(("unreduced Z", want_z == got_z, want_z, got_z))
    got_r = homology(specialize_reduced(A))
    want_r = reduced_groups(predicted)
    checks.append(("reduced Z", want_r == got_r, want_r, got_r))
    for p, name in ((0, "Q dims"), (2, "F2 dims")):
        got_f = field_dims(specialize_unreduced(A), p)
        want_f = field_dim_table(predicted, p)
        checks.append((name, want_f == got_f, want_f, got_f))
    report = {"word": str(w), "pass": all(ok for _n, ok, _w, _g in checks)}
    for name, ok, want, got in checks:
        if not ok:
            if isinstance(want, BigradedGroups):
                cells = sorted(set(want.data) | set(got.data))
                bad = next(ij for ij in cells if want.at(*ij) != got.at(*ij))
            else:
                cells = sorted(set(want) | set(got))
                bad = next(ij for ij in cells
                           if want.get(ij, 0) != got.get(ij, 0))
            report["first_mismatch"] = {"check": name, "i": bad[0], "j": bad[1]}
            break
    return report


# ---------------------------------------------------------------------------
# structural checks


def torsion_only_two(groups: BigradedGroups) -> bool:
    return all(t == 2 for _i, _j, t in groups.torsion_factors())


def knight_move_check(dimsQ: dict[tuple[int, int], int], components: int):
    """Exact cover of the rational ranks by 2^{c-1} pawn pairs (0, 2) and
    knight pairs (1, 4).  Returns (ok, witness or None)."""
    cells = {ij: n for ij, n in dimsQ.items() if n}
    pawns_needed = 2 ** (components - 1)
    witness: list = []

    def rec(cells, pawns_left):
        if not cells:
            return pawns_left == 0
        ij = min(cells)
        i, j = ij

        def take(piece, other):
            if cells.get(other, 0) < 1:
                return False
            c2 = dict(cells)
            for cell in (ij, other):
                c2[cell] -= 1
                if not c2[cell]:
                    del c2[cell]
            witness.append((piece, ij, other))
            if rec(c2, pawns_left - (piece == "pawn")):
                return True
            witness.pop()
            return False

        if pawns_left > 0 and take("pawn", (i, j + 2)):
            return True
        if take("knight", (i + 1, j + 4)):
            return True
        return False

    ok = rec(cells, pawns_needed)
    return ok, (list(witness) if ok else None)


def _exact_cover_A_A2(cells: dict[tuple[int, int], int], n_a: int):
    """Cover free ranks by A pieces {(i,j),(i,j+2)} and A(2) pieces
    {(i,j),(i,j+2),(i+1,j+4),(i+1,j+6)}, using exactly n_a pieces of type A."""

    def rec(cells, a_left):
        if not cells:
            return a_left == 0
        ij = min(cells)
        i, j = ij

        def take(shape, cost_a):
            c2 = dict(cells)
            for cell in shape:
                if c2.get(cell, 0) < 1:
                    return None
                c2[cell] -= 1
                if not c2[cell]:
                    del c2[cell]
            return rec(c2, a_left - cost_a)

        if a_left > 0 and take([ij, (i, j + 2)], 1):
            return True
        if take([ij, (i, j + 2), (i + 1, j + 4), (i + 1, j + 6)], 0):
            return True
        return False

    return rec(dict(cells), n_a)


def omega4_structure_check(k: int, l: int) -> dict:
    """The structural splitting for (ab)^{3k} a^{-l}: torsion only of order
    two; torsion determines the A(1) summands; the remaining rational ranks
    split into A pieces (two if l is odd, four if l is even) and A(2) pieces."""
    w = murasugi_word(MurasugiSpec("omega4", k=k, l=l))
    A = full_pipeline(w)
    groups = homology(specialize_unreduced(A))
    report = {"word": str(w), "k": k, "l": l}
    report["torsion_only_two"] = torsion_only_two(groups)
    free = dict(groups.free_ranks())
    ok_shape = True
    for (i, j, t) in groups.torsion_factors():
        if t != 2:
            ok_shape = False
            break
        # each Z/2 at (i, j) is the A(1) summand u^{i-1} q^{j-1}
        for cell in ((i - 1, j - 2), (i, j + 2)):
            if free.get(cell, 0) < 1:
                ok_shape = False
                break
            free[cell] -= 1
            if not free[cell]:
                del free[cell]
        if not ok_shape:
            break
    n_a = 2 if l % 2 == 1 else 4
    report["a_copies_expected"] = n_a
    if ok_shape:
        ok_shape = bool(_exact_cover_A_A2(free, n_a))
    report["cover_ok"] = ok_shape
    report["pass"] = report["torsion_only_two"] and ok_shape
    return report


def omega6_identity_check(k: int, alt: tuple[int, ...]) -> dict:
    """Reduced-homology identity and spectral-sequence behaviour for
    (ab)^{3k} w with w the proper alternating word given by the exponents."""
    spec = MurasugiSpec("omega6", k=k, alt=alt)
    w = murasugi_word(spec)
    tail = murasugi_word(MurasugiSpec("omega6", k=0, alt=alt))
    torus = murasugi_word(MurasugiSpec("omega0", k=k))
    n_w, m_w = alt_exponents_nm(alt)
    t = m_w - n_w
    report = {"word": str(w), "k": k, "alt": list(alt), "t": t}

    AL = full_pipeline(w)
    rL = homology(specialize_reduced(AL))
    rT = homology(specialize_reduced(full_pipeline(torus)))
    rW = homology(specialize_reduced(full_pipeline(tail)))

    # the alternating tail: free, concentrated on the diagonal (i, 2i + t)
    alt_ok = all(not tors and j == 2 * i + t
                 for (i, j), (_f, tors) in rW.data.items())
    report["alternating_diagonal"] = alt_ok

    exceptional = {
        (4 * k, 12 * k - 2 + t): (0, ()),
        (4 * k, 12 * k + t): rW.at(0, t),
        (4 * k + 1, 12 * k + 2 + t): (rW.at(1, 2 + t)[0] + 1, rW.at(1, 2 + t)[1]),
    }
    cells = set(rL.data) | set(exceptional)
    cells |= {(i, j + t) for (i, j) in rT.data}
    cells |= {(i + 4 * k, j + 12 * k) for (i, j) in rW.data}
    identity_ok = True
    first_bad = None
    for (i, j) in sorted(cells):
        if (i, j) in exceptional:
            want = exceptional[(i, j)]
        else:
            fT, tT = rT.at(i, j - t)
            fW, tW = rW.at(i - 4 * k, j - 12 * k)
            want = (fT + fW, tuple(sorted(tT + tW)))
        if rL.at(i, j) != want:
            identity_ok = False
            first_bad = (i, j)
            break
    report["identity_ok"] = identity_ok
    if first_bad:
        report["first_mismatch"] = {"i": first_bad[0], "j": first_bad[1]}

    F = specialize_blt(AL)
    pages = spectral_pages(F)
    report["E1_is_reduced"] = pages[0].groups == rL
    free_pages = all(not any(t for (_f, t) in pages[idx].groups.data.values())
                     for idx in range(min(3, len(pages))))
    report["pages_free"] = free_pages
    stable = pages[-1].groups
    report["E3_stable"] = (pages[2].groups == stable) if len(pages) >= 3 else True
    if k == 1:
        report["E2_stable"] = (pages[1].groups == stable) if len(pages) >= 2 else True
    comp = closure_meta(w).components
    report["einf_rank"] = stable.total_rank()
    report["einf_expected"] = 2 ** (comp - 1)
    report["convergence_ok"] = (
        stable.total_rank() == 2 ** (comp - 1)
        and sum(total_homology_ranks(F).values()) == 2 ** (comp - 1)
    )
    report["pass"] = all((
        alt_ok, identity_ok, report["E1_is_reduced"], free_pages,
        report["E3_stable"], report.get("E2_stable", True),
        report["convergence_ok"],
    ))
    return report


# ---------------------------------------------------------------------------
# reference complexes


def _cap_arc(t) -> tuple[int, int]:
    return next(a for a in t.arcs if a[1] < t.nb)


def _cup_arc(t) -> tuple[int, int]:
    return next(a for a in t.arcs if a[0] >= t.nb)


def morphism_d(t) -> Cob:
    """dot(cap) + dot(cup) - h, between equal smoothings with a cap and cup."""
    return (dotted_on_arc(t, t, _cap_arc(t)) + dotted_on_arc(t, t, _cup_arc(t))
            - identity_cob(t).scale(H))


def morphism_c(t) -> Cob:
    """dot(cap) - dot(cup)."""
    return dotted_on_arc(t, t, _cap_arc(t)) - dotted_on_arc(t, t, _cup_arc(t))


def morphism_e() -> Cob:
    """2 dot(left strand) - h on the two-strand identity smoothing."""
    return dotted_on_arc(OMEGA2, OMEGA2, (0, 2)).scale(2) - identity_cob(OMEGA2).scale(H)


def _surgery(src, tgt) -> Cob:
    return elementary(src, tgt)


def fixture_B(levels: int) -> TangleComplex:
    """The periodic three-strand complex underlying the torus words, built
    through homological degree ``levels`` inclusive."""
    objs: dict[int, list] = {0: [(OMEGA, 0)]}
    diffs: dict[int, dict] = {}
    for n in range(1, levels + 1):
        m, r = divmod(n - 1, 4)
        if r == 0:
            objs[n] = [(ALPHA, 6 * m + 1), (BETA, 6 * m + 1)]
        elif r == 1:
            objs[n] = [(GAMMA, 6 * m + 2), (DELTA, 6 * m + 2)]
        elif r == 2:
            objs[n] = [(GAMMA, 6 * m + 4), (DELTA, 6 * m + 4)]
        else:
            objs[n] = [(ALPHA, 6 * m + 5), (BETA, 6 * m + 5)]
    if levels >= 1:
        diffs[0] = {(0, 0): _surgery(OMEGA, ALPHA), (1, 0): _surgery(OMEGA, BETA)}
    for n in range(1, levels):
        r = (n - 1) % 4
        if r == 0:  # (alpha, beta) -> (gamma, delta)
            diffs[n] = {
                (0, 0): -_surgery(ALPHA, GAMMA),
                (1, 1): -_surgery(BETA, DELTA),
                (0, 1): _surgery(BETA, GAMMA),
                (1, 0): _surgery(ALPHA, DELTA),
            }
        elif r == 1:  # (gamma, delta) -> (gamma, delta)
            diffs[n] = {
                (0, 0): morphism_d(GAMMA),
                (1, 1): morphism_d(DELTA),
                (0, 1): _surgery(DELTA, GAMMA),
                (1, 0): _surgery(GAMMA, DELTA),
            }
        elif r == 2:  # (gamma, delta) -> (alpha, beta)
            diffs[n] = {
                (0, 0): -_surgery(GAMMA, ALPHA),
                (1, 1): -_surgery(DELTA, BETA),
                (0, 1): _surgery(DELTA, ALPHA),
                (1, 0): _surgery(GAMMA, BETA),
            }
        else:  # (alpha, beta) -> (alpha, beta)
            diffs[n] = {
                (0, 0): morphism_d(ALPHA),
                (1, 1): morphism_d(BETA),
                (0, 1): _surgery(BETA, ALPHA),
                (1, 0): _surgery(ALPHA, BETA),
            }
    return TangleComplex(objs, diffs)


def _drop_object(C: TangleComplex, n: int, idx: int) -> TangleComplex:
    C = C.copy()
    C.objs[n] = C.objs[n][:idx] + C.objs[n][idx + 1:]

    def fix(mat, as_row):
        out = {}
        for (r, c), f in mat.items():
            if as_row and r == idx:
                continue
            if not as_row and c == idx:
                continue
            rr = r - 1 if as_row and r > idx else r
            cc = c - 1 if (not as_row) and c > idx else c
            out[(rr, cc)] = f
        return out

    if n - 1 in C.diffs:
        C.diffs[n - 1] = fix(C.diffs[n - 1], True)
    if n in C.diffs:
        C.diffs[n] = fix(C.diffs[n], False)
    return C


def build_fixture(name: str, param: int) -> TangleComplex:
    """Reference complexes:

    - ``B``: quotient for (ab)^m, m = param
    - ``Ba``: quotient for (ab)^{3k+1} a, param = m = 3k+1
    - ``Btilde``: two-strand quotient for (ab)^m after the left closure
    - ``Cinf``: the truncated two-strand tower for a^n, n = param
    """
    if name == "B":
        m = param
        k, r = divmod(m, 3)
        if r == 0:
            return fixture_B(4 * k)
        if r == 1:
            C = fixture_B(4 * k + 2)
            return _drop_object(C, 4 * k + 2, 1)  # remove the delta object
        C = fixture_B(4 * k + 3)
        return _drop_object(C, 4 * k + 3, 1)
    if name == "Ba":
        m = param
        if m % 3 != 1:
            raise ValueError("Ba needs m = 3k+1")
        return fixture_B(4 * ((m - 1) // 3) + 2)
    if name == "Btilde":
        return fixture_Btilde(param)
    if name == "Cinf":
        return fixture_Cinf(param)
    raise ValueError(f"unknown fixture {name!r}")


def fixture_Cinf(n: int) -> TangleComplex:
    """omega~ -> q alpha~ -> q^3 alpha~ -> ... with alternating dotted maps."""
    objs = {0: [(OMEGA2, 0)]}
    for kk in range(1, n + 1):
        objs[kk] = [(ALPHA2, 2 * kk - 1)]
    diffs = {}
    if n >= 1:
        diffs[0] = {(0, 0): _surgery(OMEGA2, ALPHA2)}
    for kk in range(1, n):
        diffs[kk] = {(0, 0): morphism_c(ALPHA2) if kk % 2 == 1 else morphism_d(ALPHA2)}
    return TangleComplex(objs, diffs)


def fixture_Btilde(m: int) -> TangleComplex:
    """The two-strand complex the left closure of the torus tower reduces to,
    truncated the way the quotient for (ab)^m requires."""
    k, r = divmod(m, 3)
    if m == 0:
        return TangleComplex({0: [(OMEGA2, 1), (OMEGA2, -1)]}, {})
    top = {0: 4 * k, 1: 4 * k + 1, 2: 4 * k + 3}[r]
    objs: dict[int, list] = {}
    for n in range(top + 1):
        mm, rr = divmod(n, 4)
        if n == 0:
            objs[0] = [(OMEGA2, -1)]
        elif rr == 0:
            objs[n] = [(ALPHA2, 6 * mm), (OMEGA2, 6 * mm - 1)]
        elif rr == 1:
            objs[n] = [(ALPHA2, 6 * mm)] + ([(OMEGA2, 6 * mm + 1)] if mm >= 1 else [])
        elif rr == 2:
            objs[n] = [(ALPHA2, 6 * mm + 2)]
        else:
            objs[n] = [(ALPHA2, 6 * mm + 4)]
    diffs: dict[int, dict] = {}
    for n in range(top):
        mm, rr = divmod(n, 4)
        mat: dict = {}
        if n == 0:
            mat[(0, 0)] = _surgery(OMEGA2, ALPHA2)
        elif rr == 0:
            # alpha~ -> alpha~ is zero; omega~ -> (alpha~, omega~), alpha~ -> omega~
            mat[(0, 1)] = _surgery(OMEGA2, ALPHA2)
            if len(objs[n + 1]) > 1:
                mat[(1, 1)] = morphism_e()
                mat[(1, 0)] = _surgery(ALPHA2, OMEGA2)
        elif rr == 1:
            mat[(0, 0)] = morphism_c(ALPHA2)
        elif rr == 2:
            mat[(0, 0)] = morphism_d(ALPHA2)
        else:
            mat[(0, 0)] = morphism_c(ALPHA2)
        diffs[n] = mat
    return TangleComplex(objs, {i: m_ for i, m_ in diffs.items() if m_})


# ---------------------------------------------------------------------------
# default verification grid


def default_grid() -> list[tuple[str, MurasugiSpec]]:
    """The word families exercised by the standard verify suites."""
    out: list[tuple[str, MurasugiSpec]] = []
    for k in range(1, 4):
        out.append((f"omega0 k={k}", MurasugiSpec("omega0", k=k)))
    for cls in ("omega1", "omega2", "omega3"):
        for k in range(0, 4):
            out.append((f"{cls} k={k}", MurasugiSpec(cls, k=k)))
    for cls in ("omega4", "omega5"):
        for k in range(1, 3):
            for l in range(1, 5):
                out.append((f"{cls} k={k} l={l}", MurasugiSpec(cls, k=k, l=l)))
    for k in range(1, 3):
        for alt in alternating_exponent_lists(5):
            out.append((f"omega6 k={k} alt={alt}", MurasugiSpec("omega6", k=k, alt=alt)))
    return out


def alternating_exponent_lists(total_max: int) -> list[tuple[int, ...]]:
    """All proper alternating exponent lists with n(w) + m(w) <= total_max."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int):
        if len(prefix) % 2 == 0 and prefix:
            out.append(prefix)
        for e in range(1, remaining + 1):
            rec(prefix + (e,), remaining - e)

    rec((), total_max)
    return sorted(set(out))
