"""The cobordism calculus: local relations, composition, gluing, closures."""

import pytest
from hypothesis import given, settings, strategies as st

from kh3.cobordism import (
    ALPHA, ALPHA2, BETA, DELTA, EPS, EPS_STAR, GAMMA, OMEGA, OMEGA2, ZETA,
    ZETA_STAR, Cob, FlatTangle, birth, close_cob, close_tangle, compose,
    cycles, death, dot_identity, dotted_on_arc, elementary, from_pieces,
    glue_horizontal, identity_cob, identity_tangle, stack_tangles,
)
from kh3.ring import H, ONE, ZPoly


def test_planarity_enforced():
    FlatTangle(2, 2, [(0, 2), (1, 3)])  # the identity is planar
    # bottom0-top1 with bottom1-top0 interleave around the rectangle
    with pytest.raises(ValueError):
        FlatTangle(2, 2, [(0, 3), (1, 2)])
    with pytest.raises(ValueError):
        FlatTangle(2, 2, [(0, 1), (2, 2)])  # not a matching


def test_planarity_of_smoothings():
    # the named ones all construct without complaint, and intern
    assert ALPHA is FlatTangle(3, 3, [(0, 1), (3, 4), (2, 5)])
    assert OMEGA is identity_tangle(3)


def test_sphere_relations():
    S1 = OMEGA.add_circle()
    assert compose(birth(S1), death(S1)).is_zero()                    # sphere = 0
    assert compose(birth(S1), death(S1, dotted=True)).terms == {0: ONE}   # dotted = 1
    two_dots = compose(birth(S1, dotted=True), death(S1, dotted=True))
    assert two_dots.terms == {0: H}                                   # two dots = h


def test_torus_evaluates_to_two():
    # genus-one closed piece next to an identity: handle -> 2*dot - h
    S1 = OMEGA.add_circle()
    cyc = cycles(OMEGA, OMEGA)
    torus = from_pieces(OMEGA, OMEGA, [
        (1 << cyc.of_scurve[0], 0, 0),
        (1 << cyc.of_scurve[1], 0, 0),
        (1 << cyc.of_scurve[2], 1, 0),  # a handle on one sheet, then cut loose
    ])
    # not closed: a genus-1 sheet equals (2*dot - h) * sheet
    expect = dot_identity(OMEGA, 2).scale(2) - identity_cob(OMEGA).scale(H)
    assert torus == expect
    # honest closed torus
    closed = from_pieces(S1, S1, [
        (1 << cycles(S1, S1).of_scurve[0], 0, 0),
        (1 << cycles(S1, S1).of_scurve[1], 0, 0),
        (1 << cycles(S1, S1).of_scurve[2], 0, 0),
        ((1 << cycles(S1, S1).of_scurve[3]) | (1 << cycles(S1, S1).of_tcurve[3]), 1, 0),
    ])
    # the genus-1 piece spans the two circle cycles; reduce and compose to a scalar
    val = compose(birth(S1), compose(closed, death(S1)))
    assert val.terms == {0: ZPoly.const(2)}


def test_identity_properties():
    for t in (OMEGA, ALPHA, BETA, GAMMA, DELTA, ALPHA2, OMEGA2):
        i = identity_cob(t)
        assert compose(i, i) == i
        assert i.q_degree() == 0


def test_named_tangle_tensor_relations():
    assert stack_tangles(EPS, EPS_STAR)[0] == ALPHA
    assert stack_tangles(ZETA, ZETA_STAR)[0] == BETA
    assert stack_tangles(EPS, ZETA_STAR)[0] == GAMMA
    assert stack_tangles(ZETA, EPS_STAR)[0] == DELTA
    # alpha (x) eps: eps plus one circle
    t, _ = stack_tangles(ALPHA, EPS)
    assert t.arcs == EPS.arcs and t.circles == 1
    # omega acts as a unit
    assert stack_tangles(OMEGA, ALPHA)[0] == ALPHA
    assert stack_tangles(BETA, OMEGA)[0] == BETA


def test_split_then_death_is_identity():
    # split surgery alpha~ -> alpha~ + circle (one connected pair-of-pants
    # piece joining the cap sheet to the new circle), then cap the circle
    target = ALPHA2.add_circle()
    cyc = cycles(ALPHA2, target)
    cap_cycle = cyc.of_scurve[0]
    circle_cycle = cyc.of_tcurve[target.narcs]
    other = [c for c in range(cyc.n) if c not in (cap_cycle, circle_cycle)]
    split_cob = from_pieces(ALPHA2, target,
                            [((1 << cap_cycle) | (1 << circle_cycle), 0, 0)]
                            + [(1 << c, 0, 0) for c in other])
    roundtrip = compose(split_cob, death(target))
    assert roundtrip == identity_cob(ALPHA2)


def test_birth_dot_death_scalar():
    S1 = ALPHA.add_circle()
    b = birth(S1)
    dotted = compose(b, dot_identity(S1, S1.narcs + 0))
    out = compose(dotted, death(S1))
    assert out == identity_cob(ALPHA)


def test_surgery_degrees():
    s = elementary(OMEGA, ALPHA)
    assert s.q_degree() == -1
    assert dot_identity(ALPHA, 0).q_degree() == -2
    d2 = elementary(DELTA, GAMMA)
    assert d2.q_degree() == -2  # two surgeries


def test_close_tangle():
    t, _ = close_tangle(OMEGA, "left")
    assert t.arcs == OMEGA2.arcs and t.circles == 1
    t, _ = close_tangle(ALPHA, "left")
    assert t == OMEGA2
    t, _ = close_tangle(BETA, "left")
    assert t.arcs == ALPHA2.arcs and t.circles == 1
    assert close_tangle(GAMMA, "left")[0] == ALPHA2
    assert close_tangle(DELTA, "left")[0] == ALPHA2


def test_close_cob_identity():
    f = close_cob(identity_cob(ALPHA), "left")
    assert f == identity_cob(OMEGA2)


# -- randomized structural properties ---------------------------------------

def _planar_matchings(points: int):
    """All non-crossing perfect matchings of `points` cyclically ordered points."""
    if points == 0:
        return [[]]
    out = []
    for k in range(1, points, 2):
        for left in _planar_matchings(k - 1):
            for right in _planar_matchings(points - k - 1):
                shifted = [(a + k + 1, b + k + 1) for a, b in right]
                out.append([(0, k)] + [(a + 1, b + 1) for a, b in left] + shifted)
    return out


def _tangles(nb, nt):
    """All flat tangles in the (nb, nt) rectangle, without circles."""
    def pos_to_point(t_nb, t_nt, pos):
        return pos if pos < t_nb else t_nb + (t_nb + t_nt - 1 - pos)
    out = []
    for m in _planar_matchings(nb + nt):
        arcs = [tuple(sorted((pos_to_point(nb, nt, a), pos_to_point(nb, nt, b))))
                for a, b in m]
        out.append(FlatTangle(nb, nt, arcs))
    return out


TANGLES_33 = _tangles(3, 3)
TANGLES_22 = _tangles(2, 2)


def _basis_elements(src, tgt):
    n = cycles(src, tgt).n
    return [Cob(src, tgt, {m: ONE}) for m in range(1 << n)]


cob_pairs = st.sampled_from(TANGLES_33)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_compose_associative(data):
    s = data.draw(st.sampled_from(TANGLES_33))
    t = data.draw(st.sampled_from(TANGLES_33))
    u = data.draw(st.sampled_from(TANGLES_33))
    v = data.draw(st.sampled_from(TANGLES_33))
    f = data.draw(st.sampled_from(_basis_elements(s, t)))
    g = data.draw(st.sampled_from(_basis_elements(t, u)))
    h = data.draw(st.sampled_from(_basis_elements(u, v)))
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_degree_additivity(data):
    s = data.draw(st.sampled_from(TANGLES_33))
    t = data.draw(st.sampled_from(TANGLES_33))
    u = data.draw(st.sampled_from(TANGLES_33))
    f = data.draw(st.sampled_from(_basis_elements(s, t)))
    g = data.draw(st.sampled_from(_basis_elements(t, u)))
    fg = compose(f, g)
    if not fg.is_zero():
        assert fg.q_degree() == f.q_degree() + g.q_degree()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_interchange(data):
    sb = data.draw(st.sampled_from(TANGLES_33))
    tb = data.draw(st.sampled_from(TANGLES_33))
    ub = data.draw(st.sampled_from(TANGLES_33))
    stp = data.draw(st.sampled_from(TANGLES_33))
    tt = data.draw(st.sampled_from(TANGLES_33))
    ut = data.draw(st.sampled_from(TANGLES_33))
    f = data.draw(st.sampled_from(_basis_elements(sb, tb)))
    fp = data.draw(st.sampled_from(_basis_elements(tb, ub)))
    g = data.draw(st.sampled_from(_basis_elements(stp, tt)))
    gp = data.draw(st.sampled_from(_basis_elements(tt, ut)))
    left = glue_horizontal(compose(f, fp), compose(g, gp))
    right = compose(glue_horizontal(f, g), glue_horizontal(fp, gp))
    assert left == right


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_glue_functorial_on_identities(data):
    b = data.draw(st.sampled_from(TANGLES_33))
    t = data.draw(st.sampled_from(TANGLES_33))
    glued, _ = stack_tangles(b, t)
    assert glue_horizontal(identity_cob(b), identity_cob(t)) == identity_cob(glued)
