"""Letter complexes, stacking, delooping, Gaussian elimination, scanning."""

import pytest
from hypothesis import given, settings, strategies as st

from kh3.braid import parse_word
from kh3.cobordism import ALPHA, BETA, OMEGA, Cob, compose, dot_identity, identity_cob
from kh3.complexes import (
    TangleComplex, deloop_all, deloop_once, empty_word_complex,
    gauss_eliminate_once, letter_complex, scan_word, simplify, stack,
)
from kh3.ring import H, ONE

words_st = st.text(alphabet="aAbB", max_size=7)


def test_letter_complexes():
    a = letter_complex(parse_word("a")[0])
    assert a.object_multiset() == [(0, 1, "omega"), (1, 2, "alpha")]
    binv = letter_complex(parse_word("B")[0])
    assert binv.object_multiset() == [(-1, -2, "beta"), (0, -1, "omega")]
    for c in (a, binv):
        c.check_d2()
        c.check_gradings()


def test_stack_ab_shape():
    C = stack(letter_complex(parse_word("a")[0]), letter_complex(parse_word("b")[0]))
    C.check_d2()
    C.check_gradings()
    assert C.object_multiset() == [
        (0, 2, "omega"), (1, 3, "alpha"), (1, 3, "beta"), (2, 4, "gamma")]
    # one of the two degree-1 -> 2 arrows carries the Koszul sign
    entries = C.diffs[1]
    signs = sorted(next(iter(f.terms.values())).coeffs[0] for f in entries.values())
    assert signs == [-1, 1]


def test_stack_unit():
    a = letter_complex(parse_word("a")[0])
    assert stack(a, empty_word_complex()).object_multiset() == a.object_multiset()
    assert stack(empty_word_complex(), a).object_multiset() == a.object_multiset()


def test_deloop_dotting_endomorphism():
    # dotting the circle conjugates to [[0, 1], [0, 0]] + h [[1, 0], [0, 0]]
    S = OMEGA.add_circle()
    C = TangleComplex({0: [(S, 0)], 1: [(S, 0)]},
                      {0: {(0, 0): dot_identity(S, S.narcs)}})
    D = deloop_all(C)
    assert [q for _t, q in D.objs[0]] == [1, -1]
    mat = D.diffs[0]
    assert (0, 1) in mat and mat[(0, 1)] == identity_cob(OMEGA)
    assert mat[(0, 0)] == identity_cob(OMEGA).scale(H)
    assert (1, 0) not in mat and (1, 1) not in mat


def test_deloop_preserves_d2():
    C = stack(letter_complex(parse_word("a")[0]), letter_complex(parse_word("A")[0]))
    D = deloop_all(C)
    D.check_d2()
    D.check_gradings()
    assert not D.has_circles()


def test_gauss_contractible_pair():
    C = TangleComplex({0: [(OMEGA, 0)], 1: [(OMEGA, 0)]},
                      {0: {(0, 0): identity_cob(OMEGA)}})
    gauss_eliminate_once(C, (0, 0, 0))
    assert C.object_count() == 0


def test_gauss_rejects_non_unit():
    C = TangleComplex({0: [(OMEGA, 0)], 1: [(OMEGA, 0)]},
                      {0: {(0, 0): identity_cob(OMEGA).scale(2)}})
    with pytest.raises(ValueError):
        gauss_eliminate_once(C, (0, 0, 0))


def test_scan_reidemeister2():
    assert scan_word(parse_word("aA")).object_multiset() == [(0, 0, "omega")]
    assert scan_word(parse_word("Bb")).object_multiset() == [(0, 0, "omega")]


def test_scan_torus_words():
    # (ab)^3 reduces to the nine objects of the shifted periodic complex
    got = scan_word(parse_word("ab" * 3)).object_multiset()
    assert got == [
        (0, 6, "omega"),
        (1, 7, "alpha"), (1, 7, "beta"),
        (2, 8, "delta"), (2, 8, "gamma"),
        (3, 10, "delta"), (3, 10, "gamma"),
        (4, 11, "alpha"), (4, 11, "beta"),
    ]


def test_scan_a_powers():
    # a^n: n+1 objects, a single omega and a tail of alphas
    for n in range(1, 7):
        got = scan_word(parse_word("a" * n)).object_multiset()
        want = [(0, n, "omega")] + [(k, n + 2 * k - 1, "alpha") for k in range(1, n + 1)]
        assert got == sorted(want)


def test_scan_alternating_example():
    # the 12-object complex for a^-3 b^2
    got = scan_word(parse_word("AAAbb")).object_multiset()
    assert len(got) == 12
    assert got == [
        (-3, -6, "alpha"),
        (-2, -5, "gamma"), (-2, -4, "alpha"),
        (-1, -3, "gamma"), (-1, -3, "gamma"), (-1, -2, "alpha"),
        (0, -1, "gamma"), (0, -1, "gamma"), (0, -1, "omega"),
        (1, 0, "beta"), (1, 1, "gamma"),
        (2, 2, "beta"),
    ]


def test_simplified_has_no_units_or_circles():
    for text in ("abab", "AbaB", "aabb", "abababa"):
        C = scan_word(parse_word(text))
        assert not C.has_circles()
        for n, mat in C.diffs.items():
            for (r, c), f in mat.items():
                ts, qs = C.objs[n][c]
                tt, qt = C.objs[n + 1][r]
                assert not (ts is tt and qs == qt and f.is_unit()[0])


@settings(max_examples=25, deadline=None)
@given(words_st)
def test_scan_d2_and_gradings(text):
    C = scan_word(parse_word(text))
    C.check_d2()
    C.check_gradings()


@settings(max_examples=25, deadline=None)
@given(words_st)
def test_object_count_tripwire(text):
    w = parse_word(text)
    C = scan_word(w)
    assert C.object_count() <= 40 * max(1, len(w))
