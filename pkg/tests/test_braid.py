import pytest
from hypothesis import given, strategies as st

from kh3.braid import (
    BraidWord, BraidWordError, MurasugiSpec, all_words_upto, canonical_rotation,
    closure_meta, murasugi_word, parse_word, read_word_file,
)

words_st = st.text(alphabet="aAbB", max_size=12).map(parse_word)


def test_parse_basic():
    assert str(parse_word("abab")) == "abab"
    assert str(parse_word("a^-3 b^2")) == "AAAbb"
    assert str(parse_word("A^2b")) == "AAb"
    assert str(parse_word(" a  b ")) == "ab"
    assert str(parse_word("")) == ""


def test_parse_rejects():
    with pytest.raises(BraidWordError):
        parse_word("abx")
    with pytest.raises(BraidWordError):
        parse_word("a^0")
    with pytest.raises(BraidWordError):
        parse_word("a^")


def test_murasugi_words():
    assert str(murasugi_word(MurasugiSpec("omega4", k=1, l=2))) == "abababAA"
    assert str(murasugi_word(MurasugiSpec("omega0", k=0))) == ""
    assert str(murasugi_word(MurasugiSpec("omega6", k=1, alt=(1, 1)))) == "abababAb"
    assert str(murasugi_word(MurasugiSpec("omega3", k=1))) == "ababababa"
    assert str(murasugi_word(MurasugiSpec("omega5", k=2, l=3))) == "ab" * 6 + "bbb"


def test_murasugi_validation():
    with pytest.raises(ValueError):
        MurasugiSpec("omega4", k=1)          # missing l
    with pytest.raises(ValueError):
        MurasugiSpec("omega5", k=1, l=0)
    with pytest.raises(ValueError):
        MurasugiSpec("omega6", k=1, alt=(1,))  # odd-length exponent list
    with pytest.raises(ValueError):
        MurasugiSpec("omega6", k=1, alt=(0, 1))
    with pytest.raises(ValueError):
        MurasugiSpec("omega1", k=1, l=2)


def test_closure_meta():
    m = closure_meta(parse_word("ababab"))
    assert m.permutation == (0, 1, 2)
    assert m.components == 3
    m = closure_meta(parse_word("a"))
    assert m.components == 2 and m.n_plus == 1 and m.n_minus == 0
    # (ab)^3 a^-2 also induces the identity permutation
    m = closure_meta(parse_word("abababAA"))
    assert m.components == 3
    assert m.n_plus == 6 and m.n_minus == 2 and m.writhe == 4


def test_word_lengths_of_normal_forms():
    for k in range(1, 4):
        assert len(murasugi_word(MurasugiSpec("omega0", k=k))) == 6 * k
        assert len(murasugi_word(MurasugiSpec("omega1", k=k))) == 6 * k + 2
        assert len(murasugi_word(MurasugiSpec("omega2", k=k))) == 6 * k + 4
        assert len(murasugi_word(MurasugiSpec("omega3", k=k))) == 6 * k + 3


def test_mirror_and_rotate():
    assert str(parse_word("ab").mirror()) == "BA"
    assert str(parse_word("abA").cyclic_rotate(1)) == "bAa"
    assert str(BraidWord().mirror()) == ""


@given(words_st)
def test_mirror_involution(w):
    assert w.mirror().mirror() == w


@given(words_st, st.integers(0, 11))
def test_rotation_preserves_components(w, r):
    assert closure_meta(w).components == closure_meta(w.cyclic_rotate(r)).components


@given(words_st, st.integers(0, 11))
def test_canonical_rotation_invariant(w, r):
    assert canonical_rotation(w) == canonical_rotation(w.cyclic_rotate(r))


def test_all_words_upto_counts():
    words = all_words_upto(3)
    assert len([w for w in words if len(w) == 0]) == 1
    assert len([w for w in words if len(w) == 1]) == 4
    # necklace counts over a 4-letter alphabet
    assert len([w for w in words if len(w) == 2]) == 10
    assert len([w for w in words if len(w) == 3]) == 24


def test_read_word_file(tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("ab  # a comment\n\n# full comment\nabx\nA^2\n", encoding="utf-8")
    rows = read_word_file(f)
    assert [r[1] for r in rows] == ["ab", "abx", "A^2"]
    assert rows[0][3] is None and str(rows[0][2]) == "ab"
    assert rows[1][2] is None and "invalid" in rows[1][3]
    assert str(rows[2][2]) == "AA"
