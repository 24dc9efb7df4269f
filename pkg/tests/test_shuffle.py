import pytest
from hypothesis import given, settings, strategies as st

from symcrystal.cartan import parse_datum
from symcrystal.scalars import ONE, RatFunc, parse_ratfunc, qpow
from symcrystal.shuffle import (VAC_MINUS, VAC_PLUS, ShuffleVec, SupportOverflow, F_compact, F_expanded,
                                check_relations, enumerate_words, is_homogeneous, op_E, op_F, op_K, op_K_inv,
                                orbit_weight, parse_word, serre_F, shuffle_insert, sigma, weight_shift)

D = parse_datum("ainf:5")
settings.register_profile("shuffle", max_examples=40, deadline=None)
settings.load_profile("shuffle")


def vec(**kw):
    return ShuffleVec({parse_word(f"[{k}]"): parse_ratfunc(v) for k, v in kw.items()})


def oracle_F(d, i, w):
    # compact formula by hand: <i>*w + q^{(alpha_i, wt(sigma w))} sigma(w)*<theta i>; wt = -sum of letters
    if w == VAC_PLUS:
        return ShuffleVec.word((i,))
    if w == VAC_MINUS:
        return ShuffleVec.word((d.theta(i),))
    out = {}

    def add(u, e):
        out.setdefault(u, {}).setdefault(e, 0)
        out[u][e] += 1
    for nu in range(len(w) + 1):
        add(w[:nu] + (i,) + w[nu:], -sum(d.pair(i, x) for x in w[:nu]))
    sw = w[:-1] + (d.theta(w[-1]),)
    ti = d.theta(i)
    base = -sum(d.pair(i, x) for x in sw)
    for nu in range(len(sw) + 1):
        add(sw[:nu] + (ti,) + sw[nu:], base - sum(d.pair(ti, x) for x in sw[nu:]))
    return ShuffleVec({u: RatFunc.laurent(c) for u, c in out.items()})


def test_pinned_F():
    got = op_F(D, 1, ShuffleVec.word((1,)))
    want = vec(**{"1,1": "1+q^-2", "-1,-1": "q+q^-1"})
    assert got == want
    assert got.to_string() == "((q^2+1)/q^2) * [1,1] + ((q^2+1)/q) * [-1,-1]"


def test_pinned_K():
    got = op_K(D, 1, ShuffleVec.word((1,)))
    assert got == ShuffleVec.word((-1,), qpow(-1))
    assert got.to_string() == "(1/q) * [-1]"
    assert op_K(D, 1, ShuffleVec.word((3,))) == ShuffleVec.word((-3,), qpow(1))
    assert op_K(D, 1, ShuffleVec.word(VAC_PLUS)) == ShuffleVec.word(VAC_MINUS)


def test_actions_on_vacua():
    assert op_F(D, 1, ShuffleVec.word(VAC_PLUS)) == ShuffleVec.word((1,))
    assert op_F(D, 1, ShuffleVec.word(VAC_MINUS)) == ShuffleVec.word((-1,))
    assert op_E(D, 1, ShuffleVec.word((1,))) == ShuffleVec.word(VAC_PLUS)
    assert op_E(D, 1, ShuffleVec.word((-1,))) == ShuffleVec.word(VAC_MINUS)
    assert not op_E(D, 1, ShuffleVec.word((3, 1)))
    assert op_E(D, 3, ShuffleVec.word((3, 1))) == ShuffleVec.word((1,))


def test_insert_examples():
    assert shuffle_insert(D, 1, (1,)) == vec(**{"1,1": "1+q^-2"})
    assert shuffle_insert(D, 1, (3,)) == vec(**{"1,3": "1", "3,1": "q"})
    assert shuffle_insert(D, 1, VAC_PLUS) == ShuffleVec.word((1,))


def test_sigma():
    assert sigma(D, ShuffleVec.word((1, 1))) == ShuffleVec.word((1, -1))
    assert sigma(D, ShuffleVec.word(VAC_PLUS)) == ShuffleVec.word(VAC_MINUS)


def test_orbit_weight():
    assert orbit_weight(D, (1, -1)) == ((1, 2),)
    assert orbit_weight(D, (1, 3)) == ((1, 1), (3, 1))
    assert orbit_weight(D, VAC_MINUS) == ()
    assert weight_shift(((1, 1),), 1, -1) == ()
    assert weight_shift((), 1, -1) is None


def test_support_overflow():
    with pytest.raises(SupportOverflow):
        op_F(D, 7, ShuffleVec.word((1,)))


@pytest.mark.parametrize("datum", ["ainf:5", "aff:2", "aff:4"])
def test_F_against_hand_oracle(datum):
    d = parse_datum(datum)
    for w in enumerate_words(d, 3):
        for i in d.letters:
            assert op_F(d, i, ShuffleVec.word(w)) == oracle_F(d, i, w), (w, i)


@pytest.mark.parametrize("datum", ["ainf:5", "aff:2"])
def test_expanded_matches_compact(datum):
    d = parse_datum(datum)
    for w in enumerate_words(d, 3):
        for i in d.letters:
            assert F_expanded(d, i, w) == F_compact(d, i, w)


def test_relation_examples():
    vp = ShuffleVec.word(VAC_PLUS)
    lhs = op_E(D, -1, op_F(D, 1, vp))
    assert lhs == ShuffleVec.word(VAC_MINUS)
    assert lhs == op_F(D, 1, op_E(D, -1, vp)).scale(qpow(1)) + op_K(D, -1, vp)


def test_relations_small():
    rep = check_relations(parse_datum("ainf:3"), 2)
    assert rep.ok, rep.to_dict()
    assert check_relations(parse_datum("aff:2"), 3).ok


letters = st.sampled_from(D.letters[:4])
words = st.lists(letters, min_size=0, max_size=3).map(lambda w: tuple(w) if w else VAC_PLUS)
coeffs = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), min_size=1, max_size=2).map(RatFunc.laurent)


@st.composite
def homogeneous(draw):
    w = draw(words)
    if w == VAC_PLUS:
        return ShuffleVec({VAC_PLUS: draw(coeffs), VAC_MINUS: draw(coeffs)})
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        # permute and theta-flip letters to stay in the same orbit weight
        perm = draw(st.permutations(w))
        flips = draw(st.lists(st.booleans(), min_size=len(w), max_size=len(w)))
        u = tuple(D.theta(x) if f else x for x, f in zip(perm, flips))
        terms[u] = draw(coeffs)
    return ShuffleVec(terms)


@given(homogeneous(), letters, letters)
def test_EF_relation(v, i, j):
    lhs = op_E(D, i, op_F(D, j, v))
    rhs = op_F(D, j, op_E(D, i, v)).scale(qpow(-D.pair(i, j)))
    if i == j:
        rhs = rhs + v
    if D.theta(i) == j:
        rhs = rhs + op_K(D, i, v)
    assert lhs == rhs


@given(homogeneous(), letters, letters)
def test_K_properties(v, i, j):
    assert op_K(D, i, op_K(D, j, v)) == op_K(D, j, op_K(D, i, v))
    assert op_K(D, D.theta(i), v) == op_K(D, i, v)
    assert op_K_inv(D, i, op_K(D, i, v)) == v


@given(homogeneous(), letters)
def test_homogeneity_and_sigma(v, i):
    for op in (op_E, op_F, op_K):
        assert is_homogeneous(D, op(D, i, v))
        assert sigma(D, op(D, i, v)) == op(D, i, sigma(D, v))
    assert sigma(D, sigma(D, v)) == v


@given(homogeneous())
def test_F_serre(v):
    for i, j in [(1, 3), (3, 1), (1, -1), (-1, 3)]:
        assert not serre_F(D, i, j, v)
