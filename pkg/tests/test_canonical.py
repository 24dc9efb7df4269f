import pytest
from hypothesis import given, settings, strategies as st

from symcrystal.canonical import Canonical, scale_element, verify_balanced, verify_bar, verify_form
from symcrystal.cartan import parse_datum
from symcrystal.scalars import ONE, ZERO, RatFunc, SubringTag, qpow
from symcrystal.shuffle import VAC_MINUS, VAC_PLUS, ShuffleVec, op_E
from symcrystal.vtheta import VTheta, build_crystal

VP, VM = ShuffleVec.word(VAC_PLUS), ShuffleVec.word(VAC_MINUS)


@pytest.fixture(scope="module")
def cn():
    return Canonical(VTheta(parse_datum("ainf", 2)))


def test_form_examples(cn):
    assert cn.bilinear_form(VP, VP) == ONE
    assert cn.bilinear_form(VP, VM) == ZERO
    a, b = ShuffleVec.word((1,)), ShuffleVec.word((-1,))
    assert cn.bilinear_form(a, a) == ONE
    assert cn.bilinear_form(a, b) == ZERO


def test_bar_examples(cn):
    assert cn.bar(VP) == VP and cn.bar(VM) == VM
    assert cn.bar(ShuffleVec.word((1,))) == ShuffleVec.word((1,))
    u = ShuffleVec.word((1,), qpow(2))
    assert cn.bar(u) == ShuffleVec.word((1,), qpow(-2))


def test_gram_blocks(cn):
    for w in (((1, 2),), ((1, 1), (3, 1))):
        gb = cn.gram(w)
        assert gb.symmetric and gb.nonsingular


@pytest.mark.parametrize("datum", ["ainf", "aff:2"])
def test_form_and_bar_depth2(datum):
    d = parse_datum(datum, 2)
    c = Canonical(VTheta(d))
    for rep in (verify_form(c, 2, exhaustive=True), verify_bar(c, 2)):
        assert rep.ok, [x.to_dict() for x in rep.failed()]


@pytest.fixture(scope="module")
def gb3():
    g = build_crystal(parse_datum("ainf", 3), 3)
    c = Canonical(g.vt)
    return g, c, c.global_basis_all(g)


def test_global_basis_examples(gb3):
    g, c, els = gb3
    vp = g.node_by_path((VAC_PLUS, ())).id
    assert els[vp].vector == VP and els[vp].accepted
    n1 = g.node_by_path((VAC_PLUS, (1,))).id
    assert els[n1].vector == ShuffleVec.word((1,))


def test_global_basis_depth3(gb3):
    g, c, els = gb3
    assert len(els) == len(g.nodes)
    bad = [e.to_dict() for e in els.values() if not e.accepted]
    assert not bad
    rep = verify_balanced(c, g, els)
    assert rep.ok, [x.to_dict() for x in rep.failed()]


def test_near_orthonormal_observed(gb3):
    g, c, els = gb3
    rep = verify_balanced(c, g, els, depth=2)
    a, b = rep.stats["near_orthonormal_pairs"].split("/")
    assert int(b) > 0 and int(a) <= int(b)


def test_scaled_element_detected(gb3):
    g, c, els = gb3
    target = g.node_by_path((VAC_PLUS, (1,))).id
    rep = verify_balanced(c, g, scale_element(els, target), depth=2)
    assert not rep.ok
    names = {x.name for x in rep.failed()}
    assert "lattice_coords_in_A0" in names or "reduces_to_identity" in names
    assert all(x.witness for x in rep.failed())


coeffs = st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), min_size=1, max_size=3).map(RatFunc.laurent)


@settings(max_examples=25, deadline=None)
@given(st.lists(coeffs, min_size=1, max_size=3))
def test_bar_semilinear_on_combinations(cn, cs):
    comp = cn.vt.component(((1, 1), (3, 1)))
    u = ShuffleVec()
    for c, v in zip(cs, comp.vectors):
        u = u + v.scale(c)
    bu = cn.bar(u)
    assert cn.bar(bu) == u
    for i in cn.d.letters:
        assert op_E(cn.d, i, bu) == cn.bar(op_E(cn.d, i, u))
