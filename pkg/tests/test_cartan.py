import pytest

from symcrystal.cartan import InvalidDatum, auto_radius, letter_key, make_datum, parse_datum, validate


def test_ainf_window():
    d = parse_datum("ainf:5")
    assert d.letters == (1, -1, 3, -3, 5, -5)
    assert d.pair(1, 3) == -1 and d.pair(1, -1) == -1 and d.pair(1, 5) == 0 and d.pair(3, 3) == 2
    assert d.theta(3) == -3
    assert d.orbits == (1, 3, 5)
    assert d.serre_exponent(1, 3) == 2 and d.serre_exponent(1, 5) == 1


def test_auto_radius():
    assert auto_radius(3) == 7
    assert str(parse_datum("ainf", 3)) == "ainf:7"
    assert str(parse_datum("ainf")) == "ainf:9"


def test_affine():
    d = parse_datum("aff:2")
    assert d.letters == (1, 3)
    assert d.theta(1) == 3
    assert d.pair(1, 3) == -2
    assert d.serre_exponent(1, 3) == 3
    d4 = parse_datum("aff:4")
    assert d4.letters == (1, 3, 5, 7)
    assert d4.theta(1) == 7 and d4.theta(3) == 5
    assert d4.pair(1, 7) == -1 and d4.pair(1, 5) == 0
    assert validate(d4).ok


@pytest.mark.parametrize("text", ["aff:3", "aff:0", "aff", "ainf:4", "ainf:0", "bogus", "aff:x"])
def test_rejects(text):
    with pytest.raises(InvalidDatum):
        parse_datum(text)


def test_validation_witnesses():
    with pytest.raises(InvalidDatum):
        make_datum("bad", [1, 2], lambda i, j: 2 if i == j else 0, lambda i: i)
    d = make_datum("bad", [1, 2], lambda i, j: 2 if i == j else (-1 if i < j else -2),
                   lambda i: 3 - i, check=False)
    rep = validate(d)
    assert not rep.checks["symmetric"] and rep.witnesses["symmetric"] == (1, 2)


def test_letter_order():
    assert sorted([-3, 1, 3, -1], key=letter_key) == [1, -1, 3, -3]
