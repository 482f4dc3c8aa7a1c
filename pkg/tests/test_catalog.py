import pytest

from maptc.catalog import Interval, SpaceId, UnsupportedSpace, cat_of, lookup, parse_space, tc_of
from maptc.graded import sphere, torus, zero_divisor_cuplength


@pytest.mark.parametrize(
    "literal, tc, cat",
    [
        ("pt", 0, 0),
        ("S^1", 1, 1),
        ("S^2", 2, 1),
        ("S^3", 1, 1),
        ("S^4", 2, 1),
        ("T^3", 3, 3),
        ("Z^2", 2, 2),
        ("graph(b1=0)", 0, 0),
        ("graph(b1=1)", 1, 1),
        ("graph(b1=4)", 2, 1),
        ("F(1)", 1, 1),
        ("F(3)", 2, 1),
        ("hyp(cd=2)", 4, 2),
    ],
)
def test_catalog_values(literal, tc, cat):
    assert tc_of(literal) == Interval.exact(tc)
    assert cat_of(literal) == Interval.exact(cat)


@pytest.mark.parametrize(
    "literal", ["pt", "S^0", "S^5", "T^0", "T^7", "graph(b1=2)", "F(2)", "Z^4", "hyp(cd=3)"]
)
def test_str_parse_roundtrip(literal):
    assert str(parse_space(literal)) == literal


def test_cat_tc_inequalities_hold_everywhere():
    spaces = [SpaceId("Point")]
    for n in range(1, 9):
        spaces += [SpaceId("Sphere", n), SpaceId("Torus", n), SpaceId("Graph", n), SpaceId("FreeGroup", n)]
        spaces += [SpaceId("FreeAbelian", n)]
    spaces += [SpaceId("HyperbolicGroup", n) for n in range(2, 6)]
    for s in spaces:
        c, t = cat_of(s).lo, tc_of(s).lo
        assert c <= t <= 2 * c, s


def test_catalog_agrees_with_cup_length_lower_bound():
    for n in range(1, 6):
        assert zero_divisor_cuplength(sphere(n)) <= tc_of(f"S^{n}").lo
    for n in range(1, 4):
        assert zero_divisor_cuplength(torus(n)) == tc_of(f"T^{n}").lo


def test_source_tags():
    assert lookup("S^3", "TC")[1] == "theorem"
    assert lookup("S^2", "TC")[1] == "external-standard"
    assert lookup("T^2", "cat")[1] == "theorem"


@pytest.mark.parametrize("bad", ["RP^3", "S^", "K(Z,2)", ""])
def test_unknown_literals(bad):
    with pytest.raises(UnsupportedSpace):
        parse_space(bad)


def test_invalid_parameters():
    with pytest.raises(UnsupportedSpace):
        tc_of("S^0")
    with pytest.raises(ValueError):
        SpaceId("HyperbolicGroup", 1)
    with pytest.raises(UnsupportedSpace):
        lookup("S^2", "MTC")
    with pytest.raises(ValueError):
        Interval(3, 1)
