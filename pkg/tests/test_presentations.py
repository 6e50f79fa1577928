import pytest

from matpres.freealg import parse_poly, sigma, swap
from matpres.presentations import (PresentationSyntaxError, guralnick, kassabov, kassabov_mod,
                                   parse_presentation, preset, two_relation_variant)
from matpres.rings import ZZ, IntegerModRing


def rels(pr):
    return {r.format(pr.names) for r in pr.relations}


def P(s, ring=ZZ):
    return parse_poly(s, ("x", "y"), ring)


@pytest.mark.parametrize("pr,expected", [
    (kassabov(2), {"x^2", "y^2", "y*x + x*y - 1"}),
    (kassabov(3), {"x^3", "y^3", "y^2*x^2 + x*y - 1"}),
    (kassabov_mod(2, 3), {"x^2", "y^2", "4*y*x + x*y - 1"}),
    (kassabov_mod(3, 2), {"x^3", "y^3", "3*y^2*x^2 + x*y - 1"}),
    (two_relation_variant(2), {"-y^2 + x^2", "y*x + x*y - 1"}),
    (two_relation_variant(3), {"-y^3 + x^3", "y^2*x^2 + x*y - 1"}),
])
def test_catalog(pr, expected):
    assert rels(pr) == expected
    assert pr.ring == ZZ


def test_guralnick():
    for p in (2, 3):
        pr = guralnick(p)
        F = IntegerModRing(p)
        assert pr.ring == F
        assert set(pr.relations) == {P(f"y^{p} - 1", F), P(f"x^{p} - x", F), P("x*y - y*x - y", F)}


@pytest.mark.parametrize("call", [lambda: kassabov(1), lambda: kassabov_mod(2, 1), lambda: kassabov_mod(1, 3),
                                  lambda: guralnick(4), lambda: guralnick(1), lambda: two_relation_variant(1)])
def test_parameter_errors(call):
    with pytest.raises(ValueError):
        call()


@pytest.mark.parametrize("n", range(2, 7))
def test_sigma_and_swap(n):
    pr = kassabov(n)
    # sigma (reverse + swap) is an anti-automorphism fixing the relation set
    assert {sigma(r) for r in pr.relations} == set(pr.relations)
    # the letter swap gives the relation set of the automorphism remark
    remark = {P(f"y^{n}"), P(f"x^{n}"), P(f"y*x + x^{n - 1}*y^{n - 1} - 1")}
    assert {swap(r) for r in pr.relations} == remark


def test_mod_presentation_stays_integral():
    pr = kassabov_mod(3, 5)
    assert pr.ring == ZZ
    assert pr.relations[2].coefficient(P("y^2*x^2").leading_word()) == 6


def test_parse_examples():
    assert parse_presentation("ring Z; gens x y; rel x^2; rel y^2; rel x*y + y*x - 1") == kassabov(2)
    text = "ring F2; gens x y; rel y^2 - 1; rel x^2 - x; rel x*y - y*x - y"
    assert parse_presentation(text) == guralnick(2)
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("rel x^")


def test_parse_error_positions():
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation("ring Z\ngens x y\nrel x^")
    assert e.value.line == 3
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation("ring Z; gens x y; rel x*q")
    assert e.value.line == 1 and e.value.column == 25
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("ring Q; gens x y")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("ring Z; gens x x")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("ring Z; gens x y; frob x")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens x y")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("ring Z; gens x y; rel x - x")


def test_comments_and_whitespace():
    text = "# K2\n  ring   Z  # integers\ngens x  y\n\nrel x^2 ; rel y^2\nrel x*y+y*x-1\n"
    assert parse_presentation(text) == kassabov(2)


@pytest.mark.parametrize("pr", [kassabov(2), kassabov(4), kassabov_mod(3, 7), guralnick(2), guralnick(5),
                                two_relation_variant(3)])
def test_round_trip(pr):
    assert parse_presentation(pr.to_text()) == pr
    assert parse_presentation(pr.to_text(oneline=True)) == pr


def test_other_alphabets():
    pr = parse_presentation("ring Z/6; gens g0 g1 g2; rel g0*g1 - g2; rel 7*g2")
    assert pr.nvars == 3 and len(pr.relations) == 2
    assert pr.relations[1] == parse_poly("g2", pr.names, IntegerModRing(6))
    assert parse_presentation(pr.to_text()) == pr


def test_presets():
    assert preset("kassabov:3") == kassabov(3)
    assert preset("kassabov-mod:2,3") == kassabov_mod(2, 3)
    for bad in ("nope:1", "kassabov", "kassabov:a", "kassabov-mod:2"):
        with pytest.raises(ValueError):
            preset(bad)
