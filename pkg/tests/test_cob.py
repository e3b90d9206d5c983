import pytest
from helpers import count_loops, flat_tangles
from hypothesis import given
from hypothesis import strategies as st

from kmodular import cob
from kmodular.cob import (
    FlatTangle,
    Morphism,
    basis_morphism,
    circle_count,
    compose,
    identity,
    identity_morphism,
    internal_degree,
    matchings,
    saddle,
    tl_generator,
)

CATALAN = [1, 1, 2, 5, 14, 42]


@pytest.mark.parametrize("n", range(1, 6))
def test_planar_matchings_are_catalan(n):
    assert len(matchings(n, n)) == CATALAN[n]


def test_crossing_pairs_rejected():
    # top points are numbered left to right, so this pairing crosses
    with pytest.raises(ValueError):
        FlatTangle(2, 2, [(0, 3), (1, 2)])


def test_tangles_are_interned():
    assert FlatTangle(2, 2, [(1, 0), (3, 2)]) is tl_generator(2, 1)


def test_through_degree_and_identity():
    assert identity(3).through_degree == 3 and identity(3).is_identity
    e = tl_generator(3, 1)
    assert e.through_degree == 1 and not e.is_identity


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(flat_tangles(n), flat_tangles(n))))
def test_circle_count_matches_union_find(pair):
    a, b = pair
    assert circle_count(a, b) == count_loops(a, b)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(flat_tangles(n), flat_tangles(n))))
def test_gluing_counts_closed_loops(pair):
    a, b = pair
    glued, loops = cob.glue_flat(a, b)
    assert glued.bottom == a.bottom and glued.top == b.top
    assert loops >= 0


def test_saddle_there_and_back_is_neck_cut():
    I, e = identity(2), tl_generator(2, 1)
    there, back = saddle(I, e), saddle(e, I)
    # neck cutting: the tube splits into two dotted disks
    assert compose(there, back).terms == {1: 1, 2: 1}
    assert internal_degree(compose(there, back)) == -2


def test_dot_squares_to_zero():
    e = tl_generator(2, 1)
    d = basis_morphism(e, e, [0])
    assert compose(d, d).is_zero()


def test_saddle_requires_single_surgery():
    with pytest.raises(ValueError):
        saddle(identity(2), identity(2))


def _random_morphism(draw, a, b):
    mask = draw(st.integers(0, (1 << circle_count(a, b)) - 1))
    return Morphism(a, b, {mask: draw(st.sampled_from((1, -1, 2)))})


@st.composite
def composable_triples(draw):
    n = draw(st.integers(1, 3))
    a, b, c, d = (draw(flat_tangles(n)) for _ in range(4))
    return _random_morphism(draw, a, b), _random_morphism(draw, b, c), _random_morphism(draw, c, d)


@given(composable_triples())
def test_composition_is_associative(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(composable_triples())
def test_degree_is_additive(fgh):
    f, g, _ = fgh
    gf = compose(f, g)
    if not gf.is_zero():
        assert internal_degree(gf) == internal_degree(f) + internal_degree(g)


@given(composable_triples())
def test_identity_is_neutral(fgh):
    f, _, _ = fgh
    assert compose(identity_morphism(f.source), f) == f
    assert compose(f, identity_morphism(f.target)) == f


@given(composable_triples())
def test_morphism_json_round_trip(fgh):
    f, _, _ = fgh
    back = Morphism.from_json(f.to_json(), f.source, f.target)
    assert back == f
