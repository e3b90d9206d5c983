import json
import random

import pytest
from helpers import braid_words
from hypothesis import given, settings
from hypothesis import strategies as st

from kmodular import cob
from kmodular.braids import BraidWord, kh_bracket, random_braid, unknot
from kmodular.complexes import (
    PIVOT_ORDERS,
    ChainMap,
    Complex,
    Degree,
    GradedObject,
    check_complex,
    compose_maps,
    cone,
    deloop,
    equivalent,
    euler_char,
    flat_complex,
    gaussian_eliminate,
    hom_solve,
    identity_complex,
    identity_map,
    is_chain_map,
    is_contractible,
    shift,
    simplify,
    tensor,
    truncate,
)
from kmodular.rings import F2, QQ, ZZ

EMPTY = cob.empty()


def test_unknot_deloops_to_two_empty_objects():
    U = simplify(kh_bracket(unknot()))
    assert [(o.t2, o.q, o.tangle) for o in U.objects] == [(0, -1, EMPTY), (0, 1, EMPTY)]
    assert not U.diff


def test_unknot_euler_characteristic():
    assert euler_char(kh_bracket(unknot(), reduce=False)).as_dict() == {-1: 1, 1: 1}


def test_identity_euler_characteristic():
    chi = euler_char(identity_complex(3))
    assert chi.as_dict() == {0: 1} and chi.parity == 0


def test_incoherent_t_degrees_rejected():
    I = cob.identity(1)
    C = Complex([GradedObject(0, 0, I), GradedObject(1, 0, I)], {})
    with pytest.raises(ValueError):
        euler_char(C)


def test_r2_reduces_to_identity():
    R = gaussian_eliminate(kh_bracket(BraidWord(2, (1, -1)), reduce=False))
    assert [(o.t2, o.q, o.tangle) for o in R.complex.objects] == [(0, 0, cob.identity(2))]


def test_non_unit_pivot_is_left_alone_over_z():
    I = cob.identity(2)
    C = Complex([GradedObject(0, 0, I), GradedObject(2, 0, I)], {(0, 1): {0: 2}})
    R = gaussian_eliminate(C)
    assert R.reduced_over_z and len(R.complex) == 2


def test_non_unit_pivot_cancels_over_q():
    I = cob.identity(2)
    C = Complex([GradedObject(0, 0, I), GradedObject(2, 0, I)], {(0, 1): {0: 2}}, ring=QQ)
    assert gaussian_eliminate(C).complex.is_empty()


def test_minimal_complex_is_unchanged():
    U = simplify(kh_bracket(unknot()))
    assert simplify(U).objects == U.objects


def test_unknown_pivot_order():
    with pytest.raises(ValueError):
        gaussian_eliminate(identity_complex(1), order="sideways")


@settings(max_examples=40)
@given(braid_words(max_len=6))
def test_differential_squares_to_zero(w):
    assert check_complex(kh_bracket(w, reduce=False)).ok
    assert check_complex(simplify(kh_bracket(w))).ok


@settings(max_examples=500)
@given(braid_words(max_len=8))
def test_euler_characteristic_survives_reduction(w):
    C = kh_bracket(w, reduce=False)
    chi = euler_char(C)
    assert euler_char(deloop(C)) == chi
    assert euler_char(gaussian_eliminate(C).complex) == chi
    assert euler_char(simplify(C)) == chi


@settings(max_examples=25)
@given(braid_words(max_len=6), st.sampled_from(PIVOT_ORDERS[1:]), st.integers(0, 99))
def test_pivot_orders_agree(w, order, seed):
    C = kh_bracket(w, F2, reduce=False)
    assert equivalent(simplify(C), simplify(C, order, seed))


@settings(max_examples=25)
@given(braid_words(max_len=6))
def test_witness_maps_split_the_reduction(w):
    R = gaussian_eliminate(kh_bracket(w, reduce=False), witnesses=True)
    assert is_chain_map(R.forward) and is_chain_map(R.backward)
    assert compose_maps(R.backward, R.forward).components == identity_map(R.complex).components


def test_hom_solve_zero_map():
    C = kh_bracket(BraidWord(2, (1,)))
    h = hom_solve(ChainMap(C, C, {}))
    assert h is not None and not h.components


def test_identity_on_a_cone_of_identity_is_nullhomotopic():
    C = kh_bracket(BraidWord(2, (1,)), reduce=False)
    assert is_contractible(cone(identity_map(C)))


def test_identity_strands_are_not_contractible():
    assert hom_solve(identity_map(identity_complex(2))) is None
    assert not is_contractible(identity_complex(2, QQ))


def test_cone_of_zero_map_is_not_contractible():
    C = identity_complex(2, QQ)
    assert not is_contractible(cone(ChainMap(C, C, {})))


def test_equivalence_basics():
    C = kh_bracket(BraidWord(3, (1, 2, 1)))
    assert equivalent(C, C)
    assert equivalent(C, kh_bracket(BraidWord(3, (2, 1, 2))))
    assert equivalent(identity_complex(2), flat_complex(cob.tl_generator(2, 1))).status == "no"


@settings(max_examples=30)
@given(braid_words(max_len=5), st.integers(-3, 3), st.integers(-3, 3))
def test_shifted_complex_is_not_equivalent(w, dt, dq):
    C = simplify(kh_bracket(w, F2))
    d = Degree(2 * dt, dq)
    if d.is_zero():
        assert equivalent(C, shift(C, d))
    else:
        assert equivalent(C, shift(C, d)).status == "no"


def test_equivalence_is_an_equivalence_relation():
    rng = random.Random(7)
    pool = [simplify(kh_bracket(random_braid(rng, 3, rng.randint(0, 5)), F2)) for _ in range(12)]
    same = [[bool(equivalent(a, b, reduced=True)) for b in pool] for a in pool]
    for i in range(len(pool)):
        assert same[i][i]
        for j in range(len(pool)):
            assert same[i][j] == same[j][i]
            for k in range(len(pool)):
                if same[i][j] and same[j][k]:
                    assert same[i][k]


def test_cone_contractible_iff_equivalence():
    C = kh_bracket(BraidWord(2, (1, -1)), QQ, reduce=False)
    R = gaussian_eliminate(C, witnesses=True)
    assert is_contractible(cone(R.forward))
    zero = ChainMap(R.complex, R.complex, {})
    assert not is_contractible(cone(zero))


def test_tensor_window():
    A = kh_bracket(BraidWord(2, (1, 1)), window=6)
    B = kh_bracket(BraidWord(2, (1, 1, 1)), window=4)
    assert A.t_range() == (-2, 2) and B.t_range() == (-3, 3)
    # [a, b] x [c, d] -> top min(a + d, b + c)
    assert tensor(A, B).window == min(-2 + 4, 6 - 3)


def test_bracket_window_is_the_requested_one():
    # the truncation must follow the total lift, not the running one
    assert kh_bracket(BraidWord(2, (1,) * 8), window=8).window == 8


def test_truncate_keeps_lower_objects():
    C = simplify(kh_bracket(BraidWord(2, (1,) * 4)))
    T = truncate(C, 0)
    assert all(o.t2 <= 0 for o in T.objects) and T.window == 0


@settings(max_examples=25)
@given(braid_words(max_len=6), st.sampled_from([ZZ, QQ, F2]))
def test_json_round_trip_is_byte_identical(w, ring):
    C = kh_bracket(w, ring, reduce=False)
    text = json.dumps(C.to_json(), sort_keys=True)
    assert json.dumps(Complex.from_json(json.loads(text)).to_json(), sort_keys=True) == text
