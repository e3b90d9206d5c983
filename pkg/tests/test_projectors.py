import json
from pathlib import Path

import pytest

from kmodular import cob
from kmodular.braids import BraidWord
from kmodular.complexes import (
    Complex,
    Degree,
    GradedObject,
    certified_limit,
    equivalent,
    flat_complex,
    identity_complex,
    is_chain_map,
    truncate,
)
from kmodular.projectors import (
    SUPPORTED,
    BudgetExceeded,
    ProjectorComplex,
    cable_destination,
    check_drag_through,
    check_idempotent,
    check_kill,
    check_kills_all,
    check_normalization,
    check_through_degree,
    clear_memory_cache,
    derive_twist_shift,
    higher_projector,
    killed_diagrams,
    match_shift,
    projection_to_identity,
    universal_projector,
)
from kmodular.report import FAIL, INCONCLUSIVE, PASS, VACUOUS
from kmodular.rings import F2, QQ
from kmodular.verify import projector_bridge_check, twist_shift_checks

GOLDEN = Path(__file__).parent / "golden" / "P2-trunc8.json"


@pytest.fixture
def fresh():
    clear_memory_cache()
    yield
    clear_memory_cache()


def test_golden_p2_is_byte_identical(fresh):
    P = universal_projector(2, 8)
    assert json.dumps(P.to_json(), sort_keys=True, indent=1) + "\n" == GOLDEN.read_text()


def test_golden_p2_agrees_with_a_deeper_build(fresh):
    P = ProjectorComplex.from_json(json.loads(GOLDEN.read_text()))
    deep = universal_projector(2, 12)
    lim = certified_limit(P.base)
    assert equivalent(truncate(P.base, lim), truncate(deep.base, lim))


def test_p2_has_one_turnback_per_degree():
    P = universal_projector(2, 8)
    lim = certified_limit(P.base)
    objs = [(o.t2, o.q, o.tangle) for o in P.base.objects if o.t2 <= lim]
    e = cob.tl_generator(2, 1)
    assert objs == [(0, 0, cob.identity(2))] + [(t2, t2 - 1, e) for t2 in range(2, lim + 1, 2)]


@pytest.mark.parametrize("nk", sorted(SUPPORTED))
def test_normalization_and_through_degree(nk):
    P = higher_projector(*nk, 4)
    assert check_normalization(P).status == PASS
    assert check_through_degree(P).status == PASS


def test_p2_kills_the_turnback():
    P = universal_projector(2, 6)
    res = check_kill(P, cob.tl_generator(2, 1))
    assert res.status == PASS and res.upto >= 12


def test_identity_is_not_a_kill_target():
    with pytest.raises(ValueError):
        check_kill(universal_projector(2, 2), cob.identity(2))


def test_p33_kills_every_other_diagram():
    P = universal_projector(3, 4)
    assert len(killed_diagrams(3, 3)) == 4
    res = check_kills_all(P)
    assert all(r.status == PASS for r in res) and min(r.upto for r in res) >= 8


def test_p31_has_nothing_smaller_to_kill():
    [res] = check_kills_all(higher_projector(3, 1, 2))
    assert res.status == VACUOUS


def test_p20_kills_nothing_below_it():
    assert killed_diagrams(2, 0) == []


def test_idempotence_and_orthogonality():
    P, Q = universal_projector(2, 4), higher_projector(2, 0, 4)
    assert check_idempotent(P, P).status == PASS
    assert check_idempotent(Q, Q).status == PASS
    assert check_idempotent(P, Q).status == PASS
    assert check_idempotent(Q, P).status == PASS


def test_orthogonality_on_three_strands():
    P, Q = universal_projector(3, 4), higher_projector(3, 1, 4)
    res = check_idempotent(P, Q)
    assert res.status == PASS and res.upto >= 8


def test_projection_to_identity_is_a_chain_map():
    assert is_chain_map(projection_to_identity(universal_projector(3, 3).base))


def test_projection_needs_a_normalized_projector():
    with pytest.raises(ValueError):
        projection_to_identity(flat_complex(cob.tl_generator(2, 1)))


@pytest.mark.parametrize("ring", [QQ, F2])
def test_projectors_over_fields(ring):
    P = universal_projector(2, 4, ring)
    assert check_kill(P, cob.tl_generator(2, 1)).status == PASS


# the frozen shifts are matched against the oracle's twist eigenvalues in
# test_twist_shifts_bridge_to_eigenvalues
TWIST_SHIFTS = {
    (1, 1): Degree(-1, -1),
    (2, 2): Degree(-4, -2),
    (2, 0): Degree(0, 2),
    (3, 3): Degree(-9, -3),
    (3, 1): Degree(-1, 3),
}


@pytest.mark.parametrize("nk", sorted(TWIST_SHIFTS))
def test_framed_twist_shifts(nk):
    plus = derive_twist_shift(*nk, 1)
    minus = derive_twist_shift(*nk, -1)
    assert plus.degree == TWIST_SHIFTS[nk]
    assert minus.degree == -TWIST_SHIFTS[nk]


@pytest.mark.parametrize("nk", sorted(TWIST_SHIFTS))
def test_twist_shifts_bridge_to_eigenvalues(nk):
    checks, _ = twist_shift_checks(*nk)
    assert all(checks), [c.detail for c in checks]


@pytest.mark.parametrize("nk", sorted(SUPPORTED))
def test_projector_bridge(nk):
    assert projector_bridge_check(higher_projector(*nk, 4)).status == PASS


def test_drag_through():
    w = BraidWord(3, (2, 1))
    assert cable_destination(w, 1, 2) == 2
    res = check_drag_through(universal_projector(2, 4), w, 1)
    assert res.status == PASS


def test_drag_through_negative_control():
    # a turnback also slides through crossings, so the control changes the side
    w = BraidWord(3, (2, 1))
    e = flat_complex(cob.tl_generator(2, 1))
    res = check_drag_through(universal_projector(2, 4), w, 1, above=e)
    assert res.status == FAIL


def test_strands_must_travel_as_a_cable():
    with pytest.raises(ValueError):
        cable_destination(BraidWord(3, (1,)), 1, 2)


def test_single_strand_drag_is_vacuous():
    assert check_drag_through(universal_projector(1, 2), BraidWord(3, (1, 2)), 1).status == VACUOUS


def test_match_shift_refuses_an_empty_window():
    I = cob.identity(1)
    X = Complex([GradedObject(10, 0, I)], {}, window=4)
    s, eq = match_shift(X, identity_complex(1))
    assert s == Degree(10, 0) and eq.status == INCONCLUSIVE


def test_disk_cache_round_trip(tmp_path, fresh):
    P = universal_projector(2, 3, cache=tmp_path)
    [path] = tmp_path.glob("*.json")
    clear_memory_cache()
    Q = universal_projector(2, 3, cache=tmp_path)
    assert Q is not P and Q.to_json() == P.to_json()
    assert json.loads(path.read_text())["n"] == 2


def test_budget(fresh):
    with pytest.raises(BudgetExceeded):
        universal_projector(3, 4, budget_states=2)


def test_unsupported_label():
    with pytest.raises(ValueError):
        higher_projector(4, 2, 2)


def test_memory_hit_still_fills_a_new_cache_directory(tmp_path, fresh):
    universal_projector(2, 3)
    universal_projector(2, 3, cache=tmp_path)
    assert len(list(tmp_path.glob("P2-2-t3-*.json"))) == 1
