import pytest

from kmodular.braids import CORRUPTED, BraidWord, full_twist, kink
from kmodular.complexes import Degree
from kmodular.report import FAIL, PASS
from kmodular.rings import F2, QQ
from kmodular.tl import LaurentA
from kmodular.verify import (
    Phase,
    braid_bridge_check,
    diagram_phase,
    framing_check,
    modular_decat_checks,
    oracle_report,
    r1_shift,
    random_bridge_checks,
    shift_phase,
    verify_modular,
    verify_reidemeister,
)

A = LaurentA.monomial(1, 1)


def test_phase_arithmetic():
    i = Phase(1, LaurentA.monomial(1, 0))
    assert i * i == Phase(0, LaurentA.monomial(-1, 0))
    y = Phase(1, LaurentA.monomial(1, 3))
    assert y * y.inverse() == Phase(0, LaurentA.monomial(1, 0))


def test_shift_phase_of_a_full_step():
    # t^1 q^0 carries the sign of one homological step
    assert shift_phase(Degree(2, 0)) == Phase(0, LaurentA.monomial(-1, 0))
    assert shift_phase(Degree(0, 1)) == Phase(0, LaurentA.monomial(-1, -2))


def test_r1_shift_bridges_to_the_curl_factor():
    s = r1_shift(1)
    c = diagram_phase(kink(1))
    # kink bracket is -A^3 on the strand, the complex is a shifted strand
    assert shift_phase(s) == c * Phase(0, LaurentA.monomial(-1, 3))


def test_reidemeister_pipeline():
    rep = verify_reidemeister(3)
    assert rep.exit_code == 0 and rep.summary()["pass"] == len(rep.checks)


def test_corrupted_convention_is_caught():
    rep = verify_reidemeister(2, convention=CORRUPTED)
    assert rep.exit_code == 2
    assert any(c.status == FAIL and c.name.startswith("R2") for c in rep.checks)


@pytest.mark.parametrize("ring", [QQ, F2])
def test_bridge_over_fields(ring):
    assert braid_bridge_check(BraidWord(3, (1, -2, 1)), ring).status == PASS


def test_random_bridge_checks():
    assert all(random_bridge_checks(25, seed=3))


def test_framing_of_the_cabled_twist():
    assert framing_check(1).status == PASS


def test_decategorified_monomials_for_one_strand():
    # ratio of the framed twist eigenvalues, big over small cubed
    _, _, values = modular_decat_checks(1)
    assert values == {1: LaurentA.monomial(1, -6), 3: LaurentA.monomial(1, 6)}


def test_decategorified_two_strand_cables():
    checks, _, _ = modular_decat_checks(2)
    assert checks and all(checks)


@pytest.mark.parametrize("k", [1, 3])
def test_modular_pipeline(k):
    rep = verify_modular(1, k, 6)
    main = rep.checks[0]
    assert rep.exit_code == 0
    assert main.status == PASS and main.detail["j"] == 1
    assert any(c.name == "sh bridges to the oracle monomial" and c.status == PASS for c in rep.checks)


def test_modular_pipeline_scope():
    with pytest.raises(ValueError):
        verify_modular(2, 0, 4)


@pytest.mark.parametrize("kind,n", [("jones-wenzl", 4), ("through-projectors", 3), ("modular-decat", 1),
                                    ("bracket", 3), ("matrices", 3)])
def test_oracle_reports(kind, n):
    assert oracle_report(kind, n, word="s1 s2^-1").exit_code == 0


def test_unknown_oracle():
    with pytest.raises(ValueError):
        oracle_report("tea-leaves", 3)


def test_full_twist_diagram_phase_exists():
    assert diagram_phase(full_twist(3)) is not None
