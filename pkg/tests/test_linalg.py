import random

import pytest
from helpers import leibniz_det
from hypothesis import given
from hypothesis import strategies as st

from kmodular.linalg import LinearSystem, determinant
from kmodular.rings import F2, QQ, ZZ

square = st.integers(0, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


@given(square)
def test_determinant_matches_permutation_expansion(m):
    assert determinant(m, QQ) == leibniz_det(m)


@given(square)
def test_determinant_mod_two(m):
    assert determinant(m, F2) == leibniz_det(m) % 2


def test_needs_a_field():
    with pytest.raises(ValueError):
        LinearSystem(ZZ)


def test_inconsistent_system():
    s = LinearSystem(QQ)
    s.add_equation({"x": 1, "y": 1}, 1)
    s.add_equation({"x": 2, "y": 2}, 3)
    assert s.solve() is None


@given(st.integers(0, 2**32), st.sampled_from([QQ, F2]))
def test_random_solutions_satisfy_every_equation(seed, ring):
    rng = random.Random(seed)
    nvars = rng.randint(1, 6)
    truth = {v: rng.randint(-3, 3) for v in range(nvars)}
    rows = []
    s = LinearSystem(ring)
    for _ in range(rng.randint(1, 6)):
        row = {v: rng.randint(-2, 2) for v in range(nvars) if rng.random() < 0.6}
        rhs = sum(c * truth[v] for v, c in row.items())
        rows.append((row, rhs))
        s.add_equation(row, rhs)
    sol = s.solve(rng=rng)
    assert sol is not None
    for row, rhs in rows:
        got = sum(c * sol.get(v, 0) for v, c in row.items())
        assert (got - rhs) % 2 == 0 if ring is F2 else got == rhs
