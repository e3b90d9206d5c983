"""Hypothesis strategies and small independent oracles shared by the tests."""

from itertools import permutations

from hypothesis import strategies as st

from kmodular import cob
from kmodular.braids import BraidWord, SlicedTangle


@st.composite
def braid_words(draw, min_strands=2, max_strands=3, max_len=8):
    n = draw(st.integers(min_strands, max_strands))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i))),
                            max_size=max_len))
    return BraidWord(n, tuple(letters))


def flat_tangles(n):
    return st.sampled_from(cob.matchings(n, n))


def leibniz_det(m):
    """Permutation expansion, for cross-checking elimination."""
    n = len(m)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = -1 if inv % 2 else 1
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


def count_loops(a, b):
    """Circles of ``a`` closed against ``b`` (shared boundary), by union-find."""
    parent = list(range(a.npoints))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in (a, b):
        for p, q in t.pairs:
            parent[find(p)] = find(q)
    return len({find(x) for x in range(a.npoints)})


def random_sliced(rng, max_slices=6):
    """A random valid sliced tangle with crossings, cups and caps."""
    n = rng.randint(1, 3)
    start = n
    slices = []
    for _ in range(rng.randint(1, max_slices)):
        options = ["cup"] if n < 2 else ["X+", "X-", "cup", "cap"] if n < 4 else ["X+", "X-", "cap"]
        kind = rng.choice(options)
        if kind == "cup":
            slices.append((kind, rng.randint(1, n + 1)))
            n += 2
        elif kind == "cap":
            slices.append((kind, rng.randint(1, n - 1)))
            n -= 2
        else:
            slices.append((kind, rng.randint(1, n - 1)))
    return SlicedTangle(start, tuple(slices))
