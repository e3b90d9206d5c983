"""Sparse exact linear systems over Q and F2.

Rows are dicts ``{variable: coefficient}``; variables are arbitrary hashable
keys, ordered through an explicit index assigned on first use.  Elimination is
incremental and keeps each pivot row's pivot as its smallest variable index,
which keeps fill-in low for the block-structured systems that come out of
chain-map equations.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .rings import QQ, Ring


class LinearSystem:
    def __init__(self, ring: Ring = QQ):
        if not ring.is_field:
            raise ValueError("LinearSystem needs a field; solve over Q and check integrality instead")
        self.ring = ring
        self.index: dict = {}
        self.keys: list = []
        self.pivots: dict[int, tuple[dict[int, object], object]] = {}
        self.consistent = True

    def var(self, key) -> int:
        i = self.index.get(key)
        if i is None:
            i = len(self.keys)
            self.index[key] = i
            self.keys.append(key)
        return i

    def _norm(self, x):
        return x % 2 if self.ring.name == "F2" else x

    def add_equation(self, coeffs: dict, rhs=0) -> None:
        """Add ``sum coeffs[key] * x[key] = rhs``."""
        row: dict[int, object] = {}
        for key, c in coeffs.items():
            c = self._norm(c)
            if c:
                i = self.var(key)
                v = self._norm(row.get(i, 0) + c)
                if v:
                    row[i] = v
                else:
                    row.pop(i, None)
        self._insert(row, self._norm(rhs))

    def _insert(self, row: dict, rhs) -> None:
        f2 = self.ring.name == "F2"
        pivots = self.pivots
        while True:
            hit = [i for i in row if i in pivots]
            if not hit:
                break
            p = min(hit)
            c = row[p]
            prow, prhs = pivots[p]
            for i, x in prow.items():
                v = row.get(i, 0) - c * x
                if f2:
                    v %= 2
                if v:
                    row[i] = v
                else:
                    del row[i]
            rhs = rhs - c * prhs
            if f2:
                rhs %= 2
        if not row:
            if rhs:
                self.consistent = False
            return
        p = min(row)
        c = row[p]
        if c != 1:
            inv = 1 if f2 else 1 / Fraction(c)
            row = {i: x * inv for i, x in row.items()}
            rhs = rhs * inv
        pivots[p] = (row, rhs)

    def solve(self, free_values=None, rng: random.Random | None = None) -> dict | None:
        """A solution as ``{key: value}`` or ``None`` if inconsistent.

        Free variables are set to zero, or drawn from ``rng`` (small integers,
        or bits over F2) when given, which samples the solution affine space.
        """
        if not self.consistent:
            return None
        f2 = self.ring.name == "F2"
        values: dict[int, object] = {}
        for i in range(len(self.keys)):
            if i not in self.pivots:
                if free_values is not None and self.keys[i] in free_values:
                    values[i] = free_values[self.keys[i]]
                elif rng is not None:
                    values[i] = rng.randint(0, 1) if f2 else rng.randint(-50, 50)
                else:
                    values[i] = 0
        for p in sorted(self.pivots, reverse=True):
            row, rhs = self.pivots[p]
            v = rhs
            for i, x in row.items():
                if i != p:
                    v = v - x * values[i]
            values[p] = v % 2 if f2 else v
        return {self.keys[i]: v for i, v in values.items()}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nvars(self) -> int:
        return len(self.keys)


def determinant(matrix: list[list], ring: Ring = QQ):
    """Exact determinant by fraction-free elimination (or mod 2)."""
    n = len(matrix)
    if n == 0:
        return 1
    f2 = ring.name == "F2"
    m = [[(x % 2 if f2 else Fraction(x)) for x in row] for row in matrix]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det = det * pv
        for r in range(col + 1, n):
            if m[r][col]:
                fac = m[r][col] / pv if not f2 else 1
                for k in range(col, n):
                    m[r][k] = m[r][k] - fac * m[col][k]
                    if f2:
                        m[r][k] %= 2
    return det % 2 if f2 else det
