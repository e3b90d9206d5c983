"""Braid words, sliced tangle diagrams and their Khovanov brackets.

A braid word is read bottom to top: ``kh(u v) = kh(u) (x) kh(v)`` with ``u``
below.  ``s_i`` is the positive crossing of strands ``i`` and ``i+1``.  Its
complex is ``I -> e_i`` (saddle); a negative crossing is ``e_i -> I``.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import cob
from .complexes import (
    Complex,
    Degree,
    GradedObject,
    equivalent,
    gaussian_eliminate,
    identity_complex,
    shift,
    tensor,
    truncate,
)
from .rings import ZZ, Ring

# --------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class BraidWord:
    """Letters are nonzero ints: ``+i`` for ``s_i``, ``-i`` for its inverse."""

    strands: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"letter {x} out of range for {self.strands} strands")

    @classmethod
    def parse(cls, text: str, strands: int | None = None) -> "BraidWord":
        """Parse ``"s1 s2^-1 s1"``; the strand count defaults to the largest index + 1."""
        letters = []
        for tok in text.replace(",", " ").split():
            m = re.fullmatch(r"s(\d+)(\^(-?1))?", tok)
            if not m:
                raise ValueError(f"bad braid letter {tok!r}")
            i = int(m.group(1))
            letters.append(-i if m.group(3) == "-1" else i)
        if strands is None:
            strands = max((abs(x) for x in letters), default=0) + 1
        return cls(strands, tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"s{abs(x)}" + ("^-1" if x < 0 else "") for x in self.letters) or "1"

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("strand mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        if k < 0:
            return self.inverse() ** (-k)
        return BraidWord(self.strands, self.letters * k)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    @property
    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def permutation(self) -> tuple:
        """Where each bottom position ends up on top."""
        pos = list(range(self.strands))    # pos[strand] = current position
        at = list(range(self.strands))     # at[position] = strand
        for x in self.letters:
            i = abs(x) - 1
            a, b = at[i], at[i + 1]
            at[i], at[i + 1] = b, a
            pos[a], pos[b] = i + 1, i
        return tuple(pos)


def q_braid(n: int) -> BraidWord:
    """``s_{n-1} ... s_1``."""
    if n < 1:
        raise ValueError("n >= 1")
    return BraidWord(n, tuple(range(n - 1, 0, -1)))


def full_twist(n: int) -> BraidWord:
    return q_braid(n) ** n


def cable(w: BraidWord, c: int) -> BraidWord:
    """Replace every strand by ``c`` parallel strands (blackboard framing)."""
    if c < 1:
        raise ValueError("cable width must be positive")
    if c == 1:
        return w
    letters: list[int] = []
    for x in w.letters:
        p0 = (abs(x) - 1) * c
        block = []
        for r in range(1, c + 1):
            start = p0 + c - r + 1
            block.extend(range(start, start + c))
        if x < 0:
            block = [-y for y in reversed(block)]
        letters.extend(block)
    return BraidWord(w.strands * c, tuple(letters))


def random_braid(rng: random.Random, strands: int, length: int) -> BraidWord:
    return BraidWord(strands, tuple(rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)))


# --------------------------------------------------------------------------
# sliced tangles


SLICE_KINDS = ("X+", "X-", "cup", "cap", "id")


@dataclass(frozen=True)
class SlicedTangle:
    """Elementary slices bottom to top; ``(kind, i)`` with 1-indexed positions."""

    start: int
    slices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "slices", tuple((k, int(i)) for k, i in self.slices))
        n = self.start
        for kind, i in self.slices:
            if kind not in SLICE_KINDS:
                raise ValueError(f"unknown slice {kind!r}")
            if kind in ("X+", "X-") and not 1 <= i < n:
                raise ValueError(f"crossing {i} out of range on {n} strands")
            if kind == "cap":
                if not 1 <= i < n:
                    raise ValueError(f"cap {i} out of range on {n} strands")
                n -= 2
            elif kind == "cup":
                if not 1 <= i <= n + 1:
                    raise ValueError(f"cup {i} out of range on {n} strands")
                n += 2

    @property
    def end(self) -> int:
        n = self.start
        for kind, _ in self.slices:
            n += 2 if kind == "cup" else -2 if kind == "cap" else 0
        return n

    @classmethod
    def from_braid(cls, w: BraidWord) -> "SlicedTangle":
        return cls(w.strands, tuple(("X+" if x > 0 else "X-", abs(x)) for x in w.letters))

    def then(self, other: "SlicedTangle") -> "SlicedTangle":
        if self.end != other.start:
            raise ValueError("boundary mismatch")
        return SlicedTangle(self.start, self.slices + other.slices)

    def crossings(self) -> tuple[int, int]:
        pos = sum(1 for k, _ in self.slices if k == "X+")
        neg = sum(1 for k, _ in self.slices if k == "X-")
        return pos, neg

    def to_json(self) -> dict:
        return {"start": self.start, "slices": [list(s) for s in self.slices]}

    @classmethod
    def from_json(cls, data: dict) -> "SlicedTangle":
        return cls(data["start"], tuple(tuple(s) for s in data["slices"]))


def as_sliced(t: SlicedTangle | BraidWord) -> SlicedTangle:
    return t if isinstance(t, SlicedTangle) else SlicedTangle.from_braid(t)


def closure(w: BraidWord) -> SlicedTangle:
    """Plat-free braid closure as a (0, 0) tangle: nested cups, the braid, nested caps."""
    n = w.strands
    slices = [("cup", k + 1) for k in range(n)]
    slices += [("X+" if x > 0 else "X-", abs(x)) for x in w.letters]
    slices += [("cap", n - r) for r in range(n)]
    return SlicedTangle(0, tuple(slices))


def unknot() -> SlicedTangle:
    return SlicedTangle(0, (("cup", 1), ("cap", 1)))


def kink(sign: int = 1, strands: int = 1, at: int = 1) -> SlicedTangle:
    """A curl on strand ``at``: right partial trace of one crossing."""
    return SlicedTangle(strands, (("cup", at + 1), ("X+" if sign > 0 else "X-", at), ("cap", at + 1)))


def ribbon_flipper(n: int, sign: int = 1) -> SlicedTangle:
    """Full twist of ``n`` framed strands: ``T_n`` with a curl on every strand."""
    body = SlicedTangle.from_braid(full_twist(n) if sign > 0 else full_twist(n).inverse())
    for j in range(1, n + 1):
        body = body.then(kink(sign, n, j))
    return body


# --------------------------------------------------------------------------
# crossing conventions


@dataclass(frozen=True)
class Convention:
    """Gradings of the two resolutions of each crossing sign.

    The stored degrees are the defaults chosen so that R2 and R3 hold with no
    shift and the unknot evaluates to ``q + q^-1``.
    """

    name: str = "standard"
    pos_identity: Degree = Degree(-1, 0)
    pos_turnback: Degree = Degree(1, 1)
    neg_turnback: Degree = Degree(-1, -1)
    neg_identity: Degree = Degree(1, 0)

    def manifest(self) -> dict:
        out = {"name": self.name}
        for key in ("pos_identity", "pos_turnback", "neg_turnback", "neg_identity"):
            d = getattr(self, key)
            out[key] = [d.t2, d.q]
        return out

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.manifest(), sort_keys=True).encode()).hexdigest()[:16]


STANDARD = Convention()
# negative control: the negative crossing's q-grading is off by one
CORRUPTED = Convention("corrupted", neg_turnback=Degree(-1, 0), neg_identity=Degree(1, 1))


def crossing_complex(n: int, i: int, sign: int, ring: Ring = ZZ, convention: Convention = STANDARD) -> Complex:
    ident, turn = cob.identity(n), cob.tl_generator(n, i)
    if sign > 0:
        a, da, b, db = ident, convention.pos_identity, turn, convention.pos_turnback
    else:
        a, da, b, db = turn, convention.neg_turnback, ident, convention.neg_identity
    objs = [GradedObject(da.t2, da.q, a), GradedObject(db.t2, db.q, b)]
    return Complex(objs, {(0, 1): {0: 1}}, None, ring)


def slice_complex(n: int, kind: str, i: int, ring: Ring = ZZ, convention: Convention = STANDARD) -> Complex:
    if kind == "X+":
        return crossing_complex(n, i, 1, ring, convention)
    if kind == "X-":
        return crossing_complex(n, i, -1, ring, convention)
    if kind == "cup":
        return Complex([GradedObject(0, 0, cob.cup(n, i))], {}, None, ring)
    if kind == "cap":
        return Complex([GradedObject(0, 0, cob.cap(n, i))], {}, None, ring)
    return identity_complex(n, ring)


def kh_bracket(t: SlicedTangle | BraidWord, ring: Ring = ZZ, convention: Convention = STANDARD,
               window: int | None = None, reduce: bool = True, start: Complex | None = None) -> Complex:
    """Khovanov bracket by iterated tensoring of slice complexes.

    ``window`` truncates at that ``t2`` (the result then carries it as its
    window).  Each slice is tensored in with its lowest object moved to
    ``t2 = 0`` and the total shift is undone at the end.
    ``start`` replaces the identity complex at the bottom.
    """
    st = as_sliced(t)
    n = st.start
    acc = start if start is not None else identity_complex(n, ring)
    if start is not None and start.top != n:
        raise ValueError("start complex does not match the diagram")
    pieces = []
    lift = Degree()
    for kind, i in st.slices:
        piece = slice_complex(n, kind, i, ring, convention)
        low = piece.lowest() or 0
        lift = lift + Degree(-low, 0)
        pieces.append(shift(piece, Degree(-low, 0)))
        n = piece.top
    # partial products only move up from here, so truncating at the final
    # lift loses nothing below the requested window
    for piece in pieces:
        acc = tensor(acc, piece)
        if window is not None:
            acc = truncate(acc, window + lift.t2)
        if reduce:
            acc = gaussian_eliminate(acc).complex
    return shift(acc, -lift)


# --------------------------------------------------------------------------
# Reidemeister and centrality checks


def center_commute_check(n: int, i: int, ring: Ring = ZZ, categorified: bool = True) -> dict:
    """``s_i T_n`` versus ``T_n s_i``: permutations and (for small n) complexes."""
    if not 1 <= i < n:
        raise ValueError("1 <= i < n")
    s = BraidWord(n, (i,))
    T = full_twist(n)
    perm_ok = (s * T).permutation() == (T * s).permutation()
    out = {"permutation": perm_ok}
    if categorified and n <= 3:
        eq = equivalent(kh_bracket(s * T, ring), kh_bracket(T * s, ring))
        out["complex"] = eq.status
    out["ok"] = perm_ok and out.get("complex", "yes") == "yes"
    return out


# --------------------------------------------------------------------------
# modular group shadow


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> "IntMatrix2":
        out = IDENTITY2
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "IntMatrix2":
        dt = self.det()
        if dt not in (1, -1):
            raise ValueError("not invertible over Z")
        return IntMatrix2(self.d * dt, -self.b * dt, -self.c * dt, self.a * dt)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY2 = IntMatrix2(1, 0, 0, 1)
GENERATOR_IMAGES = {1: IntMatrix2(1, 1, 0, 1), 2: IntMatrix2(1, 0, -1, 1)}


def braid_to_psl2z(w: BraidWord) -> IntMatrix2:
    if w.strands != 3:
        raise ValueError("the modular-group image needs 3 strands")
    out = IDENTITY2
    for x in w.letters:
        m = GENERATOR_IMAGES[abs(x)]
        out = out @ (m if x > 0 else m.inverse())
    return out


def free_reduce(letters: Sequence[int]) -> tuple:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _braid_moves(word: tuple) -> Iterable[tuple]:
    n = len(word)
    for k in range(n - 1):
        x, y = word[k], word[k + 1]
        if abs(abs(x) - abs(y)) >= 2:
            yield word[:k] + (y, x) + word[k + 2:]
    for k in range(n - 2):
        x, y, z = word[k:k + 3]
        if x == z and abs(abs(x) - abs(y)) == 1 and (x > 0) == (y > 0):
            yield word[:k] + (y, x, y) + word[k + 3:]


def braid_class(word: Sequence[int], budget: int = 100_000) -> tuple[set, bool]:
    """Words reachable by braid and far-commutation moves; ``(words, complete)``."""
    start = free_reduce(word)
    seen = {start}
    todo = deque([start])
    while todo:
        w = todo.popleft()
        for v in _braid_moves(w):
            if v not in seen:
                if len(seen) >= budget:
                    return seen, False
                seen.add(v)
                todo.append(v)
    return seen, True


def normal_form(word: Sequence[int], budget: int = 100_000) -> tuple | None:
    """Lexicographically least word in the move class, or ``None`` on budget exhaustion."""
    cls, complete = braid_class(word, budget)
    return min(cls) if complete else None


def psl2z_relation_report(budget: int = 100_000) -> dict:
    a = BraidWord(3, (1, 2, 1))
    b = BraidWord(3, (1, 2))
    T = full_twist(3)
    minus = IntMatrix2(-1, 0, 0, -1)
    words = {"a^2": a ** 2, "b^3": b ** 3, "T3": T}
    mats = {k: braid_to_psl2z(w) for k, w in words.items()}
    perms = {k: w.permutation() for k, w in words.items()}
    forms = {k: normal_form(w.letters, budget) for k, w in words.items()}
    if any(f is None for f in forms.values()):
        rewrite = "timeout"
    else:
        rewrite = "equal" if len(set(forms.values())) == 1 else "different"
    return {
        "matrices": {k: m.rows() for k, m in mats.items()},
        "matrices_minus_identity": all(m == minus for m in mats.values()),
        "permutations_equal": len(set(perms.values())) == 1,
        "rewrite": rewrite,
        "normal_form": None if rewrite != "equal" else list(forms["T3"]),
        "ok": all(m == minus for m in mats.values()) and len(set(perms.values())) == 1 and rewrite == "equal",
    }
