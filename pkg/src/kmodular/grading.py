"""Cyclic quotients of the bigrading and equivalence up to a repeated shift.

A :class:`QuotientGrading` is the subgroup of ``1/2 Z x Z`` generated by one
degree ``g``; degrees are compared through canonical coset representatives.
Quotient-graded complexes keep the differential untouched and only replace
object degrees by cosets, which is all the coset model of the quotient
category needs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braids import STANDARD, Convention
from .complexes import Complex, Degree, equivalent, shift, simplify
from .projectors import ShiftSpec, derive_twist_shift, lowest_degree
from .rings import ZZ, Ring


@dataclass(frozen=True)
class QuotientGrading:
    """Relation ``t^(t_half_steps/2) q^q_steps = 1``; the generator is stored with
    a nonnegative leading entry so equal subgroups compare equal."""

    t_half_steps: int
    q_steps: int

    def __post_init__(self):
        a, b = self.t_half_steps, self.q_steps
        if a < 0 or (a == 0 and b < 0):
            object.__setattr__(self, "t_half_steps", -a)
            object.__setattr__(self, "q_steps", -b)

    @classmethod
    def generated_by(cls, g: Degree) -> "QuotientGrading":
        return cls(g.t2, g.q)

    @property
    def generator(self) -> Degree:
        return Degree(self.t_half_steps, self.q_steps)

    @property
    def trivial(self) -> bool:
        return self.t_half_steps == 0 and self.q_steps == 0

    def canonical(self, d: Degree) -> Degree:
        a, b = self.t_half_steps, self.q_steps
        if a:
            j = d.t2 // a
        elif b:
            j = d.q // b
        else:
            return d
        return Degree(d.t2 - j * a, d.q - j * b)

    def multiple(self, d: Degree) -> int | None:
        """``j`` with ``d = j * g``, or ``None``."""
        return multiple_of(d, self.generator)

    def to_json(self) -> dict:
        return {"tHalfSteps": self.t_half_steps, "qSteps": self.q_steps}

    @classmethod
    def from_json(cls, data: dict) -> "QuotientGrading":
        return cls(data["tHalfSteps"], data["qSteps"])


TRIVIAL = QuotientGrading(0, 0)


def multiple_of(d: Degree, gen: Degree) -> int | None:
    if gen == Degree():
        return 0 if d == Degree() else None
    j = d.t2 // gen.t2 if gen.t2 else d.q // gen.q
    return j if Degree(j * gen.t2, j * gen.q) == d else None


@dataclass(frozen=True)
class CosetDegree:
    representative: Degree
    modulus: QuotientGrading

    def __post_init__(self):
        object.__setattr__(self, "representative", self.modulus.canonical(self.representative))

    def _check(self, other: "CosetDegree") -> None:
        if self.modulus != other.modulus:
            raise ValueError("cosets of different subgroups")

    def __add__(self, other: "CosetDegree") -> "CosetDegree":
        self._check(other)
        return CosetDegree(self.representative + other.representative, self.modulus)

    def __sub__(self, other: "CosetDegree") -> "CosetDegree":
        self._check(other)
        return CosetDegree(self.representative - other.representative, self.modulus)

    def __neg__(self) -> "CosetDegree":
        return CosetDegree(-self.representative, self.modulus)

    def contains(self, d: Degree) -> bool:
        return self.modulus.canonical(d) == self.representative

    def to_json(self) -> dict:
        return {"t": self.representative.t2, "q": self.representative.q}


def project(d: Degree, g: QuotientGrading) -> CosetDegree:
    return CosetDegree(d, g)


@dataclass(frozen=True)
class QuotientComplex:
    """A complex whose object degrees live in a cyclic quotient."""

    complex: Complex
    modulus: QuotientGrading

    def degrees(self) -> list[CosetDegree]:
        return [CosetDegree(Degree(o.t2, o.q), self.modulus) for o in self.complex.objects]

    def structure(self) -> tuple:
        """Objects with coset degrees plus the differential, for structural equality."""
        objs = tuple((d.representative.t2, d.representative.q, o.tangle, o.circles)
                     for d, o in zip(self.degrees(), self.complex.objects))
        diff = tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.complex.diff.items()))
        return objs, diff

    def fiber(self, d: Degree) -> list[int]:
        """Indices of objects over the coset of ``d``: the summands of the free
        module's graded piece in that degree."""
        c = self.modulus.canonical(d)
        return [i for i, x in enumerate(self.degrees()) if x.representative == c]

    def fiber_ranks(self) -> dict:
        out: dict = {}
        for x, o in zip(self.degrees(), self.complex.objects):
            key = (x.representative.t2, x.representative.q, o.tangle)
            out[key] = out.get(key, 0) + 1
        return out

    def to_json(self) -> dict:
        data = self.complex.to_json()
        data["modulus"] = self.modulus.to_json()
        for obj, x in zip(data["objects"], self.degrees()):
            obj["t"], obj["q"] = x.representative.t2, x.representative.q
        return data


def reduce_gradings(C: Complex, g: QuotientGrading) -> QuotientComplex:
    return QuotientComplex(C, g)


def sum_formula_rank(C: Complex, g: QuotientGrading, d: Degree, tangle, span: int = 64) -> int:
    """``sum_j rank C_{d + j g}`` over the objects with ``tangle`` by direct enumeration."""
    gen = g.generator
    total = 0
    for j in range(-span, span + 1):
        e = d + Degree(j * gen.t2, j * gen.q)
        total += sum(1 for o in C.objects if o.t2 == e.t2 and o.q == e.q and o.tangle == tangle)
        if g.trivial:
            break
    return total


# --------------------------------------------------------------------------
# the shift functor and matching up to its powers


@dataclass(frozen=True)
class ShiftFunctor:
    """``sh`` for ``E_{n,k}`` together with the twist shifts it is assembled from."""

    degree: Degree
    n: int
    k: int
    big: ShiftSpec          # framed full twist on P_{3n,k}
    small: ShiftSpec        # framed full twist on P_{n,k}

    def inverse(self) -> "ShiftFunctor":
        return ShiftFunctor(-self.degree, self.n, self.k, -self.big, -self.small)

    def to_json(self) -> dict:
        return {"degree": self.degree.to_json(), "n": self.n, "k": self.k,
                "bigTwist": self.big.to_json(), "smallTwist": self.small.to_json()}


def small_label(n: int, k: int) -> int:
    """Label of the small projectors in ``E_{n,k}``; labels above ``n`` use the top one."""
    return min(k, n)


def shift_functor_sh(n: int, k: int, ring: Ring = ZZ, convention: Convention = STANDARD,
                     t_hi: int = 2, cache=None) -> ShiftFunctor:
    """``sh`` as the framed twist on ``P_{3n,k}`` minus three framed twists on ``P_{n,k}``.

    The cabled full twist is the big framed twist with the framing of each of
    the three cables undone, which gives this count.
    """
    big = derive_twist_shift(3 * n, k, 1, t_hi, ring, convention, cache)
    small = derive_twist_shift(n, small_label(n, k), 1, t_hi, ring, convention, cache)
    d = big.degree - Degree(3 * small.degree.t2, 3 * small.degree.q)
    return ShiftFunctor(d, n, k, big, small)


@dataclass(frozen=True)
class ShiftMatch:
    j: int | None
    status: str             # "yes" | "no" | "inconclusive"
    reason: str = ""
    upto: int | None = None


def equivalent_up_to_shift(C: Complex, D: Complex, gen: Degree, reduced: bool = False) -> ShiftMatch:
    """Find the unique ``j`` with ``C ~ D[j gen]``.

    Over a field reduced complexes are minimal, so the lowest objects must line
    up, which leaves at most one candidate.  It is certified by
    :func:`equivalent`; a second success would be an inconsistency.
    """
    if gen == Degree():
        raise ValueError("the generator must be nonzero")
    Cs = C if reduced else simplify(C)
    Ds = D if reduced else simplify(D)
    lc, ld = lowest_degree(Cs), lowest_degree(Ds)
    if lc is None or ld is None:
        if lc is None and ld is None:
            raise ValueError("both complexes are empty; every shift matches")
        return ShiftMatch(None, "no", "exactly one side is empty")
    j = multiple_of(lc - ld, gen)
    cands = [] if j is None else [j]
    found = []
    last = ShiftMatch(None, "no", "lowest degrees do not line up")
    for j in cands:
        shifted = shift(Ds, Degree(j * gen.t2, j * gen.q))
        eq = equivalent(Cs, shifted, reduced=True)
        if eq and eq.upto is not None and eq.upto < lc.t2:
            last = ShiftMatch(None, "inconclusive", "certified window ends below the lowest object", eq.upto)
            continue
        if eq:
            found.append((j, eq))
        elif eq.status == "inconclusive":
            last = ShiftMatch(None, "inconclusive", eq.reason, eq.upto)
        else:
            last = ShiftMatch(None, "no", eq.reason, eq.upto)
    if len(found) > 1:
        raise ArithmeticError(f"ambiguous shift: j in {[j for j, _ in found]}")
    if found:
        j, eq = found[0]
        return ShiftMatch(j, "yes", eq.reason, eq.upto)
    return last
